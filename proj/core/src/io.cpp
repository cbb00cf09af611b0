#include "nematic/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "nematic/errors.hpp"

namespace nematic {

const char* to_string(ProblemKind kind) noexcept {
  switch (kind) {
    case ProblemKind::Uniform: return "uniform";
    case ProblemKind::Twist: return "twist";
    case ProblemKind::Nano: return "nano";
    case ProblemKind::Custom: return "custom";
  }
  return "unknown";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& v, int line, const std::string& key) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (v.empty() || r.ec != std::errc() || r.ptr != end || !std::isfinite(out)) {
    throw ConfigError(line, key + ": expected a real number, got '" + v + "'");
  }
  return out;
}

long long parse_integer(const std::string& v, int line, const std::string& key) {
  long long out = 0;
  const char* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (v.empty() || r.ec != std::errc() || r.ptr != end) {
    throw ConfigError(line, key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

Vec3 parse_vec3(const std::string& v, int line, const std::string& key) {
  std::string s = v;
  for (char& c : s) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(s);
  std::vector<std::string> parts;
  for (std::string t; in >> t;) parts.push_back(t);
  if (parts.size() != 3) throw ConfigError(line, key + ": expected three components");
  Vec3 out(parse_real(parts[0], line, key), parse_real(parts[1], line, key),
           parse_real(parts[2], line, key));
  if (!(out.norm() > 1e-12)) throw ConfigError(line, key + ": direction must be non-zero");
  return out;
}

void require(bool ok, int line, const std::string& msg) {
  if (!ok) throw ConfigError(line, msg);
}

MaterialParams default_material(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Twist: return problem_twist().material;
    case ProblemKind::Nano: return problem_nano().material;
    default: return problem_uniform().material;
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Config parse_config(const std::string& text) {
  Config cfg;
  std::map<std::string, int> seen;
  bool k1 = false, k2 = false, k3 = false;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    require(eq != std::string::npos, line, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string val = trim(body.substr(eq + 1));
    require(!key.empty(), line, "missing key");
    require(!seen.count(key), line,
            "duplicate key '" + key + "' (first set on line " +
                std::to_string(seen.count(key) ? seen[key] : 0) + ")");
    seen[key] = line;

    if (key == "problem") {
      if (val == "uniform") cfg.problem = ProblemKind::Uniform;
      else if (val == "twist") cfg.problem = ProblemKind::Twist;
      else if (val == "nano") cfg.problem = ProblemKind::Nano;
      else if (val == "custom") cfg.problem = ProblemKind::Custom;
      else throw ConfigError(line, "problem: expected uniform, twist, nano or custom, got '" + val + "'");
    } else if (key == "K1" || key == "K2" || key == "K3") {
      const double k = parse_real(val, line, key);
      require(k > 0.0, line, key + " must be positive");
      if (key == "K1") { cfg.K1 = k; k1 = true; }
      if (key == "K2") { cfg.K2 = k; k2 = true; }
      if (key == "K3") { cfg.K3 = k; k3 = true; }
    } else if (key == "coarse_n") {
      const long long n = parse_integer(val, line, key);
      require(n >= 1 && n <= 256, line, "coarse_n must lie in 1..256");
      cfg.coarse_n = static_cast<int>(n);
    } else if (key == "levels") {
      const long long n = parse_integer(val, line, key);
      require(n >= 1 && n <= 10, line, "levels must lie in 1..10");
      cfg.levels = static_cast<int>(n);
    } else if (key == "tol") {
      cfg.newton.tol = parse_real(val, line, key);
      require(cfg.newton.tol > 0.0, line, "tol must be positive");
    } else if (key == "omega0") {
      cfg.newton.omega0 = parse_real(val, line, key);
      require(cfg.newton.omega0 > 0.0 && cfg.newton.omega0 <= 1.0, line, "omega0 must lie in (0, 1]");
    } else if (key == "omega_step") {
      cfg.newton.omega_step = parse_real(val, line, key);
      require(cfg.newton.omega_step >= 0.0, line, "omega_step must be non-negative");
    } else if (key == "omega_max") {
      cfg.newton.omega_max = parse_real(val, line, key);
      require(cfg.newton.omega_max > 0.0 && cfg.newton.omega_max <= 1.0, line,
              "omega_max must lie in (0, 1]");
    } else if (key == "max_iters" || key == "max_iters_per_level") {
      const long long n = parse_integer(val, line, key);
      require(n >= 1 && n <= 100000, line, key + " must lie in 1..100000");
      cfg.newton.max_iters = static_cast<int>(n);
    } else if (key == "quad_order") {
      const long long n = parse_integer(val, line, key);
      require(n >= 1 && n <= 6, line, "quad_order must lie in 1..6");
      cfg.newton.quadrature_order = static_cast<int>(n);
    } else if (key == "seed") {
      const long long n = parse_integer(val, line, key);
      require(n >= 0, line, "seed must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(n);
    } else if (key == "perturbation") {
      cfg.perturbation = parse_real(val, line, key);
      require(cfg.perturbation >= 0.0 && cfg.perturbation <= 0.4, line,
              "perturbation must lie in [0, 0.4]");
    } else if (key == "output_dir") {
      require(!val.empty(), line, "output_dir must not be empty");
      cfg.output_dir = val;
    } else if (key == "bc_lower") {
      cfg.bc_lower = parse_vec3(val, line, key).normalized();
    } else if (key == "bc_upper") {
      cfg.bc_upper = parse_vec3(val, line, key).normalized();
    } else {
      throw ConfigError(line, "unknown key '" + key + "'");
    }
  }

  auto line_of = [&](const char* key) {
    const auto it = seen.find(key);
    return it == seen.end() ? 0 : it->second;
  };
  if (cfg.newton.omega0 > cfg.newton.omega_max) {
    throw ConfigError(std::max(line_of("omega0"), line_of("omega_max")),
                      "omega0 must not exceed omega_max");
  }
  if (static_cast<long long>(cfg.coarse_n) << (cfg.levels - 1) > 1024) {
    throw ConfigError(std::max(line_of("coarse_n"), line_of("levels")),
                      "finest grid would exceed 1024 cells per side");
  }
  if (cfg.newton.min_refined_iters > cfg.newton.max_iters) {
    cfg.newton.min_refined_iters = cfg.newton.max_iters;
  }
  if (cfg.problem != ProblemKind::Custom && (seen.count("bc_lower") || seen.count("bc_upper"))) {
    throw ConfigError(std::max(line_of("bc_lower"), line_of("bc_upper")),
                      "bc_lower/bc_upper apply to problem = custom only");
  }
  const MaterialParams mat = default_material(cfg.problem);
  if (!k1) cfg.K1 = mat.K1;
  if (!k2) cfg.K2 = mat.K2;
  if (!k3) cfg.K3 = mat.K3;
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ProblemSpec make_problem(const Config& cfg) {
  ProblemSpec spec;
  switch (cfg.problem) {
    case ProblemKind::Uniform: spec = problem_uniform(); break;
    case ProblemKind::Twist: spec = problem_twist(); break;
    case ProblemKind::Nano: spec = problem_nano(); break;
    case ProblemKind::Custom: spec = problem_custom({}, cfg.bc_lower, cfg.bc_upper); break;
  }
  const MaterialParams mat{cfg.K1, cfg.K2, cfg.K3, 0.0};
  const MaterialParams ref = spec.material;
  spec.material = mat;
  // An exact solution only holds for the problem's own constants.
  if (mat.K1 != ref.K1 || mat.K2 != ref.K2 || mat.K3 != ref.K3) spec.exact.reset();
  spec.coarse_n = cfg.coarse_n;
  spec.levels = cfg.levels;
  return spec;
}

GuessOptions guess_options(const Config& cfg) {
  return GuessOptions{cfg.perturbation, cfg.seed};
}

// ---------------------------------------------------------------------------

std::string format_runlog_csv(const RunLog& log) {
  std::string out = "level,grid,newton_iters,initial_residual,final_residual,min_dev,max_dev,energy\n";
  char buf[512];
  for (const auto& r : log.levels) {
    std::snprintf(buf, sizeof buf, "%d,%dx%d,%d,%.6e,%.6e,%.6e,%.6e,%.3e\n", r.level,
                  r.cells_per_side, r.cells_per_side, r.newton_iters, r.initial_residual,
                  r.final_residual, r.min_dev, r.max_dev, r.energy);
    out += buf;
  }
  if (!log.levels.empty()) {
    std::snprintf(buf, sizeof buf, "work_units,%.6e\n", log.work_units);
    out += buf;
  }
  return out;
}

void write_runlog_csv(const RunLog& log, const std::filesystem::path& path) {
  write_text(path, format_runlog_csv(log));
}

RunLog parse_runlog_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      trim(line) != "level,grid,newton_iters,initial_residual,final_residual,min_dev,max_dev,energy") {
    throw IoError("run log: missing or unexpected header");
  }
  RunLog log;
  int row = 1;
  auto real = [&](const std::string& v) {
    double out = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size()) {
      throw IoError("run log row " + std::to_string(row) + ": bad number '" + v + "'");
    }
    return out;
  };
  while (std::getline(in, line)) {
    ++row;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string t; std::getline(ls, t, ',');) f.push_back(trim(t));
    if (f.size() == 2 && f[0] == "work_units") {
      log.work_units = real(f[1]);
      continue;
    }
    if (f.size() != 8) throw IoError("run log row " + std::to_string(row) + ": expected 8 fields");
    LevelRecord r;
    r.level = static_cast<int>(real(f[0]));
    const auto x = f[1].find('x');
    if (x == std::string::npos) throw IoError("run log row " + std::to_string(row) + ": bad grid");
    r.cells_per_side = static_cast<int>(real(f[1].substr(0, x)));
    r.newton_iters = static_cast<int>(real(f[2]));
    r.initial_residual = real(f[3]);
    r.final_residual = real(f[4]);
    r.min_dev = real(f[5]);
    r.max_dev = real(f[6]);
    r.energy = real(f[7]);
    r.converged = true;
    log.levels.push_back(r);
  }
  return log;
}

RunLog read_runlog_csv(const std::filesystem::path& path) {
  return parse_runlog_csv(read_text(path));
}

// ---------------------------------------------------------------------------

std::string format_vtk(const NematicState& state) {
  const Mesh& mesh = state.mesh();
  const DofMap& dm = state.dofs();
  const int n = mesh.cells_per_side();
  const int p = static_cast<int>(dm.director_degree());
  const int nv = mesh.num_vertices();
  const int nc = mesh.num_cells();

  std::ostringstream o;
  o.precision(17);
  o << "# vtk DataFile Version 3.0\n";
  o << "nematic cells=" << n << " periodic_x=" << (mesh.periodic_x() ? 1 : 0)
    << " degree=" << p << " K1=" << state.material.K1 << " K2=" << state.material.K2
    << " K3=" << state.material.K3 << "\n";
  o << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  o << "POINTS " << nv << " double\n";
  for (const Point2& v : mesh.vertices()) o << v.x << ' ' << v.y << " 0\n";
  o << "CELLS " << nc << ' ' << 5 * nc << '\n';
  for (const auto& c : mesh.cells()) o << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
  o << "CELL_TYPES " << nc << '\n';
  for (int c = 0; c < nc; ++c) o << "9\n";

  o << "POINT_DATA " << nv << '\n';
  o << "VECTORS director double\n";
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const Vec3 d = state.director.values.segment<3>(3 * dm.node_id(p * i, p * j));
      o << d.x() << ' ' << d.y() << ' ' << d.z() << '\n';
    }
  }

  o << "CELL_DATA " << nc << '\n';
  o << "SCALARS lambda double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < nc; ++c) {
    const auto& ld = dm.cell_lambda_dofs(c);
    double sum = 0.0;
    for (const int d : ld) sum += state.lambda.values[d];
    o << sum / static_cast<double>(ld.size()) << '\n';
  }
  if (dm.director_degree() == LagrangeDegree::Q2) {
    o << "FIELD FieldData 1\n";
    o << "director_q2 27 " << nc << " double\n";
    for (int c = 0; c < nc; ++c) {
      const auto& nodes = dm.cell_nodes(c);
      for (std::size_t a = 0; a < nodes.size(); ++a) {
        const Vec3 d = state.director.values.segment<3>(3 * nodes[a]);
        o << d.x() << ' ' << d.y() << ' ' << d.z() << (a + 1 < nodes.size() ? ' ' : '\n');
      }
    }
  }
  return o.str();
}

void write_vtk(const NematicState& state, const std::filesystem::path& path) {
  write_text(path, format_vtk(state));
}

NematicState parse_vtk(const std::string& text) {
  std::istringstream in(text);
  std::string magic, title;
  std::getline(in, magic);
  std::getline(in, title);
  if (magic.rfind("# vtk DataFile", 0) != 0) throw IoError("vtk: missing DataFile header");

  int n = 0, periodic = 0, degree = 0;
  double k1 = 0, k2 = 0, k3 = 0;
  if (std::sscanf(title.c_str(), "nematic cells=%d periodic_x=%d degree=%d K1=%lf K2=%lf K3=%lf", &n,
                  &periodic, &degree, &k1, &k2, &k3) != 6) {
    throw IoError("vtk: title line does not describe a nematic field");
  }
  if (degree != 2) throw IoError("vtk: only Q2 director fields can be read back");
  if (n < 1) throw IoError("vtk: bad cell count");

  auto expect = [&](const std::string& word) {
    std::string t;
    while (in >> t) {
      if (t == word) return;
    }
    throw IoError("vtk: section '" + word + "' not found");
  };
  auto number = [&]() {
    std::string t;
    if (!(in >> t)) throw IoError("vtk: unexpected end of data");
    double v = 0.0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size()) throw IoError("vtk: bad number '" + t + "'");
    return v;
  };

  NematicState s;
  s.disc = make_discretization(build_uniform(n, periodic != 0));
  s.material = MaterialParams{k1, k2, k3, 0.0};
  const DofMap& dm = s.dofs();
  s.director = FieldVector{FieldKind::Director, Eigen::VectorXd::Zero(dm.n_director_dofs())};
  s.lambda = FieldVector{FieldKind::Lambda, Eigen::VectorXd::Zero(dm.n_lambda_dofs())};

  expect("LOOKUP_TABLE");
  std::string table;
  in >> table;
  for (int c = 0; c < dm.num_cells(); ++c) s.lambda.values[c] = number();
  expect("director_q2");
  const int comps = static_cast<int>(number());
  const int tuples = static_cast<int>(number());
  std::string type;
  in >> type;
  if (comps != 27 || tuples != dm.num_cells()) throw IoError("vtk: director_q2 has the wrong shape");
  for (int c = 0; c < dm.num_cells(); ++c) {
    for (const int node : dm.cell_nodes(c)) {
      for (int k = 0; k < 3; ++k) s.director.values[3 * node + k] = number();
    }
  }
  return s;
}

NematicState read_vtk(const std::filesystem::path& path) { return parse_vtk(read_text(path)); }

// ---------------------------------------------------------------------------

std::string format_matrix_market(const Eigen::SparseMatrix<double>& m) {
  std::ostringstream o;
  o.precision(17);
  o << "%%MatrixMarket matrix coordinate real general\n";
  o << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  // Row-major order of entries.
  const Eigen::SparseMatrix<double, Eigen::RowMajor> r = m;
  for (Eigen::Index i = 0; i < r.outerSize(); ++i) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(r, i); it; ++it) {
      o << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
  return o.str();
}

void write_matrix_market(const Eigen::SparseMatrix<double>& m, const std::filesystem::path& path) {
  write_text(path, format_matrix_market(m));
}

}  // namespace nematic
