#include "nematic/model.hpp"

#include <stdexcept>

namespace nematic {

void validate(const MaterialParams& mat) {
  if (!(mat.K1 > 0.0) || !(mat.K2 > 0.0) || !(mat.K3 > 0.0)) {
    throw std::invalid_argument("material: K1, K2, K3 must be strictly positive");
  }
}

}  // namespace nematic
