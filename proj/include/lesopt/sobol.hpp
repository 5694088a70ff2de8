#pragma once

#include <cstdint>
#include <vector>

#include "lesopt/types.hpp"

namespace lesopt {

// Gray-code Sobol sequence with a per-seed random digital shift. Direction
// numbers come from primitive polynomials over GF(2) generated at
// construction time (dimensions one and two use the canonical values), so the
// generator is self-contained up to 64 dimensions.
class SobolSequence {
 public:
  SobolSequence(int dim, std::uint64_t scramble_seed);

  // Next point in [0,1)^d.
  Vec next();

  void skip(std::uint64_t n);

 private:
  int dim_;
  std::uint64_t index_ = 0;
  std::vector<std::uint32_t> state_;
  std::vector<std::uint32_t> shift_;
  std::vector<std::vector<std::uint32_t>> direction_;  // [dim][bit]
};

// First `budget` points of a scrambled Sobol sequence mapped onto the box.
std::vector<Vec> sobol_baseline(const BoxDomain& domain, int budget,
                                std::uint64_t rng_seed);

}  // namespace lesopt
