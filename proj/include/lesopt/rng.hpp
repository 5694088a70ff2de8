#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace lesopt {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives independent substreams from one master seed. Tags are folded in one
// at a time, so derive_seed(s, a, b) != derive_seed(s, b, a).
inline std::uint64_t derive_seed(std::uint64_t seed) { return splitmix64(seed); }

template <class... Rest>
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, Rest... rest) {
  return derive_seed(splitmix64(seed ^ splitmix64(tag)), rest...);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

inline Eigen::VectorXd normal_vector(int n, Rng& rng) {
  std::normal_distribution<double> dist;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

inline Eigen::MatrixXd normal_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> dist;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

inline Eigen::VectorXd uniform_vector(int n, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace lesopt
