#include "lesopt/sobol.hpp"

#include <bit>

#include "lesopt/rng.hpp"

namespace lesopt {

namespace {

constexpr int kBits = 32;

// GF(2) polynomial arithmetic on bitmasks.
std::uint64_t gf2_mod(std::uint64_t a, std::uint64_t m) {
  const int dm = 63 - std::countl_zero(m);
  while (a >= (1ULL << dm)) {
    const int da = 63 - std::countl_zero(a);
    a ^= m << (da - dm);
  }
  return a;
}

std::uint64_t gf2_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  std::uint64_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    a = gf2_mod(a, m);
  }
  return r;
}

std::uint64_t gf2_powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  base = gf2_mod(base, m);
  while (e) {
    if (e & 1) r = gf2_mulmod(r, base, m);
    base = gf2_mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

bool is_irreducible(std::uint64_t p, int degree) {
  for (int d = 1; 2 * d <= degree; ++d)
    for (std::uint64_t q = (1ULL << d); q < (2ULL << d); ++q)
      if (gf2_mod(p, q) == 0 && q != p) return false;
  return true;
}

// Primitive: irreducible and x generates the multiplicative group of
// GF(2^degree), i.e. x^((2^s-1)/q) != 1 for every prime factor q.
bool is_primitive(std::uint64_t p, int degree) {
  if ((p & 1) == 0) return false;  // needs a nonzero constant term
  if (!is_irreducible(p, degree)) return false;
  const std::uint64_t order = (1ULL << degree) - 1;
  if (gf2_powmod(2, order, p) != 1) return false;
  std::uint64_t n = order;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    if (gf2_powmod(2, order / q, p) == 1) return false;
    while (n % q == 0) n /= q;
  }
  if (n > 1 && n < order && gf2_powmod(2, order / n, p) == 1) return false;
  return true;
}

// Primitive polynomials in (degree, encoding) order; enough for 64+ dims.
std::vector<std::pair<int, std::uint64_t>> primitive_polynomials(int count) {
  std::vector<std::pair<int, std::uint64_t>> polys;
  for (int degree = 1; static_cast<int>(polys.size()) < count && degree <= 16; ++degree)
    for (std::uint64_t p = (1ULL << degree) | 1;
         p < (2ULL << degree) && static_cast<int>(polys.size()) < count; p += 2)
      if (is_primitive(p, degree)) polys.emplace_back(degree, p);
  return polys;
}

}  // namespace

SobolSequence::SobolSequence(int dim, std::uint64_t scramble_seed) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("SobolSequence: dim >= 1");
  state_.assign(dim, 0);
  shift_.assign(dim, 0);
  direction_.assign(dim, std::vector<std::uint32_t>(kBits, 0));

  // Dimension 0 is the van der Corput sequence: m_k = 1.
  for (int k = 0; k < kBits; ++k) direction_[0][k] = 1u << (kBits - 1 - k);

  if (dim > 1) {
    const auto polys = primitive_polynomials(dim - 1);
    // Initial direction values: odd m_k < 2^k. The second dimension uses the
    // canonical all-ones start; later dimensions draw theirs from a fixed
    // internal stream (part of the generator definition, not the user seed).
    Rng init_rng = make_rng(0x536f626f6cULL);
    for (int j = 1; j < dim; ++j) {
      const auto [degree, poly] = polys[j - 1];
      std::vector<std::uint32_t> m(kBits);
      for (int k = 0; k < degree; ++k) {
        if (j == 1) {
          m[k] = 1;
        } else {
          const std::uint32_t draw = static_cast<std::uint32_t>(init_rng());
          m[k] = (draw & ((1u << (k + 1)) - 1)) | 1u;
        }
      }
      for (int k = degree; k < kBits; ++k) {
        std::uint32_t val = m[k - degree] ^ (m[k - degree] << degree);
        for (int i = 1; i < degree; ++i)
          if ((poly >> (degree - i)) & 1) val ^= m[k - i] << i;
        m[k] = val;
      }
      for (int k = 0; k < kBits; ++k) direction_[j][k] = m[k] << (kBits - 1 - k);
    }
  }

  Rng rng = make_rng(scramble_seed);
  for (int j = 0; j < dim; ++j) {
    shift_[j] = static_cast<std::uint32_t>(rng());
    state_[j] = shift_[j];
  }
}

Vec SobolSequence::next() {
  constexpr double scale = 1.0 / 4294967296.0;  // 2^-32
  Vec point(dim_);
  for (int j = 0; j < dim_; ++j) point[j] = state_[j] * scale;
  const int bit = std::countr_zero(~index_);  // Gray-code flip position
  for (int j = 0; j < dim_; ++j) state_[j] ^= direction_[j][bit];
  ++index_;
  return point;
}

void SobolSequence::skip(std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) next();
}

std::vector<Vec> sobol_baseline(const BoxDomain& domain, int budget,
                                std::uint64_t rng_seed) {
  if (budget < 1) throw std::invalid_argument("sobol_baseline: budget >= 1");
  SobolSequence seq(domain.dim(), rng_seed);
  std::vector<Vec> points;
  points.reserve(budget);
  for (int i = 0; i < budget; ++i) {
    const Vec u = seq.next();
    points.push_back(domain.lower.array() +
                     (domain.upper - domain.lower).array() * u.array());
  }
  return points;
}

}  // namespace lesopt
