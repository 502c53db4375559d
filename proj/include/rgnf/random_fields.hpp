#pragma once

#include <cstdint>
#include <random>

#include "rgnf/polyvec.hpp"
#include "rgnf/spectra.hpp"

namespace rgnf {

/// Seeded generator of test systems. Identical seeds give identical
/// sequences on the same standard library.
class RandomFields {
 public:
  explicit RandomFields(std::uint64_t seed = 0) : rng_(seed) {}

  std::mt19937_64& engine() { return rng_; }
  int integer(int lo, int hi);
  double uniform(double lo, double hi);

  // p/q with |p| <= max_num, 1 <= q <= max_den.
  Rational rational(int max_num = 5, int max_den = 4);
  GaussianRational gaussian(int max_num = 5, int max_den = 4);

  // `terms` random monomials of degree in [min_degree, max_degree].
  PolyVF field(int dim, int min_degree, int max_degree, int terms);
  PolyVF field_in_VI(const DiagLinearPart& A, int min_degree, int max_degree, int terms);
  // Resonant monomials only; zero when none exist in the degree range.
  PolyVF field_in_VK(const DiagLinearPart& A, int min_degree, int max_degree, int terms);

  // Small integer multiples of i and small reals, chosen so that resonant
  // monomials of low degree exist.
  DiagLinearPart eigenvalues(int dim);

  CVector point(int dim, double radius);

 private:
  std::mt19937_64 rng_;
};

}  // namespace rgnf
