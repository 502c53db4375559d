#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rgnf/polyvec.hpp"

namespace testutil {

using rgnf::Complex;
using rgnf::GaussianRational;
using rgnf::MultiIndex;
using rgnf::PolyVF;
using rgnf::Rational;

inline GaussianRational gr(long re, long im = 0) { return GaussianRational(Rational(re), Rational(im)); }
inline GaussianRational q(long p, long d) { return GaussianRational(Rational(p, d)); }
inline GaussianRational iq(long p, long d) { return GaussianRational(Rational(0), Rational(p, d)); }

inline PolyVF mono(int dim, int comp, std::initializer_list<int> e, GaussianRational c) {
  std::vector<int> v(e);
  return PolyVF::monomial(comp, MultiIndex(std::span<const int>(v)), c).widened(dim);
}

inline double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testutil
