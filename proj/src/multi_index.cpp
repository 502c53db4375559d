#include "rgnf/multi_index.hpp"

#include <algorithm>
#include <limits>

#include "rgnf/errors.hpp"

namespace rgnf {

MultiIndex::MultiIndex(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw DimensionMismatch("dimension " + std::to_string(dim) + " outside 1.." +
                            std::to_string(kMaxDim));
  dim_ = static_cast<std::uint8_t>(dim);
}

MultiIndex::MultiIndex(std::initializer_list<int> exps)
    : MultiIndex(std::span<const int>(exps.begin(), exps.size())) {}

MultiIndex::MultiIndex(std::span<const int> exps) : MultiIndex(static_cast<int>(exps.size())) {
  for (int v = 0; v < dim_; ++v) set(v, exps[v]);
}

MultiIndex MultiIndex::unit(int dim, int var) {
  MultiIndex m(dim);
  m.set(var, 1);
  return m;
}

void MultiIndex::set(int var, int exponent) {
  if (exponent < 0) throw DomainError("negative exponent");
  int deg = degree_ - exps_[var] + exponent;
  if (exponent > std::numeric_limits<std::uint16_t>::max() ||
      deg > std::numeric_limits<std::uint16_t>::max())
    throw DomainError("exponent overflow");
  exps_[var] = static_cast<std::uint16_t>(exponent);
  degree_ = static_cast<std::uint16_t>(deg);
}

std::vector<int> MultiIndex::to_vector() const {
  return std::vector<int>(exps_.begin(), exps_.begin() + dim_);
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (dim_ != other.dim_) throw DimensionMismatch("multi-index dimension mismatch");
  MultiIndex r = *this;
  for (int v = 0; v < dim_; ++v) r.set(v, exps_[v] + other.exps_[v]);
  return r;
}

MultiIndex MultiIndex::lowered(int var) const {
  MultiIndex r = *this;
  r.set(var, exps_[var] - 1);
  return r;
}

MultiIndex MultiIndex::widened(int dim) const {
  if (dim < dim_) throw DimensionMismatch("cannot narrow a multi-index");
  MultiIndex r(dim);
  for (int v = 0; v < dim_; ++v) r.set(v, exps_[v]);
  return r;
}

std::complex<double> MultiIndex::eval(std::span<const std::complex<double>> x) const {
  std::complex<double> acc(1.0, 0.0);
  for (int v = 0; v < dim_; ++v)
    for (int p = 0; p < exps_[v]; ++p) acc *= x[v];
  return acc;
}

std::vector<MultiIndex> monomials_of_degree(int dim, int degree) {
  std::vector<MultiIndex> out;
  std::vector<int> e(dim, 0);
  // Enumerate compositions of `degree` into `dim` parts.
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == dim - 1) {
      e[var] = left;
      out.emplace_back(std::span<const int>(e));
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[var] = k;
      self(self, var + 1, left - k);
    }
  };
  rec(rec, 0, degree);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rgnf
