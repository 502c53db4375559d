#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace rgnf {

inline constexpr int kMaxDim = 16;

/// Exponent vector q = (q_1, ..., q_n) of the monomial x_1^q_1 ... x_n^q_n.
/// Stored densely; ordering is graded lexicographic (degree first, then the
/// exponent vector compared left to right).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int dim);
  MultiIndex(std::initializer_list<int> exps);
  explicit MultiIndex(std::span<const int> exps);

  static MultiIndex unit(int dim, int var);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int operator[](int var) const { return exps_[var]; }
  std::vector<int> to_vector() const;

  MultiIndex operator+(const MultiIndex& other) const;
  // Requires (*this)[var] > 0.
  MultiIndex lowered(int var) const;
  // Same exponents embedded into a larger ambient dimension.
  MultiIndex widened(int dim) const;

  // x^q at a complex point; x.size() must equal dim().
  std::complex<double> eval(std::span<const std::complex<double>> x) const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.dim_ == b.dim_ && a.exps_ == b.exps_;
  }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
    return a.exps_ < b.exps_;
  }

 private:
  void set(int var, int exponent);

  std::uint8_t dim_ = 0;
  std::uint16_t degree_ = 0;
  std::array<std::uint16_t, kMaxDim> exps_{};
};

// All exponent vectors in `dim` variables of total degree exactly `degree`,
// in graded lexicographic order.
std::vector<MultiIndex> monomials_of_degree(int dim, int degree);

}  // namespace rgnf
