#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace trdecomp {

using Shape = std::vector<std::size_t>;

/// Lexicographic (first digit most significant) rank of a 1-based
/// multi-index under mixed radixes: 1 + sum_i (indices[i]-1) * prod_{j>i} radixes[j].
/// Throws DomainError when an index is outside [1, radixes[i]].
[[nodiscard]] std::size_t pi(std::span<const std::size_t> indices,
                             std::span<const std::size_t> radixes);
[[nodiscard]] std::size_t pi(std::initializer_list<std::size_t> indices,
                             std::initializer_list<std::size_t> radixes);

/// Inverse of pi: 1-based linear position to 1-based multi-index.
[[nodiscard]] std::vector<std::size_t> pi_inv(std::size_t linear,
                                              std::span<const std::size_t> radixes);

[[nodiscard]] std::size_t shape_size(std::span<const std::size_t> dims);

/// Dense d-th order array of doubles.
///
/// Storage is first-index-most-significant (row-major), so the entry at the
/// 1-based multi-index x lives at values()[pi(x, dims()) - 1]. Multi-index
/// accessors are 1-based; flat accessors are 0-based offsets.
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(Shape dims);
  DenseTensor(Shape dims, std::vector<double> values);

  [[nodiscard]] std::size_t order() const { return dims_.size(); }
  [[nodiscard]] const Shape& dims() const { return dims_; }
  [[nodiscard]] std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] const double* data() const { return values_.data(); }
  [[nodiscard]] double* data() { return values_.data(); }

  // 1-based multi-index access, bounds checked.
  [[nodiscard]] double operator()(std::span<const std::size_t> index) const;
  [[nodiscard]] double& operator()(std::span<const std::size_t> index);
  [[nodiscard]] double at(std::initializer_list<std::size_t> index) const;
  [[nodiscard]] double& at(std::initializer_list<std::size_t> index);

  // 0-based flat offset access.
  [[nodiscard]] double operator[](std::size_t offset) const { return values_[offset]; }
  [[nodiscard]] double& operator[](std::size_t offset) { return values_[offset]; }

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(double scale);

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  [[nodiscard]] std::size_t offset_of(std::span<const std::size_t> index) const;

  Shape dims_;
  std::vector<double> values_;
};

[[nodiscard]] DenseTensor operator+(DenseTensor lhs, const DenseTensor& rhs);
[[nodiscard]] DenseTensor operator-(DenseTensor lhs, const DenseTensor& rhs);
[[nodiscard]] DenseTensor operator*(double scale, DenseTensor tensor);

/// Sum over all entries of X(x) * Y(x). Dimension mismatch throws DomainError.
[[nodiscard]] double inner(const DenseTensor& x, const DenseTensor& y);

[[nodiscard]] double fnorm(const DenseTensor& x);

/// Tensor product: dims are x.dims() ++ y.dims(), entries x(i) * y(j).
[[nodiscard]] DenseTensor outer(const DenseTensor& x, const DenseTensor& y);

/// Order-1 tensor of length n with a single 1 at 1-based position j.
[[nodiscard]] DenseTensor indicator(std::size_t j, std::size_t n);

/// Largest absolute entry difference; DomainError on shape mismatch.
[[nodiscard]] double max_abs_diff(const DenseTensor& x, const DenseTensor& y);

}  // namespace trdecomp
