#include "trdecomp/dense_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "trdecomp/errors.hpp"

namespace trdecomp {

namespace {

void check_dims(const Shape& dims) {
  if (dims.empty()) throw DomainError("tensor order must be at least 1");
  for (std::size_t n : dims) {
    if (n == 0) throw DomainError("tensor dimensions must be positive");
  }
}

void require_same_dims(const DenseTensor& x, const DenseTensor& y, const char* op) {
  if (x.dims() != y.dims()) {
    throw DomainError(std::string(op) + ": dimension mismatch");
  }
}

}  // namespace

std::size_t shape_size(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t pi(std::span<const std::size_t> indices, std::span<const std::size_t> radixes) {
  if (indices.size() != radixes.size()) {
    throw DomainError("pi: index and radix lengths differ");
  }
  std::size_t linear = 0;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 1 || indices[i] > radixes[i]) {
      throw DomainError("pi: index " + std::to_string(indices[i]) + " out of range [1, " +
                        std::to_string(radixes[i]) + "]");
    }
    linear = linear * radixes[i] + (indices[i] - 1);
  }
  return linear + 1;
}

std::size_t pi(std::initializer_list<std::size_t> indices,
               std::initializer_list<std::size_t> radixes) {
  return pi(std::span<const std::size_t>(indices.begin(), indices.size()),
            std::span<const std::size_t>(radixes.begin(), radixes.size()));
}

std::vector<std::size_t> pi_inv(std::size_t linear, std::span<const std::size_t> radixes) {
  const std::size_t total = shape_size(radixes);
  if (linear < 1 || linear > total) {
    throw DomainError("pi_inv: linear index " + std::to_string(linear) + " out of range [1, " +
                      std::to_string(total) + "]");
  }
  std::vector<std::size_t> indices(radixes.size());
  std::size_t rest = linear - 1;
  for (std::size_t i = radixes.size(); i-- > 0;) {
    indices[i] = rest % radixes[i] + 1;
    rest /= radixes[i];
  }
  return indices;
}

DenseTensor::DenseTensor(Shape dims) : dims_(std::move(dims)) {
  check_dims(dims_);
  values_.assign(shape_size(dims_), 0.0);
}

DenseTensor::DenseTensor(Shape dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values)) {
  check_dims(dims_);
  if (values_.size() != shape_size(dims_)) {
    throw DomainError("tensor value count " + std::to_string(values_.size()) +
                      " does not match product of dims " + std::to_string(shape_size(dims_)));
  }
}

std::size_t DenseTensor::offset_of(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) throw DomainError("multi-index has wrong order");
  return pi(index, dims_) - 1;
}

double DenseTensor::operator()(std::span<const std::size_t> index) const {
  return values_[offset_of(index)];
}

double& DenseTensor::operator()(std::span<const std::size_t> index) {
  return values_[offset_of(index)];
}

double DenseTensor::at(std::initializer_list<std::size_t> index) const {
  return (*this)(std::span<const std::size_t>(index.begin(), index.size()));
}

double& DenseTensor::at(std::initializer_list<std::size_t> index) {
  return (*this)(std::span<const std::size_t>(index.begin(), index.size()));
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  require_same_dims(*this, other, "operator+=");
  std::transform(values_.begin(), values_.end(), other.values_.begin(), values_.begin(),
                 std::plus<>());
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  require_same_dims(*this, other, "operator-=");
  std::transform(values_.begin(), values_.end(), other.values_.begin(), values_.begin(),
                 std::minus<>());
  return *this;
}

DenseTensor& DenseTensor::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

DenseTensor operator+(DenseTensor lhs, const DenseTensor& rhs) { return lhs += rhs; }
DenseTensor operator-(DenseTensor lhs, const DenseTensor& rhs) { return lhs -= rhs; }
DenseTensor operator*(double scale, DenseTensor tensor) { return tensor *= scale; }

double inner(const DenseTensor& x, const DenseTensor& y) {
  require_same_dims(x, y, "inner");
  return std::inner_product(x.values().begin(), x.values().end(), y.values().begin(), 0.0);
}

double fnorm(const DenseTensor& x) { return std::sqrt(inner(x, x)); }

DenseTensor outer(const DenseTensor& x, const DenseTensor& y) {
  Shape dims = x.dims();
  dims.insert(dims.end(), y.dims().begin(), y.dims().end());
  DenseTensor result(std::move(dims));
  double* out = result.data();
  for (double a : x.values()) {
    for (double b : y.values()) *out++ = a * b;
  }
  return result;
}

DenseTensor indicator(std::size_t j, std::size_t n) {
  if (n == 0 || j < 1 || j > n) {
    throw DomainError("indicator: position " + std::to_string(j) + " out of range [1, " +
                      std::to_string(n) + "]");
  }
  DenseTensor e(Shape{n});
  e[j - 1] = 1.0;
  return e;
}

double max_abs_diff(const DenseTensor& x, const DenseTensor& y) {
  require_same_dims(x, y, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) worst = std::max(worst, std::abs(x[k] - y[k]));
  return worst;
}

}  // namespace trdecomp
