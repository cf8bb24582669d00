#include "narx/tensor/tensor.hpp"

#include <cmath>
#include <cstring>
#include <numeric>

#include "narx/core/error.hpp"

namespace narx {

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string shape_str(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(Shape shape, Real fill)
    : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<Real> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  require(shape_size(shape_) == data_.size(), ErrorKind::Dimension,
          "tensor data length " + std::to_string(data_.size()) +
              " does not match shape " + shape_str(shape_));
}

Tensor Tensor::vector(std::initializer_list<Real> values) {
  return Tensor({values.size()}, std::vector<Real>(values));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols,
                      std::initializer_list<Real> values) {
  return Tensor({rows, cols}, std::vector<Real>(values));
}

std::size_t Tensor::cols() const noexcept {
  if (shape_.size() <= 1) return 1;
  std::size_t c = 1;
  for (std::size_t i = 1; i < shape_.size(); ++i) c *= shape_[i];
  return c;
}

Tensor Tensor::reshaped(Shape shape) const {
  require(shape_size(shape) == data_.size(), ErrorKind::Dimension,
          "cannot reshape " + shape_str(shape_) + " to " + shape_str(shape));
  return Tensor(std::move(shape), data_);
}

bool Tensor::all_finite() const noexcept {
  for (Real v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

bool bitwise_equal(const Tensor& a, const Tensor& b) {
  return a.shape() == b.shape() &&
         std::memcmp(a.data().data(), b.data().data(),
                     a.size() * sizeof(Real)) == 0;
}

}  // namespace narx
