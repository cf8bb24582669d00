#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace narx {

// Element type of every tensor. The library is built in f32; a second f64
// build of the same sources exists only so gradient checks can use finite
// differences without f32 cancellation noise.
#ifdef NARX_REAL_DOUBLE
using Real = double;
#else
using Real = float;
#endif

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_str(const Shape& shape);

/// Dense row-major array. Plain value type: copies are deep.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, Real fill = Real(0));
  Tensor(Shape shape, std::vector<Real> data);

  static Tensor scalar(Real v) { return Tensor({1}, std::vector<Real>{v}); }
  static Tensor vector(std::initializer_list<Real> values);
  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::initializer_list<Real> values);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  /// Leading dimension (1 for rank-0).
  std::size_t rows() const noexcept { return shape_.empty() ? 1 : shape_[0]; }
  /// Product of trailing dimensions.
  std::size_t cols() const noexcept;

  std::span<Real> data() noexcept { return data_; }
  std::span<const Real> data() const noexcept { return data_; }
  std::vector<Real>& storage() noexcept { return data_; }
  const std::vector<Real>& storage() const noexcept { return data_; }

  Real& operator[](std::size_t i) { return data_[i]; }
  Real operator[](std::size_t i) const { return data_[i]; }
  Real& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  Real at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  std::span<Real> row(std::size_t r) { return {data_.data() + r * cols(), cols()}; }
  std::span<const Real> row(std::size_t r) const {
    return {data_.data() + r * cols(), cols()};
  }

  Tensor reshaped(Shape shape) const;
  bool all_finite() const noexcept;

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_;
  std::vector<Real> data_;
};

/// Bitwise comparison (distinguishes -0 from +0 and compares NaN payloads).
bool bitwise_equal(const Tensor& a, const Tensor& b);

}  // namespace narx
