#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bspforge::ad {

// Dense row-major float tensor. Rank 0 is represented as shape {1}.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::int64_t> shape);  // zero-filled
  Tensor(std::vector<std::int64_t> shape, std::vector<float> values);

  static Tensor scalar(float v);
  static Tensor zeros(std::vector<std::int64_t> shape);
  static Tensor full(std::vector<std::int64_t> shape, float v);

  const std::vector<std::int64_t>& shape() const { return shape_; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  int rank() const { return static_cast<int>(shape_.size()); }
  bool is_scalar() const { return size() == 1; }

  // 2-D accessors; throw ConfigError if the tensor is not rank 2.
  std::int64_t rows() const;
  std::int64_t cols() const;
  float& at(std::int64_t r, std::int64_t c);
  float at(std::int64_t r, std::int64_t c) const;

  float* data() { return values_.data(); }
  const float* data() const { return values_.data(); }
  std::span<const float> values() const { return values_; }
  std::span<float> values() { return values_; }
  float& operator[](std::int64_t i) { return values_[static_cast<std::size_t>(i)]; }
  float operator[](std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }

  bool all_finite() const;
  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  std::string shape_str() const;

 private:
  std::vector<std::int64_t> shape_;
  std::vector<float> values_;
};

std::string shape_str(const std::vector<std::int64_t>& shape);

}  // namespace bspforge::ad
