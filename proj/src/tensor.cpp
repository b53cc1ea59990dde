#include "bspforge/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "bspforge/errors.hpp"

namespace bspforge::ad {

namespace {

std::int64_t element_count(const std::vector<std::int64_t>& shape) {
  std::int64_t n = 1;
  for (std::int64_t d : shape) {
    if (d < 0) throw ConfigError("tensor dimension must be non-negative, got " + shape_str(shape));
    n *= d;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::int64_t> shape)
    : shape_(std::move(shape)), values_(static_cast<std::size_t>(element_count(shape_)), 0.0f) {}

Tensor::Tensor(std::vector<std::int64_t> shape, std::vector<float> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (element_count(shape_) != static_cast<std::int64_t>(values_.size())) {
    throw ConfigError("tensor shape " + shape_str(shape_) + " does not match value count " +
                      std::to_string(values_.size()));
  }
}

Tensor Tensor::scalar(float v) { return Tensor({1}, {v}); }

Tensor Tensor::zeros(std::vector<std::int64_t> shape) { return Tensor(std::move(shape)); }

Tensor Tensor::full(std::vector<std::int64_t> shape, float v) {
  Tensor t(std::move(shape));
  std::fill(t.values_.begin(), t.values_.end(), v);
  return t;
}

std::int64_t Tensor::rows() const {
  if (rank() != 2) throw ConfigError("expected rank-2 tensor, got shape " + shape_str(shape_));
  return shape_[0];
}

std::int64_t Tensor::cols() const {
  if (rank() != 2) throw ConfigError("expected rank-2 tensor, got shape " + shape_str(shape_));
  return shape_[1];
}

float& Tensor::at(std::int64_t r, std::int64_t c) { return values_[static_cast<std::size_t>(r * cols() + c)]; }

float Tensor::at(std::int64_t r, std::int64_t c) const {
  return values_[static_cast<std::size_t>(r * cols() + c)];
}

bool Tensor::all_finite() const {
  for (float v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string Tensor::shape_str() const { return ad::shape_str(shape_); }

std::string shape_str(const std::vector<std::int64_t>& shape) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ", ";
    os << shape[i];
  }
  os << ")";
  return os.str();
}

}  // namespace bspforge::ad
