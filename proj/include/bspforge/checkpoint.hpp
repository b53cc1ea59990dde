#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bspforge/tensor.hpp"

namespace bspforge::io {

// Container behind .bspn files: magic "BSPN", little-endian u32 format
// version, a UTF-8 JSON manifest (tensor name -> shape and byte offset into
// the payload region) terminated by a single zero byte, then raw
// little-endian float32 payloads in manifest order. Round-trips bit-exactly.
class TensorContainer {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  void put(const std::string& name, ad::Tensor t);
  const ad::Tensor& get(const std::string& name) const;
  bool contains(const std::string& name) const;
  const std::vector<std::string>& names() const { return order_; }

  void save(const std::filesystem::path& path) const;
  static TensorContainer load(const std::filesystem::path& path);

  // Manifest as it appears on disk (used by `inspect`).
  std::string manifest_json() const;

 private:
  std::vector<std::string> order_;
  std::vector<ad::Tensor> tensors_;
};

}  // namespace bspforge::io
