#pragma once

#include "asmote/nn/graph.hpp"

#include <map>
#include <string>

namespace asmote::nn {

// Reader/writer for the safetensors container: an 8-byte little-endian
// header length, a JSON header mapping tensor names to dtype/shape/offsets,
// then raw row-major data. F32 and F64 payloads are accepted on read;
// writes always use F64. The optional __metadata__ block carries string
// key-value pairs (used here to embed model configs in checkpoints).
struct TensorFile {
  std::map<std::string, Matrix> tensors;
  std::map<std::string, std::string> metadata;

  static TensorFile read(const std::string& path);
  void write(const std::string& path) const;

  const Matrix& require(const std::string& name) const;
  bool has(const std::string& name) const { return tensors.count(name) > 0; }
};

}  // namespace asmote::nn
