#include "asmote/nn/tensor_file.hpp"

#include "asmote/types.hpp"

#include <nlohmann/json.hpp>

#include <cstring>
#include <fstream>
#include <vector>

namespace asmote::nn {

using nlohmann::json;

namespace {

std::uint64_t read_u64_le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

void write_u64_le(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

Matrix decode(const std::string& dtype, Eigen::Index rows, Eigen::Index cols,
              const char* data, std::size_t bytes) {
  Matrix m(rows, cols);
  const std::size_t count = static_cast<std::size_t>(rows * cols);
  if (dtype == "F64") {
    if (bytes != count * 8) throw DataError("tensor payload size mismatch");
    for (std::size_t i = 0; i < count; ++i) {
      double v;
      std::memcpy(&v, data + i * 8, 8);
      m(static_cast<Eigen::Index>(i) / cols,
        static_cast<Eigen::Index>(i) % cols) = v;
    }
  } else if (dtype == "F32") {
    if (bytes != count * 4) throw DataError("tensor payload size mismatch");
    for (std::size_t i = 0; i < count; ++i) {
      float v;
      std::memcpy(&v, data + i * 4, 4);
      m(static_cast<Eigen::Index>(i) / cols,
        static_cast<Eigen::Index>(i) % cols) = static_cast<Scalar>(v);
    }
  } else {
    throw DataError("unsupported tensor dtype: " + dtype);
  }
  return m;
}

}  // namespace

TensorFile TensorFile::read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open tensor file: " + path);
  const std::uint64_t header_len = read_u64_le(in);
  if (!in || header_len == 0 || header_len > (1ull << 30))
    throw DataError("corrupt tensor file header: " + path);
  std::string header(header_len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw DataError("truncated tensor file header: " + path);

  json h;
  try {
    h = json::parse(header);
  } catch (const json::exception& e) {
    throw DataError("bad tensor file header json in " + path + ": " +
                    e.what());
  }

  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());

  TensorFile out;
  for (auto& [name, entry] : h.items()) {
    if (name == "__metadata__") {
      for (auto& [k, v] : entry.items())
        out.metadata[k] = v.get<std::string>();
      continue;
    }
    const std::string dtype = entry.at("dtype").get<std::string>();
    if (dtype == "I64" || dtype == "I32" || dtype == "U8" || dtype == "BOOL")
      continue;  // index buffers (e.g. position_ids); not model weights
    if (dtype == "F16" || dtype == "BF16")
      throw DataError("tensor " + name + " is " + dtype +
                      "; convert the checkpoint to F32 first");
    const auto shape = entry.at("shape").get<std::vector<std::int64_t>>();
    const auto offsets =
        entry.at("data_offsets").get<std::vector<std::uint64_t>>();
    if (offsets.size() != 2 || offsets[1] < offsets[0] ||
        offsets[1] > data.size())
      throw DataError("bad data offsets for tensor " + name + " in " + path);
    Eigen::Index rows = 1, cols = 1;
    if (shape.size() == 1) {
      cols = static_cast<Eigen::Index>(shape[0]);
    } else if (shape.size() == 2) {
      rows = static_cast<Eigen::Index>(shape[0]);
      cols = static_cast<Eigen::Index>(shape[1]);
    } else if (!shape.empty()) {
      throw DataError("tensor " + name + " has rank > 2; not supported");
    }
    out.tensors[name] =
        decode(dtype, rows, cols, data.data() + offsets[0],
               static_cast<std::size_t>(offsets[1] - offsets[0]));
  }
  return out;
}

void TensorFile::write(const std::string& path) const {
  json h = json::object();
  if (!metadata.empty()) {
    json meta = json::object();
    for (const auto& [k, v] : metadata) meta[k] = v;
    h["__metadata__"] = meta;
  }
  std::uint64_t offset = 0;
  for (const auto& [name, m] : tensors) {
    const std::uint64_t bytes =
        static_cast<std::uint64_t>(m.rows() * m.cols()) * 8;
    h[name] = {{"dtype", "F64"},
               {"shape", {m.rows(), m.cols()}},
               {"data_offsets", {offset, offset + bytes}}};
    offset += bytes;
  }
  const std::string header = h.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write tensor file: " + path);
  write_u64_le(out, header.size());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const auto& [name, m] : tensors) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        double v = m(r, c);
        out.write(reinterpret_cast<const char*>(&v), 8);
      }
    }
  }
  if (!out) throw DataError("failed writing tensor file: " + path);
}

const Matrix& TensorFile::require(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end())
    throw DataError("tensor file is missing tensor: " + name);
  return it->second;
}

}  // namespace asmote::nn
