// Bit-exact readers and writers for the on-disk formats that connect the
// labeling engine to external feature extractors:
//
//   .igft   feature tensors: magic "IGFT", u32 version=1, u32 dtype (1=f32),
//           u32 ndim, ndim x u64 dims, row-major little-endian payload
//   .igl    label arrays: magic "IGLB", u32 version=1, u64 count,
//           u32 ignore_id, count x u32 payload
//   .ppm    binary portable pixmap, P6, maxval 255
//   .poses  text, one scan per line, 12 reals = row-major 3x4 [R|t]
//
// All multi-byte values are little-endian regardless of host byte order.
// Readers validate shape and finiteness; loaded values are immutable plain
// structs, safe to share across threads.
#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iglab/errors.hpp"

namespace iglab {

inline constexpr std::uint32_t kDefaultIgnoreId = 4294967295u;
inline constexpr std::uint32_t kIgftVersion = 1;
inline constexpr std::uint32_t kIglVersion = 1;
inline constexpr std::uint32_t kDtypeF32 = 1;

// Dense row-major float32 matrix: the carrier for point features, patch
// grids, prototype stacks, and point positions.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t dims = 0;
  std::vector<float> data;  // rows * dims

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t d)
      : rows(r), dims(d), data(r * d, 0.0f) {}

  std::span<const float> row(std::size_t r) const {
    return {data.data() + r * dims, dims};
  }
  std::span<float> row(std::size_t r) { return {data.data() + r * dims, dims}; }
};

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // 3 * width * height, row-major RGB

  const std::uint8_t* pixel(std::size_t x, std::size_t y) const {
    return pixels.data() + 3 * (y * width + x);
  }
  std::uint8_t* pixel(std::size_t x, std::size_t y) {
    return pixels.data() + 3 * (y * width + x);
  }
};

// Rigid sensor-to-world transform.
struct PoseSE3 {
  std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};  // row-major 3x3
  std::array<double, 3> translation{0, 0, 0};                 // meters

  std::array<double, 3> apply(const std::array<double, 3>& x) const {
    const auto& r = rotation;
    return {r[0] * x[0] + r[1] * x[1] + r[2] * x[2] + translation[0],
            r[3] * x[0] + r[4] * x[1] + r[5] * x[2] + translation[1],
            r[6] * x[0] + r[7] * x[1] + r[8] * x[2] + translation[2]};
  }

  // Inverse transform (rotation is orthonormal, so inverse = transpose).
  std::array<double, 3> apply_inverse(const std::array<double, 3>& w) const {
    const auto& r = rotation;
    const std::array<double, 3> d{w[0] - translation[0], w[1] - translation[1],
                                  w[2] - translation[2]};
    return {r[0] * d[0] + r[3] * d[1] + r[6] * d[2],
            r[1] * d[0] + r[4] * d[1] + r[7] * d[2],
            r[2] * d[0] + r[5] * d[1] + r[8] * d[2]};
  }
};

struct LabelArray {
  std::vector<std::uint32_t> labels;
  std::uint32_t ignore_id = kDefaultIgnoreId;
};

namespace detail {

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::missing_file, path.string() + ": cannot open");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) fail(errc::io_failure, path.string() + ": read failed");
  return bytes;
}

inline void write_file_bytes(const std::filesystem::path& path,
                             const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(errc::io_failure, path.string() + ": cannot open for write");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) fail(errc::io_failure, path.string() + ": write failed");
}

// Little-endian cursor over an in-memory buffer.
class ByteReader {
 public:
  ByteReader(const std::string& bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) {
      fail(errc::truncated, name_ + ": truncated " + what + " at offset " +
                                std::to_string(pos_));
    }
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(
               static_cast<std::uint8_t>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<std::uint8_t>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 8;
    return v;
  }

  void raw(void* dst, std::size_t n, const char* what) {
    need(n, what);
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }

  void read_f32_block(float* dst, std::size_t count, const char* what) {
    need(count * 4, what);
    if constexpr (std::endian::native == std::endian::little) {
      std::memcpy(dst, bytes_.data() + pos_, count * 4);
      pos_ += count * 4;
    } else {
      for (std::size_t i = 0; i < count; ++i) {
        dst[i] = std::bit_cast<float>(u32(what));
      }
    }
  }

  void read_u32_block(std::uint32_t* dst, std::size_t count, const char* what) {
    need(count * 4, what);
    if constexpr (std::endian::native == std::endian::little) {
      std::memcpy(dst, bytes_.data() + pos_, count * 4);
      pos_ += count * 4;
    } else {
      for (std::size_t i = 0; i < count; ++i) dst[i] = u32(what);
    }
  }

  const std::string& name() const { return name_; }

 private:
  const std::string& bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

class ByteWriter {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
  }
  void f32_block(const float* src, std::size_t count) {
    if constexpr (std::endian::native == std::endian::little) {
      const char* p = reinterpret_cast<const char*>(src);
      out_.append(p, p + count * 4);
    } else {
      for (std::size_t i = 0; i < count; ++i) u32(std::bit_cast<std::uint32_t>(src[i]));
    }
  }
  void u32_block(const std::uint32_t* src, std::size_t count) {
    if constexpr (std::endian::native == std::endian::little) {
      const char* p = reinterpret_cast<const char*>(src);
      out_.append(p, p + count * 4);
    } else {
      for (std::size_t i = 0; i < count; ++i) u32(src[i]);
    }
  }
  void magic(const char m[4]) { out_.append(m, m + 4); }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// .igft feature tensors

inline FeatureMatrix read_feature_matrix(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file_bytes(path);
  detail::ByteReader r(bytes, path.string());

  r.need(4, "magic");
  if (std::memcmp(bytes.data(), "IGFT", 4) != 0) {
    fail(errc::bad_magic, path.string() + ": bad magic at offset 0");
  }
  char skip[4];
  r.raw(skip, 4, "magic");

  const std::uint32_t version = r.u32("version");
  if (version != kIgftVersion) {
    fail(errc::unsupported_format,
         path.string() + ": unsupported igft version " +
             std::to_string(version));
  }
  const std::uint32_t dtype = r.u32("dtype");
  if (dtype != kDtypeF32) {
    fail(errc::unsupported_format,
         path.string() + ": unsupported dtype tag " + std::to_string(dtype));
  }
  const std::uint32_t ndim = r.u32("ndim");
  if (ndim != 2) {
    fail(errc::shape_mismatch, path.string() + ": expected a 2-d tensor, file has " +
                                   std::to_string(ndim) + " dims");
  }
  const std::uint64_t rows = r.u64("dims");
  const std::uint64_t dims = r.u64("dims");
  if (rows > (1ull << 40) || dims > (1ull << 40) ||
      (dims != 0 && rows > (1ull << 40) / (dims ? dims : 1))) {
    fail(errc::unsupported_format, path.string() + ": implausible shape " +
                                       std::to_string(rows) + "x" +
                                       std::to_string(dims));
  }

  const std::uint64_t count = rows * dims;
  if (r.remaining() != count * 4) {
    fail(errc::shape_mismatch,
         path.string() + ": header claims " + std::to_string(rows) + "x" +
             std::to_string(dims) + " (" + std::to_string(count * 4) +
             " payload bytes) but file has " + std::to_string(r.remaining()) +
             " at offset " + std::to_string(r.offset()));
  }

  FeatureMatrix m(static_cast<std::size_t>(rows),
                  static_cast<std::size_t>(dims));
  const std::size_t payload_offset = r.offset();
  r.read_f32_block(m.data.data(), m.data.size(), "payload");

  for (std::size_t i = 0; i < m.data.size(); ++i) {
    if (!std::isfinite(m.data[i])) {
      fail(errc::non_finite,
           path.string() + ": non-finite value at element " +
               std::to_string(i) + " (offset " +
               std::to_string(payload_offset + 4 * i) + ")");
    }
  }
  return m;
}

inline void write_feature_matrix(const FeatureMatrix& m,
                                 const std::filesystem::path& path) {
  if (m.data.size() != m.rows * m.dims) {
    fail(errc::shape_mismatch, path.string() + ": matrix data length " +
                                   std::to_string(m.data.size()) +
                                   " != rows*dims");
  }
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    if (!std::isfinite(m.data[i])) {
      fail(errc::non_finite, path.string() + ": refusing to write non-finite value at element " +
                                 std::to_string(i));
    }
  }
  detail::ByteWriter w;
  w.magic("IGFT");
  w.u32(kIgftVersion);
  w.u32(kDtypeF32);
  w.u32(2);
  w.u64(m.rows);
  w.u64(m.dims);
  w.f32_block(m.data.data(), m.data.size());
  detail::write_file_bytes(path, w.take());
}

// ---------------------------------------------------------------------------
// .igl label arrays

inline LabelArray read_labels(
    const std::filesystem::path& path,
    std::optional<std::size_t> num_classes = std::nullopt) {
  const std::string bytes = detail::read_file_bytes(path);
  detail::ByteReader r(bytes, path.string());

  r.need(4, "magic");
  if (std::memcmp(bytes.data(), "IGLB", 4) != 0) {
    fail(errc::bad_magic, path.string() + ": bad magic at offset 0");
  }
  char skip[4];
  r.raw(skip, 4, "magic");

  const std::uint32_t version = r.u32("version");
  if (version != kIglVersion) {
    fail(errc::unsupported_format, path.string() + ": unsupported igl version " +
                                       std::to_string(version));
  }
  const std::uint64_t count = r.u64("count");
  if (count > (1ull << 40)) {
    fail(errc::unsupported_format,
         path.string() + ": implausible label count " + std::to_string(count));
  }
  LabelArray out;
  out.ignore_id = r.u32("ignore_id");
  if (r.remaining() != count * 4) {
    fail(errc::shape_mismatch,
         path.string() + ": header claims " + std::to_string(count) +
             " labels but payload has " + std::to_string(r.remaining() / 4));
  }
  out.labels.resize(static_cast<std::size_t>(count));
  r.read_u32_block(out.labels.data(), out.labels.size(), "payload");

  if (num_classes) {
    for (std::size_t i = 0; i < out.labels.size(); ++i) {
      const std::uint32_t v = out.labels[i];
      if (v != out.ignore_id && v >= *num_classes) {
        fail(errc::label_out_of_range,
             path.string() + ": label " + std::to_string(v) + " at index " +
                 std::to_string(i) + " exceeds declared class count " +
                 std::to_string(*num_classes));
      }
    }
  }
  return out;
}

inline void write_labels(const LabelArray& labels,
                         const std::filesystem::path& path) {
  detail::ByteWriter w;
  w.magic("IGLB");
  w.u32(kIglVersion);
  w.u64(labels.labels.size());
  w.u32(labels.ignore_id);
  w.u32_block(labels.labels.data(), labels.labels.size());
  detail::write_file_bytes(path, w.take());
}

// ---------------------------------------------------------------------------
// .ppm images (binary P6, maxval 255)

namespace detail {

inline int ppm_token(const std::string& bytes, std::size_t& pos,
                     const std::string& name) {
  // skip whitespace and '#' comments
  while (pos < bytes.size()) {
    const char c = bytes[pos];
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= bytes.size()) fail(errc::truncated, name + ": truncated header");
  if (bytes[pos] < '0' || bytes[pos] > '9') {
    fail(errc::parse_error, name + ": expected integer at offset " +
                                std::to_string(pos));
  }
  long v = 0;
  while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
    v = v * 10 + (bytes[pos] - '0');
    if (v > 1000000000L) fail(errc::parse_error, name + ": oversized integer");
    ++pos;
  }
  return static_cast<int>(v);
}

}  // namespace detail

inline RgbImage read_image(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file_bytes(path);
  const std::string name = path.string();
  if (bytes.size() < 2) fail(errc::truncated, name + ": truncated header");
  if (bytes[0] != 'P') fail(errc::bad_magic, name + ": bad magic at offset 0");
  if (bytes[1] == '3') {
    fail(errc::unsupported_format,
         name + ": ASCII (P3) pixmaps unsupported, use binary P6");
  }
  if (bytes[1] != '6') fail(errc::bad_magic, name + ": bad magic at offset 0");

  std::size_t pos = 2;
  const int width = detail::ppm_token(bytes, pos, name);
  const int height = detail::ppm_token(bytes, pos, name);
  const int maxval = detail::ppm_token(bytes, pos, name);
  if (maxval != 255) {
    fail(errc::unsupported_format,
         name + ": unsupported maxval " + std::to_string(maxval));
  }
  if (width <= 0 || height <= 0) {
    fail(errc::parse_error, name + ": invalid image dimensions");
  }
  if (pos >= bytes.size()) fail(errc::truncated, name + ": truncated header");
  ++pos;  // single whitespace after maxval

  RgbImage img;
  img.width = static_cast<std::size_t>(width);
  img.height = static_cast<std::size_t>(height);
  const std::size_t need = 3 * img.width * img.height;
  if (bytes.size() - pos < need) {
    fail(errc::truncated, name + ": truncated pixel data at offset " +
                              std::to_string(bytes.size()) + " (need " +
                              std::to_string(pos + need) + " bytes)");
  }
  if (bytes.size() - pos > need) {
    fail(errc::shape_mismatch, name + ": trailing bytes after pixel data");
  }
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                    bytes.end());
  return img;
}

inline void write_image(const RgbImage& img,
                        const std::filesystem::path& path) {
  if (img.pixels.size() != 3 * img.width * img.height) {
    fail(errc::shape_mismatch,
         path.string() + ": pixel buffer does not match dimensions");
  }
  std::string out = "P6\n" + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()),
             img.pixels.size());
  detail::write_file_bytes(path, out);
}

// ---------------------------------------------------------------------------
// .poses text files

inline void validate_pose(const PoseSE3& pose, const std::string& context) {
  const auto& r = pose.rotation;
  for (double v : r) {
    if (!std::isfinite(v)) fail(errc::pose_invalid, context + ": non-finite rotation");
  }
  for (double v : pose.translation) {
    if (!std::isfinite(v)) fail(errc::pose_invalid, context + ": non-finite translation");
  }
  // R^T R == I within 1e-5
  double max_dev = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += r[3 * k + i] * r[3 * k + j];
      max_dev = std::max(max_dev, std::fabs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  if (max_dev > 1e-5) {
    fail(errc::pose_invalid, context + ": rotation not orthonormal (max deviation " +
                                 detail::format_double(max_dev) + ")");
  }
  const double det = r[0] * (r[4] * r[8] - r[5] * r[7]) -
                     r[1] * (r[3] * r[8] - r[5] * r[6]) +
                     r[2] * (r[3] * r[7] - r[4] * r[6]);
  if (std::fabs(det - 1.0) > 1e-5) {
    fail(errc::pose_invalid, context + ": rotation determinant " +
                                 detail::format_double(det) + " != +1");
  }
}

inline std::vector<PoseSE3> read_poses(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file_bytes(path);
  std::vector<PoseSE3> poses;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string::npos) eol = bytes.size();
    const std::string line = bytes.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    double v[12];
    const char* p = line.c_str();
    char* endp = nullptr;
    for (int i = 0; i < 12; ++i) {
      v[i] = std::strtod(p, &endp);
      if (endp == p) {
        fail(errc::parse_error, path.string() + ":" + std::to_string(line_no) +
                                    ": expected 12 reals per pose line");
      }
      p = endp;
    }
    while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
    if (*p != '\0') {
      fail(errc::parse_error, path.string() + ":" + std::to_string(line_no) +
                                  ": trailing characters after 12 reals");
    }

    PoseSE3 pose;
    pose.rotation = {v[0], v[1], v[2], v[4], v[5], v[6], v[8], v[9], v[10]};
    pose.translation = {v[3], v[7], v[11]};
    validate_pose(pose, path.string() + ":" + std::to_string(line_no));
    poses.push_back(pose);
  }
  return poses;
}

inline void write_poses(std::span<const PoseSE3> poses,
                        const std::filesystem::path& path) {
  std::string out;
  for (const PoseSE3& pose : poses) {
    const auto& r = pose.rotation;
    const auto& t = pose.translation;
    const double row_major[12] = {r[0], r[1], r[2], t[0], r[3], r[4],
                                  r[5], t[1], r[6], r[7], r[8], t[2]};
    for (int i = 0; i < 12; ++i) {
      if (i) out += ' ';
      out += detail::format_double(row_major[i]);
    }
    out += '\n';
  }
  detail::write_file_bytes(path, out);
}

}  // namespace iglab
