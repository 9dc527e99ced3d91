#include "sfseg/npy.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <regex>

namespace sfseg::npy {
namespace {

constexpr char kMagic[] = "\x93NUMPY";
constexpr std::size_t kMagicLen = 6;
constexpr std::size_t kAlign = 64;

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian hosts are not supported");

std::size_t element_count(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::size_t itemsize(const std::string& descr) {
  if (descr.size() < 3) return 0;
  const std::string digits = descr.substr(2);
  if (!std::all_of(digits.begin(), digits.end(),
                   [](char ch) { return ch >= '0' && ch <= '9'; })) {
    return 0;
  }
  return static_cast<std::size_t>(std::stoul(digits));
}

std::vector<float> decode_f4(const RawArray& a) {
  std::vector<float> out(element_count(a.shape));
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t bits = 0;
    for (int b = 3; b >= 0; --b) bits = (bits << 8) | a.data[4 * i + b];
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

std::vector<unsigned char> encode_f4(std::span<const float> values) {
  std::vector<unsigned char> out(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(values[i]);
    for (int b = 0; b < 4; ++b) out[4 * i + b] = (bits >> (8 * b)) & 0xFF;
  }
  return out;
}

void require_descr(const RawArray& a, std::initializer_list<const char*> allowed,
                   const std::filesystem::path& path) {
  for (const char* d : allowed) {
    if (a.descr == d) return;
  }
  fail(ErrorCode::DtypeMismatch,
       path.string() + ": unexpected dtype '" + a.descr + "'");
}

void require_rank(const RawArray& a, std::size_t lo, std::size_t hi,
                  const std::filesystem::path& path) {
  if (a.shape.size() < lo || a.shape.size() > hi) {
    fail(ErrorCode::ShapeMismatch, path.string() + ": rank " +
                                       std::to_string(a.shape.size()) +
                                       " not allowed for this content");
  }
}

}  // namespace

RawArray read_raw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 10 ||
      std::memcmp(bytes.data(), kMagic, kMagicLen) != 0) {
    fail(ErrorCode::BadHeader, path.string() + ": missing NPY magic");
  }
  if (bytes[6] != 1 || bytes[7] != 0) {
    fail(ErrorCode::BadHeader, path.string() + ": only NPY version 1.0 is supported");
  }
  const std::size_t header_len = bytes[8] | (bytes[9] << 8);
  if (bytes.size() < 10 + header_len) {
    fail(ErrorCode::BadHeader, path.string() + ": truncated header");
  }
  const std::string header(bytes.begin() + 10, bytes.begin() + 10 + header_len);

  static const std::regex descr_re(R"('descr'\s*:\s*'([^']*)')");
  static const std::regex order_re(R"('fortran_order'\s*:\s*(True|False))");
  static const std::regex shape_re(R"('shape'\s*:\s*\(([^)]*)\))");
  std::smatch m;
  RawArray array;
  if (!std::regex_search(header, m, descr_re)) {
    fail(ErrorCode::BadHeader, path.string() + ": header lacks 'descr'");
  }
  array.descr = m[1];
  if (!std::regex_search(header, m, order_re)) {
    fail(ErrorCode::BadHeader, path.string() + ": header lacks 'fortran_order'");
  }
  if (m[1] == "True") {
    fail(ErrorCode::BadHeader, path.string() + ": Fortran-order arrays are not supported");
  }
  if (!std::regex_search(header, m, shape_re)) {
    fail(ErrorCode::BadHeader, path.string() + ": header lacks 'shape'");
  }
  const std::string dims = m[1];
  static const std::regex int_re(R"(\d+)");
  for (auto it = std::sregex_iterator(dims.begin(), dims.end(), int_re);
       it != std::sregex_iterator(); ++it) {
    array.shape.push_back(static_cast<std::size_t>(std::stoull(it->str())));
  }

  const std::size_t size = itemsize(array.descr);
  if (size == 0) fail(ErrorCode::BadHeader, path.string() + ": bad dtype descriptor");
  const std::size_t expected = element_count(array.shape) * size;
  const std::size_t offset = 10 + header_len;
  if (bytes.size() - offset != expected) {
    fail(ErrorCode::BadHeader, path.string() + ": payload holds " +
                                   std::to_string(bytes.size() - offset) +
                                   " bytes, header implies " + std::to_string(expected));
  }
  array.data.assign(bytes.begin() + offset, bytes.end());
  return array;
}

std::string make_header(const std::string& descr,
                        const std::vector<std::size_t>& shape) {
  std::string dict = "{'descr': '" + descr + "', 'fortran_order': False, 'shape': (";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    dict += std::to_string(shape[i]);
    if (shape.size() == 1 || i + 1 < shape.size()) dict += ",";
    if (i + 1 < shape.size()) dict += " ";
  }
  dict += "), }";
  const std::size_t unpadded = kMagicLen + 4 + dict.size() + 1;
  const std::size_t padding = (kAlign - unpadded % kAlign) % kAlign;
  dict.append(padding, ' ');
  dict += '\n';
  return dict;
}

void write_raw(const std::filesystem::path& path, const RawArray& array) {
  const std::string header = make_header(array.descr, array.shape);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out.write(kMagic, kMagicLen);
  const char version[2] = {1, 0};
  out.write(version, 2);
  const char len[2] = {static_cast<char>(header.size() & 0xFF),
                       static_cast<char>(header.size() >> 8)};
  out.write(len, 2);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(array.data.data()),
            static_cast<std::streamsize>(array.data.size()));
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

ProbVolume read_prob(const std::filesystem::path& path, double tolerance) {
  const RawArray a = read_raw(path);
  require_descr(a, {"<f4"}, path);
  return validate_prob(a.shape, decode_f4(a), tolerance);
}

LabelVolume read_labels(const std::filesystem::path& path,
                        std::optional<std::size_t> classes) {
  const RawArray a = read_raw(path);
  require_descr(a, {"|u1", "<u1", "|b1"}, path);
  require_rank(a, 2, 3, path);
  std::vector<std::uint8_t> values(a.data.begin(), a.data.end());
  std::size_t c = classes.value_or(0);
  if (!classes) {
    const std::uint8_t top =
        values.empty() ? 0 : *std::max_element(values.begin(), values.end());
    c = std::max<std::size_t>(2, std::size_t{top} + 1);
  }
  return LabelVolume(GridShape(a.shape), c, std::move(values));
}

Image read_image(const std::filesystem::path& path) {
  const RawArray a = read_raw(path);
  require_descr(a, {"<f4"}, path);
  require_rank(a, 2, 3, path);
  return Image(GridShape(a.shape), decode_f4(a));
}

EdgeMap read_edges(const std::filesystem::path& path) {
  const RawArray a = read_raw(path);
  require_descr(a, {"|b1", "|u1", "<u1"}, path);
  require_rank(a, 2, 2, path);
  return EdgeMap(GridShape(a.shape),
                 std::vector<std::uint8_t>(a.data.begin(), a.data.end()));
}

void write_array(const std::filesystem::path& path, const ProbVolume& p) {
  std::vector<std::size_t> shape{p.classes()};
  shape.insert(shape.end(), p.shape().dims().begin(), p.shape().dims().end());
  write_raw(path, RawArray{"<f4", std::move(shape), encode_f4(p.values())});
}

void write_array(const std::filesystem::path& path, const LabelVolume& y) {
  write_raw(path, RawArray{"|u1", y.shape().dims(),
                           std::vector<unsigned char>(y.values().begin(),
                                                      y.values().end())});
}

void write_array(const std::filesystem::path& path, const Image& img) {
  write_raw(path, RawArray{"<f4", img.shape().dims(), encode_f4(img.values())});
}

void write_array(const std::filesystem::path& path, const EdgeMap& edges) {
  write_raw(path, RawArray{"|b1", edges.shape().dims(),
                           std::vector<unsigned char>(edges.values().begin(),
                                                      edges.values().end())});
}

void write_array(const std::filesystem::path& path, const ScalarField& field) {
  std::vector<float> narrowed(field.values().begin(), field.values().end());
  write_raw(path, RawArray{"<f4", field.shape().dims(), encode_f4(narrowed)});
}

}  // namespace sfseg::npy
