#include "hyperaug/io.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <regex>
#include <string>
#include <string_view>

#include "bytes.hpp"
#include "hyperaug/error.hpp"

namespace hyperaug::io {
namespace {

namespace fs = std::filesystem;
using detail::load_le;

constexpr std::array<std::byte, 4> kHsbMagic{std::byte{'H'}, std::byte{'S'}, std::byte{'B'},
                                              std::byte{'1'}};
constexpr std::size_t kHsbHeader = 16;
constexpr std::string_view kNpyMagic = "\x93NUMPY";

std::size_t checked_volume(std::uint64_t h, std::uint64_t w, std::uint64_t c) {
  if (h == 0 || w == 0 || c == 0) {
    throw Error(ErrorCode::format, "zero dimension in patch header");
  }
  constexpr std::uint64_t cap = std::numeric_limits<std::uint32_t>::max();
  if (h > cap || w > cap || c > cap || h * w > cap || h * w * c > cap) {
    throw Error(ErrorCode::format, "patch dimensions too large");
  }
  return static_cast<std::size_t>(h * w * c);
}

struct NpyDtype {
  char kind;  // 'f', 'i', 'u'
  std::size_t width;
};

NpyDtype parse_descr(const std::string& descr) {
  if (descr.size() < 3 || (descr[0] != '<' && descr[0] != '|')) {
    throw Error(ErrorCode::format, "unsupported npy dtype '" + descr + "' (little-endian only)");
  }
  const char kind = descr[1];
  const std::size_t width = std::stoul(descr.substr(2));
  const bool ok = (kind == 'f' && (width == 4 || width == 8)) ||
                  ((kind == 'i' || kind == 'u') && (width == 1 || width == 2 || width == 4));
  if (!ok || (width > 1 && descr[0] == '|')) {
    throw Error(ErrorCode::format, "unsupported npy dtype '" + descr + "'");
  }
  return {kind, width};
}

float convert_sample(const std::byte* p, NpyDtype t) noexcept {
  switch (t.kind) {
    case 'f':
      return t.width == 4 ? load_le<float>(p) : static_cast<float>(load_le<double>(p));
    case 'i':
      if (t.width == 1) return static_cast<float>(load_le<std::int8_t>(p));
      if (t.width == 2) return static_cast<float>(load_le<std::int16_t>(p));
      return static_cast<float>(load_le<std::int32_t>(p));
    default:
      if (t.width == 1) return static_cast<float>(load_le<std::uint8_t>(p));
      if (t.width == 2) return static_cast<float>(load_le<std::uint16_t>(p));
      return static_cast<float>(load_le<std::uint32_t>(p));
  }
}

}  // namespace

std::vector<std::byte> encode_hsb(const HyperImage& image) {
  std::vector<std::byte> out;
  out.reserve(kHsbHeader + image.size() * sizeof(float));
  out.insert(out.end(), kHsbMagic.begin(), kHsbMagic.end());
  detail::append_le(out, static_cast<std::uint32_t>(image.height()));
  detail::append_le(out, static_cast<std::uint32_t>(image.width()));
  detail::append_le(out, static_cast<std::uint32_t>(image.channels()));
  detail::append_floats_le(out, image.data().data(), image.size());
  return out;
}

HyperImage decode_hsb(std::span<const std::byte> bytes) {
  if (bytes.size() < kHsbHeader) {
    throw Error(ErrorCode::format, "HSB buffer shorter than its 16-byte header");
  }
  if (!std::equal(kHsbMagic.begin(), kHsbMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::format, "missing HSB1 magic");
  }
  const auto h = load_le<std::uint32_t>(bytes.data() + 4);
  const auto w = load_le<std::uint32_t>(bytes.data() + 8);
  const auto c = load_le<std::uint32_t>(bytes.data() + 12);
  const std::size_t n = checked_volume(h, w, c);
  if (bytes.size() != kHsbHeader + n * sizeof(float)) {
    throw Error(ErrorCode::format, "HSB payload is " + std::to_string(bytes.size() - kHsbHeader) +
                                       " bytes, header implies " +
                                       std::to_string(n * sizeof(float)));
  }
  std::vector<float> data(n);
  detail::load_floats_le(bytes.data() + kHsbHeader, data.data(), n);
  return HyperImage(h, w, c, std::move(data));
}

std::vector<std::byte> encode_npy(const HyperImage& image) {
  std::string header = "{'descr': '<f4', 'fortran_order': False, 'shape': (" +
                       std::to_string(image.height()) + ", " + std::to_string(image.width()) +
                       ", " + std::to_string(image.channels()) + "), }";
  // magic(6) + version(2) + header length(2) + header, padded to 64 bytes, ending in '\n'.
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header.push_back('\n');

  std::vector<std::byte> out;
  out.reserve(10 + header.size() + image.size() * sizeof(float));
  for (char ch : kNpyMagic) out.push_back(static_cast<std::byte>(ch));
  out.push_back(std::byte{1});
  out.push_back(std::byte{0});
  detail::append_le(out, static_cast<std::uint16_t>(header.size()));
  for (char ch : header) out.push_back(static_cast<std::byte>(ch));
  detail::append_floats_le(out, image.data().data(), image.size());
  return out;
}

HyperImage decode_npy(std::span<const std::byte> bytes) {
  if (bytes.size() < 10 ||
      !std::equal(kNpyMagic.begin(), kNpyMagic.end(), bytes.begin(),
                  [](char a, std::byte b) { return static_cast<std::byte>(a) == b; })) {
    throw Error(ErrorCode::format, "missing npy magic");
  }
  const auto major = std::to_integer<unsigned>(bytes[6]);
  std::size_t header_len = 0;
  std::size_t header_start = 0;
  if (major == 1) {
    header_len = load_le<std::uint16_t>(bytes.data() + 8);
    header_start = 10;
  } else if (major == 2 || major == 3) {
    if (bytes.size() < 12) throw Error(ErrorCode::format, "truncated npy header");
    header_len = load_le<std::uint32_t>(bytes.data() + 8);
    header_start = 12;
  } else {
    throw Error(ErrorCode::format, "unsupported npy version " + std::to_string(major));
  }
  if (bytes.size() < header_start + header_len) {
    throw Error(ErrorCode::format, "truncated npy header");
  }
  const std::string header(reinterpret_cast<const char*>(bytes.data() + header_start), header_len);

  static const std::regex descr_re(R"('descr'\s*:\s*'([^']*)')");
  static const std::regex order_re(R"('fortran_order'\s*:\s*(True|False))");
  static const std::regex shape_re(R"('shape'\s*:\s*\(([^)]*)\))");
  std::smatch m;
  if (!std::regex_search(header, m, descr_re)) throw Error(ErrorCode::format, "npy header lacks descr");
  const NpyDtype dtype = parse_descr(m[1].str());
  if (!std::regex_search(header, m, order_re)) {
    throw Error(ErrorCode::format, "npy header lacks fortran_order");
  }
  if (m[1].str() == "True") throw Error(ErrorCode::format, "Fortran-ordered npy arrays are not supported");
  if (!std::regex_search(header, m, shape_re)) throw Error(ErrorCode::format, "npy header lacks shape");

  std::vector<std::uint64_t> dims;
  static const std::regex int_re(R"(\d+)");
  const std::string shape_text = m[1].str();
  for (auto it = std::sregex_iterator(shape_text.begin(), shape_text.end(), int_re);
       it != std::sregex_iterator(); ++it) {
    dims.push_back(std::stoull(it->str()));
  }
  if (dims.size() == 2) dims.push_back(1);
  if (dims.size() != 3) {
    throw Error(ErrorCode::format, "npy array must be 2-D or 3-D, got " +
                                       std::to_string(dims.size()) + " dimensions");
  }
  const std::size_t n = checked_volume(dims[0], dims[1], dims[2]);
  const std::size_t payload = header_start + header_len;
  if (bytes.size() != payload + n * dtype.width) {
    throw Error(ErrorCode::format, "npy payload size does not match its shape");
  }
  std::vector<float> data(n);
  if (dtype.kind == 'f' && dtype.width == 4) {
    detail::load_floats_le(bytes.data() + payload, data.data(), n);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      data[i] = convert_sample(bytes.data() + payload + i * dtype.width, dtype);
    }
  }
  return HyperImage(dims[0], dims[1], dims[2], std::move(data));
}

std::vector<std::byte> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  const auto size = static_cast<std::size_t>(in.tellg());
  std::vector<std::byte> bytes(size);
  in.seekg(0);
  if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size))) {
    throw Error(ErrorCode::io, "cannot read '" + path.string() + "'");
  }
  return bytes;
}

void write_file(const fs::path& path, std::span<const std::byte> bytes) {
  fs::path tmp = path;
  tmp += ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot create '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io, "cannot rename into '" + path.string() + "': " + ec.message());
}

bool is_patch_file(const fs::path& path) {
  const auto ext = path.extension();
  return ext == ".hsb" || ext == ".npy";
}

HyperImage load_patch(const fs::path& path) {
  const auto bytes = read_file(path);
  try {
    if (path.extension() == ".npy") return decode_npy(bytes);
    return decode_hsb(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), "'" + path.string() + "': " + e.detail());
  }
}

void save_hsb(const fs::path& path, const HyperImage& image) { write_file(path, encode_hsb(image)); }

void save_npy(const fs::path& path, const HyperImage& image) { write_file(path, encode_npy(image)); }

}  // namespace hyperaug::io
