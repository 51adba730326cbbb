#pragma once

// File interchange: binary PGM/PPM rasters, scene and geometry text files,
// the binary polar archive, and CSV reports. Readers either return a fully
// populated value or throw; writers go through a temporary file that is
// renamed into place.
//
// Polar archive layout (all integers little-endian uint32):
//   "LFPA" version=1 r1max r2max channels
//   then for each block in (R1, R2) lexicographic order:
//     rows*cols*channels float32 LE values (theta1-major, channels interleaved)
//     rows*cols uint8 mask bytes (0 or 1)
//   with rows = 7 R1 + 1 and cols = 7 R2 + 1. No trailing bytes.

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lfjohn/asgeirsson.hpp"
#include "lfjohn/lightfield.hpp"
#include "lfjohn/residuals.hpp"
#include "lfjohn/synth.hpp"

namespace lfjohn {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PnmMagicError : public IoError {
 public:
  using IoError::IoError;
};
class PnmHeaderError : public IoError {
 public:
  using IoError::IoError;
};
class PnmTruncatedError : public IoError {
 public:
  using IoError::IoError;
};
class ArchiveError : public IoError {
 public:
  using IoError::IoError;
};

/// Text parse failure; line is 1-based.
class ParseError : public IoError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : IoError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// ---------------------------------------------------------------------------
// Byte-level helpers

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes the bytes to a sibling temporary file and renames it over path.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move temporary file onto " + path.string());
  }
}

inline void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

// ---------------------------------------------------------------------------
// PNM

/// Decodes binary PGM (P5) or PPM (P6) bytes into an image normalized to
/// [0, 1]. 16-bit samples are big-endian.
inline Image<double> decode_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
    throw PnmMagicError("unsupported image format (expected binary P5 or P6)");
  const int channels = bytes[1] == '6' ? 3 : 1;
  std::size_t pos = 2;
  auto next_field = [&](const char* name) -> long {
    // whitespace and comments
    for (;;) {
      if (pos >= bytes.size()) throw PnmHeaderError(std::string("missing ") + name + " in PNM header");
      const char c = static_cast<char>(bytes[pos]);
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
        ++pos;
      } else {
        break;
      }
    }
    long value = 0;
    std::size_t digits = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1'000'000'000L) throw PnmHeaderError(std::string(name) + " too large in PNM header");
      ++pos;
      ++digits;
    }
    if (digits == 0) throw PnmHeaderError(std::string("malformed ") + name + " in PNM header");
    return value;
  };
  const long width = next_field("width");
  const long height = next_field("height");
  const long maxval = next_field("maxval");
  if (width < 1 || height < 1) throw PnmHeaderError("PNM dimensions must be positive");
  if (maxval < 1 || maxval > 65535) throw PnmHeaderError("PNM maxval must be in [1, 65535]");
  if (pos >= bytes.size()) throw PnmTruncatedError("PNM header not terminated");
  const char sep = static_cast<char>(bytes[pos]);
  if (sep != ' ' && sep != '\t' && sep != '\n' && sep != '\r')
    throw PnmHeaderError("PNM header must end with a single whitespace byte");
  ++pos;
  const std::size_t bps = maxval > 255 ? 2 : 1;
  const std::size_t samples = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - pos < samples * bps)
    throw PnmTruncatedError("PNM payload truncated: expected " + std::to_string(samples * bps) +
                            " bytes, found " + std::to_string(bytes.size() - pos));
  Image<double> img(static_cast<int>(width), static_cast<int>(height), channels);
  auto out = img.data();
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t at = pos + i * bps;
    const unsigned raw = bps == 2 ? (static_cast<unsigned>(bytes[at]) << 8) | bytes[at + 1] : bytes[at];
    if (raw > static_cast<unsigned>(maxval)) throw PnmHeaderError("PNM sample exceeds maxval");
    out[i] = static_cast<double>(raw) / static_cast<double>(maxval);
  }
  return img;
}

inline Image<double> read_raster(const std::filesystem::path& path) {
  return decode_pnm(read_file_bytes(path));
}

inline std::vector<std::uint8_t> encode_pnm(const Image<std::uint8_t>& img) {
  const std::string header = std::string(img.channels() == 3 ? "P6" : "P5") + "\n" +
                             std::to_string(img.width()) + " " + std::to_string(img.height()) +
                             "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

/// Quantizes [0, 1] values (clamped) to maxval, which must be 255 or 65535.
inline std::vector<std::uint8_t> encode_pnm(const Image<double>& img, int maxval = 255) {
  if (maxval != 255 && maxval != 65535) throw std::invalid_argument("maxval must be 255 or 65535");
  const std::string header = std::string(img.channels() == 3 ? "P6" : "P5") + "\n" +
                             std::to_string(img.width()) + " " + std::to_string(img.height()) +
                             "\n" + std::to_string(maxval) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + img.data().size() * (maxval > 255 ? 2 : 1));
  for (double v : img.data()) {
    const double c = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
    const auto q = static_cast<unsigned>(std::lround(c * maxval));
    if (maxval > 255) out.push_back(static_cast<std::uint8_t>(q >> 8));
    out.push_back(static_cast<std::uint8_t>(q & 0xffu));
  }
  return out;
}

inline void write_raster(const Image<double>& img, const std::filesystem::path& path, int maxval = 255) {
  write_file_atomic(path, encode_pnm(img, maxval));
}

inline void write_raster(const Image<std::uint8_t>& img, const std::filesystem::path& path) {
  write_file_atomic(path, encode_pnm(img));
}

// ---------------------------------------------------------------------------
// Text helpers

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline std::string_view strip_comment(std::string_view s) {
  const auto h = s.find('#');
  return h == std::string_view::npos ? s : s.substr(0, h);
}

template <class T>
std::optional<T> parse_number(std::string_view tok) {
  T value{};
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

inline std::string read_text(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scene files: one blob per line "a b c sigma amplitude", '#' comments.

inline Scene parse_scene(const std::string& text, const std::string& source = "<scene>") {
  std::vector<GaussianBlob> blobs;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto body = detail::trim(detail::strip_comment(lines[i]));
    if (body.empty()) continue;
    const auto tok = detail::split_ws(body);
    if (tok.size() != 5) throw ParseError(source, i + 1, "expected 'a b c sigma amplitude'");
    std::array<double, 5> v{};
    for (std::size_t k = 0; k < 5; ++k) {
      const auto n = detail::parse_number<double>(tok[k]);
      if (!n || !std::isfinite(*n)) throw ParseError(source, i + 1, "invalid number '" + std::string(tok[k]) + "'");
      v[k] = *n;
    }
    if (!(v[3] > 0.0)) throw ParseError(source, i + 1, "sigma must be > 0");
    if (!(v[4] > 0.0)) throw ParseError(source, i + 1, "amplitude must be > 0");
    blobs.push_back({{v[0], v[1], v[2]}, v[3], v[4]});
  }
  if (blobs.empty()) throw ParseError(source, lines.size() + 1, "scene contains no blobs");
  return Scene(std::move(blobs));
}

inline Scene read_scene(const std::filesystem::path& path) {
  return parse_scene(detail::read_text(path), path.string());
}

inline std::string format_scene(const Scene& scene) {
  std::string out = "# a b c sigma amplitude\n";
  for (const auto& b : scene.blobs()) {
    out += format_double(b.center[0]) + " " + format_double(b.center[1]) + " " +
           format_double(b.center[2]) + " " + format_double(b.sigma) + " " +
           format_double(b.amplitude) + "\n";
  }
  return out;
}

inline void write_scene(const Scene& scene, const std::filesystem::path& path) {
  write_file_atomic(path, format_scene(scene));
}

// ---------------------------------------------------------------------------
// Geometry files: "key = value" lines, every key exactly once.

inline LightfieldGeometry parse_geometry(const std::string& text, const std::string& source = "<geometry>") {
  LightfieldGeometry g;
  std::map<std::string, int LightfieldGeometry::*, std::less<>> ints = {
      {"cols", &LightfieldGeometry::microimage_cols},  {"rows", &LightfieldGeometry::microimage_rows},
      {"pitch_x", &LightfieldGeometry::pitch_x},       {"pitch_y", &LightfieldGeometry::pitch_y},
      {"ref_micro_u", &LightfieldGeometry::ref_micro_u}, {"ref_micro_v", &LightfieldGeometry::ref_micro_v},
      {"ref_pixel_x", &LightfieldGeometry::ref_pixel_x}, {"ref_pixel_y", &LightfieldGeometry::ref_pixel_y},
  };
  std::map<std::string, std::size_t, std::less<>> seen;
  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto body = detail::trim(detail::strip_comment(lines[i]));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, i + 1, "expected 'key = value'");
    const auto key = detail::trim(body.substr(0, eq));
    const auto val = detail::trim(body.substr(eq + 1));
    if (seen.count(key)) throw ParseError(source, i + 1, "duplicate key '" + std::string(key) + "'");
    seen.emplace(std::string(key), i + 1);
    if (key == "shift") {
      const auto v = detail::parse_number<double>(val);
      if (!v || !std::isfinite(*v) || *v < 0.0)
        throw ParseError(source, i + 1, "shift must be a finite number >= 0");
      g.shift = *v;
    } else if (const auto it = ints.find(key); it != ints.end()) {
      const auto v = detail::parse_number<int>(val);
      if (!v) throw ParseError(source, i + 1, "invalid integer for '" + std::string(key) + "'");
      g.*(it->second) = *v;
    } else {
      throw ParseError(source, i + 1, "unknown key '" + std::string(key) + "'");
    }
  }
  for (const auto& [name, member] : ints)
    if (!seen.count(name)) throw ParseError(source, lines.size() + 1, "missing key '" + name + "'");
  if (!seen.count("shift")) throw ParseError(source, lines.size() + 1, "missing key 'shift'");
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, lines.size() + 1, e.what());
  }
  return g;
}

inline LightfieldGeometry read_geometry(const std::filesystem::path& path) {
  return parse_geometry(detail::read_text(path), path.string());
}

inline std::string format_geometry(const LightfieldGeometry& g) {
  return "cols = " + std::to_string(g.microimage_cols) + "\nrows = " + std::to_string(g.microimage_rows) +
         "\npitch_x = " + std::to_string(g.pitch_x) + "\npitch_y = " + std::to_string(g.pitch_y) +
         "\nref_micro_u = " + std::to_string(g.ref_micro_u) + "\nref_micro_v = " +
         std::to_string(g.ref_micro_v) + "\nref_pixel_x = " + std::to_string(g.ref_pixel_x) +
         "\nref_pixel_y = " + std::to_string(g.ref_pixel_y) + "\nshift = " + format_double(g.shift) +
         "\n";
}

inline void write_geometry(const LightfieldGeometry& g, const std::filesystem::path& path) {
  g.validate();
  write_file_atomic(path, format_geometry(g));
}

// ---------------------------------------------------------------------------
// Polar archive

namespace detail {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t& pos) {
  if (in.size() - pos < 4) throw ArchiveError("polar archive truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[pos + i]) << (8 * i);
  pos += 4;
  return v;
}

}  // namespace detail

/// Values are stored as float32; anything not representable is rounded.
inline std::vector<std::uint8_t> encode_polar_archive(const PolarLightfield& pl) {
  std::vector<std::uint8_t> out = {'L', 'F', 'P', 'A'};
  detail::put_u32(out, 1);
  detail::put_u32(out, static_cast<std::uint32_t>(pl.r1max()));
  detail::put_u32(out, static_cast<std::uint32_t>(pl.r2max()));
  detail::put_u32(out, static_cast<std::uint32_t>(pl.channels()));
  for (const PolarBlock& b : pl.blocks()) {
    for (double v : b.values) detail::put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    for (std::uint8_t m : b.mask) out.push_back(m ? 1 : 0);
  }
  return out;
}

inline PolarLightfield decode_polar_archive(std::span<const std::uint8_t> in) {
  if (in.size() < 4 || in[0] != 'L' || in[1] != 'F' || in[2] != 'P' || in[3] != 'A')
    throw ArchiveError("not a polar archive");
  std::size_t pos = 4;
  const auto version = detail::get_u32(in, pos);
  if (version != 1) throw ArchiveError("unsupported polar archive version " + std::to_string(version));
  const auto r1max = detail::get_u32(in, pos);
  const auto r2max = detail::get_u32(in, pos);
  const auto channels = detail::get_u32(in, pos);
  if (r1max > 10000 || r2max > 10000) throw ArchiveError("polar archive Rmax out of range");
  if (channels != 1 && channels != 3) throw ArchiveError("polar archive channel count must be 1 or 3");
  // size check before allocating anything
  std::size_t expected = 0;
  for (std::uint32_t r1 = 0; r1 <= r1max; ++r1)
    for (std::uint32_t r2 = 0; r2 <= r2max; ++r2)
      expected += static_cast<std::size_t>(7 * r1 + 1) * (7 * r2 + 1) * (4 * channels + 1);
  if (in.size() - pos != expected)
    throw ArchiveError("polar archive payload size mismatch: expected " + std::to_string(expected) +
                       " bytes, found " + std::to_string(in.size() - pos));
  PolarLightfield pl(static_cast<int>(r1max), static_cast<int>(r2max), static_cast<int>(channels));
  for (PolarBlock& b : pl.blocks()) {
    for (double& v : b.values) v = std::bit_cast<float>(detail::get_u32(in, pos));
    for (std::uint8_t& m : b.mask) {
      if (in[pos] > 1) throw ArchiveError("polar archive mask byte must be 0 or 1");
      m = in[pos++];
    }
  }
  return pl;
}

inline void write_polar_archive(const PolarLightfield& pl, const std::filesystem::path& path) {
  write_file_atomic(path, encode_polar_archive(pl));
}

inline PolarLightfield read_polar_archive(const std::filesystem::path& path) {
  return decode_polar_archive(read_file_bytes(path));
}

// ---------------------------------------------------------------------------
// CSV reports: '#' comment lines, header row, LF endings.

struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string format_csv(const CsvTable& t) {
  std::string out;
  for (const auto& c : t.comments) out += "# " + c + "\n";
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) {
    if (r.size() != t.header.size()) throw std::invalid_argument("CSV row width does not match header");
    line(r);
  }
  return out;
}

inline void write_csv_report(const CsvTable& t, const std::filesystem::path& path) {
  write_file_atomic(path, format_csv(t));
}

inline CsvTable residual_table(const std::vector<ResidualReport>& reports) {
  CsvTable t;
  t.header = {"which", "h", "n", "max_abs", "mean_abs", "rms"};
  for (const auto& r : reports)
    t.rows.push_back({std::string(to_string(r.which)), format_double(r.h), std::to_string(r.sample_count),
                      format_double(r.max_abs), format_double(r.mean_abs), format_double(r.rms)});
  return t;
}

inline CsvTable asgeirsson_table(const std::vector<AsgeirssonRow>& rows) {
  CsvTable t;
  t.header = {"R1", "R2", "sum_ab", "sum_ba", "abs_diff", "rel_diff", "fully_valid"};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.r1), std::to_string(r.r2), format_double(r.sum_ab),
                      format_double(r.sum_ba), format_double(r.abs_diff), format_double(r.rel_diff),
                      r.fully_valid ? "1" : "0"});
  return t;
}

/// theorem is 1 or 2; for theorem 1 both radii are R.
inline CsvTable theorem_table(const std::vector<std::pair<int, TheoremReport>>& reports) {
  CsvTable t;
  t.header = {"theorem", "xi1", "xi2", "xi3", "xi4", "R_a", "R_b", "n", "lhs", "rhs", "abs_diff", "rel_diff"};
  for (const auto& [which, r] : reports)
    t.rows.push_back({std::to_string(which), format_double(r.center.xi1), format_double(r.center.xi2),
                      format_double(r.center.xi3), format_double(r.center.xi4), format_double(r.radius_a),
                      format_double(r.radius_b), std::to_string(r.n_nodes), format_double(r.lhs),
                      format_double(r.rhs), format_double(r.abs_diff), format_double(r.rel_diff)});
  return t;
}

}  // namespace lfjohn
