#include "fsw/field_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "fsw/error.hpp"

namespace fsw {
namespace {

constexpr char kMagic[] = "FSF1\n";
constexpr std::size_t kMagicSize = 5;

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

std::string shape_string(const Grid& g) {
  std::string s;
  for (std::size_t a = 0; a < g.dim(); ++a) {
    if (a) s += 'x';
    s += std::to_string(g.side(a));
  }
  return s;
}

std::size_t parse_size(const std::string& key, const std::string& text) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw FormatError("header key '" + key + "' has invalid value '" + text + "'");
  }
  return v;
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw FormatError("header key '" + key + "' has invalid value '" + text + "'");
  }
  return v;
}

}  // namespace

void FieldMetadata::set(const std::string& key, const std::string& value) {
  if (key.empty() || key.find_first_of("=\n") != std::string::npos ||
      value.find('\n') != std::string::npos) {
    throw ParameterError("invalid metadata entry '" + key + "'");
  }
  for (auto& kv : entries_) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

bool FieldMetadata::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& kv) { return kv.first == key; });
}

const std::string& FieldMetadata::get(const std::string& key) const {
  for (const auto& kv : entries_) {
    if (kv.first == key) return kv.second;
  }
  throw FormatError("missing header key '" + key + "'");
}

std::string FieldMetadata::get_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string encode_field(const SampledField& field, const FieldMetadata& meta) {
  const Grid& g = field.grid;
  if (field.values.size() != g.count()) throw ParameterError("field size does not match its grid");
  std::string out(kMagic, kMagicSize);
  out += "d=" + std::to_string(g.dim()) + "\n";
  out += "shape=" + shape_string(g) + "\n";
  out += "spacing=" + format_double(g.spacing()) + "\n";
  for (const char* key : {"gamma", "p", "seed", "jmin", "jmax", "basis"}) {
    if (meta.has(key)) out += std::string(key) + "=" + meta.get(key) + "\n";
  }
  for (const auto& [k, v] : meta.entries()) {
    static const char* known[] = {"d", "shape", "spacing", "gamma", "p", "seed", "jmin", "jmax", "basis"};
    if (std::find(std::begin(known), std::end(known), k) != std::end(known)) continue;
    out += k + "=" + v + "\n";
  }
  out += "\n";
  const std::size_t start = out.size();
  out.resize(start + 8 * field.values.size());
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(field.values[i]));
    std::memcpy(out.data() + start + 8 * i, &bits, 8);
  }
  return out;
}

std::pair<SampledField, FieldMetadata> decode_field(const std::string& bytes) {
  if (bytes.size() < kMagicSize || bytes.compare(0, kMagicSize, kMagic, kMagicSize) != 0) {
    throw FormatError("bad magic: not an FSF1 field file");
  }
  FieldMetadata meta;
  std::size_t pos = kMagicSize;
  while (true) {
    const std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string::npos) throw FormatError("unterminated header");
    const std::string line = bytes.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) break;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0) throw FormatError("malformed header line '" + line + "'");
    meta.set(line.substr(0, eq), line.substr(eq + 1));
  }

  const std::size_t d = parse_size("d", meta.get("d"));
  const std::string& shape_text = meta.get("shape");
  const double spacing = parse_double("spacing", meta.get("spacing"));
  std::vector<std::size_t> shape;
  std::stringstream ss(shape_text);
  for (std::string part; std::getline(ss, part, 'x');) shape.push_back(parse_size("shape", part));
  if (shape.size() != d) {
    throw FormatError("header shape '" + shape_text + "' does not have d=" + std::to_string(d) + " axes");
  }
  Grid grid = [&] {
    try {
      return Grid(shape, spacing);
    } catch (const ParameterError& e) {
      throw FormatError(std::string("invalid grid in header: ") + e.what());
    }
  }();

  const std::size_t expected = 8 * grid.count();
  const std::size_t actual = bytes.size() - pos;
  if (actual < expected) {
    throw FormatError("short payload: expected " + std::to_string(expected) + " bytes, got " +
                      std::to_string(actual));
  }
  if (actual > expected) {
    throw FormatError("trailing data: expected " + std::to_string(expected) + " payload bytes, got " +
                      std::to_string(actual));
  }
  SampledField field(grid);
  for (std::size_t i = 0; i < grid.count(); ++i) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, bytes.data() + pos + 8 * i, 8);
    field.values[i] = std::bit_cast<double>(to_little(bits));
  }
  return {std::move(field), std::move(meta)};
}

void write_bytes_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    os.flush();
    if (!os) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::filesystem::rename(tmp, path);
}

void write_field(const SampledField& field, const FieldMetadata& meta,
                 const std::filesystem::path& path) {
  write_bytes_atomic(path, encode_field(field, meta));
}

std::pair<SampledField, FieldMetadata> read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return decode_field(buf.str());
}

std::string encode_pgm(const SampledField& field) {
  const Grid& g = field.grid;
  if (g.dim() != 2) throw ParameterError("PGM export needs a d = 2 field, got d=" + std::to_string(g.dim()));
  const std::size_t rows = g.side(0), cols = g.side(1);
  std::string out = "P5\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n65535\n";
  const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
  const double min = *lo, range = *hi - *lo;
  for (double v : field.values) {
    std::uint16_t px = 32768;
    if (range > 0.0) px = static_cast<std::uint16_t>(std::lround((v - min) / range * 65535.0));
    out.push_back(static_cast<char>(px >> 8));
    out.push_back(static_cast<char>(px & 0xff));
  }
  return out;
}

void export_pgm(const SampledField& field, const std::filesystem::path& path) {
  write_bytes_atomic(path, encode_pgm(field));
}

std::string encode_csv(const SampledField& field) {
  const Grid& g = field.grid;
  std::string out;
  if (g.dim() == 1) {
    for (double v : field.values) out += format_double(v) + "\n";
  } else if (g.dim() == 2) {
    out += "x,y,value\n";
    for (std::size_t i = 0; i < g.count(); ++i) {
      const Point x = g.node(i);
      out += format_double(x[0]) + "," + format_double(x[1]) + "," + format_double(field[i]) + "\n";
    }
  } else {
    throw ParameterError("CSV export supports d = 1 and d = 2 only");
  }
  return out;
}

void export_csv(const SampledField& field, const std::filesystem::path& path) {
  write_bytes_atomic(path, encode_csv(field));
}

}  // namespace fsw
