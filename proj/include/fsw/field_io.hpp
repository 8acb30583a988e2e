#pragma once

// FSF field files, PGM rasters and CSV export.
//
// FSF layout: "FSF1\n", header lines "key=value\n", an empty line, then the
// samples as little-endian IEEE-754 doubles, row-major, last axis fastest.

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fsw/grid.hpp"

namespace fsw {

/// Ordered header entries. Keys d, shape and spacing are derived from the
/// field when writing; all other keys (known or not) are kept verbatim.
class FieldMetadata {
 public:
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  /// Throws FormatError naming the key if absent.
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }
  bool operator==(const FieldMetadata&) const = default;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

/// Serialized bytes of a field file.
std::string encode_field(const SampledField& field, const FieldMetadata& meta);
/// Parses a field file. Throws FormatError for a bad magic tag, a missing
/// header key, a malformed line or a short payload.
std::pair<SampledField, FieldMetadata> decode_field(const std::string& bytes);

/// Writes atomically through a temporary file and rename.
void write_field(const SampledField& field, const FieldMetadata& meta,
                 const std::filesystem::path& path);
std::pair<SampledField, FieldMetadata> read_field(const std::filesystem::path& path);

/// 16-bit binary PGM, min-max normalized; a constant field maps to 32768.
/// Rows follow the first axis. Throws ParameterError unless d = 2.
std::string encode_pgm(const SampledField& field);
void export_pgm(const SampledField& field, const std::filesystem::path& path);

/// One value per line for d = 1; "x,y,value" lines for d = 2.
std::string encode_csv(const SampledField& field);
void export_csv(const SampledField& field, const std::filesystem::path& path);

/// Atomic write of raw bytes.
void write_bytes_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace fsw
