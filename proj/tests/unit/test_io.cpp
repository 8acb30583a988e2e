#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <limits>

#include "fsw/error.hpp"
#include "fsw/field_io.hpp"

using namespace fsw;

namespace {

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const FormatError& e) {
    return e.what();
  }
  return {};
}

SampledField small_field() {
  SampledField f(Grid::cube(2, 2, 0.25));
  f[0] = 1.5;
  f[1] = -0.1;
  f[2] = std::numeric_limits<double>::denorm_min();
  f[3] = 1e300;
  return f;
}

}  // namespace

TEST_CASE("field files round trip bit for bit") {
  const SampledField f = small_field();
  FieldMetadata meta;
  meta.set("gamma", "0.75");
  meta.set("seed", "42");
  meta.set("comment", "hello world");
  const std::string bytes = encode_field(f, meta);
  CHECK(bytes.rfind("FSF1\nd=2\nshape=2x2\nspacing=0.25\ngamma=0.75\nseed=42\ncomment=hello world\n\n", 0) == 0);
  CHECK(bytes.size() == 72 + 4 * sizeof(double));
  const auto [g, m] = decode_field(bytes);
  CHECK(g.grid == f.grid);
  CHECK(std::memcmp(g.values.data(), f.values.data(), 4 * sizeof(double)) == 0);
  CHECK(m.get("gamma") == "0.75");
  CHECK(m.get("comment") == "hello world");
  CHECK(m.get_or("basis", "none") == "none");
  CHECK(encode_field(g, m) == bytes);

  const auto dir = std::filesystem::temp_directory_path() / "fsw_io_test";
  std::filesystem::create_directories(dir);
  write_field(f, meta, dir / "f.fsf");
  const auto [h, hm] = read_field(dir / "f.fsf");
  CHECK(h.values == f.values);
  CHECK(hm.get("seed") == "42");
  std::filesystem::remove_all(dir);
}

TEST_CASE("decode errors are specific") {
  const std::string bytes = encode_field(small_field(), {});
  CHECK(message_of([&] { decode_field(bytes.substr(0, bytes.size() - 3)); }) ==
        "short payload: expected 32 bytes, got 29");
  CHECK(message_of([&] { decode_field(bytes + "x"); }).find("trailing data") != std::string::npos);
  std::string bad = bytes;
  bad[3] = '2';
  CHECK(message_of([&] { decode_field(bad); }).find("bad magic") != std::string::npos);
  std::string no_d = bytes;
  no_d.erase(no_d.find("d=2\n"), 4);
  CHECK(message_of([&] { decode_field(no_d); }) == "missing header key 'd'");
  std::string malformed = bytes;
  malformed.insert(5, "nonsense\n");
  CHECK(message_of([&] { decode_field(malformed); }).find("malformed header line") != std::string::npos);
  CHECK_THROWS_AS(read_field("/nonexistent/dir/x.fsf"), std::runtime_error);
}

TEST_CASE("doubles print in shortest round-trip form") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(std::stod(format_double(2.0 / 7.0)) == 2.0 / 7.0);
}

TEST_CASE("PGM export") {
  SampledField f(Grid({2, 3}, 1.0));
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(i);
  const std::string pgm = encode_pgm(f);
  const std::string header = "P5\n3 2\n65535\n";
  REQUIRE(pgm.size() == header.size() + 12);
  CHECK(pgm.substr(0, header.size()) == header);
  auto px = [&](std::size_t i) {
    return (static_cast<unsigned char>(pgm[header.size() + 2 * i]) << 8) |
           static_cast<unsigned char>(pgm[header.size() + 2 * i + 1]);
  };
  CHECK(px(0) == 0);
  CHECK(px(5) == 65535);
  CHECK(px(1) == 13107);

  SampledField flat(Grid::cube(2, 2, 1.0));
  for (double& v : flat.values) v = -4.0;
  const std::string c = encode_pgm(flat);
  CHECK((static_cast<unsigned char>(c[c.size() - 2]) << 8 | static_cast<unsigned char>(c.back())) == 32768);
  CHECK_THROWS_AS(encode_pgm(SampledField(Grid::cube(1, 4, 1.0))), ParameterError);
}

TEST_CASE("CSV export") {
  SampledField line(Grid::cube(1, 3, 0.5));
  line[1] = 2.5;
  CHECK(encode_csv(line) == "0\n2.5\n0\n");
  SampledField plane(Grid::cube(2, 2, 0.5));
  plane[3] = 1.0;
  CHECK(encode_csv(plane) == "x,y,value\n0,0,0\n0,0.5,0\n0.5,0,0\n0.5,0.5,1\n");
}
