#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "fsw/cli.hpp"
#include "fsw/field_io.hpp"

using namespace fsw;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fsw");
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() : path(std::filesystem::temp_directory_path() / ("fsw_cli_test_" + std::to_string(::getpid()))) {
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("verify prints CHECK lines and exits 0 on success") {
  const Run r = run({"verify", "semigroup", "--n", "256", "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("seed=1") != std::string::npos);
  CHECK(r.out.find("CHECK semigroup PASS") != std::string::npos);
  const Run lap = run({"verify", "laplacian", "--gamma", "2.5", "--seed", "3"});
  CHECK(lap.code == 0);
  CHECK(lap.out.find("PASS") != std::string::npos);
}

TEST_CASE("window violations exit 2 with the inequality") {
  const Run r = run({"pair", "--gamma", "0.9", "--p", "1.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("gamma = 0.9 violates gamma <= d(1 - 1/p) = 0.333333") != std::string::npos);
  CHECK(run({"field", "--gamma", "1.6", "--p", "1.5", "--n", "256", "--seed", "1"}).code == 2);
  CHECK(run({"field", "--gamma", "0.75", "--p", "2", "--n", "100", "--seed", "1"}).code == 2);
}

TEST_CASE("argument errors exit 2") {
  CHECK(run({"field", "--gamma", "0.75", "--bogus", "1", "--seed", "1"}).code == 2);
  CHECK(run({"field", "--gamma", "0.75"}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"spectrum", "--in", "/nonexistent.fsf"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("field output is a readable file and runs are reproducible") {
  TempDir tmp;
  const auto a = tmp.path / "a.fsf", b = tmp.path / "b.fsf";
  const std::vector<std::string> base{"field", "--gamma", "0.75", "--p", "1.8", "--n", "512", "--seed", "9"};
  auto with_out = [&](const std::filesystem::path& p) {
    auto v = base;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  const Run r1 = run(with_out(a));
  REQUIRE(r1.code == 0);
  CHECK(r1.out.find("seed=9") != std::string::npos);
  REQUIRE(run(with_out(b)).code == 0);
  CHECK(slurp(a) == slurp(b));
  const auto [f, meta] = read_field(a);
  CHECK(f.size() == 512);
  CHECK(f[0] == 0.0);
  CHECK(meta.get("gamma") == "0.75");
  CHECK(meta.get("seed") == "9");

  const Run spec = run({"spectrum", "--in", a.string()});
  CHECK(spec.code == 0);
  CHECK(spec.out.find("slope") != std::string::npos);
}

TEST_CASE("config files fill in missing options") {
  TempDir tmp;
  const auto cfg = tmp.path / "run.cfg";
  {
    std::ofstream os(cfg);
    os << "# field settings\ngamma = 0.75\np=2\nn=256\nseed=5\n";
  }
  const auto out1 = tmp.path / "c.fsf", out2 = tmp.path / "d.fsf";
  REQUIRE(run({"field", "--config", cfg.string(), "--out", out1.string()}).code == 0);
  REQUIRE(run({"field", "--gamma", "0.75", "--p", "2", "--n", "256", "--seed", "5", "--out", out2.string()}).code == 0);
  CHECK(slurp(out1) == slurp(out2));
  // command line wins over the file
  const Run over = run({"field", "--config", cfg.string(), "--seed", "6"});
  CHECK(over.code == 0);
  CHECK(over.out.find("seed=6") != std::string::npos);
  {
    std::ofstream os(cfg);
    os << "colour=blue\n";
  }
  CHECK(run({"field", "--config", cfg.string(), "--gamma", "0.75", "--seed", "1"}).code == 2);
  {
    std::ofstream os(cfg);
    os << "not a pair\n";
  }
  CHECK(run({"field", "--config", cfg.string()}).code == 2);
}

TEST_CASE("sample-stable and ks agree") {
  TempDir tmp;
  const auto draws = tmp.path / "draws.txt";
  REQUIRE(run({"sample-stable", "--p", "1.5", "--n", "2000", "--seed", "4", "--out", draws.string()}).code == 0);
  const Run ks = run({"ks", "--in", draws.string(), "--p", "1.5"});
  CHECK(ks.code == 0);
  CHECK(ks.out.find("PASS") != std::string::npos);
}
