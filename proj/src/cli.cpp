#include "fsw/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "fsw/analysis.hpp"
#include "fsw/error.hpp"
#include "fsw/field_io.hpp"
#include "fsw/fracop.hpp"
#include "fsw/stable.hpp"
#include "fsw/synthesis.hpp"
#include "fsw/test_function.hpp"
#include "fsw/wavelet.hpp"

namespace fsw {
namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Check {
  std::ostream& out;
  bool all_pass = true;
  void operator()(const std::string& name, bool pass, double value, double bound) {
    out << "CHECK " << name << ' ' << (pass ? "PASS" : "FAIL") << ' ' << num(value) << ' '
        << num(bound) << '\n';
    all_pass = all_pass && pass;
  }
  int code() const { return all_pass ? 0 : 1; }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ParameterError("invalid number '" + part + "' in list '" + text + "'");
    }
  }
  if (out.empty()) throw ParameterError("empty list");
  return out;
}

std::size_t side_for(std::size_t d, std::size_t requested, std::size_t d1, std::size_t d2) {
  if (requested) return requested;
  return d == 1 ? d1 : d2;
}

TestFunction::Shape shape_from(const std::string& name) {
  if (name == "bump") return TestFunction::Shape::bump;
  if (name == "derivative") return TestFunction::Shape::bump_derivative;
  if (name == "laplacian") return TestFunction::Shape::bump_laplacian;
  if (name == "modulated") return TestFunction::Shape::modulated_bump;
  throw ParameterError("unknown test function shape '" + name + "'");
}

std::string basis_name(int order) { return "daubechies" + std::to_string(order); }

// Loads key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParameterError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParameterError("config line " + std::to_string(lineno) + " is not key=value");
    }
    auto key = line.substr(0, eq);
    auto value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    kv[key] = value;
  }
  return kv;
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

std::vector<double> read_samples(const std::string& path) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".fsf") return read_field(path).first.values;
  std::ifstream is(path);
  if (!is) throw ParameterError("cannot open '" + path + "'");
  std::vector<double> v;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    v.push_back(std::stod(line));
  }
  return v;
}

struct Common {
  std::size_t d = 1;
  std::size_t n = 0;
  double length = 1.0;
  double gamma = 0.0;
  double p = 2.0;
  int order = 6;
  std::optional<std::uint64_t> seed;
  int jmin = 0;
  int jmax = -1;
  bool no_scaling = false;
  bool unsafe = false;
};

void add_window(CLI::App* sub, Common& c) {
  sub->add_option("--jmin", c.jmin, "Coarsest level of the truncation window");
  sub->add_option("--jmax", c.jmax, "Finest level (default log2(n) - 1)");
  sub->add_flag("--no-scaling", c.no_scaling, "Drop the coarse scaling atoms");
  sub->add_option("--order", c.order, "Daubechies order (vanishing moments)")->capture_default_str();
  sub->add_flag("--unsafe", c.unsafe, "Skip parameter window validation");
}

Grid make_grid(const Common& c, std::size_t side) { return Grid::cube(c.d, side, c.length / static_cast<double>(side)); }

TruncationSpec make_trunc(const Common& c, const Grid& grid) {
  TruncationSpec t = TruncationSpec::full(grid);
  t.j_min = c.jmin;
  if (c.jmax >= 0) t.j_max = c.jmax;
  t.include_scaling = !c.no_scaling;
  t.validate(grid);
  return t;
}

std::uint64_t need_seed(const Common& c) {
  if (!c.seed) throw ParameterError("--seed is required for randomized commands");
  return *c.seed;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional stable wavelet fields: synthesis, analysis and checks", "fsw"};
  app.require_subcommand(1);

  Common c;
  std::string in_path, out_path, csv_path, pgm_path;

  // sample-stable
  double sigma = 1.0;
  std::size_t count = 0;
  std::uint64_t stream = 0;
  auto* sample = app.add_subcommand("sample-stable", "Draw iid symmetric p-stable variates");
  sample->add_option("--p", c.p, "Stability index in (0, 2]")->required();
  sample->add_option("--sigma", sigma, "Scale")->capture_default_str();
  sample->add_option("--n", count, "Number of draws")->required();
  sample->add_option("--seed", c.seed, "Random seed")->required();
  sample->add_option("--stream", stream, "Stream id")->capture_default_str();
  sample->add_option("--out", out_path, "Write draws to this file (one per line)");

  // field
  std::string kind = "y";
  auto* field = app.add_subcommand("field", "Synthesize a truncated random field");
  field->add_option("--d", c.d, "Dimension 1..3")->capture_default_str();
  field->add_option("--gamma", c.gamma, "Fractional order")->required();
  field->add_option("--p", c.p, "Stability index")->capture_default_str();
  field->add_option("--n", c.n, "Points per axis (power of two)");
  field->add_option("--length", c.length, "Domain side length")->capture_default_str();
  field->add_option("--seed", c.seed, "Random seed")->required();
  field->add_option("--kind", kind, "y (modified, pointwise) or x (Riesz potential of wavelet noise)")
      ->check(CLI::IsMember({"y", "x"}));
  field->add_option("--out", out_path, "FSF output path");
  field->add_option("--csv", csv_path, "CSV output path");
  field->add_option("--pgm", pgm_path, "PGM output path (d = 2)");
  add_window(field, c);

  // pair
  double a = 1.0, radius = 1.0;
  std::string shape = "bump";
  std::string ss_shape = "derivative";
  std::size_t draws = 0;
  auto* pair = app.add_subcommand("pair", "SpS scale (and optional draws) of <X_g, phi(a .)>");
  pair->add_option("--d", c.d, "Dimension 1..3")->capture_default_str();
  pair->add_option("--gamma", c.gamma, "Fractional order")->required();
  pair->add_option("--p", c.p, "Stability index")->required();
  pair->add_option("--a", a, "Dilation")->capture_default_str();
  pair->add_option("--n", c.n, "Points per axis (power of two)");
  pair->add_option("--length", c.length, "Domain side length");
  pair->add_option("--radius", radius, "Test function radius")->capture_default_str();
  pair->add_option("--shape", shape, "bump | derivative | laplacian | modulated")->capture_default_str();
  pair->add_option("--draws", draws, "Monte Carlo draws of the pairing");
  pair->add_option("--seed", c.seed, "Random seed (required with --draws)");
  pair->add_option("--out", out_path, "Write draws to this file");
  add_window(pair, c);

  // tails
  std::string mode = "pairing", ladder_text = "4,6,8";
  bool coarse = false;
  auto* tails = app.add_subcommand("tails", "Truncation tail diagnostic over a ladder of windows");
  tails->add_option("--mode", mode, "pairing | field")->check(CLI::IsMember({"pairing", "field"}));
  tails->add_option("--d", c.d, "Dimension 1..3")->capture_default_str();
  tails->add_option("--gamma", c.gamma, "Fractional order")->required();
  tails->add_option("--p", c.p, "Stability index")->required();
  tails->add_option("--n", c.n, "Points per axis (power of two)");
  tails->add_option("--length", c.length, "Domain side length");
  tails->add_option("--ladder", ladder_text, "Comma separated rung levels")->capture_default_str();
  tails->add_flag("--coarse", coarse, "Rungs are j_min values (coarse ladder, no scaling atoms)");
  tails->add_option("--shape", shape, "Test function shape (pairing mode)");
  tails->add_option("--radius", radius, "Test function radius (pairing mode)");
  tails->add_option("--seed", c.seed, "Random seed (field mode)");
  tails->add_option("--order", c.order, "Daubechies order")->capture_default_str();
  tails->add_flag("--unsafe", c.unsafe, "Skip parameter window validation");

  // verify
  double alpha = 0.3, beta = 0.4, s = 0.4;
  std::string a_list = "0.5,1,2,4";
  std::size_t corpus = 20;
  auto* verify = app.add_subcommand("verify", "Numerical checks; prints CHECK lines");
  verify->require_subcommand(1);
  auto add_basic = [&](CLI::App* v, bool seeded) {
    v->add_option("--d", c.d, "Dimension 1..3")->capture_default_str();
    v->add_option("--n", c.n, "Points per axis");
    v->add_option("--length", c.length, "Domain side length");
    v->add_option("--order", c.order, "Daubechies order")->capture_default_str();
    auto* opt = v->add_option("--seed", c.seed, "Random seed");
    if (seeded) opt->required();
  };
  auto* v_parseval = verify->add_subcommand("parseval", "Wavelet transform energy and reconstruction");
  add_basic(v_parseval, true);
  auto* v_scaling = verify->add_subcommand("scaling", "Riesz potential dilation identity");
  add_basic(v_scaling, false);
  v_scaling->add_option("--gamma", c.gamma, "Fractional order")->required();
  auto* v_semigroup = verify->add_subcommand("semigroup", "I_a I_b = I_{a+b}");
  add_basic(v_semigroup, true);
  v_semigroup->add_option("--alpha", alpha)->capture_default_str();
  v_semigroup->add_option("--beta", beta)->capture_default_str();
  auto* v_laplacian = verify->add_subcommand("laplacian", "Laplacian of I_g against I_{g-2}");
  add_basic(v_laplacian, true);
  v_laplacian->add_option("--gamma", c.gamma, "Fractional order > 2")->required();
  auto* v_kernel = verify->add_subcommand("kernel", "Homogeneity of ||K_g(x, .)||_p in |x|");
  v_kernel->add_option("--d", c.d)->capture_default_str();
  v_kernel->add_option("--p", c.p)->required();
  v_kernel->add_option("--gamma", c.gamma)->required();
  auto* v_t1 = verify->add_subcommand("t1", "Wavelet l^p sandwich on the test corpus");
  add_basic(v_t1, false);
  v_t1->add_option("--p", c.p)->required();
  v_t1->add_option("--s", s)->required();
  v_t1->add_option("--count", corpus, "Corpus size")->capture_default_str();
  auto* v_weighted = verify->add_subcommand("weighted", "Weighted Fourier sampling bound");
  add_basic(v_weighted, false);
  v_weighted->add_option("--p", c.p)->required();
  v_weighted->add_option("--radius", radius, "Bump radius (< 1/4)");
  auto* v_ss = verify->add_subcommand("ssbounds", "Scale bounds for dilated pairings");
  add_basic(v_ss, false);
  v_ss->add_option("--p", c.p)->required();
  v_ss->add_option("--gamma", c.gamma)->required();
  v_ss->add_option("--s", s)->required();
  v_ss->add_option("--a", a_list, "Comma separated dilations")->capture_default_str();
  v_ss->add_option("--shape", ss_shape)->capture_default_str();
  v_ss->add_option("--radius", radius)->capture_default_str();

  // spectrum / hausdorff / ks / export-pgm
  double band_lo = 1.0, band_hi = -1.0;
  auto* spectrum = app.add_subcommand("spectrum", "Radially averaged periodogram slope of a field file");
  spectrum->add_option("--in", in_path, "FSF input")->required();
  spectrum->add_option("--band-lo", band_lo, "Lowest shell (units of 1/L)");
  spectrum->add_option("--band-hi", band_hi, "Highest shell (default Nyquist/4)");
  spectrum->add_option("--csv", csv_path, "Write frequency,power rows");

  std::string rho_list;
  auto* hausdorff = app.add_subcommand("hausdorff", "Box dimension and Frostman energies of a d = 1 field");
  hausdorff->add_option("--in", in_path, "FSF input")->required();
  hausdorff->add_option("--rho", rho_list, "Comma separated Frostman exponents");

  auto* ks = app.add_subcommand("ks", "Kolmogorov-Smirnov distance to an SpS law");
  ks->add_option("--in", in_path, "Samples (text, one per line, or .fsf)")->required();
  ks->add_option("--p", c.p)->required();
  ks->add_option("--sigma", sigma)->capture_default_str();

  auto* pgm = app.add_subcommand("export-pgm", "Convert a d = 2 field file to PGM");
  pgm->add_option("--in", in_path, "FSF input")->required();
  pgm->add_option("--out", out_path, "PGM output")->required();

  try {
    // Config file: keys not given on the command line are appended as flags.
    std::vector<std::string> args;
    std::string config_path;
    for (std::size_t i = 1; i < raw_args.size(); ++i) {
      if (raw_args[i] == "--config" && i + 1 < raw_args.size()) {
        config_path = raw_args[++i];
      } else if (raw_args[i].rfind("--config=", 0) == 0) {
        config_path = raw_args[i].substr(9);
      } else {
        args.push_back(raw_args[i]);
      }
    }
    if (!config_path.empty()) {
      CLI::App* target = nullptr;
      if (!args.empty()) target = app.get_subcommand_no_throw(args[0]);
      if (target == verify && args.size() > 1) target = verify->get_subcommand_no_throw(args[1]);
      if (!target) throw CLI::ValidationError("--config needs a subcommand");
      for (const auto& [key, value] : read_config(config_path)) {
        const std::string flag = "--" + key;
        if (given(args, flag)) continue;
        auto* opt = target->get_option_no_throw(flag);
        if (!opt) throw ParameterError("config key '" + key + "' is not an option of this command");
        if (opt->get_expected_max() == 0) {
          if (value == "true" || value == "1" || value == "yes") args.push_back(flag);
        } else {
          args.push_back(flag);
          args.push_back(value);
        }
      }
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (c.seed && !sample->parsed()) out << "seed=" << *c.seed << '\n';
    Check check{out};

    if (sample->parsed()) {
      const StableLaw law(c.p, sigma);
      out << "seed=" << *c.seed << '\n';
      const auto x = sample_sps(law, count, *c.seed, stream);
      std::string text;
      for (double v : x) text += format_double(v) + "\n";
      if (out_path.empty()) {
        out << text;
      } else {
        write_bytes_atomic(out_path, text);
        out << "wrote " << x.size() << " draws to " << out_path << '\n';
      }
      return 0;
    }

    if (field->parsed()) {
      const std::size_t side = side_for(c.d, c.n, 4096, 256);
      const auto basis = WaveletBasis::build(WaveletFamily::daubechies, c.order, c.d);
      const Grid grid = make_grid(c, side);
      const TruncationSpec trunc = make_trunc(c, grid);
      const StableLaw law(c.p);
      const std::uint64_t seed = need_seed(c);
      const SampledField f = kind == "y" ? field_y(c.gamma, law, grid, basis, trunc, seed, {c.unsafe})
                                         : field_x(c.gamma, law, grid, basis, trunc, seed);
      FieldMetadata meta;
      meta.set("gamma", format_double(c.gamma));
      meta.set("p", format_double(c.p));
      meta.set("seed", std::to_string(seed));
      meta.set("jmin", std::to_string(trunc.j_min));
      meta.set("jmax", std::to_string(trunc.j_max));
      meta.set("basis", basis_name(c.order));
      meta.set("kind", kind);
      if (trunc.include_scaling == false) meta.set("scaling", "0");
      if (!out_path.empty()) write_field(f, meta, out_path);
      if (!csv_path.empty()) export_csv(f, csv_path);
      if (!pgm_path.empty()) export_pgm(f, pgm_path);
      out << "field kind=" << kind << " d=" << c.d << " n=" << side << " gamma=" << num(c.gamma)
          << " p=" << num(c.p) << " max|Y|=" << num(lp_norm(f, INFINITY)) << '\n';
      return 0;
    }

    if (pair->parsed()) {
      const std::size_t side = side_for(c.d, c.n, 2048, 128);
      if (!pair->get_option("--length")->count()) c.length = 16.0 * radius;
      const auto basis = WaveletBasis::build(WaveletFamily::daubechies, c.order, c.d);
      const Grid grid = make_grid(c, side);
      const TruncationSpec trunc = make_trunc(c, grid);
      const TestFunction phi(shape_from(shape), c.d, Point{}, radius, 1.0, 1.0 / radius);
      const auto r = pair_scale(phi, c.gamma, c.p, a, basis, grid, trunc, {c.unsafe});
      out << "sigma=" << num(r.sigma) << " l2=" << num(r.l2) << " p=" << num(c.p) << " a=" << num(a)
          << '\n';
      if (draws > 0) {
        const std::uint64_t seed = need_seed(c);
        const auto x = pair_sample(r.coefficients, StableLaw(c.p), draws, seed);
        if (!out_path.empty()) {
          std::string text;
          for (double v : x) text += format_double(v) + "\n";
          write_bytes_atomic(out_path, text);
        }
        if (x.size() >= 100 && r.sigma > 0.0) {
          // The draws use the scale at a = 1 on the sampled pairing.
          const double sig = r.sigma / std::pow(a, static_cast<double>(c.d) / 2.0);
          const double D = ecdf_ks(x, StableLaw(c.p, sig));
          out << "ks=" << num(D) << '\n';
        }
      }
      return 0;
    }

    if (tails->parsed()) {
      const std::size_t side = side_for(c.d, c.n, 1024, 128);
      if (!tails->get_option("--length")->count()) c.length = mode == "pairing" ? 16.0 * radius : 1.0;
      const auto basis = WaveletBasis::build(WaveletFamily::daubechies, c.order, c.d);
      const Grid grid = make_grid(c, side);
      const int J = grid.dyadic_levels();
      std::vector<TruncationSpec> ladder;
      for (double v : parse_list(ladder_text)) {
        const int j = static_cast<int>(v);
        ladder.push_back(coarse ? TruncationSpec{j, J - 1, false} : TruncationSpec{0, j, true});
      }
      const TailReport rep =
          mode == "pairing"
              ? pairing_tails(TestFunction(shape_from(shape), c.d, Point{}, radius, 1.0, 1.0 / radius),
                              c.gamma, c.p, basis, grid, ladder, {c.unsafe})
              : field_tails(c.gamma, StableLaw(c.p), basis, grid, ladder, need_seed(c), {c.unsafe});
      for (std::size_t i = 0; i < rep.residuals.size(); ++i) {
        out << "rung " << i << " residual=" << num(rep.residuals[i]);
        if (i > 0) out << " ratio=" << num(rep.ratios[i - 1]);
        out << '\n';
      }
      check("tails_decreasing", rep.strictly_decreasing,
            rep.ratios.empty() ? 0.0 : *std::max_element(rep.ratios.begin(), rep.ratios.end()), 1.0);
      return check.code();
    }

    if (verify->parsed()) {
      const std::size_t side = side_for(c.d, c.n, 4096, 64);
      auto grid = [&] { return make_grid(c, side); };
      auto random_field = [&](const Grid& g) {
        const auto v = sample_sps(StableLaw(2.0), g.count(), need_seed(c), 1);
        return SampledField(g, v);
      };

      if (v_parseval->parsed()) {
        const auto basis = WaveletBasis::build(WaveletFamily::daubechies, c.order, c.d);
        const Grid g = grid();
        const SampledField f = random_field(g);
        const CoeffField co = analyze(f, basis);
        const double energy = std::pow(lp_norm(f, 2.0), 2.0);
        const double rel = std::abs(co.lp_sum(2.0) - energy) / energy;
        check("parseval", rel < 1e-10, rel, 1e-10);
        const double rec = relative_l2(synthesize(co, basis), f);
        check("reconstruction", rec < 1e-10, rec, 1e-10);
      } else if (v_scaling->parsed()) {
        const Grid g = grid();
        const int m = static_cast<int>(std::max<std::size_t>(2, side / 32));
        const SampledField f = band_limited_bump(g, m);
        SampledField f2(g), rhs(g);
        const SampledField If = riesz_apply(f, c.gamma);
        for (std::size_t i = 0; i < g.count(); ++i) {
          MultiIndex mi = g.unravel(i);
          for (std::size_t ax = 0; ax < c.d; ++ax) mi[ax] = (2 * mi[ax]) % g.side(ax);
          f2[i] = f[g.ravel(mi)];
          rhs[i] = std::pow(2.0, -c.gamma) * If[g.ravel(mi)];
        }
        const double rel = relative_l2(riesz_apply(f2, c.gamma), rhs);
        check("riesz_scaling", rel < 1e-6, rel, 1e-6);
      } else if (v_semigroup->parsed()) {
        const SampledField f = random_field(grid());
        const double rel = relative_l2(riesz_apply(riesz_apply(f, alpha), beta), riesz_apply(f, alpha + beta));
        check("semigroup", rel < 1e-10, rel, 1e-10);
      } else if (v_laplacian->parsed()) {
        const Grid g = grid();
        Point shift{};
        for (std::size_t ax = 0; ax < c.d; ++ax) shift[ax] = g.length(ax) * static_cast<double>(need_seed(c) % 97) / 97.0;
        const int m = static_cast<int>(std::max<std::size_t>(2, side / 32));
        const LaplacianCheck lc = laplacian_identity_check(band_limited_bump(g, m, shift), c.gamma);
        out << "sign=" << (lc.sign < 0 ? "-" : "+") << '\n';
        check("laplacian", lc.residual < 1e-8, lc.residual, 1e-8);
      } else if (v_kernel->parsed()) {
        std::vector<double> lx, ly;
        for (int k = 0; k <= 8; ++k) {
          const double r = 0.25 * std::pow(2.0, k / 2.0);
          Point x{};
          x[0] = r;
          lx.push_back(std::log(r));
          ly.push_back(std::log(kernel_norm(x, c.d, c.gamma, c.p)));
        }
        double mx = 0, my = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
        mx /= static_cast<double>(lx.size());
        my /= static_cast<double>(lx.size());
        for (std::size_t i = 0; i < lx.size(); ++i) sxx += (lx[i] - mx) * (lx[i] - mx), sxy += (lx[i] - mx) * (ly[i] - my);
        const double slope = sxy / sxx;
        const double expect = c.gamma - (1.0 - 1.0 / c.p) * static_cast<double>(c.d);
        out << "slope=" << num(slope) << " expected=" << num(expect) << '\n';
        check("kernel_homogeneity", std::abs(slope - expect) < 0.02, std::abs(slope - expect), 0.02);
      } else if (v_t1->parsed()) {
        if (!v_t1->get_option("--length")->count()) c.length = 16.0;
        const std::size_t n1 = side_for(c.d, c.n, 1024, 64);
        const auto basis = WaveletBasis::build(WaveletFamily::daubechies, c.order, c.d);
        const Grid g = make_grid(c, n1);
        std::size_t violations = 0;
        double worst = 0.0;
        for (const auto& phi : test_corpus(c.d, corpus, c.length)) {
          const BoundReport r = t1_bounds(phi, g, c.p, s, basis);
          if (!(r.lower <= r.value * (1.0 + 1e-12))) ++violations;
          worst = std::max(worst, r.constant);
        }
        out << "C_emp=" << num(worst) << '\n';
        check("t1_lower", violations == 0, static_cast<double>(violations), 0.0);
      } else if (v_weighted->parsed()) {
        const std::size_t n1 = side_for(c.d, c.n, 1024, 64);
        const Grid g = Grid::cube(c.d, n1, 1.0 / static_cast<double>(n1));
        const double rad = radius < 0.25 ? radius : 0.2;
        const SampledField f = TestFunction::bump(c.d, rad).sample(g);
        const BoundReport r = weighted_sampling_bound(f, c.p);
        out << "lhs=" << num(r.value) << " C=" << num(sampling_constant(c.d)) << " ratio=" << num(r.constant)
            << '\n';
        check("weighted_sampling", r.pass(), r.value, r.upper);
      } else if (v_ss->parsed()) {
        const std::size_t n1 = side_for(c.d, c.n, 4096, 128);
        if (!v_ss->get_option("--length")->count()) c.length = 64.0 * radius;
        const auto basis = WaveletBasis::build(WaveletFamily::daubechies, c.order, c.d);
        const Grid g = make_grid(c, n1);
        const TestFunction phi(shape_from(ss_shape), c.d, Point{}, radius, 1.0, 1.0 / radius);
        for (double av : parse_list(a_list)) {
          const BoundReport r = ss_bounds(phi, c.gamma, c.p, s, av, basis, g, TruncationSpec::full(g));
          out << r.describe() << '\n';
          check("ssbounds_a=" + num(av), r.pass(), r.value, r.upper);
        }
      }
      return check.code();
    }

    if (spectrum->parsed()) {
      const auto [f, meta] = read_field(in_path);
      const PeriodogramFit fit = periodogram(f, band_lo, band_hi);
      out << "slope=" << num(fit.slope) << '\n';
      if (meta.has("gamma")) out << "expected=" << num(-2.0 * std::stod(meta.get("gamma"))) << '\n';
      if (!csv_path.empty()) {
        std::string text = "frequency,power\n";
        for (std::size_t i = 0; i < fit.power.size(); ++i) {
          text += format_double(fit.frequencies[i]) + "," + format_double(fit.power[i]) + "\n";
        }
        write_bytes_atomic(csv_path, text);
      }
      return 0;
    }

    if (hausdorff->parsed()) {
      const auto [f, meta] = read_field(in_path);
      const DimensionEstimate est = box_dimension(f);
      out << "box_dimension=" << num(est.estimate) << " stderr=" << num(est.std_error) << '\n';
      if (meta.has("gamma")) {
        const double g = std::stod(meta.get("gamma"));
        out << "bound=" << num(1.5 * static_cast<double>(f.grid.dim()) - g + 1.0) << '\n';
      }
      if (!rho_list.empty()) {
        const SampledField half = coarsen(f);
        for (double rho : parse_list(rho_list)) {
          const double e1 = frostman_energy(f, rho);
          const double e2 = frostman_energy(half, rho);
          out << "rho=" << num(rho) << " energy=" << num(e1) << " energy_2h=" << num(e2)
              << " ratio=" << num(e1 / e2) << '\n';
        }
      }
      return 0;
    }

    if (ks->parsed()) {
      const auto x = read_samples(in_path);
      const double D = ecdf_ks(x, StableLaw(c.p, sigma));
      const double crit = 1.36 / std::sqrt(static_cast<double>(x.size()));
      check("ks", D < crit, D, crit);
      return check.code();
    }

    if (pgm->parsed()) {
      export_pgm(read_field(in_path).first, out_path);
      out << "wrote " << out_path << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace fsw
