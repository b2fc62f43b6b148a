#include "hypint/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <vector>

#include "hypint/contour.hpp"
#include "hypint/errors.hpp"
#include "hypint/euler.hpp"
#include "hypint/identities.hpp"
#include "hypint/series.hpp"

namespace hypint {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool parse_double(std::string_view s, double& v) {
  std::string buf(s);
  if (buf.empty()) return false;
  char* end = nullptr;
  errno = 0;
  v = std::strtod(buf.c_str(), &end);
  return errno == 0 && end == buf.c_str() + buf.size();
}

Complex complex_arg(const std::string& text, const char* what) {
  auto z = parse_complex(text);
  if (!z) throw UsageError(std::string("bad complex literal for ") + what + ": '" + text + "'");
  return *z;
}

std::vector<Complex> complex_args(const std::vector<std::string>& texts) {
  std::vector<Complex> out;
  for (const auto& t : texts) out.push_back(complex_arg(t, "--params"));
  return out;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void print_eval(std::ostream& out, const EvalResult& r, bool machine, const std::string& fn, const std::string& rep) {
  if (machine) {
    nlohmann::ordered_json j;
    j["function"] = fn;
    j["rep"] = rep;
    j["value"] = {r.value.real(), r.value.imag()};
    j["err_estimate"] = r.err_estimate;
    j["method"] = method_name(r.method);
    j["terms_or_nodes"] = r.terms_or_nodes;
    out << j.dump() << "\n";
    return;
  }
  out << "value=" << fmt("%.17g", r.value.real()) << "," << fmt("%.17g", r.value.imag())
      << " err_estimate=" << fmt("%.3e", r.err_estimate) << " method=" << method_name(r.method)
      << " terms_or_nodes=" << r.terms_or_nodes << "\n";
}

// Tries each evaluator in turn; parameter, degeneracy and geometry
// obstructions move on to the next one.
EvalResult first_working(const std::vector<std::function<EvalResult()>>& tries) {
  for (std::size_t i = 0; i + 1 < tries.size(); ++i) {
    try {
      return tries[i]();
    } catch (const ConstraintError&) {
    } catch (const DegenerateError&) {
    } catch (const GeometryError&) {
    }
  }
  return tries.back()();
}

LoopSpec fitted_loop() {
  LoopSpec s;
  s.shrink_to_fit = true;
  return s;
}

EvalResult evaluate(const std::string& fn, const std::vector<Complex>& p, Complex x, Complex y, const std::string& rep,
                    double tol) {
  const std::map<std::string, std::size_t> arity{{"h2", 5}, {"fp", 5}, {"2f1", 3}, {"f1", 4}};
  auto it = arity.find(fn);
  if (it == arity.end()) throw UsageError("unknown function '" + fn + "' (h2, fp, 2f1, f1)");
  if (p.size() != it->second)
    throw UsageError(fn + " takes " + std::to_string(it->second) + " parameters, got " + std::to_string(p.size()));
  std::optional<Rep> tag = parse_rep(rep);
  auto unsupported = [&]() { return UsageError("representation '" + rep + "' does not evaluate " + fn); };

  if (fn == "2f1") {
    if (rep == "auto" || rep == "series") return hyp2f1(p[0], p[1], p[2], x, std::min(tol, 1e-15));
    if (rep == "loop") return hyp2f1_loop(LoopMode::outside, p[0], p[1], p[2], x, fitted_loop(), std::min(tol, 1e-13));
    if (tag && (*tag == Rep::E2_2 || *tag == Rep::E2_3 || *tag == Rep::E2_4 || *tag == Rep::E2_5))
      return hyp2f1_euler(*tag, p[0], p[1], p[2], x, tol);
    throw unsupported();
  }
  if (fn == "f1") {
    if (rep == "series") return appell_f1(p[0], p[1], p[2], p[3], x, y);
    if (rep == "auto") {
      if (std::abs(x) < 1.0 && std::abs(y) < 1.0) return appell_f1(p[0], p[1], p[2], p[3], x, y);
      return appell_f1_continued(p[0], p[1], p[2], p[3], x, y);
    }
    throw unsupported();
  }
  if (fn == "h2") {
    H2Params h{p[0], p[1], p[2], p[3], p[4]};
    if (rep == "series") return h2_series(h, x, y);
    if (rep == "loop") return kita_h2_loop(h, x, y, fitted_loop(), std::max(tol, 1e-12));
    if (tag && (*tag == Rep::H3_3 || *tag == Rep::H3_5 || *tag == Rep::H3_7 || *tag == Rep::H3_8))
      return h2_integral(*tag, h, x, y, tol);
    if (rep != "auto") throw unsupported();
    if (region_contains(Region::Omega1, x, y)) return h2_series(h, x, y);
    std::vector<std::function<EvalResult()>> tries;
    if (in_h2_single_region(x, y)) tries.push_back([&] { return h2_integral(Rep::H3_3, h, x, y, tol); });
    if (in_h2_transformed_region(x, y)) tries.push_back([&] { return h2_integral(Rep::H3_7, h, x, y, tol); });
    tries.push_back([&] { return kita_h2_loop(h, x, y, fitted_loop(), std::max(tol, 1e-12)); });
    return first_working(tries);
  }
  FPParams f{p[0], p[1], p[2], p[3], p[4]};
  if (rep == "series") return fp_series(f, x, y);
  if (tag && (*tag == Rep::FP4_6 || *tag == Rep::FP_eq32 || *tag == Rep::FP4_7 || *tag == Rep::FP4_7a))
    return fp_integral(*tag, f, x, y, tol);
  if (rep != "auto") throw unsupported();
  if (region_contains(Region::FP41, x, y) || region_contains(Region::FP44, x, y)) return fp_series(f, x, y);
  std::vector<std::function<EvalResult()>> tries;
  if (std::abs(x) < 1.0) tries.push_back([&] { return fp_value(f, x, y); });
  tries.push_back([&] { return fp_integral(Rep::FP4_6, f, x, y, tol); });
  return first_working(tries);
}

std::pair<double, double> range_arg(const std::string& text, const char* what) {
  auto pos = text.find(',');
  double lo = 0, hi = 0;
  if (pos == std::string::npos || !parse_double(std::string_view(text).substr(0, pos), lo) ||
      !parse_double(std::string_view(text).substr(pos + 1), hi) || !(lo <= hi))
    throw UsageError(std::string("bad range for ") + what + ": '" + text + "' (want lo,hi)");
  return {lo, hi};
}

void region_grid(std::ostream& out, const std::vector<std::string>& names, std::pair<double, double> xr,
                 std::pair<double, double> yr, int n) {
  std::vector<Region> regions;
  if (names.empty()) {
    for (Region r : {Region::Omega1, Region::Omega2Real, Region::FP41, Region::FP44, Region::Thm41Domain,
                     Region::Case1, Region::Case2, Region::Case3, Region::Case4})
      regions.push_back(r);
  }
  for (const auto& nm : names) {
    auto r = parse_region(nm);
    if (!r) throw UsageError("unknown region '" + nm + "'");
    regions.push_back(*r);
  }
  if (n < 1) throw UsageError("--n must be positive");
  out << "x,y";
  for (Region r : regions) out << "," << region_name(r);
  out << "\n";
  auto at = [](std::pair<double, double> r, int i, int n) {
    return n == 1 ? r.first : r.first + (r.second - r.first) * i / (n - 1);
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = at(xr, i, n), y = at(yr, j, n);
      out << fmt("%.17g", x) << "," << fmt("%.17g", y);
      for (Region r : regions) out << "," << (region_contains(r, x, y) ? 1 : 0);
      out << "\n";
    }
  }
}

int verify(std::ostream& out, std::ostream& err, const std::string& suite, std::uint64_t seed, const std::string& id,
           const std::vector<std::string>& params, const std::string& xs, const std::string& ys, double tol,
           bool machine, bool list) {
  if (list) {
    for (const auto& s : identity_registry()) out << s.id << "  " << s.summary << "\n";
    return kExitOk;
  }
  if (id.empty()) {
    if (suite != "fast" && suite != "full") throw UsageError("--suite must be fast or full");
    auto reports = run_suite(suite == "fast" ? Suite::fast : Suite::full, seed, tol);
    out << format_reports(reports, machine ? ReportFormat::machine : ReportFormat::text);
    for (const auto& r : reports)
      if (r.status == Status::fail) return kExitDomain;
    return kExitOk;
  }
  const IdentitySpec* spec = find_identity(id);
  if (!spec) throw UsageError("unknown identity '" + id + "' (see verify --list)");
  IdentityPoint pt{complex_args(params), complex_arg(xs, "--x"), ys.empty() ? Complex(0.0) : complex_arg(ys, "--y")};
  if (pt.params.size() != spec->arity)
    throw UsageError(id + " takes " + std::to_string(spec->arity) + " parameters, got " +
                     std::to_string(pt.params.size()));
  std::string status;
  ResidualRecord r;
  try {
    r = check_identity(*spec, pt, tol);
    status = r.pass ? "pass" : "fail";
  } catch (const SkippedError& e) {
    err << "skipped: " << e.what() << "\n";
    status = "skipped";
  }
  if (machine) {
    nlohmann::ordered_json j;
    j["id"] = id;
    j["lhs"] = {r.lhs.real(), r.lhs.imag()};
    j["rhs"] = {r.rhs.real(), r.rhs.imag()};
    j["residual"] = r.residual;
    j["threshold"] = r.threshold;
    j["status"] = status;
    out << j.dump() << "\n";
  } else {
    out << "id=" << id << " lhs=" << fmt("%.17g", r.lhs.real()) << "," << fmt("%.17g", r.lhs.imag())
        << " rhs=" << fmt("%.17g", r.rhs.real()) << "," << fmt("%.17g", r.rhs.imag())
        << " residual=" << fmt("%.5e", r.residual) << " threshold=" << fmt("%.5e", r.threshold)
        << " status=" << status << "\n";
  }
  return status == "fail" ? kExitDomain : kExitOk;
}

}  // namespace

std::optional<Complex> parse_complex(std::string_view text) {
  double re = 0, im = 0;
  auto pos = text.find(',');
  if (pos == std::string_view::npos) {
    if (!parse_double(text, re)) return std::nullopt;
    return Complex(re, 0.0);
  }
  if (!parse_double(text.substr(0, pos), re) || !parse_double(text.substr(pos + 1), im)) return std::nullopt;
  return Complex(re, im);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluate H2, F_P, 2F1 and F1 and verify identities between them"};
  app.require_subcommand(1);

  std::string out_path, format = "text";
  double tol = 1e-8;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "write output to this file");
    sub->add_option("--format", format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
  };

  std::string fn, rep = "auto", xs, ys;
  std::vector<std::string> params;
  auto* eval = app.add_subcommand("eval", "evaluate one function value");
  eval->add_option("function", fn, "h2, fp, 2f1 or f1")->required();
  eval->add_option("--params", params, "parameters as re or re,im")->required();
  eval->add_option("--x", xs, "first argument (z for 2f1)")->required();
  eval->add_option("--y", ys, "second argument");
  eval->add_option("--rep", rep, "auto, series, loop or a representation tag such as H3.3");
  eval->add_option("--tol", tol, "requested tolerance");
  common(eval);

  std::string suite = "fast", id;
  std::uint64_t seed = 42;
  bool list = false;
  auto* ver = app.add_subcommand("verify", "run the identity suite or check one identity");
  ver->add_option("--suite", suite, "fast (10 samples per identity) or full (100)");
  ver->add_option("--seed", seed, "sampler seed");
  ver->add_option("--id", id, "check a single identity at --params/--x/--y");
  ver->add_option("--params", params, "parameters as re or re,im");
  ver->add_option("--x", xs, "first argument");
  ver->add_option("--y", ys, "second argument");
  ver->add_option("--tol", tol, "quadrature tolerance");
  ver->add_flag("--list", list, "list identity ids");
  common(ver);

  std::vector<std::string> regions;
  std::string xrange = "-2,2", yrange = "-2,2";
  int n = 21;
  auto* reg = app.add_subcommand("region", "CSV grid of region membership at real points");
  reg->add_option("regions", regions, "region names (default: all)");
  reg->add_option("--xrange", xrange, "lo,hi");
  reg->add_option("--yrange", yrange, "lo,hi");
  reg->add_option("--n", n, "grid points per axis");
  reg->add_option("--out", out_path, "write output to this file");

  std::string kind = "plain";
  double epsilon = 0.25;
  int samples = 16;
  auto* dump = app.add_subcommand("loop-dump", "CSV of a double-loop contour with tracked arguments");
  dump->add_option("--kind", kind, "plain, kita or olsson")->check(CLI::IsMember({"plain", "kita", "olsson"}));
  dump->add_option("--x", xs, "x (kita, olsson)");
  dump->add_option("--y", ys, "y (kita, olsson)");
  dump->add_option("--epsilon", epsilon, "loop radius");
  dump->add_option("--samples", samples, "samples per path element");
  dump->add_option("--out", out_path, "write output to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    err << "usage error: " << msg << "\n";
    return kExitUsage;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      err << "usage error: cannot open " << out_path << "\n";
      return kExitUsage;
    }
    sink = &file;
  }
  const bool machine = format == "machine";

  try {
    if (eval->parsed()) {
      Complex x = complex_arg(xs, "--x");
      Complex y = ys.empty() ? Complex(0.0) : complex_arg(ys, "--y");
      if (fn != "2f1" && ys.empty()) throw UsageError(fn + " needs --y");
      print_eval(*sink, evaluate(fn, complex_args(params), x, y, rep, tol), machine, fn, rep);
      return kExitOk;
    }
    if (ver->parsed()) {
      if (!id.empty() && xs.empty()) throw UsageError("--id needs --x");
      return verify(*sink, err, suite, seed, id, params, xs, ys, tol, machine, list);
    }
    if (reg->parsed()) {
      region_grid(*sink, regions, range_arg(xrange, "--xrange"), range_arg(yrange, "--yrange"), n);
      return kExitOk;
    }
    LoopSpec spec;
    spec.epsilon = epsilon;
    ContourPath path;
    if (kind == "plain") {
      path = build_double_loop(spec);
    } else {
      if (xs.empty() || ys.empty()) throw UsageError(kind + " loop needs --x and --y");
      Complex x = complex_arg(xs, "--x"), y = complex_arg(ys, "--y");
      path = kind == "kita" ? kita_contour(x, y, spec) : olsson_contour(x, y, spec);
    }
    if (samples < 1) throw UsageError("--samples must be positive");
    write_loop_csv(*sink, path, samples);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NoConvergence& e) {
    err << "convergence failure: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const NonIntegrable& e) {
    err << "convergence failure: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace hypint
