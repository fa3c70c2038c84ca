#include "cli.hpp"

#include "heatgen/errors.hpp"
#include "heatgen/heat_invariants.hpp"
#include "heatgen/space_catalog.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

namespace heatgen::cli {

namespace {

using nlohmann::ordered_json;

struct RunConfig {
  std::string space;
  std::size_t order = 4;
  double t = 0.0;
  std::vector<double> t_grid;
  std::string method = "series";
  std::size_t samples = 200'000;
  std::uint64_t seed = 1;
  bool json = false;
  bool timing = false;
  bool numeric = true;
  ExpansionOptions expansion;
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

SpaceSpec resolve_space(const std::string &source, bool validate) {
  try {
    return builtin(source);
  } catch (const UnknownSpace &) {
  }
  if (std::filesystem::is_regular_file(source))
    return load(source, LoadOptions{validate});
  throw UsageError("'" + source + "' is neither a builtin space nor a readable space file (try `heatgen catalog`)");
}

std::uint64_t budget_from_environment() {
  const char *env = std::getenv("HEATGEN_BUDGET");
  if (!env || !*env)
    return ExpansionOptions{}.word_budget;
  char *end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || *end != '\0' || env[0] == '-')
    throw UsageError(std::string("HEATGEN_BUDGET must be a non-negative integer, got '") + env + "'");
  return v;
}

ordered_json checks_json(const std::vector<ValidationCheck> &vchecks, const std::vector<HeatCheck> &hchecks) {
  ordered_json arr = ordered_json::array();
  for (const auto &c : vchecks)
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  for (const auto &c : hchecks)
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return arr;
}

void print_checks(std::ostream &out, const std::vector<ValidationCheck> &vchecks,
                  const std::vector<HeatCheck> &hchecks) {
  std::vector<std::tuple<std::string, bool, std::string>> rows;
  for (const auto &c : vchecks)
    rows.emplace_back(c.name, c.pass, c.detail);
  for (const auto &c : hchecks)
    rows.emplace_back(c.name, c.pass, c.detail);
  std::size_t width = 0;
  for (const auto &[name, pass, detail] : rows)
    width = std::max(width, name.size());
  for (const auto &[name, pass, detail] : rows)
    out << "  [" << (pass ? "pass" : "FAIL") << "] " << std::left << std::setw(static_cast<int>(width)) << name << "  "
        << detail << '\n';
}

void emit_report(const HeatReport &report, const RunConfig &cfg, double timing_ms, std::ostream &out) {
  if (cfg.json) {
    ordered_json doc;
    doc["space"] = report.space;
    doc["order"] = report.order;
    ordered_json a = ordered_json::array();
    for (const auto &x : report.a)
      a.push_back(to_string(x));
    doc["a"] = a;
    doc["checks"] = checks_json(report.validation.checks, report.checks);
    doc["timing_ms"] = cfg.timing ? ordered_json(timing_ms) : ordered_json(nullptr);
    out << doc.dump(2) << '\n';
    return;
  }
  out << "space " << report.space << "  order " << report.order << '\n';
  const int kw = static_cast<int>(std::to_string(report.a.size() - 1).size());
  out << "  " << std::right << std::setw(kw) << "k" << "  a_k\n";
  for (std::size_t k = 0; k < report.a.size(); ++k)
    out << "  " << std::right << std::setw(kw) << k << "  " << to_string(report.a[k]) << '\n';
  out << "checks\n";
  print_checks(out, report.validation.checks, report.checks);
  if (cfg.timing)
    out << "timing_ms " << fmt_double(timing_ms) << '\n';
}

int cmd_catalog(const RunConfig &cfg, std::ostream &out) {
  const auto names = builtin_names();
  if (cfg.json) {
    ordered_json arr = ordered_json::array();
    for (const auto &name : names) {
      const auto s = builtin(name);
      arr.push_back({{"name", name}, {"n", s.n}, {"p", s.p}});
    }
    out << arr.dump(2) << '\n';
    return kExitOk;
  }
  out << std::left << std::setw(8) << "name" << std::setw(4) << "n"
      << "p\n";
  for (const auto &name : names) {
    const auto s = builtin(name);
    out << std::left << std::setw(8) << name << std::setw(4) << s.n << s.p << '\n';
  }
  out << "(flatN accepts any N >= 1)\n";
  return kExitOk;
}

int cmd_validate(const RunConfig &cfg, std::ostream &out) {
  const SpaceSpec spec = resolve_space(cfg.space, false);
  ValidationReport report;
  try {
    const auto hol = derive_holonomy(spec);
    report = validate_symmetric_space(spec, hol);
  } catch (const InvalidSpace &) {
    throw;
  } catch (const Error &e) {
    report.checks.push_back({"derive-holonomy", false, e.what()});
  }
  if (cfg.json) {
    ordered_json doc;
    doc["space"] = spec.name;
    doc["pass"] = report.passed();
    doc["checks"] = checks_json(report.checks, {});
    out << doc.dump(2) << '\n';
  } else {
    out << "space " << spec.name << "  n " << spec.n << "  p " << spec.p << '\n';
    print_checks(out, report.checks, {});
    out << (report.passed() ? "valid symmetric space\n" : "NOT a valid symmetric space datum\n");
  }
  return report.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_coeffs(const RunConfig &cfg, std::ostream &out) {
  const auto start = std::chrono::steady_clock::now();
  const SpaceSpec spec = resolve_space(cfg.space, true);
  const HeatReport report = heat_coefficients(spec, cfg.order, cfg.expansion);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  emit_report(report, cfg, ms, out);
  return report.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_eval(const RunConfig &cfg, std::ostream &out) {
  if (!(cfg.t > 0.0))
    throw UsageError("--t must be positive");
  const SpaceSpec spec = resolve_space(cfg.space, true);
  const double diag_factor = std::pow(4 * std::numbers::pi * cfg.t, -static_cast<double>(spec.n) / 2);
  ordered_json doc;
  doc["space"] = spec.name;
  doc["t"] = cfg.t;
  doc["method"] = cfg.method;
  double value = 0.0;
  if (cfg.method == "series") {
    const HeatReport report = heat_coefficients(spec, cfg.order, cfg.expansion);
    value = report.series().evaluate(cfg.t);
    const double last = std::abs(report.a.back().get_d()) * std::pow(cfg.t, static_cast<double>(cfg.order));
    doc["order"] = cfg.order;
    doc["value"] = value;
    doc["remainder_estimate"] = last;
  } else {
    NumericOptions opt;
    opt.method = cfg.method == "mc" ? NumericMethod::MonteCarlo : NumericMethod::Quadrature;
    opt.samples = cfg.samples;
    opt.seed = cfg.seed;
    const auto hol = derive_holonomy(spec);
    const auto res = numeric_average(spec, hol, cfg.t, opt);
    value = res.value;
    doc["value"] = value;
    doc["std_error"] = res.std_error;
    doc["truncated_mass"] = res.truncated_mass;
    doc["truncated_points"] = res.truncated_points;
    doc["evaluations"] = res.evaluations;
    if (opt.method == NumericMethod::MonteCarlo)
      doc["seed"] = cfg.seed;
  }
  doc["diagonal"] = diag_factor * value;
  if (cfg.json) {
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << std::setprecision(17);
  for (const auto &[key, val] : doc.items()) {
    out << std::left << std::setw(20) << key << ' ';
    if (val.is_number_float())
      out << fmt_double(val.get<double>());
    else if (val.is_string())
      out << val.get<std::string>();
    else
      out << val.dump();
    out << '\n';
  }
  return kExitOk;
}

int cmd_compare(const RunConfig &cfg, std::ostream &out) {
  for (const double t : cfg.t_grid)
    if (!(t > 0.0))
      throw UsageError("every --t value must be positive");
  const auto start = std::chrono::steady_clock::now();
  const SpaceSpec spec = resolve_space(cfg.space, true);
  CompareOptions opt;
  opt.expansion = cfg.expansion;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.numeric = cfg.numeric;
  const HeatReport report = compare(spec, cfg.order, cfg.t_grid, opt);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  emit_report(report, cfg, ms, out);
  return report.passed() ? kExitOk : kExitCheckFailed;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  RunConfig cfg;
  CLI::App app{"Exact heat kernel coefficients on symmetric spaces", "heatgen"};
  app.require_subcommand(1);

  auto *catalog = app.add_subcommand("catalog", "List builtin spaces");
  catalog->add_flag("--json", cfg.json, "JSON output");

  auto *validate = app.add_subcommand("validate", "Check the symmetric-space identities of a datum");
  validate->add_option("space", cfg.space, "Builtin name or space file")->required();
  validate->add_flag("--json", cfg.json, "JSON output");

  auto *coeffs = app.add_subcommand("coeffs", "Exact coefficients a_0..a_K");
  coeffs->add_option("space", cfg.space, "Builtin name or space file")->required();
  coeffs->add_option("--order,-K", cfg.order, "Truncation order K")->required()->check(CLI::NonNegativeNumber);
  coeffs->add_flag("--json", cfg.json, "JSON output");
  coeffs->add_flag("--timing", cfg.timing, "Report wall-clock time");

  auto *eval = app.add_subcommand("eval", "Evaluate (4 pi t)^{n/2} U^diag(t) at one t");
  eval->add_option("space", cfg.space, "Builtin name or space file")->required();
  eval->add_option("--t", cfg.t, "Time t > 0")->required();
  eval->add_option("--method", cfg.method, "series | mc | quadrature")
      ->check(CLI::IsMember({"series", "mc", "quadrature"}));
  eval->add_option("--order,-K", cfg.order, "Series order for --method series")->check(CLI::NonNegativeNumber);
  eval->add_option("--samples", cfg.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  eval->add_option("--seed", cfg.seed, "Monte Carlo seed");
  eval->add_flag("--json", cfg.json, "JSON output");

  auto *cmp = app.add_subcommand("compare", "Coefficients plus every applicable cross-check");
  cmp->add_option("space", cfg.space, "Builtin name or space file")->required();
  cmp->add_option("--order,-K", cfg.order, "Truncation order K")->required()->check(CLI::NonNegativeNumber);
  cmp->add_option("--t", cfg.t_grid, "Comma-separated t grid")->required()->delimiter(',');
  cmp->add_option("--samples", cfg.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  cmp->add_option("--seed", cfg.seed, "Monte Carlo seed");
  cmp->add_flag("!--no-numeric", cfg.numeric, "Skip the numeric-average checks");
  cmp->add_flag("--json", cfg.json, "JSON output");
  cmp->add_flag("--timing", cfg.timing, "Report wall-clock time");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    cfg.expansion.word_budget = budget_from_environment();
    if (catalog->parsed())
      return cmd_catalog(cfg, out);
    if (validate->parsed())
      return cmd_validate(cfg, out);
    if (coeffs->parsed())
      return cmd_coeffs(cfg, out);
    if (eval->parsed())
      return cmd_eval(cfg, out);
    if (cmp->parsed())
      return cmd_compare(cfg, out);
  } catch (const UsageError &e) {
    err << "heatgen: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "heatgen: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}

} // namespace heatgen::cli
