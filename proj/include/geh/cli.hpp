#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geh/checks.hpp"
#include "geh/correlations.hpp"
#include "geh/distribution.hpp"
#include "geh/errors.hpp"
#include "geh/multiplicative.hpp"
#include "geh/output.hpp"
#include "geh/sieve.hpp"

namespace geh::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternal = 1,
  kUsage = 2,
  kResource = 3,
  kCheckFailed = 4,
};

struct CommonFlags {
  std::string output = "csv";
  std::string out;
  unsigned threads = default_thread_count();
  std::string config;
  std::size_t segment_size = kDefaultSegmentSize;
  std::uint64_t truncation = kDefaultTruncation;

  [[nodiscard]] DistributionOptions options() const {
    DistributionOptions o;
    o.threads = threads;
    o.segment_size = segment_size;
    o.truncation = truncation;
    return o;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

inline std::optional<std::string> config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

// Appends `--key value` for each key=value line of the run-configuration
// file whose flag is absent from the command line.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
  static const std::set<std::string> kBooleanFlags{"quick", "sup-variant"};
  const auto path = config_path(args);
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw DomainError("cannot read config file: " + *path);
  std::string line;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line without '=': " + line);
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key == "config") throw DomainError("config files may not nest");
    const std::string flag = "--" + key;
    if (has_flag(args, flag)) continue;
    if (kBooleanFlags.count(key)) {
      if (value == "true" || value == "1") extra.push_back(flag);
      continue;
    }
    extra.push_back(flag);
    extra.push_back(value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

inline output::Cell real(double v) { return v; }
inline output::Cell uint(std::uint64_t v) { return v; }
inline output::Cell sint(std::int64_t v) { return v; }

inline std::string join_reals(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + output::format_real(values[i]);
  return s;
}

inline void check_threads(const CommonFlags& common) {
  if (common.threads < 1) throw DomainError("--threads must be >= 1");
  if (common.segment_size < 1) throw DomainError("--segment-size must be >= 1");
  if (common.truncation < 3) throw DomainError("--truncation must be >= 3");
}

inline void add_provenance(output::OutputRecord& rec, const CommonFlags& common, std::uint64_t sieve_limit,
                           double seconds) {
  rec.provenance = {
      {"truncation", uint(common.truncation)},
      {"sieve_limit", uint(sieve_limit)},
      {"segment_size", uint(common.segment_size)},
      {"threads", uint(common.threads)},
      {"wall_time_seconds", real(seconds)},
  };
}

inline std::vector<output::Cell> lambda_row(const LambdaTable& table, std::uint64_t n) {
  return {uint(n), real(table(static_cast<std::int64_t>(n))), uint(table.prime_at(n) ? 1 : 0)};
}

inline std::string norm_column(const std::string& prefix, double A) {
  return prefix + "_norm_A" + output::format_real(A);
}

}  // namespace detail

/// Runs the command line `args` (without the program name). Returns the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prime-pair correlations in arithmetic progressions", "geh"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();

  CommonFlags common;
  app.add_option("--output", common.output, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", common.out, "Output file (default stdout)");
  app.add_option("--threads", common.threads, "Worker threads");
  app.add_option("--config", common.config, "key=value run configuration file");
  app.add_option("--segment-size", common.segment_size, "Sieve segment length");
  app.add_option("--truncation", common.truncation, "Singular-series truncation prime bound");

  std::uint64_t limit = 0, lo = 0, hi = 0, x = 0, q = 0, tail_to = 0;
  std::int64_t h = 2;
  double theta = 0.4;
  bool sup_variant = false, quick = false;

  auto* primes_cmd = app.add_subcommand("primes", "List primes up to a limit");
  primes_cmd->add_option("--limit", limit, "Largest n")->required();

  auto* lambda_cmd = app.add_subcommand("lambda", "von Mangoldt values on a range");
  lambda_cmd->add_option("--lo", lo, "First n")->required();
  lambda_cmd->add_option("--hi", hi, "Last n")->required();

  auto* ss_cmd = app.add_subcommand("singular-series", "Truncated singular series for shift h");
  ss_cmd->add_option("--h", h, "Shift")->required();

  auto* psi_cmd = app.add_subcommand("psi", "Weighted prime-pair count Psi_h(x)");
  psi_cmd->add_option("--x", x, "Cutoff")->required();
  psi_cmd->add_option("--h", h, "Shift")->required();

  auto* eh_cmd = app.add_subcommand("eh", "Averaged prime errors over moduli q <= x^theta");
  eh_cmd->add_option("--x", x, "Cutoff")->required();
  eh_cmd->add_option("--theta", theta, "Level exponent")->required();

  auto* geh2_cmd = app.add_subcommand("geh2", "Averaged prime-pair errors over moduli q <= x^theta");
  geh2_cmd->add_option("--x", x, "Cutoff")->required();
  geh2_cmd->add_option("--h", h, "Shift")->required();
  auto* theta_opt = geh2_cmd->add_option("--theta", theta, "Level exponent");
  auto* q_opt = geh2_cmd->add_option("--q", q, "Emit the per-residue profile of a single modulus");
  geh2_cmd->add_option("--tail-to", tail_to, "Also sum moduli in (x^theta, N]");
  geh2_cmd->add_flag("--sup-variant", sup_variant, "Maximize over y <= x as well");

  ScanConfig scan;
  std::string mode = "geh2";
  auto* scan_cmd = app.add_subcommand("scan", "Averaged error sums over a geometric x grid");
  scan_cmd->add_option("--mode", mode, "eh|geh2|both")->check(CLI::IsMember({"eh", "geh2", "both"}));
  scan_cmd->add_option("--x-start", scan.x_start, "First grid point")->required();
  scan_cmd->add_option("--x-ratio", scan.x_ratio, "Grid ratio");
  scan_cmd->add_option("--x-count", scan.x_count, "Grid size");
  scan_cmd->add_option("--theta", scan.theta, "Level exponent")->required();
  scan_cmd->add_option("--h", scan.h, "Shift");
  scan_cmd->add_option("--A", scan.A_list, "Normalization exponents")->delimiter(',');
  scan_cmd->add_flag("--sup-variant", sup_variant, "Maximize GEH-2 errors over y <= x as well");

  auto* check_cmd = app.add_subcommand("check", "Run the identity self-check suites");
  check_cmd->add_flag("--quick", quick, "Smaller problem sizes");

  output::OutputRecord rec;
  int exit_code = kSuccess;

  try {
    args = detail::merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    detail::check_threads(common);
    const auto started = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count(); };
    const DistributionOptions options = common.options();
    const SieveConfig sieve = options.sieve();
    std::uint64_t sieve_limit = 0;

    if (primes_cmd->parsed()) {
      rec.command = "primes";
      rec.parameters = {{"limit", std::to_string(limit)}};
      rec.columns = {"n", "lambda", "is_prime"};
      for (std::uint64_t p : enumerate_primes(limit, sieve)) {
        rec.rows.push_back({detail::uint(p), detail::real(std::log(static_cast<double>(p))), detail::uint(1)});
      }
      sieve_limit = limit;
    } else if (lambda_cmd->parsed()) {
      rec.command = "lambda";
      rec.parameters = {{"lo", std::to_string(lo)}, {"hi", std::to_string(hi)}};
      rec.columns = {"n", "lambda", "is_prime"};
      const auto table = lambda_range(lo, hi, sieve);
      for (std::uint64_t n = lo; n <= hi; ++n) rec.rows.push_back(detail::lambda_row(table, n));
      sieve_limit = hi;
    } else if (ss_cmd->parsed()) {
      rec.command = "singular-series";
      rec.parameters = {{"h", std::to_string(h)}, {"truncation", std::to_string(common.truncation)}};
      rec.columns = {"h", "value", "truncation", "tail_bound"};
      const auto s = singular_series(h, common.truncation);
      rec.rows.push_back({detail::sint(s.h), detail::real(s.value), detail::uint(s.truncation),
                          detail::real(s.tail_bound)});
      sieve_limit = common.truncation;
    } else if (psi_cmd->parsed()) {
      rec.command = "psi";
      rec.parameters = {{"x", std::to_string(x)}, {"h", std::to_string(h)},
                        {"truncation", std::to_string(common.truncation)}};
      rec.columns = {"x", "h", "psi", "singular_series", "main_term"};
      const auto p = psi(x, h, sieve);
      const double s = singular_series(h, common.truncation).value;
      rec.rows.push_back({detail::uint(x), detail::sint(h), detail::real(p.value), detail::real(s),
                          detail::real(s * static_cast<double>(x))});
      sieve_limit = pair_sieve_limit(x, h);
    } else if (eh_cmd->parsed()) {
      rec.command = "eh";
      rec.parameters = {{"x", std::to_string(x)}, {"theta", output::format_real(theta)}};
      rec.columns = {"q", "euler_phi", "sup_error"};
      if (x < 2) throw DomainError("--x must be >= 2");
      const std::uint64_t q_max = floor_power(x, theta);
      const double est = 1.3 * static_cast<double>(x) / std::log(static_cast<double>(x));
      geh::detail::check_moduli(q_max, geh::detail::modulus_work(1, q_max, est), options);
      const auto sups = eh_max_errors(build_prime_list(x, sieve), q_max, options);
      for (std::uint64_t k = 1; k <= q_max; ++k) {
        rec.rows.push_back({detail::uint(k), detail::uint(euler_phi(k)), detail::real(sups[k - 1])});
      }
      rec.summary = {{"q_max", detail::uint(q_max)}, {"sum", detail::real(geh::detail::ascending_sum(sups))}};
      sieve_limit = x;
    } else if (geh2_cmd->parsed()) {
      rec.command = "geh2";
      const auto variant = sup_variant ? Geh2Variant::sup : Geh2Variant::endpoint;
      DistributionOptions geh2_options = options;
      geh2_options.variant = variant;
      if (x < 2) throw DomainError("--x must be >= 2");
      std::uint64_t q_max = 0;
      if (q_opt->count() == 0) {
        if (theta_opt->count() == 0) throw DomainError("geh2 needs --theta (or --q for a single profile)");
        check_geh2_theta(theta);
        q_max = floor_power(x, theta);
        const std::uint64_t q_hi = std::max(q_max, tail_to);
        geh::detail::check_moduli(q_hi, geh::detail::modulus_work(1, q_hi, 0.0), geh2_options);
        if (tail_to > 0 && tail_to <= q_max) throw DomainError("--tail-to must exceed floor(x^theta)");
      }
      const PairList pairs = build_pair_list(x, h, sieve);
      const auto ss = singular_series(h, common.truncation);
      sieve_limit = pair_sieve_limit(x, h);
      const std::string variant_name = sup_variant ? "sup" : "endpoint";

      if (q_opt->count() > 0) {
        rec.parameters = {{"x", std::to_string(x)}, {"h", std::to_string(h)}, {"q", std::to_string(q)},
                          {"variant", variant_name}, {"truncation", std::to_string(common.truncation)}};
        const auto profile = residue_error_profile(pairs, q, ss, variant);
        rec.columns = {"a", "indicator", "error"};
        for (const auto& [a, e] : profile.errors) {
          const bool ind = geh2_indicator(static_cast<std::int64_t>(a), h, q);
          rec.rows.push_back({detail::uint(a), detail::uint(ind ? 1 : 0), detail::real(e)});
        }
        rec.summary = {{"main_term_unit", detail::real(profile.main_term_unit)},
                       {"max_abs_error", detail::real(profile.max_abs_error)},
                       {"argmax", detail::uint(profile.argmax)}};
      } else {
        rec.parameters = {{"x", std::to_string(x)}, {"h", std::to_string(h)}, {"theta", output::format_real(theta)},
                          {"variant", variant_name}, {"truncation", std::to_string(common.truncation)}};
        const auto errors = geh2_max_errors(pairs, ss, 1, q_max, geh2_options);
        rec.columns = {"q", "euler_phi", "phi2", "max_abs_error"};
        for (std::uint64_t k = 1; k <= q_max; ++k) {
          const auto f = factorize(k);
          rec.rows.push_back({detail::uint(k), detail::uint(euler_phi(f)), detail::uint(phi2(f, h)),
                              detail::real(errors[k - 1])});
        }
        rec.summary = {{"q_max", detail::uint(q_max)}, {"sum", detail::real(geh::detail::ascending_sum(errors))}};
        if (tail_to > 0) {
          rec.parameters.emplace_back("tail-to", std::to_string(tail_to));
          const double tail =
              geh::detail::ascending_sum(geh2_max_errors(pairs, ss, q_max + 1, tail_to, geh2_options));
          rec.summary.emplace_back("tail_sum", detail::real(tail));
          rec.summary.emplace_back("tail_over_x", detail::real(tail / static_cast<double>(x)));
        }
      }
    } else if (scan_cmd->parsed()) {
      rec.command = "scan";
      scan.mode = mode == "eh" ? ScanMode::eh : mode == "both" ? ScanMode::both : ScanMode::geh2;
      DistributionOptions scan_options = options;
      scan_options.variant = sup_variant ? Geh2Variant::sup : Geh2Variant::endpoint;
      const ScanReport report = run_scan(scan, scan_options);
      rec.parameters = {{"mode", mode},
                        {"x-start", std::to_string(scan.x_start)},
                        {"x-ratio", output::format_real(scan.x_ratio)},
                        {"x-count", std::to_string(scan.x_count)},
                        {"theta", output::format_real(scan.theta)},
                        {"h", std::to_string(scan.h)},
                        {"A", detail::join_reals(scan.A_list)},
                        {"variant", sup_variant ? "sup" : "endpoint"},
                        {"truncation", std::to_string(common.truncation)}};
      rec.columns = {"x", "q_max"};
      if (scan.wants_eh()) {
        rec.columns.push_back("eh_sum");
        for (double A : scan.A_list) rec.columns.push_back(detail::norm_column("eh", A));
      }
      if (scan.wants_geh2()) {
        rec.columns.push_back("geh2_sum");
        for (double A : scan.A_list) rec.columns.push_back(detail::norm_column("geh2", A));
      }
      for (const auto& p : report.points) {
        std::vector<output::Cell> row{detail::uint(p.x), detail::uint(p.q_max)};
        if (p.eh_sum) {
          row.push_back(detail::real(*p.eh_sum));
          for (double v : p.eh_normalized) row.push_back(detail::real(v));
        }
        if (p.geh2_sum) {
          row.push_back(detail::real(*p.geh2_sum));
          for (double v : p.geh2_normalized) row.push_back(detail::real(v));
        }
        rec.rows.push_back(std::move(row));
        sieve_limit = std::max(sieve_limit, pair_sieve_limit(p.x, scan.h));
      }
      auto add_fit = [&](const std::string& name, const std::optional<LogPowerFit>& fit) {
        if (!fit) return;
        rec.summary.emplace_back("fit." + name + ".C", detail::real(fit->C));
        rec.summary.emplace_back("fit." + name + ".A", detail::real(fit->A));
        rec.summary.emplace_back("fit." + name + ".residual_norm", detail::real(fit->residual_norm));
      };
      add_fit("eh", report.eh_fit);
      add_fit("geh2", report.geh2_fit);
      for (std::size_t i = 0; i < report.notes.size(); ++i) {
        rec.summary.emplace_back("note." + std::to_string(i), std::string(report.notes[i]));
      }
    } else if (check_cmd->parsed()) {
      rec.command = "check";
      rec.parameters = {{"quick", quick ? "true" : "false"}};
      rec.columns = {"check", "passed", "detail"};
      const auto sizes = quick ? checks::CheckSizes::quick() : checks::CheckSizes{};
      bool all = true;
      for (const auto& r : checks::run_all(sizes, sieve)) {
        all = all && r.passed;
        rec.rows.push_back({r.name, detail::uint(r.passed ? 1 : 0), r.detail});
      }
      rec.summary = {{"all_passed", detail::uint(all ? 1 : 0)}};
      sieve_limit = std::max(sizes.lambda_n, pair_sieve_limit(sizes.partition_x, 2));
      if (!all) exit_code = kCheckFailed;
    }

    detail::add_provenance(rec, common, sieve_limit, elapsed());
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource guard: " << e.what() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!common.out.empty()) {
    file.open(common.out);
    if (!file) {
      err << "error: cannot open " << common.out << '\n';
      return kUsage;
    }
    sink = &file;
  }
  if (common.output == "json") {
    output::write_json(rec, *sink);
  } else {
    output::write_csv(rec, *sink);
  }
  return exit_code;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(std::move(args), out, err);
}

}  // namespace geh::cli
