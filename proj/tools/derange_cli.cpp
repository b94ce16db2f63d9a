#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "derange/derange.h"

namespace {

// Exit codes: 0 success, 1 verification failure, 2 invalid parameters,
// 3 budget exceeded. Unopenable files and internal failures count as
// invalid parameters for exit purposes; the message says which.
int exit_code_for(int status) {
  switch (status) {
    case DRG_OK:
      return 0;
    case DRG_ERR_BUDGET:
      return 3;
    default:
      return 2;
  }
}

int fail_with(int status) {
  std::cerr << "error: " << drg_last_error() << "\n";
  return exit_code_for(status);
}

int invalid(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

int emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
  }
  std::ofstream out(output_path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) return invalid("cannot write " + output_path);
  return 0;
}

// Takes ownership of the C string and returns the mapped exit code.
int emit_owned(int status, char* text, const std::string& output_path) {
  if (status != DRG_OK) return fail_with(status);
  const std::string copy = text == nullptr ? "" : text;
  drg_string_free(text);
  return emit(copy, output_path);
}

struct CommonOptions {
  std::string format = "plain";
  std::uint32_t precision = 15;
  std::uint64_t term_budget = 0;  // 0 = unset: env var, then default
  bool term_budget_given = false;
  std::uint32_t jobs = 1;
  std::string output_path;
};

void add_format(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--format", opts->format, "Output format: plain, csv, or json")
      ->check(CLI::IsMember({"plain", "csv", "json"}));
  cmd->add_option("-o,--output", opts->output_path,
                  "Write output to a file instead of stdout");
}

void add_precision(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--precision", opts->precision,
                  "Significant digits for ratios and targets (>= 15)");
}

void add_budget(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--term-budget", opts->term_budget,
                  "Maximum number of alternating-sum terms")
      ->trigger_on_parse()
      ->each([opts](const std::string&) { opts->term_budget_given = true; });
  cmd->add_option("--jobs", opts->jobs,
                  "Worker threads for the balanced excess sum (default 1)");
}

// Flag wins over DERANGE_TERM_BUDGET; both override the default.
// Returns nonzero exit code on a malformed value.
int resolve_budget(CommonOptions* opts) {
  if (!opts->term_budget_given) {
    const char* env = std::getenv("DERANGE_TERM_BUDGET");
    if (env != nullptr && *env != '\0') {
      char* end = nullptr;
      const unsigned long long parsed = std::strtoull(env, &end, 10);
      if (end == env || *end != '\0') {
        return invalid("DERANGE_TERM_BUDGET must be a nonnegative integer");
      }
      opts->term_budget = parsed;
      opts->term_budget_given = true;
    }
  }
  if (opts->term_budget_given && opts->term_budget < 10'000) {
    return invalid("term budget must be >= 10000");
  }
  return 0;
}

int check_common(CommonOptions* opts) {
  if (opts->precision < 15) return invalid("precision must be >= 15");
  if (opts->jobs == 0) return invalid("jobs must be >= 1");
  return resolve_budget(opts);
}

struct ExactOptions {
  CommonOptions common;
  std::string family;
  std::int64_t r = -1;
  std::int64_t c = -1;
  std::int64_t m = -1;
  std::int64_t n = -1;
  std::string graph_path;
};

int run_exact(const ExactOptions& opts) {
  char* text = nullptr;
  const int status = drg_exact(
      opts.family.c_str(), opts.r, opts.c, opts.m, opts.n,
      opts.graph_path.empty() ? nullptr : opts.graph_path.c_str(),
      opts.common.term_budget, opts.common.jobs, opts.common.format.c_str(),
      &text);
  return emit_owned(status, text, opts.common.output_path);
}

struct RatioOptions {
  CommonOptions common;
  std::string regime;
  std::int64_t m_max = -1;
  std::int64_t n_max = -1;
  std::int64_t r = -1;
  std::int64_t c = -1;
  std::int64_t d = -1;
};

// The running parameter is m for r3/bpm and n otherwise; the matching
// --m-max/--n-max flag is required and the other rejected.
int run_ratio(const RatioOptions& opts) {
  const bool ranges_over_m = opts.regime == "r3" || opts.regime == "bpm";
  const std::string good_flag = ranges_over_m ? "--m-max" : "--n-max";
  const std::string bad_flag = ranges_over_m ? "--n-max" : "--m-max";
  const std::int64_t good_max = ranges_over_m ? opts.m_max : opts.n_max;
  const std::int64_t bad_max = ranges_over_m ? opts.n_max : opts.m_max;
  if (bad_max >= 0) {
    return invalid("the " + opts.regime + " regime ranges over " +
                   (ranges_over_m ? "m" : "n") + ": use " + good_flag);
  }
  if (good_max < 0) {
    return invalid("the " + opts.regime + " regime needs " + good_flag);
  }
  if (good_max < 1) return invalid(good_flag.substr(2) + " must be >= 1");

  std::int64_t fixed = -1;
  for (const auto& [flag, value, regime] :
       {std::tuple<const char*, std::int64_t, const char*>{"--r", opts.r, "bpm"},
        {"--d", opts.d, "regular"},
        {"--c", opts.c, "class"}}) {
    if (value < 0) continue;
    if (opts.regime != regime) {
      return invalid("the " + opts.regime + " regime takes no " + flag);
    }
    fixed = value;
  }

  char* text = nullptr;
  const int status = drg_ratio_table(
      opts.regime.c_str(), fixed, 1, good_max, opts.common.term_budget,
      opts.common.jobs, opts.common.format.c_str(), opts.common.precision,
      &text);
  return emit_owned(status, text, opts.common.output_path);
}

struct SeriesOptions {
  CommonOptions common;
  std::uint32_t r = 0;
  std::uint32_t terms = 30;
};

int run_series(const SeriesOptions& opts) {
  char* text = nullptr;
  const int status =
      drg_series(opts.r, opts.terms, opts.common.format.c_str(),
                 opts.common.precision, &text);
  return emit_owned(status, text, opts.common.output_path);
}

struct VerifyOptions {
  std::string suite = "fast";
  std::string fixtures_dir;
  bool fixtures_given = false;
};

struct VerifyTally {
  unsigned checks = 0;
};

void print_check(void* user, const char* name, int pass, const char* detail) {
  auto* tally = static_cast<VerifyTally*>(user);
  ++tally->checks;
  std::printf("%s %s", pass != 0 ? "PASS" : "FAIL", name);
  if (detail != nullptr && *detail != '\0') std::printf("  (%s)", detail);
  std::printf("\n");
}

int run_verify_cmd(const VerifyOptions& opts) {
  std::string fixtures = opts.fixtures_dir;
  if (!opts.fixtures_given) {
    std::error_code ec;
    fixtures = std::filesystem::is_directory("tests/fixtures", ec)
                   ? "tests/fixtures"
                   : "";
  }
  VerifyTally tally;
  std::uint32_t failures = 0;
  const int status = drg_verify(opts.suite.c_str(),
                                fixtures.empty() ? nullptr : fixtures.c_str(),
                                print_check, &tally, &failures);
  if (status != DRG_OK) return fail_with(status);
  std::printf("verify: %u checks, %u failed\n", tally.checks, failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact perfect-matching counts, convergence tables, and "
               "certified limit series for forbidden-matching problems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", []() { return std::string(drg_version()); });

  ExactOptions exact;
  CLI::App* cmd_exact =
      app.add_subcommand("exact", "Count one family member exactly");
  cmd_exact->add_option("--family", exact.family,
                        "derangement, deranged-matching, tripartite, "
                        "tripartite-minus-m, bpm, bpm-minus-m, multipartite, "
                        "multipartite-minus-m, or custom")
      ->required();
  cmd_exact->add_option("--r", exact.r, "Number of classes");
  cmd_exact->add_option("--c", exact.c, "Class size");
  cmd_exact->add_option("--m", exact.m, "Edges per class pair");
  cmd_exact->add_option("--n", exact.n, "Half the vertex count (or the degree)");
  cmd_exact->add_option("--graph", exact.graph_path,
                        "Edge-list file for --family custom");
  add_format(cmd_exact, &exact.common);
  add_budget(cmd_exact, &exact.common);

  RatioOptions ratio;
  CLI::App* cmd_ratio = app.add_subcommand(
      "ratio", "Convergence table of exact ratios against the limit target");
  cmd_ratio->add_option("--regime", ratio.regime,
                        "hatcheck, kindergartner, r3, bpm, regular, or class")
      ->required();
  cmd_ratio->add_option("--m-max", ratio.m_max, "Last m for the r3/bpm regimes");
  cmd_ratio->add_option("--n-max", ratio.n_max, "Last n for the other regimes");
  cmd_ratio->add_option("--r", ratio.r, "Number of classes (bpm regime)");
  cmd_ratio->add_option("--d", ratio.d, "Removed degree (regular regime)");
  cmd_ratio->add_option("--c", ratio.c, "Class size (class regime)");
  add_format(cmd_ratio, &ratio.common);
  add_precision(cmd_ratio, &ratio.common);
  add_budget(cmd_ratio, &ratio.common);

  SeriesOptions series;
  CLI::App* cmd_series = app.add_subcommand(
      "series", "Truncated product series for the limit with a certified tail bound");
  cmd_series->add_option("--r", series.r, "Number of classes (>= 2)")->required();
  cmd_series->add_option("--terms", series.terms,
                         "Terms per factor (default 30)");
  add_format(cmd_series, &series.common);
  add_precision(cmd_series, &series.common);

  VerifyOptions verify;
  CLI::App* cmd_verify =
      app.add_subcommand("verify", "Run the self-check suite");
  cmd_verify->add_option("--suite", verify.suite, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));
  cmd_verify->add_option("--fixtures", verify.fixtures_dir,
                         "Directory holding golden fixtures "
                         "(default tests/fixtures when present)")
      ->trigger_on_parse()
      ->each([&verify](const std::string&) { verify.fixtures_given = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (cmd_exact->parsed()) {
    if (const int code = check_common(&exact.common); code != 0) return code;
    return run_exact(exact);
  }
  if (cmd_ratio->parsed()) {
    if (const int code = check_common(&ratio.common); code != 0) return code;
    return run_ratio(ratio);
  }
  if (cmd_series->parsed()) {
    if (const int code = check_common(&series.common); code != 0) return code;
    return run_series(series);
  }
  if (cmd_verify->parsed()) return run_verify_cmd(verify);
  return 2;
}
