#include "derange/derange.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "asymptotics.hpp"
#include "bigmath.hpp"
#include "counting.hpp"
#include "error.hpp"
#include "graphs.hpp"
#include "matchpoly.hpp"
#include "verify.hpp"

struct drg_graph {
  derange::Graph graph;
};

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) std::abort();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    t_last_error.clear();
    fn();
    return DRG_OK;
  } catch (const derange::Error& e) {
    t_last_error = e.what();
    return static_cast<int>(e.status());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return DRG_ERR_INTERNAL;
  }
}

void require_out(const void* out) {
  if (out == nullptr) derange::fail_invalid("null output pointer");
}

std::string text_or(const char* s, const char* fallback) {
  return s == nullptr ? fallback : s;
}

std::optional<std::int64_t> opt_param(std::int64_t v) {
  if (v < 0) return std::nullopt;
  return v;
}

enum class TextFormat { plain, json, csv };

TextFormat parse_format(const char* format) {
  const std::string name = text_or(format, "plain");
  if (name == "plain") return TextFormat::plain;
  if (name == "json") return TextFormat::json;
  if (name == "csv") return TextFormat::csv;
  derange::fail_invalid("unknown format '" + name +
                        "' (expected plain, json, or csv)");
}

unsigned checked_digits(std::uint32_t digits) {
  if (digits == 0) derange::fail_invalid("digits must be >= 1");
  return digits;
}

derange::SumOptions sum_options(std::uint64_t term_budget, std::uint32_t jobs) {
  derange::SumOptions opts;
  if (term_budget != 0) opts.term_budget = term_budget;
  if (jobs != 0) opts.jobs = jobs;
  return opts;
}

std::string render_count(const derange::CountResult& result, TextFormat format) {
  switch (format) {
    case TextFormat::plain:
      return result.to_plain();
    case TextFormat::json:
      return result.to_json();
    case TextFormat::csv:
      return result.to_csv();
  }
  derange::fail_internal("unhandled format");
}

std::string render_table(const std::vector<derange::RatioRecord>& records,
                         TextFormat format, unsigned digits) {
  switch (format) {
    case TextFormat::plain:
      return derange::table_to_plain(records, digits);
    case TextFormat::json:
      return derange::table_to_json(records, digits);
    case TextFormat::csv:
      return derange::table_to_csv(records, digits);
  }
  derange::fail_internal("unhandled format");
}

std::string render_series(const derange::SeriesTruncation& series,
                          TextFormat format, unsigned digits) {
  switch (format) {
    case TextFormat::plain:
      return derange::series_to_plain(series, digits);
    case TextFormat::json:
      return derange::series_to_json(series, digits);
    case TextFormat::csv:
      return derange::series_to_csv(series, digits);
  }
  derange::fail_internal("unhandled format");
}

int value_call(char** out, const derange::BigInt& value) {
  *out = dup_string(derange::to_string(value));
  return DRG_OK;
}

}  // namespace

extern "C" {

const char* drg_version(void) { return "1.0.0"; }

const char* drg_strerror(int status) {
  switch (status) {
    case DRG_OK:
      return "ok";
    case DRG_ERR_INVALID:
      return "invalid parameters";
    case DRG_ERR_BUDGET:
      return "term budget exceeded";
    case DRG_ERR_IO:
      return "io failure";
    case DRG_ERR_INTERNAL:
      return "internal error";
    default:
      return "unknown status";
  }
}

const char* drg_last_error(void) { return t_last_error.c_str(); }

void drg_string_free(char* s) { std::free(s); }

int drg_factorial(uint64_t n, char** out) {
  return guarded([&] {
    require_out(out);
    value_call(out, derange::factorial(n));
  });
}

int drg_double_factorial_odd(uint64_t n, char** out) {
  return guarded([&] {
    require_out(out);
    value_call(out, derange::double_factorial_odd(n));
  });
}

int drg_binomial(uint64_t n, int64_t k, char** out) {
  return guarded([&] {
    require_out(out);
    value_call(out, derange::binomial(n, k));
  });
}

int drg_derangements(uint64_t n, const char* method, char** out) {
  return guarded([&] {
    require_out(out);
    const std::string name = text_or(method, "alternating");
    derange::DerangementMethod m;
    if (name == "alternating") {
      m = derange::DerangementMethod::alternating_sum;
    } else if (name == "euler") {
      m = derange::DerangementMethod::euler_recurrence;
    } else if (name == "sign") {
      m = derange::DerangementMethod::sign_recurrence;
    } else {
      derange::fail_invalid("unknown derangement method '" + name +
                            "' (expected alternating, euler, or sign)");
    }
    value_call(out, derange::derangements(n, m));
  });
}

int drg_deranged_matchings(uint64_t n, char** out) {
  return guarded([&] {
    require_out(out);
    value_call(out, derange::deranged_matchings(n));
  });
}

int drg_pm_tripartite(uint64_t m, char** out) {
  return guarded([&] {
    require_out(out);
    value_call(out, derange::pm_tripartite(m));
  });
}

int drg_pm_tripartite_minus_m(uint64_t m, char** out) {
  return guarded([&] {
    require_out(out);
    value_call(out, derange::pm_tripartite_minus_m(m));
  });
}

int drg_bpm(uint32_t r, uint64_t m, char** out) {
  return guarded([&] {
    require_out(out);
    value_call(out, derange::bpm_r_partite(r, m));
  });
}

int drg_bpm_minus_m(uint32_t r, uint64_t m, uint64_t term_budget, uint32_t jobs,
                    char** out) {
  return guarded([&] {
    require_out(out);
    value_call(out,
               derange::bpm_r_partite_minus_m(r, m, sum_options(term_budget, jobs)));
  });
}

int drg_pm_multipartite(uint32_t r, uint32_t c, int minus_m, char** out) {
  return guarded([&] {
    require_out(out);
    value_call(out, derange::pm_multipartite({r, c}, minus_m != 0));
  });
}

int drg_exact(const char* family, int64_t r, int64_t c, int64_t m, int64_t n,
              const char* graph_path, uint64_t term_budget, uint32_t jobs,
              const char* format, char** out) {
  return guarded([&] {
    require_out(out);
    const TextFormat text_format = parse_format(format);
    const std::string family_text = text_or(family, "");
    const auto parsed = derange::parse_family(family_text);
    if (!parsed) derange::fail_invalid("unknown family '" + family_text + "'");
    derange::CountParams params;
    params.r = opt_param(r);
    params.c = opt_param(c);
    params.m = opt_param(m);
    params.n = opt_param(n);
    params.graph_path = text_or(graph_path, "");
    const derange::SumOptions opts = sum_options(term_budget, jobs);
    params.term_budget = opts.term_budget;
    params.jobs = opts.jobs;
    *out = dup_string(render_count(derange::count(*parsed, params), text_format));
  });
}

int drg_graph_read(const char* path, drg_graph** out) {
  return guarded([&] {
    require_out(out);
    if (path == nullptr) derange::fail_invalid("null graph path");
    *out = new drg_graph{derange::read_edge_list_file(path)};
  });
}

int drg_graph_complete_multipartite(uint32_t r, uint32_t c, drg_graph** out) {
  return guarded([&] {
    require_out(out);
    const derange::Shape shape{r, c};
    if (r == 0 || c == 0) derange::fail_invalid("classes and class size must be >= 1");
    if (shape.vertex_count() > derange::Graph::kMaxVertices) {
      derange::fail_invalid("graph handles are limited to 64 vertices");
    }
    *out = new drg_graph{derange::Graph::complete_multipartite(shape)};
  });
}

void drg_graph_free(drg_graph* g) { delete g; }

int drg_graph_order(const drg_graph* g, uint32_t* out) {
  return guarded([&] {
    require_out(out);
    if (g == nullptr) derange::fail_invalid("null graph handle");
    *out = g->graph.order();
  });
}

int drg_graph_pm_count(const drg_graph* g, char** out) {
  return guarded([&] {
    require_out(out);
    if (g == nullptr) derange::fail_invalid("null graph handle");
    value_call(out, derange::enumerate_perfect_matchings(g->graph));
  });
}

int drg_graph_pm_via_complement(const drg_graph* complement, char** out) {
  return guarded([&] {
    require_out(out);
    if (complement == nullptr) derange::fail_invalid("null graph handle");
    value_call(out, derange::pm_via_complement(complement->graph));
  });
}

int drg_graph_mu_json(const drg_graph* g, char** out) {
  return guarded([&] {
    require_out(out);
    if (g == nullptr) derange::fail_invalid("null graph handle");
    const derange::MatchingSeq seq = derange::mu(g->graph);
    nlohmann::ordered_json doc;
    doc["order"] = g->graph.order();
    auto& values = doc["mu"] = nlohmann::ordered_json::array();
    for (const derange::BigInt& v : seq) values.push_back(derange::to_string(v));
    *out = dup_string(doc.dump(2) + "\n");
  });
}

int drg_graph_mu_bounds_json(const drg_graph* g, uint32_t d, char** out) {
  return guarded([&] {
    require_out(out);
    if (g == nullptr) derange::fail_invalid("null graph handle");
    *out = dup_string(derange::check_mu_bounds(g->graph, d).to_json());
  });
}

int drg_limit_target(uint32_t r, int r_to_infinity, uint32_t digits, char** out) {
  return guarded([&] {
    require_out(out);
    const unsigned rendered_digits = checked_digits(digits);
    const derange::Decimal target = r_to_infinity != 0
                                        ? derange::limit_target_infinity()
                                        : derange::limit_target(r);
    *out = dup_string(derange::render(target.value, rendered_digits));
  });
}

int drg_ratio_table(const char* regime, int64_t fixed, int64_t lo, int64_t hi,
                    uint64_t term_budget, uint32_t jobs, const char* format,
                    uint32_t digits, char** out) {
  return guarded([&] {
    require_out(out);
    const TextFormat text_format = parse_format(format);
    const unsigned rendered_digits = checked_digits(digits);
    const std::string regime_text = text_or(regime, "");
    const auto parsed = derange::parse_regime(regime_text);
    if (!parsed) derange::fail_invalid("unknown regime '" + regime_text + "'");
    if (lo > hi) derange::fail_invalid("empty index range: lo > hi");
    const derange::SumOptions opts = sum_options(term_budget, jobs);
    const auto records = derange::convergence_table(
        *parsed, opt_param(fixed), lo, hi, opts.term_budget, opts.jobs);
    *out = dup_string(render_table(records, text_format, rendered_digits));
  });
}

int drg_ratio_custom_regular(const char* graph_path, const char* format,
                             uint32_t digits, char** out) {
  return guarded([&] {
    require_out(out);
    const TextFormat text_format = parse_format(format);
    const unsigned rendered_digits = checked_digits(digits);
    if (graph_path == nullptr) derange::fail_invalid("null graph path");
    const derange::Graph complement = derange::read_edge_list_file(graph_path);
    const std::vector<derange::RatioRecord> records = {
        derange::regular_ratio_from_complement(complement)};
    *out = dup_string(render_table(records, text_format, rendered_digits));
  });
}

int drg_series(uint32_t r, uint32_t terms, const char* format, uint32_t digits,
               char** out) {
  return guarded([&] {
    require_out(out);
    const TextFormat text_format = parse_format(format);
    const unsigned rendered_digits = checked_digits(digits);
    const derange::SeriesTruncation series = derange::truncated_limit_series(r, terms);
    *out = dup_string(render_series(series, text_format, rendered_digits));
  });
}

int drg_verify(const char* suite, const char* fixtures_dir,
               drg_verify_callback cb, void* user, uint32_t* failures) {
  return guarded([&] {
    const std::string suite_text = text_or(suite, "fast");
    const auto parsed = derange::parse_suite(suite_text);
    if (!parsed) {
      derange::fail_invalid("unknown suite '" + suite_text +
                            "' (expected fast or full)");
    }
    const auto sink = [&](const derange::CheckResult& check) {
      if (cb != nullptr) {
        cb(user, check.name.c_str(), check.pass ? 1 : 0, check.detail.c_str());
      }
    };
    const unsigned failed =
        derange::run_verify(*parsed, text_or(fixtures_dir, ""), sink);
    if (failures != nullptr) *failures = failed;
  });
}

}  // extern "C"
