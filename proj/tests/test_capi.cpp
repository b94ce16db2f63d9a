#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "derange/derange.h"

namespace {

int g_failures = 0;

void expect(bool ok, const char* label) {
  if (!ok) {
    std::printf("FAIL %s\n", label);
    ++g_failures;
  }
}

std::string take(char* text) {
  const std::string copy = text == nullptr ? "" : text;
  drg_string_free(text);
  return copy;
}

void counters() {
  char* out = nullptr;
  expect(drg_factorial(5, &out) == DRG_OK && take(out) == "120", "factorial");
  expect(drg_double_factorial_odd(3, &out) == DRG_OK && take(out) == "15",
         "double factorial");
  expect(drg_binomial(10, 3, &out) == DRG_OK && take(out) == "120", "binomial");
  expect(drg_binomial(10, 11, &out) == DRG_OK && take(out) == "0",
         "binomial out of range");
  expect(drg_derangements(4, nullptr, &out) == DRG_OK && take(out) == "9",
         "derangements default method");
  expect(drg_derangements(6, "euler", &out) == DRG_OK && take(out) == "265",
         "derangements euler");
  expect(drg_derangements(6, "sign", &out) == DRG_OK && take(out) == "265",
         "derangements sign");
  expect(drg_derangements(6, "bogus", &out) == DRG_ERR_INVALID,
         "derangements bad method");
  expect(std::strlen(drg_last_error()) > 0, "last error populated");
  expect(drg_deranged_matchings(3, &out) == DRG_OK && take(out) == "8",
         "deranged matchings");
  expect(drg_pm_tripartite(2, &out) == DRG_OK && take(out) == "1728",
         "tripartite");
  expect(drg_pm_tripartite_minus_m(2, &out) == DRG_OK && take(out) == "825",
         "tripartite minus m");
  expect(drg_bpm(4, 1, &out) == DRG_OK && take(out) == "1296", "bpm");
  expect(drg_bpm_minus_m(4, 1, 0, 0, &out) == DRG_OK && take(out) == "686",
         "bpm minus m");
  expect(drg_bpm_minus_m(4, 2, 500, 1, &out) == DRG_ERR_BUDGET,
         "bpm budget check");
  expect(drg_pm_multipartite(2, 5, 1, &out) == DRG_OK && take(out) == "44",
         "multipartite minus m");
  expect(drg_factorial(3, nullptr) == DRG_ERR_INVALID, "null out pointer");
}

void exact_dispatch() {
  char* out = nullptr;
  expect(drg_exact("derangement", -1, -1, -1, 4, nullptr, 0, 0, "plain", &out) ==
             DRG_OK,
         "exact derangement status");
  expect(take(out).find("9") != std::string::npos, "exact derangement value");
  expect(drg_exact("bpm-minus-m", 4, -1, 1, -1, nullptr, 0, 0, "json", &out) ==
             DRG_OK,
         "exact bpm json status");
  const std::string json = take(out);
  expect(json.find("\"686\"") != std::string::npos, "exact bpm json value");
  expect(drg_exact("tripartite", -1, -1, 1, -1, nullptr, 0, 0, "csv", &out) ==
             DRG_OK,
         "exact csv status");
  expect(take(out).find("family,r,c,m,n,value,method") == 0, "exact csv header");
  expect(drg_exact("no-such", -1, -1, -1, 4, nullptr, 0, 0, "plain", &out) ==
             DRG_ERR_INVALID,
         "exact unknown family");
  expect(drg_exact("derangement", -1, -1, -1, 4, nullptr, 0, 0, "yaml", &out) ==
             DRG_ERR_INVALID,
         "exact unknown format");
  expect(drg_exact("derangement", -1, -1, -1, -1, nullptr, 0, 0, "plain",
                   &out) == DRG_ERR_INVALID,
         "exact missing parameter");
}

void graphs() {
  drg_graph* g = nullptr;
  expect(drg_graph_complete_multipartite(3, 2, &g) == DRG_OK, "build K_{2,2,2}");
  std::uint32_t order = 0;
  expect(drg_graph_order(g, &order) == DRG_OK && order == 6, "graph order");
  char* out = nullptr;
  expect(drg_graph_pm_count(g, &out) == DRG_OK && take(out) == "8",
         "graph pm count");
  expect(drg_graph_mu_json(g, &out) == DRG_OK, "mu json status");
  const std::string mu = take(out);
  expect(mu.find("\"mu\"") != std::string::npos &&
             mu.find("\"12\"") != std::string::npos,
         "mu json lists the edge count");
  drg_graph_free(g);

  drg_graph* pairs = nullptr;
  expect(drg_graph_complete_multipartite(2, 1, &pairs) == DRG_OK, "build K_2");
  expect(drg_graph_pm_via_complement(pairs, &out) == DRG_OK && take(out) == "0",
         "pm via complement of K_2");
  expect(drg_graph_mu_bounds_json(pairs, 1, &out) == DRG_OK, "bounds status");
  expect(take(out).find("\"all_hold\": true") != std::string::npos,
         "bounds hold");
  drg_graph_free(pairs);

  expect(drg_graph_read("/nonexistent/graph.txt", &g) == DRG_ERR_IO,
         "missing graph file is io");
  expect(drg_graph_complete_multipartite(9, 9, &g) == DRG_ERR_INVALID,
         "oversized graph rejected");
  expect(drg_graph_order(nullptr, &order) == DRG_ERR_INVALID, "null handle");
}

void tables_and_series() {
  char* out = nullptr;
  expect(drg_limit_target(3, 0, 30, &out) == DRG_OK, "limit target status");
  expect(take(out).substr(0, 10) == "0.47236655", "limit target value");
  expect(drg_limit_target(0, 1, 15, &out) == DRG_OK, "limit target infinity");
  expect(take(out).substr(0, 8) == "0.606530", "limit target infinity value");
  expect(drg_limit_target(1, 0, 15, &out) == DRG_ERR_INVALID,
         "limit target r=1");

  expect(drg_ratio_table("r3", -1, 1, 3, 0, 0, "csv", 15, &out) == DRG_OK,
         "ratio table status");
  const std::string csv = take(out);
  expect(csv.find("regime,r,c,m,n,d,numerator,denominator,ratio,target,"
                  "abs_error\n") == 0,
         "ratio csv header");
  expect(csv.find("r3,,,1,,,4,8,") != std::string::npos, "ratio csv row");
  expect(drg_ratio_table("r3", -1, 3, 1, 0, 0, "csv", 15, &out) ==
             DRG_ERR_INVALID,
         "ratio empty range");
  expect(drg_ratio_table("bogus", -1, 1, 3, 0, 0, "csv", 15, &out) ==
             DRG_ERR_INVALID,
         "ratio unknown regime");
  expect(drg_ratio_table("bpm", 6, 3, 3, 0, 0, "csv", 15, &out) ==
             DRG_ERR_BUDGET,
         "ratio budget propagates");

  expect(drg_series(3, 30, "json", 20, &out) == DRG_OK, "series status");
  const std::string series = take(out);
  expect(series.find("\"tail_bound\"") != std::string::npos, "series fields");
  expect(drg_series(1, 30, "json", 20, &out) == DRG_ERR_INVALID, "series r=1");
  expect(drg_series(3, 30, "json", 0, &out) == DRG_ERR_INVALID,
         "series zero digits");
}

void ratio_custom() {
  const char* path = "capi_cycle_complement.txt";
  std::FILE* f = std::fopen(path, "wb");
  expect(f != nullptr, "fixture file opens");
  if (f != nullptr) {
    std::fputs("vertices 8 classes 0 size 0\n", f);
    std::fputs("0 1\n0 7\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n", f);
    std::fclose(f);
  }
  char* out = nullptr;
  expect(drg_ratio_custom_regular(path, "csv", 15, &out) == DRG_OK,
         "custom regular status");
  const std::string csv = take(out);
  expect(csv.find("regular,") != std::string::npos, "custom regular regime");
  expect(csv.find(",2,") != std::string::npos, "custom regular degree");
  std::remove(path);
}

void verify_callbacks() {
  std::uint32_t failures = 0;
  expect(drg_verify("bogus", nullptr, nullptr, nullptr, &failures) ==
             DRG_ERR_INVALID,
         "verify unknown suite");

  struct Tally {
    unsigned calls = 0;
  } tally;
  const auto cb = [](void* user, const char* name, int pass, const char*) {
    auto* t = static_cast<Tally*>(user);
    ++t->calls;
    if (pass == 0) std::printf("unexpected FAIL in %s\n", name);
  };
  expect(drg_verify("fast", nullptr, cb, &tally, &failures) == DRG_OK,
         "verify fast runs");
  expect(tally.calls > 20, "verify reports each check");
  expect(failures == 0, "verify fast passes");
}

}  // namespace

int main() {
  expect(std::string(drg_version()) == "1.0.0", "version");
  expect(std::string(drg_strerror(DRG_OK)) == "ok", "strerror ok");
  expect(std::strlen(drg_strerror(DRG_ERR_BUDGET)) > 0, "strerror budget");
  counters();
  exact_dispatch();
  graphs();
  tables_and_series();
  ratio_custom();
  verify_callbacks();
  if (g_failures == 0) {
    std::printf("capi: all checks passed\n");
    return 0;
  }
  std::printf("capi: %d checks failed\n", g_failures);
  return 1;
}
