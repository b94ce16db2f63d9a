#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "counting.hpp"
#include "error.hpp"
#include "graphs.hpp"

using namespace derange;

namespace {

Status status_of(const std::function<void()>& fn) {
  try {
    fn();
    return Status::ok;
  } catch (const Error& e) {
    return e.status();
  }
}

}  // namespace

TEST_CASE("derangements match the frozen table") {
  const long expected[] = {1, 0, 1, 2, 9, 44, 265, 1854, 14833};
  for (std::uint64_t n = 0; n <= 8; ++n) CHECK(derangements(n) == expected[n]);
}

TEST_CASE("derangement methods agree") {
  for (std::uint64_t n = 0; n <= 120; ++n) {
    const BigInt a = derangements(n, DerangementMethod::alternating_sum);
    CHECK(a == derangements(n, DerangementMethod::euler_recurrence));
    CHECK(a == derangements(n, DerangementMethod::sign_recurrence));
  }
}

TEST_CASE("deranged matchings match the frozen table") {
  const long expected[] = {1, 0, 2, 8, 60, 544};
  for (std::uint64_t n = 0; n <= 5; ++n) CHECK(deranged_matchings(n) == expected[n]);
}

TEST_CASE("deranged matchings equal the complete-graph oracle") {
  for (std::uint64_t n = 1; n <= 5; ++n) {
    const Shape shape{static_cast<unsigned>(2 * n), 1};
    const Graph g = Graph::complete(static_cast<unsigned>(2 * n));
    const Matching forbidden = canonical_perfect_matching(shape, false);
    CHECK(deranged_matchings(n) == enumerate_perfect_matchings(g, &forbidden));
  }
}

TEST_CASE("tripartite counts match the oracle values") {
  CHECK(pm_tripartite(1) == 8);
  CHECK(pm_tripartite(2) == 1728);
  CHECK(pm_tripartite(3) == 1728000);
  CHECK(pm_tripartite_minus_m(1) == 4);
  CHECK(pm_tripartite_minus_m(2) == 825);
  CHECK(pm_tripartite_minus_m(3) == 819242);
  CHECK(pm_tripartite(0) == 1);
  CHECK(pm_tripartite_minus_m(0) == 1);
}

TEST_CASE("tripartite subset reference agrees with the triple sum") {
  for (std::uint64_t m = 0; m <= 3; ++m) {
    CHECK(pm_tripartite_minus_m_subsets(m) == pm_tripartite_minus_m(m));
  }
}

TEST_CASE("balanced counts match the oracle values") {
  CHECK(bpm_r_partite(3, 1) == 8);
  CHECK(bpm_r_partite(4, 1) == 1296);
  CHECK(bpm_r_partite_minus_m(4, 1) == 686);
  CHECK(bpm_r_partite(2, 4) == factorial(4));
  CHECK(bpm_r_partite(5, 0) == 1);
  CHECK(bpm_r_partite_minus_m(5, 0) == 1);
}

TEST_CASE("balanced sum specializes to the tripartite and bipartite counts") {
  for (std::uint64_t m = 1; m <= 6; ++m) {
    CHECK(bpm_r_partite(3, m) == pm_tripartite(m));
    CHECK(bpm_r_partite_minus_m(3, m) == pm_tripartite_minus_m(m));
  }
  for (std::uint64_t m = 1; m <= 25; ++m) {
    CHECK(bpm_r_partite_minus_m(2, m) == derangements(m));
  }
}

TEST_CASE("incremental excess sum matches the scratch reference") {
  CHECK(bpm_r_partite_minus_m(4, 2) == bpm_r_partite_minus_m_reference(4, 2));
  CHECK(bpm_r_partite_minus_m(4, 3) == bpm_r_partite_minus_m_reference(4, 3));
  CHECK(bpm_r_partite_minus_m(5, 1) == bpm_r_partite_minus_m_reference(5, 1));
  CHECK(bpm_r_partite_minus_m(5, 2) == bpm_r_partite_minus_m_reference(5, 2));
}

TEST_CASE("excess sum is deterministic across worker counts") {
  SumOptions four_jobs;
  four_jobs.jobs = 4;
  CHECK(bpm_r_partite_minus_m(4, 3, four_jobs) == bpm_r_partite_minus_m(4, 3));
  CHECK(bpm_r_partite_minus_m(5, 2, four_jobs) == bpm_r_partite_minus_m(5, 2));
}

TEST_CASE("term budget is checked before summing") {
  SumOptions tight;
  tight.term_budget = 500;
  const auto blocked = [&] { bpm_r_partite_minus_m(4, 2, tight); };
  CHECK(status_of(blocked) == Status::budget);
  try {
    bpm_r_partite_minus_m(4, 2, tight);
  } catch (const Error& e) {
    const std::string message = e.what();
    CHECK(message.find("term budget") != std::string::npos);
    CHECK(message.find("729") != std::string::npos);
  }
  CHECK(bpm_minus_m_term_count(4, 2) == 729);
  CHECK(bpm_minus_m_term_count(6, 3) == BigInt("1073741824"));
}

TEST_CASE("balanced parameters are validated") {
  CHECK(status_of([] { bpm_r_partite(1, 2); }) == Status::invalid);
  CHECK(status_of([] { bpm_r_partite_minus_m(0, 1); }) == Status::invalid);
}

TEST_CASE("complement identity reproduces forbidden-matching counts") {
  for (std::uint64_t n = 1; n <= 5; ++n) {
    Graph complement(static_cast<unsigned>(2 * n));
    for (unsigned i = 0; i < n; ++i) {
      complement.add_edge(static_cast<int>(2 * i), static_cast<int>(2 * i + 1));
    }
    CHECK(pm_via_complement(complement) == deranged_matchings(n));
    CHECK(pm_via_complement(Graph(static_cast<unsigned>(2 * n))) ==
          double_factorial_odd(n));
  }
  CHECK(pm_via_complement(Graph::complete(6)) == 0);
}

TEST_CASE("sequence overload validates its shape") {
  CHECK(pm_via_complement(MatchingSeq{1}, 4) == 3);
  CHECK(status_of([] { pm_via_complement(MatchingSeq{1}, 5); }) == Status::invalid);
  CHECK(status_of([] { pm_via_complement(MatchingSeq{1, 0, 0, 5}, 4); }) ==
        Status::invalid);
}

TEST_CASE("multipartite counts specialize to known families") {
  for (unsigned n = 1; n <= 6; ++n) {
    CHECK(pm_multipartite({2, n}, false) == factorial(n));
    CHECK(pm_multipartite({2, n}, true) == derangements(n));
  }
  for (unsigned n = 1; n <= 5; ++n) {
    CHECK(pm_multipartite({2 * n, 1}, false) == double_factorial_odd(n));
    CHECK(pm_multipartite({2 * n, 1}, true) == deranged_matchings(n));
  }
  CHECK(pm_multipartite({3, 2}, false) == 8);
  CHECK(pm_multipartite({3, 2}, true) == 4);
  CHECK(pm_multipartite({4, 3}, false) ==
        enumerate_perfect_matchings(Graph::complete_multipartite({4, 3})));
  CHECK(status_of([] { pm_multipartite({3, 3}, false); }) == Status::invalid);
}

TEST_CASE("count dispatcher routes families and validates parameters") {
  CountParams params;
  params.n = 4;
  const CountResult d4 = count(Family::derangement, params);
  CHECK(d4.value == 9);
  CHECK(d4.family == "derangement");

  CountParams bpm_params;
  bpm_params.r = 4;
  bpm_params.m = 1;
  const CountResult b = count(Family::bpm_minus_m, bpm_params);
  CHECK(b.value == 686);

  CHECK(status_of([] { count(Family::derangement, CountParams{}); }) ==
        Status::invalid);
  try {
    count(Family::derangement, CountParams{});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("--n") != std::string::npos);
  }
  CHECK(status_of([] {
          CountParams p;
          p.r = 1;
          p.m = 1;
          count(Family::bpm, p);
        }) == Status::invalid);
}

TEST_CASE("custom family counts a graph file") {
  const std::string path = "custom_graph_test.txt";
  {
    std::ofstream out(path);
    write_edge_list(out, Graph::complete(6));
  }
  CountParams params;
  params.graph_path = path;
  const CountResult result = count(Family::custom, params);
  CHECK(result.value == 15);
  std::remove(path.c_str());

  CHECK(status_of([] { count(Family::custom, CountParams{}); }) ==
        Status::invalid);
}

TEST_CASE("family names round-trip") {
  const Family families[] = {
      Family::derangement,  Family::deranged_matching,
      Family::tripartite,   Family::tripartite_minus_m,
      Family::bpm,          Family::bpm_minus_m,
      Family::multipartite, Family::multipartite_minus_m,
      Family::custom,
  };
  for (Family family : families) {
    const auto parsed = parse_family(family_name(family));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == family);
  }
  CHECK_FALSE(parse_family("no-such-family").has_value());
}

TEST_CASE("count results render in all three formats") {
  CountParams params;
  params.n = 4;
  const CountResult result = count(Family::derangement, params);

  const auto doc = nlohmann::json::parse(result.to_json());
  CHECK(doc.at("family") == "derangement");
  CHECK(doc.at("value") == "9");
  CHECK(doc.at("method").is_string());

  const std::string csv = result.to_csv();
  CHECK(csv.find("family,r,c,m,n,value,method") == 0);
  CHECK(csv.find(",9,") != std::string::npos);

  const std::string plain = result.to_plain();
  CHECK(plain.find("derangement") != std::string::npos);
  CHECK(plain.find('9') != std::string::npos);
}
