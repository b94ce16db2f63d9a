#include "doctest.h"

#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "asymptotics.hpp"
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

Graph cycle_on(unsigned n) {
  Graph g(n);
  for (unsigned v = 0; v + 1 < n; ++v) {
    g.add_edge(static_cast<int>(v), static_cast<int>(v + 1));
  }
  g.add_edge(0, static_cast<int>(n - 1));
  return g;
}

bool close(const Float50& a, const std::string& literal, const char* window = "1e-40") {
  return abs(a - Float50(literal)) < Float50(window);
}

}  // namespace

TEST_CASE("limit targets match 50-digit literals") {
  CHECK(close(limit_target(2).value,
              "0.36787944117144232159552377016146086744581113103177"));
  CHECK(close(limit_target(3).value,
              "0.47236655274101470713804655094326791297020357913648"));
  CHECK(close(limit_target(6).value,
              "0.54881163609402643262845891723256787533231195669063"));
  CHECK(close(limit_target_infinity().value,
              "0.60653065971263342360379953499118045344191813548719"));
  CHECK(status_of([] { limit_target(1); }) == Status::invalid);
}

TEST_CASE("regime names round-trip") {
  const Regime regimes[] = {
      Regime::r2_hatcheck,    Regime::r2n_kindergartner, Regime::r3_tripartite,
      Regime::bpm_general,    Regime::regular_removal,   Regime::constant_class,
  };
  for (Regime regime : regimes) {
    const auto parsed = parse_regime(regime_name(regime));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == regime);
  }
  CHECK_FALSE(parse_regime("no-such-regime").has_value());
  CHECK(regime_name(Regime::r3_tripartite) == "r3");
  CHECK(regime_name(Regime::constant_class) == "class");
}

TEST_CASE("hatcheck records carry the exact derangement ratio") {
  RegimeRequest request;
  request.regime = Regime::r2_hatcheck;
  request.index = 4;
  const RatioRecord record = ratio_record(request);
  CHECK(record.numerator == 9);
  CHECK(record.denominator == 24);
  CHECK(record.exact_ratio == make_rational(3, 8));
  CHECK(close(record.ratio.value, "0.375", "1e-45"));
  CHECK(record.n.value() == 4);
  CHECK_FALSE(record.m.has_value());
  CHECK(abs(record.abs_error.value -
            abs(record.ratio.value - record.target.value)) < Float50("1e-45"));
}

TEST_CASE("kindergartner records match the matching ratio") {
  RegimeRequest request;
  request.regime = Regime::r2n_kindergartner;
  request.index = 3;
  const RatioRecord record = ratio_record(request);
  CHECK(record.numerator == 8);
  CHECK(record.denominator == 15);
}

TEST_CASE("r3 record at m=1 has the documented error") {
  RegimeRequest request;
  request.regime = Regime::r3_tripartite;
  request.index = 1;
  const RatioRecord record = ratio_record(request);
  CHECK(record.numerator == 4);
  CHECK(record.denominator == 8);
  CHECK(record.abs_error.value > Float50("0.0276"));
  CHECK(record.abs_error.value < Float50("0.0277"));
}

TEST_CASE("bpm record specializes correctly") {
  RegimeRequest request;
  request.regime = Regime::bpm_general;
  request.index = 1;
  request.fixed = 4;
  const RatioRecord record = ratio_record(request);
  CHECK(record.numerator == 686);
  CHECK(record.denominator == 1296);
  CHECK(record.r.value() == 4);
  CHECK(record.m.value() == 1);
  CHECK(status_of([] {
          RegimeRequest bad;
          bad.regime = Regime::bpm_general;
          bad.index = 1;
          bad.fixed = 1;
          ratio_record(bad);
        }) == Status::invalid);
  CHECK(status_of([] {
          RegimeRequest bad;
          bad.regime = Regime::bpm_general;
          bad.index = 1;
          ratio_record(bad);
        }) == Status::invalid);
}

TEST_CASE("regular records cover degrees 0 through 2") {
  RegimeRequest request;
  request.regime = Regime::regular_removal;
  request.fixed = 0;
  request.index = 3;
  const RatioRecord flat = ratio_record(request);
  CHECK(flat.exact_ratio == 1);
  CHECK(flat.abs_error.value == 0);

  request.fixed = 1;
  const RatioRecord matching = ratio_record(request);
  CHECK(matching.numerator == 8);
  CHECK(matching.denominator == 15);

  request.fixed = 2;
  request.index = 4;
  const RatioRecord cycles = ratio_record(request);
  CHECK(cycles.abs_error.value > Float50("0.0726"));
  CHECK(cycles.abs_error.value < Float50("0.0727"));

  CHECK(status_of([] {
          RegimeRequest bad;
          bad.regime = Regime::regular_removal;
          bad.fixed = 3;
          bad.index = 4;
          ratio_record(bad);
        }) == Status::invalid);
}

TEST_CASE("class records divide the vertex set evenly") {
  RegimeRequest request;
  request.regime = Regime::constant_class;
  request.fixed = 2;
  request.index = 4;
  const RatioRecord record = ratio_record(request);
  CHECK(record.numerator == 33);
  CHECK(record.denominator == 60);
  CHECK(record.c.value() == 2);
  CHECK(status_of([] {
          RegimeRequest bad;
          bad.regime = Regime::constant_class;
          bad.fixed = 4;
          bad.index = 3;
          ratio_record(bad);
        }) == Status::invalid);
}

TEST_CASE("convergence tables skip infeasible indices") {
  const auto hatcheck = convergence_table(Regime::r2_hatcheck, std::nullopt, 1, 3);
  REQUIRE(hatcheck.size() == 3);
  CHECK(hatcheck[0].exact_ratio == 0);
  CHECK(hatcheck[1].exact_ratio == make_rational(1, 2));
  CHECK(hatcheck[2].exact_ratio == make_rational(1, 3));

  const auto cycles = convergence_table(Regime::regular_removal, 2, 1, 4);
  REQUIRE(cycles.size() == 3);
  CHECK(cycles.front().n.value() == 2);

  const auto classes = convergence_table(Regime::constant_class, 3, 1, 6);
  REQUIRE(classes.size() == 2);
  CHECK(classes[0].n.value() == 3);
  CHECK(classes[1].n.value() == 6);
  CHECK(classes[0].numerator == 2);
  CHECK(classes[0].denominator == 6);
}

TEST_CASE("error decays along each regime") {
  const auto r3 = convergence_table(Regime::r3_tripartite, std::nullopt, 1, 6);
  CHECK(r3.back().abs_error.value < r3.front().abs_error.value);
  const auto kinder = convergence_table(Regime::r2n_kindergartner, std::nullopt, 2, 10);
  CHECK(kinder.back().abs_error.value < kinder.front().abs_error.value);
}

TEST_CASE("custom regular complements agree with the cycle regime") {
  const RatioRecord direct = regular_ratio_from_complement(cycle_on(8));
  RegimeRequest request;
  request.regime = Regime::regular_removal;
  request.fixed = 2;
  request.index = 4;
  const RatioRecord via_regime = ratio_record(request);
  CHECK(direct.numerator == via_regime.numerator);
  CHECK(direct.denominator == via_regime.denominator);
  CHECK(direct.d.value() == 2);

  Graph uneven(4);
  uneven.add_edge(0, 1);
  uneven.add_edge(1, 2);
  CHECK(status_of([&] { regular_ratio_from_complement(uneven); }) ==
        Status::invalid);
}

TEST_CASE("csv table has the fixed header and filled parameter columns") {
  const auto table = convergence_table(Regime::r3_tripartite, std::nullopt, 1, 2);
  const std::string csv = table_to_csv(table, 15);
  CHECK(csv.find("regime,r,c,m,n,d,numerator,denominator,ratio,target,abs_error\n") == 0);
  CHECK(csv.find("r3,,,1,,,4,8,0.5,") != std::string::npos);
  CHECK(csv.find("r3,,,2,,,825,1728,") != std::string::npos);

  const std::string bpm_csv =
      table_to_csv(convergence_table(Regime::bpm_general, 4, 1, 1), 15);
  CHECK(bpm_csv.find("bpm,4,,1,,,686,1296,") != std::string::npos);

  const std::string hatcheck_csv =
      table_to_csv(convergence_table(Regime::r2_hatcheck, std::nullopt, 2, 2), 15);
  CHECK(hatcheck_csv.find("hatcheck,,,,2,,1,2,0.5,") != std::string::npos);
}

TEST_CASE("json table parses with one object per record") {
  const auto table = convergence_table(Regime::r2_hatcheck, std::nullopt, 1, 4);
  const auto doc = nlohmann::json::parse(table_to_json(table, 15));
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 4);
  CHECK(doc[3].at("regime") == "hatcheck");
  CHECK(doc[3].at("numerator") == "9");
  CHECK(doc[3].at("denominator") == "24");
  CHECK(doc[3].at("n") == 4);
  CHECK(doc[3].at("ratio").is_string());
}

TEST_CASE("plain table mentions every record") {
  const auto table = convergence_table(Regime::r2_hatcheck, std::nullopt, 1, 3);
  const std::string plain = table_to_plain(table, 15);
  CHECK(plain.find("hatcheck") != std::string::npos);
  CHECK(plain.find("abs_error") != std::string::npos);
}

TEST_CASE("series truncation carries a dominating tail bound") {
  const SeriesTruncation base = truncated_limit_series(2, 0);
  CHECK(base.value.value == 1);

  for (unsigned r = 2; r <= 6; ++r) {
    for (unsigned t : {0u, 5u, 30u}) {
      const SeriesTruncation s = truncated_limit_series(r, t);
      CHECK(s.tail_bound.value >= s.abs_error.value);
      CHECK(s.abs_error.value ==
            abs(s.value.value - s.target.value));
    }
    CHECK(truncated_limit_series(r, 30).abs_error.value < Float50("1e-12"));
  }

  const SeriesTruncation fine = truncated_limit_series(2, 5);
  CHECK(fine.abs_error.value > Float50("0.0012"));
  CHECK(fine.abs_error.value < Float50("0.0013"));
  CHECK(fine.tail_bound.value < Float50("0.0038"));

  CHECK(status_of([] { truncated_limit_series(1, 10); }) == Status::invalid);
  CHECK(status_of([] { truncated_limit_series(3, 200000); }) == Status::invalid);
}

TEST_CASE("series renders in all three formats") {
  const SeriesTruncation s = truncated_limit_series(3, 10);
  const auto doc = nlohmann::json::parse(series_to_json(s, 15));
  CHECK(doc.at("r") == 3);
  CHECK(doc.at("terms") == 10);
  CHECK(doc.at("value").is_string());
  CHECK(doc.at("tail_bound").is_string());

  const std::string csv = series_to_csv(s, 15);
  CHECK(csv.find("r,terms,value,target,tail_bound,abs_error\n") == 0);

  const std::string plain = series_to_plain(s, 15);
  CHECK(plain.find("tail_bound") != std::string::npos);
}
