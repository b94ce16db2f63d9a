#ifndef DERANGE_ASYMPTOTICS_HPP
#define DERANGE_ASYMPTOTICS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bigmath.hpp"
#include "counting.hpp"
#include "graphs.hpp"

namespace derange {

// e^{-r/(2r-2)} for finite r >= 2; the large-r limit is e^{-1/2}.
Decimal limit_target(unsigned r);
Decimal limit_target_infinity();

enum class Regime {
  r2_hatcheck,        // d_n / n!                      -> e^{-1}
  r2n_kindergartner,  // D_n / (2n-1)!!                -> e^{-1/2}
  r3_tripartite,      // tripartite minus-M / plain    -> e^{-3/4}
  bpm_general,        // balanced minus-M / plain      -> e^{-r/(2r-2)}
  regular_removal,    // d-regular complement removal  -> e^{-d/2}
  constant_class,     // K_{r x c} minus-M / plain     -> e^{-1/2}
};

// Short names used by the CLI and in CSV/JSON output: hatcheck,
// kindergartner, r3, bpm, regular, class.
std::string regime_name(Regime regime);
std::optional<Regime> parse_regime(const std::string& name);

struct RatioRecord {
  Regime regime;
  std::optional<std::int64_t> r;
  std::optional<std::int64_t> c;
  std::optional<std::int64_t> m;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> d;
  BigInt numerator;
  BigInt denominator;
  BigRat exact_ratio;  // numerator/denominator in lowest terms
  Decimal ratio;
  Decimal target;
  Decimal abs_error;
};

struct RegimeRequest {
  Regime regime;
  std::int64_t index = 0;  // the running parameter: n, or m for r3/bpm
  std::optional<std::int64_t> fixed;  // r for bpm, d for regular, c for class
  std::uint64_t term_budget = kDefaultTermBudget;
  unsigned jobs = 1;
};

// One exact convergence data point. The running parameter and the
// fixed one are validated per regime (bpm needs r >= 2 and m >= 1;
// regular needs d in {0,1,2}; class needs c | 2n and 2n/c >= 2 with
// 2n <= 64).
RatioRecord ratio_record(const RegimeRequest& request);

// Records for index lo..hi in order. Indices that violate a
// divisibility constraint (class regime) or a feasibility floor
// (regular d = 2 needs n >= 2) are skipped, not errors.
std::vector<RatioRecord> convergence_table(Regime regime,
                                           std::optional<std::int64_t> fixed,
                                           std::int64_t lo, std::int64_t hi,
                                           std::uint64_t term_budget = kDefaultTermBudget,
                                           unsigned jobs = 1);

// Ratio for an explicitly supplied d-regular complement on 2n
// vertices: pm(K_{2n} - complement edges) / (2n-1)!!, target e^{-d/2}.
RatioRecord regular_ratio_from_complement(const Graph& complement);

struct SeriesTruncation {
  unsigned r = 0;
  unsigned terms_per_factor = 0;
  Decimal value;      // error_bound carries the certified tail bound
  Decimal tail_bound;
  Decimal target;
  Decimal abs_error;  // |value - target|
};

// Evaluates prod over C(r,2) factors of sum_{x=0}^{t} (-1)^x/(x!(r-1)^{2x}).
// The factor sum is exact rational; the per-factor tail is bounded by
// e/((t+1)!(r-1)^{2(t+1)}) with e over-approximated rationally, and the
// factor bounds combine into q*tau*(1+tau)^{q-1} (factors lie in (0,1]).
SeriesTruncation truncated_limit_series(unsigned r, unsigned t);

// Table rendering. CSV header:
// regime,r,c,m,n,d,numerator,denominator,ratio,target,abs_error
// with unused parameter columns left empty and integers as decimal
// strings; digits controls Decimal rendering.
std::string table_to_csv(const std::vector<RatioRecord>& records, unsigned digits);
std::string table_to_json(const std::vector<RatioRecord>& records, unsigned digits);
std::string table_to_plain(const std::vector<RatioRecord>& records, unsigned digits);

std::string series_to_json(const SeriesTruncation& s, unsigned digits);
std::string series_to_plain(const SeriesTruncation& s, unsigned digits);
std::string series_to_csv(const SeriesTruncation& s, unsigned digits);

}  // namespace derange

#endif
