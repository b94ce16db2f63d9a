#include "asymptotics.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "error.hpp"
#include "matchpoly.hpp"

namespace derange {

namespace {

Decimal exp_decimal(const Float50& exponent) {
  return Decimal(boost::multiprecision::exp(exponent));
}

// Strict rational upper bound on e (the true expansion continues
// ...69995957, so rounding the 50th digit up is strictly above e).
BigRat e_upper_bound() {
  const BigInt num("271828182845904523536028747135266249775724709370000");
  BigInt den(10);
  mpz_pow_ui(den.get_mpz_t(), den.get_mpz_t(), 50);
  return make_rational(num, den);
}

}  // namespace

Decimal limit_target(unsigned r) {
  if (r < 2) fail_invalid("limit targets need r >= 2");
  const Float50 exponent = -(Float50(r) / Float50(2 * r - 2));
  return exp_decimal(exponent);
}

Decimal limit_target_infinity() { return exp_decimal(Float50("-0.5")); }

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::r2_hatcheck: return "hatcheck";
    case Regime::r2n_kindergartner: return "kindergartner";
    case Regime::r3_tripartite: return "r3";
    case Regime::bpm_general: return "bpm";
    case Regime::regular_removal: return "regular";
    case Regime::constant_class: return "class";
  }
  fail_internal("unknown regime");
}

std::optional<Regime> parse_regime(const std::string& name) {
  static const std::pair<const char*, Regime> table[] = {
      {"hatcheck", Regime::r2_hatcheck},
      {"kindergartner", Regime::r2n_kindergartner},
      {"r3", Regime::r3_tripartite},
      {"bpm", Regime::bpm_general},
      {"regular", Regime::regular_removal},
      {"class", Regime::constant_class},
  };
  for (const auto& [key, value] : table)
    if (name == key) return value;
  return std::nullopt;
}

namespace {

RatioRecord finish_record(RatioRecord record, BigInt num, BigInt den,
                          Decimal target) {
  record.exact_ratio = make_rational(num, den);
  record.numerator = std::move(num);
  record.denominator = std::move(den);
  record.ratio = Decimal(to_float(record.exact_ratio));
  record.target = std::move(target);
  record.abs_error =
      Decimal(boost::multiprecision::abs(record.ratio.value - record.target.value));
  return record;
}

// mu of n disjoint edges, by convolution (the complement removed in the
// d = 1 regime).
MatchingSeq mu_disjoint_edges(std::uint64_t n) {
  const MatchingSeq edge{BigInt(1), BigInt(1)};
  MatchingSeq seq{BigInt(1)};
  for (std::uint64_t i = 0; i < n; ++i) seq = convolve(seq, edge);
  return seq;
}

}  // namespace

RatioRecord ratio_record(const RegimeRequest& request) {
  RatioRecord record;
  record.regime = request.regime;
  const std::int64_t index = request.index;
  switch (request.regime) {
    case Regime::r2_hatcheck: {
      if (index < 1) fail_invalid("hatcheck needs n >= 1");
      record.n = index;
      const std::uint64_t n = static_cast<std::uint64_t>(index);
      return finish_record(std::move(record), derangements(n), factorial(n),
                           limit_target(2));
    }
    case Regime::r2n_kindergartner: {
      if (index < 1) fail_invalid("kindergartner needs n >= 1");
      record.n = index;
      const std::uint64_t n = static_cast<std::uint64_t>(index);
      return finish_record(std::move(record), deranged_matchings(n),
                           double_factorial_odd(n), limit_target_infinity());
    }
    case Regime::r3_tripartite: {
      if (index < 1) fail_invalid("the r3 regime needs m >= 1");
      record.m = index;
      const std::uint64_t m = static_cast<std::uint64_t>(index);
      return finish_record(std::move(record), pm_tripartite_minus_m(m),
                           pm_tripartite(m), limit_target(3));
    }
    case Regime::bpm_general: {
      if (!request.fixed) fail_invalid("the bpm regime needs --r");
      const std::int64_t r = *request.fixed;
      if (r < 2) fail_invalid("the bpm regime needs r >= 2");
      if (index < 1) fail_invalid("the bpm regime needs m >= 1");
      record.r = r;
      record.m = index;
      SumOptions opts;
      opts.term_budget = request.term_budget;
      opts.jobs = request.jobs;
      const unsigned ru = static_cast<unsigned>(r);
      const std::uint64_t m = static_cast<std::uint64_t>(index);
      return finish_record(std::move(record),
                           bpm_r_partite_minus_m(ru, m, opts),
                           bpm_r_partite(ru, m), limit_target(ru));
    }
    case Regime::regular_removal: {
      if (!request.fixed) fail_invalid("the regular regime needs --d");
      const std::int64_t d = *request.fixed;
      if (d < 0 || d > 2)
        fail_invalid("the regular regime supports d in {0,1,2}; "
                     "use a custom complement graph for other degrees");
      if (index < 1) fail_invalid("the regular regime needs n >= 1");
      if (d == 2 && index < 2)
        fail_invalid("d = 2 needs 2n >= 4: no 2-regular graph on 2 vertices");
      record.d = d;
      record.n = index;
      const std::uint64_t n = static_cast<std::uint64_t>(index);
      BigInt num;
      if (d == 0) {
        num = double_factorial_odd(n);
      } else if (d == 1) {
        num = pm_via_complement(mu_disjoint_edges(n), 2 * n);
      } else {
        num = pm_via_complement(mu_cycle(2 * n), 2 * n);
      }
      return finish_record(std::move(record), std::move(num),
                           double_factorial_odd(n),
                           exp_decimal(-Float50(d) / 2));
    }
    case Regime::constant_class: {
      if (!request.fixed) fail_invalid("the class regime needs --c");
      const std::int64_t c = *request.fixed;
      if (c < 1) fail_invalid("the class regime needs c >= 1");
      if (index < 1) fail_invalid("the class regime needs n >= 1");
      if ((2 * index) % c != 0) fail_invalid("c must divide 2n");
      const std::int64_t r = 2 * index / c;
      if (r < 2) fail_invalid("the class regime needs 2n/c >= 2");
      if ( 2 * index > static_cast<std::int64_t>(Graph::kMaxVertices))
        fail_invalid("the class regime is limited to 2n <= 64");
      record.c = c;
      record.n = index;
      const Shape shape{static_cast<unsigned>(r), static_cast<unsigned>(c)};
      return finish_record(std::move(record), pm_multipartite(shape, true),
                           pm_multipartite(shape, false),
                           limit_target_infinity());
    }
  }
  fail_internal("unknown regime");
}

namespace {

bool index_feasible(Regime regime, std::optional<std::int64_t> fixed,
                    std::int64_t index) {
  if (index < 1) return false;
  switch (regime) {
    case Regime::regular_removal:
      return !(fixed && *fixed == 2 && index < 2);
    case Regime::constant_class: {
      if (!fixed) return true;  // the missing-parameter error should surface
      const std::int64_t c = *fixed;
      return (2 * index) % c == 0 && 2 * index / c >= 2 &&
             2 * index <= static_cast<std::int64_t>(Graph::kMaxVertices);
    }
    default:
      return true;
  }
}

}  // namespace

std::vector<RatioRecord> convergence_table(Regime regime,
                                           std::optional<std::int64_t> fixed,
                                           std::int64_t lo, std::int64_t hi,
                                           std::uint64_t term_budget,
                                           unsigned jobs) {
  if (lo > hi) fail_invalid("empty parameter range");
  std::vector<RatioRecord> records;
  for (std::int64_t index = lo; index <= hi; ++index) {
    if (!index_feasible(regime, fixed, index)) continue;
    RegimeRequest req;
    req.regime = regime;
    req.index = index;
    req.fixed = fixed;
    req.term_budget = term_budget;
    req.jobs = jobs;
    records.push_back(ratio_record(req));
  }
  return records;
}

RatioRecord regular_ratio_from_complement(const Graph& complement) {
  if (complement.order() == 0 || complement.order() % 2 != 0)
    fail_invalid("the complement must have a positive even vertex count");
  const unsigned d = complement.degree(0);
  for (int v = 1; v < complement.order(); ++v)
    if (complement.degree(v) != d)
      fail_invalid("the complement is not regular: vertex " +
                   std::to_string(v) + " has degree " +
                   std::to_string(complement.degree(v)) + ", vertex 0 has " +
                   std::to_string(d));
  const std::uint64_t n = complement.order() / 2;
  RatioRecord record;
  record.regime = Regime::regular_removal;
  record.d = static_cast<std::int64_t>(d);
  record.n = static_cast<std::int64_t>(n);
  return finish_record(std::move(record), pm_via_complement(complement),
                       double_factorial_odd(n), exp_decimal(-Float50(d) / 2));
}

SeriesTruncation truncated_limit_series(unsigned r, unsigned t) {
  if (r < 2) fail_invalid("series evaluation needs r >= 2");
  if (r > 10000) fail_invalid("series evaluation is limited to r <= 10000");
  if (t > 100000) fail_invalid("series evaluation is limited to 100000 terms");

  const unsigned long q = (static_cast<unsigned long>(r) * (r - 1)) / 2;
  const BigInt step(static_cast<unsigned long>(r - 1) *
                    static_cast<unsigned long>(r - 1));

  // Factor sum, exact: sum_{x=0}^{t} (-1)^x / (x! (r-1)^{2x}).
  BigRat factor_sum(0);
  BigInt den(1);
  for (unsigned x = 0; x <= t; ++x) {
    if (x > 0) den *= BigInt(x) * step;
    const BigRat term = make_rational(BigInt(1), den);
    if (x % 2 == 0)
      factor_sum += term;
    else
      factor_sum -= term;
  }

  // Per-factor tail: sum_{x>t} 1/(x!(r-1)^{2x}) <= e/((t+1)!(r-1)^{2(t+1)}).
  BigInt tail_den = den * (BigInt(t + 1) * step);
  const BigRat tau_exact = e_upper_bound() / BigRat(tail_den);

  const Float50 factor = to_float(factor_sum);
  const Float50 value = boost::multiprecision::pow(factor, static_cast<int>(q));

  // Each true factor lies within tau of its truncation and both sit in
  // (0, 1], so |prod - value| <= q (1+tau)^{q-1} tau. The 1e-10 relative
  // inflation absorbs rounding inside this bound computation itself.
  const Float50 tau = to_float(tau_exact);
  Float50 bound = Float50(q) * tau *
                  boost::multiprecision::pow(Float50(1) + tau,
                                             static_cast<int>(q - 1));
  bound *= Float50(1) + Float50("1e-10");
  // value and target are 50-digit evaluations of quantities in (0, 1]:
  // the factor conversion and the q-fold product contribute at most 2q
  // units of 1e-49 absolute error, the exponential a few more. Without
  // this floor the measured |value - target| can exceed a deep tail.
  bound += Float50(2 * q + 20) * Float50("1e-49");

  SeriesTruncation out;
  out.r = r;
  out.terms_per_factor = t;
  out.value = Decimal(value, bound);
  out.tail_bound = Decimal(bound);
  out.target = limit_target(r);
  out.abs_error = Decimal(boost::multiprecision::abs(value - out.target.value));
  return out;
}

namespace {

std::string opt_cell(const std::optional<std::int64_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

struct RowCells {
  std::string regime, r, c, m, n, d, numerator, denominator, ratio, target,
      abs_error;
};

RowCells record_cells(const RatioRecord& rec, unsigned digits) {
  RowCells cells;
  cells.regime = regime_name(rec.regime);
  cells.r = opt_cell(rec.r);
  cells.c = opt_cell(rec.c);
  cells.m = opt_cell(rec.m);
  cells.n = opt_cell(rec.n);
  cells.d = opt_cell(rec.d);
  cells.numerator = to_string(rec.numerator);
  cells.denominator = to_string(rec.denominator);
  cells.ratio = render(rec.ratio.value, digits);
  cells.target = render(rec.target.value, digits);
  cells.abs_error = render(rec.abs_error.value, digits);
  return cells;
}

constexpr const char* kTableHeader[] = {"regime", "r", "c", "m", "n", "d",
                                        "numerator", "denominator", "ratio",
                                        "target", "abs_error"};

}  // namespace

std::string table_to_csv(const std::vector<RatioRecord>& records,
                         unsigned digits) {
  std::ostringstream out;
  out << "regime,r,c,m,n,d,numerator,denominator,ratio,target,abs_error\n";
  for (const RatioRecord& rec : records) {
    const RowCells c = record_cells(rec, digits);
    out << c.regime << ',' << c.r << ',' << c.c << ',' << c.m << ',' << c.n
        << ',' << c.d << ',' << c.numerator << ',' << c.denominator << ','
        << c.ratio << ',' << c.target << ',' << c.abs_error << '\n';
  }
  return out.str();
}

std::string table_to_json(const std::vector<RatioRecord>& records,
                          unsigned digits) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const RatioRecord& rec : records) {
    nlohmann::ordered_json j;
    j["regime"] = regime_name(rec.regime);
    if (rec.r) j["r"] = *rec.r;
    if (rec.c) j["c"] = *rec.c;
    if (rec.m) j["m"] = *rec.m;
    if (rec.n) j["n"] = *rec.n;
    if (rec.d) j["d"] = *rec.d;
    j["numerator"] = to_string(rec.numerator);
    j["denominator"] = to_string(rec.denominator);
    j["ratio"] = render(rec.ratio.value, digits);
    j["target"] = render(rec.target.value, digits);
    j["abs_error"] = render(rec.abs_error.value, digits);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string table_to_plain(const std::vector<RatioRecord>& records,
                           unsigned digits) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back(
      {kTableHeader[0], kTableHeader[1], kTableHeader[2], kTableHeader[3],
       kTableHeader[4], kTableHeader[5], kTableHeader[6], kTableHeader[7],
       kTableHeader[8], kTableHeader[9], kTableHeader[10]});
  for (const RatioRecord& rec : records) {
    const RowCells c = record_cells(rec, digits);
    rows.push_back({c.regime, c.r, c.c, c.m, c.n, c.d, c.numerator,
                    c.denominator, c.ratio, c.target, c.abs_error});
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << "  ";
      out << row[i];
      if (i + 1 < row.size())
        out << std::string(width[i] - row[i].size(), ' ');
    }
    out << '\n';
  }
  return out.str();
}

std::string series_to_json(const SeriesTruncation& s, unsigned digits) {
  nlohmann::ordered_json j;
  j["r"] = s.r;
  j["terms"] = s.terms_per_factor;
  j["value"] = render(s.value.value, digits);
  j["target"] = render(s.target.value, digits);
  j["tail_bound"] = render(s.tail_bound.value, digits);
  j["abs_error"] = render(s.abs_error.value, digits);
  return j.dump(2) + "\n";
}

std::string series_to_plain(const SeriesTruncation& s, unsigned digits) {
  std::ostringstream out;
  out << "r           " << s.r << '\n';
  out << "terms       " << s.terms_per_factor << '\n';
  out << "value       " << render(s.value.value, digits) << '\n';
  out << "target      " << render(s.target.value, digits) << '\n';
  out << "tail_bound  " << render(s.tail_bound.value, digits) << '\n';
  out << "abs_error   " << render(s.abs_error.value, digits) << '\n';
  return out.str();
}

std::string series_to_csv(const SeriesTruncation& s, unsigned digits) {
  std::ostringstream out;
  out << "r,terms,value,target,tail_bound,abs_error\n";
  out << s.r << ',' << s.terms_per_factor << ',' << render(s.value.value, digits)
      << ',' << render(s.target.value, digits) << ','
      << render(s.tail_bound.value, digits) << ','
      << render(s.abs_error.value, digits) << '\n';
  return out.str();
}

}  // namespace derange
