#include "counting.hpp"

#include <atomic>
#include <bit>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "error.hpp"

namespace derange {

namespace {

BigInt pow_big(const BigInt& base, unsigned long exp) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

std::vector<BigInt> factorial_table(std::uint64_t up_to) {
  std::vector<BigInt> fact(up_to + 1);
  fact[0] = 1;
  for (std::uint64_t i = 1; i <= up_to; ++i) fact[i] = fact[i - 1] * BigInt(i);
  return fact;
}

void divexact(BigInt& value, const BigInt& divisor) {
  mpz_divexact(value.get_mpz_t(), value.get_mpz_t(), divisor.get_mpz_t());
}

}  // namespace

BigInt derangements(std::uint64_t n, DerangementMethod method) {
  switch (method) {
    case DerangementMethod::alternating_sum: {
      // sum_k (-1)^k n!/k!, accumulated from k = n downward so the
      // falling factorial grows one factor at a time.
      BigInt p(1);
      BigInt sum(0);
      for (std::uint64_t k = n;; --k) {
        if (k % 2 == 0)
          sum += p;
        else
          sum -= p;
        if (k == 0) break;
        p *= BigInt(k);
      }
      return sum;
    }
    case DerangementMethod::euler_recurrence: {
      if (n == 0) return BigInt(1);
      if (n == 1) return BigInt(0);
      BigInt prev2(1), prev(0);
      for (std::uint64_t k = 2; k <= n; ++k) {
        BigInt cur = BigInt(k - 1) * (prev + prev2);
        prev2 = std::move(prev);
        prev = std::move(cur);
      }
      return prev;
    }
    case DerangementMethod::sign_recurrence: {
      BigInt d(1);
      for (std::uint64_t k = 1; k <= n; ++k) {
        d *= BigInt(k);
        if (k % 2 == 0)
          d += 1;
        else
          d -= 1;
      }
      return d;
    }
  }
  fail_internal("unknown derangement method");
}

BigInt deranged_matchings(std::uint64_t n) {
  BigInt c(1);                        // C(n,k)
  BigInt f = double_factorial_odd(n); // (2(n-k)-1)!!
  BigInt sum(0);
  for (std::uint64_t k = 0; k <= n; ++k) {
    const BigInt term = c * f;
    if (k % 2 == 0)
      sum += term;
    else
      sum -= term;
    if (k < n) {
      c *= BigInt(n - k);
      divexact(c, BigInt(k + 1));
      divexact(f, BigInt(2 * (n - k) - 1));
    }
  }
  return sum;
}

BigInt pm_tripartite(std::uint64_t m) {
  const BigInt choose = binomial(2 * m, static_cast<std::int64_t>(m));
  return pow_big(choose, 3) * pow_big(factorial(m), 3);
}

BigInt pm_tripartite_minus_m(std::uint64_t m) {
  const auto fact = factorial_table(2 * m);
  const std::int64_t sm = static_cast<std::int64_t>(m);
  BigInt sum(0);
  for (std::uint64_t i = 0; i <= m; ++i) {
    const BigInt level_i = binomial(m, static_cast<std::int64_t>(i)) * fact[m - i];
    for (std::uint64_t j = 0; j <= m; ++j) {
      const BigInt level_j = level_i * binomial(m, static_cast<std::int64_t>(j)) *
                             fact[m - j] *
                             binomial(2 * m - i - j, sm - static_cast<std::int64_t>(i));
      for (std::uint64_t k = 0; k <= m; ++k) {
        const BigInt term =
            level_j * binomial(m, static_cast<std::int64_t>(k)) * fact[m - k] *
            binomial(2 * m - j - k, sm - static_cast<std::int64_t>(j)) *
            binomial(2 * m - k - i, sm - static_cast<std::int64_t>(k));
        if ((i + j + k) % 2 == 0)
          sum += term;
        else
          sum -= term;
      }
    }
  }
  return sum;
}

BigInt pm_tripartite_minus_m_subsets(std::uint64_t m) {
  if (m > 4) fail_invalid("subset reference path is limited to m <= 4");
  const auto fact = factorial_table(2 * m);
  const std::uint64_t full = std::uint64_t{1} << m;
  BigInt sum(0);
  // Forcing subsets I, J, K of the three forbidden-edge groups leaves a
  // complete tripartite graph with class sizes 2m-i-k, 2m-i-j, 2m-j-k;
  // its perfect matchings number a1! a2! a3! / ((m-i)! (m-j)! (m-k)!).
  for (std::uint64_t maskI = 0; maskI < full; ++maskI) {
    const unsigned i = static_cast<unsigned>(std::popcount(maskI));
    for (std::uint64_t maskJ = 0; maskJ < full; ++maskJ) {
      const unsigned j = static_cast<unsigned>(std::popcount(maskJ));
      for (std::uint64_t maskK = 0; maskK < full; ++maskK) {
        const unsigned k = static_cast<unsigned>(std::popcount(maskK));
        BigInt term = fact[2 * m - i - k] * fact[2 * m - i - j] * fact[2 * m - j - k];
        divexact(term, fact[m - i]);
        divexact(term, fact[m - j]);
        divexact(term, fact[m - k]);
        if ((i + j + k) % 2 == 0)
          sum += term;
        else
          sum -= term;
      }
    }
  }
  return sum;
}

namespace {

void validate_bpm_params(unsigned r, std::uint64_t m) {
  if (r < 2) fail_invalid("balanced counts need r >= 2");
  if (m > 0 && (r - 1) * m > 100000)
    fail_invalid("class size (r-1)*m exceeds the 100000 limit");
}

}  // namespace

BigInt bpm_r_partite(unsigned r, std::uint64_t m) {
  validate_bpm_params(r, m);
  // (((r-1)m)! / (m!)^(r-1))^r * (m!)^C(r,2)
  const BigInt mf = factorial(m);
  BigInt block = factorial((r - 1) * m);
  divexact(block, pow_big(mf, r - 1));
  return pow_big(block, r) * pow_big(mf, (static_cast<unsigned long>(r) * (r - 1)) / 2);
}

BigInt bpm_minus_m_term_count(unsigned r, std::uint64_t m) {
  const unsigned long q = (static_cast<unsigned long>(r) * (r - 1)) / 2;
  return pow_big(BigInt(m + 1), q);
}

namespace {

// Alternating sum over excess vectors x in {0..m}^q, q = C(r,2): the
// term for x is
//   (-1)^{sum x} prod_p C(m, x_p)(m-x_p)! prod_i S_i!/prod_{j!=i}(m-x_ij)!
// with S_i = (r-1)m - sum_{j!=i} x_ij. Coordinate 0 is the pair (0,1);
// bumping it from v to v+1 scales |term| by (m-v)^2/((v+1) S_0 S_1).
class ExcessSum {
 public:
  ExcessSum(unsigned r, std::uint64_t m)
      : r_(r), m_(m), q_(r * (r - 1) / 2), fact_(factorial_table((r - 1) * m)) {
    pairs_.reserve(q_);
    for (unsigned i = 0; i < r; ++i)
      for (unsigned j = i + 1; j < r; ++j) pairs_.emplace_back(i, j);
  }

  unsigned q() const { return q_; }

  // Signed term for x, and the class slacks S_i.
  BigInt scratch(const std::vector<std::uint64_t>& x,
                 std::vector<std::uint64_t>& slack) const {
    slack.assign(r_, (r_ - 1) * m_);
    BigInt term(1);
    std::uint64_t parity = 0;
    for (unsigned p = 0; p < q_; ++p) {
      parity += x[p];
      term *= binomial(m_, static_cast<std::int64_t>(x[p])) * fact_[m_ - x[p]];
      slack[pairs_[p].first] -= x[p];
      slack[pairs_[p].second] -= x[p];
    }
    for (unsigned i = 0; i < r_; ++i) term *= fact_[slack[i]];
    for (unsigned p = 0; p < q_; ++p) {
      divexact(term, fact_[m_ - x[p]]);
      divexact(term, fact_[m_ - x[p]]);
    }
    return parity % 2 == 0 ? term : -term;
  }

  // Sum over all x with the top coordinate fixed.
  BigInt slice_sum(std::uint64_t top) const {
    std::vector<std::uint64_t> x(q_, 0);
    x[q_ - 1] = top;
    std::vector<std::uint64_t> slack;
    BigInt term = scratch(x, slack);
    BigInt acc(0);
    const unsigned lower = q_ - 1;
    for (;;) {
      acc += term;
      unsigned idx = 0;
      while (idx < lower && x[idx] == m_) ++idx;
      if (idx >= lower) break;
      if (idx == 0) {
        const std::uint64_t v = x[0];
        term *= BigInt(m_ - v) * BigInt(m_ - v);
        divexact(term, BigInt(v + 1) * BigInt(slack[0]) * BigInt(slack[1]));
        mpz_neg(term.get_mpz_t(), term.get_mpz_t());
        x[0] = v + 1;
        --slack[0];
        --slack[1];
      } else {
        for (unsigned j = 0; j < idx; ++j) x[j] = 0;
        ++x[idx];
        term = scratch(x, slack);
      }
    }
    return acc;
  }

 private:
  unsigned r_;
  std::uint64_t m_;
  unsigned q_;
  std::vector<std::pair<unsigned, unsigned>> pairs_;
  std::vector<BigInt> fact_;
};

}  // namespace

BigInt bpm_r_partite_minus_m(unsigned r, std::uint64_t m, const SumOptions& opts) {
  validate_bpm_params(r, m);
  if (m == 0) return BigInt(1);
  const BigInt terms = bpm_minus_m_term_count(r, m);
  if (terms > BigInt(static_cast<unsigned long>(opts.term_budget))) {
    std::ostringstream msg;
    msg << "term budget exceeded: the excess sum for r=" << r << ", m=" << m
        << " has " << terms.get_str() << " terms (budget " << opts.term_budget
        << ")";
    fail_budget(msg.str());
  }

  const ExcessSum sum(r, m);
  const std::uint64_t slices = m + 1;
  std::vector<BigInt> partial(slices);
  const unsigned jobs =
      std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(
                                                     std::min<std::uint64_t>(slices, 64))));
  if (jobs == 1) {
    for (std::uint64_t t = 0; t < slices; ++t) partial[t] = sum.slice_sum(t);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
      try {
        for (;;) {
          const std::uint64_t t = next.fetch_add(1);
          if (t >= slices) return;
          partial[t] = sum.slice_sum(t);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  BigInt total(0);
  for (const BigInt& p : partial) total += p;
  return total;
}

BigInt bpm_r_partite_minus_m_reference(unsigned r, std::uint64_t m) {
  validate_bpm_params(r, m);
  const BigInt terms = bpm_minus_m_term_count(r, m);
  if (terms > BigInt(1000000ul))
    fail_invalid("reference path is limited to 10^6 terms");
  const ExcessSum sum(r, m);
  const unsigned q = sum.q();
  std::vector<std::uint64_t> x(q, 0);
  std::vector<std::uint64_t> slack;
  BigInt acc(0);
  for (;;) {
    acc += sum.scratch(x, slack);
    unsigned idx = 0;
    while (idx < q && x[idx] == m) ++idx;
    if (idx >= q) break;
    for (unsigned j = 0; j < idx; ++j) x[j] = 0;
    ++x[idx];
  }
  return acc;
}

BigInt pm_via_complement(const MatchingSeq& mu_complement,
                         std::uint64_t vertex_count) {
  if (vertex_count % 2 != 0)
    fail_invalid("the complement identity needs an even vertex count");
  const std::uint64_t n = vertex_count / 2;
  for (std::size_t k = n + 1; k < mu_complement.size(); ++k)
    if (mu_complement[k] != 0)
      fail_invalid("matching sequence has nonzero entries past n");
  BigInt sum(0);
  for (std::size_t k = 0; k < mu_complement.size() && k <= n; ++k) {
    const BigInt term = mu_complement[k] * double_factorial_odd(n - k);
    if (k % 2 == 0)
      sum += term;
    else
      sum -= term;
  }
  return sum;
}

BigInt pm_via_complement(const Graph& complement) {
  if (complement.order() % 2 != 0) return BigInt(0);
  return pm_via_complement(mu(complement), complement.order());
}

BigInt pm_multipartite(const Shape& shape, bool minus_m) {
  if (shape.r < 1 || shape.c < 1) fail_invalid("shapes need r >= 1 and c >= 1");
  const std::uint64_t order = static_cast<std::uint64_t>(shape.r) * shape.c;
  if (order % 2 != 0)
    fail_invalid("no perfect matching: odd vertex count " + std::to_string(order));
  if (!minus_m) {
    if (order > 10000) fail_invalid("plain multipartite counts are limited to rc <= 10000");
    MatchingSeq seq{BigInt(1)};
    const MatchingSeq clique = mu_complete(shape.c);
    for (unsigned i = 0; i < shape.r; ++i) seq = convolve(seq, clique);
    return pm_via_complement(seq, order);
  }
  if (order > Graph::kMaxVertices)
    fail_invalid("minus-M multipartite counts are limited to rc <= 64");
  const Matching m = canonical_perfect_matching(shape, false);
  Graph comp(static_cast<unsigned>(order));
  for (unsigned cls = 0; cls < shape.r; ++cls)
    for (unsigned a = 0; a < shape.c; ++a)
      for (unsigned b = a + 1; b < shape.c; ++b)
        comp.add_edge(static_cast<int>(cls * shape.c + a),
                      static_cast<int>(cls * shape.c + b));
  for (const Edge& e : m.edges) comp.add_edge(e.first, e.second);
  return pm_via_complement(comp);
}

std::string family_name(Family family) {
  switch (family) {
    case Family::derangement: return "derangement";
    case Family::deranged_matching: return "deranged-matching";
    case Family::tripartite: return "tripartite";
    case Family::tripartite_minus_m: return "tripartite-minus-m";
    case Family::bpm: return "bpm";
    case Family::bpm_minus_m: return "bpm-minus-m";
    case Family::multipartite: return "multipartite";
    case Family::multipartite_minus_m: return "multipartite-minus-m";
    case Family::custom: return "custom";
  }
  fail_internal("unknown family");
}

std::optional<Family> parse_family(const std::string& name) {
  static const std::pair<const char*, Family> table[] = {
      {"derangement", Family::derangement},
      {"deranged-matching", Family::deranged_matching},
      {"tripartite", Family::tripartite},
      {"tripartite-minus-m", Family::tripartite_minus_m},
      {"bpm", Family::bpm},
      {"bpm-minus-m", Family::bpm_minus_m},
      {"multipartite", Family::multipartite},
      {"multipartite-minus-m", Family::multipartite_minus_m},
      {"custom", Family::custom},
  };
  for (const auto& [key, value] : table)
    if (name == key) return value;
  return std::nullopt;
}

namespace {

std::int64_t require_param(const std::optional<std::int64_t>& value,
                           const char* name, const char* family,
                           std::int64_t min) {
  if (!value)
    fail_invalid(std::string("family ") + family + " needs --" + name);
  if (*value < min)
    fail_invalid(std::string("family ") + family + " needs " + name +
                 " >= " + std::to_string(min));
  return *value;
}

}  // namespace

CountResult count(Family family, const CountParams& params) {
  CountResult result;
  result.family = family_name(family);
  const char* fname = result.family.c_str();
  switch (family) {
    case Family::derangement: {
      const std::int64_t n = require_param(params.n, "n", fname, 0);
      result.params = {{"n", n}};
      result.value = derangements(static_cast<std::uint64_t>(n));
      result.method = "pie_sum";
      break;
    }
    case Family::deranged_matching: {
      const std::int64_t n = require_param(params.n, "n", fname, 0);
      result.params = {{"n", n}};
      result.value = deranged_matchings(static_cast<std::uint64_t>(n));
      result.method = "complement_identity";
      break;
    }
    case Family::tripartite: {
      const std::int64_t m = require_param(params.m, "m", fname, 0);
      result.params = {{"m", m}};
      result.value = pm_tripartite(static_cast<std::uint64_t>(m));
      result.method = "closed_form";
      break;
    }
    case Family::tripartite_minus_m: {
      const std::int64_t m = require_param(params.m, "m", fname, 0);
      result.params = {{"m", m}};
      result.value = pm_tripartite_minus_m(static_cast<std::uint64_t>(m));
      result.method = "pie_sum";
      break;
    }
    case Family::bpm: {
      const std::int64_t r = require_param(params.r, "r", fname, 2);
      const std::int64_t m = require_param(params.m, "m", fname, 0);
      result.params = {{"r", r}, {"m", m}};
      result.value = bpm_r_partite(static_cast<unsigned>(r),
                                   static_cast<std::uint64_t>(m));
      result.method = "closed_form";
      break;
    }
    case Family::bpm_minus_m: {
      const std::int64_t r = require_param(params.r, "r", fname, 2);
      const std::int64_t m = require_param(params.m, "m", fname, 0);
      result.params = {{"r", r}, {"m", m}};
      SumOptions opts;
      opts.term_budget = params.term_budget;
      opts.jobs = params.jobs;
      result.value = bpm_r_partite_minus_m(static_cast<unsigned>(r),
                                           static_cast<std::uint64_t>(m), opts);
      result.method = "pie_sum";
      break;
    }
    case Family::multipartite:
    case Family::multipartite_minus_m: {
      const std::int64_t r = require_param(params.r, "r", fname, 1);
      const std::int64_t c = require_param(params.c, "c", fname, 1);
      result.params = {{"r", r}, {"c", c}};
      const Shape shape{static_cast<unsigned>(r), static_cast<unsigned>(c)};
      result.value = pm_multipartite(shape, family == Family::multipartite_minus_m);
      result.method = "complement_identity";
      break;
    }
    case Family::custom: {
      if (params.graph_path.empty())
        fail_invalid("family custom needs --graph <edge list file>");
      const Graph g = read_edge_list_file(params.graph_path);
      const Graph comp = complement_in_complete(g);
      if (comp.edge_count() < g.edge_count()) {
        result.value = pm_via_complement(comp);
        result.method = "complement_identity";
      } else {
        result.value = enumerate_perfect_matchings(g);
        result.method = "oracle";
      }
      break;
    }
  }
  return result;
}

std::string CountResult::to_json() const {
  nlohmann::ordered_json j;
  j["family"] = family;
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [key, value] : params) p[key] = value;
  j["params"] = p;
  j["value"] = to_string(value);
  j["method"] = method;
  return j.dump(2) + "\n";
}

std::string CountResult::to_csv() const {
  const auto cell = [&](const char* key) -> std::string {
    for (const auto& [k, v] : params)
      if (k == key) return std::to_string(v);
    return "";
  };
  std::ostringstream out;
  out << "family,r,c,m,n,value,method\n";
  out << family << ',' << cell("r") << ',' << cell("c") << ',' << cell("m")
      << ',' << cell("n") << ',' << to_string(value) << ',' << method << '\n';
  return out.str();
}

std::string CountResult::to_plain() const {
  std::ostringstream out;
  out << "family  " << family << '\n';
  for (const auto& [key, v] : params) out << key << "       " << v << '\n';
  out << "value   " << to_string(value) << '\n';
  out << "method  " << method << '\n';
  return out.str();
}

}  // namespace derange
