#include "matchpoly.hpp"

#include <bit>
#include <cstdint>
#include <unordered_map>
#include <utility>

#include <json.hpp>

#include "error.hpp"

namespace derange {

namespace {

// Adds b shifted by `shift` into a (a[k+shift] += b[k]).
void add_shifted(MatchingSeq& a, const MatchingSeq& b, std::size_t shift) {
  if (a.size() < b.size() + shift) a.resize(b.size() + shift, BigInt(0));
  for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] += b[k];
}

class MuSolver {
 public:
  MuSolver(const Graph& g, PivotPolicy policy) : g_(g), policy_(policy) {}

  MatchingSeq solve(std::uint64_t mask) {
    if (std::popcount(mask) < 2) return MatchingSeq{BigInt(1)};
    auto it = memo_.find(mask);
    if (it != memo_.end()) return it->second;

    const int v = pick_pivot(mask);
    MatchingSeq result;
    if (v < 0) {
      result = MatchingSeq{BigInt(1)};  // no edges left inside mask
    } else {
      const std::uint64_t without_v = mask & ~(std::uint64_t{1} << v);
      result = solve(without_v);
      std::uint64_t nbrs = g_.neighbors(v) & mask;
      while (nbrs != 0) {
        const int w = std::countr_zero(nbrs);
        nbrs &= nbrs - 1;
        add_shifted(result, solve(without_v & ~(std::uint64_t{1} << w)), 1);
      }
    }
    memo_.emplace(mask, result);
    return result;
  }

 private:
  // Returns -1 when the induced subgraph has no edges.
  int pick_pivot(std::uint64_t mask) const {
    if (policy_ == PivotPolicy::lowest_index) {
      std::uint64_t scan = mask;
      while (scan != 0) {
        const int v = std::countr_zero(scan);
        scan &= scan - 1;
        if ((g_.neighbors(v) & mask) != 0) return v;
      }
      return -1;
    }
    int best = -1;
    int best_deg = 0;
    std::uint64_t rest = mask;
    while (rest != 0) {
      const int v = std::countr_zero(rest);
      rest &= rest - 1;
      const int deg = std::popcount(g_.neighbors(v) & mask);
      if (deg > best_deg) {
        best = v;
        best_deg = deg;
      }
    }
    return best;
  }

  const Graph& g_;
  PivotPolicy policy_;
  std::unordered_map<std::uint64_t, MatchingSeq> memo_;
};

std::vector<std::uint64_t> component_masks(const Graph& g) {
  std::vector<std::uint64_t> comps;
  std::uint64_t seen = 0;
  const std::uint64_t all = g.full_mask();
  for (int v = 0; v < g.order(); ++v) {
    const std::uint64_t bit = std::uint64_t{1} << v;
    if (seen & bit) continue;
    std::uint64_t comp = bit;
    std::uint64_t frontier = bit;
    while (frontier != 0) {
      std::uint64_t next = 0;
      std::uint64_t f = frontier;
      while (f != 0) {
        const int u = std::countr_zero(f);
        f &= f - 1;
        next |= g.neighbors(u) & all & ~comp;
      }
      comp |= next;
      frontier = next;
    }
    seen |= comp;
    comps.push_back(comp);
  }
  return comps;
}

BigInt pow_ui(const BigInt& base, unsigned long exp) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

}  // namespace

MatchingSeq mu(const Graph& g, PivotPolicy policy) {
  MatchingSeq acc{BigInt(1)};
  MuSolver solver(g, policy);
  for (const std::uint64_t comp : component_masks(g)) {
    if (std::popcount(comp) < 2) continue;
    acc = convolve(acc, solver.solve(comp));
  }
  return acc;
}

MatchingSeq mu_complete(unsigned c) {
  MatchingSeq seq;
  seq.reserve(c / 2 + 1);
  // mu_k(K_c) = c! / (2^k k! (c-2k)!), built incrementally:
  // mu_{k+1} = mu_k * (c-2k)(c-2k-1) / (2(k+1))
  BigInt term(1);
  seq.push_back(term);
  for (unsigned k = 0; 2 * (k + 1) <= c; ++k) {
    term *= BigInt(c - 2 * k) * BigInt(c - 2 * k - 1);
    mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), 2 * (k + 1));
    seq.push_back(term);
  }
  return seq;
}

MatchingSeq mu_path(std::uint64_t length) {
  if (length > 1'000'000) fail_invalid("path length limit is 1000000");
  MatchingSeq prev{BigInt(1)};  // empty graph
  if (length == 0) return prev;
  MatchingSeq cur{BigInt(1)};  // single vertex
  for (std::uint64_t i = 2; i <= length; ++i) {
    MatchingSeq next = cur;
    add_shifted(next, prev, 1);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

MatchingSeq mu_cycle(std::uint64_t length) {
  if (length < 3) fail_invalid("cycles need length >= 3");
  if (length > 1'000'000) fail_invalid("cycle length limit is 1000000");
  // mu_k(C_N) = mu_k(P_{N-1}) + 2 mu_{k-1}(P_{N-2}): deleting one cycle
  // vertex leaves a path; its two incident edges each force a path two
  // vertices shorter.
  MatchingSeq out = mu_path(length - 1);
  const MatchingSeq inner = mu_path(length - 2);
  add_shifted(out, inner, 1);
  add_shifted(out, inner, 1);
  return out;
}

MatchingSeq convolve(const MatchingSeq& a, const MatchingSeq& b) {
  if (a.empty() || b.empty()) return {};
  MatchingSeq out(a.size() + b.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

MatchingSeq trimmed(MatchingSeq seq) {
  while (seq.size() > 1 && seq.back() == 0) seq.pop_back();
  return seq;
}

std::string BoundReport::to_json() const {
  nlohmann::ordered_json j;
  j["d"] = d;
  j["n"] = n;
  j["all_hold"] = all_hold;
  j["rows"] = nlohmann::ordered_json::array();
  for (const BoundRow& row : rows) {
    j["rows"].push_back({{"k", row.k},
                         {"bound", row.bound},
                         {"holds", row.holds},
                         {"lhs", row.lhs},
                         {"rhs", row.rhs}});
  }
  return j.dump(2) + "\n";
}

BoundReport check_mu_bounds(const Graph& g, unsigned d) {
  for (int v = 0; v < g.order(); ++v) {
    if (static_cast<unsigned>(g.degree(v)) != d)
      fail_invalid("graph is not " + std::to_string(d) + "-regular: vertex " +
                   std::to_string(v) + " has degree " +
                   std::to_string(g.degree(v)));
  }
  if (g.order() % 2 != 0)
    fail_invalid("bound checks need an even vertex count");

  const unsigned n = static_cast<unsigned>(g.order()) / 2;
  const MatchingSeq seq = mu(g);
  const auto mu_at = [&](unsigned k) {
    return k < seq.size() ? seq[k] : BigInt(0);
  };

  BoundReport report;
  report.d = d;
  report.n = n;
  const BigInt bd(d);
  const BigInt bn(n);
  for (unsigned k = 0; k <= n; ++k) {
    const BigInt mu_k = mu_at(k);
    const BigInt scaled = mu_k * factorial(k);  // mu_k * k!
    const BigInt dk = pow_ui(bd, k);

    const auto push = [&](const char* name, const BigInt& lhs, bool ge,
                          const BigInt& rhs) {
      BoundRow row;
      row.k = k;
      row.bound = name;
      row.holds = ge ? lhs >= rhs : lhs <= rhs;
      row.lhs = to_string(lhs);
      row.rhs = to_string(rhs);
      report.all_hold = report.all_hold && row.holds;
      report.rows.push_back(std::move(row));
    };

    push("crude_upper", scaled, false, dk * pow_ui(bn, k));
    if (n + 2 >= 2 * k) {
      const BigInt base(n + 2 - 2 * k);  // n - 2(k-1)
      push("lower", scaled, true, dk * pow_ui(base, k));
    }
    push("sharp_upper", mu_k, false, binomial(n, static_cast<std::int64_t>(k)) * dk);
  }
  return report;
}

}  // namespace derange
