#include "verify.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "asymptotics.hpp"
#include "bigmath.hpp"
#include "counting.hpp"
#include "error.hpp"
#include "graphs.hpp"
#include "matchpoly.hpp"

namespace derange {

namespace {

class Probe {
 public:
  void require(bool cond, const std::string& witness) {
    if (ok_ && !cond) {
      ok_ = false;
      detail_ = witness;
    }
  }

  void require_eq(const BigInt& got, const BigInt& want,
                  const std::string& point) {
    require(got == want, point + ": got " + to_string(got) + ", want " +
                             to_string(want));
  }

  // Passes iff fn throws Error with the given status.
  void require_error(Status status, const std::function<void()>& fn,
                     const std::string& point) {
    try {
      fn();
      require(false, point + ": no error raised");
    } catch (const Error& e) {
      require(e.status() == status,
              point + ": wrong status " +
                  std::to_string(static_cast<int>(e.status())));
    }
  }

  void note(const std::string& summary) { summary_ = summary; }

  bool ok() const { return ok_; }
  const std::string& detail() const { return ok_ ? summary_ : detail_; }

 private:
  bool ok_ = true;
  std::string detail_;
  std::string summary_;
};

class Runner {
 public:
  Runner(Suite suite, std::string fixtures_dir, const CheckSink& sink)
      : suite_(suite), fixtures_dir_(std::move(fixtures_dir)), sink_(sink) {}

  void check(const char* name, const std::function<void(Probe&)>& body) {
    Probe probe;
    try {
      body(probe);
    } catch (const Error& e) {
      probe.require(false, std::string("unexpected error: ") + e.what());
    } catch (const std::exception& e) {
      probe.require(false, std::string("unexpected exception: ") + e.what());
    }
    if (!probe.ok()) ++failures_;
    sink_({name, probe.ok(), probe.detail()});
  }

  bool full() const { return suite_ == Suite::full; }
  const std::string& fixtures_dir() const { return fixtures_dir_; }
  unsigned failures() const { return failures_; }

 private:
  Suite suite_;
  std::string fixtures_dir_;
  const CheckSink& sink_;
  unsigned failures_ = 0;
};

BigInt brute_force_derangements(unsigned n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  BigInt count(0);
  do {
    bool fixed = false;
    for (unsigned i = 0; i < n; ++i)
      if (perm[i] == static_cast<int>(i)) {
        fixed = true;
        break;
      }
    if (!fixed) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

Graph path_graph(unsigned n) {
  Graph g(n);
  for (unsigned i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph cycle_graph(unsigned n) {
  Graph g = path_graph(n);
  g.add_edge(0, n - 1);
  return g;
}

Graph disjoint_edges_graph(unsigned n) {
  Graph g(2 * n);
  for (unsigned i = 0; i < n; ++i) g.add_edge(2 * i, 2 * i + 1);
  return g;
}

// Cycle plus antipodal chords: 3-regular on 2n >= 6 vertices.
Graph cubic_circulant(unsigned two_n) {
  Graph g = cycle_graph(two_n);
  for (unsigned i = 0; i < two_n / 2; ++i) g.add_edge(i, i + two_n / 2);
  return g;
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  Graph g(a.order() + b.order());
  const int shift = static_cast<int>(a.order());
  for (const Edge& e : a.edges()) g.add_edge(e.first, e.second);
  for (const Edge& e : b.edges()) g.add_edge(e.first + shift, e.second + shift);
  return g;
}

bool seqs_equal(const MatchingSeq& a, const MatchingSeq& b) {
  return trimmed(a) == trimmed(b);
}

Float50 f50_abs(const Float50& v) { return boost::multiprecision::abs(v); }

void register_fast_checks(Runner& run) {
  run.check("derangements-brute-force", [](Probe& p) {
    for (unsigned n = 0; n <= 8; ++n)
      p.require_eq(derangements(n), brute_force_derangements(n),
                   "n=" + std::to_string(n));
    p.note("n <= 8 vs permutation enumeration");
  });

  run.check("derangement-methods", [](Probe& p) {
    for (std::uint64_t n = 0; n <= 300; ++n) {
      const BigInt a = derangements(n, DerangementMethod::alternating_sum);
      const BigInt e = derangements(n, DerangementMethod::euler_recurrence);
      const BigInt s = derangements(n, DerangementMethod::sign_recurrence);
      p.require(a == e && a == s, "n=" + std::to_string(n));
    }
    p.note("three methods agree for n <= 300");
  });

  run.check("derangement-nearest-integer", [](Probe& p) {
    const Float50 e = boost::multiprecision::exp(Float50(1));
    for (std::uint64_t n = 1; n <= 18; ++n) {
      const Float50 quotient = to_float(factorial(n)) / e;
      p.require_eq(round_to_integer(quotient), derangements(n),
                   "n=" + std::to_string(n));
    }
    p.note("d_n = round(n!/e) for 1 <= n <= 18");
  });

  run.check("deranged-matchings-oracle", [](Probe& p) {
    for (unsigned n = 1; n <= 5; ++n) {
      const Graph g = Graph::complete(2 * n);
      const Matching forbidden =
          canonical_perfect_matching(Shape{2 * n, 1}, false);
      p.require_eq(deranged_matchings(n),
                   enumerate_perfect_matchings(g, &forbidden),
                   "n=" + std::to_string(n));
    }
    p.note("n <= 5 vs K_2n enumeration");
  });

  run.check("double-factorial-identity", [](Probe& p) {
    for (std::uint64_t n = 0; n <= 200; ++n)
      p.require_eq(double_factorial_odd(n) * (BigInt(1) << n) * factorial(n),
                   factorial(2 * n), "n=" + std::to_string(n));
    p.note("(2n-1)!! 2^n n! = (2n)! for n <= 200");
  });

  run.check("binomial-pascal", [](Probe& p) {
    for (std::uint64_t n = 1; n <= 100; ++n)
      for (std::int64_t k = 0; k <= static_cast<std::int64_t>(n); ++k)
        p.require_eq(binomial(n, k),
                     binomial(n - 1, k - 1) + binomial(n - 1, k),
                     "n=" + std::to_string(n) + ",k=" + std::to_string(k));
    p.require_eq(binomial(5, -1), BigInt(0), "k=-1");
    p.require_eq(binomial(5, 6), BigInt(0), "k>n");
    p.note("Pascal rule for n <= 100; out-of-range k gives 0");
  });

  run.check("pm-oracle-complete", [](Probe& p) {
    for (unsigned n = 1; 2 * n <= 12; ++n)
      p.require_eq(enumerate_perfect_matchings(Graph::complete(2 * n)),
                   double_factorial_odd(n), "2n=" + std::to_string(2 * n));
    p.note("pm(K_2n) = (2n-1)!! for 2n <= 12");
  });

  run.check("pm-oracle-bipartite", [](Probe& p) {
    for (unsigned n = 1; n <= 6; ++n)
      p.require_eq(
          enumerate_perfect_matchings(build_complete_multipartite(Shape{2, n})),
          factorial(n), "n=" + std::to_string(n));
    p.note("pm(K_{n,n}) = n! for n <= 6");
  });

  run.check("canonical-matching", [](Probe& p) {
    const Matching m25 = canonical_perfect_matching(Shape{2, 5}, true);
    for (unsigned i = 0; i < 5; ++i)
      p.require(m25.edges[i] == Edge(static_cast<int>(i), static_cast<int>(5 + i)),
                "shape (2,5) edge " + std::to_string(i));
    const Matching m43 = canonical_perfect_matching(Shape{4, 3}, true);
    const auto balanced = classify_balanced(Shape{4, 3}, m43);
    p.require(balanced.has_value(), "shape (4,3) canonical not balanced");
    if (balanced) {
      p.require(balanced->edges_per_pair == 1, "shape (4,3) edges per pair");
      for (const auto& [pair, cnt] : balanced->pair_counts)
        p.require(cnt == 1, "shape (4,3) pair count");
    }
    p.require(
        classify_balanced(Shape{4, 2},
                          canonical_perfect_matching(Shape{4, 2}, false)) ==
            std::nullopt,
        "shape (4,2) canonical should be unbalanced");
    p.require_error(
        Status::invalid,
        [] { canonical_perfect_matching(Shape{4, 2}, true); },
        "shape (4,2) balanced request");
    p.note("shapes (2,5), (4,3), (4,2)");
  });

  run.check("tripartite-anchors", [](Probe& p) {
    for (std::uint64_t m = 1; m <= 2; ++m) {
      const Shape shape{3, static_cast<unsigned>(2 * m)};
      const Graph g = build_complete_multipartite(shape);
      const Matching forbidden = canonical_perfect_matching(shape, true);
      p.require_eq(pm_tripartite(m), enumerate_perfect_matchings(g),
                   "pm, m=" + std::to_string(m));
      p.require_eq(pm_tripartite_minus_m(m),
                   enumerate_perfect_matchings(g, &forbidden),
                   "pm minus M, m=" + std::to_string(m));
    }
    p.require_eq(pm_tripartite(1), BigInt(8), "anchor pm(K_{2,2,2})");
    p.require_eq(pm_tripartite_minus_m(1), BigInt(4), "anchor minus M");
    p.note("m <= 2 vs enumeration; anchors 8 and 4");
  });

  run.check("tripartite-reference-sum", [](Probe& p) {
    for (std::uint64_t m = 0; m <= 3; ++m)
      p.require_eq(pm_tripartite_minus_m(m), pm_tripartite_minus_m_subsets(m),
                   "m=" + std::to_string(m));
    p.note("triple sum equals subset expansion for m <= 3");
  });

  run.check("balanced-anchors", [](Probe& p) {
    const Shape shape{4, 3};
    const Matching forbidden = canonical_perfect_matching(shape, true);
    p.require_eq(bpm_r_partite(4, 1), BigInt(1296), "bpm(4,1)");
    p.require_eq(bpm_r_partite(4, 1), count_balanced_pm_oracle(shape),
                 "bpm(4,1) vs oracle");
    p.require_eq(bpm_r_partite_minus_m(4, 1), BigInt(686), "bpm-minus(4,1)");
    p.require_eq(bpm_r_partite_minus_m(4, 1),
                 count_balanced_pm_oracle(shape, &forbidden),
                 "bpm-minus(4,1) vs oracle");
    p.note("r=4, m=1: 1296 and 686, both oracle-confirmed");
  });

  run.check("balanced-r3-specialization", [](Probe& p) {
    for (std::uint64_t m = 1; m <= 10; ++m)
      p.require_eq(bpm_r_partite_minus_m(3, m), pm_tripartite_minus_m(m),
                   "m=" + std::to_string(m));
    p.note("general sum at r=3 equals the triple sum for m <= 10");
  });

  run.check("balanced-r2-derangements", [](Probe& p) {
    for (std::uint64_t m = 0; m <= 30; ++m)
      p.require_eq(bpm_r_partite_minus_m(2, m), derangements(m),
                   "m=" + std::to_string(m));
    p.note("general sum at r=2 equals d_m for m <= 30");
  });

  run.check("balanced-incremental-reference", [](Probe& p) {
    for (std::uint64_t m = 1; m <= 4; ++m)
      p.require_eq(bpm_r_partite_minus_m(3, m),
                   bpm_r_partite_minus_m_reference(3, m),
                   "r=3, m=" + std::to_string(m));
    for (std::uint64_t m = 1; m <= 2; ++m)
      p.require_eq(bpm_r_partite_minus_m(4, m),
                   bpm_r_partite_minus_m_reference(4, m),
                   "r=4, m=" + std::to_string(m));
    p.require_eq(bpm_r_partite_minus_m(5, 1),
                 bpm_r_partite_minus_m_reference(5, 1), "r=5, m=1");
    p.note("incremental updates match scratch recomputation");
  });

  run.check("balanced-jobs-deterministic", [](Probe& p) {
    SumOptions quad;
    quad.jobs = 4;
    p.require_eq(bpm_r_partite_minus_m(4, 2, quad), bpm_r_partite_minus_m(4, 2),
                 "r=4, m=2");
    p.require_eq(bpm_r_partite_minus_m(3, 3, quad), bpm_r_partite_minus_m(3, 3),
                 "r=3, m=3");
    p.note("jobs=4 equals jobs=1");
  });

  run.check("budget-guard", [](Probe& p) {
    p.require_error(
        Status::budget, [] { bpm_r_partite_minus_m(6, 3); },
        "r=6, m=3 under the default budget");
    SumOptions tight;
    tight.term_budget = 10;
    p.require_error(
        Status::budget, [&] { bpm_r_partite_minus_m(3, 2, tight); },
        "27 terms against budget 10");
    p.note("(m+1)^C(r,2) over budget raises the budget error");
  });

  run.check("complement-involution", [](Probe& p) {
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 100; ++trial) {
      const unsigned order = 1 + static_cast<unsigned>(rng() % 16);
      const Graph g = random_graph(order, rng);
      const Graph back = g.complement().complement();
      bool same = back.order() == g.order();
      for (int v = 0; same && v < g.order(); ++v)
        same = back.neighbors(v) == g.neighbors(v);
      p.require(same, "trial " + std::to_string(trial));
    }
    p.note("100 random graphs, order <= 16");
  });

  run.check("gz-random", [](Probe& p) {
    std::mt19937_64 rng(987654321);
    for (int trial = 0; trial < 25; ++trial) {
      const unsigned order = 4 + 2 * (trial % 5);
      const Graph g = random_graph(order, rng);
      p.require_eq(pm_via_complement(complement_in_complete(g)),
                   enumerate_perfect_matchings(g),
                   "trial " + std::to_string(trial) + ", order " +
                       std::to_string(order));
    }
    p.note("25 seeded graphs, 4..12 vertices");
  });

  run.check("gz-structured", [](Probe& p) {
    for (unsigned n = 1; n <= 8; ++n)
      p.require_eq(pm_via_complement(disjoint_edges_graph(n)),
                   deranged_matchings(n), "matching complement, n=" +
                                              std::to_string(n));
    for (unsigned two_n = 4; two_n <= 12; two_n += 2)
      p.require(seqs_equal(mu(cycle_graph(two_n)), mu_cycle(two_n)),
                "cycle length " + std::to_string(two_n));
    for (unsigned len = 1; len <= 12; ++len)
      p.require(seqs_equal(mu(path_graph(len)), mu_path(len)),
                "path length " + std::to_string(len));
    for (unsigned c = 1; c <= 10; ++c)
      p.require(seqs_equal(mu(Graph::complete(c)), mu_complete(c)),
                "complete graph K_" + std::to_string(c));
    p.note("matchings, cycles, paths, cliques");
  });

  run.check("mu-policy", [](Probe& p) {
    std::mt19937_64 rng(5551212);
    for (int trial = 0; trial < 50; ++trial) {
      const unsigned order = 2 + static_cast<unsigned>(rng() % 13);
      const Graph g = random_graph(order, rng);
      p.require(seqs_equal(mu(g, PivotPolicy::lowest_index),
                           mu(g, PivotPolicy::max_degree)),
                "trial " + std::to_string(trial));
    }
    p.note("both pivot policies agree on 50 random graphs");
  });

  run.check("mu-convolution", [](Probe& p) {
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 25; ++trial) {
      const Graph a = random_graph(1 + static_cast<unsigned>(rng() % 7), rng);
      const Graph b = random_graph(1 + static_cast<unsigned>(rng() % 7), rng);
      p.require(seqs_equal(mu(disjoint_union(a, b)), convolve(mu(a), mu(b))),
                "trial " + std::to_string(trial));
    }
    p.note("disjoint unions multiply matching sequences");
  });

  run.check("mu-top-coefficient", [](Probe& p) {
    std::mt19937_64 rng(13131313);
    for (int trial = 0; trial < 25; ++trial) {
      const unsigned order = 4 + 2 * (trial % 5);
      const Graph g = random_graph(order, rng);
      const MatchingSeq seq = trimmed(mu(g));
      const BigInt pm = enumerate_perfect_matchings(g);
      if (seq.size() == order / 2 + 1)
        p.require_eq(seq.back(), pm, "trial " + std::to_string(trial));
      else
        p.require_eq(pm, BigInt(0),
                     "trial " + std::to_string(trial) + " (no perfect matching)");
    }
    p.note("top coefficient equals the perfect matching count");
  });

  run.check("mu-bounds-regular", [](Probe& p) {
    for (unsigned two_n = 2; two_n <= 16; two_n += 2) {
      const auto report = check_mu_bounds(disjoint_edges_graph(two_n / 2), 1);
      p.require(report.all_hold, "d=1, 2n=" + std::to_string(two_n));
    }
    for (unsigned two_n = 4; two_n <= 16; two_n += 2) {
      const auto report = check_mu_bounds(cycle_graph(two_n), 2);
      p.require(report.all_hold, "d=2, 2n=" + std::to_string(two_n));
    }
    for (unsigned two_n = 6; two_n <= 16; two_n += 2) {
      const auto report = check_mu_bounds(cubic_circulant(two_n), 3);
      p.require(report.all_hold, "d=3, 2n=" + std::to_string(two_n));
    }
    p.require_error(
        Status::invalid, [] { check_mu_bounds(path_graph(3), 1); },
        "non-regular graph");
    p.note("d in {1,2,3}, 2n <= 16, all three estimates");
  });

  run.check("series-certified", [](Probe& p) {
    for (unsigned r = 2; r <= 6; ++r) {
      for (unsigned t = 0; t <= 30; ++t) {
        const SeriesTruncation s = truncated_limit_series(r, t);
        p.require(f50_abs(s.value.value - s.target.value) <= s.tail_bound.value,
                  "tail bound violated at r=" + std::to_string(r) +
                      ", t=" + std::to_string(t));
      }
      const SeriesTruncation deep = truncated_limit_series(r, 30);
      p.require(deep.abs_error.value < Float50("1e-12"),
                "slow convergence at r=" + std::to_string(r));
    }
    p.require(truncated_limit_series(3, 0).value.value == 1,
              "zero-term truncation should be 1");
    p.note("r in 2..6, t in 0..30: bounds dominate, t=30 within 1e-12");
  });

  run.check("target-consistency", [](Probe& p) {
    const Float50 half = limit_target_infinity().value;
    p.require(f50_abs(limit_target(1000).value - half) < Float50("1e-3"),
              "limit_target(1000)");
    p.require(f50_abs(limit_target(2).value -
                      boost::multiprecision::exp(Float50(-1))) < Float50("1e-45"),
              "r=2 target");
    p.require(f50_abs(limit_target(3).value -
                      boost::multiprecision::exp(Float50("-0.75"))) <
                  Float50("1e-45"),
              "r=3 target");
    for (unsigned c = 1; c <= 10; ++c) {
      const Float50 num = boost::multiprecision::exp(-Float50(c) / 2);
      const Float50 den = boost::multiprecision::exp(-Float50(c - 1) / 2);
      p.require(f50_abs(num / den - half) < Float50("1e-45"),
                "c=" + std::to_string(c));
    }
    p.require_error(Status::invalid, [] { limit_target(1); }, "r=1");
    p.note("targets agree with 50-digit exponentials");
  });

  run.check("ratio-anchors", [](Probe& p) {
    RegimeRequest req;
    req.regime = Regime::r2_hatcheck;
    req.index = 4;
    RatioRecord rec = ratio_record(req);
    p.require_eq(rec.numerator, BigInt(9), "hatcheck n=4 numerator");
    p.require_eq(rec.denominator, BigInt(24), "hatcheck n=4 denominator");

    req.regime = Regime::r3_tripartite;
    req.index = 1;
    rec = ratio_record(req);
    p.require_eq(rec.numerator, BigInt(4), "r3 m=1 numerator");
    p.require_eq(rec.denominator, BigInt(8), "r3 m=1 denominator");
    p.require(rec.abs_error.value > Float50("0.027") &&
                  rec.abs_error.value < Float50("0.028"),
              "r3 m=1 error should be about 0.0276");

    req.regime = Regime::bpm_general;
    req.index = 1;
    req.fixed = 4;
    rec = ratio_record(req);
    p.require_eq(rec.numerator, BigInt(686), "bpm r=4 m=1 numerator");
    p.require_eq(rec.denominator, BigInt(1296), "bpm r=4 m=1 denominator");

    req.regime = Regime::r2n_kindergartner;
    req.index = 3;
    req.fixed.reset();
    rec = ratio_record(req);
    p.require_eq(rec.numerator, BigInt(8), "kindergartner n=3 numerator");
    p.require_eq(rec.denominator, BigInt(15), "kindergartner n=3 denominator");

    req.regime = Regime::regular_removal;
    req.fixed = 0;
    for (std::int64_t n = 1; n <= 3; ++n) {
      req.index = n;
      rec = ratio_record(req);
      p.require(rec.exact_ratio == 1, "regular d=0 n=" + std::to_string(n));
    }
    p.note("hatcheck 9/24, r3 4/8, bpm 686/1296, kindergartner 8/15, d=0 1");
  });

  run.check("ratio-decay-endpoints", [](Probe& p) {
    struct Range {
      Regime regime;
      std::optional<std::int64_t> fixed;
      std::int64_t lo, hi;
      const char* label;
    };
    const Range ranges[] = {
        {Regime::r2_hatcheck, std::nullopt, 1, 15, "hatcheck n=1..15"},
        {Regime::r2n_kindergartner, std::nullopt, 1, 15, "kindergartner n=1..15"},
        {Regime::r3_tripartite, std::nullopt, 1, 8, "r3 m=1..8"},
        {Regime::bpm_general, 4, 1, 2, "bpm r=4 m=1..2"},
        {Regime::regular_removal, 1, 2, 6, "regular d=1 n=2..6"},
        {Regime::regular_removal, 2, 4, 20, "regular d=2 n=4..20"},
        {Regime::constant_class, 2, 4, 12, "class c=2 n=4..12"},
    };
    for (const Range& range : ranges) {
      const auto table =
          convergence_table(range.regime, range.fixed, range.lo, range.hi);
      p.require(table.size() >= 2, std::string(range.label) + ": too few rows");
      if (table.size() < 2) continue;
      p.require(table.back().abs_error.value < table.front().abs_error.value,
                std::string(range.label) + ": endpoint errors do not decay");
      for (const RatioRecord& rec : table) {
        p.require(rec.exact_ratio >= 0 && rec.exact_ratio <= 1,
                  std::string(range.label) + ": ratio outside [0,1]");
        p.require(f50_abs(f50_abs(rec.ratio.value - rec.target.value) -
                          rec.abs_error.value) < Float50("1e-40"),
                  std::string(range.label) + ": abs_error mismatch");
      }
    }
    p.note("seven regime ranges, last error < first error");
  });

  run.check("multipartite-identities", [](Probe& p) {
    for (unsigned n = 1; n <= 8; ++n)
      p.require_eq(pm_multipartite(Shape{2, n}, false), factorial(n),
                   "(2," + std::to_string(n) + ") plain");
    for (unsigned n = 1; n <= 7; ++n)
      p.require_eq(pm_multipartite(Shape{2, n}, true), derangements(n),
                   "(2," + std::to_string(n) + ") minus M");
    for (unsigned n = 1; n <= 8; ++n) {
      p.require_eq(pm_multipartite(Shape{2 * n, 1}, false),
                   double_factorial_odd(n),
                   "(" + std::to_string(2 * n) + ",1) plain");
      p.require_eq(pm_multipartite(Shape{2 * n, 1}, true),
                   deranged_matchings(n),
                   "(" + std::to_string(2 * n) + ",1) minus M");
    }
    p.require_eq(pm_multipartite(Shape{3, 2}, false), BigInt(8), "(3,2) plain");
    p.require_eq(pm_multipartite(Shape{3, 2}, true), BigInt(4), "(3,2) minus M");
    const Shape s43{4, 3};
    const Graph g43 = build_complete_multipartite(s43);
    const Matching m43 = canonical_perfect_matching(s43, false);
    p.require_eq(pm_multipartite(s43, false), enumerate_perfect_matchings(g43),
                 "(4,3) plain vs enumeration");
    p.require_eq(pm_multipartite(s43, true),
                 enumerate_perfect_matchings(g43, &m43),
                 "(4,3) minus M vs enumeration");
    p.require_error(Status::invalid, [] { pm_multipartite(Shape{3, 3}, false); },
                    "odd vertex count");
    p.note("bipartite, single-class, (3,2), (4,3) identities");
  });

  run.check("edge-list-roundtrip", [](Probe& p) {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 10; ++trial) {
      const unsigned order = 1 + static_cast<unsigned>(rng() % 20);
      const Graph g = random_graph(order, rng);
      std::ostringstream out;
      write_edge_list(out, g);
      std::istringstream in(out.str());
      const Graph back = read_edge_list(in);
      bool same = back.order() == g.order();
      for (int v = 0; same && v < g.order(); ++v)
        same = back.neighbors(v) == g.neighbors(v);
      p.require(same, "trial " + std::to_string(trial));
    }
    {
      const Shape shape{3, 2};
      const Graph g = build_complete_multipartite(shape);
      std::ostringstream out;
      write_edge_list(out, g);
      std::istringstream in(out.str());
      const Graph back = read_edge_list(in);
      p.require(back.has_classes() && back.class_count() == 3,
                "class annotations survive the round trip");
    }
    const char* bad[] = {
        "vertex 4 classes 0 size 0\n0 1\n",
        "vertices 4 classes 2 size 2\n0 1\n",          // intra-class edge
        "vertices 4 classes 0 size 0\n0 9\n",          // endpoint out of range
        "vertices 4 classes 3 size 2\n",               // r*c != n
    };
    for (const char* text : bad)
      p.require_error(
          Status::invalid,
          [text] {
            std::istringstream in(text);
            read_edge_list(in);
          },
          "malformed input accepted");
    p.note("10 random round trips; malformed headers rejected");
  });

  run.check("csv-format", [](Probe& p) {
    const auto table = convergence_table(Regime::r3_tripartite, std::nullopt, 1, 5);
    const std::string csv = table_to_csv(table, 15);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    p.require(line ==
                  "regime,r,c,m,n,d,numerator,denominator,ratio,target,abs_error",
              "header line");
    unsigned rows = 0;
    while (std::getline(lines, line)) {
      ++rows;
      p.require(std::count(line.begin(), line.end(), ',') == 10,
                "row with wrong column count: " + line);
    }
    p.require(rows == 5, "expected 5 rows, got " + std::to_string(rows));
    const std::string json = table_to_json(table, 15);
    const auto parsed = nlohmann::json::parse(json, nullptr, false);
    p.require(!parsed.is_discarded() && parsed.is_array() && parsed.size() == 5,
              "JSON emission does not parse to 5 records");
    p.note("11-column CSV and 5-record JSON for r3, m=1..5");
  });

  if (!run.fixtures_dir().empty()) {
    const std::string dir = run.fixtures_dir();
    run.check("golden-fixture", [dir](Probe& p) {
      const std::string path = dir + "/r3_m10.csv";
      std::ifstream in(path, std::ios::binary);
      p.require(in.good(), "cannot open " + path);
      if (!in.good()) return;
      std::ostringstream content;
      content << in.rdbuf();
      const auto table =
          convergence_table(Regime::r3_tripartite, std::nullopt, 1, 10);
      p.require(content.str() == table_to_csv(table, 15),
                "fixture bytes differ from freshly computed table");
      p.note("r3 m=1..10 CSV matches the committed fixture");
    });
  }
}

void register_full_checks(Runner& run) {
  run.check("tripartite-m3-oracle", [](Probe& p) {
    const Shape shape{3, 6};
    const Graph g = build_complete_multipartite(shape);
    const Matching forbidden = canonical_perfect_matching(shape, true);
    p.require_eq(pm_tripartite(3), enumerate_perfect_matchings(g), "pm, m=3");
    p.require_eq(pm_tripartite_minus_m(3),
                 enumerate_perfect_matchings(g, &forbidden), "pm minus M, m=3");
    p.note("m=3 vs enumeration of 1728000 matchings");
  });

  run.check("derangement-methods-deep", [](Probe& p) {
    for (std::uint64_t n = 301; n <= 2000; n += 7) {
      const BigInt a = derangements(n, DerangementMethod::alternating_sum);
      const BigInt e = derangements(n, DerangementMethod::euler_recurrence);
      const BigInt s = derangements(n, DerangementMethod::sign_recurrence);
      p.require(a == e && a == s, "n=" + std::to_string(n));
    }
    p.note("spot agreement up to n = 2000");
  });

  run.check("r3-deep", [](Probe& p) {
    const auto table = convergence_table(Regime::r3_tripartite, std::nullopt, 1, 40);
    p.require(table.size() == 40, "table size");
    const Float50 first = table.front().abs_error.value;
    const Float50 last = table.back().abs_error.value;
    p.require(last < Float50("1e-2"), "m=40 error not under 1e-2");
    p.require(last < first, "m=40 error not under m=1 error");
    p.note("m=1..40: error decays below 1e-2");
  });

  run.check("class-deep", [](Probe& p) {
    const auto table = convergence_table(Regime::constant_class, 2, 4, 20);
    p.require(table.size() == 17, "c=2 table size");
    p.require(table.back().abs_error.value < table.front().abs_error.value,
              "c=2: error at 2n=40 not under error at 2n=8");
    const auto cycles = convergence_table(Regime::regular_removal, 2, 4, 100);
    p.require(cycles.back().abs_error.value < cycles.front().abs_error.value,
              "d=2: error at n=100 not under error at n=4");
    p.note("class c=2 to 2n=40; cycle complements to n=100");
  });

  run.check("kindergartner-identity-deep", [](Probe& p) {
    for (unsigned n = 1; n <= 300; n += 13) {
      MatchingSeq seq{BigInt(1)};
      const MatchingSeq edge{BigInt(1), BigInt(1)};
      for (unsigned i = 0; i < n; ++i) seq = convolve(seq, edge);
      p.require_eq(pm_via_complement(seq, 2 * n), deranged_matchings(n),
                   "n=" + std::to_string(n));
    }
    p.note("removal identity vs the alternating sum up to n = 300");
  });

  run.check("balanced-r5-reference", [](Probe& p) {
    p.require_eq(bpm_r_partite_minus_m(5, 2),
                 bpm_r_partite_minus_m_reference(5, 2), "r=5, m=2");
    SumOptions quad;
    quad.jobs = 4;
    p.require_eq(bpm_r_partite_minus_m(4, 3, quad),
                 bpm_r_partite_minus_m_reference(4, 3), "r=4, m=3, jobs=4");
    p.note("59049- and 4096-term sums against scratch evaluation");
  });

  run.check("series-deep", [](Probe& p) {
    for (unsigned r = 7; r <= 12; ++r)
      for (unsigned t : {0u, 10u, 20u, 30u, 40u}) {
        const SeriesTruncation s = truncated_limit_series(r, t);
        p.require(f50_abs(s.value.value - s.target.value) <= s.tail_bound.value,
                  "r=" + std::to_string(r) + ", t=" + std::to_string(t));
      }
    p.note("certified truncation for r in 7..12");
  });
}

}  // namespace

std::optional<Suite> parse_suite(const std::string& name) {
  if (name == "fast") return Suite::fast;
  if (name == "full") return Suite::full;
  return std::nullopt;
}

unsigned run_verify(Suite suite, const std::string& fixtures_dir,
                    const CheckSink& sink) {
  Runner run(suite, fixtures_dir, sink);
  register_fast_checks(run);
  if (run.full()) register_full_checks(run);
  return run.failures();
}

}  // namespace derange
