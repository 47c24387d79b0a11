#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cachegap/converse.hpp"
#include "cachegap/core_rates.hpp"

#include <stdexcept>
#include <vector>

using namespace cachegap;

TEST_CASE("smallest feasible recursion depth") {
  // (N=3, s=3, alpha=1): depths 1 and 2 violate the feasibility inequality
  CHECK(min_feasible_ell(SystemParams(3, 3, 0), 3, 1) == 3);
  // s = 1 is always feasible at depth 1
  CHECK(min_feasible_ell(SystemParams(10, 4, 0), 1, 1) == 1);
  CHECK(min_feasible_ell(SystemParams(10, 4, 0), 4, 1) == 1);
  // alpha = 0 relaxes the constraint relative to alpha = 1
  for (long n = 2; n <= 12; ++n)
    for (long s = 1; s <= std::min(n, 6L); ++s)
      CHECK(min_feasible_ell(SystemParams(n, 6, 0), s, 0)
            <= min_feasible_ell(SystemParams(n, 6, 0), s, 1));
  CHECK_THROWS_AS(min_feasible_ell(SystemParams(3, 3, 0), 4, 1), std::domain_error);
  CHECK_THROWS_AS(min_feasible_ell(SystemParams(3, 3, 0), 1, 2), std::domain_error);
}

TEST_CASE("cutset line worked examples") {
  // (N=10, K=4, s=4, alpha=1) admits depth 1 and yields 4 - M
  ConverseLine l = cutset_line(SystemParams(10, 4, 0), 4, 1);
  CHECK(l.ell == 1);
  CHECK(l.intercept == 4);
  CHECK(l.slope == -1);
  CHECK(l.at(1) == 3);

  // s = 1, alpha = 1 always gives 1 - M/N
  for (long n : {1, 2, 5, 30}) {
    ConverseLine one = cutset_line(SystemParams(n, 3, 0), 1, 1);
    CHECK(one.intercept == 1);
    CHECK(one.slope == Rational(-1, n));
  }

  // alpha = 0 with s = 1 is the trivial zero bound
  ConverseLine zero = cutset_line(SystemParams(5, 2, 0), 1, 0);
  CHECK(zero.intercept == 0);
  CHECK(zero.slope == 0);
}

TEST_CASE("corner set and its envelope") {
  // one corner per (s, ell) pair plus the memory-zero point
  CHECK(cutset_corner_points(6, 3).size() == 1 + 2 + 3 + 1);
  CHECK(cutset_corner_points(10, 4).size() == 1 + 2 + 3 + 4 + 1);

  auto env = cutset_envelope_curve(6, 3);
  std::vector<RatePoint> expect = {{0, 3}, {2, 1}, {3, Rational(1, 2)}, {6, 0}};
  CHECK(env.breakpoints() == expect);

  // j_cap respected: a single distinct request reduces to the s = 1 family
  auto env1 = per_type_envelope(6, 1);
  CHECK(env1.evaluate(0) == 1);
  CHECK(env1.evaluate(6) == 0);
}

TEST_CASE("every cutset line stays below the corner envelope") {
  for (long n : {2, 3, 6, 11, 17}) {
    for (long k : {1, 2, 4, 9}) {
      SystemParams p(n, k, 0);
      auto env = cutset_envelope_curve(n, p.j());
      for (long s = 1; s <= p.j(); ++s) {
        for (long a = 0; a <= 4; ++a) {
          ConverseLine l = cutset_line(p, s, Rational(a, 4));
          for (long i = 0; i <= 3 * n; ++i) {
            Rational m(i, 3);
            CHECK(l.at(m) <= env.evaluate(m));
          }
        }
      }
    }
  }
}

TEST_CASE("subgroup admissible range and worked example") {
  CHECK(subgroup_admissible_n(SystemParams(10, 4, 0)).lo == 1);
  CHECK(subgroup_admissible_n(SystemParams(10, 4, 0)).hi == 3);
  // fewer files than users shifts the lower end
  CHECK(subgroup_admissible_n(SystemParams(2, 5, 0)).lo == 4);
  // a single user (or a single file with two users) has no admissible n
  CHECK(subgroup_admissible_n(SystemParams(5, 1, 0)).empty());
  CHECK(subgroup_admissible_n(SystemParams(1, 2, 0)).empty());
  CHECK_THROWS_AS(subgroup_line(SystemParams(1, 2, 0), 1), std::domain_error);

  // (N=10, K=4, n=2): split saturates, line 7/3 - M/3 gives 1 at M = 4
  ConverseLine l = subgroup_line(SystemParams(10, 4, 0), 2);
  CHECK(l.group_alpha == 4);
  CHECK(l.group_beta == 2);
  CHECK(l.saturated);
  CHECK(l.intercept == Rational(7, 3));
  CHECK(l.slope == Rational(-1, 3));
  CHECK(l.at(4) == 1);

  // (N=6, K=3, n=1): unsaturated branch, line 3 - 3M/2
  ConverseLine u = subgroup_line(SystemParams(6, 3, 0), 1);
  CHECK(!u.saturated);
  CHECK(u.intercept == 3);
  CHECK(u.slope == Rational(-3, 2));

  // group_alpha >= 1 across the whole admissible range
  for (long n = 1; n <= 25; ++n)
    for (long k = 2; k <= 25; ++k) {
      SystemParams p(n, k, 0);
      auto range = subgroup_admissible_n(p);
      for (long g = range.lo; g <= range.hi && !range.empty(); ++g)
        CHECK(subgroup_line(p, g).group_alpha >= 1);
    }
}

TEST_CASE("saturation test matches its quadratic-form restatement") {
  // 2 beta + alpha (K - 2n - 1) <= 0 must coincide with
  // 2 K beta + alpha (K-n)(K-n-1) <= n (n+1) alpha for every admissible n
  for (long n_files = 1; n_files <= 60; ++n_files) {
    for (long k = 2; k <= 60; ++k) {
      SystemParams p(n_files, k, 0);
      auto range = subgroup_admissible_n(p);
      for (long n = range.lo; n <= range.hi && !range.empty(); ++n) {
        ConverseLine l = subgroup_line(p, n);
        bool first = 2 * l.group_beta + l.group_alpha * (k - 2 * n - 1) <= 0;
        bool second = 2 * k * l.group_beta + l.group_alpha * (k - n) * (k - n - 1)
                      <= BigInt(n) * (n + 1) * l.group_alpha;
        CHECK(first == second);
        CHECK(l.saturated == first);
      }
    }
  }
}

TEST_CASE("best peak converse spot values and attribution") {
  CHECK(best_peak_converse(SystemParams(10, 4, 1)) == 3);
  CHECK(best_peak_converse(SystemParams(10, 4, 4)) == 1);
  CHECK(best_peak_converse(SystemParams(10, 4, 10)) == 0);
  CHECK(best_peak_converse(SystemParams(7, 3, 0)) == 3);

  PeakConverse pc(10, 4);
  auto at1 = pc.attribute(1);
  CHECK(at1.kind == PeakConverse::Attribution::Kind::corner_envelope);
  auto at4 = pc.attribute(4);
  CHECK(at4.kind == PeakConverse::Attribution::Kind::subgroup);
  CHECK(at4.line.n == 2);
  CHECK(at4.line.saturated);

  // systems with an empty subgroup range still produce a curve
  PeakConverse tiny(1, 2);
  CHECK(tiny.evaluate(0) == 1);
  CHECK(tiny.evaluate(1) == 0);
  CHECK(best_peak_converse(SystemParams(1, 2, Rational(1, 2))) == Rational(1, 2));
}

TEST_CASE("converse never exceeds the scheme") {
  for (long n = 1; n <= 12; ++n) {
    for (long k = 1; k <= 12; ++k) {
      PeakConverse pc(n, k);
      AverageConverse ac(n, k);
      for (long i = 0; i <= 4 * n; ++i) {
        SystemParams p(n, k, Rational(i, 4));
        CHECK(pc.evaluate(p.memory) <= r_u(p));
        CHECK(ac.evaluate(p.memory) <= r_u_ave(p));
      }
    }
  }
}

TEST_CASE("tight cells: best converse meets the scheme at every breakpoint") {
  for (auto [n, k] : {std::pair<long, long>{6, 3}, {10, 4}}) {
    PeakConverse pc(n, k);
    std::vector<Rational> ms;
    for (long r = 0; r <= k; ++r) ms.push_back(Rational(r) * n / k);
    for (const auto& pt : pc.best_curve().breakpoints()) ms.push_back(pt.memory);
    for (const auto& m : ms) CHECK(pc.evaluate(m) == r_u(SystemParams(n, k, m)));
  }
}

TEST_CASE("small-budget and large-budget exactness regimes") {
  // once N reaches K(K+1)/2 the converse is exact up to r = 1
  for (long k = 2; k <= 6; ++k) {
    for (long extra : {0L, 3L}) {
      long n = k * (k + 1) / 2 + extra;
      PeakConverse pc(n, k);
      for (long i = 0; i <= 8; ++i) {
        SystemParams p(n, k, Rational(i * n, 8 * k));  // M in [0, N/K]
        CHECK(pc.evaluate(p.memory) == r_u(p));
      }
    }
  }
  // the s=1, alpha=1 line equals the scheme on the last budget segment
  for (long n : {2, 5, 9}) {
    for (long k : {2, 3, 5}) {
      SystemParams base(n, k, 0);
      ConverseLine l = cutset_line(base, 1, 1);
      for (long i = 0; i <= 8; ++i) {
        // M from (K-1) N / K to N
        Rational m = Rational(n * (k - 1), k) + Rational(i * n, 8 * k);
        CHECK(l.at(m) == r_u(SystemParams(n, k, m)));
      }
    }
  }
}

TEST_CASE("demand types enumerate and weigh correctly") {
  // partitions of K = 3 into at most min(N, K) parts
  CHECK(enumerate_types(6, 3).size() == 3);   // 3, 2+1, 1+1+1
  CHECK(enumerate_types(2, 3).size() == 2);   // 3, 2+1 (1+1+1 needs three files)
  CHECK(enumerate_types(1, 3).size() == 1);

  // probabilities sum to one, grouped by distinct count they match the
  // surjection-counting distribution
  for (long n = 1; n <= 7; ++n) {
    for (long k = 1; k <= 7; ++k) {
      Rational total = 0;
      std::map<long, Rational> by_distinct;
      for (const auto& t : enumerate_types(n, k)) {
        Rational prob = type_probability(n, k, t);
        CHECK(prob > 0);
        total += prob;
        by_distinct[t.n_distinct] += prob;
      }
      CHECK(total == 1);
      auto dist = n_e_distribution(SystemParams(n, k, 0));
      CHECK(by_distinct.size() == dist.size());
      for (auto& [t, prob] : dist) CHECK(by_distinct.at(t) == prob);
    }
  }

  // a concrete weight: type (2,1) of a 3-file, 3-user system covers 18 of 27
  CHECK(type_probability(3, 3, DemandType::from_parts({2, 1}, 3)) == Rational(18, 27));
}

TEST_CASE("per-type envelope pins the memory-zero rate at the distinct count") {
  for (long n = 1; n <= 9; ++n)
    for (long t = 1; t <= n; ++t) CHECK(per_type_envelope(n, t).evaluate(0) == t);
  CHECK_THROWS_AS(per_type_converse(SystemParams(4, 3, 0),
                                    DemandType::from_parts({2, 1}, 4), 3, 1),
                  std::domain_error);
}

TEST_CASE("average converse assembles from type masses") {
  AverageConverse ac(4, 3);
  Rational total = 0;
  for (auto& [t, mass] : ac.mass_by_distinct()) total += mass;
  CHECK(total == 1);

  // expectation at M = 0 is the mean distinct-request count
  Rational mean_ne = 0;
  for (auto& [t, prob] : n_e_distribution(SystemParams(4, 3, 0)))
    mean_ne += prob * t;
  CHECK(ac.evaluate(0) == mean_ne);
  CHECK(ac.evaluate(4) == 0);

  // the explicit curve agrees with evaluation everywhere on a grid
  auto curve = ac.curve();
  for (long i = 0; i <= 16; ++i) CHECK(curve.evaluate(Rational(i, 4)) == ac.evaluate(Rational(i, 4)));
}

TEST_CASE("two-user closed form equals the average formula") {
  for (long n = 2; n <= 20; ++n) {
    for (long i = 0; i <= 8; ++i) {
      SystemParams p(n, 2, Rational(i * n, 8));
      CHECK(two_user_ave_converse(p) == r_u_ave(p));
    }
  }
  CHECK_THROWS_AS(two_user_ave_converse(SystemParams(5, 3, 0)), std::domain_error);
  CHECK_THROWS_AS(two_user_ave_converse(SystemParams(1, 2, 0)), std::domain_error);
}
