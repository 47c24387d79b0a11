#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cachegap/combinatorics.hpp"
#include "cachegap/core_rates.hpp"
#include "cachegap/system.hpp"

#include <map>
#include <stdexcept>
#include <vector>

using namespace cachegap;

namespace {

// Independent oracle: per-demand rate at integer budget r, averaged by direct
// enumeration of all N^K demands. Returns one value per r in 0..K.
std::vector<Rational> bruteforce_ave_all(long n, long k) {
  // histogram of distinct-request counts over the full demand space
  std::vector<BigInt> hist(k + 1, 0);
  for_each_demand(n, k, [&](const std::vector<long>& d) {
    bool seen[9] = {};
    long distinct = 0;
    for (long f : d)
      if (!seen[f]) { seen[f] = true; ++distinct; }
    ++hist[distinct];
  });

  std::vector<Rational> out;
  BigInt total = demand_space_size(n, k);
  for (long r = 0; r <= k; ++r) {
    BigInt num = 0;
    for (long t = 1; t <= k; ++t)
      if (hist[t] != 0) num += hist[t] * (binomial(k, r + 1) - binomial(k - t, r + 1));
    out.push_back(Rational(num, binomial(k, r) * total));
  }
  return out;
}

}  // namespace

TEST_CASE("system parameter validation") {
  CHECK_THROWS_AS(SystemParams(0, 2, 1), std::domain_error);
  CHECK_THROWS_AS(SystemParams(2, 0, 1), std::domain_error);
  CHECK_THROWS_AS(SystemParams(2, 2, -1), std::domain_error);
  CHECK_THROWS_AS(SystemParams(2, 2, Rational(5, 2)), std::domain_error);
  SystemParams p(4, 6, Rational(2, 3));
  CHECK(p.j() == 4);
  CHECK(p.r() == 1);
}

TEST_CASE("demand and demand type") {
  CHECK_THROWS_AS(Demand({1, 0}, 3), std::domain_error);
  CHECK_THROWS_AS(Demand({1, 4}, 3), std::domain_error);
  Demand d({1, 2, 1}, 3);
  CHECK(n_e(d) == 2);
  DemandType t = DemandType::of(d, 3);
  CHECK(t.statistics == std::vector<long>{2, 1, 0});
  CHECK(t.n_distinct == 2);
  CHECK_THROWS_AS(DemandType::from_parts({1, 2}, 3), std::domain_error);  // not sorted
  CHECK(DemandType::from_parts({2, 1}, 3).statistics == std::vector<long>{2, 1, 0});
}

TEST_CASE("peak rate frozen values") {
  // worked examples small enough to verify by hand
  CHECK(r_u(SystemParams(3, 3, 1)) == 1);
  CHECK(r_u(SystemParams(2, 2, 2)) == 0);
  CHECK(r_u(SystemParams(2, 2, 0)) == 2);
  CHECK(r_u(SystemParams(6, 3, 0)) == 3);          // min(N, K) at M = 0
  CHECK(r_u(SystemParams(2, 5, 0)) == 2);          // capped by the library size
  CHECK(r_u(SystemParams(2, 2, Rational(1, 2))) == Rational(5, 4));
  // interpolation between r = 1 and r = 2 for (N=10, K=4): chord midpoint
  CHECK(r_u(SystemParams(10, 4, Rational(15, 4))) == Rational(13, 12));
  CHECK(r_u_integer(SystemParams(10, 4, 0), 1) == Rational(3, 2));
  CHECK(r_u_integer(SystemParams(10, 4, 0), 2) == Rational(2, 3));
  CHECK_THROWS_AS(r_u_integer(SystemParams(3, 3, 0), 4), std::domain_error);
  CHECK_THROWS_AS(r_u_integer(SystemParams(3, 3, 0), -1), std::domain_error);
}

TEST_CASE("average rate frozen values") {
  CHECK(r_u_ave(SystemParams(2, 2, 1)) == Rational(1, 2));
  // (N=3, K=3, r=1): histogram 3/18/6 over distinct counts 1/2/3 gives 26/27
  CHECK(r_u_ave(SystemParams(3, 3, 1)) == Rational(26, 27));
  CHECK(r_u_ave(SystemParams(3, 3, 0)) == Rational(3 * 1 + 18 * 2 + 6 * 3, 27));
  CHECK(r_u_ave(SystemParams(5, 5, 5)) == 0);
  // average never exceeds peak
  for (long n = 1; n <= 5; ++n)
    for (long k = 1; k <= 5; ++k)
      for (long r = 0; r <= k; ++r) {
        SystemParams p(n, k, Rational(r) * n / k);
        CHECK(r_u_ave(p) <= r_u(p));
      }
}

TEST_CASE("n_e distribution sums to one and touches the cap") {
  for (long n = 1; n <= 8; ++n) {
    for (long k = 1; k <= 8; ++k) {
      SystemParams p(n, k, 0);
      auto dist = n_e_distribution(p);
      Rational total = 0;
      for (auto& [t, prob] : dist) {
        CHECK(t >= 1);
        CHECK(t <= p.j());
        CHECK(prob > 0);
        total += prob;
      }
      CHECK(total == 1);
      CHECK(dist.count(p.j()) == 1);  // the all-distinct (or saturating) type occurs
    }
  }
}

TEST_CASE("formula average equals brute-force enumeration") {
  // surjection-counting route vs direct enumeration, exact equality;
  // 5^5 or so demands per cell keeps this instant, the acceptance harness
  // pushes the same oracle to N, K = 6
  for (long n = 1; n <= 5; ++n) {
    for (long k = 1; k <= 5; ++k) {
      auto oracle = bruteforce_ave_all(n, k);
      auto formula = r_u_ave_integer_all(SystemParams(n, k, 0));
      REQUIRE(oracle.size() == formula.size());
      for (size_t r = 0; r < oracle.size(); ++r) CHECK(oracle[r] == formula[r]);
    }
  }
}

TEST_CASE("decentralized rate") {
  CHECK(r_dec(SystemParams(2, 2, 1)) == Rational(3, 4));
  CHECK(r_dec(SystemParams(2, 2, 0)) == 2);   // M = 0 limit is min(N, K)
  CHECK(r_dec(SystemParams(5, 3, 0)) == 3);
  CHECK(r_dec(SystemParams(3, 5, 0)) == 3);
  CHECK(r_dec(SystemParams(4, 4, 4)) == 0);
  // (N=4, K=2, M=1): 3 (1 - (3/4)^2) = 21/16
  CHECK(r_dec(SystemParams(4, 2, 1)) == Rational(21, 16));
  // per-type variant caps the exponent at the distinct-request count
  CHECK(r_dec_for_type(SystemParams(4, 2, 1), 1) == Rational(3, 4));

  // the coded scheme never loses to decentralized placement at integer r
  for (long n = 1; n <= 6; ++n)
    for (long k = 1; k <= 6; ++k)
      for (long r = 0; r <= k; ++r) {
        SystemParams p(n, k, Rational(r) * n / k);
        CHECK(r_u(p) <= r_dec(p));
      }
}

TEST_CASE("rates are non-increasing in memory") {
  for (long n : {2, 3, 5, 8}) {
    for (long k : {1, 2, 4, 7}) {
      Rational prev_u, prev_ave;
      for (long i = 0; i <= 16; ++i) {
        SystemParams p(n, k, Rational(i * n, 16));
        Rational u = r_u(p), ave = r_u_ave(p);
        if (i > 0) {
          CHECK(u <= prev_u);
          CHECK(ave <= prev_ave);
        }
        prev_u = u;
        prev_ave = ave;
      }
      // both hit zero at full memory
      CHECK(prev_u == 0);
      CHECK(prev_ave == 0);
    }
  }
}

TEST_CASE("integer-point rate curves are convex") {
  // acceptance pushes this to N, K = 100; keep the unit sweep quick
  for (long n = 1; n <= 25; ++n)
    for (long k = 2; k <= 25; ++k)
      for (long r = 1; r <= k - 1; ++r) {
        SystemParams p(n, k, 0);
        CHECK(convexity_deficit(p, r, RateKind::peak) <= 0);
        CHECK(convexity_deficit(p, r, RateKind::average) <= 0);
      }
  CHECK_THROWS_AS(convexity_deficit(SystemParams(3, 3, 0), 0, RateKind::peak),
                  std::domain_error);
  CHECK_THROWS_AS(convexity_deficit(SystemParams(3, 3, 0), 3, RateKind::peak),
                  std::domain_error);
}
