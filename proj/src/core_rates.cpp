#include "cachegap/core_rates.hpp"

#include "cachegap/combinatorics.hpp"

#include <stdexcept>

namespace cachegap {

namespace {

void check_integer_r(const SystemParams& p, long r) {
  if (r < 0 || r > p.n_users)
    throw std::domain_error("integer cache budget r must lie in [0, K]");
}

// Interpolate an integer-indexed rate function at p.r().
Rational interpolate_at_r(const SystemParams& p, Rational (*f)(const SystemParams&, long)) {
  Rational r = p.r();
  BigInt lo = numerator(r) / denominator(r);  // floor: r >= 0 here
  long rlo = lo.convert_to<long>();
  if (Rational(rlo) == r) return f(p, rlo);
  Rational frac = r - rlo;  // in (0, 1)
  return (1 - frac) * f(p, rlo) + frac * f(p, rlo + 1);
}

}  // namespace

Rational r_u_integer(const SystemParams& p, long r) {
  check_integer_r(p, r);
  const long K = p.n_users;
  BigInt num = binomial(K, r + 1) - binomial(K - p.j(), r + 1);
  return Rational(num, binomial(K, r));
}

Rational r_u(const SystemParams& p) { return interpolate_at_r(p, &r_u_integer); }

std::map<long, Rational> n_e_distribution(const SystemParams& p) {
  const long N = p.n_files, K = p.n_users;
  const BigInt total = demand_space_size(N, K);
  auto s2 = stirling2_table(K);
  std::map<long, Rational> dist;
  for (long t = 1; t <= p.j(); ++t) {
    // choose which t files appear, then surject the K users onto them
    BigInt ways = binomial(N, t) * factorial(t) * s2[K][t];
    dist[t] = Rational(ways, total);
  }
  return dist;
}

Rational r_u_ave_integer(const SystemParams& p, long r) {
  check_integer_r(p, r);
  return r_u_ave_integer_all(p)[r];
}

std::vector<Rational> r_u_ave_integer_all(const SystemParams& p) {
  const long N = p.n_files, K = p.n_users, J = p.j();
  auto pascal = binomial_table(K);
  auto s2 = stirling2_table(K);
  const BigInt total = demand_space_size(N, K);

  // weight[t] = #demands with exactly t distinct requests
  std::vector<BigInt> weight(J + 1);
  for (long t = 1; t <= J; ++t) weight[t] = binomial(N, t) * factorial(t) * s2[K][t];

  std::vector<Rational> rates(K + 1);
  for (long r = 0; r <= K; ++r) {
    BigInt acc = 0;
    for (long t = 1; t <= J; ++t) {
      BigInt surviving = (r + 1 <= K ? pascal[K][r + 1] : BigInt(0))
                         - (r + 1 <= K - t ? pascal[K - t][r + 1] : BigInt(0));
      acc += weight[t] * surviving;
    }
    rates[r] = Rational(acc, total * pascal[K][r]);
  }
  return rates;
}

Rational r_u_ave(const SystemParams& p) { return interpolate_at_r(p, &r_u_ave_integer); }

Rational r_dec_for_type(const SystemParams& p, long n_distinct) {
  if (n_distinct < 1 || n_distinct > p.j())
    throw std::domain_error("r_dec_for_type: distinct-request count out of range");
  const Rational& M = p.memory;
  if (M == 0) return Rational(n_distinct);
  Rational miss = 1 - M / p.n_files;  // fraction of a file absent from each cache
  return (p.n_files - M) / M * (1 - pow_rational(miss, static_cast<unsigned long>(n_distinct)));
}

Rational r_dec(const SystemParams& p) { return r_dec_for_type(p, p.j()); }

Rational convexity_deficit(const SystemParams& p, long r, RateKind which) {
  if (r < 1 || r > p.n_users - 1)
    throw std::domain_error("convexity_deficit: r must be interior, 1 <= r <= K-1");
  if (which == RateKind::peak)
    return 2 * r_u_integer(p, r) - r_u_integer(p, r - 1) - r_u_integer(p, r + 1);
  auto all = r_u_ave_integer_all(p);
  return 2 * all[r] - all[r - 1] - all[r + 1];
}

}  // namespace cachegap
