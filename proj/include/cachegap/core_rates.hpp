#pragma once

#include "cachegap/system.hpp"

#include <map>
#include <vector>

namespace cachegap {

// Peak delivery rate of the centralized placement/delivery scheme at an
// integer cache budget r = K M / N:
//
//   ( C(K, r+1) - C(K - min(N,K), r+1) ) / C(K, r)
//
// The subtracted term removes multicast groups containing no leader, which
// only matters when users outnumber files. Requires 0 <= r <= K.
Rational r_u_integer(const SystemParams& p, long r);

// Peak rate at arbitrary memory: exact at integer r, linear interpolation
// between the two neighboring integer budgets otherwise.
Rational r_u(const SystemParams& p);

// Distribution of the number of distinct requests when each of K users picks
// uniformly among N files:  P(t) = C(N,t) t! S2(K,t) / N^K  for t=1..min(N,K).
std::map<long, Rational> n_e_distribution(const SystemParams& p);

// Expected rate over uniform demands at integer r: the same formula as
// r_u_integer with min(N,K) replaced by the (random) number of distinct
// requests, averaged under n_e_distribution.
Rational r_u_ave_integer(const SystemParams& p, long r);

// All integer-point average rates r = 0..K in one pass. Much cheaper than
// K+1 separate calls because the Stirling/Pascal tables are shared.
std::vector<Rational> r_u_ave_integer_all(const SystemParams& p);

// Average rate at arbitrary memory (interpolated like r_u).
Rational r_u_ave(const SystemParams& p);

// Rate of the decentralized scheme:
//   (N-M)/M * (1 - (1 - M/N)^min(N,K)),  with the M = 0 value defined as
// min(N,K) (the limit).
Rational r_dec(const SystemParams& p);

// Same expression with the exponent taken from a specific demand type
// (its number of distinct requests) instead of min(N,K).
Rational r_dec_for_type(const SystemParams& p, long n_distinct);

enum class RateKind { peak, average };

// Second difference 2 f(r) - f(r-1) - f(r+1) of the integer-point rate curve;
// non-positive means the piecewise-linear interpolation is convex.
// Requires 1 <= r <= K-1.
Rational convexity_deficit(const SystemParams& p, long r, RateKind which);

}  // namespace cachegap
