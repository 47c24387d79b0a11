#pragma once

#include "cachegap/rational.hpp"

#include <vector>

namespace cachegap {

// C(n, k) under the convention C(n, k) = 0 when k < 0 or k > n.
// Requires n >= 0; the rate formulas only ever subtract binomials of
// non-negative upper index, and the zero convention is what makes the
// "fewer distinct files than users" terms drop out.
BigInt binomial(long n, long k);

BigInt factorial(long n);

// n (n-1) ... (n-k+1); requires 0 <= k <= n.
BigInt falling_factorial(long n, long k);

// Rows 0..n of Pascal's triangle; table[i][j] = C(i, j).
std::vector<std::vector<BigInt>> binomial_table(long n);

// Stirling numbers of the second kind; table[i][j] = S2(i, j) for j = 0..i.
// S2(i, j) counts partitions of an i-set into j non-empty blocks.
std::vector<std::vector<BigInt>> stirling2_table(long n);

BigInt stirling2(long n, long k);

}  // namespace cachegap
