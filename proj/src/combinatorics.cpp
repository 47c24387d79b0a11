#include "cachegap/combinatorics.hpp"

#include <stdexcept>

namespace cachegap {

BigInt binomial(long n, long k) {
  if (n < 0) throw std::domain_error("binomial: negative upper index");
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (long i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;  // exact at every step: result is C(n-k+i, i)
  }
  return result;
}

BigInt factorial(long n) {
  if (n < 0) throw std::domain_error("factorial: negative argument");
  BigInt result = 1;
  for (long i = 2; i <= n; ++i) result *= i;
  return result;
}

BigInt falling_factorial(long n, long k) {
  if (k < 0 || k > n) throw std::domain_error("falling_factorial: need 0 <= k <= n");
  BigInt result = 1;
  for (long i = 0; i < k; ++i) result *= (n - i);
  return result;
}

std::vector<std::vector<BigInt>> binomial_table(long n) {
  if (n < 0) throw std::domain_error("binomial_table: negative size");
  std::vector<std::vector<BigInt>> table(n + 1);
  for (long i = 0; i <= n; ++i) {
    table[i].assign(i + 1, 1);
    for (long j = 1; j < i; ++j) table[i][j] = table[i - 1][j - 1] + table[i - 1][j];
  }
  return table;
}

std::vector<std::vector<BigInt>> stirling2_table(long n) {
  if (n < 0) throw std::domain_error("stirling2_table: negative size");
  std::vector<std::vector<BigInt>> table(n + 1);
  table[0] = {BigInt(1)};  // S2(0,0) = 1
  for (long i = 1; i <= n; ++i) {
    table[i].assign(i + 1, 0);
    for (long j = 1; j <= i; ++j) {
      // S2(i,j) = j S2(i-1,j) + S2(i-1,j-1); S2(i-1,i) is out of the row and zero.
      BigInt carry = (j < i) ? BigInt(j) * table[i - 1][j] : BigInt(0);
      table[i][j] = carry + table[i - 1][j - 1];
    }
  }
  return table;
}

BigInt stirling2(long n, long k) {
  if (n < 0) throw std::domain_error("stirling2: negative n");
  if (k < 0 || k > n) return 0;
  auto table = stirling2_table(n);
  return table[n][k];
}

}  // namespace cachegap
