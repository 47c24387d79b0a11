#pragma once

#include "cachegap/rational.hpp"

#include <vector>

namespace cachegap {

// One server, n_files files of equal size, n_users users each with a cache
// holding the equivalent of `memory` files. All rates are normalized to the
// file size.
struct SystemParams {
  long n_files;     // N >= 1
  long n_users;     // K >= 1
  Rational memory;  // M, with 0 <= M <= N

  SystemParams(long n, long k, Rational m);

  long j() const { return n_files < n_users ? n_files : n_users; }  // min(N, K)
  Rational r() const;  // normalized cache budget K M / N, in [0, K]
};

// A request vector: user i asks for file requests[i], files numbered 1..N.
struct Demand {
  std::vector<long> requests;

  Demand(std::vector<long> reqs, long n_files);

  long n_users() const { return static_cast<long>(requests.size()); }
};

// Number of distinct files a demand touches.
long n_e(const Demand& d);

// A demand up to file relabeling and user permutation: the sorted request
// multiplicities. statistics is non-increasing, length n_files, sums to the
// user count.
struct DemandType {
  std::vector<long> statistics;
  long n_distinct;  // count of non-zero entries

  static DemandType of(const Demand& d, long n_files);
  // parts: non-increasing positive multiplicities (at most min(N,K) of them).
  static DemandType from_parts(const std::vector<long>& parts, long n_files);
};

// Visits every demand vector in {1..n_files}^n_users in lexicographic order.
// Returns the number visited. Callers guard the N^K blowup themselves.
template <typename Fn>
unsigned long long for_each_demand(long n_files, long n_users, Fn&& fn) {
  std::vector<long> d(n_users, 1);
  unsigned long long count = 0;
  while (true) {
    fn(const_cast<const std::vector<long>&>(d));
    ++count;
    long i = n_users - 1;
    while (i >= 0 && d[i] == n_files) d[i--] = 1;
    if (i < 0) break;
    ++d[i];
  }
  return count;
}

// N^K as an exact integer.
BigInt demand_space_size(long n_files, long n_users);

}  // namespace cachegap
