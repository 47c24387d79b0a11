#include "cachegap/system.hpp"

#include <algorithm>
#include <stdexcept>

namespace cachegap {

SystemParams::SystemParams(long n, long k, Rational m)
    : n_files(n), n_users(k), memory(std::move(m)) {
  if (n_files < 1) throw std::domain_error("SystemParams: need at least one file");
  if (n_users < 1) throw std::domain_error("SystemParams: need at least one user");
  if (memory < 0 || memory > n_files)
    throw std::domain_error("SystemParams: memory must be in [0, n_files]");
}

Rational SystemParams::r() const { return memory * n_users / n_files; }

Demand::Demand(std::vector<long> reqs, long n_files) : requests(std::move(reqs)) {
  if (requests.empty()) throw std::domain_error("Demand: empty request vector");
  for (long f : requests)
    if (f < 1 || f > n_files) throw std::domain_error("Demand: file id out of range");
}

long n_e(const Demand& d) {
  std::vector<long> sorted = d.requests;
  std::sort(sorted.begin(), sorted.end());
  return std::unique(sorted.begin(), sorted.end()) - sorted.begin();
}

DemandType DemandType::of(const Demand& d, long n_files) {
  std::vector<long> mult(n_files, 0);
  for (long f : d.requests) {
    if (f < 1 || f > n_files) throw std::domain_error("DemandType: file id out of range");
    ++mult[f - 1];
  }
  std::sort(mult.begin(), mult.end(), std::greater<long>());
  DemandType t;
  t.statistics = std::move(mult);
  t.n_distinct = std::count_if(t.statistics.begin(), t.statistics.end(),
                               [](long v) { return v > 0; });
  return t;
}

DemandType DemandType::from_parts(const std::vector<long>& parts, long n_files) {
  if (static_cast<long>(parts.size()) > n_files)
    throw std::domain_error("DemandType: more parts than files");
  for (size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] < 1) throw std::domain_error("DemandType: parts must be positive");
    if (i > 0 && parts[i] > parts[i - 1])
      throw std::domain_error("DemandType: parts must be non-increasing");
  }
  DemandType t;
  t.statistics = parts;
  t.statistics.resize(n_files, 0);
  t.n_distinct = static_cast<long>(parts.size());
  return t;
}

BigInt demand_space_size(long n_files, long n_users) {
  using boost::multiprecision::pow;
  return pow(BigInt(n_files), static_cast<unsigned>(n_users));
}

}  // namespace cachegap
