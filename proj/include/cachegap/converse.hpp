#pragma once

#include "cachegap/envelope.hpp"
#include "cachegap/system.hpp"

#include <map>
#include <vector>

namespace cachegap {

// A lower bound on the optimal rate of the form R >= intercept + slope * M,
// valid for every M in [0, N]. Carries how it was derived so the CLI can
// attribute the winning bound.
struct ConverseLine {
  Rational intercept;
  Rational slope;

  enum class Family { cutset, subgroup };
  Family family;

  // cutset family: derived from serving s users, a fractional extra round
  // alpha, and the smallest feasible recursion depth ell.
  long s = 0;
  Rational alpha;
  long ell = 0;

  // subgroup family: derived by watching a subgroup of n users; alpha/beta
  // split the file set across the remaining users, and the bound takes one
  // of two shapes depending on whether the split saturates.
  long n = 0;
  BigInt group_alpha;
  BigInt group_beta;
  bool saturated = false;  // true = first shape (slope scaled by 1/N)

  Rational at(const Rational& m) const { return intercept + slope * m; }
  Line as_line() const { return Line{intercept, slope}; }
  std::string describe() const;
};

// Smallest ell in {1..s} satisfying
//   (s(s-1) - ell(ell-1))/2 + alpha s <= (N - ell + 1) ell.
// ell = s always qualifies (alpha <= 1 <= N - s + 1), so this never fails.
// Requires 1 <= s <= min(N,K) and alpha in [0,1].
long min_feasible_ell(const SystemParams& p, long s, const Rational& alpha);

// The cutset-family bound R >= (s - 1 + alpha) - (s(s-1) - ell(ell-1)
// + 2 alpha s) / (2 (N - ell + 1)) * M with ell = min_feasible_ell.
ConverseLine cutset_line(const SystemParams& p, long s, const Rational& alpha);

// Corner points ((N - ell + 1)/s, (s-1)/2 + ell(ell-1)/(2s)) for s in
// {1..j_cap}, ell in {1..s}, plus (0, j_cap). The lower convex envelope of
// these points equals the supremum of the cutset family. j_cap defaults to
// min(N, K) via the SystemParams overload.
std::vector<RatePoint> cutset_corner_points(long n_files, long j_cap);
std::vector<RatePoint> cutset_corner_points(const SystemParams& p);

PiecewiseLinearCurve cutset_envelope_curve(long n_files, long j_cap);

// Subgroup-family bounds exist for n in {max(1, K-N+1) .. K-1}; the range can
// be empty (e.g. N=1, K=2). Within it, group_alpha = floor((N-1)/(K-n)) >= 1.
struct SubgroupRange {
  long lo, hi;  // inclusive; empty iff lo > hi
  bool empty() const { return lo > hi; }
};
SubgroupRange subgroup_admissible_n(const SystemParams& p);

// The subgroup-family bound for one n. Throws std::domain_error when n is
// outside subgroup_admissible_n.
ConverseLine subgroup_line(const SystemParams& p, long n);

// All the machinery for the peak converse of one (N, K) system, computed
// once: the cutset corner envelope, the subgroup lines, and their pointwise
// maximum (floored at zero) as a convex curve over [0, N].
class PeakConverse {
 public:
  PeakConverse(long n_files, long n_users);

  const PiecewiseLinearCurve& corner_envelope() const { return corner_envelope_; }
  const std::vector<ConverseLine>& subgroup_lines() const { return subgroup_lines_; }
  const PiecewiseLinearCurve& best_curve() const { return best_; }

  Rational evaluate(const Rational& m) const;

  // Which bound attains the max at m. Ties prefer the corner envelope, then
  // subgroup lines by increasing n, then the zero floor.
  struct Attribution {
    enum class Kind { corner_envelope, subgroup, zero } kind;
    RatePoint segment_a, segment_b;  // corner_envelope: active segment ends
    ConverseLine line;               // subgroup: the winning line
  };
  Attribution attribute(const Rational& m) const;

 private:
  long n_files_, n_users_;
  PiecewiseLinearCurve corner_envelope_;
  std::vector<ConverseLine> subgroup_lines_;
  PiecewiseLinearCurve best_;
};

// max(corner envelope, subgroup lines, 0) at p.memory.
Rational best_peak_converse(const SystemParams& p);

// The cutset bound specialised to one demand type: s may only range over
// {1..t.n_distinct}; N is unchanged. Throws when s exceeds it.
ConverseLine per_type_converse(const SystemParams& p, const DemandType& t, long s,
                               const Rational& alpha);

// Envelope of the per-type corner set: identical to the system envelope with
// the s range capped at the type's distinct-request count.
PiecewiseLinearCurve per_type_envelope(long n_files, long n_distinct);

// All demand types of a (N, K) system: partitions of K into at most min(N,K)
// positive parts, in decreasing lexicographic order.
std::vector<DemandType> enumerate_types(long n_files, long n_users);

// Exact probability that a uniform demand has this type: the number of
// demands realizing the sorted multiplicities, divided by N^K.
Rational type_probability(long n_files, long n_users, const DemandType& t);

// Average-rate converse: the expectation, over demand types, of each type's
// corner envelope. Built once per (N, K); evaluation is exact.
class AverageConverse {
 public:
  AverageConverse(long n_files, long n_users);

  // total type probability carried by each distinct-request count
  const std::map<long, Rational>& mass_by_distinct() const { return mass_; }

  Rational evaluate(const Rational& m) const;

  // The expectation as an explicit convex curve over [0, N].
  PiecewiseLinearCurve curve() const;

 private:
  long n_files_;
  std::map<long, Rational> mass_;
  std::map<long, PiecewiseLinearCurve> envelopes_;
};

Rational ave_converse(const SystemParams& p);

// Closed-form average-rate converse for two users:
//   max(1 - M/N, (2N-1)/N - (3N-2) M / N^2).
// Requires K = 2 and N >= 2.
Rational two_user_ave_converse(const SystemParams& p);

}  // namespace cachegap
