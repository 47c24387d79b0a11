#pragma once

#include "cachegap/converse.hpp"
#include "cachegap/core_rates.hpp"

#include <string>
#include <vector>

namespace cachegap {

// ---------------------------------------------------------------------------
// Decentralized-scheme gap certificate.
//
// The claim being certified: at every corner (M, R) of the converse region,
// the decentralized rate satisfies R_dec(M) <= 2.00884 R, and <= 2 R when the
// corner's N stays small. The argument splits corners (N, s, ell) into three
// regimes, each checked by a different route. The bound on R_dec used
// throughout is (N-M)/M (1 - (1-M/N)^N), which dominates the rate for every
// user count, so the checks are K-free.
// ---------------------------------------------------------------------------

enum class DecGapCase { large_n, small_n, tail };

// large_n:  N >= 9s       (a slack-128 rational check at the corner)
// small_n:  N <  9s, N <= 81   (exhaustive exact brute force)
// tail:     N <  9s, N >  81   (two transcendental inequalities on a grid)
DecGapCase dec_gap_case_of(long n_files, long s);

// Corner memory/rate of the converse region for (N, s, ell).
RatePoint dec_gap_corner(long n_files, long s, long ell);

// large_n regime: exact rational check (N-M)/M <= (2 + 1/128) R at the
// corner. Since R_dec(M) <= (N-M)/M, passing certifies the 2.00884 bound.
// Requires N >= 9s and 1 <= ell <= s <= N.
bool dec_gap_check_large_n(long n_files, long s, long ell);

// One small_n corner: (N-M)/M (1 - (1-M/N)^N) <= 2 R, exact rationals.
bool dec_gap_check_small_n(long n_files, long s, long ell);

struct DecGapBruteforceReport {
  bool pass = true;
  unsigned long corners_checked = 0;
  // worst R_dec-bound / R over corners with R > 0 (the R = 0 corner is the
  // full-memory point where the bound is 0 too)
  Rational worst_ratio;
  long worst_n = 0, worst_s = 0, worst_ell = 0;
  std::vector<std::string> counterexamples;
};

// Exhaustive small_n sweep: every N in {1..81}, s in {1..N} with N < 9s,
// ell in {1..s}. Zero tolerance.
DecGapBruteforceReport dec_gap_bruteforce_small_n();

// tail regime, exact route for individual corners: the same rational check
// against 2.00884 = 200884/100000. Used to spot-check the numeric argument.
bool dec_gap_check_tail(long n_files, long s, long ell);

struct NumericInequalityReport {
  bool pass = false;
  unsigned long grid_points = 0;
  // first inequality: (1 - e^-M)/M <= 2.00884 (sqrt(1+M^2) - M)
  BigFloat min_slack_first;
  BigFloat argmin_first;
  // second inequality:
  // (81-M)/M (1-e^-M) + 9/16 M e^-M
  //   <= 2.00884 ((81-M^2)(sqrt(1+M^2)-M) + (M-1)/2)
  BigFloat min_slack_second;
  BigFloat argmin_second;
  unsigned long near_equality_points = 0;  // slack below the margin
  // crude global derivative bounds for each slack function, recorded so a
  // reader can judge what the grid does and does not certify between points
  double derivative_bound_first = 3.0;
  double derivative_bound_second = 300.0;
  std::string notes;
};

// Checks both inequalities on the grid {0, step, 2 step, ...} over [0, 9),
// evaluating in ~50-digit floats; M = 0 uses the analytic limits. Hard
// pass/fail is slack > 0 at every grid point; `margin` only classifies
// points as near-equality for reporting. Requires 0 < step <= 1/1000.
NumericInequalityReport dec_gap_numeric_inequalities(const Rational& step, double margin);

// ---------------------------------------------------------------------------
// Gap-factor sweep: achievable rate vs best converse across a parameter box.
// ---------------------------------------------------------------------------

struct GapLocation {
  long n_files = 0;
  long n_users = 0;
  Rational memory;
  std::string flavor;  // "peak" or "average"
};

struct GapReport {
  std::string suite;
  std::string grid;
  Rational worst_ratio;
  GapLocation worst_location;
  Rational bound;
  bool pass = false;
  std::vector<std::string> counterexamples;
  std::string notes;
};

// For every (N, K) in [1, n_max] x [1, k_max], evaluates the peak pair
// (r_u, best peak converse) and the average pair (r_u_ave, type-averaged
// converse) at every breakpoint of the four curves plus a 1/grid_density
// memory grid, and takes the worst achievable/converse ratio (matched zeros
// at M = N count as 1). Pass requires worst <= 200884/100000 everywhere and
// worst <= 2 on cells with N >= K(K+1)/2. threads = 0 picks the hardware
// count.
GapReport gap_factor_sweep(long n_max, long k_max, long grid_density, unsigned threads = 0);

// ---------------------------------------------------------------------------
// Large-library exactness trend for a fixed user count.
// ---------------------------------------------------------------------------

struct ExactnessSubcheck {
  std::string what;
  bool pass = false;
};

struct ExactnessReport {
  long n_users = 0;
  std::vector<long> n_values;
  std::vector<Rational> gaps;  // per N: max over breakpoints of r_u - converse
  bool non_increasing = false;
  bool final_satisfies_threshold = false;  // gaps.back() < gaps.front()/shrink
  long shrink_factor = 5;
  std::vector<ExactnessSubcheck> subchecks;
  bool pass = false;
};

// Tracks g(N) = max_M (r_u - best converse) along n_list (must be
// increasing) and asserts it shrinks; also asserts exact equality on the
// regimes where the converse provably meets the scheme: small budgets
// (r <= 1) once N >= K(K+1)/2, the saturated subgroup segments
// (n > (K-1)/2 with N >= 2(K-n)^2/(2n+1-K) + 1), and large budgets
// (r >= K-1, any N).
ExactnessReport large_n_exactness_check(long n_users, const std::vector<long>& n_list,
                                        long shrink_factor = 5);

// ---------------------------------------------------------------------------
// Two-user average-rate equality sweep.
// ---------------------------------------------------------------------------

// For every N in {2..n_max}: the closed-form two-user average converse must
// equal the average achievable rate at every curve breakpoint and at the
// quarter points. Reports worst converse/achievable ratio (1 exactly iff
// equality never breaks).
GapReport two_user_equality_sweep(long n_max);

}  // namespace cachegap
