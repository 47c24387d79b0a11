#include "cachegap/gap_verify.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cachegap {

namespace {

const Rational kGapBound(200884, 100000);  // the certified global factor
const Rational kSmallRegimeBound(2);       // extra factor once N >= K(K+1)/2
const Rational kSlack128 = Rational(2) + Rational(1, 128);

void check_corner_args(long n_files, long s, long ell) {
  if (n_files < 1 || s < 1 || s > n_files || ell < 1 || ell > s)
    throw std::domain_error("corner requires 1 <= ell <= s <= n_files");
}

// (N - M)/M * (1 - (1 - M/N)^N): an upper bound on the decentralized rate
// that is independent of the user count (the true exponent min(N,K) never
// exceeds N). Requires M > 0.
Rational dec_rate_upper(long n_files, const Rational& m) {
  Rational miss = 1 - m / n_files;
  return (n_files - m) / m * (1 - pow_rational(miss, static_cast<unsigned long>(n_files)));
}

}  // namespace

DecGapCase dec_gap_case_of(long n_files, long s) {
  if (n_files < 1 || s < 1 || s > n_files)
    throw std::domain_error("dec_gap_case_of: need 1 <= s <= n_files");
  if (n_files >= 9 * s) return DecGapCase::large_n;
  return n_files <= 81 ? DecGapCase::small_n : DecGapCase::tail;
}

RatePoint dec_gap_corner(long n_files, long s, long ell) {
  check_corner_args(n_files, s, ell);
  return {Rational(n_files - ell + 1, s),
          Rational(s - 1, 2) + Rational(ell * (ell - 1), 2 * s)};
}

bool dec_gap_check_large_n(long n_files, long s, long ell) {
  check_corner_args(n_files, s, ell);
  if (dec_gap_case_of(n_files, s) != DecGapCase::large_n)
    throw std::domain_error("dec_gap_check_large_n: corner not in the N >= 9s regime");
  RatePoint c = dec_gap_corner(n_files, s, ell);
  // R_dec(M) <= (N-M)/M, so this certifies the corner for every user count.
  return (n_files - c.memory) / c.memory <= kSlack128 * c.rate;
}

bool dec_gap_check_small_n(long n_files, long s, long ell) {
  check_corner_args(n_files, s, ell);
  RatePoint c = dec_gap_corner(n_files, s, ell);
  return dec_rate_upper(n_files, c.memory) <= 2 * c.rate;
}

DecGapBruteforceReport dec_gap_bruteforce_small_n() {
  DecGapBruteforceReport report;
  report.worst_ratio = 0;
  for (long n = 1; n <= 81; ++n) {
    for (long s = n / 9 + 1; s <= n; ++s) {
      if (n >= 9 * s) continue;  // belongs to the large_n regime
      for (long ell = 1; ell <= s; ++ell) {
        RatePoint c = dec_gap_corner(n, s, ell);
        Rational bound_value = dec_rate_upper(n, c.memory);
        ++report.corners_checked;
        if (c.rate == 0) {
          // the full-memory corner: both sides must vanish
          if (bound_value != 0) {
            report.pass = false;
            report.counterexamples.push_back("nonzero rate bound at the zero-rate corner N="
                                             + std::to_string(n));
          }
          continue;
        }
        Rational ratio = bound_value / c.rate;
        if (ratio > report.worst_ratio) {
          report.worst_ratio = ratio;
          report.worst_n = n;
          report.worst_s = s;
          report.worst_ell = ell;
        }
        if (ratio > 2) {
          report.pass = false;
          std::ostringstream os;
          os << "corner N=" << n << " s=" << s << " ell=" << ell
             << " ratio=" << to_string_exact(ratio);
          report.counterexamples.push_back(os.str());
        }
      }
    }
  }
  return report;
}

bool dec_gap_check_tail(long n_files, long s, long ell) {
  check_corner_args(n_files, s, ell);
  if (dec_gap_case_of(n_files, s) != DecGapCase::tail)
    throw std::domain_error("dec_gap_check_tail: corner not in the tail regime");
  RatePoint c = dec_gap_corner(n_files, s, ell);
  return dec_rate_upper(n_files, c.memory) <= kGapBound * c.rate;
}

NumericInequalityReport dec_gap_numeric_inequalities(const Rational& step, double margin) {
  if (step <= 0 || step > Rational(1, 1000))
    throw std::domain_error("dec_gap_numeric_inequalities: step must be in (0, 1/1000]");
  const BigFloat c = to_bigfloat(kGapBound);

  NumericInequalityReport report;
  report.pass = true;
  bool first_init = false, second_init = false;
  std::ostringstream violations;

  for (Rational m = 0; m < 9; m += step) {
    BigFloat M = to_bigfloat(m);
    BigFloat slack1, slack2;
    if (m == 0) {
      // limits: (1-e^-M)/M -> 1 and (81-M)/M (1-e^-M) -> 81
      slack1 = c - 1;
      slack2 = c * (BigFloat(161) / 2) - 81;
    } else {
      BigFloat em = exp(-M);
      BigFloat excess = sqrt(1 + M * M) - M;
      slack1 = c * excess - (1 - em) / M;
      slack2 = c * ((81 - M * M) * excess + (M - 1) / 2)
             - ((81 - M) / M * (1 - em) + BigFloat(9) / 16 * M * em);
    }
    ++report.grid_points;
    if (!first_init || slack1 < report.min_slack_first) {
      report.min_slack_first = slack1;
      report.argmin_first = M;
      first_init = true;
    }
    if (!second_init || slack2 < report.min_slack_second) {
      report.min_slack_second = slack2;
      report.argmin_second = M;
      second_init = true;
    }
    if (slack1 <= 0 || slack2 <= 0) {
      report.pass = false;
      violations << " violation at M=" << to_string_decimal(m) << ";";
    }
    if (slack1 < margin || slack2 < margin) ++report.near_equality_points;
  }

  std::ostringstream notes;
  notes << "evaluated in 50-digit floats; grid certifies the inequalities at the sampled "
           "points, and between neighbors wherever slack exceeds derivative_bound * step "
           "(bounds are crude sup-norm estimates of each slack derivative on [0,9))";
  notes << violations.str();
  report.notes = notes.str();
  return report;
}

// ---------------------------------------------------------------------------

namespace {

// ratio with the matched-zero convention; nullopt = converse vanished while
// the achievable rate did not (cannot happen for sound bounds, but reported
// rather than assumed)
std::optional<Rational> ratio_of(const Rational& achievable, const Rational& converse) {
  if (converse > 0) return achievable / converse;
  if (achievable == 0) return Rational(1);
  return std::nullopt;
}

PiecewiseLinearCurve integer_budget_curve(long n_files, long n_users,
                                          const std::vector<Rational>& values) {
  std::vector<RatePoint> pts;
  for (long r = 0; r <= n_users; ++r)
    pts.push_back({Rational(r * n_files, n_users), values[r]});
  return PiecewiseLinearCurve::from_breakpoints(std::move(pts));
}

struct CellOutcome {
  Rational worst;  // worst ratio across both flavors
  Rational worst_memory;
  std::string worst_flavor;
  std::vector<std::string> violations;
};

CellOutcome analyze_cell(long n_files, long n_users, long grid_density) {
  SystemParams p(n_files, n_users, 0);

  std::vector<Rational> peak_values(n_users + 1), ave_values = r_u_ave_integer_all(p);
  for (long r = 0; r <= n_users; ++r) peak_values[r] = r_u_integer(p, r);
  auto peak_curve = integer_budget_curve(n_files, n_users, peak_values);
  auto ave_curve = integer_budget_curve(n_files, n_users, ave_values);

  PeakConverse peak_conv(n_files, n_users);
  AverageConverse ave_conv_obj(n_files, n_users);
  auto ave_conv_curve = ave_conv_obj.curve();

  std::set<Rational> ms;
  auto add_breakpoints = [&ms](const PiecewiseLinearCurve& c) {
    for (const auto& q : c.breakpoints()) ms.insert(q.memory);
  };
  add_breakpoints(peak_curve);
  add_breakpoints(ave_curve);
  add_breakpoints(peak_conv.best_curve());
  add_breakpoints(ave_conv_curve);
  for (long i = 0; i <= n_files * grid_density; ++i) ms.insert(Rational(i, grid_density));

  CellOutcome out;
  out.worst = 0;
  bool seen = false;
  auto consider = [&](const char* flavor, const Rational& m, const Rational& ach,
                      const Rational& conv) {
    if (conv > ach) {
      std::ostringstream os;
      os << "converse exceeds achievable (" << flavor << ") at N=" << n_files
         << " K=" << n_users << " M=" << to_string_exact(m);
      out.violations.push_back(os.str());
      return;
    }
    auto ratio = ratio_of(ach, conv);
    if (!ratio) {
      std::ostringstream os;
      os << "converse hit zero below a positive rate (" << flavor << ") at N=" << n_files
         << " K=" << n_users << " M=" << to_string_exact(m);
      out.violations.push_back(os.str());
      return;
    }
    if (!seen || *ratio > out.worst) {
      out.worst = *ratio;
      out.worst_memory = m;
      out.worst_flavor = flavor;
      seen = true;
    }
  };

  for (const auto& m : ms) {
    consider("peak", m, peak_curve.evaluate(m), peak_conv.evaluate(m));
    consider("average", m, ave_curve.evaluate(m), ave_conv_curve.evaluate(m));
  }
  return out;
}

void run_parallel(unsigned long jobs, unsigned threads, const std::function<void(unsigned long)>& fn) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  threads = std::min<unsigned long>(threads, jobs);
  if (threads <= 1) {
    for (unsigned long i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([=, &fn]() {
      for (unsigned long i = t; i < jobs; i += threads) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

GapReport gap_factor_sweep(long n_max, long k_max, long grid_density, unsigned threads) {
  if (n_max < 1 || k_max < 1 || grid_density < 1)
    throw std::domain_error("gap_factor_sweep: box and grid density must be positive");

  const unsigned long cells = static_cast<unsigned long>(n_max) * k_max;
  std::vector<std::optional<CellOutcome>> outcomes(cells);
  std::vector<std::string> errors(cells);

  run_parallel(cells, threads, [&](unsigned long idx) {
    long n = static_cast<long>(idx) / k_max + 1;
    long k = static_cast<long>(idx) % k_max + 1;
    try {
      outcomes[idx] = analyze_cell(n, k, grid_density);
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  });

  GapReport report;
  report.suite = "gap-factor";
  {
    std::ostringstream os;
    os << "N=1.." << n_max << ", K=1.." << k_max << ", breakpoints plus 1/" << grid_density
       << " memory grid";
    report.grid = os.str();
  }
  report.bound = kGapBound;
  report.worst_ratio = 0;
  report.pass = true;

  Rational worst_small_regime = 0;
  GapLocation worst_small_at;
  for (unsigned long idx = 0; idx < cells; ++idx) {
    long n = static_cast<long>(idx) / k_max + 1;
    long k = static_cast<long>(idx) % k_max + 1;
    if (!errors[idx].empty())
      throw std::runtime_error("gap_factor_sweep cell N=" + std::to_string(n) + " K="
                               + std::to_string(k) + ": " + errors[idx]);
    const CellOutcome& cell = *outcomes[idx];
    for (const auto& v : cell.violations) {
      report.counterexamples.push_back(v);
      report.pass = false;
    }
    if (cell.worst > report.worst_ratio) {
      report.worst_ratio = cell.worst;
      report.worst_location = {n, k, cell.worst_memory, cell.worst_flavor};
    }
    if (n >= k * (k + 1) / 2) {
      if (cell.worst > worst_small_regime) {
        worst_small_regime = cell.worst;
        worst_small_at = {n, k, cell.worst_memory, cell.worst_flavor};
      }
      if (cell.worst > kSmallRegimeBound) {
        std::ostringstream os;
        os << "ratio " << to_string_exact(cell.worst) << " above 2 at N=" << n << " K=" << k
           << " M=" << to_string_exact(cell.worst_memory) << " (" << cell.worst_flavor
           << ") despite N >= K(K+1)/2";
        report.counterexamples.push_back(os.str());
        report.pass = false;
      }
    }
  }
  if (report.worst_ratio > kGapBound) report.pass = false;

  std::ostringstream notes;
  notes << "worst ratio on the N >= K(K+1)/2 cells: " << to_string_exact(worst_small_regime)
        << " (~" << to_string_decimal(worst_small_regime) << ") at N=" << worst_small_at.n_files
        << " K=" << worst_small_at.n_users << "; that regime must stay at or below 2";
  report.notes = notes.str();
  return report;
}

// ---------------------------------------------------------------------------

namespace {

// max over the union of both curves' breakpoints of (achievable - converse);
// exact because the difference is linear between consecutive union points.
std::pair<Rational, Rational> max_gap(const PiecewiseLinearCurve& ach,
                                      const PiecewiseLinearCurve& conv) {
  std::set<Rational> ms;
  for (const auto& p : ach.breakpoints()) ms.insert(p.memory);
  for (const auto& p : conv.breakpoints()) ms.insert(p.memory);
  Rational worst = 0, at = 0;
  bool seen = false;
  for (const auto& m : ms) {
    Rational gap = ach.evaluate(m) - conv.evaluate(m);
    if (!seen || gap > worst) {
      worst = gap;
      at = m;
      seen = true;
    }
  }
  return {worst, at};
}

bool equal_on_range(const PiecewiseLinearCurve& ach, const PiecewiseLinearCurve& conv,
                    const Rational& lo, const Rational& hi) {
  std::set<Rational> ms{lo, hi};
  for (const auto& p : ach.breakpoints())
    if (p.memory > lo && p.memory < hi) ms.insert(p.memory);
  for (const auto& p : conv.breakpoints())
    if (p.memory > lo && p.memory < hi) ms.insert(p.memory);
  for (const auto& m : ms)
    if (ach.evaluate(m) != conv.evaluate(m)) return false;
  return true;
}

}  // namespace

ExactnessReport large_n_exactness_check(long n_users, const std::vector<long>& n_list,
                                        long shrink_factor) {
  if (n_users < 1) throw std::domain_error("large_n_exactness_check: need n_users >= 1");
  if (n_list.empty()) throw std::domain_error("large_n_exactness_check: empty N list");
  for (size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::domain_error("large_n_exactness_check: N list must increase");
  if (shrink_factor < 1) throw std::domain_error("large_n_exactness_check: bad shrink factor");

  ExactnessReport report;
  report.n_users = n_users;
  report.n_values = n_list;
  report.shrink_factor = shrink_factor;

  const long K = n_users;
  for (long N : n_list) {
    SystemParams p(N, K, 0);
    std::vector<Rational> peak_values(K + 1);
    for (long r = 0; r <= K; ++r) peak_values[r] = r_u_integer(p, r);
    auto ach = integer_budget_curve(N, K, peak_values);
    PeakConverse conv(N, K);
    report.gaps.push_back(max_gap(ach, conv.best_curve()).first);

    auto subcheck = [&report, N](const std::string& what, bool ok) {
      report.subchecks.push_back({"N=" + std::to_string(N) + ": " + what, ok});
    };

    // small budgets: once the library is large enough, the first envelope
    // segment matches the scheme exactly on r in [0, 1]
    if (N >= K * (K + 1) / 2)
      subcheck("exact on budgets r <= 1",
               equal_on_range(ach, conv.best_curve(), Rational(0), Rational(N, K)));

    // saturated subgroup bounds meet the scheme on r in [n-1, n]
    SubgroupRange range = subgroup_admissible_n(p);
    for (long n = std::max(range.lo, (K - 1) / 2 + 1); n <= range.hi && !range.empty(); ++n) {
      if (2 * n + 1 <= K) continue;
      // N >= 2 (K-n)^2 / (2n+1-K) + 1, kept in integers
      if (BigInt(N - 1) * (2 * n + 1 - K) < 2 * BigInt(K - n) * (K - n)) continue;
      ConverseLine line = subgroup_line(p, n);
      bool ok = line.saturated
                && line.at(Rational((n - 1) * N, K)) == r_u_integer(p, n - 1)
                && line.at(Rational(n * N, K)) == r_u_integer(p, n);
      subcheck("saturated subgroup n=" + std::to_string(n) + " exact on budgets r in ["
                   + std::to_string(n - 1) + ", " + std::to_string(n) + "]",
               ok);
    }

    // large budgets: the plain cutset line is exact from r = K-1 on, any N
    subcheck("exact on budgets r >= K-1",
             equal_on_range(ach, conv.best_curve(), Rational((K - 1) * N, K), Rational(N)));
  }

  report.non_increasing = true;
  for (size_t i = 1; i < report.gaps.size(); ++i)
    if (report.gaps[i] > report.gaps[i - 1]) report.non_increasing = false;
  // a gap that starts at zero cannot shrink further; exactness everywhere is
  // the strongest outcome the trend check can certify
  report.final_satisfies_threshold =
      report.gaps.front() == 0 ? report.gaps.back() == 0
                               : report.gaps.back() * shrink_factor < report.gaps.front();

  report.pass = report.non_increasing && report.final_satisfies_threshold;
  for (const auto& sc : report.subchecks) report.pass = report.pass && sc.pass;
  return report;
}

GapReport two_user_equality_sweep(long n_max) {
  if (n_max < 2) throw std::domain_error("two_user_equality_sweep: need n_max >= 2");
  GapReport report;
  report.suite = "two-user-ave";
  report.grid = "N=2.." + std::to_string(n_max) + ", quarter points and curve breakpoints";
  report.bound = 1;
  report.worst_ratio = 0;
  report.pass = true;

  bool seen = false;
  for (long N = 2; N <= n_max; ++N) {
    std::vector<Rational> ms{Rational(0),          Rational(N, 4), Rational(N, 2),
                             Rational(3 * N, 4),   Rational(N)};
    for (const auto& m : ms) {
      SystemParams p(N, 2, m);
      Rational conv = two_user_ave_converse(p);
      Rational ach = r_u_ave(p);
      auto ratio = ratio_of(ach, conv);
      bool equal = ratio && *ratio == 1;
      if (!equal) {
        report.pass = false;
        std::ostringstream os;
        os << "two-user converse misses the average rate at N=" << N
           << " M=" << to_string_exact(m) << ": converse " << to_string_exact(conv)
           << " vs achievable " << to_string_exact(ach);
        report.counterexamples.push_back(os.str());
      }
      if (ratio && (!seen || *ratio > report.worst_ratio)) {
        report.worst_ratio = *ratio;
        report.worst_location = {N, 2, m, "average"};
        seen = true;
      }
    }
  }
  return report;
}

}  // namespace cachegap
