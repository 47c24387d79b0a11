#include "cachegap/converse.hpp"

#include "cachegap/combinatorics.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cachegap {

std::string ConverseLine::describe() const {
  std::ostringstream os;
  if (family == Family::cutset) {
    os << "cutset(s=" << s << ", alpha=" << to_string_exact(alpha) << ", ell=" << ell << ")";
  } else {
    os << "subgroup(n=" << n << ", alpha=" << group_alpha.str() << ", beta=" << group_beta.str()
       << (saturated ? ", saturated" : ", unsaturated") << ")";
  }
  return os.str();
}

namespace {

void check_cutset_args(const SystemParams& p, long s, const Rational& alpha) {
  if (s < 1 || s > p.j())
    throw std::domain_error("cutset_line: s must lie in [1, min(N,K)]");
  if (alpha < 0 || alpha > 1)
    throw std::domain_error("cutset_line: alpha must lie in [0, 1]");
}

}  // namespace

long min_feasible_ell(const SystemParams& p, long s, const Rational& alpha) {
  check_cutset_args(p, s, alpha);
  const long N = p.n_files;
  for (long ell = 1; ell <= s; ++ell) {
    // (s(s-1) - ell(ell-1))/2 + alpha s <= (N - ell + 1) ell
    Rational lhs = Rational(s * (s - 1) - ell * (ell - 1), 2) + alpha * s;
    if (lhs <= (N - ell + 1) * ell) return ell;
  }
  // unreachable: ell = s reduces the condition to alpha <= N - s + 1
  throw std::logic_error("min_feasible_ell: no feasible ell");
}

ConverseLine cutset_line(const SystemParams& p, long s, const Rational& alpha) {
  long ell = min_feasible_ell(p, s, alpha);  // also validates (s, alpha)
  ConverseLine line;
  line.family = ConverseLine::Family::cutset;
  line.s = s;
  line.alpha = alpha;
  line.ell = ell;
  line.intercept = Rational(s - 1) + alpha;
  line.slope = -(Rational(s * (s - 1) - ell * (ell - 1)) + 2 * alpha * s)
             / (2 * Rational(p.n_files - ell + 1));
  return line;
}

std::vector<RatePoint> cutset_corner_points(long n_files, long j_cap) {
  if (n_files < 1) throw std::domain_error("cutset_corner_points: need n_files >= 1");
  if (j_cap < 1 || j_cap > n_files)
    throw std::domain_error("cutset_corner_points: j_cap must lie in [1, n_files]");
  std::vector<RatePoint> pts;
  for (long s = 1; s <= j_cap; ++s)
    for (long ell = 1; ell <= s; ++ell)
      pts.push_back({Rational(n_files - ell + 1, s),
                     Rational(s - 1, 2) + Rational(ell * (ell - 1), 2 * s)});
  pts.push_back({Rational(0), Rational(j_cap)});
  return pts;
}

std::vector<RatePoint> cutset_corner_points(const SystemParams& p) {
  return cutset_corner_points(p.n_files, p.j());
}

PiecewiseLinearCurve cutset_envelope_curve(long n_files, long j_cap) {
  return lower_envelope(cutset_corner_points(n_files, j_cap));
}

SubgroupRange subgroup_admissible_n(const SystemParams& p) {
  long lo = std::max(1L, p.n_users - p.n_files + 1);
  return SubgroupRange{lo, p.n_users - 1};
}

ConverseLine subgroup_line(const SystemParams& p, long n) {
  SubgroupRange range = subgroup_admissible_n(p);
  if (range.empty() || n < range.lo || n > range.hi)
    throw std::domain_error("subgroup_line: n outside the admissible range");
  const long N = p.n_files, K = p.n_users;
  const long alpha = (N - 1) / (K - n);  // floor; >= 1 inside the range
  const long beta = N - alpha * (K - n);

  ConverseLine line;
  line.family = ConverseLine::Family::subgroup;
  line.n = n;
  line.group_alpha = alpha;
  line.group_beta = beta;
  // saturation test 2*beta + alpha*(K - 2n - 1) <= 0, kept in integers
  line.saturated = 2 * beta + alpha * (K - 2 * n - 1) <= 0;
  line.intercept = Rational(2 * K - n + 1, n + 1);
  if (line.saturated) {
    line.slope = -Rational(K * (K + 1)) / (Rational(n) * (n + 1) * N);
  } else {
    line.slope = -Rational(2 * K * (K - n)) / (Rational(n) * (n + 1) * (N - beta));
  }
  return line;
}

namespace {

std::vector<Line> segment_lines(const PiecewiseLinearCurve& curve) {
  std::vector<Line> lines;
  const auto& pts = curve.breakpoints();
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    Rational slope = (pts[i + 1].rate - pts[i].rate) / (pts[i + 1].memory - pts[i].memory);
    lines.push_back({pts[i].rate - slope * pts[i].memory, slope});
  }
  return lines;
}

}  // namespace

PeakConverse::PeakConverse(long n_files, long n_users)
    : n_files_(n_files),
      n_users_(n_users),
      corner_envelope_(cutset_envelope_curve(n_files, std::min(n_files, n_users))),
      best_(corner_envelope_) {
  SystemParams p(n_files, n_users, 0);
  SubgroupRange range = subgroup_admissible_n(p);
  for (long n = range.lo; n <= range.hi && !range.empty(); ++n)
    subgroup_lines_.push_back(subgroup_line(p, n));

  // A convex piecewise-linear function is the max of its extended segment
  // lines, so the pointwise max of envelope, subgroup lines and the zero
  // floor is an upper envelope of plain lines.
  std::vector<Line> lines = segment_lines(corner_envelope_);
  for (const auto& l : subgroup_lines_) lines.push_back(l.as_line());
  lines.push_back({Rational(0), Rational(0)});
  best_ = upper_envelope_of_lines(std::move(lines), Rational(0), Rational(n_files));
}

Rational PeakConverse::evaluate(const Rational& m) const { return best_.evaluate(m); }

PeakConverse::Attribution PeakConverse::attribute(const Rational& m) const {
  Rational best_value = evaluate(m);
  Attribution a;
  Rational env = corner_envelope_.evaluate(m);
  if (env == best_value) {
    a.kind = Attribution::Kind::corner_envelope;
    const auto& pts = corner_envelope_.breakpoints();
    size_t i = 0;
    while (i + 2 < pts.size() && pts[i + 1].memory < m) ++i;
    a.segment_a = pts[i];
    a.segment_b = pts[i + 1];
    return a;
  }
  for (const auto& l : subgroup_lines_) {
    if (l.at(m) == best_value) {
      a.kind = Attribution::Kind::subgroup;
      a.line = l;
      return a;
    }
  }
  a.kind = Attribution::Kind::zero;
  return a;
}

Rational best_peak_converse(const SystemParams& p) {
  return PeakConverse(p.n_files, p.n_users).evaluate(p.memory);
}

ConverseLine per_type_converse(const SystemParams& p, const DemandType& t, long s,
                               const Rational& alpha) {
  if (static_cast<long>(t.statistics.size()) != p.n_files)
    throw std::domain_error("per_type_converse: type does not match n_files");
  long total = 0;
  for (long v : t.statistics) total += v;
  if (total != p.n_users)
    throw std::domain_error("per_type_converse: type does not match n_users");
  if (s < 1 || s > t.n_distinct)
    throw std::domain_error("per_type_converse: s must lie in [1, distinct requests]");
  return cutset_line(p, s, alpha);
}

PiecewiseLinearCurve per_type_envelope(long n_files, long n_distinct) {
  return cutset_envelope_curve(n_files, n_distinct);
}

namespace {

void build_partitions(long remaining, long max_part, long slots_left, std::vector<long>& acc,
                      long n_files, std::vector<DemandType>& out) {
  if (remaining == 0) {
    out.push_back(DemandType::from_parts(acc, n_files));
    return;
  }
  if (slots_left == 0) return;
  long cap = std::min(remaining, max_part);
  // smallest usable part: the rest must still fit in the remaining slots
  for (long part = cap; part >= 1; --part) {
    if (part * slots_left < remaining) break;
    acc.push_back(part);
    build_partitions(remaining - part, part, slots_left - 1, acc, n_files, out);
    acc.pop_back();
  }
}

}  // namespace

std::vector<DemandType> enumerate_types(long n_files, long n_users) {
  if (n_files < 1 || n_users < 1)
    throw std::domain_error("enumerate_types: need n_files, n_users >= 1");
  std::vector<DemandType> out;
  std::vector<long> acc;
  build_partitions(n_users, n_users, std::min(n_files, n_users), acc, n_files, out);
  return out;
}

Rational type_probability(long n_files, long n_users, const DemandType& t) {
  if (static_cast<long>(t.statistics.size()) != n_files)
    throw std::domain_error("type_probability: type does not match n_files");
  long total = 0;
  for (long v : t.statistics) total += v;
  if (total != n_users)
    throw std::domain_error("type_probability: type does not match n_users");

  // #file labelings: N falling n_distinct, divided by multiplicity-class
  // repeats; #user assignments: the multinomial K! / prod(s_i!).
  std::map<long, long> class_count;  // value -> how many files request-count v
  BigInt user_den = 1;
  for (long v : t.statistics) {
    if (v == 0) break;  // statistics sorted, zeros are the tail
    ++class_count[v];
    user_den *= factorial(v);
  }
  BigInt file_den = 1;
  for (auto& [v, c] : class_count) file_den *= factorial(c);

  BigInt num = falling_factorial(n_files, t.n_distinct) * factorial(n_users);
  BigInt den = file_den * user_den;
  BigInt count = num / den;
  if (count * den != num)
    throw std::logic_error("type_probability: non-integer demand count");
  return Rational(count, demand_space_size(n_files, n_users));
}

AverageConverse::AverageConverse(long n_files, long n_users) : n_files_(n_files) {
  for (const auto& t : enumerate_types(n_files, n_users)) {
    mass_[t.n_distinct] += type_probability(n_files, n_users, t);
    if (!envelopes_.count(t.n_distinct))
      envelopes_.emplace(t.n_distinct, per_type_envelope(n_files, t.n_distinct));
  }
}

Rational AverageConverse::evaluate(const Rational& m) const {
  Rational acc = 0;
  for (const auto& [t, mass] : mass_) acc += mass * envelopes_.at(t).evaluate(m);
  return acc;
}

PiecewiseLinearCurve AverageConverse::curve() const {
  std::set<Rational> ms{Rational(0), Rational(n_files_)};
  for (const auto& [t, env] : envelopes_)
    for (const auto& p : env.breakpoints()) ms.insert(p.memory);
  std::vector<RatePoint> pts;
  for (const auto& m : ms) pts.push_back({m, evaluate(m)});
  return PiecewiseLinearCurve::from_breakpoints(std::move(pts));
}

Rational ave_converse(const SystemParams& p) {
  return AverageConverse(p.n_files, p.n_users).evaluate(p.memory);
}

Rational two_user_ave_converse(const SystemParams& p) {
  if (p.n_users != 2) throw std::domain_error("two_user_ave_converse: needs exactly two users");
  if (p.n_files < 2) throw std::domain_error("two_user_ave_converse: needs at least two files");
  const long N = p.n_files;
  const Rational& M = p.memory;
  Rational flat = 1 - M / N;
  Rational steep = Rational(2 * N - 1, N) - Rational(3 * N - 2) * M / (Rational(N) * N);
  return std::max(flat, steep);
}

}  // namespace cachegap
