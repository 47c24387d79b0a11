#include "cachegap/envelope.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cachegap {

namespace {

// Sign of the cross product (b-a) x (c-a): positive = left turn, i.e. the
// slope increases from ab to bc, which is what a convex (lower hull) vertex
// looks like.
int turn(const RatePoint& a, const RatePoint& b, const RatePoint& c) {
  Rational cross = (b.memory - a.memory) * (c.rate - a.rate)
                 - (b.rate - a.rate) * (c.memory - a.memory);
  if (cross > 0) return 1;
  if (cross < 0) return -1;
  return 0;
}

}  // namespace

PiecewiseLinearCurve PiecewiseLinearCurve::from_breakpoints(std::vector<RatePoint> points) {
  std::sort(points.begin(), points.end(), [](const RatePoint& a, const RatePoint& b) {
    if (a.memory != b.memory) return a.memory < b.memory;
    return a.rate < b.rate;
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (size_t i = 1; i < points.size(); ++i)
    if (points[i].memory == points[i - 1].memory)
      throw std::domain_error("curve: two rates at the same memory value");
  if (points.size() < 2) throw std::domain_error("curve: need at least two breakpoints");

  std::vector<RatePoint> kept;
  for (auto& p : points) {
    while (kept.size() >= 2) {
      int t = turn(kept[kept.size() - 2], kept.back(), p);
      if (t > 0) break;                              // genuine convex vertex
      if (t < 0) throw std::domain_error("curve: breakpoints are not convex");
      kept.pop_back();                               // collinear middle, merge
    }
    kept.push_back(p);
  }
  PiecewiseLinearCurve c;
  c.points_ = std::move(kept);
  return c;
}

Rational PiecewiseLinearCurve::evaluate(const Rational& m) const {
  return segment_at(m).at(m);
}

Line PiecewiseLinearCurve::segment_at(const Rational& m) const {
  if (m < memory_lo() || m > memory_hi())
    throw std::domain_error("curve: memory outside the curve domain");
  // first breakpoint strictly right of m (so the segment starting at its
  // predecessor covers m); clamp for m at the right edge
  size_t hi = std::upper_bound(points_.begin(), points_.end(), m,
                               [](const Rational& v, const RatePoint& p) { return v < p.memory; })
              - points_.begin();
  if (hi == points_.size()) --hi;
  if (hi == 0) ++hi;
  const RatePoint& a = points_[hi - 1];
  const RatePoint& b = points_[hi];
  Rational slope = (b.rate - a.rate) / (b.memory - a.memory);
  return Line{a.rate - slope * a.memory, slope};
}

PiecewiseLinearCurve lower_envelope(std::vector<RatePoint> points) {
  if (points.empty()) throw std::domain_error("lower_envelope: no points");
  std::sort(points.begin(), points.end(), [](const RatePoint& a, const RatePoint& b) {
    if (a.memory != b.memory) return a.memory < b.memory;
    return a.rate < b.rate;
  });
  // keep only the lowest rate per memory value
  std::vector<RatePoint> reduced;
  for (auto& p : points)
    if (reduced.empty() || reduced.back().memory != p.memory) reduced.push_back(p);
  if (reduced.size() < 2)
    throw std::domain_error("lower_envelope: need two distinct memory values");

  std::vector<RatePoint> hull;
  for (auto& p : reduced) {
    while (hull.size() >= 2 && turn(hull[hull.size() - 2], hull.back(), p) <= 0)
      hull.pop_back();
    hull.push_back(p);
  }
  return PiecewiseLinearCurve::from_breakpoints(std::move(hull));
}

PiecewiseLinearCurve upper_envelope_of_lines(std::vector<Line> lines, const Rational& m_lo,
                                             const Rational& m_hi) {
  if (lines.empty()) throw std::domain_error("upper_envelope_of_lines: no lines");
  if (m_lo >= m_hi) throw std::domain_error("upper_envelope_of_lines: empty domain");
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    if (a.slope != b.slope) return a.slope < b.slope;
    return a.intercept < b.intercept;
  });
  // among parallel lines only the highest matters
  std::vector<Line> distinct;
  for (auto& l : lines) {
    if (!distinct.empty() && distinct.back().slope == l.slope) distinct.back() = l;
    else distinct.push_back(l);
  }

  // Convex-hull-trick stack: with slopes increasing, line b between a and c is
  // never the max iff c overtakes a no later than b does.
  auto useless = [](const Line& a, const Line& b, const Line& c) {
    return (a.intercept - c.intercept) * (b.slope - a.slope)
           <= (a.intercept - b.intercept) * (c.slope - a.slope);
  };
  std::vector<Line> stack;
  for (auto& l : distinct) {
    while (stack.size() >= 2 && useless(stack[stack.size() - 2], stack.back(), l))
      stack.pop_back();
    if (stack.size() == 1) {
      // a single stored line is dropped only if the newcomer dominates it
      // everywhere on the domain (it never wins later than m_lo)
      const Line& a = stack.back();
      Rational cross_x = (a.intercept - l.intercept) / (l.slope - a.slope);
      if (cross_x <= m_lo) stack.pop_back();
    }
    stack.push_back(l);
  }

  std::vector<RatePoint> pts;
  auto value_at = [&stack](const Rational& x) {
    Rational best = stack.front().at(x);
    for (auto& l : stack) best = std::max(best, l.at(x));
    return best;
  };
  pts.push_back({m_lo, value_at(m_lo)});
  for (size_t i = 0; i + 1 < stack.size(); ++i) {
    Rational x = (stack[i].intercept - stack[i + 1].intercept)
               / (stack[i + 1].slope - stack[i].slope);
    if (x > m_lo && x < m_hi) pts.push_back({x, stack[i].at(x)});
  }
  pts.push_back({m_hi, value_at(m_hi)});
  return PiecewiseLinearCurve::from_breakpoints(std::move(pts));
}

MaxRatio curve_max_ratio(const PiecewiseLinearCurve& upper, const PiecewiseLinearCurve& lower,
                         const Rational& m_lo, const Rational& m_hi) {
  if (m_lo > m_hi) throw std::domain_error("curve_max_ratio: empty range");
  std::set<Rational> ms{m_lo, m_hi};
  for (auto& p : upper.breakpoints())
    if (p.memory > m_lo && p.memory < m_hi) ms.insert(p.memory);
  for (auto& p : lower.breakpoints())
    if (p.memory > m_lo && p.memory < m_hi) ms.insert(p.memory);

  MaxRatio out;
  out.ratio = 0;
  out.at_memory = m_lo;
  bool seen = false;
  for (auto& m : ms) {
    Rational u = upper.evaluate(m);
    Rational l = lower.evaluate(m);
    Rational ratio;
    if (l > 0) {
      ratio = u / l;
    } else if (u == 0) {
      ratio = 1;  // matched zeros: the tradeoff pinches shut at full memory
    } else {
      out.unbounded = true;
      out.at_memory = m;
      return out;
    }
    if (!seen || ratio > out.ratio) {
      out.ratio = ratio;
      out.at_memory = m;
      seen = true;
    }
  }
  return out;
}

}  // namespace cachegap
