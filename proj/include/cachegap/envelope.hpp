#pragma once

#include "cachegap/rational.hpp"

#include <vector>

namespace cachegap {

struct RatePoint {
  Rational memory;
  Rational rate;

  bool operator==(const RatePoint& o) const { return memory == o.memory && rate == o.rate; }
};

// y = intercept + slope * x
struct Line {
  Rational intercept;
  Rational slope;

  Rational at(const Rational& x) const { return intercept + slope * x; }
};

// A convex piecewise-linear function given by its breakpoints. Invariants:
// memory strictly increasing, slopes strictly increasing (every breakpoint is
// a genuine vertex; collinear middles are merged on construction).
class PiecewiseLinearCurve {
 public:
  // Validates and normalizes: sorts, drops duplicate points, merges collinear
  // middles. Throws std::domain_error on conflicting rates at equal memory or
  // on a concave kink. Needs at least two distinct memory values.
  static PiecewiseLinearCurve from_breakpoints(std::vector<RatePoint> points);

  const std::vector<RatePoint>& breakpoints() const { return points_; }
  const Rational& memory_lo() const { return points_.front().memory; }
  const Rational& memory_hi() const { return points_.back().memory; }

  // Exact value at m; throws std::domain_error outside [memory_lo, memory_hi].
  Rational evaluate(const Rational& m) const;

  // The extension of the segment containing m (segments are closed on the
  // left; the last segment also owns the right endpoint).
  Line segment_at(const Rational& m) const;

  bool operator==(const PiecewiseLinearCurve& o) const { return points_ == o.points_; }

 private:
  std::vector<RatePoint> points_;
};

// Greatest convex function lying below every input point. Points sharing a
// memory value are first reduced to the lowest rate. All arithmetic exact.
PiecewiseLinearCurve lower_envelope(std::vector<RatePoint> points);

// Pointwise maximum of a family of lines, restricted to [m_lo, m_hi].
// The result is convex; needs at least one line.
PiecewiseLinearCurve upper_envelope_of_lines(std::vector<Line> lines, const Rational& m_lo,
                                             const Rational& m_hi);

struct MaxRatio {
  bool unbounded = false;  // lower hit zero where upper did not
  Rational ratio;          // meaningful when !unbounded
  Rational at_memory;      // where the max (or the zero of lower) occurs
};

// max of upper/lower over [m_lo, m_hi]. Because upper is convex and lower is
// linear between consecutive breakpoints, the ratio on each piece peaks at a
// breakpoint, so evaluating the union of breakpoints is exact. Points where
// both curves are zero count as ratio 1 (matched zeros at the memory axis).
MaxRatio curve_max_ratio(const PiecewiseLinearCurve& upper, const PiecewiseLinearCurve& lower,
                         const Rational& m_lo, const Rational& m_hi);

}  // namespace cachegap
