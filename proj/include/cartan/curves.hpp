#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cartan/algebra.hpp"

namespace cartan {

enum class Dir { PlusX1, MinusX1, PlusX2, MinusX2 };

inline int dir_axis(Dir d) { return (d == Dir::PlusX1 || d == Dir::MinusX1) ? 1 : 2; }
inline int dir_sign(Dir d) { return (d == Dir::PlusX1 || d == Dir::PlusX2) ? 1 : -1; }
inline Dir dir_negate(Dir d) {
  switch (d) {
    case Dir::PlusX1: return Dir::MinusX1;
    case Dir::MinusX1: return Dir::PlusX1;
    case Dir::PlusX2: return Dir::MinusX2;
    case Dir::MinusX2: return Dir::PlusX2;
  }
  throw std::logic_error("bad Dir");
}
inline Dir dir_from_axis(int axis, int sign) {
  if (axis == 1) return sign >= 0 ? Dir::PlusX1 : Dir::MinusX1;
  return sign >= 0 ? Dir::PlusX2 : Dir::MinusX2;
}
inline std::string dir_str(Dir d) {
  switch (d) {
    case Dir::PlusX1: return "+x1";
    case Dir::MinusX1: return "-x1";
    case Dir::PlusX2: return "+x2";
    case Dir::MinusX2: return "-x2";
  }
  throw std::logic_error("bad Dir");
}
inline Dir dir_parse(const std::string& s) {
  if (s == "+x1") return Dir::PlusX1;
  if (s == "-x1") return Dir::MinusX1;
  if (s == "+x2") return Dir::PlusX2;
  if (s == "-x2") return Dir::MinusX2;
  throw std::invalid_argument("bad direction: '" + s + "'");
}

/// exp(a V) as a group point, V in {±X1, ±X2}.
template <class S>
GroupPoint<S> exp_dir(Dir d, const S& amount) {
  GroupPoint<S> g;
  const S v = dir_sign(d) > 0 ? amount : -amount;
  g[dir_axis(d)] = v;
  return g;
}

/// One step of a horizontal segment: p * exp(speed * dt * V).
template <class S>
GroupPoint<S> flow(const GroupPoint<S>& p, Dir d, const S& speed, const S& dt) {
  return mul(p, exp_dir(d, speed * dt));
}

/// A horizontal lambda-V segment: constant direction, speed >= 0, duration > 0.
template <class S>
struct Segment {
  Dir dir;
  S speed;
  S duration;
};

/// Finite concatenation of horizontal segments. Evaluation is continuous by
/// construction; knot points cache the segment endpoints.
template <class S>
struct SegmentCurve {
  GroupPoint<S> start;
  S t0{};
  std::vector<Segment<S>> segments;

  SegmentCurve() : SegmentCurve(GroupPoint<S>{}, S(0)) {}
  SegmentCurve(GroupPoint<S> start_, S t0_) : start(std::move(start_)), t0(std::move(t0_)) {
    times_.push_back(t0);
    knots_.push_back(start);
  }

  void push(Dir d, S speed, S duration) {
    if (speed < S(0)) throw std::invalid_argument("segment speed must be >= 0");
    if (!(duration > S(0))) throw std::invalid_argument("segment duration must be > 0");
    knots_.push_back(flow(knots_.back(), d, speed, duration));
    times_.push_back(times_.back() + duration);
    segments.push_back(Segment<S>{d, std::move(speed), std::move(duration)});
  }

  /// Appends another curve; its start must equal this curve's endpoint.
  void append(const SegmentCurve& other) {
    if (!(other.start == end_point())) throw std::invalid_argument("append: endpoint mismatch");
    for (const auto& s : other.segments) push(s.dir, s.speed, s.duration);
  }

  size_t size() const { return segments.size(); }
  const S& end_time() const { return times_.back(); }
  const GroupPoint<S>& end_point() const { return knots_.back(); }
  const std::vector<S>& knot_times() const { return times_; }
  const std::vector<GroupPoint<S>>& knots() const { return knots_; }
  S duration() const { return times_.back() - t0; }

  S length() const {
    S acc(0);
    for (const auto& s : segments) acc += s.speed * s.duration;
    return acc;
  }

  /// Index of the segment evaluated at t; shared boundaries resolve to the
  /// earlier segment.
  size_t segment_index(const S& t) const {
    if (t < t0 || t > end_time()) throw std::domain_error("eval: t outside curve domain");
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    size_t k = static_cast<size_t>(it - times_.begin());
    if (k > 0) --k;  // t == times_[k] lands on the earlier segment's endpoint
    return std::min(k, segments.size() - 1);
  }

  GroupPoint<S> eval(const S& t) const {
    if (segments.empty()) {
      if (t == t0) return start;
      throw std::domain_error("eval: empty curve");
    }
    if (t < t0 || t > end_time()) throw std::domain_error("eval: t outside curve domain");
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    size_t k = static_cast<size_t>(it - times_.begin());
    if (k < times_.size() && times_[k] == t) return knots_[k];
    --k;
    return flow(knots_[k], segments[k].dir, segments[k].speed, t - times_[k]);
  }

  /// Restriction to [s,t] re-anchored at eval(s).
  SegmentCurve restrict(const S& s, const S& t) const {
    if (!(s <= t)) throw std::invalid_argument("restrict: need s <= t");
    SegmentCurve out(eval(s), s);
    if (s == t) return out;
    size_t k = segment_index(s);
    S cur = s;
    while (cur < t) {
      const S seg_end = times_[k + 1];
      const S stop = std::min(seg_end, t);
      if (stop > cur) out.push(segments[k].dir, segments[k].speed, stop - cur);
      cur = stop;
      ++k;
      if (k >= segments.size()) break;
    }
    return out;
  }

  /// Time-reversed curve: same trace from end_point back to start.
  SegmentCurve reversed() const {
    SegmentCurve out(end_point(), t0);
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
      out.push(dir_negate(it->dir), it->speed, it->duration);
    }
    return out;
  }

  /// Left translation g * curve; the segment word is unchanged.
  SegmentCurve left_translate(const GroupPoint<S>& g) const {
    SegmentCurve out(mul(g, start), t0);
    for (const auto& s : segments) out.push(s.dir, s.speed, s.duration);
    return out;
  }

 private:
  std::vector<S> times_;
  std::vector<GroupPoint<S>> knots_;
};

inline SegmentCurve<double> to_double_curve(const SegmentCurve<Rat>& c) {
  SegmentCurve<double> out(to_double_point(c.start), to_double(c.t0));
  for (const auto& s : c.segments) out.push(s.dir, to_double(s.speed), to_double(s.duration));
  return out;
}

// ---------------------------------------------------------------------------
// Sampled horizontal curves driven by controls (float backend).

struct PlanarSample {
  double x1, x2;  // planar position
  double u1, u2;  // planar derivatives (controls)
};
using PlanarFn = std::function<PlanarSample(double)>;

/// Sampled controls with lifted states on a uniform grid.
struct ControlCurve {
  double t0 = 0, t1 = 1;
  std::vector<double> grid;    // size cells+1
  std::vector<double> u1, u2;  // control samples at grid points
  std::vector<GroupPoint<double>> states;
  double residual_bound = 0;  // declared by the constructing routine

  size_t cells() const { return grid.empty() ? 0 : grid.size() - 1; }
  double step() const { return (t1 - t0) / static_cast<double>(cells()); }

  size_t nearest_index(double t) const {
    double u = (t - t0) / step();
    long i = std::lround(u);
    i = std::max(0l, std::min(i, static_cast<long>(cells())));
    return static_cast<size_t>(i);
  }
};

namespace detail {

// RK4 for the lifting system
//   x3' = -u2 x1,   x4' = u2 x1^2 / 2,   x5' = u2 x1 x2,
// with the planar pair (x1,x2) and controls supplied externally.
inline void lift_rk4_step(const PlanarSample& s0, const PlanarSample& sh, const PlanarSample& s1,
                          double h, std::array<double, 3>& v) {
  auto rhs = [](const PlanarSample& s) {
    return std::array<double, 3>{-s.u2 * s.x1, 0.5 * s.u2 * s.x1 * s.x1, s.u2 * s.x1 * s.x2};
  };
  const auto k1 = rhs(s0), k2 = rhs(sh), k4 = rhs(s1);
  for (int i = 0; i < 3; ++i) v[i] += h / 6.0 * (k1[i] + 4.0 * k2[i] + k4[i]);
}

}  // namespace detail

/// Horizontal lift of a planar curve: integrates the lifting equations with
/// fixed-step RK4. The planar data must start at (start[1], start[2]).
inline ControlCurve lift(const PlanarFn& planar, double a, double b, size_t cells,
                         const GroupPoint<double>& start) {
  if (!(b > a) || cells == 0) throw std::invalid_argument("lift: non-monotone grid");
  ControlCurve c;
  c.t0 = a;
  c.t1 = b;
  const double h = (b - a) / static_cast<double>(cells);
  c.grid.resize(cells + 1);
  c.u1.resize(cells + 1);
  c.u2.resize(cells + 1);
  c.states.resize(cells + 1);
  std::array<double, 3> v = {start[3], start[4], start[5]};
  PlanarSample s = planar(a);
  c.grid[0] = a;
  c.u1[0] = s.u1;
  c.u2[0] = s.u2;
  c.states[0] = GroupPoint<double>::from(s.x1, s.x2, v[0], v[1], v[2]);
  for (size_t i = 0; i < cells; ++i) {
    const double t = a + static_cast<double>(i) * h;
    const PlanarSample sh = planar(t + 0.5 * h);
    const PlanarSample s1 = planar(std::min(t + h, b));
    detail::lift_rk4_step(s, sh, s1, h, v);
    s = s1;
    c.grid[i + 1] = t + h;
    c.u1[i + 1] = s.u1;
    c.u2[i + 1] = s.u2;
    c.states[i + 1] = GroupPoint<double>::from(s.x1, s.x2, v[0], v[1], v[2]);
  }
  c.residual_bound = h * h;
  return c;
}

/// Lift from control functions alone: also integrates x1' = u1, x2' = u2.
inline ControlCurve lift_controls(const std::function<double(double)>& u1,
                                  const std::function<double(double)>& u2, double a, double b,
                                  size_t cells, const GroupPoint<double>& start) {
  if (!(b > a) || cells == 0) throw std::invalid_argument("lift: non-monotone grid");
  ControlCurve c;
  c.t0 = a;
  c.t1 = b;
  const double h = (b - a) / static_cast<double>(cells);
  c.grid.resize(cells + 1);
  c.u1.resize(cells + 1);
  c.u2.resize(cells + 1);
  c.states.resize(cells + 1);
  std::array<double, 5> v = {start[1], start[2], start[3], start[4], start[5]};
  auto rhs = [&](double t, const std::array<double, 5>& y) {
    const double a1 = u1(t), a2 = u2(t);
    return std::array<double, 5>{a1, a2, -a2 * y[0], 0.5 * a2 * y[0] * y[0], a2 * y[0] * y[1]};
  };
  c.grid[0] = a;
  c.u1[0] = u1(a);
  c.u2[0] = u2(a);
  c.states[0] = GroupPoint<double>::from(v[0], v[1], v[2], v[3], v[4]);
  for (size_t i = 0; i < cells; ++i) {
    const double t = a + static_cast<double>(i) * h;
    const auto k1 = rhs(t, v);
    std::array<double, 5> y2, y3, y4;
    for (int j = 0; j < 5; ++j) y2[j] = v[j] + 0.5 * h * k1[j];
    const auto k2 = rhs(t + 0.5 * h, y2);
    for (int j = 0; j < 5; ++j) y3[j] = v[j] + 0.5 * h * k2[j];
    const auto k3 = rhs(t + 0.5 * h, y3);
    for (int j = 0; j < 5; ++j) y4[j] = v[j] + h * k3[j];
    const auto k4 = rhs(t + h, y4);
    for (int j = 0; j < 5; ++j) v[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    c.grid[i + 1] = t + h;
    c.u1[i + 1] = u1(t + h);
    c.u2[i + 1] = u2(t + h);
    c.states[i + 1] = GroupPoint<double>::from(v[0], v[1], v[2], v[3], v[4]);
  }
  c.residual_bound = h * h;
  return c;
}

/// Lift of uniformly sampled planar data: piecewise-linear reconstruction
/// with per-cell slopes, integrated cell by cell. The quadrature is exact for
/// the reconstructed data, so sample-aligned segment words lift to their
/// exact endpoints up to roundoff.
inline ControlCurve lift_sampled(const std::vector<double>& x1, const std::vector<double>& x2,
                                 double a, double b, const GroupPoint<double>& start) {
  if (x1.size() != x2.size() || x1.size() < 2) throw std::invalid_argument("lift: bad samples");
  if (!(b > a)) throw std::invalid_argument("lift: non-monotone grid");
  const size_t cells = x1.size() - 1;
  const double h = (b - a) / static_cast<double>(cells);
  ControlCurve c;
  c.t0 = a;
  c.t1 = b;
  c.grid.resize(cells + 1);
  c.u1.resize(cells + 1);
  c.u2.resize(cells + 1);
  c.states.resize(cells + 1);
  std::array<double, 3> v = {start[3], start[4], start[5]};
  c.grid[0] = a;
  c.states[0] = GroupPoint<double>::from(x1[0], x2[0], v[0], v[1], v[2]);
  for (size_t i = 0; i < cells; ++i) {
    const double d1 = (x1[i + 1] - x1[i]) / h, d2 = (x2[i + 1] - x2[i]) / h;
    const PlanarSample s0{x1[i], x2[i], d1, d2};
    const PlanarSample sh{0.5 * (x1[i] + x1[i + 1]), 0.5 * (x2[i] + x2[i + 1]), d1, d2};
    const PlanarSample s1{x1[i + 1], x2[i + 1], d1, d2};
    detail::lift_rk4_step(s0, sh, s1, h, v);
    c.grid[i + 1] = a + static_cast<double>(i + 1) * h;
    c.u1[i] = d1;
    c.u2[i] = d2;
    c.states[i + 1] = GroupPoint<double>::from(x1[i + 1], x2[i + 1], v[0], v[1], v[2]);
  }
  c.u1[cells] = c.u1[cells - 1];
  c.u2[cells] = c.u2[cells - 1];
  c.residual_bound = h * h;
  return c;
}

/// Max over interior grid points of the lifting-equation defect
///   |x3' + x2' x1| + |x4' - x2' x1^2 / 2| + |x5' - x2' x1 x2|
/// with central-difference derivatives. Zero for exact horizontal data.
inline double horizontality_residual(const std::vector<double>& t,
                                     const std::vector<GroupPoint<double>>& p) {
  if (t.size() != p.size() || t.size() < 3) throw std::invalid_argument("residual: need >= 3 samples");
  double worst = 0;
  for (size_t i = 1; i + 1 < t.size(); ++i) {
    const double dt = t[i + 1] - t[i - 1];
    auto d = [&](int k) { return (p[i + 1][k] - p[i - 1][k]) / dt; };
    const double d2 = d(2), d3 = d(3), d4 = d(4), d5 = d(5);
    const double x1 = p[i][1], x2 = p[i][2];
    const double r = std::fabs(d3 + d2 * x1) + std::fabs(d4 - 0.5 * d2 * x1 * x1) +
                     std::fabs(d5 - d2 * x1 * x2);
    worst = std::max(worst, r);
  }
  return worst;
}

inline double horizontality_residual(const ControlCurve& c) {
  return horizontality_residual(c.grid, c.states);
}

// ---------------------------------------------------------------------------
// Height-change constraints: for a horizontal curve on [s,t],
//   (1) x1' >= 0 a.e.  =>  x5(t)-x5(s) <= x1(t)x2(t)^2/2 - x1(s)x2(s)^2/2
//   (2) x1' <= 0 a.e.  =>  reversed inequality
//   (3) x2' >= 0 a.e.  =>  x4(t)-x4(s) >= 0
//   (4) x2' <= 0 a.e.  =>  x4(t)-x4(s) <= 0.

struct HeightChangeReport {
  std::array<bool, 4> applies{};  // which monotonicity hypotheses hold on [s,t]
  std::array<bool, 4> holds{};    // whether the conclusion held (where it applies)
  bool ok() const {
    for (int i = 0; i < 4; ++i)
      if (applies[static_cast<size_t>(i)] && !holds[static_cast<size_t>(i)]) return false;
    return true;
  }
};

namespace detail {

template <class S>
HeightChangeReport height_change_values(const GroupPoint<S>& p, const GroupPoint<S>& q,
                                        const std::array<bool, 4>& applies, const S& tol) {
  const S half = S(1) / S(2);
  HeightChangeReport r;
  r.applies = applies;
  const S lhs5 = q[5] - p[5];
  const S rhs5 = half * q[1] * q[2] * q[2] - half * p[1] * p[2] * p[2];
  const S d4 = q[4] - p[4];
  r.holds[0] = lhs5 <= rhs5 + tol;
  r.holds[1] = lhs5 >= rhs5 - tol;
  r.holds[2] = d4 >= -tol;
  r.holds[3] = d4 <= tol;
  return r;
}

}  // namespace detail

/// Hypotheses read exactly from segment directions (zero-speed segments are
/// direction-neutral).
template <class S>
HeightChangeReport height_change_check(const SegmentCurve<S>& c, const S& s, const S& t,
                                       const S& tol = S(0)) {
  if (!(s < t)) throw std::invalid_argument("height_change_check: need s < t");
  std::array<bool, 4> applies = {true, true, true, true};
  const auto& times = c.knot_times();
  for (size_t k = 0; k < c.size(); ++k) {
    if (!(times[k] < t && times[k + 1] > s)) continue;  // no overlap with (s,t)
    const auto& seg = c.segments[k];
    if (!(seg.speed > S(0))) continue;
    switch (seg.dir) {
      case Dir::PlusX1: applies[1] = false; break;
      case Dir::MinusX1: applies[0] = false; break;
      case Dir::PlusX2: applies[3] = false; break;
      case Dir::MinusX2: applies[2] = false; break;
    }
  }
  return detail::height_change_values(c.eval(s), c.eval(t), applies, tol);
}

/// Hypotheses read from control signs with a dead-band on sampled data.
inline HeightChangeReport height_change_check(const ControlCurve& c, double s, double t,
                                              double tol = 1e-6, double deadband = 1e-12) {
  if (!(s < t)) throw std::invalid_argument("height_change_check: need s < t");
  const size_t i0 = c.nearest_index(s), i1 = c.nearest_index(t);
  std::array<bool, 4> applies = {true, true, true, true};
  for (size_t i = i0; i <= i1; ++i) {
    if (c.u1[i] < -deadband) applies[0] = false;
    if (c.u1[i] > deadband) applies[1] = false;
    if (c.u2[i] < -deadband) applies[2] = false;
    if (c.u2[i] > deadband) applies[3] = false;
  }
  return detail::height_change_values(c.states[i0], c.states[i1], applies, tol);
}

}  // namespace cartan
