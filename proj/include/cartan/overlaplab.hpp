#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cartan/limitcurve.hpp"

namespace cartan {

enum class FamilyKind { Lines, TrigControls, SmoothedSegments, Mixed };

/// Family of C1_H candidate curves, generated from continuous controls and
/// lifted, so horizontality holds by construction. A derivative floor forces
/// |u_fc| >= floor on the chosen planar coordinate over the whole domain.
struct C1HFamilySpec {
  FamilyKind kind = FamilyKind::Mixed;
  double coeff_bound = 0.3;
  double floor = 0.5;
  int floor_coord = 1;  // 1 or 2
  int count = 50;
  uint64_t seed = 1;
  size_t lift_cells = 600000;
  double mollify_lo = 3.0e-3, mollify_hi = 3.3e-3;

  void validate() const {
    if (floor < 0 || (floor_coord != 1 && floor_coord != 2))
      throw std::invalid_argument("family: bad floor spec");
    if (count < 1 || lift_cells < 2) throw std::invalid_argument("family: bad count/cells");
    if (!(mollify_lo > 0 && mollify_hi >= mollify_lo))
      throw std::invalid_argument("family: bad mollify widths");
  }
};

struct GeneratedCurve {
  ControlCurve curve;
  std::string label;
  double min_floor_value = 0;  // min |u_fc| over the grid
  double residual = 0;
};

namespace detail {

inline double quintic_step(double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  return x * x * x * (10 + x * (-15 + 6 * x));
}

// C^inf positive part; keeps floor clamping C^1
inline double smooth_plus(double x, double eps = 1e-6) {
  return 0.5 * (x + std::sqrt(x * x + eps * eps));
}

// piecewise-constant control of a segment word, blended over +/- delta
// around each breakpoint
struct MollifiedControls {
  std::vector<double> times;  // breakpoints, size k+1
  std::vector<double> u1, u2; // per-segment values, size k
  double delta;

  double eval(const std::vector<double>& u, double t) const {
    const auto it = std::upper_bound(times.begin() + 1, times.end() - 1, t);
    const size_t k = static_cast<size_t>(it - times.begin()) - 1;  // segment index
    double v = u[k];
    if (k + 1 < u.size() && t > times[k + 1] - delta) {
      const double s = quintic_step((t - (times[k + 1] - delta)) / (2 * delta));
      v = u[k] + (u[k + 1] - u[k]) * s;
    } else if (k > 0 && t < times[k] + delta) {
      const double s = quintic_step((t - (times[k] - delta)) / (2 * delta));
      v = u[k - 1] + (u[k] - u[k - 1]) * s;
    }
    return v;
  }
};

inline MollifiedControls word_controls(const SegmentCurve<double>& word, double delta) {
  MollifiedControls mc;
  mc.delta = delta;
  mc.times = word.knot_times();
  for (const auto& s : word.segments) {
    const double u = dir_sign(s.dir) * s.speed;
    mc.u1.push_back(dir_axis(s.dir) == 1 ? u : 0.0);
    mc.u2.push_back(dir_axis(s.dir) == 2 ? u : 0.0);
  }
  return mc;
}

inline uint64_t splitmix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Member i of the family (deterministic in (spec.seed, i)). Lines evaluate
/// exactly; trig and smoothed members are lifted with fixed-step RK4 on
/// spec.lift_cells cells.
inline GeneratedCurve build_family_member(const C1HFamilySpec& spec, int index, double a, double b,
                                          const SegmentCurve<double>* reference) {
  spec.validate();
  std::mt19937_64 rng(detail::splitmix(spec.seed) ^ detail::splitmix(static_cast<uint64_t>(index) + 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  FamilyKind kind = spec.kind;
  if (kind == FamilyKind::Mixed) {
    if (index <= 1) kind = FamilyKind::Lines;
    else if (index % 3 == 2) kind = FamilyKind::TrigControls;
    else if (index % 3 == 0 && reference != nullptr) kind = FamilyKind::SmoothedSegments;
    else kind = FamilyKind::Lines;
  }
  if (kind == FamilyKind::SmoothedSegments && reference == nullptr)
    throw std::invalid_argument("family: smoothed members need a reference curve");

  const GroupPoint<double> origin = reference ? reference->start : GroupPoint<double>::identity();
  GeneratedCurve out;

  if (kind == FamilyKind::Lines) {
    const int axis = spec.floor_coord;
    double c;
    double t0 = a;
    GroupPoint<double> anchor = origin;
    if (index == 0) {
      c = std::max(1.0, spec.floor);  // the unit-speed axis line
    } else if (index == 1 && reference != nullptr && !reference->segments.empty() &&
               dir_axis(reference->segments.front().dir) == axis) {
      // tangent to the reference's first segment
      const auto& s0 = reference->segments.front();
      c = dir_sign(s0.dir) * std::max(s0.speed, spec.floor);
    } else {
      c = (spec.floor + spec.coeff_bound * unit(rng)) * (unit(rng) < 0.5 ? -1 : 1);
      t0 = a + (b - a) * unit(rng);
      anchor = reference ? reference->eval(std::min(std::max(t0, reference->t0),
                                                    reference->end_time()))
                         : origin;
    }
    ControlCurve cc;
    cc.t0 = a;
    cc.t1 = b;
    const size_t cells = spec.lift_cells;
    const double h = (b - a) / static_cast<double>(cells);
    cc.grid.resize(cells + 1);
    cc.u1.assign(cells + 1, axis == 1 ? c : 0.0);
    cc.u2.assign(cells + 1, axis == 2 ? c : 0.0);
    cc.states.resize(cells + 1);
    for (size_t i = 0; i <= cells; ++i) {
      const double t = a + static_cast<double>(i) * h;
      GroupPoint<double> g;
      g[axis] = c * (t - t0);
      cc.grid[i] = t;
      cc.states[i] = mul(anchor, g);
    }
    cc.residual_bound = 1e-9;
    out.curve = std::move(cc);
    out.label = "line c=" + std::to_string(c) + " x" + std::to_string(axis);
    out.min_floor_value = std::fabs(c);
  } else if (kind == FamilyKind::TrigControls) {
    std::array<double, 3> af{}, bf{}, ao{}, bo{};
    double sum = 0;
    for (int k = 0; k < 3; ++k) {
      af[static_cast<size_t>(k)] = spec.coeff_bound * (2 * unit(rng) - 1);
      bf[static_cast<size_t>(k)] = spec.coeff_bound * (2 * unit(rng) - 1);
      ao[static_cast<size_t>(k)] = spec.coeff_bound * (2 * unit(rng) - 1);
      bo[static_cast<size_t>(k)] = spec.coeff_bound * (2 * unit(rng) - 1);
      sum += std::fabs(af[static_cast<size_t>(k)]) + std::fabs(bf[static_cast<size_t>(k)]);
    }
    const double c0 = spec.floor + sum + 0.01;
    const double sgn = unit(rng) < 0.5 ? -1 : 1;
    const double w = 2 * M_PI / (b - a);
    auto floored = [=](double t) {
      double v = c0;
      for (int k = 0; k < 3; ++k) {
        v += af[static_cast<size_t>(k)] * std::cos(w * (k + 1) * (t - a)) +
             bf[static_cast<size_t>(k)] * std::sin(w * (k + 1) * (t - a));
      }
      return sgn * v;
    };
    auto free_ctrl = [=](double t) {
      double v = 0;
      for (int k = 0; k < 3; ++k) {
        v += ao[static_cast<size_t>(k)] * std::cos(w * (k + 1) * (t - a)) +
             bo[static_cast<size_t>(k)] * std::sin(w * (k + 1) * (t - a));
      }
      return v;
    };
    const auto u1 = spec.floor_coord == 1 ? std::function<double(double)>(floored)
                                          : std::function<double(double)>(free_ctrl);
    const auto u2 = spec.floor_coord == 2 ? std::function<double(double)>(floored)
                                          : std::function<double(double)>(free_ctrl);
    out.curve = lift_controls(u1, u2, a, b, spec.lift_cells, origin);
    out.label = "trig";
    double mn = 1e300;
    const auto& u = spec.floor_coord == 1 ? out.curve.u1 : out.curve.u2;
    for (double v : u) mn = std::min(mn, std::fabs(v));
    out.min_floor_value = mn;
  } else {
    // smoothed reparameterization of the reference word, floor-clamped on
    // the floored coordinate
    const double delta = spec.mollify_lo + (spec.mollify_hi - spec.mollify_lo) * unit(rng);
    double min_seg = 1e300;
    for (const auto& s : reference->segments) min_seg = std::min(min_seg, s.duration);
    const double d = std::min(delta, 0.45 * min_seg);
    const detail::MollifiedControls mc = detail::word_controls(*reference, d);
    // clamp direction: the sign of the floored control on the first segment
    const auto& base = spec.floor_coord == 1 ? mc.u1 : mc.u2;
    double ref_sign = 1;
    for (double v : base) {
      if (std::fabs(v) > 1e-12) {
        ref_sign = v > 0 ? 1 : -1;
        break;
      }
    }
    const double floor = spec.floor;
    const int fc = spec.floor_coord;
    auto u1 = [&mc, floor, fc, ref_sign](double t) {
      double v = mc.eval(mc.u1, t);
      if (fc == 1 && floor > 0) v = ref_sign * (floor + detail::smooth_plus(ref_sign * v - floor));
      return v;
    };
    auto u2 = [&mc, floor, fc, ref_sign](double t) {
      double v = mc.eval(mc.u2, t);
      if (fc == 2 && floor > 0) v = ref_sign * (floor + detail::smooth_plus(ref_sign * v - floor));
      return v;
    };
    out.curve = lift_controls(u1, u2, a, b, spec.lift_cells, origin);
    out.label = "smoothed d=" + std::to_string(d);
    double mn = 1e300;
    const auto& u = spec.floor_coord == 1 ? out.curve.u1 : out.curve.u2;
    for (double v : u) mn = std::min(mn, std::fabs(v));
    out.min_floor_value = mn;
  }

  out.residual = horizontality_residual(out.curve);
  if (out.residual > 1e-6)
    throw std::logic_error("family: generated curve violates the horizontality gate");
  if (spec.floor > 0 && out.min_floor_value < spec.floor - 1e-9)
    throw std::logic_error("family: generated curve violates the derivative floor");
  return out;
}

/// Materialized family (memory scales with count * lift_cells; harnesses
/// stream members instead).
inline std::vector<GeneratedCurve> generate(const C1HFamilySpec& spec, double a, double b,
                                            const SegmentCurve<double>* reference = nullptr) {
  std::vector<GeneratedCurve> out;
  out.reserve(static_cast<size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) out.push_back(build_family_member(spec, i, a, b, reference));
  return out;
}

// ---------------------------------------------------------------------------
// Coincidence measurement: the fraction of midpoint samples where two curves
// are within tau in the Euclidean norm of R^5.

inline double coincidence_measure(const std::vector<GroupPoint<double>>& A,
                                  const std::vector<GroupPoint<double>>& B, double tau) {
  if (A.size() != B.size() || A.empty()) throw std::invalid_argument("coincidence: size mismatch");
  size_t hits = 0;
  for (size_t i = 0; i < A.size(); ++i) {
    if (euclidean_gap(A[i], B[i]) <= tau) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(A.size());
}

inline std::vector<GroupPoint<double>> sample_midpoints(const SegmentCurve<double>& c, double a,
                                                        double b, int grid) {
  std::vector<GroupPoint<double>> out;
  out.reserve(static_cast<size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    const double t = a + (b - a) * (2 * i + 1) / (2.0 * grid);
    out.push_back(c.eval(t));
  }
  return out;
}

/// Extracts the states at measure-cell midpoints; the lift grid must refine
/// the midpoint grid (cells divisible by 2*grid).
inline std::vector<GroupPoint<double>> midpoint_states(const ControlCurve& c, int grid) {
  const size_t cells = c.cells();
  if (grid < 1 || cells % (2 * static_cast<size_t>(grid)) != 0)
    throw std::invalid_argument("midpoint_states: lift cells must be a multiple of 2*grid");
  const size_t stride = cells / static_cast<size_t>(grid);
  std::vector<GroupPoint<double>> out;
  out.reserve(static_cast<size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    out.push_back(c.states[static_cast<size_t>(i) * stride + stride / 2]);
  }
  return out;
}

inline std::vector<GroupPoint<double>> sample_midpoints_gamma(const GammaEvaluator& ev, int level,
                                                              int grid) {
  std::vector<GroupPoint<double>> out;
  out.reserve(static_cast<size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    out.push_back(to_double_point(ev.eval(level, Rat(2 * i + 1, 2l * grid))));
  }
  return out;
}

// ---------------------------------------------------------------------------

struct HarnessRow {
  int id = 0;
  std::string label;
  double coincidence = 0;
  double min_floor = 0;
  double residual = 0;
};

struct BadIntersectReport {
  double threshold = 0;  // (4/5) L + slack
  double max_coincidence = 0;
  int argmax = -1;
  bool pass = false;
  std::vector<HarnessRow> rows;
};

/// Overlap harness against a modification curve: every generated curve with
/// the derivative floor must tau-coincide with the overpass on at most
/// (4/5)(b-a) plus the measurement slack. The overpass itself plays the role
/// of the nearby horizontal curve (distance 0 satisfies the closeness
/// hypothesis).
inline BadIntersectReport badintersect_harness(const ModificationSpec<Rat>& mspec,
                                               const C1HFamilySpec& family, double tau = 1e-8,
                                               int grid = 100000) {
  mspec.validate();
  family.validate();
  if (family.floor < 0.5) throw std::invalid_argument("badintersect: family floor must be >= 1/2");
  const SegmentCurve<double> rho = to_double_curve(build(mspec));
  const double a = to_double(mspec.a), b = to_double(mspec.b);
  const auto rho_samples = sample_midpoints(rho, a, b, grid);

  BadIntersectReport rep;
  rep.threshold = 0.8 * (b - a) + 0.02 * (b - a);
  for (int i = 0; i < family.count; ++i) {
    GeneratedCurve g = build_family_member(family, i, a, b, &rho);
    HarnessRow row;
    row.id = i;
    row.label = g.label;
    row.min_floor = g.min_floor_value;
    row.residual = g.residual;
    row.coincidence = coincidence_measure(midpoint_states(g.curve, grid), rho_samples, tau);
    if (row.coincidence > rep.max_coincidence) {
      rep.max_coincidence = row.coincidence;
      rep.argmax = i;
    }
    rep.rows.push_back(std::move(row));
  }
  rep.pass = rep.max_coincidence <= rep.threshold;
  return rep;
}

struct LusinRow {
  int level = 0;
  double max_coincidence = 0;
  double mean_coincidence = 0;
  int argmax = -1;
};

struct LusinReport {
  std::vector<LusinRow> rows;
  bool monotone = false;  // per-level maxima non-increasing in the level
};

/// Desk-scale trend of the vanishing-coincidence theorem: a fixed family
/// measured against gamma_n for n = 1..max_level. The per-level maxima must
/// not increase with n.
inline LusinReport lusin_experiment(const C1HFamilySpec& family, double tau = 1e-8, int grid = 10000,
                                    int max_level = 3, long kappa = 1) {
  family.validate();
  GammaEvaluator ev(kappa);
  const SegmentCurve<double> reference = to_double_curve(ev.materialize(2));

  std::vector<std::vector<GroupPoint<double>>> gamma;
  for (int n = 1; n <= max_level; ++n) gamma.push_back(sample_midpoints_gamma(ev, n, grid));

  LusinReport rep;
  rep.rows.resize(static_cast<size_t>(max_level));
  for (int n = 0; n < max_level; ++n) rep.rows[static_cast<size_t>(n)].level = n + 1;

  for (int i = 0; i < family.count; ++i) {
    const GeneratedCurve g = build_family_member(family, i, 0.0, 1.0, &reference);
    const auto samples = midpoint_states(g.curve, grid);
    for (int n = 0; n < max_level; ++n) {
      const double c = coincidence_measure(samples, gamma[static_cast<size_t>(n)], tau);
      auto& row = rep.rows[static_cast<size_t>(n)];
      row.mean_coincidence += c / family.count;
      if (c > row.max_coincidence) {
        row.max_coincidence = c;
        row.argmax = i;
      }
    }
  }
  rep.monotone = true;
  for (size_t n = 1; n < rep.rows.size(); ++n) {
    if (rep.rows[n].max_coincidence > rep.rows[n - 1].max_coincidence) rep.monotone = false;
  }
  return rep;
}

}  // namespace cartan
