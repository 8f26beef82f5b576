#pragma once

#include <cstdint>
#include <future>
#include <limits>
#include <random>
#include <vector>

#include "cartan/curves.hpp"
#include "cartan/staircase.hpp"

namespace cartan {

/// Budget for the upper-bound optimizer.
struct DistanceBudget {
  int pieces = 16;      // piecewise-constant control count
  int iterations = 3;   // coordinate-descent sweeps per penalty stage
  std::vector<double> penalty = {1e1, 1e2, 1e3, 1e5, 1e7};
  int restarts = 16;
  uint64_t seed = 1;
  double endpoint_tol = 1e-9;

  void validate() const {
    if (pieces < 8) throw std::invalid_argument("budget: pieces >= 8");
    if (iterations < 1 || restarts < 1) throw std::invalid_argument("budget: positive iterations/restarts");
    for (double r : penalty)
      if (!(r > 0)) throw std::invalid_argument("budget: penalties must be positive");
  }
};

/// Horizontal path with piecewise-constant controls. Endpoints are computed
/// by exact flow composition: each piece is a one-parameter subgroup step,
/// so the reported length is the exact length of an explicit horizontal
/// curve regardless of how the controls were found.
struct ControlPath {
  struct Piece {
    double u1, u2, dt;
  };
  GroupPoint<double> start;
  std::vector<Piece> pieces;

  static GroupPoint<double> step(const GroupPoint<double>& p, const Piece& c) {
    AlgebraElement<double> a;
    a[1] = c.u1 * c.dt;
    a[2] = c.u2 * c.dt;
    return mul(p, exp_to_group(a));
  }

  GroupPoint<double> endpoint() const {
    GroupPoint<double> p = start;
    for (const auto& c : pieces) p = step(p, c);
    return p;
  }

  double length() const {
    double s = 0;
    for (const auto& c : pieces) s += c.dt * std::hypot(c.u1, c.u2);
    return s;
  }

  double duration() const {
    double s = 0;
    for (const auto& c : pieces) s += c.dt;
    return s;
  }

  /// Position after time t from the start (pieces traversed in order).
  GroupPoint<double> at(double t) const {
    GroupPoint<double> p = start;
    for (const auto& c : pieces) {
      if (t <= 0) break;
      const double dt = std::min(t, c.dt);
      p = step(p, Piece{c.u1, c.u2, dt});
      t -= c.dt;
    }
    return p;
  }

  static ControlPath from_segments(const SegmentCurve<double>& c) {
    ControlPath out;
    out.start = c.start;
    for (const auto& s : c.segments) {
      const double u = dir_sign(s.dir) * s.speed;
      out.pieces.push_back(dir_axis(s.dir) == 1 ? Piece{u, 0, s.duration} : Piece{0, u, s.duration});
    }
    return out;
  }
};

/// Planar projection lower bound: every horizontal path's length is at least
/// the Euclidean length of its (x1,x2) projection.
inline double cc_lower(const GroupPoint<double>& p, const GroupPoint<double>& q) {
  return std::hypot(p[1] - q[1], p[2] - q[2]);
}

/// Explicit word from p to q: vertical staircases for the corrected x4/x5
/// components, a commutator square for x3, then axis lines for x2 and x1.
/// Reaches q exactly (up to roundoff) at every input.
inline SegmentCurve<double> canonical_connect(const GroupPoint<double>& p,
                                              const GroupPoint<double>& q) {
  const GroupPoint<double> d = mul(inv(p), q);
  const double r = std::sqrt(std::fabs(d[3]));
  const double l3 = (d[3] >= 0 ? r : -r);  // lambda of the commutator square
  const double m3 = r;
  const double u = d[4] + 0.5 * l3 * l3 * m3;
  const double v = d[5] + 0.5 * l3 * m3 * m3;
  SegmentCurve<double> c(p, 0.0);
  if (v != 0) c.append(staircase(std::cbrt(v), VerticalAxis::X5, c.end_point(), c.end_time()));
  if (u != 0) c.append(staircase(std::cbrt(u), VerticalAxis::X4, c.end_point(), c.end_time()));
  if (d[3] != 0) c.append(commutator_word(l3, m3, c.end_point(), c.end_time()));
  if (d[2] != 0) c.push(d[2] > 0 ? Dir::PlusX2 : Dir::MinusX2, std::fabs(d[2]), 1.0);
  if (d[1] != 0) c.push(d[1] > 0 ? Dir::PlusX1 : Dir::MinusX1, std::fabs(d[1]), 1.0);
  return c;
}

struct CCUpperResult {
  double value = std::numeric_limits<double>::infinity();
  bool witnessed = false;
  double endpoint_gap = std::numeric_limits<double>::infinity();
  ControlPath witness;
};

namespace detail {

inline double endpoint_gap(const ControlPath& c, const GroupPoint<double>& q) {
  return euclidean_gap(c.endpoint(), q);
}

// dense 5x5 solve with partial pivoting; used by the Gauss-Newton polish
inline bool solve5(double A[5][5], double b[5], double x[5]) {
  int perm[5] = {0, 1, 2, 3, 4};
  for (int col = 0; col < 5; ++col) {
    int piv = col;
    for (int r = col + 1; r < 5; ++r)
      if (std::fabs(A[perm[r]][col]) > std::fabs(A[perm[piv]][col])) piv = r;
    std::swap(perm[col], perm[piv]);
    const double diag = A[perm[col]][col];
    if (std::fabs(diag) < 1e-300) return false;
    for (int r = col + 1; r < 5; ++r) {
      const double f = A[perm[r]][col] / diag;
      for (int c = col; c < 5; ++c) A[perm[r]][c] -= f * A[perm[col]][c];
      b[perm[r]] -= f * b[perm[col]];
    }
  }
  for (int row = 4; row >= 0; --row) {
    double s = b[perm[row]];
    for (int c = row + 1; c < 5; ++c) s -= A[perm[row]][c] * x[c];
    x[row] = s / A[perm[row]][row];
  }
  return true;
}

// Gauss-Newton steps on the endpoint residual alone (length untouched):
// minimal-norm control updates from the 5 x 2K finite-difference Jacobian.
inline void endpoint_polish(ControlPath& c, const GroupPoint<double>& q, int max_iter = 30) {
  const size_t K = c.pieces.size();
  if (K == 0) return;
  for (int iter = 0; iter < max_iter; ++iter) {
    const GroupPoint<double> e = c.endpoint();
    double resid[5];
    double rn = 0;
    for (int i = 0; i < 5; ++i) {
      resid[i] = q[i + 1] - e[i + 1];
      rn += resid[i] * resid[i];
    }
    if (rn < 1e-26) return;
    const double fd = 1e-7;
    std::vector<std::array<double, 5>> J(2 * K);
    for (size_t k = 0; k < K; ++k) {
      for (int c2 = 0; c2 < 2; ++c2) {
        double& u = c2 == 0 ? c.pieces[k].u1 : c.pieces[k].u2;
        const double keep = u;
        u = keep + fd;
        const GroupPoint<double> ep = c.endpoint();
        u = keep;
        for (int i = 0; i < 5; ++i) J[2 * k + c2][static_cast<size_t>(i)] = (ep[i + 1] - e[i + 1]) / fd;
      }
    }
    // delta = J^T (J J^T + eps I)^{-1} resid
    double M[5][5] = {};
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        double s = 0;
        for (size_t m = 0; m < 2 * K; ++m) s += J[m][static_cast<size_t>(i)] * J[m][static_cast<size_t>(j)];
        M[i][j] = s + (i == j ? 1e-12 : 0);
      }
    double y[5], rhs[5];
    for (int i = 0; i < 5; ++i) rhs[i] = resid[i];
    if (!solve5(M, rhs, y)) return;
    double step_norm = 0;
    for (size_t k = 0; k < K; ++k) {
      double d1 = 0, d2 = 0;
      for (int i = 0; i < 5; ++i) {
        d1 += J[2 * k][static_cast<size_t>(i)] * y[i];
        d2 += J[2 * k + 1][static_cast<size_t>(i)] * y[i];
      }
      c.pieces[k].u1 += d1;
      c.pieces[k].u2 += d2;
      step_norm += d1 * d1 + d2 * d2;
    }
    if (step_norm < 1e-30) return;
  }
}

inline ControlPath resample(const ControlPath& src, const GroupPoint<double>& start, int K) {
  ControlPath out;
  out.start = start;
  const double T = src.duration();
  if (T <= 0 || src.pieces.empty()) {
    out.pieces.assign(static_cast<size_t>(K), ControlPath::Piece{0, 0, 1.0 / K});
    return out;
  }
  const double dt = T / K;
  GroupPoint<double> prev = src.start;
  for (int i = 0; i < K; ++i) {
    const GroupPoint<double> next = src.at((i + 1) * dt);
    const AlgebraElement<double> a = group_to_exp(mul(inv(prev), next));
    out.pieces.push_back(ControlPath::Piece{a[1] / dt, a[2] / dt, dt});
    prev = next;
  }
  return out;
}

struct RestartResult {
  double value = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  ControlPath path;
};

inline RestartResult optimize_restart(const GroupPoint<double>& p, const GroupPoint<double>& q,
                                      const ControlPath& seed, const DistanceBudget& budget,
                                      int restart_index) {
  ControlPath c = resample(seed, p, budget.pieces);
  std::mt19937_64 rng(budget.seed * 0x9e3779b97f4a7c15ull + static_cast<uint64_t>(restart_index));
  if (restart_index > 0) {
    double scale = 0;
    const GroupPoint<double> d = mul(inv(p), q);
    scale = std::fabs(d[1]) + std::fabs(d[2]) + std::sqrt(std::fabs(d[3])) +
            std::cbrt(std::fabs(d[4])) + std::cbrt(std::fabs(d[5])) + 0.05;
    std::normal_distribution<double> noise(0.0, scale);
    const bool pure_random = restart_index % 2 == 0;
    for (auto& piece : c.pieces) {
      if (pure_random) {
        piece.u1 = noise(rng);
        piece.u2 = noise(rng);
      } else {
        piece.u1 += 0.3 * noise(rng);
        piece.u2 += 0.3 * noise(rng);
      }
    }
  }

  auto objective = [&](double rho) {
    const double g = endpoint_gap(c, q);
    return c.length() + rho * g * g;
  };
  for (double rho : budget.penalty) {
    for (int sweep = 0; sweep < budget.iterations; ++sweep) {
      for (size_t k = 0; k < c.pieces.size(); ++k) {
        for (int coord = 0; coord < 2; ++coord) {
          double& u = coord == 0 ? c.pieces[k].u1 : c.pieces[k].u2;
          double step = 0.25 * (1.0 + std::fabs(u));
          double f0 = objective(rho);
          for (int it = 0; it < 12; ++it) {
            const double keep = u;
            u = keep + step;
            const double fp = objective(rho);
            u = keep - step;
            const double fm = objective(rho);
            u = keep;
            if (fp < f0 && fp <= fm) {
              u = keep + step;
              f0 = fp;
            } else if (fm < f0) {
              u = keep - step;
              f0 = fm;
            } else {
              step *= 0.25;
              if (step < 1e-9) break;
            }
          }
        }
      }
    }
  }
  endpoint_polish(c, q);
  double gap = endpoint_gap(c, q);
  if (gap > budget.endpoint_tol) {
    // close the remaining gap with an explicit correction word
    const ControlPath corr = ControlPath::from_segments(canonical_connect(c.endpoint(), q));
    for (const auto& piece : corr.pieces) c.pieces.push_back(piece);
    gap = endpoint_gap(c, q);
  }
  RestartResult r;
  r.value = c.length();
  r.gap = gap;
  r.path = std::move(c);
  return r;
}

}  // namespace detail

/// Witness-backed upper bound for the CC distance. The returned value is the
/// exact length of the returned horizontal path, whose endpoint matches q
/// within budget.endpoint_tol. Deterministic for a fixed budget; extra seed
/// paths (from p to q) are scored alongside the optimizer restarts.
inline CCUpperResult cc_upper(const GroupPoint<double>& p, const GroupPoint<double>& q,
                              const DistanceBudget& budget = {},
                              const std::vector<ControlPath>& extra_seeds = {}) {
  budget.validate();
  CCUpperResult best;

  auto consider = [&](const ControlPath& path) {
    const double gap = detail::endpoint_gap(path, q);
    if (gap > budget.endpoint_tol) return;
    const double value = path.length();
    if (!best.witnessed || value < best.value) {
      best.witnessed = true;
      best.value = value;
      best.endpoint_gap = gap;
      best.witness = path;
    }
  };

  if (euclidean_gap(p, q) == 0) {
    best.witnessed = true;
    best.value = 0;
    best.endpoint_gap = 0;
    best.witness.start = p;
    return best;
  }

  const SegmentCurve<double> canonical = canonical_connect(p, q);
  consider(ControlPath::from_segments(canonical));
  for (const auto& s : extra_seeds) consider(s);

  const ControlPath seed = best.witnessed ? best.witness : ControlPath::from_segments(canonical);

  std::vector<std::future<detail::RestartResult>> jobs;
  jobs.reserve(static_cast<size_t>(budget.restarts));
  for (int r = 0; r < budget.restarts; ++r) {
    jobs.push_back(std::async(std::launch::async, [&, r] {
      return detail::optimize_restart(p, q, seed, budget, r);
    }));
  }
  for (auto& j : jobs) {
    const detail::RestartResult r = j.get();
    if (r.gap <= budget.endpoint_tol && (!best.witnessed || r.value < best.value)) {
      best.witnessed = true;
      best.value = r.value;
      best.endpoint_gap = r.gap;
      best.witness = r.path;
    }
  }
  return best;
}

struct BallBoxReport {
  int pairs = 0;
  double max_eucl_over_dc = 0;    // evidence toward the comparison constant
  double max_dc_over_cbrt = 0;    // evidence toward the upper ball-box constant
};

/// Empirical ball-box ratios over random pairs in a coordinate box around
/// the identity. Deterministic and prefix-monotone for a fixed seed.
inline BallBoxReport ball_box_scan(int samples, const std::array<double, 5>& halfwidth,
                                   const DistanceBudget& budget = {}) {
  BallBoxReport rep;
  std::mt19937_64 rng(budget.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    GroupPoint<double> x, y;
    for (int i = 1; i <= 5; ++i) {
      x[i] = halfwidth[static_cast<size_t>(i - 1)] * unit(rng);
      y[i] = halfwidth[static_cast<size_t>(i - 1)] * unit(rng);
    }
    const double eucl = euclidean_gap(x, y);
    if (eucl == 0) continue;
    const CCUpperResult up = cc_upper(x, y, budget);
    if (!up.witnessed) continue;
    ++rep.pairs;
    rep.max_eucl_over_dc = std::max(rep.max_eucl_over_dc, eucl / std::max(up.value, 1e-300));
    rep.max_dc_over_cbrt = std::max(rep.max_dc_over_cbrt, cc_lower(x, y) / std::cbrt(eucl));
  }
  return rep;
}

}  // namespace cartan
