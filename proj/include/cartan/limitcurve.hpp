#pragma once

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "cartan/modification.hpp"

namespace cartan {

/// Per-level data of the inductive construction:
///   lambda_1 = 1,  lambda_{n+1} = (1 + 2/(3*5^n)) lambda_n  (< 3/2 always)
///   N_1 = 1,       N_{n+1} = 80 kappa (3*5^n + 2) (24*5^n N_n)^3.
/// kappa is the Euclidean-vs-CC comparison constant, an assumption surfaced
/// as a parameter (default 1), never a verified value.
struct LevelParams {
  int n = 1;
  long kappa = 1;
  Rat lambda = Rat(1);
  BigInt N = 1;
};

inline BigInt pow5(int n) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 5, static_cast<unsigned long>(n));
  return p;
}

/// Exact level sequence 1..n_max. Asserts lambda_n < 3/2 and the step bound
///   N_{n+1}^{-1} <= (1/(10 kappa)) (lambda_n / (24*5^n N_n))^3
/// at every step.
inline std::vector<LevelParams> level_sequence(int n_max, long kappa = 1) {
  if (n_max < 1 || kappa < 1) throw std::invalid_argument("level_sequence: need n >= 1, kappa >= 1");
  std::vector<LevelParams> out;
  out.push_back(LevelParams{1, kappa, Rat(1), BigInt(1)});
  for (int n = 1; n < n_max; ++n) {
    const LevelParams& cur = out.back();
    const BigInt p5 = pow5(n);
    LevelParams next;
    next.n = n + 1;
    next.kappa = kappa;
    next.lambda = (Rat(1) + Rat(2) / (Rat(3) * Rat(p5))) * cur.lambda;
    const BigInt inner = 24 * p5 * cur.N;
    next.N = 80 * kappa * (3 * p5 + 2) * inner * inner * inner;
    if (!(next.lambda < Rat(3, 2))) throw std::logic_error("level_sequence: lambda bound violated");
    const Rat ratio = cur.lambda / Rat(inner);
    if (!(Rat(1) / Rat(next.N) <= ratio * ratio * ratio / Rat(10 * kappa)))
      throw std::logic_error("level_sequence: N step bound violated");
    out.push_back(std::move(next));
  }
  return out;
}

inline LevelParams level_params(int n, long kappa = 1) { return level_sequence(n, kappa).back(); }

/// lambda_n alone. N_n triples its digit count per level, so the full
/// sequence is only computable for small n; the speeds are cheap at any
/// depth and stay in [1, 3/2).
inline Rat lambda_n(int n) {
  if (n < 1) throw std::invalid_argument("lambda_n: need n >= 1");
  Rat lam(1);
  for (int k = 1; k < n; ++k) {
    lam = (Rat(1) + Rat(2) / (Rat(3) * Rat(pow5(k)))) * lam;
    if (!(lam < Rat(3, 2))) throw std::logic_error("lambda_n: bound violated");
  }
  return lam;
}

/// Address of the partition interval J_j^n = [(j-1)/N_n, j/N_n].
struct CurveAddress {
  int level = 1;
  BigInt j = 1;
};

inline std::pair<Rat, Rat> address_interval(const CurveAddress& a, const LevelParams& lp) {
  if (a.level != lp.n) throw std::invalid_argument("address_interval: level mismatch");
  if (a.j < 1 || a.j > lp.N) throw std::out_of_range("address_interval: index out of range");
  return {Rat(BigInt(a.j - 1), lp.N), Rat(a.j, lp.N)};
}

struct GapBoundReport {
  Rat bound;                 // 2 / (N_n 5^n)
  Rat witness_length;        // exact length of the connecting path
  bool witness_ok = false;   // endpoints exact and length <= bound
  bool planar_ok = false;    // planar projection gap <= bound, exact
  double eucl_gap = 0;       // |gamma_n(t) - gamma_{n+1}(t)| in R^5
  double frame_norm_bound = 0;
  bool eucl_ok = false;      // eucl_gap <= frame_norm_bound * witness_length
  SegmentCurve<Rat> witness;  // from gamma_n(t) to gamma_{n+1}(t)
  bool ok() const { return witness_ok && planar_ok && eucl_ok; }
};

struct DerivativeProbeReport {
  Dir dir = Dir::PlusX1;
  Rat lambda;
  GroupPoint<Rat> point;
  std::array<Rat, 5> quotient{};  // exact central difference quotient
  std::array<Rat, 5> expected{};  // lambda_n V(gamma_n(t))
  double max_err_first_two = 0;
  double max_err_all = 0;
};

/// Lazy evaluator for the curves gamma_n. Evaluation never materializes more
/// than one modification curve per level; left-endpoint values are memoized.
/// Results are identical with the cache on or off; the memo table is guarded
/// for concurrent use.
class GammaEvaluator {
 public:
  explicit GammaEvaluator(long kappa = 1, bool memoize = true)
      : kappa_(kappa), memoize_(memoize), levels_(level_sequence(1, kappa)) {}

  long kappa() const { return kappa_; }

  LevelParams params(int n) const {
    std::lock_guard<std::mutex> lock(mu_);
    return params_locked(n);
  }

  std::pair<Rat, Rat> interval(const CurveAddress& a) const {
    return address_interval(a, params(a.level));
  }

  /// Containing cell one level up; refinement is exact since N_{n+1}/N_n is
  /// an integer.
  CurveAddress parent(const CurveAddress& a) const {
    if (a.level < 2) throw std::invalid_argument("parent: level-1 cells have no parent");
    const BigInt r = params(a.level).N / params(a.level - 1).N;
    return CurveAddress{a.level - 1, (a.j - 1) / r + 1};
  }

  Dir direction(const CurveAddress& a) const { return direction(a.level, a.j); }

  /// Direction of gamma_n restricted to J_j^n, resolved down to staircase
  /// letters inside overpass phases.
  Dir direction(int level, const BigInt& j) const {
    if (level < 1) throw std::invalid_argument("direction: level >= 1");
    if (level == 1) {
      if (j != 1) throw std::out_of_range("direction: level-1 index must be 1");
      return Dir::PlusX1;
    }
    const LevelParams prev = params(level - 1);
    const LevelParams cur = params(level);
    if (j < 1 || j > cur.N) throw std::out_of_range("direction: index out of range");
    const BigInt r = cur.N / prev.N;
    const BigInt j0 = (j - 1) / r + 1;
    const BigInt off = j - (j0 - 1) * r;  // 1..r
    const Dir parent = direction(level - 1, j0);
    const BigInt q5 = pow5(level - 1);
    const BigInt slots = 8 * (3 * q5 + 2);
    const BigInt per = r / slots;
    const BigInt slot = (off - 1) / per;
    return overpass_slot_dir(variant_for_direction(parent), q5, slot);
  }

  /// gamma_n(t), exact. t must be a rational in [0,1].
  GroupPoint<Rat> eval(int n, const Rat& t) const {
    if (t < Rat(0) || t > Rat(1)) throw std::domain_error("eval: t outside [0,1]");
    if (n == 1) return GroupPoint<Rat>::from(t, Rat(0), Rat(0), Rat(0), Rat(0));
    const LevelParams prev = params(n - 1);
    BigInt j0 = rat_floor(t * Rat(prev.N)) + 1;
    if (j0 > prev.N) j0 = prev.N;
    const auto [base, spec] = cell_context(n - 1, j0, prev);
    const SegmentCurve<Rat> rho = build(spec);
    return mul(base, rho.eval(t));
  }

  /// gamma_n at the left endpoint of J_j^n (memoized).
  GroupPoint<Rat> left_value(int level, const BigInt& j) const {
    if (memoize_) {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = memo_.find({level, j});
      if (it != memo_.end()) return it->second;
    }
    const LevelParams lp = params(level);
    const GroupPoint<Rat> val = eval(level, Rat(j - 1, lp.N));
    if (memoize_) {
      std::lock_guard<std::mutex> lock(mu_);
      memo_.emplace(std::make_pair(level, j), val);
    }
    return val;
  }

  /// Exact check of the convergence gap d_c(gamma_n(t), gamma_{n+1}(t)) <=
  /// 2 N_n^{-1} 5^{-n}: builds the explicit connecting path, verifies its
  /// length against the bound, and converts it to a Euclidean bound through
  /// the frame norm along the path.
  GapBoundReport gap_bound_check(int n, const Rat& t) const {
    const LevelParams lp = params(n);
    BigInt j = rat_floor(t * Rat(lp.N)) + 1;
    if (j > lp.N) j = lp.N;
    const auto [base, spec] = cell_context(n, j, lp);
    const DeviationReport dev = deviation_check(spec, t);

    GapBoundReport r;
    r.bound = Rat(2) / Rat(BigInt(lp.N * pow5(n)));
    r.witness = dev.witness.left_translate(base);
    r.witness_length = dev.witness_length;

    const GroupPoint<Rat> pn = eval(n, t);
    const GroupPoint<Rat> pn1 = eval(n + 1, t);
    r.witness_ok = dev.witness_ok && r.witness.start == pn && r.witness.end_point() == pn1 &&
                   r.witness_length <= r.bound;

    const Rat d1 = pn1[1] - pn[1], d2 = pn1[2] - pn[2];
    r.planar_ok = d1 * d1 + d2 * d2 <= r.bound * r.bound;

    double g2 = 0;
    for (int i = 1; i <= 5; ++i) {
      const double d = to_double(pn1[i] - pn[i]);
      g2 += d * d;
    }
    r.eucl_gap = std::sqrt(g2);
    double fmax = 1.0;
    for (const auto& k : r.witness.knots()) {
      const double x1 = to_double(k[1]), x2 = to_double(k[2]);
      const double n2 = 1 + x1 * x1 + 0.25 * x1 * x1 * x1 * x1 + x1 * x1 * x2 * x2;
      fmax = std::max(fmax, std::sqrt(n2));
    }
    r.frame_norm_bound = fmax;
    r.eucl_ok = r.eucl_gap <= fmax * to_double(r.witness_length) * (1 + 1e-9) + 1e-300;
    return r;
  }

  /// Central-difference velocity of gamma_n at t (must be further than 4h
  /// from every segment junction of gamma_n). On a segment the coordinates
  /// are polynomials of degree <= 2, so the quotient is exact.
  DerivativeProbeReport derivative_probe(int n, const Rat& t, const Rat& h) const {
    if (!(h > Rat(0))) throw std::invalid_argument("derivative_probe: h > 0");
    Dir d = Dir::PlusX1;
    if (n == 1) {
      if (!(t > Rat(4) * h && Rat(1) - t > Rat(4) * h))
        throw std::domain_error("derivative_probe: t too close to a junction for this h");
    } else {
      // junctions of gamma_n are the word breakpoints of the modification on
      // the level-(n-1) cell containing t
      const LevelParams prev = params(n - 1);
      BigInt j0 = rat_floor(t * Rat(prev.N)) + 1;
      if (j0 > prev.N) j0 = prev.N;
      const auto [base, spec] = cell_context(n - 1, j0, prev);
      const SegmentCurve<Rat> rho = build(spec);
      const size_t k = rho.segment_index(t);
      const auto& times = rho.knot_times();
      if (!(t - times[k] > Rat(4) * h && times[k + 1] - t > Rat(4) * h))
        throw std::domain_error("derivative_probe: t too close to a junction for this h");
      d = rho.segments[k].dir;
    }

    const LevelParams lp = params(n);
    DerivativeProbeReport r;
    r.dir = d;
    r.lambda = lp.lambda;
    r.point = eval(n, t);
    const GroupPoint<Rat> fwd = eval(n, t + h);
    const GroupPoint<Rat> bwd = eval(n, t - h);
    const Frame<Rat> f = frame(r.point);
    const Rat scale = Rat(dir_sign(d)) * lp.lambda;
    for (int i = 0; i < 5; ++i) {
      r.quotient[static_cast<size_t>(i)] = (fwd[i + 1] - bwd[i + 1]) / (Rat(2) * h);
      r.expected[static_cast<size_t>(i)] =
          scale * f[dir_axis(d)][static_cast<size_t>(i)];
      const double e =
          std::fabs(to_double(r.quotient[static_cast<size_t>(i)] - r.expected[static_cast<size_t>(i)]));
      r.max_err_all = std::max(r.max_err_all, e);
      if (i < 2) r.max_err_first_two = std::max(r.max_err_first_two, e);
    }
    return r;
  }

  /// Upper bound for 2 sum_{k>=n} N_k^{-1} 5^{-k} (eq. of uniform
  /// convergence): partial sum plus a geometric remainder bound.
  Rat uniform_tail_bound(int n, int terms = 3) const {
    Rat sum(0);
    int m = n;
    for (int k = n; k < n + terms; ++k) {
      const LevelParams lp = params(k);
      sum += Rat(1) / Rat(BigInt(lp.N * pow5(k)));
      m = k;
    }
    const LevelParams lpm = params(m);
    sum += Rat(1) / Rat(BigInt(lpm.N * pow5(m) * 4));
    return Rat(2) * sum;
  }

  /// gamma_n as an explicit segment word; capped at level 2 (level-3 words
  /// already exceed 10^10 segments).
  SegmentCurve<Rat> materialize(int n) const {
    if (n == 1) {
      SegmentCurve<Rat> c(GroupPoint<Rat>::identity(), Rat(0));
      c.push(Dir::PlusX1, Rat(1), Rat(1));
      return c;
    }
    if (n == 2) {
      return build(ModificationSpec<Rat>{Rat(0), Rat(1), Rat(1), 5, Variant::AlphaPlus});
    }
    throw std::invalid_argument("materialize: only levels 1 and 2 are materialized");
  }

  /// Spacing of the grid containing every segment junction of gamma_n.
  Rat junction_spacing(int n) const {
    if (n == 1) return Rat(1);
    const LevelParams prev = params(n - 1);
    const BigInt q5 = pow5(n - 1);
    return Rat(BigInt(1), prev.N * 8 * (3 * q5 + 2));
  }

  size_t memo_size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.size();
  }

 private:
  // cell data for gamma_{level} on J_j^{level}: base point and the
  // modification spec generating gamma_{level+1} there
  std::pair<GroupPoint<Rat>, ModificationSpec<Rat>> cell_context(int level, const BigInt& j,
                                                                 const LevelParams& lp) const {
    const Rat a(j - 1, lp.N);
    const Rat b(j, lp.N);
    const GroupPoint<Rat> base = left_value(level, j);
    const Dir v = direction(level, j);
    const BigInt q5 = pow5(level);
    if (!q5.fits_slong_p()) throw std::domain_error("eval: level too deep for overpass phase count");
    ModificationSpec<Rat> spec{a, b, lp.lambda, q5.get_si(), variant_for_direction(v)};
    return {base, spec};
  }

  LevelParams params_locked(int n) const {
    if (n < 1) throw std::invalid_argument("params: level >= 1");
    while (static_cast<int>(levels_.size()) < n) {
      std::vector<LevelParams> grown = level_sequence(static_cast<int>(levels_.size()) + 1, kappa_);
      levels_ = std::move(grown);
    }
    return levels_[static_cast<size_t>(n - 1)];
  }

  long kappa_;
  bool memoize_;
  mutable std::mutex mu_;
  mutable std::vector<LevelParams> levels_;
  mutable std::map<std::pair<int, BigInt>, GroupPoint<Rat>> memo_;
};

}  // namespace cartan
