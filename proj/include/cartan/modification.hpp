#pragma once

#include <string>

#include "cartan/staircase.hpp"

namespace cartan {

enum class Variant { AlphaPlus, AlphaMinus, BetaPlus, BetaMinus };

inline bool variant_is_alpha(Variant v) { return v == Variant::AlphaPlus || v == Variant::AlphaMinus; }
inline bool variant_is_plus(Variant v) { return v == Variant::AlphaPlus || v == Variant::BetaPlus; }
inline std::string variant_str(Variant v) {
  switch (v) {
    case Variant::AlphaPlus: return "alpha+";
    case Variant::AlphaMinus: return "alpha-";
    case Variant::BetaPlus: return "beta+";
    case Variant::BetaMinus: return "beta-";
  }
  throw std::logic_error("bad Variant");
}
inline Variant variant_parse(const std::string& s) {
  if (s == "alpha+") return Variant::AlphaPlus;
  if (s == "alpha-") return Variant::AlphaMinus;
  if (s == "beta+") return Variant::BetaPlus;
  if (s == "beta-") return Variant::BetaMinus;
  throw std::invalid_argument("bad variant: '" + s + "'");
}

/// For the inductive construction: the modification variant replacing a
/// horizontal segment of direction V.
inline Variant variant_for_direction(Dir v) {
  switch (v) {
    case Dir::PlusX1: return Variant::AlphaPlus;
    case Dir::MinusX1: return Variant::AlphaMinus;
    case Dir::PlusX2: return Variant::BetaPlus;
    case Dir::MinusX2: return Variant::BetaMinus;
  }
  throw std::logic_error("bad Dir");
}

/// Parameters of the overpass modification on [a,b]: speed lambda of the
/// segment being modified, phase count Q. Derived quantities:
///   lambda' = (1 + 2/(3Q)) lambda   (speed after modification, < 17/10)
///   mu      = lambda (b-a) / (24 Q) (staircase parameter; overpass height mu^3)
template <class S>
struct ModificationSpec {
  S a{}, b{};
  S lambda{};
  long Q = 5;
  Variant variant = Variant::AlphaPlus;

  S L() const { return b - a; }
  S lambda_prime() const { return (S(1) + S(2) / (S(3) * S(Q))) * lambda; }
  S mu() const { return lambda * L() / (S(24) * S(Q)); }

  void validate() const {
    if (!(b - a > S(0)) || !(b - a <= S(1))) throw std::invalid_argument("modification: need 0 < b-a <= 1");
    if (!(lambda >= S(1)) || !(lambda < S(3) / S(2)))
      throw std::invalid_argument("modification: need 1 <= lambda < 3/2");
    if (Q < 5) throw std::invalid_argument("modification: need Q >= 5");
    if (!(lambda_prime() < S(17) / S(10))) throw std::logic_error("modification: lambda' bound violated");
  }
};

/// The overpass curve on [a,b] from the origin, as a 19-segment word:
/// straight phase (Q intervals), staircase up (8 letters), straight phase,
/// staircase down, straight phase. Every segment has speed lambda'.
template <class S>
SegmentCurve<S> build(const ModificationSpec<S>& spec) {
  spec.validate();
  const S L = spec.L();
  const S h = L / S(3 * spec.Q + 2);
  const S letter = h / S(8);
  const S lp = spec.lambda_prime();
  const S mu = spec.mu();
  const int axis = variant_is_alpha(spec.variant) ? 1 : 2;
  // alpha raises x5 by mu^3 (staircase parameter mu), beta lowers x4 by mu^3
  // (staircase parameter -mu).
  const VerticalAxis vax = variant_is_alpha(spec.variant) ? VerticalAxis::X5 : VerticalAxis::X4;
  const int stair_sign = variant_is_alpha(spec.variant) ? 1 : -1;

  const Dir straight = dir_from_axis(axis, 1);
  std::array<Dir, 8> up{}, down{};
  {
    const auto word = staircase_word(vax);
    for (size_t i = 0; i < 8; ++i) up[i] = stair_sign > 0 ? word[i] : dir_negate(word[i]);
    for (size_t i = 0; i < 8; ++i) down[i] = dir_negate(up[7 - i]);
  }

  SegmentCurve<S> plus(GroupPoint<S>::identity(), spec.a);
  plus.push(straight, lp, S(spec.Q) * h);
  for (Dir d : up) plus.push(d, lp, letter);
  plus.push(straight, lp, S(spec.Q) * h);
  for (Dir d : down) plus.push(d, lp, letter);
  plus.push(straight, lp, S(spec.Q) * h);

  if (variant_is_plus(spec.variant)) return plus;
  // alpha-(t) = (-lambda L, 0,...) * alpha+(a+b-t): the reverse-negated word
  // from the origin (and likewise beta-).
  SegmentCurve<S> minus(GroupPoint<S>::identity(), spec.a);
  for (auto it = plus.segments.rbegin(); it != plus.segments.rend(); ++it) {
    minus.push(dir_negate(it->dir), it->speed, it->duration);
  }
  return minus;
}

/// Direction of the overpass word on slot k of the 8(3Q+2)-slot grid (one
/// staircase letter per slot; straight phases span 8Q slots each). Mirrors
/// build(); Q and the slot index may exceed machine integers.
inline Dir overpass_slot_dir(Variant v, const BigInt& Q, const BigInt& slot) {
  const BigInt total = 24 * Q + 16;
  if (slot < 0 || slot >= total) throw std::out_of_range("overpass_slot_dir: slot out of range");
  if (!variant_is_plus(v)) {
    const Variant pv = variant_is_alpha(v) ? Variant::AlphaPlus : Variant::BetaPlus;
    return dir_negate(overpass_slot_dir(pv, Q, total - 1 - slot));
  }
  const int axis = variant_is_alpha(v) ? 1 : 2;
  const VerticalAxis vax = variant_is_alpha(v) ? VerticalAxis::X5 : VerticalAxis::X4;
  const int stair_sign = variant_is_alpha(v) ? 1 : -1;
  const BigInt q8 = 8 * Q;
  auto letter = [&](long k) {
    const Dir d = staircase_word(vax)[static_cast<size_t>(k)];
    return stair_sign > 0 ? d : dir_negate(d);
  };
  if (slot < q8) return dir_from_axis(axis, 1);
  if (slot < q8 + 8) return letter(BigInt(slot - q8).get_si());
  if (slot < 2 * q8 + 8) return dir_from_axis(axis, 1);
  if (slot < 2 * q8 + 16) {
    const long k = BigInt(slot - 2 * q8 - 8).get_si();
    return dir_negate(letter(7 - k));
  }
  return dir_from_axis(axis, 1);
}

// ---------------------------------------------------------------------------

struct StructureReport {
  bool ok = false;
  long intervals_checked = 0;
  bool endpoints_ok = false;
  bool phases_ok = false;
  std::string error;
};

/// Exact check of the partition structure: on each of the N equal
/// subintervals the curve is a single horizontal lambda'-segment, and away
/// from the two staircase intervals it is a +/- lambda' segment along the
/// variant's axis. N must be a positive multiple of 8(3Q+2).
template <class S>
StructureReport verify_structure(const ModificationSpec<S>& spec, long N) {
  spec.validate();
  const long base = 8 * (3 * spec.Q + 2);
  if (N <= 0 || N % base != 0) throw std::invalid_argument("verify_structure: N must be a positive multiple of 8(3Q+2)");
  const SegmentCurve<S> c = build(spec);
  const S lp = spec.lambda_prime();
  const S L = spec.L();
  StructureReport r;

  const auto& times = c.knot_times();
  for (long j = 1; j <= N; ++j) {
    const S s = spec.a + S(j - 1) * L / S(N);
    const S t = spec.a + S(j) * L / S(N);
    const S mid = s + (t - s) / S(2);
    const size_t k = c.segment_index(mid);
    if (!(times[k] <= s && t <= times[k + 1])) {
      r.error = "subinterval " + std::to_string(j) + " crosses a segment boundary";
      return r;
    }
    if (!(c.segments[k].speed == lp)) {
      r.error = "subinterval " + std::to_string(j) + " has speed != lambda'";
      return r;
    }
    ++r.intervals_checked;
  }

  // Straight phases: every I_i with i not in {Q+1, 2Q+2} is a single
  // +/- lambda' segment along the variant's axis.
  const S h = L / S(3 * spec.Q + 2);
  const int axis = variant_is_alpha(spec.variant) ? 1 : 2;
  const Dir expect = dir_from_axis(axis, variant_is_plus(spec.variant) ? 1 : -1);
  r.phases_ok = true;
  for (long i = 1; i <= 3 * spec.Q + 2; ++i) {
    if (i == spec.Q + 1 || i == 2 * spec.Q + 2) continue;
    const S s = spec.a + S(i - 1) * h;
    const S t = spec.a + S(i) * h;
    const S mid = s + (t - s) / S(2);
    const size_t k = c.segment_index(mid);
    const bool covered = times[k] <= s && t <= times[k + 1];
    if (!covered || c.segments[k].dir != expect || !(c.segments[k].speed == lp)) {
      r.phases_ok = false;
      r.error = "phase interval " + std::to_string(i) + " is not a straight segment";
      return r;
    }
  }

  const S target = variant_is_alpha(spec.variant) ? spec.lambda * L : S(0);
  GroupPoint<S> want;
  want[axis] = (variant_is_plus(spec.variant) ? S(1) : S(-1)) * spec.lambda * L;
  (void)target;
  r.endpoints_ok = (c.start == GroupPoint<S>::identity()) && (c.end_point() == want);
  r.ok = r.endpoints_ok && r.phases_ok && r.intervals_checked == N;
  if (!r.ok && r.error.empty()) r.error = "endpoint mismatch";
  return r;
}

// ---------------------------------------------------------------------------

/// Exact connecting path between the unmodified segment point
/// exp(+/- lambda (t-a) X_axis) and the overpass point rho(t), assembled from
/// an axis line plus (depending on the phase) a vertical staircase or a piece
/// of the overpass word itself. Its length realizes the proof's 2L/Q bound.
struct DeviationReport {
  int phase = 0;  // 1..5 in the plus-variant frame
  SegmentCurve<Rat> witness;
  Rat witness_length;
  Rat bound;           // 2L/Q
  bool witness_ok = false;   // witness_length <= bound, endpoints exact
  bool iqest_ok = false;     // phase-wise proof inequalities, zero tolerance
  Rat total_length;    // lambda' L
  bool compact_ok = false;   // lambda' L < 17/10
  bool ok() const { return witness_ok && iqest_ok && compact_ok; }
};

namespace detail {

inline int phase_of(const Rat& s, const Rat& h, long Q) {
  if (s <= Rat(Q) * h) return 1;
  if (s <= Rat(Q + 1) * h) return 2;
  if (s <= Rat(2 * Q + 1) * h) return 3;
  if (s <= Rat(2 * Q + 2) * h) return 4;
  return 5;
}

/// Single axis segment from the curve's endpoint toward q (which must differ
/// only in coordinate `axis`), parameterized over unit time. Returns |delta|.
inline Rat push_axis_line(SegmentCurve<Rat>& w, const GroupPoint<Rat>& q, int axis) {
  const Rat d = q[axis] - w.end_point()[axis];
  if (d == 0) return Rat(0);
  w.push(dir_from_axis(axis, d > 0 ? 1 : -1), rat_abs(d), Rat(1));
  return rat_abs(d);
}

}  // namespace detail

template <class S>
DeviationReport deviation_check(const ModificationSpec<S>& spec, const Rat& t);

inline DeviationReport deviation_check(const ModificationSpec<Rat>& spec, const Rat& t) {
  spec.validate();
  if (t < spec.a || t > spec.b) throw std::domain_error("deviation_check: t outside [a,b]");

  if (!variant_is_plus(spec.variant)) {
    // Minus variants reduce to the plus case at the reflected time: both the
    // segment point and the curve point are the (-lambda L) translates of
    // their plus counterparts at a+b-t.
    ModificationSpec<Rat> pspec = spec;
    pspec.variant = variant_is_alpha(spec.variant) ? Variant::AlphaPlus : Variant::BetaPlus;
    DeviationReport r = deviation_check(pspec, spec.a + spec.b - t);
    const int axis = variant_is_alpha(spec.variant) ? 1 : 2;
    GroupPoint<Rat> g;
    g[axis] = -spec.lambda * spec.L();
    r.witness = r.witness.left_translate(g);
    return r;
  }

  const Rat L = spec.L();
  const Rat h = L / Rat(3 * spec.Q + 2);
  const Rat s = t - spec.a;
  const Rat lam = spec.lambda;
  const Rat lp = spec.lambda_prime();
  const Rat mu = spec.mu();
  const Rat Q(spec.Q);
  const int axis = variant_is_alpha(spec.variant) ? 1 : 2;

  const SegmentCurve<Rat> rho = build(spec);
  const GroupPoint<Rat> target = exp_dir(dir_from_axis(axis, 1), lam * s);
  const GroupPoint<Rat> at = rho.eval(t);

  DeviationReport r;
  r.phase = detail::phase_of(s, h, spec.Q);
  r.bound = Rat(2) * L / Q;
  r.total_length = lp * L;
  r.compact_ok = r.total_length < Rat(17) / Rat(10);

  SegmentCurve<Rat> w(target, Rat(0));
  Rat line_len(0);
  switch (r.phase) {
    case 1:
    case 5: {
      line_len = detail::push_axis_line(w, at, axis);
      break;
    }
    case 2: {
      GroupPoint<Rat> anchor;
      anchor[axis] = lam * L / Rat(3);
      line_len = detail::push_axis_line(w, anchor, axis);
      w.append(rho.restrict(spec.a + Q * h, t));
      break;
    }
    case 3: {
      GroupPoint<Rat> below = at;
      below[4] = Rat(0);
      below[5] = Rat(0);
      line_len = detail::push_axis_line(w, below, axis);
      if (variant_is_alpha(spec.variant)) {
        w.append(staircase(mu, VerticalAxis::X5, below, w.end_time()));
      } else {
        w.append(staircase(-mu, VerticalAxis::X4, below, w.end_time()));
      }
      break;
    }
    case 4: {
      GroupPoint<Rat> anchor;
      anchor[axis] = Rat(2) * lam * L / Rat(3);
      line_len = detail::push_axis_line(w, anchor, axis);
      w.append(rho.restrict(t, spec.a + (Rat(2) * Q + Rat(2)) * h).reversed());
      break;
    }
  }

  r.witness_length = w.length();
  r.witness_ok = (w.start == target) && (w.end_point() == at) && r.witness_length <= r.bound;
  r.witness = std::move(w);

  // Proof inequalities, exact:
  //   phase 1:  |s lambda' - s lambda| = 2 lambda s / 3Q < L/Q
  //   phase 5:  symmetric with L - s
  //   phase 2/4: line <= L/Q and partial staircase <= lambda L / 3Q < L/2Q
  //   phase 3:  staircase = lambda L / 3Q, line <= L/Q + lambda L / 3Q
  switch (r.phase) {
    case 1:
      r.iqest_ok = (r.witness_length == Rat(2) * lam * s / (Rat(3) * Q)) && r.witness_length < L / Q;
      break;
    case 5:
      r.iqest_ok =
          (r.witness_length == Rat(2) * lam * (L - s) / (Rat(3) * Q)) && r.witness_length < L / Q;
      break;
    case 2:
    case 4: {
      const Rat rest = r.witness_length - line_len;
      r.iqest_ok = line_len < L / Q && rest <= lam * L / (Rat(3) * Q) &&
                   lam * L / (Rat(3) * Q) < L / (Rat(2) * Q);
      break;
    }
    case 3: {
      const Rat stair = Rat(8) * mu;
      r.iqest_ok = (stair == lam * L / (Rat(3) * Q)) && (r.witness_length - stair == line_len) &&
                   line_len <= L / Q + lam * L / (Rat(3) * Q);
      break;
    }
  }
  return r;
}

}  // namespace cartan
