#pragma once

#include <array>

#include "cartan/curves.hpp"

namespace cartan {

enum class VerticalAxis { X4, X5 };

/// Four-letter commutator word exp(m X2) exp(l X1) exp(-m X2) exp(-l X1),
/// read left to right as unit-time segments. Its endpoint is
/// exp(l m X3 - (l^2 m / 2) X4 - (l m^2 / 2) X5).
template <class S>
SegmentCurve<S> commutator_word(const S& l, const S& m, GroupPoint<S> start = GroupPoint<S>::identity(),
                                S t0 = S(0)) {
  SegmentCurve<S> c(std::move(start), std::move(t0));
  const int sl = l >= S(0) ? 1 : -1;
  const int sm = m >= S(0) ? 1 : -1;
  const S al = rat_abs(l), am = rat_abs(m);
  c.push(dir_from_axis(2, sm), am, S(1));
  c.push(dir_from_axis(1, sl), al, S(1));
  c.push(dir_from_axis(2, -sm), am, S(1));
  c.push(dir_from_axis(1, -sl), al, S(1));
  return c;
}

/// The eight-letter word of the staircase for positive parameter, i.e. the
/// concatenation F(l,-l) F(-l,-l) for X4 and F(-l,l) F(-l,-l) for X5.
inline std::array<Dir, 8> staircase_word(VerticalAxis axis) {
  using enum Dir;
  if (axis == VerticalAxis::X4) {
    return {MinusX2, PlusX1, PlusX2, MinusX1, MinusX2, MinusX1, PlusX2, PlusX1};
  }
  return {PlusX2, MinusX1, MinusX2, PlusX1, MinusX2, MinusX1, PlusX2, PlusX1};
}

/// Staircase curve on [t0, t0 + 8*letter_duration]: eight horizontal
/// |l|-segments from `start` to start * (0,0,0,l^3,0) (axis X4) or
/// start * (0,0,0,0,l^3) (axis X5).
template <class S>
SegmentCurve<S> staircase(const S& l, VerticalAxis axis,
                          GroupPoint<S> start = GroupPoint<S>::identity(), S t0 = S(0),
                          S letter_duration = S(1)) {
  SegmentCurve<S> c(std::move(start), std::move(t0));
  const int sl = l >= S(0) ? 1 : -1;
  const S speed = rat_abs(l) / letter_duration;
  for (Dir d : staircase_word(axis)) {
    c.push(sl > 0 ? d : dir_negate(d), speed, letter_duration);
  }
  return c;
}

}  // namespace cartan
