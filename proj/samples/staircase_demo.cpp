// Builds the vertical staircase and an overpass modification, prints their
// exact endpoints and a few samples.

#include <iostream>

#include "cartan/modification.hpp"

using namespace cartan;

namespace {
void show(const char* name, const GroupPoint<Rat>& p) {
  std::cout << name << " = (";
  for (int i = 1; i <= 5; ++i) std::cout << p[i].str() << (i < 5 ? ", " : ")\n");
}
}  // namespace

int main() {
  // eight unit-time segments of speed |l| reach (0,0,0,l^3,0)
  const Rat l(3, 2);
  const auto z = staircase(l, VerticalAxis::X4);
  show("staircase(3/2, x4) endpoint", z.end_point());
  std::cout << "length = " << z.length().str() << " = 8|l|\n\n";

  // the overpass on [0,1] with unit speed and Q = 5
  const ModificationSpec<Rat> spec{Rat(0), Rat(1), Rat(1), 5, Variant::AlphaPlus};
  const auto a = build(spec);
  std::cout << "alpha+ on [0,1], lambda = 1, Q = 5  (lambda' = "
            << spec.lambda_prime().str() << ", mu = " << spec.mu().str() << ")\n";
  show("  alpha+(5/17)", a.eval(Rat(5, 17)));
  show("  alpha+(6/17)", a.eval(Rat(6, 17)));
  show("  alpha+(1)   ", a.eval(Rat(1)));

  const auto report = verify_structure(spec, 8 * 17);
  std::cout << "partition check over " << report.intervals_checked
            << " subintervals: " << (report.ok ? "ok" : report.error) << "\n";
  return 0;
}
