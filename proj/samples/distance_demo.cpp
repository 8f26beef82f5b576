// Two-sided Carnot-Caratheodory distance bounds on a few reference pairs.

#include <cstdio>

#include "cartan/ccmetric.hpp"

using namespace cartan;

int main() {
  DistanceBudget budget;
  budget.restarts = 6;

  const struct {
    const char* name;
    GroupPoint<double> q;
  } targets[] = {
      {"(1, 0, 0, 0, 0)   horizontal line", GroupPoint<double>::from(1, 0, 0, 0, 0)},
      {"(0, 0, 1, 0, 0)   second layer", GroupPoint<double>::from(0, 0, 1, 0, 0)},
      {"(0, 0, 0, 1, 0)   third layer", GroupPoint<double>::from(0, 0, 0, 1, 0)},
      {"(0, 0, 0, 0, 1/8) third layer", GroupPoint<double>::from(0, 0, 0, 0, 0.125)},
  };

  std::printf("%-36s %10s %10s %8s\n", "target", "lower", "upper", "pieces");
  for (const auto& t : targets) {
    const double lo = cc_lower(GroupPoint<double>::identity(), t.q);
    const auto up = cc_upper(GroupPoint<double>::identity(), t.q, budget);
    std::printf("%-36s %10.6f %10.6f %8zu\n", t.name, lo, up.value, up.witness.pieces.size());
  }

  const auto scan = ball_box_scan(40, {0.2, 0.2, 0.02, 0.002, 0.002}, budget);
  std::printf("\nball-box scan over %d pairs: max |x-y|/d_c = %.4f, max d_c/|x-y|^(1/3) = %.4f\n",
              scan.pairs, scan.max_eucl_over_dc, scan.max_dc_over_cbrt);
  return 0;
}
