#include <catch2/catch_amalgamated.hpp>

#include "cartan/overlaplab.hpp"
#include "helpers.hpp"

using namespace cartan;

namespace {
ModificationSpec<Rat> unit_alpha() { return ModificationSpec<Rat>{Rat(0), Rat(1), Rat(1), 5, Variant::AlphaPlus}; }

C1HFamilySpec small_family(FamilyKind kind, int count, int floor_coord = 1, uint64_t seed = 5) {
  C1HFamilySpec f;
  f.kind = kind;
  f.count = count;
  f.floor_coord = floor_coord;
  f.seed = seed;
  f.lift_cells = 600000;
  return f;
}
}  // namespace

TEST_CASE("family generation obeys the gates") {
  const auto rho = to_double_curve(build(unit_alpha()));
  SECTION("lines") {
    const auto fam = generate(small_family(FamilyKind::Lines, 6), 0.0, 1.0, &rho);
    REQUIRE(fam.size() == 6);
    for (const auto& g : fam) {
      REQUIRE(g.residual <= 1e-6);
      REQUIRE(g.min_floor_value >= 0.5);
    }
  }
  SECTION("trig controls, floor on either coordinate") {
    for (int fc : {1, 2}) {
      const auto fam = generate(small_family(FamilyKind::TrigControls, 4, fc), 0.0, 1.0, &rho);
      for (const auto& g : fam) {
        REQUIRE(g.residual <= 1e-6);
        REQUIRE(g.min_floor_value >= 0.5);
      }
    }
  }
  SECTION("smoothed segments") {
    const auto fam = generate(small_family(FamilyKind::SmoothedSegments, 3), 0.0, 1.0, &rho);
    for (const auto& g : fam) {
      REQUIRE(g.residual <= 1e-6);
      REQUIRE(g.min_floor_value >= 0.5);
    }
  }
  SECTION("smoothed members require a reference") {
    REQUIRE_THROWS_AS(generate(small_family(FamilyKind::SmoothedSegments, 2), 0.0, 1.0, nullptr),
                      std::invalid_argument);
  }
  SECTION("bad floor coordinate is rejected") {
    auto f = small_family(FamilyKind::Lines, 2);
    f.floor_coord = 3;
    REQUIRE_THROWS_AS(generate(f, 0.0, 1.0, &rho), std::invalid_argument);
  }
}

TEST_CASE("coincidence measure") {
  const auto rho = to_double_curve(build(unit_alpha()));
  const int grid = 10000;
  const auto rho_samples = sample_midpoints(rho, 0.0, 1.0, grid);
  SECTION("a curve coincides with itself everywhere") {
    REQUIRE(coincidence_measure(rho_samples, rho_samples, 1e-12) == 1.0);
  }
  SECTION("gamma_1 vs gamma_2 separate immediately") {
    GammaEvaluator ev;
    const auto g1 = sample_midpoints_gamma(ev, 1, grid);
    const auto g2 = sample_midpoints_gamma(ev, 2, grid);
    REQUIRE(coincidence_measure(g1, g2, 1e-6) <= 1.0 / grid);
  }
  SECTION("monotone in tau") {
    GammaEvaluator ev;
    const auto g2 = sample_midpoints_gamma(ev, 2, grid);
    double prev = 0;
    for (double tau : {1e-10, 1e-6, 1e-3, 1e-1}) {
      const double c = coincidence_measure(rho_samples, g2, tau);
      REQUIRE(c >= prev);
      prev = c;
    }
    REQUIRE(prev == 1.0);  // gamma_2 is the built overpass
  }
  SECTION("size mismatch is rejected") {
    auto small = rho_samples;
    small.pop_back();
    REQUIRE_THROWS_AS(coincidence_measure(small, rho_samples, 1e-8), std::invalid_argument);
  }
  SECTION("smoothed copy coincides on the first straight phase") {
    auto f = small_family(FamilyKind::SmoothedSegments, 1);
    const auto g = build_family_member(f, 0, 0.0, 1.0, &rho);
    const double c = coincidence_measure(midpoint_states(g.curve, grid), rho_samples, 1e-8);
    REQUIRE(c > 0.27);
    REQUIRE(c < 0.31);  // about Q/(3Q+2) = 5/17
  }
}

TEST_CASE("badintersect harness") {
  SECTION("alpha+ with floor on the first coordinate") {
    auto fam = small_family(FamilyKind::Mixed, 15);
    const auto rep = badintersect_harness(unit_alpha(), fam, 1e-8, 20000);
    REQUIRE(rep.pass);
    REQUIRE(rep.threshold == Catch::Approx(0.82));
    REQUIRE(rep.max_coincidence <= 0.82);
    REQUIRE(rep.max_coincidence > 0.2);  // the tangent members do track phase 1
    REQUIRE(rep.rows.size() == 15);
  }
  SECTION("beta+ with floor on the second coordinate") {
    auto spec = unit_alpha();
    spec.variant = Variant::BetaPlus;
    auto fam = small_family(FamilyKind::Mixed, 10, 2);
    const auto rep = badintersect_harness(spec, fam, 1e-8, 20000);
    REQUIRE(rep.pass);
  }
  SECTION("floors below 1/2 are rejected") {
    auto fam = small_family(FamilyKind::Lines, 2);
    fam.floor = 0.3;
    REQUIRE_THROWS_AS(badintersect_harness(unit_alpha(), fam, 1e-8, 1000), std::invalid_argument);
  }
}

TEST_CASE("lusin trend experiment") {
  auto fam = small_family(FamilyKind::Mixed, 10);
  const auto rep = lusin_experiment(fam, 1e-8, 2000, 3);
  REQUIRE(rep.rows.size() == 3);
  // the family contains gamma_1 itself
  REQUIRE(rep.rows[0].max_coincidence == 1.0);
  // gamma_2 escapes every member on the staircase phases
  REQUIRE(rep.rows[1].max_coincidence < 1.0);
  REQUIRE(rep.rows[1].max_coincidence > 0.2);
  REQUIRE(rep.monotone);
}
