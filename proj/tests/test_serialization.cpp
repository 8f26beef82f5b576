#include <catch2/catch_amalgamated.hpp>

#include "cartan/serialization.hpp"
#include "helpers.hpp"

using namespace cartan;

TEST_CASE("rational parsing and printing") {
  REQUIRE(Rat::parse("17/15") == Rat(17, 15));
  REQUIRE(Rat::parse("-3").str() == "-3");
  REQUIRE(Rat::parse("6/4").str() == "3/2");
  REQUIRE_THROWS_AS(Rat::parse("1/0"), std::invalid_argument);
  REQUIRE_THROWS_AS(Rat::parse("zebra"), std::invalid_argument);
  REQUIRE(decimal_string(Rat(1, 2), 6) == "0.500000");
  REQUIRE(decimal_string(Rat(-7, 3), 6) == "-2.333333");
  REQUIRE(decimal_string(Rat(1, 3), 30) == "0.333333333333333333333333333333");
}

TEST_CASE("curve JSON round trip is exact") {
  std::mt19937_64 rng(501);
  for (int k = 0; k < 50; ++k) {
    SegmentCurve<Rat> c(cartan::testing::rand_point(rng), cartan::testing::rand_rat(rng));
    const Dir dirs[] = {Dir::PlusX1, Dir::MinusX1, Dir::PlusX2, Dir::MinusX2};
    std::uniform_int_distribution<long> sp(0, 40), du(1, 9);
    for (int i = 0; i < 6; ++i) {
      c.push(dirs[rng() % 4], Rat(sp(rng), 7), Rat(du(rng), 3));
    }
    const json j = curve_to_json(c);
    const auto back = curve_from_json(j);
    REQUIRE(back.start == c.start);
    REQUIRE(back.t0 == c.t0);
    REQUIRE(back.segments.size() == c.segments.size());
    for (size_t i = 0; i < c.segments.size(); ++i) {
      REQUIRE(back.segments[i].dir == c.segments[i].dir);
      REQUIRE(back.segments[i].speed == c.segments[i].speed);
      REQUIRE(back.segments[i].duration == c.segments[i].duration);
    }
    REQUIRE(back.end_point() == c.end_point());
    // serialization is deterministic
    REQUIRE(curve_to_json(back).dump() == j.dump());
  }
}

TEST_CASE("staircase descriptor round trip") {
  const auto c = staircase(Rat(1), VerticalAxis::X4);
  const auto back = curve_from_json(curve_to_json(c));
  REQUIRE(back.end_point() == GroupPoint<Rat>::from(0, 0, 0, 1, 0));
}

TEST_CASE("modification spec JSON") {
  ModificationSpec<Rat> m{Rat(-1, 3), Rat(1, 4), Rat(9, 8), 7, Variant::BetaMinus};
  const auto back = modification_from_json(modification_to_json(m));
  REQUIRE(back.a == m.a);
  REQUIRE(back.b == m.b);
  REQUIRE(back.lambda == m.lambda);
  REQUIRE(back.Q == m.Q);
  REQUIRE(back.variant == m.variant);
  json bad = modification_to_json(m);
  bad["lambda"] = "2";
  REQUIRE_THROWS_AS(modification_from_json(bad), std::invalid_argument);
}

TEST_CASE("family spec JSON") {
  C1HFamilySpec f;
  f.kind = FamilyKind::TrigControls;
  f.floor_coord = 2;
  f.count = 7;
  f.seed = 99;
  const auto back = family_from_json(family_to_json(f));
  REQUIRE(back.kind == FamilyKind::TrigControls);
  REQUIRE(back.floor_coord == 2);
  REQUIRE(back.count == 7);
  REQUIRE(back.seed == 99);
}

TEST_CASE("CSV sampling") {
  GammaEvaluator ev;
  SECTION("gamma_1 on a 3-row grid") {
    const std::string csv = csv_gamma_samples(ev, 1, 3, 6);
    REQUIRE(csv == "t,x1,x2,x3,x4,x5\n"
                   "0.000000,0.000000,0.000000,0.000000,0.000000,0.000000\n"
                   "0.500000,0.500000,0.000000,0.000000,0.000000,0.000000\n"
                   "1.000000,1.000000,0.000000,0.000000,0.000000,0.000000\n");
  }
  SECTION("segment-curve sampling agrees with gamma sampling at level 2") {
    const auto g2 = ev.materialize(2);
    REQUIRE(csv_segment_samples(g2, 101) == csv_gamma_samples(ev, 2, 101));
  }
  SECTION("deterministic output") {
    REQUIRE(csv_gamma_samples(ev, 2, 57) == csv_gamma_samples(ev, 2, 57));
  }
}

TEST_CASE("atomic save") {
  const auto dir = std::filesystem::temp_directory_path() / "cartan_serialization_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  save_text_atomic(path, "hello\n");
  std::ifstream f(path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  REQUIRE(text == "hello\n");
  std::filesystem::remove_all(dir);
}
