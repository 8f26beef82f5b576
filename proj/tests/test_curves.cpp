#include <catch2/catch_amalgamated.hpp>

#include "cartan/curves.hpp"
#include "helpers.hpp"

using namespace cartan;
using cartan::testing::eucl_dist;
using cartan::testing::rand_rat;

namespace {
using P = GroupPoint<Rat>;
using Pd = GroupPoint<double>;

SegmentCurve<Rat> random_word(std::mt19937_64& rng, int max_segments = 8) {
  std::uniform_int_distribution<int> nseg(1, max_segments), d4(0, 3);
  std::uniform_int_distribution<long> sp(0, 30), du(1, 20);
  SegmentCurve<Rat> c(P::identity(), Rat(0));
  const Dir dirs[] = {Dir::PlusX1, Dir::MinusX1, Dir::PlusX2, Dir::MinusX2};
  const int n = nseg(rng);
  for (int i = 0; i < n; ++i) c.push(dirs[d4(rng)], Rat(sp(rng), 10), Rat(du(rng), 10));
  return c;
}
}  // namespace

TEST_CASE("flow basics") {
  REQUIRE(flow(P::identity(), Dir::PlusX1, Rat(1), Rat(7, 5)) == P::from(Rat(7, 5), 0, 0, 0, 0));
  const P p = P::from(3, Rat(-2), 1, 0, Rat(1, 2));
  REQUIRE(flow(p, Dir::PlusX2, Rat(0), Rat(9)) == p);
  REQUIRE(flow(P::from(1, 0, 0, 0, 0), Dir::PlusX2, Rat(1), Rat(1)) ==
          P::from(1, 1, -1, Rat(1, 2), Rat(1, 2)));
}

TEST_CASE("segment curve evaluation") {
  SECTION("single segment") {
    const P start = P::from(1, 1, 0, 0, 0);
    SegmentCurve<Rat> c(start, Rat(2));
    c.push(Dir::PlusX1, Rat(3), Rat(4));
    REQUIRE(c.eval(Rat(2)) == start);
    REQUIRE(c.eval(Rat(6)) == mul(start, P::from(12, 0, 0, 0, 0)));
    REQUIRE(c.length() == 12);
    REQUIRE_THROWS_AS(c.eval(Rat(7)), std::domain_error);
    REQUIRE_THROWS_AS(c.eval(Rat(1)), std::domain_error);
  }
  SECTION("two-segment word equals the bch product") {
    SegmentCurve<Rat> c(P::identity(), Rat(0));
    c.push(Dir::PlusX2, Rat(1), Rat(1));
    c.push(Dir::PlusX1, Rat(1), Rat(1));
    const auto expect = exp_to_group(bch3(AlgebraElement<Rat>::basis(2), AlgebraElement<Rat>::basis(1)));
    REQUIRE(c.eval(Rat(2)) == expect);
    REQUIRE(c.eval(Rat(2)) == mul(P::from(0, 1, 0, 0, 0), P::from(1, 0, 0, 0, 0)));
  }
  SECTION("boundary uses the earlier segment's endpoint") {
    SegmentCurve<Rat> c(P::identity(), Rat(0));
    c.push(Dir::PlusX1, Rat(1), Rat(1));
    c.push(Dir::MinusX2, Rat(2), Rat(1));
    REQUIRE(c.eval(Rat(1)) == c.knots()[1]);
    REQUIRE(c.segment_index(Rat(1)) == 0);
  }
}

TEST_CASE("endpoint equals the fold of per-segment increments") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 300; ++k) {
    const auto c = random_word(rng);
    P right = P::identity();
    for (auto it = c.segments.rbegin(); it != c.segments.rend(); ++it) {
      right = mul(exp_dir(it->dir, it->speed * it->duration), right);
    }
    REQUIRE(c.end_point() == mul(c.start, right));
  }
}

TEST_CASE("restrict, reversed, translate") {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 200; ++k) {
    const auto c = random_word(rng);
    const Rat T = c.duration();
    const Rat s = rand_rat(rng, 100, 50) * T / Rat(200) + T / Rat(4);
    const Rat t = s + (T - s) / Rat(3);
    const auto r = c.restrict(s, t);
    REQUIRE(r.start == c.eval(s));
    REQUIRE(r.end_point() == c.eval(t));
    const auto rev = c.reversed();
    REQUIRE(rev.start == c.end_point());
    REQUIRE(rev.end_point() == c.start);
    REQUIRE(rev.length() == c.length());
    const auto g = cartan::testing::rand_point(rng);
    REQUIRE(c.left_translate(g).end_point() == mul(g, c.end_point()));
  }
}

TEST_CASE("length equals planar arclength of the projection, exactly") {
  std::mt19937_64 rng(53);
  for (int k = 0; k < 300; ++k) {
    const auto c = random_word(rng);
    Rat planar(0);
    const auto& kn = c.knots();
    for (size_t i = 0; i + 1 < kn.size(); ++i) {
      planar += rat_abs(kn[i + 1][1] - kn[i][1]) + rat_abs(kn[i + 1][2] - kn[i][2]);
    }
    REQUIRE(c.length() == planar);
  }
  SegmentCurve<Rat> empty(P::identity(), Rat(0));
  REQUIRE(empty.length() == 0);
}

TEST_CASE("lift closed forms") {
  SECTION("x1-axis motion") {
    auto c = lift([](double t) { return PlanarSample{t, 0, 1, 0}; }, 0, 1, 100,
                  GroupPoint<double>::identity());
    for (size_t i = 0; i < c.states.size(); ++i) {
      REQUIRE(c.states[i][1] == Catch::Approx(c.grid[i]).margin(1e-15));
      for (int j = 2; j <= 5; ++j) REQUIRE(std::fabs(c.states[i][j]) < 1e-15);
    }
  }
  SECTION("x2-axis motion") {
    auto c = lift([](double t) { return PlanarSample{0, t, 0, 1}; }, 0, 1, 100,
                  GroupPoint<double>::identity());
    const auto& e = c.states.back();
    REQUIRE(e[2] == Catch::Approx(1.0));
    for (int j : {3, 4, 5}) REQUIRE(std::fabs(e[j]) < 1e-15);
  }
  SECTION("x2 flow from (1,0,0,0,0)") {
    auto c = lift([](double t) { return PlanarSample{1, t, 0, 1}; }, 0, 1, 200,
                  GroupPoint<double>::from(1, 0, 0, 0, 0));
    for (size_t i = 0; i < c.states.size(); ++i) {
      const double t = c.grid[i];
      const auto& p = c.states[i];
      REQUIRE(p[3] == Catch::Approx(-t).margin(1e-13));
      REQUIRE(p[4] == Catch::Approx(t / 2).margin(1e-13));
      REQUIRE(p[5] == Catch::Approx(t * t / 2).margin(1e-13));
    }
  }
}

TEST_CASE("lift agrees with exact evaluation for step-realizable controls") {
  std::mt19937_64 rng(59);
  const double h = 1e-4;
  for (int trial = 0; trial < 20; ++trial) {
    // words whose breakpoints sit on the lifting grid
    SegmentCurve<double> c(Pd::identity(), 0.0);
    std::uniform_int_distribution<int> d4(0, 3), dur(200, 900);
    std::uniform_real_distribution<double> sp(0.0, 1.5);
    const Dir dirs[] = {Dir::PlusX1, Dir::MinusX1, Dir::PlusX2, Dir::MinusX2};
    for (int i = 0; i < 5; ++i) c.push(dirs[d4(rng)], sp(rng), dur(rng) * h);
    const double T = c.duration();
    const size_t cells = static_cast<size_t>(std::llround(T / h));
    std::vector<double> x1(cells + 1), x2(cells + 1);
    for (size_t i = 0; i <= cells; ++i) {
      const auto p = c.eval(std::min(static_cast<double>(i) * h, T));
      x1[i] = p[1];
      x2[i] = p[2];
    }
    const auto lifted = lift_sampled(x1, x2, 0, T, Pd::identity());
    REQUIRE(eucl_dist(lifted.states.back(), c.end_point()) < 1e-8);
  }
}

TEST_CASE("horizontality residual") {
  SECTION("constant curve") {
    std::vector<double> t;
    std::vector<Pd> p;
    for (int i = 0; i <= 10; ++i) {
      t.push_back(0.1 * i);
      p.push_back(Pd::from(1, 2, 3, 4, 5));
    }
    REQUIRE(horizontality_residual(t, p) == 0.0);
  }
  SECTION("non-horizontal diagonal in x3") {
    std::vector<double> t;
    std::vector<Pd> p;
    for (int i = 0; i <= 100; ++i) {
      const double s = i / 100.0;
      t.push_back(s);
      p.push_back(Pd::from(s, 0, s, 0, 0));
    }
    REQUIRE(horizontality_residual(t, p) >= 1.0);
  }
  SECTION("sampled segment word stays small") {
    std::mt19937_64 rng(61);
    const auto word = random_word(rng, 5);
    const auto c = to_double_curve(word);
    const double T = c.duration();
    std::vector<double> t;
    std::vector<Pd> p;
    const int n = 20000;
    for (int i = 0; i <= n; ++i) {
      t.push_back(T * i / n);
      p.push_back(c.eval(t.back()));
    }
    REQUIRE(horizontality_residual(t, p) < 1e-3);
  }
}

TEST_CASE("height change checks on segment curves") {
  SECTION("pure +X2 segment keeps x4 constant") {
    SegmentCurve<Rat> c(P::identity(), Rat(0));
    c.push(Dir::PlusX2, Rat(2), Rat(3));
    const auto r = height_change_check(c, Rat(0), Rat(3));
    REQUIRE(r.applies[2]);
    REQUIRE(r.holds[2]);
    REQUIRE(r.ok());
  }
  SECTION("x2 flow from (1,0,0,0,0) raises x4") {
    SegmentCurve<Rat> c(P::from(1, 0, 0, 0, 0), Rat(0));
    c.push(Dir::PlusX2, Rat(1), Rat(2));
    const auto r = height_change_check(c, Rat(1, 2), Rat(3, 2));
    REQUIRE(r.applies[2]);
    REQUIRE(r.holds[2]);
    REQUIRE(c.eval(Rat(2)) == P::from(1, 2, -2, 1, 2));
    REQUIRE(r.ok());
  }
  SECTION("random sign-constrained words are never falsified") {
    std::mt19937_64 rng(67);
    const Dir pool_up[] = {Dir::PlusX1, Dir::MinusX1, Dir::PlusX2};   // x2' >= 0
    const Dir pool_dn[] = {Dir::PlusX1, Dir::MinusX1, Dir::MinusX2};  // x2' <= 0
    std::uniform_int_distribution<int> d3(0, 2);
    std::uniform_int_distribution<long> sp(0, 30), du(1, 20);
    for (int k = 0; k < 500; ++k) {
      SegmentCurve<Rat> c(cartan::testing::rand_point(rng), Rat(0));
      const bool up = k % 2 == 0;
      for (int i = 0; i < 6; ++i) {
        c.push(up ? pool_up[d3(rng)] : pool_dn[d3(rng)], Rat(sp(rng), 10), Rat(du(rng), 10));
      }
      const auto r = height_change_check(c, Rat(0), c.duration());
      REQUIRE(r.applies[up ? 2 : 3]);
      REQUIRE(r.ok());
    }
  }
}

TEST_CASE("height change checks on random monotone lifts") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double a1 = amp(rng), b1 = amp(rng), c1 = amp(rng);
    const double a2 = std::fabs(amp(rng)), b2 = 0.4 * std::fabs(amp(rng));
    // u2 >= 0 by construction
    auto u1 = [&](double t) { return a1 + b1 * std::cos(2 * M_PI * t) + c1 * std::sin(2 * M_PI * t); };
    auto u2 = [&](double t) { return a2 + b2 + b2 * std::sin(2 * M_PI * t) * 0.999; };
    const auto c = lift_controls(u1, u2, 0, 1, 400, to_double_point(cartan::testing::rand_point(rng)));
    const auto r = height_change_check(c, 0.0, 1.0, 1e-6);
    REQUIRE(r.applies[2]);
    REQUIRE(r.holds[2]);
  }
}
