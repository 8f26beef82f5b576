#include <catch2/catch_amalgamated.hpp>

#include "cartan/algebra.hpp"
#include "helpers.hpp"

using namespace cartan;
using cartan::testing::rand_algebra;
using cartan::testing::rand_point;
using cartan::testing::rand_rat;

namespace {
using E = AlgebraElement<Rat>;
using P = GroupPoint<Rat>;

E X(int i, Rat c = Rat(1)) { return E::basis(i, c); }
}  // namespace

TEST_CASE("bracket structure constants") {
  REQUIRE(bracket(X(2), X(1)) == X(3));
  REQUIRE(bracket(X(3), X(1)) == X(4));
  REQUIRE(bracket(X(3), X(2)) == X(5));
  REQUIRE(bracket(X(1), X(1)) == E::zero());
  REQUIRE(bracket(X(1) + X(2), X(3)) == X(4, Rat(-1)) + X(5, Rat(-1)));
}

TEST_CASE("bracket is antisymmetric and bilinear, output in V2+V3") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 10000; ++k) {
    const E a = rand_algebra(rng), b = rand_algebra(rng);
    const E ab = bracket(a, b);
    REQUIRE(ab + bracket(b, a) == E::zero());
    REQUIRE(ab[1] == 0);
    REQUIRE(ab[2] == 0);
    if (k % 10 == 0) {
      const E c = rand_algebra(rng);
      const Rat s = rand_rat(rng);
      REQUIRE(bracket(a + s * b, c) == bracket(a, c) + s * bracket(b, c));
    }
  }
}

TEST_CASE("brackets of weight >= 4 vanish") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 1000; ++k) {
    const E a = rand_algebra(rng), b = rand_algebra(rng), c = rand_algebra(rng), d = rand_algebra(rng);
    REQUIRE(bracket(a, bracket(b, bracket(c, d))) == E::zero());
    REQUIRE(bracket(bracket(a, b), bracket(c, d)) == E::zero());
  }
}

TEST_CASE("bch3 on generators matches the hand expansion") {
  const E r = bch3(X(2), X(1));
  REQUIRE(r[1] == 1);
  REQUIRE(r[2] == 1);
  REQUIRE(r[3] == Rat(1, 2));
  REQUIRE(r[4] == Rat(1, 12));
  REQUIRE(r[5] == Rat(-1, 12));
}

TEST_CASE("bch3 identities") {
  std::mt19937_64 rng(13);
  SECTION("neutral element and inverses") {
    for (int k = 0; k < 100; ++k) {
      const E a = rand_algebra(rng);
      REQUIRE(bch3(a, E::zero()) == a);
      REQUIRE(bch3(E::zero(), a) == a);
      REQUIRE(bch3(a, -a) == E::zero());
    }
  }
  SECTION("V2+V3 elements commute and add") {
    const E a = X(3, Rat(-1)) + X(4, Rat(1, 2)) + X(5, Rat(-1, 2));
    const E b = X(3) + X(4, Rat(1, 2)) + X(5, Rat(1, 2));
    REQUIRE(bch3(a, b) == X(4));
  }
  SECTION("associativity, exact, 10^3 random triples") {
    for (int k = 0; k < 1000; ++k) {
      const E a = rand_algebra(rng), b = rand_algebra(rng), c = rand_algebra(rng);
      REQUIRE(bch3(bch3(a, b), c) == bch3(a, bch3(b, c)));
    }
  }
}

TEST_CASE("second-kind coordinate conversions") {
  SECTION("one-parameter subgroups") {
    REQUIRE(exp_to_group(X(1, Rat(7, 3))) == P::from(Rat(7, 3), 0, 0, 0, 0));
    REQUIRE(exp_to_group(X(3, Rat(-5))) == P::from(0, 0, Rat(-5), 0, 0));
    REQUIRE(group_to_exp(P::from(Rat(7, 3), 0, 0, 0, 0)) == X(1, Rat(7, 3)));
    REQUIRE(group_to_exp(P::identity()) == E::zero());
  }
  SECTION("exp(X1+X2)") {
    const P p = exp_to_group(X(1) + X(2));
    REQUIRE(p == P::from(1, 1, Rat(-1, 2), Rat(1, 6), Rat(1, 3)));
    REQUIRE(group_to_exp(p) == X(1) + X(2));
  }
  SECTION("round trips on random data") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 1000; ++k) {
      const E a = rand_algebra(rng);
      REQUIRE(group_to_exp(exp_to_group(a)) == a);
      const P p = rand_point(rng);
      REQUIRE(exp_to_group(group_to_exp(p)) == p);
    }
  }
}

TEST_CASE("group law basics") {
  REQUIRE(mul(P::from(1, 0, 0, 0, 0), P::from(0, 1, 0, 0, 0)) ==
          P::from(1, 1, -1, Rat(1, 2), Rat(1, 2)));
  std::mt19937_64 rng(19);
  for (int k = 0; k < 200; ++k) {
    const P p = rand_point(rng), q = rand_point(rng);
    const P z = mul(p, q);
    REQUIRE(z[1] == p[1] + q[1]);
    REQUIRE(z[2] == p[2] + q[2]);
    REQUIRE(mul(p, P::identity()) == p);
    REQUIRE(mul(P::identity(), p) == p);
  }
}

TEST_CASE("hard-coded law equals the bch3 pipeline on 10^4 pairs") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 10000; ++k) {
    const P p = rand_point(rng), q = rand_point(rng);
    REQUIRE(mul(p, q) == mul_via_bch(p, q));
  }
}

TEST_CASE("group associativity, exact, 10^3 triples") {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 1000; ++k) {
    const P p = rand_point(rng), q = rand_point(rng), r = rand_point(rng);
    REQUIRE(mul(mul(p, q), r) == mul(p, mul(q, r)));
  }
}

TEST_CASE("inverses") {
  REQUIRE(inv(P::identity()) == P::identity());
  REQUIRE(inv(P::from(Rat(5), 0, 0, 0, 0)) == P::from(Rat(-5), 0, 0, 0, 0));
  const P p = exp_to_group(X(1) + X(2));
  REQUIRE(inv(p) == exp_to_group(-(X(1) + X(2))));
  std::mt19937_64 rng(31);
  for (int k = 0; k < 1000; ++k) {
    const P q = rand_point(rng);
    REQUIRE(mul(q, inv(q)) == P::identity());
    REQUIRE(mul(inv(q), q) == P::identity());
    REQUIRE(inv(q) == exp_to_group(-group_to_exp(q)));
  }
}

TEST_CASE("frame fields") {
  const auto f0 = frame(GroupPoint<Rat>::identity());
  REQUIRE(f0[2] == (std::array<Rat, 5>{0, 1, 0, 0, 0}));
  const auto f = frame(P::from(1, 2, Rat(9), Rat(-4), Rat(1, 7)));
  REQUIRE(f[1] == (std::array<Rat, 5>{1, 0, 0, 0, 0}));
  REQUIRE(f[2] == (std::array<Rat, 5>{0, 1, -1, Rat(1, 2), 2}));
  REQUIRE(f[3] == (std::array<Rat, 5>{0, 0, 1, -1, -2}));
  REQUIRE(f[4] == (std::array<Rat, 5>{0, 0, 0, 1, 0}));
  REQUIRE(f[5] == (std::array<Rat, 5>{0, 0, 0, 0, 1}));
}

TEST_CASE("frame is left invariant (finite differences, float backend)") {
  std::mt19937_64 rng(37);
  const double h = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = to_double_point(rand_point(rng));
    const auto q = to_double_point(rand_point(rng));
    const auto fq = frame(q);
    const auto fpq = frame(mul(p, q));
    for (int i = 1; i <= 5; ++i) {
      GroupPoint<double> qp = q, qm = q;
      for (int c = 1; c <= 5; ++c) {
        qp[c] += h * fq[i][static_cast<size_t>(c - 1)];
        qm[c] -= h * fq[i][static_cast<size_t>(c - 1)];
      }
      const auto zp = mul(p, qp), zm = mul(p, qm);
      for (int c = 1; c <= 5; ++c) {
        const double d = (zp[c] - zm[c]) / (2 * h);
        REQUIRE(std::fabs(d - fpq[i][static_cast<size_t>(c - 1)]) < 1e-6);
      }
    }
  }
}

TEST_CASE("vertical factors commute with the horizontal slice") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 1000; ++k) {
    P p = rand_point(rng);
    const P slice = P::from(p[1], p[2], p[3], 0, 0);
    const P vert = P::from(0, 0, 0, p[4], p[5]);
    REQUIRE(mul(slice, vert) == p);
    REQUIRE(mul(vert, slice) == p);
  }
}
