#pragma once

#include <random>

#include "cartan/algebra.hpp"

namespace cartan::testing {

inline Rat rand_rat(std::mt19937_64& rng, long num_bound = 200, long den_bound = 40) {
  std::uniform_int_distribution<long> num(-num_bound, num_bound);
  std::uniform_int_distribution<long> den(1, den_bound);
  return Rat(num(rng), den(rng));
}

inline AlgebraElement<Rat> rand_algebra(std::mt19937_64& rng) {
  AlgebraElement<Rat> a;
  for (int i = 1; i <= 5; ++i) a[i] = rand_rat(rng);
  return a;
}

inline GroupPoint<Rat> rand_point(std::mt19937_64& rng) {
  GroupPoint<Rat> p;
  for (int i = 1; i <= 5; ++i) p[i] = rand_rat(rng);
  return p;
}

inline double eucl_dist(const GroupPoint<double>& p, const GroupPoint<double>& q) {
  double s = 0;
  for (int i = 1; i <= 5; ++i) s += (p[i] - q[i]) * (p[i] - q[i]);
  return std::sqrt(s);
}

}  // namespace cartan::testing
