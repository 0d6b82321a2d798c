#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "fraclap/grid.hpp"

namespace fraclap {

/// Seeded generator with fully specified draw routines, so a (config, seed)
/// pair reproduces artifact bytes independent of the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return (engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  Vector normal_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Random smooth grid function: spectral coefficients ~ N(0,1) damped by
/// (lambda_1/lambda_k)^decay, scaled to the requested amplitude in sup norm.
GridFunction random_smooth(const EigenBasis& basis, Rng& rng, double amplitude,
                           double decay = 1.0);

}  // namespace fraclap
