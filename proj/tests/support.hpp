#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "angbill/angbill.hpp"

namespace testing_support {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline angbill::BivariatePoly ellipse_poly(double a, double b) {
  return angbill::BivariatePoly{{2, 0, 1.0 / (a * a)}, {0, 2, 1.0 / (b * b)}, {0, 0, -1.0}};
}

inline angbill::BivariatePoly fermat4() { return angbill::BivariatePoly{{4, 0, 1.0}, {0, 4, 1.0}, {0, 0, -1.0}}; }

inline angbill::BivariatePoly random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  angbill::BivariatePoly f;
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; i + j <= degree; ++j) f.add_term(i, j, u(rng));
  return f;
}

}  // namespace testing_support
