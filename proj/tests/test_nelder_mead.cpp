#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "tkgibbs/nelder_mead.hpp"

using namespace tkgibbs;

TEST_CASE("quadratic bowl is maximized to machine precision") {
  std::vector<double> c = {0.3, -0.2, 0.5, 0.1};
  auto fn = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
    return -s;
  };
  NelderMeadResult r = nelder_mead_maximize(fn, std::vector<double>(4, 0.0), 0.05, 1e-10, 5000);
  CHECK(r.converged);
  CHECK(r.best_value > -1e-9);
  for (size_t i = 0; i < c.size(); ++i) CHECK(std::abs(r.best_x[i] - c[i]) < 1e-4);
}

TEST_CASE("banana valley is traversed") {
  auto fn = [](const std::vector<double>& x) {
    double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    return -(a * a + 100.0 * b * b);
  };
  NelderMeadResult r = nelder_mead_maximize(fn, {-1.2, 1.0}, 0.05, 1e-10, 20000);
  CHECK(r.converged);
  CHECK(r.best_value > -1e-8);
  CHECK(std::abs(r.best_x[0] - 1.0) < 1e-3);
  CHECK(std::abs(r.best_x[1] - 1.0) < 1e-3);
}

TEST_CASE("constant objectives converge immediately") {
  auto fn = [](const std::vector<double>&) { return 4.25; };
  NelderMeadResult r = nelder_mead_maximize(fn, {0.0, 0.0, 0.0}, 0.05, 1e-10, 100);
  CHECK(r.converged);
  CHECK(r.best_value == 4.25);
  CHECK(r.iterations < 5);
}

TEST_CASE("iteration cap is reported") {
  auto fn = [](const std::vector<double>& x) { return -(x[0] * x[0] + x[1] * x[1]); };
  NelderMeadResult r = nelder_mead_maximize(fn, {5.0, 5.0}, 0.05, 1e-14, 3);
  CHECK(!r.converged);
}
