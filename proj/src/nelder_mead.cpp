#include "tkgibbs/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tkgibbs {

NelderMeadResult nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& fn,
                                      const std::vector<double>& x0, double step, double tol,
                                      int max_iters) {
  const std::size_t dim = x0.size();
  const double refl = 1.0, expan = 2.0, contr = 0.5, shrink = 0.5;

  auto neg = [&fn](const std::vector<double>& x) { return -fn(x); };

  std::vector<std::vector<double>> pts(dim + 1, x0);
  for (std::size_t j = 0; j < dim; ++j) pts[j + 1][j] += step;
  std::vector<double> fv(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) fv[i] = neg(pts[i]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), xr(dim), xt(dim);

  NelderMeadResult res;
  int it = 0;
  for (; it < max_iters; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&fv](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0], worst = order[dim], second = order[dim - 1];

    if (fv[worst] - fv[best] < tol) {
      res.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += pts[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    for (std::size_t j = 0; j < dim; ++j) xr[j] = centroid[j] + refl * (centroid[j] - pts[worst][j]);
    double fr = neg(xr);

    if (fr < fv[best]) {
      for (std::size_t j = 0; j < dim; ++j) xt[j] = centroid[j] + expan * (xr[j] - centroid[j]);
      double fe = neg(xt);
      if (fe < fr) {
        pts[worst] = xt;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      pts[worst] = xr;
      fv[worst] = fr;
    } else {
      bool outside = fr < fv[worst];
      if (outside) {
        for (std::size_t j = 0; j < dim; ++j) xt[j] = centroid[j] + contr * (xr[j] - centroid[j]);
      } else {
        for (std::size_t j = 0; j < dim; ++j) xt[j] = centroid[j] - contr * (centroid[j] - pts[worst][j]);
      }
      double fc = neg(xt);
      if ((outside && fc <= fr) || (!outside && fc < fv[worst])) {
        pts[worst] = xt;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < dim; ++j)
            pts[i][j] = pts[best][j] + shrink * (pts[i][j] - pts[best][j]);
          fv[i] = neg(pts[i]);
        }
      }
    }
  }

  std::size_t best = std::min_element(fv.begin(), fv.end()) - fv.begin();
  res.best_x = pts[best];
  res.best_value = -fv[best];
  res.iterations = it;
  if (!res.converged) {
    double lo = *std::min_element(fv.begin(), fv.end());
    double hi = *std::max_element(fv.begin(), fv.end());
    res.converged = (hi - lo < tol);
  }
  return res;
}

}  // namespace tkgibbs
