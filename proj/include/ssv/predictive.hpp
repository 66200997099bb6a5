#pragma once

#include <span>
#include <vector>

#include "ssv/densities.hpp"

namespace ssv {

/// Marginal (predictive) return density on a grid:
/// p(x) = integral of N(x | mu, theta) * g(theta) d theta.
struct PredictiveCurve {
  std::vector<double> grid;
  std::vector<double> density;
  ModelSpec model;
};

/// Closed form for inverse-Gamma (and scaled inverse-chi^2) mixing:
/// Student-t with nu = 2*alpha, location mu, squared scale beta/alpha.
double predictive_iga(double x, const ModelSpec& m);

/// Log-Normal mixing has no closed form; adaptive Gauss-Legendre quadrature
/// in u = log(theta) over [-8s, 8s], refined until successive panel
/// estimates differ by less than `tol` (absolute). Throws ssv::domain_error
/// if the tolerance is not reached within the node budget.
double predictive_logn(double x, const ModelSpec& m, double tol = 1e-8);

/// Dispatch on the model's mixing law.
double predictive_pdf(double x, const ModelSpec& m, double tol = 1e-8);

/// Signed predictive density sampled on `grid` (strictly increasing).
PredictiveCurve predictive_curve(const ModelSpec& m,
                                 std::span<const double> grid,
                                 double tol = 1e-8);

/// Density of |X|: f(y) = f_X(y) + f_X(-y). Grid must be nonnegative and
/// strictly increasing.
PredictiveCurve predictive_abs_curve(const ModelSpec& m,
                                     std::span<const double> grid,
                                     double tol = 1e-8);

}  // namespace ssv
