#include <cmath>
#include <limits>

#include "ssv/simd/kernels.hpp"
#include "pairwise.hpp"

// Reference kernels. These define the semantics; the vector variants must
// agree with them to tight tolerance (see tests/test_simd.cpp).

namespace ssv::simd::detail {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;

double scalar_sum(const double* x, std::size_t n) {
  return pairwise_reduce(0, n, [x](std::size_t i0, std::size_t m) {
    double s = 0.0;
    for (std::size_t i = i0; i < i0 + m; ++i) s += x[i];
    return s;
  });
}

double scalar_sum_sq_dev(const double* x, std::size_t n, double mu) {
  return pairwise_reduce(0, n, [x, mu](std::size_t i0, std::size_t m) {
    double s = 0.0;
    for (std::size_t i = i0; i < i0 + m; ++i) {
      const double d = x[i] - mu;
      s += d * d;
    }
    return s;
  });
}

double scalar_dot(const double* a, const double* b, std::size_t n) {
  return pairwise_reduce(0, n, [a, b](std::size_t i0, std::size_t m) {
    double s = 0.0;
    for (std::size_t i = i0; i < i0 + m; ++i) s += a[i] * b[i];
    return s;
  });
}

double scalar_max(const double* x, std::size_t n) {
  double m = kNegInf;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > m) m = x[i];
  }
  return m;
}

double scalar_logsumexp(const double* x, std::size_t n) {
  const double m = scalar_max(x, n);
  if (!std::isfinite(m)) return m;  // all -inf, or a +inf/nan present
  const double s = pairwise_reduce(0, n, [x, m](std::size_t i0, std::size_t k) {
    double acc = 0.0;
    for (std::size_t i = i0; i < i0 + k; ++i) acc += std::exp(x[i] - m);
    return acc;
  });
  return m + std::log(s);
}

void scalar_abs(const double* x, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(x[i]);
}

void scalar_log(const double* x, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::log(x[i]);
}

void scalar_exp(const double* x, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void scalar_gaussian_loglik(const double* thetas, std::size_t k, double n,
                            double mean_sq_dev, double* out) {
  const double half_n = 0.5 * n;
  const double half_nss = 0.5 * n * mean_sq_dev;
  for (std::size_t i = 0; i < k; ++i) {
    const double t = thetas[i];
    out[i] = t > 0.0
                 ? -half_n * (kLog2Pi + std::log(t)) - half_nss / t
                 : kNegInf;
  }
}

}  // namespace

const KernelTable scalar_table = {
    scalar_sum,  scalar_sum_sq_dev, scalar_dot, scalar_max, scalar_logsumexp,
    scalar_abs,  scalar_log,        scalar_exp, scalar_gaussian_loglik,
};

}  // namespace ssv::simd::detail
