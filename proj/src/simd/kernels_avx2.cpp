#include <cmath>
#include <cstdint>
#include <limits>

#include <immintrin.h>

#include "ssv/simd/kernels.hpp"
#include "pairwise.hpp"

// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma and selected at
// runtime by the dispatcher; never call these on hardware without AVX2.
//
// exp/log use the classic Cephes double-precision rational approximations
// (~1-2 ulp), so vector results differ from libm by at most a few ulp.
// One deliberate divergence: vector exp flushes to 0 below -745.13 instead
// of producing subnormals via libm's slow path; callers here only feed it
// max-shifted logsumexp arguments where such terms are negligible anyway.

namespace ssv::simd::detail {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  const __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
  return _mm_cvtsd_f64(s1);
}

// ---- exp ------------------------------------------------------------

inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

  const __m256d overflow = _mm256_cmp_pd(x, _mm256_set1_pd(709.782712893384), _CMP_GT_OQ);
  const __m256d underflow = _mm256_cmp_pd(x, _mm256_set1_pd(-745.13321910194), _CMP_LT_OQ);
  const __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, c1, x);
  r = _mm256_fnmadd_pd(n, c2, r);

  const __m256d z = _mm256_mul_pd(r, r);
  __m256d p = _mm256_fmadd_pd(p0, z, p1);
  p = _mm256_fmadd_pd(p, z, p2);
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_fmadd_pd(q0, z, q1);
  q = _mm256_fmadd_pd(q, z, q2);
  q = _mm256_fmadd_pd(q, z, q3);
  const __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  __m256d m = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

  // Scale by 2^n in two stages so both near-overflow and gradual-underflow
  // exponents stay within the valid biased range. AVX2 lacks a 64-bit
  // arithmetic right shift, so emulate n>>1 by re-inserting the sign bit.
  const __m128i ni = _mm256_cvtpd_epi32(n);
  const __m256i n64 = _mm256_cvtepi32_epi64(ni);
  const __m256i na = _mm256_or_si256(
      _mm256_srli_epi64(n64, 1),
      _mm256_slli_epi64(_mm256_srli_epi64(n64, 63), 63));
  const __m256i nb = _mm256_sub_epi64(n64, na);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256d scale_a =
      _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(na, bias), 52));
  const __m256d scale_b =
      _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(nb, bias), 52));
  m = _mm256_mul_pd(_mm256_mul_pd(m, scale_a), scale_b);

  m = _mm256_blendv_pd(m, _mm256_setzero_pd(), underflow);
  m = _mm256_blendv_pd(m, _mm256_set1_pd(std::numeric_limits<double>::infinity()), overflow);
  m = _mm256_blendv_pd(m, x, nan_mask);
  return m;
}

// ---- log ------------------------------------------------------------

inline __m256d log_pd(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half_v = _mm256_set1_pd(0.5);
  const __m256d sqrth = _mm256_set1_pd(0.70710678118654752440);
  const __m256d lc1 = _mm256_set1_pd(0.693359375);
  const __m256d lc2 = _mm256_set1_pd(-2.121944400546905827679e-4);
  const __m256d p0 = _mm256_set1_pd(1.01875663804580931796e-4);
  const __m256d p1 = _mm256_set1_pd(4.97494994976747001425e-1);
  const __m256d p2 = _mm256_set1_pd(4.70579119878881725854e0);
  const __m256d p3 = _mm256_set1_pd(1.44989225341610930846e1);
  const __m256d p4 = _mm256_set1_pd(1.79368678507819816313e1);
  const __m256d p5 = _mm256_set1_pd(7.70838733755885391666e0);
  const __m256d q0 = _mm256_set1_pd(1.12873587189167450590e1);
  const __m256d q1 = _mm256_set1_pd(4.52279145837532221105e1);
  const __m256d q2 = _mm256_set1_pd(8.29875266912776603211e1);
  const __m256d q3 = _mm256_set1_pd(7.11544750618563894466e1);
  const __m256d q4 = _mm256_set1_pd(2.31251620126765340583e1);

  const __m256d zero_mask = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_EQ_OQ);
  const __m256d neg_mask = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ);
  const __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  const __m256d inf_mask =
      _mm256_cmp_pd(x, _mm256_set1_pd(std::numeric_limits<double>::infinity()), _CMP_EQ_OQ);

  // Normalize subnormals so exponent extraction is uniform.
  const __m256d tiny =
      _mm256_cmp_pd(x, _mm256_set1_pd(2.2250738585072014e-308), _CMP_LT_OQ);
  const __m256d tiny_pos = _mm256_andnot_pd(neg_mask, tiny);
  const __m256d x_adj = _mm256_blendv_pd(x, _mm256_mul_pd(x, _mm256_set1_pd(0x1.0p54)), tiny_pos);
  const __m256d e_bias = _mm256_blendv_pd(_mm256_setzero_pd(), _mm256_set1_pd(54.0), tiny_pos);

  const __m256i bits = _mm256_castpd_si256(x_adj);
  const __m256i exp_bits =
      _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7FF));
  // int64 -> double for small nonnegative values: OR in 2^52 and subtract it.
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d e_raw = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(exp_bits, magic)), _mm256_set1_pd(0x1.0p52));
  __m256d e = _mm256_sub_pd(_mm256_sub_pd(e_raw, _mm256_set1_pd(1022.0)), e_bias);

  // Mantissa in [0.5, 1).
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i half_bits = _mm256_set1_epi64x(0x3FE0000000000000LL);
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));

  const __m256d below = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(below, one));
  m = _mm256_add_pd(m, _mm256_and_pd(below, m));  // double where m < sqrt(1/2)
  const __m256d f = _mm256_sub_pd(m, one);

  const __m256d z = _mm256_mul_pd(f, f);
  __m256d p = _mm256_fmadd_pd(p0, f, p1);
  p = _mm256_fmadd_pd(p, f, p2);
  p = _mm256_fmadd_pd(p, f, p3);
  p = _mm256_fmadd_pd(p, f, p4);
  p = _mm256_fmadd_pd(p, f, p5);
  __m256d q = _mm256_add_pd(f, q0);
  q = _mm256_fmadd_pd(q, f, q1);
  q = _mm256_fmadd_pd(q, f, q2);
  q = _mm256_fmadd_pd(q, f, q3);
  q = _mm256_fmadd_pd(q, f, q4);

  __m256d y = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(f, z), p), q);
  y = _mm256_fmadd_pd(e, lc2, y);
  y = _mm256_fnmadd_pd(half_v, z, y);
  __m256d r = _mm256_add_pd(f, y);
  r = _mm256_fmadd_pd(e, lc1, r);

  r = _mm256_blendv_pd(r, _mm256_set1_pd(kNegInf), zero_mask);
  r = _mm256_blendv_pd(r, _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN()), neg_mask);
  r = _mm256_blendv_pd(r, _mm256_set1_pd(std::numeric_limits<double>::infinity()), inf_mask);
  r = _mm256_blendv_pd(r, x, nan_mask);
  return r;
}

// ---- reductions -------------------------------------------------------

double avx2_sum(const double* x, std::size_t n) {
  return pairwise_reduce(0, n, [x](std::size_t i0, std::size_t m) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = i0;
    for (; i + 4 <= i0 + m; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < i0 + m; ++i) s += x[i];
    return s;
  });
}

double avx2_sum_sq_dev(const double* x, std::size_t n, double mu) {
  const __m256d vmu = _mm256_set1_pd(mu);
  return pairwise_reduce(0, n, [x, vmu, mu](std::size_t i0, std::size_t m) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = i0;
    for (; i + 4 <= i0 + m; i += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmu);
      acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < i0 + m; ++i) {
      const double d = x[i] - mu;
      s += d * d;
    }
    return s;
  });
}

double avx2_dot(const double* a, const double* b, std::size_t n) {
  return pairwise_reduce(0, n, [a, b](std::size_t i0, std::size_t m) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = i0;
    for (; i + 4 <= i0 + m; i += 4)
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum(acc);
    for (; i < i0 + m; ++i) s += a[i] * b[i];
    return s;
  });
}

double avx2_max(const double* x, std::size_t n) {
  double m = kNegInf;
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vm = _mm256_set1_pd(kNegInf);
    for (; i + 4 <= n; i += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vm);
    for (double v : lanes)
      if (v > m) m = v;
  }
  for (; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

double avx2_logsumexp(const double* x, std::size_t n) {
  const double m = avx2_max(x, n);
  if (!std::isfinite(m)) return m;
  const __m256d vm = _mm256_set1_pd(m);
  const double s = pairwise_reduce(0, n, [x, vm, m](std::size_t i0, std::size_t k) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = i0;
    for (; i + 4 <= i0 + k; i += 4)
      acc = _mm256_add_pd(acc, exp_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vm)));
    double part = hsum(acc);
    for (; i < i0 + k; ++i) {
      alignas(32) double t[4] = {x[i] - m, 0.0, 0.0, 0.0};
      alignas(32) double r[4];
      _mm256_store_pd(r, exp_pd(_mm256_load_pd(t)));
      part += r[0];
    }
    return part;
  });
  return m + std::log(s);
}

// ---- elementwise ------------------------------------------------------

void avx2_abs(const double* x, std::size_t n, double* out) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_and_pd(_mm256_loadu_pd(x + i), mask));
  for (; i < n; ++i) out[i] = std::fabs(x[i]);
}

void avx2_log(const double* x, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, log_pd(_mm256_loadu_pd(x + i)));
  if (i < n) {
    alignas(32) double t[4] = {1.0, 1.0, 1.0, 1.0};
    alignas(32) double r[4];
    for (std::size_t j = i; j < n; ++j) t[j - i] = x[j];
    _mm256_store_pd(r, log_pd(_mm256_load_pd(t)));
    for (std::size_t j = i; j < n; ++j) out[j] = r[j - i];
  }
}

void avx2_exp(const double* x, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(x + i)));
  if (i < n) {
    alignas(32) double t[4] = {0.0, 0.0, 0.0, 0.0};
    alignas(32) double r[4];
    for (std::size_t j = i; j < n; ++j) t[j - i] = x[j];
    _mm256_store_pd(r, exp_pd(_mm256_load_pd(t)));
    for (std::size_t j = i; j < n; ++j) out[j] = r[j - i];
  }
}

void avx2_gaussian_loglik(const double* thetas, std::size_t k, double n,
                          double mean_sq_dev, double* out) {
  const __m256d half_n = _mm256_set1_pd(0.5 * n);
  const __m256d half_nss = _mm256_set1_pd(0.5 * n * mean_sq_dev);
  const __m256d log2pi = _mm256_set1_pd(kLog2Pi);
  const __m256d neg_inf = _mm256_set1_pd(kNegInf);
  std::size_t i = 0;
  for (; i + 4 <= k; i += 4) {
    const __m256d t = _mm256_loadu_pd(thetas + i);
    const __m256d lt = _mm256_add_pd(log_pd(t), log2pi);
    __m256d ll = _mm256_fnmadd_pd(half_n, lt, _mm256_setzero_pd());
    ll = _mm256_sub_pd(ll, _mm256_div_pd(half_nss, t));
    const __m256d bad = _mm256_cmp_pd(t, _mm256_setzero_pd(), _CMP_LE_OQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(ll, neg_inf, bad));
  }
  const double hn = 0.5 * n;
  const double hs = 0.5 * n * mean_sq_dev;
  for (; i < k; ++i) {
    const double t = thetas[i];
    out[i] = t > 0.0 ? -hn * (kLog2Pi + std::log(t)) - hs / t : kNegInf;
  }
}

}  // namespace

const KernelTable avx2_table = {
    avx2_sum,  avx2_sum_sq_dev, avx2_dot, avx2_max, avx2_logsumexp,
    avx2_abs,  avx2_log,        avx2_exp, avx2_gaussian_loglik,
};

}  // namespace ssv::simd::detail
