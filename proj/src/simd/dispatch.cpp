#include <atomic>
#include <stdexcept>

#include "ssv/common.hpp"
#include "ssv/simd/kernels.hpp"

namespace ssv::simd {
namespace {

bool detect_avx2() {
#if defined(SSV_HAVE_AVX2) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa default_isa() { return detect_avx2() ? Isa::Avx2 : Isa::Scalar; }

std::atomic<Isa> g_isa{default_isa()};

}  // namespace

bool avx2_available() {
  static const bool avail = detect_avx2();
  return avail;
}

Isa active_isa() { return g_isa.load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available())
    throw domain_error("AVX2 kernels requested but not available on this CPU");
  g_isa.store(isa, std::memory_order_relaxed);
}

void reset_isa() { g_isa.store(default_isa(), std::memory_order_relaxed); }

namespace detail {

const KernelTable& table() {
#if defined(SSV_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2_table;
#endif
  return scalar_table;
}

}  // namespace detail

double sum(std::span<const double> x) {
  return detail::table().sum(x.data(), x.size());
}

double sum_sq_dev(std::span<const double> x, double mu) {
  return detail::table().sum_sq_dev(x.data(), x.size(), mu);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw domain_error("dot: span lengths differ");
  return detail::table().dot(a.data(), b.data(), a.size());
}

double max(std::span<const double> x) {
  if (x.empty()) throw domain_error("max: empty input");
  return detail::table().max(x.data(), x.size());
}

double logsumexp(std::span<const double> x) {
  if (x.empty()) throw domain_error("logsumexp: empty input");
  return detail::table().logsumexp(x.data(), x.size());
}

void abs(std::span<const double> x, std::span<double> out) {
  if (x.size() != out.size()) throw domain_error("abs: span lengths differ");
  detail::table().abs(x.data(), x.size(), out.data());
}

void log(std::span<const double> x, std::span<double> out) {
  if (x.size() != out.size()) throw domain_error("log: span lengths differ");
  detail::table().log(x.data(), x.size(), out.data());
}

void exp(std::span<const double> x, std::span<double> out) {
  if (x.size() != out.size()) throw domain_error("exp: span lengths differ");
  detail::table().exp(x.data(), x.size(), out.data());
}

void gaussian_loglik(std::span<const double> thetas, double n,
                     double mean_sq_dev, std::span<double> out) {
  if (thetas.size() != out.size())
    throw domain_error("gaussian_loglik: span lengths differ");
  detail::table().gaussian_loglik(thetas.data(), thetas.size(), n,
                                  mean_sq_dev, out.data());
}

}  // namespace ssv::simd
