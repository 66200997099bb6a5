#pragma once

#include <cstddef>
#include <span>

namespace ssv::simd {

enum class Isa { Scalar, Avx2 };

/// The instruction set the dispatcher currently resolves to.
Isa active_isa();

bool avx2_available();

/// Pin kernel dispatch to one variant (equivalence tests, debugging).
/// Throws ssv::domain_error if the requested ISA is not available.
void force_isa(Isa isa);

/// Return to automatic runtime selection.
void reset_isa();

// Reductions use fixed-shape pairwise summation: for a given input and ISA
// the result is bit-stable across runs and thread counts.

/// Sum of all elements; 0 for an empty span.
double sum(std::span<const double> x);

/// Sum of (x[i] - mu)^2.
double sum_sq_dev(std::span<const double> x, double mu);

/// Inner product; spans must have equal length.
double dot(std::span<const double> a, std::span<const double> b);

/// Largest element; throws on empty input.
double max(std::span<const double> x);

/// log(sum_i exp(x[i])) with max-shift stabilization; throws on empty input.
/// Returns -inf when every element is -inf.
double logsumexp(std::span<const double> x);

// Elementwise maps; `out` must have the same length as the input and may
// alias it.

void abs(std::span<const double> x, std::span<double> out);
void log(std::span<const double> x, std::span<double> out);
void exp(std::span<const double> x, std::span<double> out);

/// Batch Gaussian log-likelihood in the variance parameter:
///   out[i] = -(n/2)*log(2*pi*theta[i]) - n*mean_sq_dev/(2*theta[i])
/// theta[i] <= 0 yields -inf.
void gaussian_loglik(std::span<const double> thetas, double n,
                     double mean_sq_dev, std::span<double> out);

namespace detail {

struct KernelTable {
  double (*sum)(const double*, std::size_t);
  double (*sum_sq_dev)(const double*, std::size_t, double);
  double (*dot)(const double*, const double*, std::size_t);
  double (*max)(const double*, std::size_t);
  double (*logsumexp)(const double*, std::size_t);
  void (*abs)(const double*, std::size_t, double*);
  void (*log)(const double*, std::size_t, double*);
  void (*exp)(const double*, std::size_t, double*);
  void (*gaussian_loglik)(const double*, std::size_t, double, double, double*);
};

extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif

const KernelTable& table();

}  // namespace detail

}  // namespace ssv::simd
