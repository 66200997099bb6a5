#include "ssv/special.hpp"

#include <cmath>

#include "ssv/common.hpp"

namespace ssv {
namespace {

// Lanczos coefficients, g = 7, 9 terms.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kHalfLog2Pi = 0.91893853320467274178;
constexpr double kPi = 3.14159265358979323846;

double lanczos_core(double x) {
  // Valid for x >= 0.5.
  double a = kLanczos[0];
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x - 1.0 + i);
  const double t = x + 6.5;
  return kHalfLog2Pi + (x - 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace

double lgamma_pos(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw domain_error("lgamma_pos requires finite x > 0");
  if (x >= 0.5) return lanczos_core(x);
  // Reflection keeps the Lanczos argument >= 0.5; sin(pi*x) > 0 on (0, 1/2].
  return std::log(kPi) - std::log(std::sin(kPi * x)) - lanczos_core(1.0 - x);
}

}  // namespace ssv
