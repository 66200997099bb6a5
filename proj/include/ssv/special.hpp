#pragma once

namespace ssv {

/// log Γ(x) for x > 0 (Lanczos approximation, relative error < 1e-13 over
/// the working range). Implemented in-house so results are identical across
/// C libraries and safe under concurrent calls (C lgamma races on signgam).
/// Throws ssv::domain_error for x <= 0 or non-finite x.
double lgamma_pos(double x);

}  // namespace ssv
