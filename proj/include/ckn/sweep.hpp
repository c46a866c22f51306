#pragma once

#include <string>

#include "ckn/config.hpp"

namespace ckn {

/// Phase-map sweep over two parameter axes. Emits one CSV row per cell,
/// columns mu1,mu2,theta,p,p_sharp,q_sharp,verdict,trace_len, in fixed
/// row-major grid order. Cells are pure and are distributed over a worker
/// pool; the output is byte-identical for any worker count. Per-cell failures
/// are recorded in the verdict column and the run continues.
///
/// The q_sharp column carries the measure-consistent exponent (the one the
/// verdict logic uses); it coincides with the plain form for mu1 = 0.
std::string sweep_csv(const RunConfig& cfg, int threads);

/// Worker count from CKNKIT_THREADS, clamped to [1, hardware_concurrency].
int sweep_thread_count();

} // namespace ckn
