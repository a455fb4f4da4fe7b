#pragma once

#include <cstddef>
#include <functional>

namespace chebmel {

/// Global worker count used when a call site passes jobs = 0.
/// 0 keeps the hardware default. Reads of CHEB_JOBS happen in the CLI.
void set_default_jobs(unsigned jobs);
unsigned default_jobs();

/// Runs body(i) for i in [0, n) across a small thread pool. Results must be
/// written to index-addressed storage so the outcome is deterministic.
/// Exceptions are captured and the first one rethrown after the join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned jobs = 0);

}  // namespace chebmel
