#pragma once

#include <functional>

#include "mel/types.hpp"

namespace mel {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kThreadsEnvVar = "METRIC_EIGENLEARN_THREADS";

/// Sets the default worker count used by map evaluations. Values < 1 mean 1.
void set_default_jobs(int jobs);

/// Resolved worker count: METRIC_EIGENLEARN_THREADS wins over set_default_jobs.
int effective_jobs();

/* Runs fn(i) for i in [0, count). Work is split into contiguous chunks, one
 * per worker, so results are independent of the schedule as long as distinct
 * indices touch distinct state. */
void parallel_for(Index count, const std::function<void(Index)>& fn);

}  // namespace mel
