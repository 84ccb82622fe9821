#pragma once

#include <functional>

namespace eqlayer {

/// Worker count: hardware concurrency, capped by EQLAYER_THREADS when set.
int worker_count();

/// Runs body(k) for k in [0, n) on up to worker_count() threads. The first
/// exception thrown by any call is rethrown after all workers finish.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace eqlayer
