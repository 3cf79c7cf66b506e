// Deterministic task sharding: each index does independent work (own RNG
// stream, own output slot), so results do not depend on worker count or
// scheduling. SIEGELLAB_WORKERS overrides the worker count.
#pragma once

#include <functional>

namespace siegellab::util {

int worker_count(int requested = 0);

void parallel_for(long long n, int workers, const std::function<void(long long)>& body);

} // namespace siegellab::util
