#ifndef SPP_PARALLEL_HPP
#define SPP_PARALLEL_HPP

#include <functional>

namespace spp {

/// Process-wide worker cap for row-parallel loops (the CLI --threads flag).
/// Loops write disjoint outputs per index, so results do not depend on the
/// thread count.
void set_max_threads(int n);
int max_threads();

/// Runs fn(i) for i in [0, n) on up to max_threads() workers with static
/// contiguous partitioning. Exceptions propagate from the first failing
/// index range.
void parallel_for_rows(int n, const std::function<void(int)>& fn);

}  // namespace spp

#endif
