#pragma once

#include <cstddef>
#include <span>

namespace combsense::parallel {

enum class Execution { parallel, serial };

// Threads used by the OpenMP kernels. 0 restores the runtime default.
void set_thread_count(int threads);
int thread_count();

// Summation in fixed blocks: partial sums may be formed concurrently, but the
// association order depends only on values.size(), so the result is
// bit-identical for any thread count and for the serial path.
inline constexpr std::size_t sum_block = 4096;
double deterministic_sum(std::span<const double> values, Execution exec = Execution::parallel);

} // namespace combsense::parallel
