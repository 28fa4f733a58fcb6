#include "combsense/parallel.hpp"

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace combsense::parallel {

void set_thread_count(int threads)
{
#ifdef _OPENMP
    omp_set_num_threads(threads > 0 ? threads : omp_get_num_procs());
#else
    (void)threads;
#endif
}

int thread_count()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

double deterministic_sum(std::span<const double> values, Execution exec)
{
    const std::size_t n = values.size();
    const std::size_t blocks = (n + sum_block - 1) / sum_block;
    std::vector<double> partial(blocks, 0.0);

#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * sum_block;
        const std::size_t end = begin + sum_block < n ? begin + sum_block : n;
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            s += values[i];
        }
        partial[static_cast<std::size_t>(b)] = s;
    }

    double total = 0.0;
    for (double p : partial) {
        total += p;
    }
    return total;
}

} // namespace combsense::parallel
