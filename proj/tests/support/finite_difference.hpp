#pragma once

// Independent derivative oracle for the analytic temperature derivatives.
// Central differences at h and h/2 combined by one Richardson step, which
// cancels the h^2 error term.

#include <cmath>

namespace testsupport {

template <class F>
double central_difference(F&& f, double x, double h)
{
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <class F>
double richardson_derivative(F&& f, double x, double rel_step = 1.0e-4)
{
    const double h = rel_step * std::abs(x);
    const double d1 = central_difference(f, x, h);
    const double d2 = central_difference(f, x, 0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

inline double relative_error(double value, double reference)
{
    if (reference == 0.0) {
        return std::abs(value);
    }
    return std::abs(value - reference) / std::abs(reference);
}

} // namespace testsupport
