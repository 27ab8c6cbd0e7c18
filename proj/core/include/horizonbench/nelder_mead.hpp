#pragma once

#include <functional>
#include <vector>

namespace horizonbench {

struct NelderMeadOptions {
    int max_iterations = 500;
    /// Stop when max - min of the simplex values is below this.
    double f_tolerance = 1e-8;
    /// Edge length of the initial simplex along each axis.
    double initial_step = 0.1;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value;
    int iterations;
    bool converged;
};

/// Derivative-free simplex minimization (standard reflection / expansion /
/// contraction / shrink coefficients 1, 2, 0.5, 0.5). Non-finite objective
/// values are treated as +infinity.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace horizonbench
