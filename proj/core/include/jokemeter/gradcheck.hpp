#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jokemeter/tensor.hpp"

namespace jokemeter {

struct GradCheckOptions {
    double h = 1e-5;
    // Coordinates sampled per parameter; -1 checks all of them.
    int max_coords_per_param = -1;
    unsigned long long seed = 0;
    // Denominator floor for the relative error.
    double floor = 1e-8;
};

struct GradCheckEntry {
    std::string param;
    std::int64_t coord;
    double analytic;
    double numeric;
    double rel_error;
};

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::int64_t checked = 0;
    GradCheckEntry worst;
};

// Central finite differences against analytic gradients. `loss` evaluates
// the forward pass at the current parameter values; `backprop` must zero
// gradients, rerun the forward pass, and call backward. Both must be
// deterministic.
GradCheckReport grad_check(const std::function<double()>& loss,
                           const std::function<void()>& backprop,
                           const std::vector<Parameter*>& params,
                           GradCheckOptions opts = {});

}  // namespace jokemeter
