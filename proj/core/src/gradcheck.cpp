#include "jokemeter/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace jokemeter {

GradCheckReport grad_check(const std::function<double()>& loss,
                           const std::function<void()>& backprop,
                           const std::vector<Parameter*>& params,
                           GradCheckOptions opts) {
    backprop();
    GradCheckReport report;
    std::mt19937_64 rng(opts.seed);
    for (Parameter* p : params) {
        std::vector<std::int64_t> coords;
        std::int64_t n = p->value.size();
        if (opts.max_coords_per_param < 0 || n <= opts.max_coords_per_param) {
            coords.resize(n);
            for (std::int64_t i = 0; i < n; ++i) coords[i] = i;
        } else {
            std::uniform_int_distribution<std::int64_t> dist(0, n - 1);
            for (int i = 0; i < opts.max_coords_per_param; ++i) coords.push_back(dist(rng));
        }
        for (std::int64_t c : coords) {
            double saved = p->value[c];
            p->value[c] = saved + opts.h;
            double up = loss();
            p->value[c] = saved - opts.h;
            double down = loss();
            p->value[c] = saved;
            double numeric = (up - down) / (2.0 * opts.h);
            double analytic = p->grad[c];
            double denom = std::max(opts.floor, std::abs(analytic) + std::abs(numeric));
            double rel = std::abs(analytic - numeric) / denom;
            ++report.checked;
            if (rel > report.max_rel_error) {
                report.max_rel_error = rel;
                report.worst = {p->name, c, analytic, numeric, rel};
            }
        }
    }
    return report;
}

}  // namespace jokemeter
