#pragma once

// Naive reference implementations used only to cross-check the tensor ops.
// Deliberately written as direct loops with none of the library's code paths.

#include <cmath>
#include <vector>

namespace oracles {

// input [L x D], filters [F x R x D], bias [F] -> [(L+2p-R+1) x F].
inline std::vector<double> conv1d(const std::vector<double>& input, int L, int D,
                                  const std::vector<double>& filters, int F, int R,
                                  const std::vector<double>& bias, int pad) {
    int T = L + 2 * pad - R + 1;
    std::vector<double> out(static_cast<std::size_t>(T) * F, 0.0);
    for (int t = 0; t < T; ++t) {
        for (int f = 0; f < F; ++f) {
            double acc = bias[f];
            for (int r = 0; r < R; ++r) {
                int row = t + r - pad;
                if (row < 0 || row >= L) continue;  // zero padding
                for (int d = 0; d < D; ++d)
                    acc += input[static_cast<std::size_t>(row) * D + d] *
                           filters[(static_cast<std::size_t>(f) * R + r) * D + d];
            }
            out[static_cast<std::size_t>(t) * F + f] = acc;
        }
    }
    return out;
}

// Columnwise max of a [T x F] matrix.
inline std::vector<double> max_pool_time(const std::vector<double>& x, int T, int F) {
    std::vector<double> out(F);
    for (int f = 0; f < F; ++f) {
        double best = x[f];
        for (int t = 1; t < T; ++t) best = std::max(best, x[static_cast<std::size_t>(t) * F + f]);
        out[f] = best;
    }
    return out;
}

// Direct definition in long double, no max-shift trick.
inline std::vector<double> softmax(const std::vector<double>& logits) {
    long double denom = 0.0L;
    for (double v : logits) denom += expl(static_cast<long double>(v));
    std::vector<double> out(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i)
        out[i] = static_cast<double>(expl(static_cast<long double>(logits[i])) / denom);
    return out;
}

inline double cross_entropy(const std::vector<double>& logits, int target) {
    long double denom = 0.0L;
    for (double v : logits) denom += expl(static_cast<long double>(v));
    return static_cast<double>(-(static_cast<long double>(logits[target]) - logl(denom)));
}

inline double rmse(const std::vector<double>& a, const std::vector<double>& b) {
    long double se = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        long double d = a[i] - b[i];
        se += d * d;
    }
    return static_cast<double>(sqrtl(se / a.size()));
}

}  // namespace oracles
