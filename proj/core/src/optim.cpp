#include "jokemeter/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace jokemeter {

AdamW::AdamW(std::vector<Parameter*> params, Hyper h)
    : params_(std::move(params)), h_(h) {
    if (h_.lr <= 0.0) throw std::invalid_argument("learning rate must be positive");
    states_.reserve(params_.size());
    for (Parameter* p : params_) states_.push_back({Tensor(p->value.shape), Tensor(p->value.shape)});
}

void AdamW::step() {
    ++t_;
    double bc1 = 1.0 - std::pow(h_.beta1, static_cast<double>(t_));
    double bc2 = 1.0 - std::pow(h_.beta2, static_cast<double>(t_));
    for (std::size_t pi = 0; pi < params_.size(); ++pi) {
        Parameter& p = *params_[pi];
        if (!p.trainable) continue;
        State& s = states_[pi];
        for (std::int64_t i = 0; i < p.value.size(); ++i) {
            double g = p.grad[i];
            s.m[i] = h_.beta1 * s.m[i] + (1.0 - h_.beta1) * g;
            s.v[i] = h_.beta2 * s.v[i] + (1.0 - h_.beta2) * g * g;
            double mhat = s.m[i] / bc1;
            double vhat = s.v[i] / bc2;
            p.value[i] -= h_.lr * h_.weight_decay * p.value[i];
            p.value[i] -= h_.lr * mhat / (std::sqrt(vhat) + h_.eps);
        }
    }
}

void AdamW::zero_grad() {
    for (Parameter* p : params_) p->zero_grad();
}

}  // namespace jokemeter
