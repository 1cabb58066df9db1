#pragma once

#include <vector>

#include "jokemeter/tensor.hpp"

namespace jokemeter {

// Adam with decoupled weight decay. The decay shrinks parameters directly
// and never enters the moment estimates.
class AdamW {
public:
    struct Hyper {
        double lr = 1e-5;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double eps = 1e-8;
        double weight_decay = 0.01;
    };

    AdamW(std::vector<Parameter*> params, Hyper h);

    void step();
    void zero_grad();

    long timestep() const { return t_; }

private:
    struct State {
        Tensor m;
        Tensor v;
    };
    std::vector<Parameter*> params_;
    std::vector<State> states_;
    Hyper h_;
    long t_ = 0;
};

}  // namespace jokemeter
