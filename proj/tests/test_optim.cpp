#include <doctest.h>

#include <jokemeter/autodiff.hpp>
#include <jokemeter/optim.hpp>

#include <cmath>

using namespace jokemeter;

TEST_SUITE_BEGIN("optim");

TEST_CASE("first step moves by roughly lr in the gradient's direction") {
    // With zero moment history the bias-corrected update is
    // -lr * g / (|g| + eps), i.e. almost exactly -lr * sign(g).
    Parameter p("p", Tensor({3}, {1.0, -2.0, 0.5}));
    p.grad = Tensor({3}, {0.3, -4.0, 10.0});
    AdamW::Hyper h;
    h.lr = 1e-2;
    h.weight_decay = 0.0;
    AdamW opt({&p}, h);
    opt.step();
    CHECK(p.value[0] == doctest::Approx(1.0 - 1e-2).epsilon(1e-6));
    CHECK(p.value[1] == doctest::Approx(-2.0 + 1e-2).epsilon(1e-6));
    CHECK(p.value[2] == doctest::Approx(0.5 - 1e-2).epsilon(1e-6));
    CHECK(opt.timestep() == 1);
}

TEST_CASE("hand-computed first step including decay") {
    double theta = 2.0, g = 0.5, lr = 0.1, wd = 0.01, eps = 1e-8;
    Parameter p("p", Tensor({1}, {theta}));
    p.grad = Tensor({1}, {g});
    AdamW::Hyper h;
    h.lr = lr;
    h.weight_decay = wd;
    AdamW opt({&p}, h);
    opt.step();
    // Decoupled decay first, then the Adam update with bias correction.
    double m_hat = g;       // m = 0.1*g, corrected by 1/(1-0.9)
    double v_hat = g * g;   // v = 0.001*g^2, corrected by 1/(1-0.999)
    double expect = theta - lr * wd * theta - lr * m_hat / (std::sqrt(v_hat) + eps);
    CHECK(p.value[0] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("weight decay shrinks parameters even with zero gradients") {
    Parameter p("p", Tensor({2}, {4.0, -4.0}));
    p.zero_grad();
    AdamW::Hyper h;
    h.lr = 0.1;
    h.weight_decay = 0.5;
    AdamW opt({&p}, h);
    opt.step();
    CHECK(p.value[0] == doctest::Approx(4.0 * (1 - 0.1 * 0.5)).epsilon(1e-12));
    CHECK(p.value[1] == doctest::Approx(-4.0 * (1 - 0.1 * 0.5)).epsilon(1e-12));
}

TEST_CASE("zero gradient and zero decay leave parameters untouched") {
    Parameter p("p", Tensor({2}, {1.25, -7.5}));
    p.zero_grad();
    AdamW::Hyper h;
    h.weight_decay = 0.0;
    AdamW opt({&p}, h);
    for (int i = 0; i < 5; ++i) opt.step();
    CHECK(p.value.values == std::vector<double>{1.25, -7.5});
}

TEST_CASE("descends a convex quadratic monotonically") {
    // f(theta) = 0.5 * sum theta_i^2, grad = theta.
    Parameter p("p", Tensor({3}, {2.0, -1.5, 0.75}));
    AdamW::Hyper h;
    h.lr = 0.05;
    h.weight_decay = 0.0;
    AdamW opt({&p}, h);
    auto f = [&] {
        double s = 0.0;
        for (double v : p.value.values) s += 0.5 * v * v;
        return s;
    };
    double initial = f();
    double prev = initial;
    for (int i = 0; i < 100; ++i) {
        p.grad = p.value;
        opt.step();
        double cur = f();
        // Far from the optimum every step descends; once the iterate starts
        // oscillating around zero the loss merely has to stay small.
        if (i < 10) CHECK(cur < prev);
        prev = cur;
    }
    CHECK(prev < initial / 20);
}

TEST_CASE("non-trainable parameters are skipped") {
    Parameter p("p", Tensor({1}, {3.0}));
    p.trainable = false;
    p.grad = Tensor({1}, {1.0});
    AdamW::Hyper h;
    h.lr = 0.1;
    AdamW opt({&p}, h);
    opt.step();
    CHECK(p.value[0] == 3.0);
}

TEST_CASE("zero_grad clears accumulated gradients") {
    Parameter p("p", Tensor({2}, {1.0, 2.0}));
    p.grad = Tensor({2}, {5.0, -5.0});
    AdamW opt({&p}, {});
    opt.zero_grad();
    CHECK(p.grad.values == std::vector<double>{0.0, 0.0});
}

TEST_SUITE_END();
