#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace jokemeter {

// Dense row-major 64-bit float tensor.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> values;

    Tensor() = default;
    explicit Tensor(std::vector<int> shape_) : shape(std::move(shape_)) {
        values.assign(count(shape), 0.0);
    }
    Tensor(std::vector<int> shape_, std::vector<double> values_)
        : shape(std::move(shape_)), values(std::move(values_)) {
        if (static_cast<std::int64_t>(values.size()) != count(shape))
            throw std::invalid_argument("tensor value count does not match shape");
    }

    static std::int64_t count(const std::vector<int>& shape) {
        std::int64_t n = 1;
        for (int e : shape) {
            if (e <= 0) throw std::invalid_argument("non-positive tensor extent");
            n *= e;
        }
        return n;
    }

    std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
    int dim(int i) const { return shape.at(i); }

    double& operator[](std::int64_t i) { return values[i]; }
    double operator[](std::int64_t i) const { return values[i]; }

    // 2-D accessors.
    double& at(int r, int c) { return values[static_cast<std::int64_t>(r) * shape[1] + c]; }
    double at(int r, int c) const { return values[static_cast<std::int64_t>(r) * shape[1] + c]; }

    void fill(double v) { std::fill(values.begin(), values.end(), v); }
    bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

// A trainable tensor with its accumulated gradient.
struct Parameter {
    std::string name;
    Tensor value;
    Tensor grad;
    bool trainable = true;

    Parameter() = default;
    Parameter(std::string name_, Tensor value_)
        : name(std::move(name_)), value(std::move(value_)), grad(value.shape) {}

    void zero_grad() { grad.fill(0.0); }
};

}  // namespace jokemeter
