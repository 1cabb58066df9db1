#pragma once

#include <functional>
#include <vector>

#include "jokemeter/tensor.hpp"
#include "jokemeter/textprep.hpp"

namespace jokemeter {

// Reverse-mode tape. One tape owns one forward pass; backward replays the
// recorded ops in exact reverse order and accumulates into Parameter grads.
class Tape {
public:
    using NodeId = int;

    NodeId leaf(Parameter& p);
    NodeId constant(Tensor t);

    const Tensor& value(NodeId n) const { return nodes_.at(n).value; }
    Tensor& grad(NodeId n) { return nodes_.at(n).grad; }

    // out[i] = table[ids[i]]; PAD rows participate like any other row.
    NodeId embedding_lookup(NodeId table, const std::vector<int>& ids);
    // Full cross-correlation over the zero-padded sequence.
    // input [L x D], filters [F x R x D], bias [F] -> [(L+2p-R+1) x F].
    NodeId conv1d(NodeId input, NodeId filters, NodeId bias, int pad = 1);
    NodeId leaky_relu(NodeId x, double slope = 0.01);
    // Columnwise max over time; gradient routed to the lowest attaining index.
    NodeId max_pool_time(NodeId x);
    // Mean over rows [begin, end) of a [K x D] tensor.
    NodeId mean_rows(NodeId x, int begin, int end);
    NodeId concat(const std::vector<NodeId>& parts);
    // W [M x N], b [M], x [N] -> [M].
    NodeId linear(NodeId x, NodeId W, NodeId b);
    NodeId softmax(NodeId x);
    // Fused -log softmax(logits)[target]; scalar output.
    NodeId cross_entropy(NodeId logits, int target);
    NodeId add(NodeId a, NodeId b);
    NodeId scale(NodeId a, double s);

    // Seeds d(loss)=1, runs adjoints in reverse execution order, then adds
    // leaf gradients into their Parameters. Repeated calls accumulate.
    void backward(NodeId loss);

private:
    struct Node {
        Tensor value;
        Tensor grad;
        std::function<void(Tape&)> back;  // empty for leaves/constants
        Parameter* param = nullptr;
    };
    std::vector<Node> nodes_;

    NodeId push(Tensor value, std::function<void(Tape&)> back = {});
};

// Out-of-tape softmax for inference paths.
std::vector<double> softmax_values(const std::vector<double>& logits);

}  // namespace jokemeter
