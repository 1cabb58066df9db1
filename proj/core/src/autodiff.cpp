#include "jokemeter/autodiff.hpp"

#include <algorithm>
#include <cmath>

namespace jokemeter {

Tape::NodeId Tape::push(Tensor value, std::function<void(Tape&)> back) {
    Node n;
    n.grad = Tensor(value.shape);
    n.value = std::move(value);
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
}

Tape::NodeId Tape::leaf(Parameter& p) {
    NodeId id = push(p.value);
    nodes_[id].param = &p;
    return id;
}

Tape::NodeId Tape::constant(Tensor t) { return push(std::move(t)); }

Tape::NodeId Tape::embedding_lookup(NodeId table, const std::vector<int>& ids) {
    const Tensor& tab = value(table);
    if (tab.shape.size() != 2) throw std::invalid_argument("embedding table must be 2-D");
    int V = tab.dim(0), D = tab.dim(1);
    int L = static_cast<int>(ids.size());
    Tensor out({L, D});
    for (int i = 0; i < L; ++i) {
        int id = ids[i];
        if (id < 0 || id >= V) throw std::out_of_range("token id out of embedding range");
        std::copy_n(&tab.values[static_cast<std::int64_t>(id) * D], D, &out.values[static_cast<std::int64_t>(i) * D]);
    }
    NodeId self = push(std::move(out));
    nodes_[self].back = [self, table, ids, D](Tape& t) {
        const Tensor& g = t.grad(self);
        Tensor& tg = t.grad(table);
        int L = static_cast<int>(ids.size());
        for (int i = 0; i < L; ++i) {
            double* dst = &tg.values[static_cast<std::int64_t>(ids[i]) * D];
            const double* src = &g.values[static_cast<std::int64_t>(i) * D];
            for (int d = 0; d < D; ++d) dst[d] += src[d];
        }
    };
    return self;
}

Tape::NodeId Tape::conv1d(NodeId input, NodeId filters, NodeId bias, int pad) {
    const Tensor& x = value(input);
    const Tensor& w = value(filters);
    const Tensor& b = value(bias);
    if (x.shape.size() != 2 || w.shape.size() != 3 || b.shape.size() != 1)
        throw std::invalid_argument("conv1d shape ranks");
    int L = x.dim(0), D = x.dim(1);
    int F = w.dim(0), R = w.dim(1);
    if (w.dim(2) != D || b.dim(0) != F) throw std::invalid_argument("conv1d shape mismatch");
    int T = L + 2 * pad - R + 1;
    if (T < 1) throw std::invalid_argument("conv1d region larger than padded input");

    Tensor out({T, F});
    for (int t = 0; t < T; ++t) {
        for (int f = 0; f < F; ++f) {
            double acc = b[f];
            const double* wf = &w.values[static_cast<std::int64_t>(f) * R * D];
            for (int r = 0; r < R; ++r) {
                int pos = t + r - pad;
                if (pos < 0 || pos >= L) continue;
                const double* xr = &x.values[static_cast<std::int64_t>(pos) * D];
                const double* wr = wf + static_cast<std::int64_t>(r) * D;
                for (int d = 0; d < D; ++d) acc += xr[d] * wr[d];
            }
            out.at(t, f) = acc;
        }
    }
    NodeId self = push(std::move(out));
    nodes_[self].back = [self, input, filters, bias, pad, L, D, F, R, T](Tape& tp) {
        const Tensor& g = tp.grad(self);
        const Tensor& x = tp.value(input);
        const Tensor& w = tp.value(filters);
        Tensor& gx = tp.grad(input);
        Tensor& gw = tp.grad(filters);
        Tensor& gb = tp.grad(bias);
        for (int t = 0; t < T; ++t) {
            for (int f = 0; f < F; ++f) {
                double go = g.at(t, f);
                if (go == 0.0) continue;
                gb[f] += go;
                const double* wf = &w.values[static_cast<std::int64_t>(f) * R * D];
                double* gwf = &gw.values[static_cast<std::int64_t>(f) * R * D];
                for (int r = 0; r < R; ++r) {
                    int pos = t + r - pad;
                    if (pos < 0 || pos >= L) continue;
                    const double* xr = &x.values[static_cast<std::int64_t>(pos) * D];
                    double* gxr = &gx.values[static_cast<std::int64_t>(pos) * D];
                    const double* wr = wf + static_cast<std::int64_t>(r) * D;
                    double* gwr = gwf + static_cast<std::int64_t>(r) * D;
                    for (int d = 0; d < D; ++d) {
                        gxr[d] += go * wr[d];
                        gwr[d] += go * xr[d];
                    }
                }
            }
        }
    };
    return self;
}

Tape::NodeId Tape::leaky_relu(NodeId x, double slope) {
    const Tensor& in = value(x);
    Tensor out(in.shape);
    for (std::int64_t i = 0; i < in.size(); ++i)
        out[i] = in[i] >= 0.0 ? in[i] : slope * in[i];
    NodeId self = push(std::move(out));
    // Derivative at exactly 0 is 1.
    nodes_[self].back = [self, x, slope](Tape& tp) {
        const Tensor& g = tp.grad(self);
        const Tensor& in = tp.value(x);
        Tensor& gx = tp.grad(x);
        for (std::int64_t i = 0; i < in.size(); ++i)
            gx[i] += g[i] * (in[i] >= 0.0 ? 1.0 : slope);
    };
    return self;
}

Tape::NodeId Tape::max_pool_time(NodeId x) {
    const Tensor& in = value(x);
    if (in.shape.size() != 2) throw std::invalid_argument("max_pool_time needs 2-D input");
    int T = in.dim(0), F = in.dim(1);
    Tensor out({F});
    std::vector<int> argmax(F, 0);
    for (int f = 0; f < F; ++f) {
        double best = in.at(0, f);
        int bt = 0;
        for (int t = 1; t < T; ++t) {
            if (in.at(t, f) > best) {  // strict: ties keep the lowest index
                best = in.at(t, f);
                bt = t;
            }
        }
        out[f] = best;
        argmax[f] = bt;
    }
    NodeId self = push(std::move(out));
    nodes_[self].back = [self, x, argmax, F](Tape& tp) {
        const Tensor& g = tp.grad(self);
        Tensor& gx = tp.grad(x);
        for (int f = 0; f < F; ++f) gx.at(argmax[f], f) += g[f];
    };
    return self;
}

Tape::NodeId Tape::mean_rows(NodeId x, int begin, int end) {
    const Tensor& in = value(x);
    if (in.shape.size() != 2) throw std::invalid_argument("mean_rows needs 2-D input");
    if (begin < 0 || end > in.dim(0) || begin >= end)
        throw std::invalid_argument("mean_rows: empty or out-of-range row span");
    int D = in.dim(1);
    int K = end - begin;
    Tensor out({D});
    for (int r = begin; r < end; ++r)
        for (int d = 0; d < D; ++d) out[d] += in.at(r, d);
    for (int d = 0; d < D; ++d) out[d] /= K;
    NodeId self = push(std::move(out));
    nodes_[self].back = [self, x, begin, end, D, K](Tape& tp) {
        const Tensor& g = tp.grad(self);
        Tensor& gx = tp.grad(x);
        for (int r = begin; r < end; ++r)
            for (int d = 0; d < D; ++d) gx.at(r, d) += g[d] / K;
    };
    return self;
}

Tape::NodeId Tape::concat(const std::vector<NodeId>& parts) {
    int total = 0;
    for (NodeId p : parts) {
        if (value(p).shape.size() != 1) throw std::invalid_argument("concat needs 1-D parts");
        total += value(p).dim(0);
    }
    Tensor out({total});
    int off = 0;
    for (NodeId p : parts) {
        const Tensor& v = value(p);
        std::copy(v.values.begin(), v.values.end(), out.values.begin() + off);
        off += v.dim(0);
    }
    NodeId self = push(std::move(out));
    nodes_[self].back = [self, parts](Tape& tp) {
        const Tensor& g = tp.grad(self);
        int off = 0;
        for (NodeId p : parts) {
            Tensor& gp = tp.grad(p);
            for (std::int64_t i = 0; i < gp.size(); ++i) gp[i] += g[off + i];
            off += static_cast<int>(gp.size());
        }
    };
    return self;
}

Tape::NodeId Tape::linear(NodeId x, NodeId W, NodeId b) {
    const Tensor& xv = value(x);
    const Tensor& Wv = value(W);
    const Tensor& bv = value(b);
    if (xv.shape.size() != 1 || Wv.shape.size() != 2 || bv.shape.size() != 1)
        throw std::invalid_argument("linear shape ranks");
    int N = xv.dim(0), M = Wv.dim(0);
    if (Wv.dim(1) != N || bv.dim(0) != M) throw std::invalid_argument("linear shape mismatch");
    Tensor out({M});
    for (int m = 0; m < M; ++m) {
        double acc = bv[m];
        const double* wr = &Wv.values[static_cast<std::int64_t>(m) * N];
        for (int n = 0; n < N; ++n) acc += wr[n] * xv[n];
        out[m] = acc;
    }
    NodeId self = push(std::move(out));
    nodes_[self].back = [self, x, W, b, M, N](Tape& tp) {
        const Tensor& g = tp.grad(self);
        const Tensor& xv = tp.value(x);
        const Tensor& Wv = tp.value(W);
        Tensor& gx = tp.grad(x);
        Tensor& gW = tp.grad(W);
        Tensor& gb = tp.grad(b);
        for (int m = 0; m < M; ++m) {
            double gm = g[m];
            gb[m] += gm;
            const double* wr = &Wv.values[static_cast<std::int64_t>(m) * N];
            double* gwr = &gW.values[static_cast<std::int64_t>(m) * N];
            for (int n = 0; n < N; ++n) {
                gx[n] += gm * wr[n];
                gwr[n] += gm * xv[n];
            }
        }
    };
    return self;
}

std::vector<double> softmax_values(const std::vector<double>& logits) {
    double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - mx);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

Tape::NodeId Tape::softmax(NodeId x) {
    const Tensor& in = value(x);
    if (in.shape.size() != 1) throw std::invalid_argument("softmax needs 1-D input");
    for (double v : in.values)
        if (std::isnan(v)) throw std::invalid_argument("NaN in softmax input");
    Tensor out(in.shape, softmax_values(in.values));
    NodeId self = push(std::move(out));
    nodes_[self].back = [self, x](Tape& tp) {
        const Tensor& g = tp.grad(self);
        const Tensor& p = tp.value(self);
        Tensor& gx = tp.grad(x);
        double dot = 0.0;
        for (std::int64_t i = 0; i < p.size(); ++i) dot += g[i] * p[i];
        for (std::int64_t i = 0; i < p.size(); ++i) gx[i] += p[i] * (g[i] - dot);
    };
    return self;
}

Tape::NodeId Tape::cross_entropy(NodeId logits, int target) {
    const Tensor& in = value(logits);
    if (in.shape.size() != 1) throw std::invalid_argument("cross_entropy needs 1-D logits");
    int M = in.dim(0);
    if (target < 0 || target >= M) throw std::out_of_range("cross_entropy target out of range");
    double mx = *std::max_element(in.values.begin(), in.values.end());
    double lse = 0.0;
    for (double v : in.values) lse += std::exp(v - mx);
    lse = mx + std::log(lse);
    Tensor out({1});
    out[0] = lse - in[target];
    NodeId self = push(std::move(out));
    nodes_[self].back = [self, logits, target](Tape& tp) {
        double go = tp.grad(self)[0];
        const Tensor& in = tp.value(logits);
        Tensor& gx = tp.grad(logits);
        auto p = softmax_values(in.values);
        for (std::size_t i = 0; i < p.size(); ++i)
            gx[i] += go * (p[i] - (static_cast<int>(i) == target ? 1.0 : 0.0));
    };
    return self;
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    if (!av.same_shape(bv)) throw std::invalid_argument("add shape mismatch");
    Tensor out(av.shape);
    for (std::int64_t i = 0; i < av.size(); ++i) out[i] = av[i] + bv[i];
    NodeId self = push(std::move(out));
    nodes_[self].back = [self, a, b](Tape& tp) {
        const Tensor& g = tp.grad(self);
        Tensor& ga = tp.grad(a);
        Tensor& gb = tp.grad(b);
        for (std::int64_t i = 0; i < g.size(); ++i) {
            ga[i] += g[i];
            gb[i] += g[i];
        }
    };
    return self;
}

Tape::NodeId Tape::scale(NodeId a, double s) {
    const Tensor& av = value(a);
    Tensor out(av.shape);
    for (std::int64_t i = 0; i < av.size(); ++i) out[i] = av[i] * s;
    NodeId self = push(std::move(out));
    nodes_[self].back = [self, a, s](Tape& tp) {
        const Tensor& g = tp.grad(self);
        Tensor& ga = tp.grad(a);
        for (std::int64_t i = 0; i < g.size(); ++i) ga[i] += g[i] * s;
    };
    return self;
}

void Tape::backward(NodeId loss) {
    if (loss < 0 || loss >= static_cast<NodeId>(nodes_.size()))
        throw std::invalid_argument("backward on node not recorded by this tape");
    if (nodes_[loss].value.size() != 1)
        throw std::invalid_argument("backward requires a scalar loss");
    for (auto& n : nodes_) n.grad.fill(0.0);
    nodes_[loss].grad[0] = 1.0;
    for (NodeId i = loss; i >= 0; --i)
        if (nodes_[i].back) nodes_[i].back(*this);
    for (auto& n : nodes_) {
        if (n.param && n.param->trainable) {
            Tensor& pg = n.param->grad;
            for (std::int64_t i = 0; i < pg.size(); ++i) pg[i] += n.grad[i];
        }
    }
}

}  // namespace jokemeter
