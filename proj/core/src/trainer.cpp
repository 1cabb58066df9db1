#include "jokemeter/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "jokemeter/optim.hpp"

namespace jokemeter {

void TrainConfig::validate() const {
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (patience < 1) throw std::invalid_argument("patience must be >= 1");
    if (max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
    if (learning_rate < 0.0) throw std::invalid_argument("learning_rate must be >= 0");
}

std::vector<TrainInstance> expand_all_grades(const Task1Dataset& ds, const Vocab& vocab,
                                             int seq_len) {
    std::vector<TrainInstance> out;
    out.reserve(ds.records.size() * 5);
    for (const auto& h : ds.records) {
        auto seq = encode(vocab, assemble_input(h), seq_len);
        for (int g : h.grades) out.push_back({seq, g, h.id});
    }
    return out;
}

std::vector<TrainInstance> select_third_grade(const Task1Dataset& ds, const Vocab& vocab,
                                              int seq_len) {
    std::vector<TrainInstance> out;
    out.reserve(ds.records.size());
    for (const auto& h : ds.records)
        out.push_back({encode(vocab, assemble_input(h), seq_len), h.grades.at(2), h.id});
    return out;
}

EarlyStopTrace early_stop(const std::vector<double>& dev_rmse, int patience) {
    if (dev_rmse.empty()) throw std::invalid_argument("empty dev RMSE series");
    int best = 0;
    int since_best = 0;
    for (int e = 1; e < static_cast<int>(dev_rmse.size()); ++e) {
        if (dev_rmse[e] < dev_rmse[best]) {
            best = e;
            since_best = 0;
        } else if (++since_best >= patience) {
            return {best, e};
        }
    }
    return {best, static_cast<int>(dev_rmse.size()) - 1};
}

namespace {

// Fisher-Yates with an explicit engine; std::shuffle's draw sequence is
// implementation-defined.
void seeded_shuffle(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        std::size_t j = rng() % i;
        std::swap(idx[i - 1], idx[j]);
    }
}

double dev_rmse_eval(const ModelConfig& mcfg, JokeMeterParams& params, const Vocab& vocab,
                     const Task1Dataset& dev_ds) {
    double se = 0.0;
    for (const auto& h : dev_ds.records) {
        double pred = predict_task1(mcfg, params, vocab, h);
        se += (pred - h.mean_grade) * (pred - h.mean_grade);
    }
    return std::sqrt(se / dev_ds.records.size());
}

std::vector<Tensor> snapshot(const JokeMeterParams& params) {
    std::vector<Tensor> out;
    for (const Parameter* p : params.all()) out.push_back(p->value);
    return out;
}

void restore(JokeMeterParams& params, const std::vector<Tensor>& snap) {
    auto ptrs = params.all();
    for (std::size_t i = 0; i < ptrs.size(); ++i) ptrs[i]->value = snap[i];
}

}  // namespace

TrainResult train(const ModelConfig& mcfg, const TrainConfig& tcfg, const Vocab& vocab,
                  const Task1Dataset& train_ds, const Task1Dataset& dev_ds) {
    mcfg.validate();
    tcfg.validate();
    if (train_ds.records.empty() || dev_ds.records.empty())
        throw std::invalid_argument("train and dev datasets must be non-empty");

    auto instances = tcfg.regime == Regime::all_grades
                         ? expand_all_grades(train_ds, vocab, mcfg.seq_len)
                         : select_third_grade(train_ds, vocab, mcfg.seq_len);

    TrainResult result{init_params(mcfg, tcfg.seed), {}};
    JokeMeterParams& params = result.params;
    TrainReport& report = result.report;

    AdamW::Hyper hyper;
    hyper.lr = tcfg.learning_rate > 0.0 ? tcfg.learning_rate : 1e-30;
    hyper.weight_decay = tcfg.learning_rate > 0.0 ? tcfg.weight_decay : 0.0;
    AdamW opt(params.all(), hyper);

    std::ofstream log;
    if (!tcfg.run_log_path.empty()) {
        log.open(tcfg.run_log_path);
        if (!log) throw std::runtime_error("cannot write run log: " + tcfg.run_log_path);
        log << "epoch,train_loss,dev_rmse\n";
    }

    std::mt19937_64 rng(tcfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<std::size_t> order(instances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<Tensor> best_snapshot = snapshot(params);
    double best_rmse = std::numeric_limits<double>::infinity();
    int since_best = 0;

    for (int epoch = 0; epoch < tcfg.max_epochs; ++epoch) {
        seeded_shuffle(order, rng);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += tcfg.batch_size) {
            std::size_t end = std::min(order.size(), start + tcfg.batch_size);
            Tape tape;
            Tape::NodeId batch_loss = -1;
            for (std::size_t i = start; i < end; ++i) {
                const TrainInstance& inst = instances[order[i]];
                auto fwd = forward(tape, mcfg, params, inst.seq);
                auto ce = tape.cross_entropy(fwd.logits, inst.target_class);
                batch_loss = (batch_loss < 0) ? ce : tape.add(batch_loss, ce);
            }
            double n = static_cast<double>(end - start);
            batch_loss = tape.scale(batch_loss, 1.0 / n);
            double loss = tape.value(batch_loss)[0];
            if (!std::isfinite(loss))
                throw std::runtime_error("non-finite training loss at epoch " +
                                         std::to_string(epoch));
            loss_sum += loss * n;
            opt.zero_grad();
            tape.backward(batch_loss);
            if (tcfg.learning_rate > 0.0) opt.step();
        }
        double train_loss = loss_sum / instances.size();
        double rmse = dev_rmse_eval(mcfg, params, vocab, dev_ds);
        report.train_loss.push_back(train_loss);
        report.dev_rmse.push_back(rmse);
        if (log) log << epoch << "," << train_loss << "," << rmse << "\n";

        if (rmse < best_rmse) {
            best_rmse = rmse;
            report.best_epoch = epoch;
            best_snapshot = snapshot(params);
            since_best = 0;
        } else if (++since_best >= tcfg.patience) {
            report.stop_reason = "patience exhausted";
            break;
        }
        if (tcfg.stop_at_train_loss > 0.0 && train_loss < tcfg.stop_at_train_loss) {
            report.stop_reason = "target train loss reached";
            best_snapshot = snapshot(params);
            report.best_epoch = epoch;
            break;
        }
    }
    if (report.stop_reason.empty()) report.stop_reason = "max epochs reached";

    restore(params, best_snapshot);
    return result;
}

}  // namespace jokemeter
