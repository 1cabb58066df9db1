#pragma once

#include <string>
#include <vector>

#include "jokemeter/corpus.hpp"
#include "jokemeter/model.hpp"
#include "jokemeter/textprep.hpp"

namespace jokemeter {

// all_grades: each sample duplicated five times, one grade per copy.
// third_grade: one instance per sample, target = the third grade of the
// descending list.
enum class Regime { all_grades, third_grade };

struct TrainConfig {
    Regime regime = Regime::all_grades;
    int batch_size = 16;
    double learning_rate = 1e-5;
    double weight_decay = 0.01;
    int patience = 5;
    int max_epochs = 100;
    std::uint64_t seed = 0;
    // Stop once the epoch train loss drops below this value; 0 disables.
    double stop_at_train_loss = 0.0;
    // One CSV record per epoch (epoch,train_loss,dev_rmse) when non-empty.
    std::string run_log_path;

    void validate() const;
};

struct TrainInstance {
    TokenSequence seq;
    int target_class = 0;
    std::string source_id;
};

struct TrainReport {
    std::vector<double> train_loss;
    std::vector<double> dev_rmse;
    int best_epoch = -1;
    std::string stop_reason;
};

std::vector<TrainInstance> expand_all_grades(const Task1Dataset& ds, const Vocab& vocab,
                                             int seq_len = kDefaultSeqLen);
std::vector<TrainInstance> select_third_grade(const Task1Dataset& ds, const Vocab& vocab,
                                              int seq_len = kDefaultSeqLen);

// Patience logic on a dev-RMSE series: strictly lower than the best so far
// counts as improvement. Returns the best epoch and the epoch after which
// training stops (last index if patience is never exhausted).
struct EarlyStopTrace {
    int best_epoch;
    int stop_epoch;
};
EarlyStopTrace early_stop(const std::vector<double>& dev_rmse, int patience);

struct TrainResult {
    JokeMeterParams params;  // best-dev checkpoint
    TrainReport report;
};

TrainResult train(const ModelConfig& mcfg, const TrainConfig& tcfg, const Vocab& vocab,
                  const Task1Dataset& train_ds, const Task1Dataset& dev_ds);

}  // namespace jokemeter
