#pragma once

#include <string>
#include <vector>

namespace jokemeter {

struct Prediction {
    std::string id;
    double value;  // Task 1: real grade; Task 2: 1.0 or 2.0
};

// Scoring joins on id and fails loudly on missing or extra ids.
double rmse(const std::vector<Prediction>& preds, const std::vector<Prediction>& truths);
double accuracy(const std::vector<Prediction>& preds, const std::vector<Prediction>& truths);

enum class PredTask { task1, task2 };

// `id,pred` CSV, UTF-8, LF endings. Task 1 values keep >= 6 significant
// digits.
void write_predictions(const std::string& path, PredTask task,
                       const std::vector<Prediction>& preds);
std::vector<Prediction> read_predictions(const std::string& path, PredTask task);

struct ScoreCard {
    PredTask task;
    std::string metric;
    double value;
    long n;
};

}  // namespace jokemeter
