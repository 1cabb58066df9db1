#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "jokemeter/corpus.hpp"
#include "jokemeter/model.hpp"

namespace jokemeter {

// RMSE of the hypothetical classifier that always emits the grade at the
// given annotation position (1..5), scored against the mean grade.
double oracle_position_rmse(const Task1Dataset& ds, int position);

// RMSE of always predicting the same grade g.
double constant_grade_rmse(const Task1Dataset& ds, int grade);

// 11 left-inclusive mean-grade bins [0,0.3) ... [2.7,3.0) plus {3.0}.
inline constexpr int kHistogramBins = 11;

struct DatasetStats {
    std::array<long, kHistogramBins> histogram{};
    // counts[p][g]: grade g at position p (0-based position); row 5 = any.
    std::array<std::array<long, 4>, 6> position_counts{};
};
DatasetStats histogram_and_position_counts(const Task1Dataset& ds);

// Spearman rank correlation with average ranks for ties; nullopt when
// either side has zero variance.
std::optional<double> spearman(const std::vector<double>& xs, const std::vector<double>& ys);

struct FeatureStat {
    int region_size;
    int filter_index;
    double stddev;                 // population
    std::optional<double> spearman_vs_mean_grade;
};

// Pooled-feature statistics over a dataset: per-feature population sigma
// and Spearman correlation against the mean grade. Computed both
// per-sample and over the five-fold expanded instance list.
struct FeatureCorrelationReport {
    std::vector<FeatureStat> per_sample;
    std::vector<FeatureStat> per_instance;
    long n_samples = 0;
    long n_instances = 0;
};
FeatureCorrelationReport feature_correlation_report(const ModelConfig& cfg,
                                                    JokeMeterParams& params,
                                                    const Vocab& vocab,
                                                    const Task1Dataset& ds);

struct AnalysisReport {
    std::array<double, 5> oracle_rmse{};
    std::array<double, 4> constant_rmse{};
    DatasetStats stats;
    long n = 0;
};
AnalysisReport analyze_dataset(const Task1Dataset& ds);

std::string format_analysis_report(const AnalysisReport& r);
std::string format_feature_report(const FeatureCorrelationReport& r);

}  // namespace jokemeter
