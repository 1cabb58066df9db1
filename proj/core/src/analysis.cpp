#include "jokemeter/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace jokemeter {

double oracle_position_rmse(const Task1Dataset& ds, int position) {
    if (position < 1 || position > 5) throw std::out_of_range("position must be in 1..5");
    if (ds.records.empty()) throw std::invalid_argument("empty dataset");
    double se = 0.0;
    for (const auto& h : ds.records) {
        double d = h.grades.at(position - 1) - h.mean_grade;
        se += d * d;
    }
    return std::sqrt(se / ds.records.size());
}

double constant_grade_rmse(const Task1Dataset& ds, int grade) {
    if (grade < 0 || grade > 3) throw std::out_of_range("grade must be in 0..3");
    if (ds.records.empty()) throw std::invalid_argument("empty dataset");
    double se = 0.0;
    for (const auto& h : ds.records) {
        double d = grade - h.mean_grade;
        se += d * d;
    }
    return std::sqrt(se / ds.records.size());
}

DatasetStats histogram_and_position_counts(const Task1Dataset& ds) {
    DatasetStats s;
    for (const auto& h : ds.records) {
        // +1e-9 keeps exact bin edges (0.3, 0.6, ...) left-inclusive
        // despite 0.3 not being representable in binary.
        int bin = std::min(10, static_cast<int>(std::floor(h.mean_grade / 0.3 + 1e-9)));
        ++s.histogram[bin];
        for (int p = 0; p < 5; ++p) {
            ++s.position_counts[p][h.grades[p]];
            ++s.position_counts[5][h.grades[p]];
        }
    }
    return s;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& xs) {
    std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&xs](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::size_t n = xs.size();
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

bool zero_variance(const std::vector<double>& xs) {
    for (double v : xs)
        if (v != xs.front()) return false;
    return true;
}

double population_stddev(const std::vector<double>& xs) {
    double m = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double acc = 0.0;
    for (double v : xs) acc += (v - m) * (v - m);
    return std::sqrt(acc / xs.size());
}

std::vector<FeatureStat> feature_stats(const ModelConfig& cfg,
                                       const std::vector<std::vector<double>>& features,
                                       const std::vector<double>& targets) {
    int n_features = static_cast<int>(cfg.region_sizes.size()) * cfg.filters_per_region;
    std::vector<FeatureStat> out;
    for (int f = 0; f < n_features; ++f) {
        std::vector<double> col;
        col.reserve(features.size());
        for (const auto& row : features) col.push_back(row[f]);
        FeatureStat st;
        st.region_size = cfg.region_sizes[f / cfg.filters_per_region];
        st.filter_index = f % cfg.filters_per_region;
        st.stddev = population_stddev(col);
        st.spearman_vs_mean_grade = spearman(col, targets);
        out.push_back(st);
    }
    return out;
}

}  // namespace

std::optional<double> spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("spearman length mismatch");
    if (xs.size() < 2) throw std::invalid_argument("spearman needs at least two points");
    if (zero_variance(xs) || zero_variance(ys)) return std::nullopt;
    return pearson(average_ranks(xs), average_ranks(ys));
}

FeatureCorrelationReport feature_correlation_report(const ModelConfig& cfg,
                                                    JokeMeterParams& params,
                                                    const Vocab& vocab,
                                                    const Task1Dataset& ds) {
    FeatureCorrelationReport rep;
    std::vector<std::vector<double>> pooled;
    std::vector<double> means;
    for (const auto& h : ds.records) {
        Tape tape;
        auto seq = encode(vocab, assemble_input(h), cfg.seq_len);
        auto fwd = forward(tape, cfg, params, seq);
        pooled.push_back(fwd.pooled);
        means.push_back(h.mean_grade);
    }
    rep.n_samples = static_cast<long>(pooled.size());
    rep.per_sample = feature_stats(cfg, pooled, means);

    // Five-fold expansion (one copy per grade, same features).
    std::vector<std::vector<double>> pooled5;
    std::vector<double> means5;
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        for (int k = 0; k < 5; ++k) {
            pooled5.push_back(pooled[i]);
            means5.push_back(means[i]);
        }
    }
    rep.n_instances = static_cast<long>(pooled5.size());
    rep.per_instance = feature_stats(cfg, pooled5, means5);
    return rep;
}

AnalysisReport analyze_dataset(const Task1Dataset& ds) {
    AnalysisReport r;
    r.n = static_cast<long>(ds.records.size());
    for (int p = 1; p <= 5; ++p) r.oracle_rmse[p - 1] = oracle_position_rmse(ds, p);
    for (int g = 0; g < 4; ++g) r.constant_rmse[g] = constant_grade_rmse(ds, g);
    r.stats = histogram_and_position_counts(ds);
    return r;
}

std::string format_analysis_report(const AnalysisReport& r) {
    std::ostringstream os;
    os << "samples," << r.n << "\n\n";
    os << "oracle_position_rmse\nposition,rmse\n";
    for (int p = 0; p < 5; ++p) os << (p + 1) << "," << r.oracle_rmse[p] << "\n";
    os << "\nconstant_grade_rmse\ngrade,rmse\n";
    for (int g = 0; g < 4; ++g) os << g << "," << r.constant_rmse[g] << "\n";
    os << "\nmean_grade_histogram (left-inclusive bins)\nbin,count\n";
    for (int b = 0; b < kHistogramBins; ++b) {
        if (b < 10)
            os << (b * 0.3) << "-" << ((b + 1) * 0.3) << "," << r.stats.histogram[b] << "\n";
        else
            os << "3.0," << r.stats.histogram[b] << "\n";
    }
    os << "\nposition_grade_counts\nposition,grade0,grade1,grade2,grade3\n";
    for (int p = 0; p < 6; ++p) {
        os << (p < 5 ? std::to_string(p + 1) : std::string("any"));
        for (int g = 0; g < 4; ++g) os << "," << r.stats.position_counts[p][g];
        os << "\n";
    }
    return os.str();
}

std::string format_feature_report(const FeatureCorrelationReport& r) {
    std::ostringstream os;
    os << "# sigma is the population standard deviation; r_s is '-' for zero variance\n";
    os << "# p-values are not computed; n is reported instead\n";
    auto table = [&os](const char* name, const std::vector<FeatureStat>& stats, long n) {
        os << name << " (n=" << n << ")\nregion_size,filter,sigma,r_s\n";
        for (const auto& st : stats) {
            os << st.region_size << "," << st.filter_index << "," << st.stddev << ",";
            if (st.spearman_vs_mean_grade) os << *st.spearman_vs_mean_grade;
            else os << "-";
            os << "\n";
        }
        os << "\n";
    };
    table("per_sample", r.per_sample, r.n_samples);
    table("per_expanded_instance", r.per_instance, r.n_instances);
    return os.str();
}

}  // namespace jokemeter
