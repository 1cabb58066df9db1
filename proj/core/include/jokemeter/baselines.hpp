#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "jokemeter/corpus.hpp"

namespace jokemeter {

// Sparse feature vector, sorted by feature index.
using SparseVec = std::vector<std::pair<int, double>>;

// Lowercased alphanumeric word tokens.
std::vector<std::string> word_tokenize(const std::string& text);

// Smoothed TF-IDF: idf(t) = ln((1+N)/(1+df(t))) + 1, vectors L2-normalized.
class TfidfModel {
public:
    static TfidfModel fit(const std::vector<std::string>& corpus);
    SparseVec transform(const std::string& text) const;
    // Raw term counts over the fitted vocabulary (multinomial NB input).
    SparseVec counts(const std::string& text) const;
    int vocab_size() const { return static_cast<int>(idf_.size()); }
    int corpus_size() const { return n_docs_; }
    double idf(int term) const { return idf_.at(term); }
    int term_index(const std::string& term) const;  // -1 when unseen

private:
    std::unordered_map<std::string, int> index_;
    std::vector<double> idf_;
    std::vector<int> df_;
    int n_docs_ = 0;
};

enum class BaselineKind { DTC, SVM, kNN, NBC };
enum class FeatureVariant { orig_plus_edit, edit_only };

struct BaselineOptions {
    int dtc_max_depth = 20;
    int dtc_min_leaf = 5;
    double svm_c = 1.0;
    int svm_passes = 10;
    int knn_k = 5;  // Sub-Task 2 runs use k=13
    double nb_alpha = 1.0;
    std::uint64_t seed = 0;
};

// The feature text the classifiers see for one record.
std::string baseline_text(const HeadlineEdit& h, FeatureVariant variant);

class BaselineModel {
public:
    static BaselineModel fit(BaselineKind kind, FeatureVariant variant,
                             const std::vector<std::pair<std::string, int>>& instances,
                             BaselineOptions opts = {});

    int predict_text(const std::string& text) const;  // grade class in {0..3}
    int predict_grade(const HeadlineEdit& h) const;
    // 1 if the first edit's predicted grade is >= the second's, else 2.
    int predict_pair(const EditPair& pair) const;

    BaselineKind kind() const { return kind_; }
    FeatureVariant variant() const { return variant_; }

private:
    struct TreeNode {
        int feature = -1;
        double threshold = 0.0;
        int left = -1, right = -1;
        int leaf_class = -1;
    };

    BaselineKind kind_ = BaselineKind::DTC;
    FeatureVariant variant_ = FeatureVariant::orig_plus_edit;
    BaselineOptions opts_;
    TfidfModel tfidf_;
    std::vector<int> classes_;  // distinct classes present in training data

    std::vector<TreeNode> tree_;
    std::vector<std::vector<double>> svm_w_;  // one-vs-rest weights per class
    std::vector<double> svm_b_;
    std::vector<SparseVec> knn_vecs_;
    std::vector<int> knn_labels_;
    std::vector<double> nb_log_prior_;
    std::vector<std::vector<double>> nb_log_theta_;

    void fit_dtc(const std::vector<SparseVec>& x, const std::vector<int>& y);
    void fit_svm(const std::vector<SparseVec>& x, const std::vector<int>& y);
    void fit_nbc(const std::vector<SparseVec>& counts, const std::vector<int>& y);
    int grow_tree(const std::vector<SparseVec>& x, const std::vector<int>& y,
                  std::vector<int> idx, int depth);
};

// Per-regime (text, grade) instances for classifier training.
std::vector<std::pair<std::string, int>> baseline_instances(const Task1Dataset& ds,
                                                            FeatureVariant variant,
                                                            bool all_grades);

struct ConstantBaselines {
    double mean_grade;       // Task 1: mean of training mean grades
    int most_frequent_label; // Task 2: modal label
};
ConstantBaselines constant_baselines(const Task1Dataset& task1_train,
                                     const Task2Dataset& task2_train);

}  // namespace jokemeter
