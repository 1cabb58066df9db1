#include "jokemeter/baselines.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

namespace jokemeter {

std::vector<std::string> word_tokenize(const std::string& text) {
    std::vector<std::string> words;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            words.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    return words;
}

TfidfModel TfidfModel::fit(const std::vector<std::string>& corpus) {
    if (corpus.empty()) throw std::invalid_argument("empty corpus");
    TfidfModel m;
    m.n_docs_ = static_cast<int>(corpus.size());
    for (const auto& doc : corpus) {
        std::set<std::string> seen;
        for (const auto& w : word_tokenize(doc)) {
            if (!seen.insert(w).second) continue;
            auto [it, inserted] = m.index_.emplace(w, static_cast<int>(m.df_.size()));
            if (inserted) m.df_.push_back(1);
            else ++m.df_[it->second];
        }
    }
    m.idf_.resize(m.df_.size());
    for (std::size_t t = 0; t < m.df_.size(); ++t)
        m.idf_[t] = std::log((1.0 + m.n_docs_) / (1.0 + m.df_[t])) + 1.0;
    return m;
}

int TfidfModel::term_index(const std::string& term) const {
    auto it = index_.find(term);
    return it == index_.end() ? -1 : it->second;
}

SparseVec TfidfModel::counts(const std::string& text) const {
    std::map<int, double> acc;
    for (const auto& w : word_tokenize(text)) {
        int t = term_index(w);
        if (t >= 0) acc[t] += 1.0;
    }
    return {acc.begin(), acc.end()};
}

SparseVec TfidfModel::transform(const std::string& text) const {
    SparseVec v = counts(text);
    double norm = 0.0;
    for (auto& [t, c] : v) {
        c *= idf_[t];
        norm += c * c;
    }
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (auto& [t, c] : v) c /= norm;
    }
    return v;
}

std::string baseline_text(const HeadlineEdit& h, FeatureVariant variant) {
    if (variant == FeatureVariant::edit_only) return h.edit;
    return strip_marker(h.original) + " " + h.edit;
}

std::vector<std::pair<std::string, int>> baseline_instances(const Task1Dataset& ds,
                                                            FeatureVariant variant,
                                                            bool all_grades) {
    std::vector<std::pair<std::string, int>> out;
    for (const auto& h : ds.records) {
        auto text = baseline_text(h, variant);
        if (all_grades) {
            for (int g : h.grades) out.emplace_back(text, g);
        } else {
            out.emplace_back(text, h.grades.at(2));
        }
    }
    return out;
}

namespace {

double sparse_dot(const SparseVec& a, const SparseVec& b) {
    double acc = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) ++i;
        else if (a[i].first > b[j].first) ++j;
        else acc += a[i++].second * b[j++].second;
    }
    return acc;
}

double feature_value(const SparseVec& v, int feature) {
    auto it = std::lower_bound(v.begin(), v.end(), feature,
                               [](const auto& p, int f) { return p.first < f; });
    return (it != v.end() && it->first == feature) ? it->second : 0.0;
}

double gini(const std::array<int, 4>& counts, int n) {
    if (n == 0) return 0.0;
    double g = 1.0;
    for (int c : counts) {
        double p = static_cast<double>(c) / n;
        g -= p * p;
    }
    return g;
}

int majority(const std::vector<int>& y, const std::vector<int>& idx) {
    std::array<int, 4> counts{};
    for (int i : idx) ++counts[y[i]];
    int best = 0;
    for (int c = 1; c < 4; ++c)
        if (counts[c] > counts[best]) best = c;
    return best;
}

}  // namespace

int BaselineModel::grow_tree(const std::vector<SparseVec>& x, const std::vector<int>& y,
                             std::vector<int> idx, int depth) {
    TreeNode node;
    std::array<int, 4> counts{};
    for (int i : idx) ++counts[y[i]];
    int n = static_cast<int>(idx.size());
    double node_gini = gini(counts, n);

    bool pure = node_gini == 0.0;
    if (pure || depth >= opts_.dtc_max_depth || n < 2 * opts_.dtc_min_leaf) {
        node.leaf_class = majority(y, idx);
        tree_.push_back(node);
        return static_cast<int>(tree_.size() - 1);
    }

    // Candidate features: those with a nonzero value in this node.
    std::set<int> feats;
    for (int i : idx)
        for (const auto& [f, v] : x[i]) feats.insert(f);

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = node_gini;
    for (int f : feats) {
        std::vector<double> vals;
        vals.reserve(idx.size());
        for (int i : idx) vals.push_back(feature_value(x[i], f));
        std::vector<double> uniq = vals;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (std::size_t u = 0; u + 1 < uniq.size(); ++u) {
            double thr = (uniq[u] + uniq[u + 1]) / 2.0;
            std::array<int, 4> lc{}, rc{};
            int ln = 0, rn = 0;
            for (std::size_t k = 0; k < idx.size(); ++k) {
                if (vals[k] <= thr) { ++lc[y[idx[k]]]; ++ln; }
                else { ++rc[y[idx[k]]]; ++rn; }
            }
            if (ln < opts_.dtc_min_leaf || rn < opts_.dtc_min_leaf) continue;
            double score = (ln * gini(lc, ln) + rn * gini(rc, rn)) / n;
            if (score + 1e-12 < best_score) {
                best_score = score;
                best_feature = f;
                best_threshold = thr;
            }
        }
    }

    if (best_feature < 0) {
        node.leaf_class = majority(y, idx);
        tree_.push_back(node);
        return static_cast<int>(tree_.size() - 1);
    }

    std::vector<int> left_idx, right_idx;
    for (int i : idx) {
        if (feature_value(x[i], best_feature) <= best_threshold) left_idx.push_back(i);
        else right_idx.push_back(i);
    }
    node.feature = best_feature;
    node.threshold = best_threshold;
    tree_.push_back(node);
    int self = static_cast<int>(tree_.size() - 1);
    int left = grow_tree(x, y, std::move(left_idx), depth + 1);
    int right = grow_tree(x, y, std::move(right_idx), depth + 1);
    tree_[self].left = left;
    tree_[self].right = right;
    return self;
}

void BaselineModel::fit_dtc(const std::vector<SparseVec>& x, const std::vector<int>& y) {
    std::vector<int> idx(x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    grow_tree(x, y, std::move(idx), 0);
}

void BaselineModel::fit_svm(const std::vector<SparseVec>& x, const std::vector<int>& y) {
    // One-vs-rest linear SVM via Pegasos-style subgradient descent,
    // lambda = 1/(C*n).
    int dim = tfidf_.vocab_size();
    std::size_t n = x.size();
    double lambda = 1.0 / (opts_.svm_c * static_cast<double>(n));
    svm_w_.assign(4, std::vector<double>(dim, 0.0));
    svm_b_.assign(4, 0.0);
    for (int cls : classes_) {
        auto& w = svm_w_[cls];
        double& b = svm_b_[cls];
        std::mt19937_64 rng(opts_.seed + cls);
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        long t = 0;
        for (int pass = 0; pass < opts_.svm_passes; ++pass) {
            for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
            for (std::size_t i : order) {
                ++t;
                double eta = 1.0 / (lambda * t);
                double yv = y[i] == cls ? 1.0 : -1.0;
                double score = b;
                for (const auto& [f, v] : x[i]) score += w[f] * v;
                for (double& wv : w) wv *= (1.0 - eta * lambda);
                if (yv * score < 1.0) {
                    for (const auto& [f, v] : x[i]) w[f] += eta * yv * v;
                    b += yv / t;  // unregularized bias, diminishing step
                }
            }
        }
    }
}

void BaselineModel::fit_nbc(const std::vector<SparseVec>& counts, const std::vector<int>& y) {
    int dim = tfidf_.vocab_size();
    double alpha = opts_.nb_alpha;
    nb_log_prior_.assign(4, -std::numeric_limits<double>::infinity());
    nb_log_theta_.assign(4, std::vector<double>(dim, 0.0));
    std::array<int, 4> class_n{};
    std::vector<std::vector<double>> term_counts(4, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < counts.size(); ++i) {
        ++class_n[y[i]];
        for (const auto& [f, v] : counts[i]) term_counts[y[i]][f] += v;
    }
    for (int cls : classes_) {
        nb_log_prior_[cls] = std::log(static_cast<double>(class_n[cls]) / counts.size());
        double total = 0.0;
        for (double v : term_counts[cls]) total += v;
        double denom = total + alpha * dim;
        for (int f = 0; f < dim; ++f)
            nb_log_theta_[cls][f] = std::log((term_counts[cls][f] + alpha) / denom);
    }
}

BaselineModel BaselineModel::fit(BaselineKind kind, FeatureVariant variant,
                                 const std::vector<std::pair<std::string, int>>& instances,
                                 BaselineOptions opts) {
    if (instances.empty()) throw std::invalid_argument("empty training set");
    BaselineModel m;
    m.kind_ = kind;
    m.variant_ = variant;
    m.opts_ = opts;

    std::vector<std::string> texts;
    std::vector<int> y;
    for (const auto& [text, grade] : instances) {
        if (grade < 0 || grade > 3) throw std::invalid_argument("grade outside {0..3}");
        texts.push_back(text);
        y.push_back(grade);
    }
    m.tfidf_ = TfidfModel::fit(texts);
    std::set<int> cls(y.begin(), y.end());
    m.classes_.assign(cls.begin(), cls.end());

    std::vector<SparseVec> x;
    x.reserve(texts.size());
    if (kind == BaselineKind::NBC) {
        for (const auto& t : texts) x.push_back(m.tfidf_.counts(t));
        m.fit_nbc(x, y);
    } else {
        for (const auto& t : texts) x.push_back(m.tfidf_.transform(t));
        switch (kind) {
            case BaselineKind::DTC: m.fit_dtc(x, y); break;
            case BaselineKind::SVM: m.fit_svm(x, y); break;
            case BaselineKind::kNN:
                m.knn_vecs_ = std::move(x);
                m.knn_labels_ = y;
                break;
            default: break;
        }
    }
    return m;
}

int BaselineModel::predict_text(const std::string& text) const {
    switch (kind_) {
        case BaselineKind::DTC: {
            SparseVec v = tfidf_.transform(text);
            int node = 0;
            while (tree_[node].leaf_class < 0)
                node = feature_value(v, tree_[node].feature) <= tree_[node].threshold
                           ? tree_[node].left
                           : tree_[node].right;
            return tree_[node].leaf_class;
        }
        case BaselineKind::SVM: {
            SparseVec v = tfidf_.transform(text);
            int best = classes_.front();
            double best_score = -std::numeric_limits<double>::infinity();
            for (int cls : classes_) {
                double score = svm_b_[cls];
                for (const auto& [f, val] : v) score += svm_w_[cls][f] * val;
                if (score > best_score) {
                    best_score = score;
                    best = cls;
                }
            }
            return best;
        }
        case BaselineKind::kNN: {
            SparseVec v = tfidf_.transform(text);
            // cosine distance on L2-normalized vectors: 1 - dot
            std::vector<std::pair<double, std::size_t>> dist;
            dist.reserve(knn_vecs_.size());
            for (std::size_t i = 0; i < knn_vecs_.size(); ++i)
                dist.emplace_back(1.0 - sparse_dot(v, knn_vecs_[i]), i);
            int k = std::min<int>(opts_.knn_k, static_cast<int>(dist.size()));
            std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
            std::array<int, 4> votes{};
            std::array<double, 4> total_dist{};
            for (int i = 0; i < k; ++i) {
                int cls = knn_labels_[dist[i].second];
                ++votes[cls];
                total_dist[cls] += dist[i].first;
            }
            int best = 0;
            for (int c = 1; c < 4; ++c) {
                if (votes[c] > votes[best] ||
                    (votes[c] == votes[best] && total_dist[c] < total_dist[best]))
                    best = c;
            }
            return best;
        }
        case BaselineKind::NBC: {
            SparseVec v = tfidf_.counts(text);
            int best = classes_.front();
            double best_score = -std::numeric_limits<double>::infinity();
            for (int cls : classes_) {
                double score = nb_log_prior_[cls];
                for (const auto& [f, c] : v) score += c * nb_log_theta_[cls][f];
                if (score > best_score) {
                    best_score = score;
                    best = cls;
                }
            }
            return best;
        }
    }
    throw std::logic_error("unreachable");
}

int BaselineModel::predict_grade(const HeadlineEdit& h) const {
    return predict_text(baseline_text(h, variant_));
}

int BaselineModel::predict_pair(const EditPair& pair) const {
    return predict_grade(pair.first) >= predict_grade(pair.second) ? 1 : 2;
}

ConstantBaselines constant_baselines(const Task1Dataset& task1_train,
                                     const Task2Dataset& task2_train) {
    if (task1_train.records.empty()) throw std::invalid_argument("empty Task 1 train set");
    double sum = 0.0;
    for (const auto& h : task1_train.records) sum += h.mean_grade;
    ConstantBaselines b;
    b.mean_grade = sum / task1_train.records.size();

    int count1 = 0, count2 = 0;
    for (const auto& p : task2_train.records) {
        if (!p.label) continue;
        (*p.label == 1 ? count1 : count2)++;
    }
    if (count1 + count2 == 0) throw std::invalid_argument("no labeled Task 2 records");
    b.most_frequent_label = count2 > count1 ? 2 : 1;
    return b;
}

}  // namespace jokemeter
