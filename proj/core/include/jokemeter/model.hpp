#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jokemeter/autodiff.hpp"
#include "jokemeter/corpus.hpp"
#include "jokemeter/tensor.hpp"
#include "jokemeter/textprep.hpp"

namespace jokemeter {

struct ModelConfig {
    int embedding_dim = 128;
    int vocab_size = kDefaultVocabCap;
    std::vector<int> region_sizes = {2, 3, 4, 8};
    int filters_per_region = 2;
    double leaky_slope = 0.01;
    int seq_len = kDefaultSeqLen;
    bool use_conv_features = true;
    bool use_edit_embedding = true;
    int num_grades = 4;

    void validate() const;
    int feature_width() const {
        return (use_conv_features
                    ? static_cast<int>(region_sizes.size()) * filters_per_region
                    : 0) +
               (use_edit_embedding ? embedding_dim : 0);
    }

    std::string to_json() const;
    static ModelConfig from_json(const std::string& json);

    // Named presets: "jokemeter" (the stock submission model) and
    // "jokemeter-boosted" (2048 filters, 2048-d embeddings, no edit embedding).
    static ModelConfig preset(const std::string& name);
};

struct JokeMeterParams {
    Parameter embedding;  // [V x D]
    struct Region {
        Parameter filters;  // [F x R x D]
        Parameter bias;     // [F]
    };
    std::vector<Region> regions;
    Parameter out_weight;  // [4 x width]
    Parameter out_bias;    // [4]

    std::vector<Parameter*> all();
    std::vector<const Parameter*> all() const;
};

JokeMeterParams init_params(const ModelConfig& cfg, std::uint64_t seed);

// Grade probabilities plus the pooled convolutional features, ordered by
// (region size, filter index).
struct ForwardResult {
    Tape::NodeId logits;
    std::vector<double> probs;
    std::vector<double> pooled;
};

ForwardResult forward(Tape& tape, const ModelConfig& cfg, JokeMeterParams& params,
                      const TokenSequence& seq);

// E[G] = sum_i p_i * i over the four grade probabilities.
double expected_grade(const std::vector<double>& probs);

double predict_task1(const ModelConfig& cfg, JokeMeterParams& params, const Vocab& vocab,
                     const HeadlineEdit& h);
// Pair decision from two expected grades; ties resolve to 1.
int compare_grades(double first, double second);
// 1 if the first edit grades higher, 2 if lower; ties resolve to 1.
int predict_task2(const ModelConfig& cfg, JokeMeterParams& params, const Vocab& vocab,
                  const EditPair& pair);

void save_model(const std::string& path, const ModelConfig& cfg, const Vocab& vocab,
                const JokeMeterParams& params);
JokeMeterParams load_model(const std::string& path, ModelConfig& cfg_out,
                           std::uint64_t& vocab_hash_out);

}  // namespace jokemeter
