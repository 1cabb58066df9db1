#include "jokemeter/model.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "jokemeter/checkpoint.hpp"

namespace jokemeter {

void ModelConfig::validate() const {
    if (embedding_dim <= 0 || vocab_size <= 0 || filters_per_region <= 0 ||
        seq_len <= 0 || num_grades <= 0)
        throw std::invalid_argument("model dimensions must be positive");
    std::set<int> seen;
    for (int r : region_sizes) {
        if (r < 2) throw std::invalid_argument("region sizes must be >= 2");
        if (!seen.insert(r).second) throw std::invalid_argument("duplicate region size");
    }
    if (region_sizes.empty()) throw std::invalid_argument("need at least one region size");
    if (!use_conv_features && !use_edit_embedding)
        throw std::invalid_argument("model needs conv features or the edit embedding");
}

std::string ModelConfig::to_json() const {
    nlohmann::json j;
    j["embedding_dim"] = embedding_dim;
    j["vocab_size"] = vocab_size;
    j["region_sizes"] = region_sizes;
    j["filters_per_region"] = filters_per_region;
    j["leaky_slope"] = leaky_slope;
    j["seq_len"] = seq_len;
    j["use_conv_features"] = use_conv_features;
    j["use_edit_embedding"] = use_edit_embedding;
    j["num_grades"] = num_grades;
    return j.dump();
}

ModelConfig ModelConfig::from_json(const std::string& json) {
    auto j = nlohmann::json::parse(json);
    ModelConfig c;
    c.embedding_dim = j.at("embedding_dim");
    c.vocab_size = j.at("vocab_size");
    c.region_sizes = j.at("region_sizes").get<std::vector<int>>();
    c.filters_per_region = j.at("filters_per_region");
    c.leaky_slope = j.at("leaky_slope");
    c.seq_len = j.at("seq_len");
    c.use_conv_features = j.value("use_conv_features", true);
    c.use_edit_embedding = j.at("use_edit_embedding");
    c.num_grades = j.at("num_grades");
    c.validate();
    return c;
}

ModelConfig ModelConfig::preset(const std::string& name) {
    ModelConfig c;
    if (name == "jokemeter") return c;
    if (name == "jokemeter-boosted") {
        c.embedding_dim = 2048;
        c.filters_per_region = 2048;
        c.use_edit_embedding = false;
        return c;
    }
    throw std::invalid_argument("unknown model preset: " + name);
}

std::vector<Parameter*> JokeMeterParams::all() {
    std::vector<Parameter*> out = {&embedding};
    for (auto& r : regions) {
        out.push_back(&r.filters);
        out.push_back(&r.bias);
    }
    out.push_back(&out_weight);
    out.push_back(&out_bias);
    return out;
}

std::vector<const Parameter*> JokeMeterParams::all() const {
    std::vector<const Parameter*> out = {&embedding};
    for (auto& r : regions) {
        out.push_back(&r.filters);
        out.push_back(&r.bias);
    }
    out.push_back(&out_weight);
    out.push_back(&out_bias);
    return out;
}

JokeMeterParams init_params(const ModelConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> emb_dist(0.0, 0.1);

    auto glorot = [&rng](Tensor& t, int fan_in, int fan_out) {
        double limit = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> d(-limit, limit);
        for (auto& v : t.values) v = d(rng);
    };

    JokeMeterParams p;
    p.embedding = Parameter("embedding", Tensor({cfg.vocab_size, cfg.embedding_dim}));
    for (auto& v : p.embedding.value.values) v = emb_dist(rng);

    for (std::size_t i = 0; cfg.use_conv_features && i < cfg.region_sizes.size(); ++i) {
        int R = cfg.region_sizes[i];
        JokeMeterParams::Region reg;
        reg.filters = Parameter("conv" + std::to_string(R) + ".filters",
                                Tensor({cfg.filters_per_region, R, cfg.embedding_dim}));
        glorot(reg.filters.value, R * cfg.embedding_dim, cfg.filters_per_region);
        reg.bias = Parameter("conv" + std::to_string(R) + ".bias",
                             Tensor({cfg.filters_per_region}));
        p.regions.push_back(std::move(reg));
    }

    int width = cfg.feature_width();
    p.out_weight = Parameter("out.weight", Tensor({cfg.num_grades, width}));
    glorot(p.out_weight.value, width, cfg.num_grades);
    p.out_bias = Parameter("out.bias", Tensor({cfg.num_grades}));
    return p;
}

ForwardResult forward(Tape& tape, const ModelConfig& cfg, JokeMeterParams& params,
                      const TokenSequence& seq) {
    if (params.embedding.value.dim(0) != cfg.vocab_size)
        throw std::invalid_argument("params/config vocab size mismatch");
    for (int id : seq.ids)
        if (id >= cfg.vocab_size)
            throw std::invalid_argument("token id exceeds model vocab size");

    auto emb_table = tape.leaf(params.embedding);
    auto emb = tape.embedding_lookup(emb_table, seq.ids);

    std::vector<Tape::NodeId> parts;
    Tape::NodeId pooled = -1;
    if (cfg.use_conv_features) {
        std::vector<Tape::NodeId> pools;
        for (std::size_t i = 0; i < cfg.region_sizes.size(); ++i) {
            auto filters = tape.leaf(params.regions[i].filters);
            auto bias = tape.leaf(params.regions[i].bias);
            auto conv = tape.conv1d(emb, filters, bias, /*pad=*/1);
            auto act = tape.leaky_relu(conv, cfg.leaky_slope);
            pools.push_back(tape.max_pool_time(act));
        }
        pooled = tape.concat(pools);
        parts.push_back(pooled);
    }
    if (cfg.use_edit_embedding)
        parts.push_back(tape.mean_rows(emb, seq.edit_begin, seq.edit_end));
    Tape::NodeId feat = parts.size() == 1 ? parts[0] : tape.concat(parts);

    auto W = tape.leaf(params.out_weight);
    auto b = tape.leaf(params.out_bias);
    auto logits = tape.linear(feat, W, b);

    ForwardResult r;
    r.logits = logits;
    r.probs = softmax_values(tape.value(logits).values);
    if (pooled >= 0) r.pooled = tape.value(pooled).values;
    return r;
}

double expected_grade(const std::vector<double>& probs) {
    double e = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) e += probs[i] * static_cast<double>(i);
    return e;
}

double predict_task1(const ModelConfig& cfg, JokeMeterParams& params, const Vocab& vocab,
                     const HeadlineEdit& h) {
    Tape tape;
    auto seq = encode(vocab, assemble_input(h), cfg.seq_len);
    auto r = forward(tape, cfg, params, seq);
    return expected_grade(r.probs);
}

int compare_grades(double first, double second) { return first >= second ? 1 : 2; }

int predict_task2(const ModelConfig& cfg, JokeMeterParams& params, const Vocab& vocab,
                  const EditPair& pair) {
    return compare_grades(predict_task1(cfg, params, vocab, pair.first),
                          predict_task1(cfg, params, vocab, pair.second));
}

void save_model(const std::string& path, const ModelConfig& cfg, const Vocab& vocab,
                const JokeMeterParams& params) {
    save_checkpoint(path, cfg.to_json(), vocab.hash(), params.all());
}

JokeMeterParams load_model(const std::string& path, ModelConfig& cfg_out,
                           std::uint64_t& vocab_hash_out) {
    Checkpoint ck = load_checkpoint(path);
    cfg_out = ModelConfig::from_json(ck.config_json);
    vocab_hash_out = ck.vocab_hash;

    JokeMeterParams p = init_params(cfg_out, 0);
    for (Parameter* param : p.all()) {
        auto it = ck.tensors.find(param->name);
        if (it == ck.tensors.end())
            throw std::runtime_error("checkpoint missing parameter: " + param->name);
        if (it->second.shape != param->value.shape)
            throw std::runtime_error("checkpoint shape mismatch for: " + param->name);
        param->value = it->second;
        param->zero_grad();
    }
    return p;
}

}  // namespace jokemeter
