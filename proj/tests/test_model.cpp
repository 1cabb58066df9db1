#include <doctest.h>

#include <jokemeter/corpus.hpp>
#include <jokemeter/model.hpp>
#include <jokemeter/trainer.hpp>

#include <cmath>
#include <random>

#include "testutil.hpp"

using namespace jokemeter;

namespace {

ModelConfig tiny_config() {
    ModelConfig cfg;
    cfg.embedding_dim = 8;
    cfg.vocab_size = 64;
    cfg.region_sizes = {2, 3};
    cfg.filters_per_region = 2;
    cfg.seq_len = 24;
    return cfg;
}

Vocab mini_vocab() {
    auto ds = parse_task1_file(testutil::data_dir() + "/mini/task1_train.csv");
    std::vector<std::string> lines;
    for (const auto& h : ds.records) lines.push_back(assemble_input(h));
    return Vocab::train(lines, 60);
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("feature widths") {
    ModelConfig cfg;  // defaults: 4 regions x 2 filters + 128-d edit embedding
    CHECK(cfg.feature_width() == 4 * 2 + 128);
    CHECK(cfg.feature_width() == 136);

    ModelConfig boosted = ModelConfig::preset("jokemeter-boosted");
    CHECK(boosted.feature_width() == 4 * 2048);
    CHECK(boosted.feature_width() == 8192);
    CHECK_FALSE(boosted.use_edit_embedding);

    ModelConfig no_conv;
    no_conv.use_conv_features = false;
    CHECK(no_conv.feature_width() == 128);

    CHECK_THROWS(ModelConfig::preset("nonsense"));
}

TEST_CASE("config validation") {
    ModelConfig cfg;
    cfg.region_sizes = {2, 2};
    CHECK_THROWS(cfg.validate());
    cfg = ModelConfig{};
    cfg.region_sizes = {1};
    CHECK_THROWS(cfg.validate());
    cfg = ModelConfig{};
    cfg.use_conv_features = false;
    cfg.use_edit_embedding = false;
    CHECK_THROWS(cfg.validate());
    cfg = ModelConfig{};
    cfg.embedding_dim = 0;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("config json round trip") {
    ModelConfig cfg = tiny_config();
    cfg.use_edit_embedding = false;
    ModelConfig back = ModelConfig::from_json(cfg.to_json());
    CHECK(back.embedding_dim == cfg.embedding_dim);
    CHECK(back.vocab_size == cfg.vocab_size);
    CHECK(back.region_sizes == cfg.region_sizes);
    CHECK(back.filters_per_region == cfg.filters_per_region);
    CHECK(back.leaky_slope == cfg.leaky_slope);
    CHECK(back.seq_len == cfg.seq_len);
    CHECK(back.use_conv_features == cfg.use_conv_features);
    CHECK(back.use_edit_embedding == cfg.use_edit_embedding);
}

TEST_CASE("expected grade examples") {
    CHECK(expected_grade({1.0, 0.0, 0.0, 0.0}) == 0.0);
    CHECK(expected_grade({0.0, 0.0, 0.0, 1.0}) == 3.0);
    CHECK(expected_grade({0.25, 0.25, 0.25, 0.25}) == 1.5);
    CHECK(expected_grade({0.1, 0.2, 0.3, 0.4}) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("parameter shapes and init determinism") {
    ModelConfig cfg = tiny_config();
    auto p = init_params(cfg, 123);
    CHECK(p.embedding.value.shape == std::vector<int>{64, 8});
    REQUIRE(p.regions.size() == 2);
    CHECK(p.regions[0].filters.value.shape == std::vector<int>{2, 2, 8});
    CHECK(p.regions[1].filters.value.shape == std::vector<int>{2, 3, 8});
    CHECK(p.out_weight.value.shape == std::vector<int>{4, cfg.feature_width()});

    auto q = init_params(cfg, 123);
    CHECK(p.embedding.value.values == q.embedding.value.values);
    CHECK(p.out_weight.value.values == q.out_weight.value.values);
    auto r = init_params(cfg, 124);
    CHECK(p.embedding.value.values != r.embedding.value.values);
}

TEST_CASE("forward yields a probability distribution") {
    ModelConfig cfg = tiny_config();
    auto params = init_params(cfg, 5);
    Vocab v = mini_vocab();
    auto seq = encode(v, "<s> police # arrest / hug # suspect </s>", cfg.seq_len);
    Tape tape;
    auto out = forward(tape, cfg, params, seq);
    REQUIRE(out.probs.size() == 4);
    double sum = 0.0;
    for (double p : out.probs) {
        CHECK(p >= 0.0);
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.pooled.size() == 4);  // 2 regions x 2 filters
}

TEST_CASE("zero output weights give the uniform distribution and grade 1.5") {
    ModelConfig cfg = tiny_config();
    auto params = init_params(cfg, 5);
    params.out_weight.value.fill(0.0);
    params.out_bias.value.fill(0.0);
    Vocab v = mini_vocab();
    HeadlineEdit h;
    h.original = "Police <arrest/> suspect after chase";
    h.edit = "hug";
    CHECK(predict_task1(cfg, params, v, h) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("predictions are bounded by the grade range") {
    ModelConfig cfg = tiny_config();
    Vocab v = mini_vocab();
    auto ds = parse_task1_file(testutil::data_dir() + "/mini/task1_train.csv");
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto params = init_params(cfg, seed);
        for (const auto& h : ds.records) {
            double g = predict_task1(cfg, params, v, h);
            CHECK(g >= 0.0);
            CHECK(g <= 3.0);
        }
    }
}

TEST_CASE("compare_grades: ties and order") {
    CHECK(compare_grades(2.0, 1.0) == 1);
    CHECK(compare_grades(1.0, 2.0) == 2);
    CHECK(compare_grades(1.5, 1.5) == 1);
}

TEST_CASE("task2 decisions are antisymmetric away from ties") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(0.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        double a = d(rng), b = d(rng);
        if (a == b) continue;
        int fwd = compare_grades(a, b);
        int rev = compare_grades(b, a);
        CHECK(fwd != rev);
        CHECK(fwd == (a > b ? 1 : 2));
    }
}

TEST_CASE("task2 decisions are invariant under strictly increasing transforms") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> d(0.0, 3.0);
    auto transforms = std::vector<double (*)(double)>{
        [](double x) { return 2.0 * x + 1.0; },
        [](double x) { return x * x * x; },
        [](double x) { return std::exp(x); },
        [](double x) { return std::atan(x); },
    };
    for (int i = 0; i < 500; ++i) {
        double a = d(rng), b = d(rng);
        int base = compare_grades(a, b);
        for (auto f : transforms) CHECK(compare_grades(f(a), f(b)) == base);
    }
}

TEST_CASE("predict_task2 consults both sides") {
    ModelConfig cfg = tiny_config();
    auto params = init_params(cfg, 11);
    Vocab v = mini_vocab();
    auto ds = parse_task2_file(testutil::data_dir() + "/mini/task2_train.csv");
    for (const auto& pair : ds.records) {
        int label = predict_task2(cfg, params, v, pair);
        CHECK((label == 1 || label == 2));
        double g1 = predict_task1(cfg, params, v, pair.first);
        double g2 = predict_task1(cfg, params, v, pair.second);
        CHECK(label == compare_grades(g1, g2));
    }
}

TEST_CASE("save/load round trip preserves predictions bit for bit") {
    ModelConfig cfg = tiny_config();
    auto params = init_params(cfg, 77);
    Vocab v = mini_vocab();
    testutil::TempDir td;
    auto p = td.path("m.ckpt");
    save_model(p, cfg, v, params);

    ModelConfig cfg2;
    std::uint64_t vhash = 0;
    auto params2 = load_model(p, cfg2, vhash);
    CHECK(vhash == v.hash());
    CHECK(cfg2.to_json() == cfg.to_json());

    auto ds = parse_task1_file(testutil::data_dir() + "/mini/task1_train.csv");
    for (const auto& h : ds.records) {
        double a = predict_task1(cfg, params, v, h);
        double b = predict_task1(cfg2, params2, v, h);
        CHECK(a == b);
    }
}

TEST_CASE("forward rejects ids beyond the configured vocab") {
    ModelConfig cfg = tiny_config();
    auto params = init_params(cfg, 1);
    TokenSequence seq;
    seq.ids.assign(cfg.seq_len, 0);
    seq.ids[1] = cfg.vocab_size;  // out of range
    seq.real_length = 4;
    seq.edit_begin = 1;
    seq.edit_end = 2;
    Tape tape;
    CHECK_THROWS(forward(tape, cfg, params, seq));
}

TEST_CASE("edit-embedding-only model runs without conv parameters") {
    ModelConfig cfg = tiny_config();
    cfg.use_conv_features = false;
    auto params = init_params(cfg, 2);
    CHECK(params.regions.empty());
    Vocab v = mini_vocab();
    HeadlineEdit h;
    h.original = "Police <arrest/> suspect after chase";
    h.edit = "hug";
    double g = predict_task1(cfg, params, v, h);
    CHECK(g >= 0.0);
    CHECK(g <= 3.0);
}

TEST_SUITE_END();
