#include <benchmark/benchmark.h>

#include <jokemeter/autodiff.hpp>
#include <jokemeter/model.hpp>
#include <jokemeter/textprep.hpp>

#include <random>

using namespace jokemeter;

namespace {

TokenSequence random_sequence(const ModelConfig& cfg, std::mt19937_64& rng, int real_len) {
    TokenSequence seq;
    seq.ids.assign(cfg.seq_len, kPad);
    seq.ids[0] = kBos;
    for (int i = 1; i < real_len - 1; ++i)
        seq.ids[i] = kNumReserved + static_cast<int>(rng() % (cfg.vocab_size - kNumReserved));
    seq.ids[real_len - 1] = kEos;
    seq.real_length = real_len;
    seq.edit_begin = real_len / 2;
    seq.edit_end = real_len / 2 + 2;
    return seq;
}

void BM_Conv1d(benchmark::State& state) {
    int L = static_cast<int>(state.range(0));
    int D = 128, F = 2, R = 4;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Tensor x({L, D}), f({F, R, D}), b({F});
    for (auto& v : x.values) v = d(rng);
    for (auto& v : f.values) v = d(rng);
    for (auto _ : state) {
        Tape tape;
        auto y = tape.conv1d(tape.constant(x), tape.constant(f), tape.constant(b), 1);
        benchmark::DoNotOptimize(tape.value(y).values.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(L) * D * F * R);
}

void BM_ForwardPass(benchmark::State& state) {
    ModelConfig cfg;
    cfg.vocab_size = 1000;
    auto params = init_params(cfg, 1);
    std::mt19937_64 rng(2);
    auto seq = random_sequence(cfg, rng, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Tape tape;
        auto out = forward(tape, cfg, params, seq);
        benchmark::DoNotOptimize(out.probs.data());
    }
}

void BM_ForwardBackward(benchmark::State& state) {
    ModelConfig cfg;
    cfg.vocab_size = 1000;
    auto params = init_params(cfg, 1);
    std::mt19937_64 rng(3);
    auto seq = random_sequence(cfg, rng, 24);
    for (auto _ : state) {
        Tape tape;
        auto out = forward(tape, cfg, params, seq);
        auto ce = tape.cross_entropy(out.logits, 2);
        for (Parameter* p : params.all()) p->zero_grad();
        tape.backward(ce);
        benchmark::DoNotOptimize(params.embedding.grad.values.data());
    }
}

void BM_EncodeSequence(benchmark::State& state) {
    std::vector<std::string> corpus;
    std::mt19937_64 rng(4);
    const char* words[] = {"senate", "vote", "measure", "police", "arrest",
                           "suspect", "president", "signs", "law", "budget"};
    for (int i = 0; i < 50; ++i) {
        std::string line;
        for (int w = 0; w < 8; ++w) line += std::string(words[rng() % 10]) + " ";
        corpus.push_back(line);
    }
    Vocab v = Vocab::train(corpus, 500);
    std::string assembled = "<s> senate to # vote / wombat # on new measure </s>";
    for (auto _ : state) {
        auto seq = encode(v, assembled, 512);
        benchmark::DoNotOptimize(seq.ids.data());
    }
}

}  // namespace

BENCHMARK(BM_Conv1d)->Arg(64)->Arg(512);
BENCHMARK(BM_ForwardPass)->Arg(16)->Arg(128);
BENCHMARK(BM_ForwardBackward);
BENCHMARK(BM_EncodeSequence);

BENCHMARK_MAIN();
