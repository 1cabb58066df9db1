#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jokemeter/analysis.hpp"
#include "jokemeter/baselines.hpp"
#include "jokemeter/corpus.hpp"
#include "jokemeter/evalio.hpp"
#include "jokemeter/gradcheck.hpp"
#include "jokemeter/model.hpp"
#include "jokemeter/textprep.hpp"
#include "jokemeter/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace jokemeter;

namespace {

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for hashing: " + path);
    std::uint64_t h = 14695981039346656037ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

// Every subcommand drops a manifest next to its outputs: config, seed, and
// input-file hashes, enough to reproduce the run bit-for-bit.
void write_manifest(const fs::path& outdir, const std::string& command, const json& config,
                    std::uint64_t seed, const std::vector<std::string>& inputs) {
    json m;
    m["command"] = command;
    m["config"] = config;
    m["seed"] = seed;
    for (const auto& p : inputs) m["inputs"][p] = hash_file(p);
    std::ofstream out(outdir / "manifest.json");
    out << m.dump(2) << "\n";
}

std::string default_outdir() {
    const char* env = std::getenv("JOKEMETER_OUT_DIR");
    return env ? env : "out";
}

int thread_count() {
    const char* env = std::getenv("JOKEMETER_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return n > 0 ? n : 1;
}

Vocab train_or_load_vocab(const std::string& vocab_path, const Task1Dataset& train_ds,
                          int cap, const fs::path& outdir) {
    if (!vocab_path.empty()) return Vocab::load(vocab_path);
    std::vector<std::string> corpus;
    corpus.reserve(train_ds.records.size());
    for (const auto& h : train_ds.records) corpus.push_back(assemble_input(h));
    Vocab v = Vocab::train(corpus, cap);
    v.save((outdir / "vocab.txt").string());
    return v;
}

struct ModelFlags {
    std::string preset = "jokemeter";
    int embedding_dim = -1;
    int filters = -1;
    int seq_len = -1;
    bool no_edit_embedding = false;
    bool no_conv_features = false;

    ModelConfig resolve() const {
        ModelConfig cfg = ModelConfig::preset(preset);
        if (embedding_dim > 0) cfg.embedding_dim = embedding_dim;
        if (filters > 0) cfg.filters_per_region = filters;
        if (seq_len > 0) cfg.seq_len = seq_len;
        if (no_edit_embedding) cfg.use_edit_embedding = false;
        if (no_conv_features) cfg.use_conv_features = false;
        return cfg;
    }
};

struct TrainFlags {
    std::string regime = "all";
    int batch_size = -1;
    double lr = -1.0;
    double weight_decay = -1.0;
    int patience = -1;
    int max_epochs = -1;
    std::uint64_t seed = 0;

    TrainConfig resolve(const std::string& preset) const {
        TrainConfig cfg;
        if (preset == "jokemeter-boosted") cfg.batch_size = 64;
        if (regime == "all") cfg.regime = Regime::all_grades;
        else if (regime == "third") cfg.regime = Regime::third_grade;
        else throw CLI::ValidationError("--regime must be all or third");
        if (batch_size > 0) cfg.batch_size = batch_size;
        if (lr >= 0.0) cfg.learning_rate = lr;
        if (weight_decay >= 0.0) cfg.weight_decay = weight_decay;
        if (patience > 0) cfg.patience = patience;
        if (max_epochs > 0) cfg.max_epochs = max_epochs;
        cfg.seed = seed;
        return cfg;
    }
};

// --config file: JSON defaults; explicit command-line flags win.
void apply_config_file(const std::string& path, const CLI::App* cmd, ModelFlags& mf,
                       TrainFlags& tf) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json j;
    in >> j;
    auto unset = [cmd](const char* flag) { return cmd->count(flag) == 0; };
    if (j.contains("preset") && unset("--preset")) mf.preset = j["preset"];
    if (j.contains("embedding_dim") && unset("--embedding-dim"))
        mf.embedding_dim = j["embedding_dim"];
    if (j.contains("filters_per_region") && unset("--filters"))
        mf.filters = j["filters_per_region"];
    if (j.contains("seq_len") && unset("--seq-len")) mf.seq_len = j["seq_len"];
    if (j.contains("use_edit_embedding") && unset("--no-edit-embedding"))
        mf.no_edit_embedding = !j["use_edit_embedding"].get<bool>();
    if (j.contains("use_conv_features") && unset("--no-conv-features"))
        mf.no_conv_features = !j["use_conv_features"].get<bool>();
    if (j.contains("regime") && unset("--regime")) tf.regime = j["regime"];
    if (j.contains("batch_size") && unset("--batch-size")) tf.batch_size = j["batch_size"];
    if (j.contains("learning_rate") && unset("--lr")) tf.lr = j["learning_rate"];
    if (j.contains("weight_decay") && unset("--weight-decay"))
        tf.weight_decay = j["weight_decay"];
    if (j.contains("patience") && unset("--patience")) tf.patience = j["patience"];
    if (j.contains("max_epochs") && unset("--max-epochs")) tf.max_epochs = j["max_epochs"];
    if (j.contains("seed") && unset("--seed")) tf.seed = j["seed"];
}

int cmd_analyze(const std::string& train_path, const std::string& dev_path,
                const std::string& test_path, const std::string& model_path,
                const std::string& vocab_path, bool lenient, const std::string& outdir_s) {
    fs::path outdir(outdir_s);
    fs::create_directories(outdir);
    ParseOptions popts;
    popts.lenient = lenient;
    std::vector<std::string> warnings;
    popts.warnings = &warnings;

    std::vector<std::pair<std::string, std::string>> splits = {{"train", train_path}};
    if (!dev_path.empty()) splits.emplace_back("dev", dev_path);
    if (!test_path.empty()) splits.emplace_back("test", test_path);

    std::vector<std::string> inputs;
    for (const auto& [name, path] : splits) {
        auto ds = parse_task1_file(path, popts);
        auto report = analyze_dataset(ds);
        std::ofstream out(outdir / ("analysis_" + name + ".csv"));
        out << format_analysis_report(report);
        std::ofstream hist(outdir / ("histogram_" + name + ".dat"));
        hist << "# bin_left count\n";
        for (int b = 0; b < kHistogramBins; ++b)
            hist << b * 0.3 << " " << report.stats.histogram[b] << "\n";
        inputs.push_back(path);

        if (name == "train" && !model_path.empty()) {
            ModelConfig cfg;
            std::uint64_t vh;
            auto params = load_model(model_path, cfg, vh);
            Vocab vocab = Vocab::load(vocab_path);
            if (vocab.hash() != vh)
                throw std::runtime_error("vocab does not match model checkpoint");
            auto feats = feature_correlation_report(cfg, params, vocab, ds);
            std::ofstream fout(outdir / "feature_report.csv");
            fout << format_feature_report(feats);
            inputs.push_back(model_path);
            inputs.push_back(vocab_path);
        }
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    write_manifest(outdir, "analyze", {{"lenient", lenient}}, 0, inputs);
    std::cout << "analysis written to " << outdir << "\n";
    return 0;
}

int cmd_train(const ModelFlags& mf, const TrainFlags& tf, const std::string& train_path,
              const std::string& dev_path, const std::string& vocab_path, int vocab_cap,
              bool lenient, const std::string& outdir_s) {
    fs::path outdir(outdir_s);
    fs::create_directories(outdir);
    ParseOptions popts;
    popts.lenient = lenient;
    auto train_ds = parse_task1_file(train_path, popts);
    auto dev_ds = parse_task1_file(dev_path, popts);

    Vocab vocab = train_or_load_vocab(vocab_path, train_ds, vocab_cap, outdir);
    ModelConfig mcfg = mf.resolve();
    mcfg.vocab_size = vocab.size();
    TrainConfig tcfg = tf.resolve(mf.preset);
    tcfg.run_log_path = (outdir / "runlog.csv").string();

    auto result = train(mcfg, tcfg, vocab, train_ds, dev_ds);
    save_model((outdir / "model.ckpt").string(), mcfg, vocab, result.params);

    std::vector<std::string> inputs = {train_path, dev_path};
    if (!vocab_path.empty()) inputs.push_back(vocab_path);
    json cfg;
    cfg["model"] = json::parse(mcfg.to_json());
    cfg["train"] = {{"regime", tf.regime},
                    {"batch_size", tcfg.batch_size},
                    {"learning_rate", tcfg.learning_rate},
                    {"weight_decay", tcfg.weight_decay},
                    {"patience", tcfg.patience},
                    {"max_epochs", tcfg.max_epochs}};
    write_manifest(outdir, "train", cfg, tcfg.seed, inputs);

    std::cout << "best epoch " << result.report.best_epoch << ", dev RMSE "
              << result.report.dev_rmse[result.report.best_epoch] << " ("
              << result.report.stop_reason << ")\n";
    std::cout << "checkpoint: " << (outdir / "model.ckpt") << "\n";
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& vocab_path,
                const std::string& data_path, int task, const std::string& out_path,
                bool lenient) {
    ModelConfig cfg;
    std::uint64_t vh;
    auto params = load_model(model_path, cfg, vh);
    Vocab vocab = Vocab::load(vocab_path);
    if (vocab.hash() != vh) throw std::runtime_error("vocab does not match model checkpoint");

    ParseOptions popts;
    popts.lenient = lenient;
    std::vector<Prediction> preds;
    if (task == 1) {
        auto ds = parse_task1_file(data_path, popts);
        for (const auto& h : ds.records)
            preds.push_back({h.id, predict_task1(cfg, params, vocab, h)});
        write_predictions(out_path, PredTask::task1, preds);
    } else {
        auto ds = parse_task2_file(data_path, popts);
        for (const auto& p : ds.records)
            preds.push_back({p.id, static_cast<double>(predict_task2(cfg, params, vocab, p))});
        write_predictions(out_path, PredTask::task2, preds);
    }
    fs::path outdir = fs::path(out_path).parent_path();
    if (outdir.empty()) outdir = ".";
    write_manifest(outdir, "predict", {{"task", task}}, 0,
                   {model_path, vocab_path, data_path});
    std::cout << preds.size() << " predictions -> " << out_path << "\n";
    return 0;
}

std::vector<Prediction> truths_from_dataset(const std::string& path, int task) {
    std::vector<Prediction> truths;
    if (task == 1) {
        for (const auto& h : parse_task1_file(path).records)
            truths.push_back({h.id, h.mean_grade});
    } else {
        for (const auto& p : parse_task2_file(path).records) {
            if (!p.label) throw std::runtime_error("unlabeled Task 2 record: " + p.id);
            truths.push_back({p.id, static_cast<double>(*p.label)});
        }
    }
    return truths;
}

int cmd_score(const std::string& pred_path, const std::string& truth_path, int task) {
    auto preds = read_predictions(pred_path, task == 1 ? PredTask::task1 : PredTask::task2);
    auto truths = truths_from_dataset(truth_path, task);
    if (task == 1)
        std::cout << "task1 rmse " << rmse(preds, truths) << " n " << truths.size() << "\n";
    else
        std::cout << "task2 accuracy " << accuracy(preds, truths) << " n " << truths.size()
                  << "\n";
    return 0;
}

struct BaselineCell {
    std::string kind;
    std::string variant;
    std::string regime;
    double task1_rmse = -1.0;
    double task2_acc = -1.0;
};

BaselineKind parse_kind(const std::string& s) {
    if (s == "dtc") return BaselineKind::DTC;
    if (s == "svm") return BaselineKind::SVM;
    if (s == "knn") return BaselineKind::kNN;
    if (s == "nbc") return BaselineKind::NBC;
    throw CLI::ValidationError("unknown baseline kind: " + s);
}

BaselineCell run_baseline_cell(const std::string& kind, const std::string& variant,
                               const std::string& regime, const Task1Dataset& train_ds,
                               const Task1Dataset* test_ds, const Task2Dataset* pairs_ds,
                               const BaselineOptions& base_opts, int knn_k_task2,
                               const fs::path& outdir) {
    FeatureVariant fv = variant == "edit" ? FeatureVariant::edit_only
                                          : FeatureVariant::orig_plus_edit;
    auto instances = baseline_instances(train_ds, fv, regime == "all");
    auto model = BaselineModel::fit(parse_kind(kind), fv, instances, base_opts);

    BaselineCell cell{kind, variant, regime};
    std::string tag = kind + "_" + variant + "_" + regime;
    if (test_ds) {
        std::vector<Prediction> preds, truths;
        for (const auto& h : test_ds->records) {
            preds.push_back({h.id, static_cast<double>(model.predict_grade(h))});
            truths.push_back({h.id, h.mean_grade});
        }
        write_predictions((outdir / ("pred_task1_" + tag + ".csv")).string(),
                          PredTask::task1, preds);
        cell.task1_rmse = rmse(preds, truths);
    }
    if (pairs_ds) {
        BaselineOptions o2 = base_opts;
        o2.knn_k = knn_k_task2;
        auto model2 = BaselineModel::fit(parse_kind(kind), fv, instances, o2);
        std::vector<Prediction> preds, truths;
        long labeled = 0;
        for (const auto& p : pairs_ds->records) {
            preds.push_back({p.id, static_cast<double>(model2.predict_pair(p))});
            if (p.label) {
                truths.push_back({p.id, static_cast<double>(*p.label)});
                ++labeled;
            }
        }
        write_predictions((outdir / ("pred_task2_" + tag + ".csv")).string(),
                          PredTask::task2, preds);
        if (labeled == static_cast<long>(preds.size()) && labeled > 0)
            cell.task2_acc = accuracy(preds, truths);
    }
    return cell;
}

int cmd_baseline(const std::string& kind, const std::string& variant,
                 const std::string& regime, bool grid, const std::string& train_path,
                 const std::string& test_path, const std::string& pairs_path,
                 const std::string& pairs_train_path, int knn_k1, int knn_k2,
                 std::uint64_t seed, const std::string& outdir_s) {
    fs::path outdir(outdir_s);
    fs::create_directories(outdir);
    auto train_ds = parse_task1_file(train_path);
    Task1Dataset test_ds;
    Task2Dataset pairs_ds, pairs_train_ds;
    bool have_test = !test_path.empty();
    bool have_pairs = !pairs_path.empty();
    if (have_test) test_ds = parse_task1_file(test_path);
    if (have_pairs) pairs_ds = parse_task2_file(pairs_path);
    if (!pairs_train_path.empty()) pairs_train_ds = parse_task2_file(pairs_train_path);

    BaselineOptions opts;
    opts.knn_k = knn_k1;
    opts.seed = seed;

    std::ofstream card(outdir / "scorecard.csv");
    card << "kind,variant,regime,task1_rmse,task2_accuracy\n";
    auto emit = [&card](const BaselineCell& c) {
        card << c.kind << "," << c.variant << "," << c.regime << ",";
        if (c.task1_rmse >= 0) card << c.task1_rmse;
        card << ",";
        if (c.task2_acc >= 0) card << c.task2_acc;
        card << "\n";
    };

    if (kind == "constant") {
        if (pairs_train_path.empty() && !have_pairs)
            throw CLI::ValidationError("constant baseline needs --pairs-train or --pairs");
        const Task2Dataset& ptrain =
            !pairs_train_path.empty() ? pairs_train_ds : pairs_ds;
        auto cb = constant_baselines(train_ds, ptrain);
        std::cout << "constant mean grade " << cb.mean_grade << "\n";
        std::cout << "most frequent label " << cb.most_frequent_label << "\n";
        BaselineCell cell{"constant", "-", "-"};
        if (have_test) {
            std::vector<Prediction> preds, truths;
            for (const auto& h : test_ds.records) {
                preds.push_back({h.id, cb.mean_grade});
                truths.push_back({h.id, h.mean_grade});
            }
            write_predictions((outdir / "pred_task1_constant.csv").string(),
                              PredTask::task1, preds);
            cell.task1_rmse = rmse(preds, truths);
            std::cout << "task1 rmse " << cell.task1_rmse << "\n";
        }
        if (have_pairs) {
            std::vector<Prediction> preds, truths;
            long labeled = 0;
            for (const auto& p : pairs_ds.records) {
                preds.push_back({p.id, static_cast<double>(cb.most_frequent_label)});
                if (p.label) {
                    truths.push_back({p.id, static_cast<double>(*p.label)});
                    ++labeled;
                }
            }
            write_predictions((outdir / "pred_task2_constant.csv").string(),
                              PredTask::task2, preds);
            if (labeled == static_cast<long>(preds.size()) && labeled > 0) {
                cell.task2_acc = accuracy(preds, truths);
                std::cout << "task2 accuracy " << cell.task2_acc << "\n";
            }
        }
        emit(cell);
    } else if (grid) {
        for (const std::string& k : {"dtc", "svm", "knn", "nbc"})
            for (const std::string& v : {"orig", "edit"})
                for (const std::string& r : {"all", "third"}) {
                    auto cell = run_baseline_cell(k, v, r, train_ds,
                                                  have_test ? &test_ds : nullptr,
                                                  have_pairs ? &pairs_ds : nullptr, opts,
                                                  knn_k2, outdir);
                    emit(cell);
                }
    } else {
        auto cell = run_baseline_cell(kind, variant, regime, train_ds,
                                      have_test ? &test_ds : nullptr,
                                      have_pairs ? &pairs_ds : nullptr, opts, knn_k2,
                                      outdir);
        emit(cell);
        if (cell.task1_rmse >= 0) std::cout << "task1 rmse " << cell.task1_rmse << "\n";
        if (cell.task2_acc >= 0) std::cout << "task2 accuracy " << cell.task2_acc << "\n";
    }

    std::vector<std::string> inputs = {train_path};
    if (have_test) inputs.push_back(test_path);
    if (have_pairs) inputs.push_back(pairs_path);
    if (!pairs_train_path.empty()) inputs.push_back(pairs_train_path);
    write_manifest(outdir, "baseline",
                   {{"kind", kind}, {"variant", variant}, {"regime", regime}, {"grid", grid}},
                   seed, inputs);
    return 0;
}

struct SweepPoint {
    std::string label;
    ModelConfig mcfg;
    TrainConfig tcfg;
};

int cmd_sweep(const std::string& axis, bool full, const std::string& train_path,
              const std::string& dev_path, int max_epochs, int n_seeds, int vocab_cap,
              const ModelFlags& mf, const std::string& outdir_s) {
    fs::path outdir(outdir_s);
    fs::create_directories(outdir);
    auto train_ds = parse_task1_file(train_path);
    auto dev_ds = parse_task1_file(dev_path);
    Vocab vocab = train_or_load_vocab("", train_ds, vocab_cap, outdir);

    ModelConfig base = mf.resolve();
    base.vocab_size = vocab.size();
    TrainConfig tbase;
    tbase.max_epochs = max_epochs;

    std::vector<SweepPoint> points;
    auto add = [&points](const std::string& label, ModelConfig m, TrainConfig t) {
        points.push_back({label, std::move(m), std::move(t)});
    };
    if (axis == "embedding") {
        std::vector<int> dims = full ? std::vector<int>{1, 2, 4, 8, 16, 32, 64, 128}
                                     : std::vector<int>{1, 2, 4, 8};
        for (int d : dims) {
            ModelConfig m = base;
            m.embedding_dim = d;
            add("embedding_dim=" + std::to_string(d), m, tbase);
        }
    } else if (axis == "filters") {
        std::vector<int> counts =
            full ? std::vector<int>{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048}
                 : std::vector<int>{1, 2, 4};
        for (int f : counts) {
            ModelConfig m = base;
            m.filters_per_region = f;
            add("filters_per_region=" + std::to_string(f), m, tbase);
        }
    } else if (axis == "batch_lr") {
        std::vector<int> batches = full ? std::vector<int>{2, 4, 8, 16, 32, 64}
                                        : std::vector<int>{16, 64};
        std::vector<double> lrs = full ? std::vector<double>{1e-4, 1e-5, 2e-5}
                                       : std::vector<double>{1e-4, 1e-5};
        for (int b : batches)
            for (double lr : lrs) {
                TrainConfig t = tbase;
                t.batch_size = b;
                t.learning_rate = lr;
                std::ostringstream os;
                os << "batch=" << b << ",lr=" << lr;
                add(os.str(), base, t);
            }
    } else if (axis == "ablation") {
        // Full scale mirrors the boosted configuration.
        ModelConfig m = base;
        if (full) {
            m.embedding_dim = 2048;
            m.filters_per_region = 2048;
        }
        ModelConfig conv_only = m;
        conv_only.use_edit_embedding = false;
        ModelConfig edit_only = m;
        edit_only.use_conv_features = false;
        ModelConfig both = m;
        add("conv_features_only", conv_only, tbase);
        add("edit_embedding_only", edit_only, tbase);
        add("conv_features_and_edit_embedding", both, tbase);
    } else {
        throw CLI::ValidationError("unknown sweep axis: " + axis);
    }

    int threads = thread_count();
    std::ofstream table(outdir / "sweep.csv");
    table << "point,mean_dev_rmse,stderr,seeds\n";
    for (std::size_t start = 0; start < points.size(); start += threads) {
        std::size_t end = std::min(points.size(), start + static_cast<std::size_t>(threads));
        std::vector<std::future<std::pair<double, double>>> futures;
        for (std::size_t i = start; i < end; ++i) {
            futures.push_back(std::async(std::launch::async, [&, i]() {
                double sum = 0.0, sumsq = 0.0;
                for (int s = 0; s < n_seeds; ++s) {
                    TrainConfig t = points[i].tcfg;
                    t.seed = static_cast<std::uint64_t>(s);
                    auto result = train(points[i].mcfg, t, vocab, train_ds, dev_ds);
                    double best = result.report.dev_rmse[result.report.best_epoch];
                    sum += best;
                    sumsq += best * best;
                }
                double mean = sum / n_seeds;
                double var = std::max(0.0, sumsq / n_seeds - mean * mean);
                double stderr_v = n_seeds > 1 ? std::sqrt(var / (n_seeds - 1)) : 0.0;
                return std::make_pair(mean, stderr_v);
            }));
        }
        for (std::size_t i = start; i < end; ++i) {
            auto [mean, se] = futures[i - start].get();
            table << points[i].label << "," << mean << "," << se << "," << n_seeds << "\n";
            std::cout << points[i].label << ": " << mean << " +/- " << se << "\n";
        }
    }
    write_manifest(outdir, "sweep",
                   {{"axis", axis}, {"full", full}, {"max_epochs", max_epochs},
                    {"n_seeds", n_seeds}},
                   0, {train_path, dev_path});
    return 0;
}

int cmd_gradcheck(int seeds, int coords, int seq_tokens, double tolerance,
                  const ModelFlags& mf) {
    ModelConfig cfg = mf.resolve();
    if (cfg.vocab_size > 64) cfg.vocab_size = 64;  // keep finite differences tractable
    double worst = 0.0;
    for (int s = 0; s < seeds; ++s) {
        auto params = init_params(cfg, static_cast<std::uint64_t>(s));
        std::mt19937_64 rng(s * 7919 + 17);
        TokenSequence seq;
        seq.ids.assign(cfg.seq_len, kPad);
        seq.real_length = seq_tokens;
        for (int i = 0; i < seq_tokens; ++i)
            seq.ids[i] = static_cast<int>(rng() % cfg.vocab_size);
        seq.edit_begin = seq_tokens / 2;
        seq.edit_end = seq.edit_begin + 2;
        int target = static_cast<int>(rng() % cfg.num_grades);

        auto loss = [&]() {
            Tape tape;
            auto fwd = forward(tape, cfg, params, seq);
            return tape.value(tape.cross_entropy(fwd.logits, target))[0];
        };
        auto backprop = [&]() {
            for (Parameter* p : params.all()) p->zero_grad();
            Tape tape;
            auto fwd = forward(tape, cfg, params, seq);
            tape.backward(tape.cross_entropy(fwd.logits, target));
        };
        GradCheckOptions opts;
        opts.max_coords_per_param = coords;
        opts.seed = static_cast<unsigned long long>(s) + 1;
        std::vector<Parameter*> plist = params.all();
        auto report = grad_check(loss, backprop, plist, opts);
        worst = std::max(worst, report.max_rel_error);
        std::cout << "seed " << s << ": max rel error " << report.max_rel_error << " over "
                  << report.checked << " coords (worst: " << report.worst.param << ")\n";
    }
    std::cout << "overall max rel error " << worst << (worst < tolerance ? " PASS" : " FAIL")
              << "\n";
    return worst < tolerance ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"JokeMeter: humor-grade regression for edited headlines"};
    app.require_subcommand(1);

    std::string outdir = default_outdir();
    bool lenient = false;

    // analyze
    auto* analyze = app.add_subcommand("analyze", "dataset statistics and feature study");
    std::string a_train, a_dev, a_test, a_model, a_vocab;
    analyze->add_option("--train", a_train, "Task 1 train CSV")->required();
    analyze->add_option("--dev", a_dev, "Task 1 dev CSV");
    analyze->add_option("--test", a_test, "Task 1 test CSV");
    analyze->add_option("--model", a_model, "checkpoint for the pooled-feature study");
    analyze->add_option("--vocab", a_vocab, "vocab file matching --model");
    analyze->add_flag("--lenient", lenient, "skip malformed rows with a warning");
    analyze->add_option("-o,--out", outdir, "output directory");

    // train
    auto* train_cmd = app.add_subcommand("train", "train JokeMeter");
    ModelFlags mf;
    TrainFlags tf;
    std::string t_train, t_dev, t_vocab, t_config;
    int vocab_cap = kDefaultVocabCap;
    train_cmd->add_option("--preset", mf.preset, "jokemeter | jokemeter-boosted");
    train_cmd->add_option("--config", t_config, "JSON config file (flags override)");
    train_cmd->add_option("--train", t_train)->required();
    train_cmd->add_option("--dev", t_dev)->required();
    train_cmd->add_option("--vocab", t_vocab, "existing vocab file (else trained)");
    train_cmd->add_option("--vocab-cap", vocab_cap);
    train_cmd->add_option("--embedding-dim", mf.embedding_dim);
    train_cmd->add_option("--filters", mf.filters);
    train_cmd->add_option("--seq-len", mf.seq_len);
    train_cmd->add_flag("--no-edit-embedding", mf.no_edit_embedding);
    train_cmd->add_flag("--no-conv-features", mf.no_conv_features);
    train_cmd->add_option("--regime", tf.regime, "all | third");
    train_cmd->add_option("--batch-size", tf.batch_size);
    train_cmd->add_option("--lr", tf.lr);
    train_cmd->add_option("--weight-decay", tf.weight_decay);
    train_cmd->add_option("--patience", tf.patience);
    train_cmd->add_option("--max-epochs", tf.max_epochs);
    train_cmd->add_option("--seed", tf.seed);
    train_cmd->add_flag("--lenient", lenient);
    train_cmd->add_option("-o,--out", outdir);

    // predict
    auto* predict = app.add_subcommand("predict", "write official-shape predictions");
    std::string p_model, p_vocab, p_data, p_out = "predictions.csv";
    int p_task = 1;
    predict->add_option("--model", p_model)->required();
    predict->add_option("--vocab", p_vocab)->required();
    predict->add_option("--data", p_data)->required();
    predict->add_option("--task", p_task)->check(CLI::IsMember({1, 2}));
    predict->add_option("-o,--out", p_out);
    predict->add_flag("--lenient", lenient);

    // score
    auto* score = app.add_subcommand("score", "official metrics by id join");
    std::string s_pred, s_truth;
    int s_task = 1;
    score->add_option("--pred", s_pred)->required();
    score->add_option("--truth", s_truth, "dataset CSV with ground truth")->required();
    score->add_option("--task", s_task)->check(CLI::IsMember({1, 2}));

    // baseline
    auto* baseline = app.add_subcommand("baseline", "TF-IDF classifiers and constants");
    std::string b_kind = "constant", b_variant = "orig", b_regime = "all";
    std::string b_train, b_test, b_pairs, b_pairs_train;
    bool b_grid = false;
    int b_knn1 = 5, b_knn2 = 13;
    std::uint64_t b_seed = 0;
    baseline->add_option("--kind", b_kind, "dtc|svm|knn|nbc|constant");
    baseline->add_option("--variant", b_variant, "orig | edit");
    baseline->add_option("--regime", b_regime, "all | third");
    baseline->add_flag("--grid", b_grid, "run all kinds x variants x regimes");
    baseline->add_option("--train", b_train)->required();
    baseline->add_option("--test", b_test, "Task 1 test CSV");
    baseline->add_option("--pairs", b_pairs, "Task 2 pairs CSV");
    baseline->add_option("--pairs-train", b_pairs_train, "labeled Task 2 train CSV");
    baseline->add_option("--knn-k", b_knn1, "k for Sub-Task 1");
    baseline->add_option("--knn-k-task2", b_knn2, "k for Sub-Task 2");
    baseline->add_option("--seed", b_seed);
    baseline->add_option("-o,--out", outdir);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "hyperparameter sweeps, 3-seed averages");
    std::string w_axis, w_train, w_dev;
    bool w_full = false;
    int w_epochs = 10, w_seeds = 3, w_vocab_cap = kDefaultVocabCap;
    sweep->add_option("--axis", w_axis, "embedding|filters|batch_lr|ablation")->required();
    sweep->add_flag("--full", w_full, "full-scale grid (slow)");
    sweep->add_option("--train", w_train)->required();
    sweep->add_option("--dev", w_dev)->required();
    sweep->add_option("--max-epochs", w_epochs);
    sweep->add_option("--seeds", w_seeds);
    sweep->add_option("--vocab-cap", w_vocab_cap);
    sweep->add_option("--seq-len", mf.seq_len);
    sweep->add_option("--embedding-dim", mf.embedding_dim);
    sweep->add_option("--filters", mf.filters);
    sweep->add_option("-o,--out", outdir);

    // gradcheck
    auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient audit");
    int g_seeds = 20, g_coords = 40, g_tokens = 16;
    double g_tol = 1e-4;
    gradcheck->add_option("--seeds", g_seeds);
    gradcheck->add_option("--coords", g_coords, "sampled coordinates per parameter");
    gradcheck->add_option("--tokens", g_tokens, "real tokens per random input");
    gradcheck->add_option("--tolerance", g_tol);
    gradcheck->add_option("--embedding-dim", mf.embedding_dim);
    gradcheck->add_option("--filters", mf.filters);
    gradcheck->add_option("--seq-len", mf.seq_len);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze)
            return cmd_analyze(a_train, a_dev, a_test, a_model, a_vocab, lenient, outdir);
        if (*train_cmd) {
            apply_config_file(t_config, train_cmd, mf, tf);
            return cmd_train(mf, tf, t_train, t_dev, t_vocab, vocab_cap, lenient, outdir);
        }
        if (*predict)
            return cmd_predict(p_model, p_vocab, p_data, p_task, p_out, lenient);
        if (*score) return cmd_score(s_pred, s_truth, s_task);
        if (*baseline)
            return cmd_baseline(b_kind, b_variant, b_regime, b_grid, b_train, b_test,
                                b_pairs, b_pairs_train, b_knn1, b_knn2, b_seed, outdir);
        if (*sweep)
            return cmd_sweep(w_axis, w_full, w_train, w_dev, w_epochs, w_seeds,
                             w_vocab_cap, mf, outdir);
        if (*gradcheck) return cmd_gradcheck(g_seeds, g_coords, g_tokens, g_tol, mf);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
