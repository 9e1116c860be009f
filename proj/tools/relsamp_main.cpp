#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relsamp/config.hpp"
#include "relsamp/graph.hpp"
#include "relsamp/io_util.hpp"
#include "relsamp/sampler.hpp"
#include "relsamp/synthetic.hpp"
#include "relsamp/train.hpp"
#include "relsamp/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace relsamp;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// RELSAMP_THREADS caps optional prefetch parallelism; everything here runs
// sequentially, so the only obligation is validating the value.
int thread_cap() {
    const char* env = std::getenv("RELSAMP_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || v < 1)
        throw std::invalid_argument("RELSAMP_THREADS must be a positive integer, got '" +
                                    std::string(env) + "'");
    return static_cast<int>(v);
}

struct CommonArgs {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<std::string> run_dir;
};

RunConfig load_config(const CommonArgs& args) {
    if (!fs::exists(args.config_path))
        throw std::invalid_argument("config: no such file: " + args.config_path);
    RunConfig cfg = RunConfig::parse_file(args.config_path);
    if (args.seed) {
        cfg.train.seed = *args.seed;
        cfg.synth.seed = *args.seed;
    }
    if (args.run_dir) cfg.run_dir = *args.run_dir;
    cfg.train.validate();
    return cfg;
}

void write_resolved(const RunConfig& cfg) {
    write_file_atomic((fs::path(cfg.run_dir) / "config.resolved").string(), cfg.resolved());
}

MultiRelGraph load_graph(const RunConfig& cfg) {
    if (cfg.edges_path.empty())
        throw std::invalid_argument("config: edges_path is required for this subcommand");
    return MultiRelGraph::load_tsv(cfg.edges_path);
}

Trainer make_trainer(const RunConfig& cfg, const MultiRelGraph& g) {
    ad::Mat features;
    if (!cfg.features_path.empty()) features = load_feature_file(cfg.features_path);
    return Trainer(g, cfg.train, std::move(features));
}

int cmd_gen_synthetic(const CommonArgs& args) {
    RunConfig cfg = load_config(args);
    SyntheticResult res = generate_synthetic(cfg.synth);
    const fs::path dir(cfg.run_dir);
    write_file_atomic((dir / "edges.tsv").string(), res.edges_tsv);
    write_file_atomic((dir / "manifest.json").string(), res.manifest_json);
    MultiRelGraph g = MultiRelGraph::load_tsv((dir / "edges.tsv").string());
    g.write_vocab((dir / "nodes.vocab").string(), (dir / "relations.vocab").string());
    write_resolved(cfg);
    std::cout << "gen-synthetic: " << g.num_nodes() << " nodes, " << g.num_relations()
              << " relations, " << g.edges().size() << " edges -> " << cfg.run_dir << "\n";
    return 0;
}

int cmd_train(const CommonArgs& args) {
    const auto t0 = Clock::now();
    RunConfig cfg = load_config(args);
    MultiRelGraph g = load_graph(cfg);
    Trainer trainer = make_trainer(cfg, g);
    FitResult fitres = trainer.fit();

    const fs::path dir(cfg.run_dir);
    write_resolved(cfg);
    write_file_atomic((dir / "history.csv").string(), history_to_csv(fitres.history));
    save_checkpoint((dir / "best.ckpt").string(), fitres.best_model,
                    {cfg.train.seed, static_cast<uint64_t>(fitres.best_epoch), 0, 0});

    trainer.set_model(fitres.best_model);
    MetricsReport test =
        trainer.evaluate(trainer.split().test, trainer.test_negatives(), cfg.train.full_graph_eval);

    json report{{"pr_auc", test.pr_auc},
                {"roc_auc", test.roc_auc},
                {"best_val_pr_auc", fitres.best_val_pr_auc},
                {"best_epoch", fitres.best_epoch},
                {"epochs_run", fitres.history.size()},
                {"wall_clock_ms", ms_since(t0)}};
    write_file_atomic((dir / "report.json").string(), report.dump(2) + "\n");
    std::cout << "train: best epoch " << fitres.best_epoch << ", val pr_auc "
              << fitres.best_val_pr_auc << ", test pr_auc " << test.pr_auc << "\n";
    return 0;
}

int cmd_eval(const CommonArgs& args) {
    const auto t0 = Clock::now();
    RunConfig cfg = load_config(args);
    MultiRelGraph g = load_graph(cfg);
    Trainer trainer = make_trainer(cfg, g);
    Checkpoint ckpt = load_checkpoint((fs::path(cfg.run_dir) / "best.ckpt").string());
    trainer.set_model(std::move(ckpt.model));

    MetricsReport val = trainer.evaluate(trainer.split().valid, trainer.valid_negatives(),
                                         cfg.train.full_graph_eval);
    MetricsReport test =
        trainer.evaluate(trainer.split().test, trainer.test_negatives(), cfg.train.full_graph_eval);

    json report{{"pr_auc", test.pr_auc},
                {"roc_auc", test.roc_auc},
                {"val_pr_auc", val.pr_auc},
                {"val_roc_auc", val.roc_auc},
                {"wall_clock_ms", ms_since(t0)}};
    write_file_atomic((fs::path(cfg.run_dir) / "eval_report.json").string(),
                      report.dump(2) + "\n");
    std::cout << "eval: val pr_auc " << val.pr_auc << ", test pr_auc " << test.pr_auc << "\n";
    return 0;
}

int cmd_bench(const CommonArgs& args) {
    RunConfig cfg = load_config(args);
    MultiRelGraph g = load_graph(cfg);

    struct Variant {
        std::string name;
        bool full;
        SamplerMode mode;
    };
    const std::vector<Variant> variants = {{"full", true, SamplerMode::uniform},
                                           {"uniform", false, SamplerMode::uniform},
                                           {"learned", false, SamplerMode::learned}};
    struct Row {
        std::string variant, phase;
        double ms_mean = 0.0, ms_std = 0.0;
        int64_t edges_touched = 0;
    };
    std::vector<Row> rows;

    for (const Variant& v : variants) {
        RunConfig vcfg = cfg;
        vcfg.train.full_message_passing = v.full;
        vcfg.train.full_graph_eval = v.full;
        vcfg.train.sampler_mode = v.mode;
        Trainer trainer = make_trainer(vcfg, g);

        auto stats = [](const std::vector<double>& xs) {
            double mean = 0.0;
            for (double x : xs) mean += x;
            mean /= static_cast<double>(xs.size());
            double var = 0.0;
            for (double x : xs) var += (x - mean) * (x - mean);
            return std::pair<double, double>{mean, std::sqrt(var / static_cast<double>(xs.size()))};
        };

        trainer.train_epoch();  // warmup
        std::vector<double> epoch_ms;
        int64_t touched = 0;
        for (int rep = 0; rep < cfg.bench_repetitions; ++rep) {
            const auto t0 = Clock::now();
            EpochSummary es = trainer.train_epoch();
            epoch_ms.push_back(ms_since(t0));
            touched = es.num_batches > 0 ? es.edges_touched / es.num_batches : 0;
        }
        auto [tm, ts] = stats(epoch_ms);
        rows.push_back({v.name, "train_epoch", tm, ts, touched});

        const size_t n = std::min<size_t>(trainer.split().test.size(),
                                          static_cast<size_t>(cfg.train.batch_size));
        std::vector<Edge> batch(trainer.split().test.begin(),
                                trainer.split().test.begin() + static_cast<long>(n));
        std::vector<Edge> negs(trainer.test_negatives().begin(),
                               trainer.test_negatives().begin() + static_cast<long>(n));
        trainer.evaluate(batch, negs, v.full);  // warmup
        std::vector<double> inf_ms;
        for (int rep = 0; rep < cfg.bench_repetitions; ++rep) {
            const auto t0 = Clock::now();
            trainer.evaluate(batch, negs, v.full);
            inf_ms.push_back(ms_since(t0));
        }
        auto [im, is] = stats(inf_ms);
        rows.push_back({v.name, "inference_batch", im, is, 0});
    }

    auto full_mean = [&rows](const std::string& phase) {
        for (const Row& r : rows)
            if (r.variant == "full" && r.phase == phase) return r.ms_mean;
        return 0.0;
    };
    std::string csv = "variant,phase,ms_mean,ms_std,speedup_vs_full,edges_touched\n";
    for (const Row& r : rows) {
        const double base = full_mean(r.phase);
        const double speedup = r.ms_mean > 0.0 ? base / r.ms_mean : 0.0;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%.6f,%.6f,%lld\n", r.variant.c_str(),
                      r.phase.c_str(), r.ms_mean, r.ms_std, speedup,
                      static_cast<long long>(r.edges_touched));
        csv += buf;
    }
    write_resolved(cfg);
    write_file_atomic((fs::path(cfg.run_dir) / "bench.csv").string(), csv);
    std::cout << csv;
    return 0;
}

int cmd_verify(const CommonArgs& args, const std::string& level, uint64_t seed) {
    (void)load_config(args);  // the suites are self-contained, but the config must be sound

    std::vector<verify::Suite> suites;
    if (level.empty() || level == "gradcheck") suites.push_back(verify::gradcheck_suite());
    if (level.empty() || level == "enumeration")
        suites.push_back(verify::enumeration_suite(20, seed));
    if (level.empty() || level == "frequency") suites.push_back(verify::frequency_suite(seed));

    bool ok = true;
    for (const verify::Suite& s : suites)
        for (const verify::CheckResult& c : s.checks) {
            std::printf("%-44s %s  margin=%.3e  (%s)\n", c.name.c_str(),
                        c.passed ? "PASS" : "FAIL", c.margin, c.detail.c_str());
            ok = ok && c.passed;
        }
    return ok ? 0 : 2;
}

int cmd_sample_stats(const CommonArgs& args) {
    RunConfig cfg = load_config(args);
    MultiRelGraph g = load_graph(cfg);
    Trainer trainer = make_trainer(cfg, g);

    const MultiRelGraph& tg = trainer.train_graph();
    std::vector<int64_t> candidate(static_cast<size_t>(g.num_relations()), 0);
    std::vector<int64_t> sampled(static_cast<size_t>(g.num_relations()), 0);
    int64_t total_sampled = 0;

    std::vector<Edge> pool = trainer.split().train;
    Rng rng(derive_seed(cfg.train.seed, 0x73746174ULL));
    rng.shuffle(pool);
    const size_t bs = static_cast<size_t>(cfg.train.batch_size);
    uint64_t batch_idx = 0;
    for (size_t start = 0; start < pool.size(); start += bs) {
        const size_t end = std::min(pool.size(), start + bs);
        std::vector<Edge> batch(pool.begin() + static_cast<long>(start),
                                pool.begin() + static_cast<long>(end));
        SampledSubgraph sg =
            sample_neighborhood(tg, batch, trainer.model().logits, cfg.train.plan,
                                cfg.train.batch_size,
                                derive_seed(cfg.train.seed, 0x73740000ULL + batch_idx++));
        for (const HopRecord& hop : sg.hops)
            for (int r = 0; r < g.num_relations(); ++r) {
                candidate[static_cast<size_t>(r)] += hop.candidate_type_counts[static_cast<size_t>(r)];
                sampled[static_cast<size_t>(r)] += hop.sampled_type_counts[static_cast<size_t>(r)];
                total_sampled += hop.sampled_type_counts[static_cast<size_t>(r)];
            }
    }

    std::string csv = "relation_id,candidate_count,sampled_count,fraction\n";
    for (int r = 0; r < g.num_relations(); ++r) {
        const double frac = total_sampled > 0
                                ? static_cast<double>(sampled[static_cast<size_t>(r)]) /
                                      static_cast<double>(total_sampled)
                                : 0.0;
        char buf[128];
        std::snprintf(buf, sizeof buf, "%d,%lld,%lld,%.9f\n", r,
                      static_cast<long long>(candidate[static_cast<size_t>(r)]),
                      static_cast<long long>(sampled[static_cast<size_t>(r)]), frac);
        csv += buf;
    }
    write_resolved(cfg);
    write_file_atomic((fs::path(cfg.run_dir) / "sample_stats.csv").string(), csv);
    std::cout << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relation-dependent neighborhood sampling for multi-relational GCNs"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string verify_level;
    uint64_t verify_seed = 1;

    auto add_common = [&args](CLI::App* sub, bool config_required = true) {
        sub->add_option("--config", args.config_path, "run configuration file")
            ->required(config_required);
        sub->add_option("--seed", args.seed, "override the config seed");
        sub->add_option("--run-dir", args.run_dir, "override the config run directory");
    };

    add_common(app.add_subcommand("gen-synthetic", "generate a planted-relation synthetic graph"));
    add_common(app.add_subcommand("train", "train a model, writing history + checkpoint"));
    add_common(app.add_subcommand("eval", "evaluate the run's best checkpoint"));
    add_common(app.add_subcommand("bench", "time full vs sampled message passing"));
    add_common(app.add_subcommand("sample-stats", "per-relation sampled-fraction CSV"));
    CLI::App* verify_cmd = app.add_subcommand("verify", "run the estimator/gradient oracles");
    verify_cmd->add_option("--level", verify_level, "gradcheck|enumeration|frequency (default all)")
        ->check(CLI::IsMember({"gradcheck", "enumeration", "frequency"}));
    verify_cmd->add_option("--seed", verify_seed, "oracle seed");
    verify_cmd->add_option("--config", args.config_path, "ignored; accepted for uniformity");
    verify_cmd->add_option("--run-dir", args.run_dir, "ignored; accepted for uniformity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        thread_cap();
        if (app.got_subcommand("gen-synthetic")) return cmd_gen_synthetic(args);
        if (app.got_subcommand("train")) return cmd_train(args);
        if (app.got_subcommand("eval")) return cmd_eval(args);
        if (app.got_subcommand("bench")) return cmd_bench(args);
        if (app.got_subcommand("sample-stats")) return cmd_sample_stats(args);
        if (app.got_subcommand("verify")) return cmd_verify(args, verify_level, verify_seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
