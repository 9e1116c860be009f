#include "relsamp/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "relsamp/io_util.hpp"
#include "relsamp/rng.hpp"

namespace relsamp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double mat_norm(const ad::Mat& m) {
    double s = 0.0;
    for (double x : m.v) s += x * x;
    return std::sqrt(s);
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void TrainConfig::validate() const {
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (patience < 1) throw std::invalid_argument("TrainConfig: patience must be >= 1");
    if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
    plan.validate();
}

ReinforceStep make_reinforce_step(double batch_loss, double baseline, const SampledSubgraph& sg) {
    ReinforceStep step;
    step.loss = batch_loss;
    step.baseline = baseline;
    step.grad_l = subgraph_log_prob_gradient(sg);
    for (double& g : step.grad_l) g *= batch_loss - baseline;
    return step;
}

std::string history_to_csv(const std::vector<HistoryRow>& rows) {
    std::string out = "epoch,train_loss,val_pr_auc,val_roc_auc,ms_sampling,ms_forward,ms_backward\n";
    for (const HistoryRow& r : rows) {
        out += std::to_string(r.epoch) + "," + fmt_double(r.train_loss) + "," +
               fmt_double(r.val_pr_auc) + "," + fmt_double(r.val_roc_auc) + "," +
               fmt_double(r.ms_sampling) + "," + fmt_double(r.ms_forward) + "," +
               fmt_double(r.ms_backward) + "\n";
    }
    return out;
}

Trainer::Trainer(const MultiRelGraph& g, TrainConfig cfg, ad::Mat features)
    : graph_(g),
      cfg_(cfg),
      adam_tensors_({cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, 1e-8}),
      adam_logits_({cfg.logit_learning_rate, cfg.adam_beta1, cfg.adam_beta2, 1e-8}) {
    cfg_.validate();

    // Edges of the predicted relation(s) get split; everything else stays as
    // message-passing structure.
    std::vector<Edge> split_pool, structural;
    for (const Edge& e : g.edges()) {
        if (cfg_.target_relation < 0 || e.r == cfg_.target_relation)
            split_pool.push_back(e);
        else
            structural.push_back(e);
    }
    if (split_pool.empty()) throw std::invalid_argument("Trainer: no edges to split");
    split_ = split_edges(g, split_pool, cfg_.split_train, cfg_.split_valid, cfg_.split_test,
                         derive_seed(cfg_.seed, 0x73706c6974ULL));

    std::vector<Edge> train_edges = structural;
    if (!cfg_.exclude_target_messages)
        train_edges.insert(train_edges.end(), split_.train.begin(), split_.train.end());
    train_graph_ = MultiRelGraph::from_edges(g.num_nodes(), g.num_relations(), train_edges);

    // Validation/test negatives are fixed once so PR-AUC is comparable across
    // epochs and models.
    if (!split_.valid.empty())
        valid_negatives_ = sample_negatives(graph_, split_.valid,
                                            static_cast<int>(split_.valid.size()),
                                            derive_seed(cfg_.seed, 0x6e656776ULL));
    if (!split_.test.empty())
        test_negatives_ = sample_negatives(graph_, split_.test,
                                           static_cast<int>(split_.test.size()),
                                           derive_seed(cfg_.seed, 0x6e656774ULL));

    ModelConfig mc;
    mc.hidden_dim = cfg_.hidden_dim;
    mc.num_bases = cfg_.num_bases;
    mc.num_layers = cfg_.num_layers;
    mc.decoder = cfg_.decoder;
    mc.weighting = cfg_.weighting;
    mc.sampler_mode = cfg_.sampler_mode;
    model_ = Model::init(g, mc, std::move(features), cfg_.seed);
}

Trainer::BatchResult Trainer::run_batch(const std::vector<Edge>& positives, uint64_t batch_index,
                                        EpochSummary& summary) {
    const auto t_sample = Clock::now();
    const uint64_t stream = derive_seed(cfg_.seed, 0x100000000ULL + batch_index);
    std::vector<Edge> negatives =
        sample_negatives(graph_, positives, static_cast<int>(positives.size()), stream);

    std::optional<SampledSubgraph> sg;
    int64_t touched = 0;
    if (!cfg_.full_message_passing) {
        sg = sample_neighborhood(train_graph_, positives, model_.logits, cfg_.plan,
                                 cfg_.batch_size, derive_seed(cfg_.seed, 0x200000000ULL + batch_index));
        for (const HopRecord& h : sg->hops) touched += static_cast<int64_t>(h.sampled_edges.size());
    }
    summary.ms_sampling += ms_since(t_sample);

    const auto t_forward = Clock::now();
    ad::Tape tape;
    ModelGraph mg(tape, model_);
    ad::Var h = cfg_.full_message_passing ? mg.encode_full(train_graph_)
                                          : mg.encode_sampled(*sg, train_graph_, cfg_.estimator);
    std::vector<Edge> scored = positives;
    scored.insert(scored.end(), negatives.begin(), negatives.end());
    ad::Var probs = mg.score_edges(h, scored);
    ad::Mat labels(static_cast<int>(scored.size()), 1);
    for (size_t i = 0; i < positives.size(); ++i) labels.v[i] = 1.0;
    ad::Var loss = tape.bce_loss(probs, std::move(labels));
    const double loss_value = tape.value(loss)(0, 0);
    summary.ms_forward += ms_since(t_forward);

    if (!std::isfinite(loss_value)) {
        std::string diag = "train_epoch: non-finite loss at batch " + std::to_string(batch_index);
        for (const ad::Mat* p : std::as_const(model_).tensor_parameters())
            diag += " |p|=" + std::to_string(mat_norm(*p));
        throw std::runtime_error(diag);
    }

    const auto t_backward = Clock::now();
    tape.backward(loss);

    // parameter_vars() is pushed in the same order as tensor_parameters()
    std::vector<ad::Mat*> params = model_.tensor_parameters();
    std::vector<const ad::Mat*> grads;
    for (ad::Var v : mg.parameter_vars()) grads.push_back(&tape.grad(v));
    if (params.size() != grads.size())
        throw std::logic_error("Trainer: parameter/gradient count mismatch");
    adam_tensors_.step(params, grads);

    const bool rw_grad = cfg_.weighting == WeightingMode::relation_weighted;
    const bool reinforce = cfg_.sampler_mode == SamplerMode::learned && sg.has_value();
    if (rw_grad || reinforce) {
        ad::Mat lgrad(1, model_.num_relations);
        if (rw_grad) lgrad = tape.grad(mg.logits_var());
        if (reinforce) {
            const double b = cfg_.baseline == ReinforceBaseline::moving_average ? baseline_value_ : 0.0;
            ReinforceStep step = make_reinforce_step(loss_value, b, *sg);
            for (int r = 0; r < model_.num_relations; ++r)
                lgrad(0, r) += step.grad_l[static_cast<size_t>(r)];
            if (cfg_.baseline == ReinforceBaseline::moving_average) {
                baseline_value_ = baseline_primed_
                                      ? cfg_.baseline_decay * baseline_value_ +
                                            (1.0 - cfg_.baseline_decay) * loss_value
                                      : loss_value;
                baseline_primed_ = true;
            }
        }
        ad::Mat lmat(1, model_.num_relations);
        for (int r = 0; r < model_.num_relations; ++r)
            lmat(0, r) = model_.logits.l[static_cast<size_t>(r)];
        adam_logits_.step({&lmat}, {&lgrad});
        for (int r = 0; r < model_.num_relations; ++r)
            model_.logits.l[static_cast<size_t>(r)] = lmat(0, r);
    }
    summary.ms_backward += ms_since(t_backward);

    return {loss_value, touched};
}

EpochSummary Trainer::train_epoch() {
    EpochSummary summary;
    std::vector<Edge> order = split_.train;
    Rng shuffle_rng(derive_seed(cfg_.seed, 0x65706f6368ULL + static_cast<uint64_t>(epoch_)));
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(cfg_.batch_size)) {
        const size_t end = std::min(order.size(), start + static_cast<size_t>(cfg_.batch_size));
        std::vector<Edge> batch(order.begin() + static_cast<long>(start),
                                order.begin() + static_cast<long>(end));
        BatchResult res = run_batch(batch, batch_counter_++, summary);
        loss_sum += res.loss;
        summary.edges_touched += res.edges_touched;
        ++summary.num_batches;
    }
    ++epoch_;
    summary.mean_loss = summary.num_batches > 0 ? loss_sum / summary.num_batches : 0.0;
    return summary;
}

MetricsReport Trainer::evaluate(const std::vector<Edge>& positives,
                                const std::vector<Edge>& negatives, bool full_graph) {
    if (positives.empty()) throw std::invalid_argument("evaluate: empty edge list");
    std::vector<Edge> scored = positives;
    scored.insert(scored.end(), negatives.begin(), negatives.end());
    std::vector<int> labels(scored.size(), 0);
    for (size_t i = 0; i < positives.size(); ++i) labels[i] = 1;

    MetricsReport rep;
    std::vector<double> scores;
    scores.reserve(scored.size());
    const auto t0 = Clock::now();
    if (full_graph || cfg_.full_message_passing) {
        ad::Tape tape;
        ModelGraph mg(tape, model_);
        ad::Var probs = mg.score_edges(mg.encode_full(train_graph_), scored);
        const ad::Mat& p = tape.value(probs);
        scores.assign(p.v.begin(), p.v.end());
        rep.ms_forward = ms_since(t0);
    } else {
        // sampling stays active at inference time
        uint64_t eval_batch = 0;
        for (size_t start = 0; start < scored.size();
             start += static_cast<size_t>(cfg_.batch_size)) {
            const size_t end = std::min(scored.size(), start + static_cast<size_t>(cfg_.batch_size));
            std::vector<Edge> batch(scored.begin() + static_cast<long>(start),
                                    scored.begin() + static_cast<long>(end));
            const auto ts = Clock::now();
            SampledSubgraph sg = sample_neighborhood(
                train_graph_, batch, model_.logits, cfg_.plan, cfg_.batch_size,
                derive_seed(cfg_.seed,
                            0x300000000ULL + (static_cast<uint64_t>(epoch_) << 20) + eval_batch));
            rep.ms_sampling += ms_since(ts);
            const auto tf = Clock::now();
            ad::Tape tape;
            ModelGraph mg(tape, model_);
            ad::Var probs = mg.score_edges(mg.encode_sampled(sg, train_graph_, cfg_.estimator), batch);
            const ad::Mat& p = tape.value(probs);
            scores.insert(scores.end(), p.v.begin(), p.v.end());
            rep.ms_forward += ms_since(tf);
            ++eval_batch;
        }
    }

    double loss = 0.0;
    for (size_t i = 0; i < scores.size(); ++i) {
        const double p = std::clamp(scores[i], ad::Tape::kBceClamp, 1.0 - ad::Tape::kBceClamp);
        loss -= labels[i] != 0 ? std::log(p) : std::log(1.0 - p);
    }
    rep.loss = loss / static_cast<double>(scores.size());
    rep.pr_auc = pr_auc(scores, labels);
    rep.roc_auc = roc_auc(scores, labels);
    return rep;
}

FitResult Trainer::fit() {
    FitResult res;
    res.best_model = model_;
    int since_best = 0;
    for (int e = 0; e < cfg_.max_epochs; ++e) {
        EpochSummary es = train_epoch();
        MetricsReport val = evaluate(split_.valid, valid_negatives_, cfg_.full_graph_eval);
        HistoryRow row{e, es.mean_loss, val.pr_auc, val.roc_auc,
                       es.ms_sampling, es.ms_forward, es.ms_backward};
        res.history.push_back(row);
        if (res.best_epoch < 0 || val.pr_auc > res.best_val_pr_auc) {
            res.best_epoch = e;
            res.best_val_pr_auc = val.pr_auc;
            res.best_model = model_;
            since_best = 0;
        } else if (++since_best >= cfg_.patience) {
            break;
        }
    }
    return res;
}

namespace {

constexpr uint32_t kCheckpointMagic = 0x52534d50;  // "RSMP"
constexpr uint32_t kCheckpointVersion = 1;

void put_u32(std::string& out, uint32_t x) { out.append(reinterpret_cast<const char*>(&x), 4); }
void put_u64(std::string& out, uint64_t x) { out.append(reinterpret_cast<const char*>(&x), 8); }
void put_i32(std::string& out, int32_t x) { out.append(reinterpret_cast<const char*>(&x), 4); }

void put_mat(std::string& out, const ad::Mat& m) {
    put_i32(out, m.rows);
    put_i32(out, m.cols);
    out.append(reinterpret_cast<const char*>(m.v.data()), m.v.size() * sizeof(double));
}

struct Reader {
    const std::string& s;
    size_t pos = 0;
    template <typename T>
    T get() {
        if (pos + sizeof(T) > s.size()) throw std::runtime_error("checkpoint: truncated");
        T x;
        std::memcpy(&x, s.data() + pos, sizeof(T));
        pos += sizeof(T);
        return x;
    }
    ad::Mat get_mat() {
        const int rows = get<int32_t>();
        const int cols = get<int32_t>();
        ad::Mat m(rows, cols);
        const size_t bytes = m.v.size() * sizeof(double);
        if (pos + bytes > s.size()) throw std::runtime_error("checkpoint: truncated matrix");
        std::memcpy(m.v.data(), s.data() + pos, bytes);
        pos += bytes;
        return m;
    }
};

}  // namespace

void save_checkpoint(const std::string& path, const Model& model,
                     const std::array<uint64_t, 4>& rng_state) {
    std::string out;
    put_u32(out, kCheckpointMagic);
    put_u32(out, kCheckpointVersion);
    put_i32(out, model.num_nodes);
    put_i32(out, model.num_relations);
    put_i32(out, model.feature_dim);
    put_i32(out, model.one_hot_features ? 1 : 0);
    put_i32(out, static_cast<int32_t>(model.weighting));
    put_i32(out, static_cast<int32_t>(model.decoder.kind));
    put_mat(out, model.features);
    put_i32(out, static_cast<int32_t>(model.layers.size()));
    for (const auto& layer : model.layers) {
        put_i32(out, layer.use_basis ? 1 : 0);
        if (layer.use_basis) {
            put_i32(out, static_cast<int32_t>(layer.bases.size()));
            for (const auto& b : layer.bases) put_mat(out, b);
            put_mat(out, layer.coefficients);
        } else {
            put_i32(out, static_cast<int32_t>(layer.full.size()));
            for (const auto& w : layer.full) put_mat(out, w);
        }
        put_mat(out, layer.self_weight);
    }
    if (model.decoder.kind == DecoderKind::distmult) {
        put_mat(out, model.decoder.distmult_diag);
    } else {
        put_mat(out, model.decoder.dedicom_global);
        put_mat(out, model.decoder.dedicom_diag);
    }
    put_i32(out, static_cast<int32_t>(model.logits.mode));
    put_i32(out, static_cast<int32_t>(model.logits.l.size()));
    for (double x : model.logits.l) out.append(reinterpret_cast<const char*>(&x), sizeof(double));
    for (uint64_t w : rng_state) put_u64(out, w);
    write_file_atomic(path, out);
}

Checkpoint load_checkpoint(const std::string& path) {
    const std::string data = read_file(path);
    Reader rd{data};
    if (rd.get<uint32_t>() != kCheckpointMagic)
        throw std::runtime_error("checkpoint: bad magic in " + path);
    if (rd.get<uint32_t>() != kCheckpointVersion)
        throw std::runtime_error("checkpoint: unsupported version in " + path);
    Checkpoint ck;
    Model& m = ck.model;
    m.num_nodes = rd.get<int32_t>();
    m.num_relations = rd.get<int32_t>();
    m.feature_dim = rd.get<int32_t>();
    m.one_hot_features = rd.get<int32_t>() != 0;
    m.weighting = static_cast<WeightingMode>(rd.get<int32_t>());
    m.decoder.kind = static_cast<DecoderKind>(rd.get<int32_t>());
    m.features = rd.get_mat();
    const int num_layers = rd.get<int32_t>();
    for (int l = 0; l < num_layers; ++l) {
        RGCNLayerParams layer;
        layer.use_basis = rd.get<int32_t>() != 0;
        const int count = rd.get<int32_t>();
        if (layer.use_basis) {
            for (int b = 0; b < count; ++b) layer.bases.push_back(rd.get_mat());
            layer.coefficients = rd.get_mat();
        } else {
            for (int r = 0; r < count; ++r) layer.full.push_back(rd.get_mat());
        }
        layer.self_weight = rd.get_mat();
        m.layers.push_back(std::move(layer));
    }
    if (m.decoder.kind == DecoderKind::distmult) {
        m.decoder.distmult_diag = rd.get_mat();
    } else {
        m.decoder.dedicom_global = rd.get_mat();
        m.decoder.dedicom_diag = rd.get_mat();
    }
    m.logits.mode = static_cast<SamplerMode>(rd.get<int32_t>());
    const int num_logits = rd.get<int32_t>();
    for (int r = 0; r < num_logits; ++r) m.logits.l.push_back(rd.get<double>());
    for (auto& w : ck.rng_state) w = rd.get<uint64_t>();
    return ck;
}

}  // namespace relsamp
