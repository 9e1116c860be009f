#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relsamp/graph.hpp"
#include "relsamp/metrics.hpp"
#include "relsamp/model.hpp"
#include "relsamp/sampler.hpp"

namespace relsamp {

enum class ReinforceBaseline { off, moving_average };

struct TrainConfig {
    int batch_size = 100;
    double learning_rate = 0.001;
    double logit_learning_rate = 0.001;  // REINFORCE/RW step size for l
    double adam_beta1 = 0.99;
    double adam_beta2 = 0.999;
    int max_epochs = 300;
    int patience = 100;
    SamplerMode sampler_mode = SamplerMode::uniform;
    WeightingMode weighting = WeightingMode::degree_normalized;
    DecoderKind decoder = DecoderKind::dedicom;
    EstimatorKind estimator = EstimatorKind::relational_mc;
    ReinforceBaseline baseline = ReinforceBaseline::off;
    double baseline_decay = 0.9;
    uint64_t seed = 0;
    int hidden_dim = 128;
    int num_bases = 30;
    int num_layers = 2;
    SamplePlan plan;
    bool full_message_passing = false;  // no sampling at all (full R-GAE)
    bool full_graph_eval = false;       // evaluate with exact message passing
    int target_relation = -1;           // < 0: split every relation
    bool exclude_target_messages = false;  // keep split-pool edges out of message passing
    double split_train = 0.6;
    double split_valid = 0.2;
    double split_test = 0.2;

    void validate() const;
};

// Score-function estimator for one batch: grad_l = (L - b) * dlogp/dl.
struct ReinforceStep {
    double loss = 0.0;
    double baseline = 0.0;
    std::vector<double> grad_l;
};

ReinforceStep make_reinforce_step(double batch_loss, double baseline, const SampledSubgraph& sg);

struct EpochSummary {
    double mean_loss = 0.0;
    double ms_sampling = 0.0;
    double ms_forward = 0.0;
    double ms_backward = 0.0;
    int64_t edges_touched = 0;  // sum of n_k over batches (sampled modes)
    int num_batches = 0;
};

struct HistoryRow {
    int epoch = 0;
    double train_loss = 0.0;
    double val_pr_auc = 0.0;
    double val_roc_auc = 0.0;
    double ms_sampling = 0.0;
    double ms_forward = 0.0;
    double ms_backward = 0.0;
};

std::string history_to_csv(const std::vector<HistoryRow>& rows);

struct FitResult {
    std::vector<HistoryRow> history;
    int best_epoch = -1;
    double best_val_pr_auc = 0.0;
    Model best_model;
};

class Trainer {
public:
    Trainer(const MultiRelGraph& g, TrainConfig cfg, ad::Mat features = {});

    EpochSummary train_epoch();
    FitResult fit();
    MetricsReport evaluate(const std::vector<Edge>& positives, const std::vector<Edge>& negatives,
                           bool full_graph);

    Model& model() { return model_; }
    const Model& model() const { return model_; }
    void set_model(Model m) { model_ = std::move(m); }
    const EdgeSplit& split() const { return split_; }
    const MultiRelGraph& full_graph() const { return graph_; }
    const MultiRelGraph& train_graph() const { return train_graph_; }
    const std::vector<Edge>& valid_negatives() const { return valid_negatives_; }
    const std::vector<Edge>& test_negatives() const { return test_negatives_; }
    const TrainConfig& config() const { return cfg_; }
    int epoch() const { return epoch_; }
    ad::Adam& logit_optimizer() { return adam_logits_; }

private:
    struct BatchResult {
        double loss = 0.0;
        int64_t edges_touched = 0;
    };
    BatchResult run_batch(const std::vector<Edge>& positives, uint64_t batch_index,
                          EpochSummary& summary);

    MultiRelGraph graph_;        // full graph (negative-sampling membership oracle)
    MultiRelGraph train_graph_;  // message-passing edges: train split + non-target relations
    TrainConfig cfg_;
    EdgeSplit split_;
    std::vector<Edge> valid_negatives_;
    std::vector<Edge> test_negatives_;
    Model model_;
    ad::Adam adam_tensors_;
    ad::Adam adam_logits_;
    double baseline_value_ = 0.0;
    bool baseline_primed_ = false;
    int epoch_ = 0;
    uint64_t batch_counter_ = 0;
};

// Versioned binary checkpoint: all tensors, logits, decoder kind, RNG state.
struct Checkpoint {
    Model model;
    std::array<uint64_t, 4> rng_state{};
};

void save_checkpoint(const std::string& path, const Model& model,
                     const std::array<uint64_t, 4>& rng_state);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace relsamp
