#pragma once

#include <cstdint>
#include <vector>

#include "relsamp/autodiff.hpp"
#include "relsamp/graph.hpp"
#include "relsamp/sampler.hpp"

namespace relsamp {

enum class WeightingMode { degree_normalized, relation_weighted };
enum class DecoderKind { distmult, dedicom };
enum class EstimatorKind { relational_mc, uniform_mc };

// One R-GCN layer. With basis decomposition W_r = sum_b a_{r,b} V_b; when
// B >= |R| the decomposition only compresses, so full per-relation matrices
// are used instead.
struct RGCNLayerParams {
    bool use_basis = false;
    std::vector<ad::Mat> bases;     // B matrices, d_in x d_out
    ad::Mat coefficients;           // R x B
    std::vector<ad::Mat> full;      // R matrices, d_in x d_out (when !use_basis)
    ad::Mat self_weight;            // W_0, d_in x d_out
};

struct DecoderParams {
    DecoderKind kind = DecoderKind::dedicom;
    ad::Mat distmult_diag;   // R x d
    ad::Mat dedicom_global;  // d x d
    ad::Mat dedicom_diag;    // R x d
};

struct ModelConfig {
    int hidden_dim = 128;
    int num_bases = 30;
    int num_layers = 2;
    DecoderKind decoder = DecoderKind::dedicom;
    WeightingMode weighting = WeightingMode::degree_normalized;
    SamplerMode sampler_mode = SamplerMode::uniform;
};

// All learnable state of one run: encoder stack, decoder, and the shared
// relation logits (driving both message weights and sampling probabilities).
struct Model {
    int num_nodes = 0;
    int num_relations = 0;
    int feature_dim = 0;  // equals num_nodes when one-hot
    bool one_hot_features = true;
    ad::Mat features;  // empty when one-hot

    std::vector<RGCNLayerParams> layers;
    DecoderParams decoder;
    RelationLogits logits;
    WeightingMode weighting = WeightingMode::degree_normalized;

    // Stable-ordered list of every dense tensor parameter (logits excluded).
    std::vector<ad::Mat*> tensor_parameters();
    std::vector<const ad::Mat*> tensor_parameters() const;

    static Model init(const MultiRelGraph& g, const ModelConfig& cfg, ad::Mat features,
                      uint64_t seed);
};

// Binds a model to one tape for a forward/backward pass; exposes the tape
// handles of every parameter so the trainer can read gradients.
class ModelGraph {
public:
    ModelGraph(ad::Tape& tape, Model& model);

    // Exact Eq.-1 message passing over the whole graph; returns N x d.
    ad::Var encode_full(const MultiRelGraph& g);

    // Message passing restricted to the sampled hop edges; the outermost hop
    // feeds the first layer. Nodes with no sampled in-messages get W_0 only.
    ad::Var encode_sampled(const SampledSubgraph& sg, const MultiRelGraph& g, EstimatorKind est);

    // Decoder probabilities in (0,1), one row per edge.
    ad::Var score_edges(ad::Var embeddings, const std::vector<Edge>& edges);

    const std::vector<ad::Var>& parameter_vars() const { return param_vars_; }
    ad::Var logits_var() const { return logits_var_; }

private:
    struct LayerVars {
        std::vector<ad::Var> bases;
        ad::Var coefficients;
        std::vector<ad::Var> full;
        ad::Var self_weight;
        std::vector<ad::Var> relation_weight_cache;
        ad::Var weight(ad::Tape& tape, int r);
    };

    ad::Var layer_pass(int layer, ad::Var h_prev,
                       const std::vector<std::array<int, 3>>& directed,  // (src, dst, r)
                       const std::vector<double>& message_scale, const MultiRelGraph& g);

    ad::Tape& tape_;
    Model& model_;
    std::vector<LayerVars> layer_vars_;
    ad::Var decoder_a_, decoder_b_;  // distmult diag, or dedicom global+diag
    ad::Var logits_var_;
    ad::Var relation_weight_matrix_;  // c(u,r), built lazily for RW mode
    std::vector<ad::Var> param_vars_;
};

}  // namespace relsamp
