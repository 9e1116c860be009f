#include "relsamp/model.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace relsamp {

namespace {

ad::Mat glorot_uniform(int rows, int cols, Rng& rng) {
    ad::Mat m(rows, cols);
    const double lim = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (double& x : m.v) x = (2.0 * rng.next_double() - 1.0) * lim;
    return m;
}

}  // namespace

std::vector<ad::Mat*> Model::tensor_parameters() {
    std::vector<ad::Mat*> out;
    for (auto& layer : layers) {
        if (layer.use_basis) {
            for (auto& b : layer.bases) out.push_back(&b);
            out.push_back(&layer.coefficients);
        } else {
            for (auto& w : layer.full) out.push_back(&w);
        }
        out.push_back(&layer.self_weight);
    }
    if (decoder.kind == DecoderKind::distmult) {
        out.push_back(&decoder.distmult_diag);
    } else {
        out.push_back(&decoder.dedicom_global);
        out.push_back(&decoder.dedicom_diag);
    }
    return out;
}

std::vector<const ad::Mat*> Model::tensor_parameters() const {
    auto mut = const_cast<Model*>(this)->tensor_parameters();
    return {mut.begin(), mut.end()};
}

Model Model::init(const MultiRelGraph& g, const ModelConfig& cfg, ad::Mat features,
                  uint64_t seed) {
    Rng rng(derive_seed(seed, 0x6d6f64656cULL));
    Model m;
    m.num_nodes = g.num_nodes();
    m.num_relations = g.num_relations();
    m.one_hot_features = features.size() == 0;
    m.feature_dim = m.one_hot_features ? m.num_nodes : features.cols;
    if (!m.one_hot_features && features.rows != m.num_nodes)
        throw std::invalid_argument("Model::init: feature row count != num_nodes");
    m.features = std::move(features);
    m.weighting = cfg.weighting;

    const int num_rel = m.num_relations;
    int d_in = m.feature_dim;
    for (int l = 0; l < cfg.num_layers; ++l) {
        RGCNLayerParams layer;
        layer.use_basis = cfg.num_bases < num_rel;
        const int d_out = cfg.hidden_dim;
        if (layer.use_basis) {
            for (int b = 0; b < cfg.num_bases; ++b)
                layer.bases.push_back(glorot_uniform(d_in, d_out, rng));
            layer.coefficients = ad::Mat(num_rel, cfg.num_bases);
            const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.num_bases));
            for (double& x : layer.coefficients.v) x = rng.next_normal() * scale;
        } else {
            for (int r = 0; r < num_rel; ++r) layer.full.push_back(glorot_uniform(d_in, d_out, rng));
        }
        layer.self_weight = glorot_uniform(d_in, d_out, rng);
        m.layers.push_back(std::move(layer));
        d_in = d_out;
    }

    m.decoder.kind = cfg.decoder;
    const int d = cfg.hidden_dim;
    if (cfg.decoder == DecoderKind::distmult) {
        m.decoder.distmult_diag = glorot_uniform(num_rel, d, rng);
    } else {
        m.decoder.dedicom_global = glorot_uniform(d, d, rng);
        m.decoder.dedicom_diag = glorot_uniform(num_rel, d, rng);
    }

    switch (cfg.sampler_mode) {
        case SamplerMode::uniform:
            m.logits = RelationLogits::uniform(num_rel);
            break;
        case SamplerMode::inverse_frequency:
            m.logits = RelationLogits::inverse_frequency(g);
            break;
        case SamplerMode::learned:
            m.logits = RelationLogits::learned(num_rel, derive_seed(seed, 0x6c6f67697473ULL));
            break;
    }
    return m;
}

ad::Var ModelGraph::LayerVars::weight(ad::Tape& tape, int r) {
    if (!full.empty()) return full[static_cast<size_t>(r)];
    auto& cached = relation_weight_cache[static_cast<size_t>(r)];
    if (!cached.valid()) cached = tape.basis_combine(bases, coefficients, r);
    return cached;
}

ModelGraph::ModelGraph(ad::Tape& tape, Model& model) : tape_(tape), model_(model) {
    for (auto& layer : model.layers) {
        LayerVars lv;
        if (layer.use_basis) {
            for (auto& b : layer.bases) {
                lv.bases.push_back(tape.input(b, true));
                param_vars_.push_back(lv.bases.back());
            }
            lv.coefficients = tape.input(layer.coefficients, true);
            param_vars_.push_back(lv.coefficients);
            lv.relation_weight_cache.assign(static_cast<size_t>(model.num_relations), ad::Var{});
        } else {
            for (auto& w : layer.full) {
                lv.full.push_back(tape.input(w, true));
                param_vars_.push_back(lv.full.back());
            }
        }
        lv.self_weight = tape.input(layer.self_weight, true);
        param_vars_.push_back(lv.self_weight);
        layer_vars_.push_back(std::move(lv));
    }
    if (model.decoder.kind == DecoderKind::distmult) {
        decoder_a_ = tape.input(model.decoder.distmult_diag, true);
        param_vars_.push_back(decoder_a_);
    } else {
        decoder_a_ = tape.input(model.decoder.dedicom_global, true);
        decoder_b_ = tape.input(model.decoder.dedicom_diag, true);
        param_vars_.push_back(decoder_a_);
        param_vars_.push_back(decoder_b_);
    }
    ad::Mat lmat(1, model.num_relations);
    for (int r = 0; r < model.num_relations; ++r) lmat(0, r) = model.logits.l[static_cast<size_t>(r)];
    logits_var_ = tape.input(std::move(lmat), model.weighting == WeightingMode::relation_weighted);
}

ad::Var ModelGraph::layer_pass(int layer, ad::Var h_prev,
                               const std::vector<std::array<int, 3>>& directed,
                               const std::vector<double>& message_scale, const MultiRelGraph& g) {
    auto& lv = layer_vars_[static_cast<size_t>(layer)];
    const int n = model_.num_nodes;
    const bool identity_input = layer == 0 && model_.one_hot_features;

    ad::Var self_term =
        identity_input ? lv.self_weight : tape_.matmul(h_prev, lv.self_weight);

    // group directed messages by relation for the per-relation matmul
    std::vector<std::vector<size_t>> by_rel(static_cast<size_t>(model_.num_relations));
    for (size_t i = 0; i < directed.size(); ++i)
        by_rel[static_cast<size_t>(directed[i][2])].push_back(i);

    ad::Var agg{};
    for (int r = 0; r < model_.num_relations; ++r) {
        const auto& rows = by_rel[static_cast<size_t>(r)];
        if (rows.empty()) continue;
        std::vector<int> srcs, dsts;
        std::vector<double> scales;
        std::vector<std::pair<int, int>> weight_idx;
        srcs.reserve(rows.size());
        for (size_t i : rows) {
            srcs.push_back(directed[i][0]);
            dsts.push_back(directed[i][1]);
            scales.push_back(message_scale[i]);
            weight_idx.emplace_back(directed[i][1], r);
        }
        ad::Var w = lv.weight(tape_, r);
        ad::Var msg = identity_input ? tape_.gather_rows(w, srcs)
                                     : tape_.matmul(tape_.gather_rows(h_prev, srcs), w);
        msg = tape_.scale_rows(msg, std::move(scales));
        if (model_.weighting == WeightingMode::relation_weighted) {
            if (!relation_weight_matrix_.valid())
                relation_weight_matrix_ =
                    tape_.relation_weights(logits_var_, g.neighbor_count_matrix());
            msg = tape_.scale_rows_gather(msg, relation_weight_matrix_, std::move(weight_idx));
        }
        ad::Var part = tape_.scatter_add_rows(msg, std::move(dsts), n);
        agg = agg.valid() ? tape_.add(agg, part) : part;
    }

    ad::Var out = agg.valid() ? tape_.add(self_term, agg) : self_term;
    const bool last = layer == static_cast<int>(model_.layers.size()) - 1;
    return last ? out : tape_.relu(out);
}

ad::Var ModelGraph::encode_full(const MultiRelGraph& g) {
    if (g.num_nodes() != model_.num_nodes)
        throw std::invalid_argument("encode_full: graph size != model size");
    std::vector<std::array<int, 3>> directed;
    std::vector<double> scale;
    directed.reserve(g.edges().size() * 2);
    for (const Edge& e : g.edges()) {
        directed.push_back({e.v, e.u, e.r});  // message v -> u
        directed.push_back({e.u, e.v, e.r});
    }
    for (const auto& [src, dst, r] : directed) {
        if (model_.weighting == WeightingMode::degree_normalized)
            scale.push_back(1.0 / static_cast<double>(g.degree(dst, r)));
        else
            scale.push_back(1.0);  // c(u,r) applied via relation_weights
    }

    ad::Var h{};
    if (!model_.one_hot_features) h = tape_.input(model_.features, false);
    for (size_t l = 0; l < model_.layers.size(); ++l)
        h = layer_pass(static_cast<int>(l), h, directed, scale, g);
    return h;
}

ad::Var ModelGraph::encode_sampled(const SampledSubgraph& sg, const MultiRelGraph& g,
                                   EstimatorKind est) {
    const int num_layers = static_cast<int>(model_.layers.size());
    const int num_hops = static_cast<int>(sg.hops.size());
    const double est_scale =
        est == EstimatorKind::uniform_mc ? static_cast<double>(model_.num_relations) : 1.0;

    ad::Var h{};
    if (!model_.one_hot_features) h = tape_.input(model_.features, false);
    for (int l = 0; l < num_layers; ++l) {
        // outermost hop feeds the first layer
        const int hop_idx = num_hops - 1 - l;
        std::vector<std::array<int, 3>> directed;
        std::vector<double> scale;
        if (hop_idx >= 0) {
            const HopRecord& hop = sg.hops[static_cast<size_t>(hop_idx)];
            std::vector<int> m_in(static_cast<size_t>(model_.num_nodes), 0);
            for (const Edge& e : hop.sampled_edges) {
                ++m_in[static_cast<size_t>(e.u)];
                ++m_in[static_cast<size_t>(e.v)];
            }
            for (const Edge& e : hop.sampled_edges) {
                directed.push_back({e.v, e.u, e.r});
                directed.push_back({e.u, e.v, e.r});
            }
            for (const auto& [src, dst, r] : directed)
                scale.push_back(est_scale / static_cast<double>(m_in[static_cast<size_t>(dst)]));
        }
        h = layer_pass(l, h, directed, scale, g);
    }
    return h;
}

ad::Var ModelGraph::score_edges(ad::Var embeddings, const std::vector<Edge>& edges) {
    if (edges.empty()) throw std::invalid_argument("score_edges: no edges");
    std::vector<int> us, vs, rs;
    for (const Edge& e : edges) {
        if (e.u >= model_.num_nodes || e.v >= model_.num_nodes)
            throw std::invalid_argument("score_edges: node id out of range");
        if (e.r >= model_.num_relations)
            throw std::invalid_argument("score_edges: unknown relation id " + std::to_string(e.r));
        us.push_back(e.u);
        vs.push_back(e.v);
        rs.push_back(e.r);
    }
    ad::Var hu = tape_.gather_rows(embeddings, us);
    ad::Var hv = tape_.gather_rows(embeddings, vs);
    ad::Var raw{};
    if (model_.decoder.kind == DecoderKind::distmult) {
        ad::Var wr = tape_.gather_rows(decoder_a_, rs);
        raw = tape_.row_sum(tape_.mul(tape_.mul(hu, wr), hv));
    } else {
        ad::Var dr = tape_.gather_rows(decoder_b_, rs);
        // 0.5 * (hu^T Dr R Dr hv + hv^T Dr R Dr hu), rows as vectors
        ad::Var left = tape_.mul(tape_.matmul(tape_.mul(hu, dr), decoder_a_), dr);
        ad::Var s1 = tape_.row_sum(tape_.mul(left, hv));
        ad::Var right = tape_.mul(tape_.matmul(tape_.mul(hv, dr), decoder_a_), dr);
        ad::Var s2 = tape_.row_sum(tape_.mul(right, hu));
        raw = tape_.mul_scalar(tape_.add(s1, s2), 0.5);
    }
    return tape_.sigmoid(raw);
}

}  // namespace relsamp
