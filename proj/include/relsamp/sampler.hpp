#pragma once

#include <cstdint>
#include <vector>

#include "relsamp/graph.hpp"
#include "relsamp/rng.hpp"

namespace relsamp {

enum class SamplerMode { uniform, inverse_frequency, learned };

// Per-relation sampling logits l_r. Uniform mode keeps them at zero,
// inverse-frequency freezes them at -ln(count_r), learned mode initializes
// them standard-normal and updates them only through the REINFORCE step.
struct RelationLogits {
    std::vector<double> l;
    SamplerMode mode = SamplerMode::uniform;

    static RelationLogits uniform(int num_relations);
    static RelationLogits inverse_frequency(const MultiRelGraph& g);
    static RelationLogits learned(int num_relations, uint64_t seed);
};

struct SamplePlan {
    std::vector<int> fanouts{7, 3};          // s_1..s_k
    std::vector<int> cap_multipliers{7, 3};  // c_1..c_k, applied to batch size

    int num_hops() const { return static_cast<int>(fanouts.size()); }
    void validate() const;
};

struct HopRecord {
    std::vector<int64_t> candidate_type_counts;  // |E_{k,r}| per relation
    std::vector<double> per_edge_type_prob;      // p_{r,k} at sampling time
    std::vector<Edge> sampled_edges;             // multiset, draw order kept
    std::vector<int64_t> sampled_type_counts;
    std::vector<int> frontier_nodes;             // N_k, sorted
};

struct SampledSubgraph {
    std::vector<HopRecord> hops;
    double log_prob = 0.0;  // log p_l(g) = sum_k sum_i log p_{r_i,k}
    std::vector<Edge> target_edges;
    bool degenerate = false;  // no hop-1 candidates
};

// Per-edge sampling probability for each relation type in one hop:
// p_{r,k} = exp(l_r) / sum_r' |E_{k,r'}| exp(l_r'), max-logit subtracted.
std::vector<double> hop_probabilities(const RelationLogits& logits,
                                      const std::vector<int64_t>& candidate_type_counts);

// Candidate edges for the next hop: indices into g.edges() of training-graph
// edges incident to the frontier, excluding the batch's own target edges.
std::vector<int> hop_candidates(const MultiRelGraph& g, const std::vector<int>& frontier,
                                const std::vector<Edge>& excluded_targets);

// Fixed-size k-hop neighborhood around the target batch, sampled i.i.d. with
// replacement per hop; n_k = min(s_k * |N_{k-1}|, c_k * batch_size).
SampledSubgraph sample_neighborhood(const MultiRelGraph& g, const std::vector<Edge>& targets,
                                    const RelationLogits& logits, const SamplePlan& plan,
                                    int batch_size, uint64_t seed);

// Analytic d log p_l(g) / d l_r, using the probabilities recorded at sampling
// time: per hop, (count of sampled type-r edges) - n_k * |E_{k,r}| * p_{r,k}.
std::vector<double> subgraph_log_prob_gradient(const SampledSubgraph& sg);

// log p_l(g) recomputed from the hop records at arbitrary logits (used by the
// REINFORCE finite-difference checks).
double subgraph_log_prob_at(const SampledSubgraph& sg, const std::vector<double>& logits);

}  // namespace relsamp
