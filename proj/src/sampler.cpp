#include "relsamp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace relsamp {

RelationLogits RelationLogits::uniform(int num_relations) {
    return {std::vector<double>(static_cast<size_t>(num_relations), 0.0), SamplerMode::uniform};
}

RelationLogits RelationLogits::inverse_frequency(const MultiRelGraph& g) {
    return {inverse_frequency_logits(g), SamplerMode::inverse_frequency};
}

RelationLogits RelationLogits::learned(int num_relations, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> l(static_cast<size_t>(num_relations));
    for (double& x : l) x = rng.next_normal();
    return {std::move(l), SamplerMode::learned};
}

void SamplePlan::validate() const {
    if (fanouts.empty() || fanouts.size() != cap_multipliers.size())
        throw std::invalid_argument("SamplePlan: need matching fanouts and caps, k >= 1");
    for (int s : fanouts)
        if (s < 1) throw std::invalid_argument("SamplePlan: fanouts must be >= 1");
    for (int c : cap_multipliers)
        if (c < 1) throw std::invalid_argument("SamplePlan: caps must be >= 1");
}

std::vector<double> hop_probabilities(const RelationLogits& logits,
                                      const std::vector<int64_t>& candidate_type_counts) {
    if (logits.l.size() != candidate_type_counts.size())
        throw std::invalid_argument("hop_probabilities: relation count mismatch");
    int64_t total = 0;
    for (int64_t c : candidate_type_counts) total += c;
    if (total < 1) throw std::invalid_argument("hop_probabilities: empty candidate set");
    double mx = logits.l.empty() ? 0.0 : logits.l[0];
    for (double x : logits.l) mx = std::max(mx, x);
    double denom = 0.0;
    std::vector<double> p(logits.l.size());
    for (size_t r = 0; r < p.size(); ++r) {
        p[r] = std::exp(logits.l[r] - mx);
        denom += static_cast<double>(candidate_type_counts[r]) * p[r];
    }
    for (double& x : p) x /= denom;
    return p;
}

std::vector<int> hop_candidates(const MultiRelGraph& g, const std::vector<int>& frontier,
                                const std::vector<Edge>& excluded_targets) {
    std::unordered_set<int> excluded;
    if (!excluded_targets.empty()) {
        // map target edges to canonical edge indices via incident lists
        for (const Edge& t : excluded_targets) {
            for (int ei : g.incident_edges(t.u)) {
                const Edge& e = g.edges()[static_cast<size_t>(ei)];
                Edge c = t;
                if (c.u > c.v) std::swap(c.u, c.v);
                if (e == c) excluded.insert(ei);
            }
        }
    }
    std::unordered_set<int> seen;
    std::vector<int> out;
    for (int u : frontier) {
        for (int ei : g.incident_edges(u)) {
            if (excluded.contains(ei)) continue;
            if (seen.insert(ei).second) out.push_back(ei);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SampledSubgraph sample_neighborhood(const MultiRelGraph& g, const std::vector<Edge>& targets,
                                    const RelationLogits& logits, const SamplePlan& plan,
                                    int batch_size, uint64_t seed) {
    if (targets.empty()) throw std::invalid_argument("sample_neighborhood: empty target batch");
    plan.validate();
    Rng rng(seed);
    SampledSubgraph sg;
    sg.target_edges = targets;

    std::vector<int> frontier;
    for (const Edge& t : targets) {
        frontier.push_back(t.u);
        frontier.push_back(t.v);
    }
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());

    const int num_rel = g.num_relations();
    for (int k = 0; k < plan.num_hops(); ++k) {
        const std::vector<int> cand = hop_candidates(g, frontier, targets);
        HopRecord hop;
        hop.candidate_type_counts.assign(static_cast<size_t>(num_rel), 0);
        hop.sampled_type_counts.assign(static_cast<size_t>(num_rel), 0);
        if (cand.empty()) {
            if (k == 0) sg.degenerate = true;
            hop.frontier_nodes = frontier;
            sg.hops.push_back(std::move(hop));
            continue;
        }
        for (int ei : cand)
            ++hop.candidate_type_counts[static_cast<size_t>(g.edges()[static_cast<size_t>(ei)].r)];
        hop.per_edge_type_prob = hop_probabilities(logits, hop.candidate_type_counts);

        const int64_t want = static_cast<int64_t>(plan.fanouts[static_cast<size_t>(k)]) *
                             static_cast<int64_t>(frontier.size());
        const int64_t cap = static_cast<int64_t>(plan.cap_multipliers[static_cast<size_t>(k)]) *
                            static_cast<int64_t>(batch_size);
        const int64_t n_k = std::min(want, cap);

        // cumulative per-edge probabilities over the candidate list
        std::vector<double> cum(cand.size());
        double acc = 0.0;
        for (size_t i = 0; i < cand.size(); ++i) {
            acc += hop.per_edge_type_prob[static_cast<size_t>(
                g.edges()[static_cast<size_t>(cand[i])].r)];
            cum[i] = acc;
        }
        const double total = acc;

        std::unordered_set<int> next(frontier.begin(), frontier.end());
        for (int64_t i = 0; i < n_k; ++i) {
            const double x = rng.next_double() * total;
            const size_t pos = static_cast<size_t>(
                std::lower_bound(cum.begin(), cum.end(), x) - cum.begin());
            const size_t idx = std::min(pos, cand.size() - 1);
            const Edge& e = g.edges()[static_cast<size_t>(cand[idx])];
            hop.sampled_edges.push_back(e);
            ++hop.sampled_type_counts[static_cast<size_t>(e.r)];
            sg.log_prob += std::log(hop.per_edge_type_prob[static_cast<size_t>(e.r)]);
            next.insert(e.u);
            next.insert(e.v);
        }
        frontier.assign(next.begin(), next.end());
        std::sort(frontier.begin(), frontier.end());
        hop.frontier_nodes = frontier;
        sg.hops.push_back(std::move(hop));
    }
    return sg;
}

std::vector<double> subgraph_log_prob_gradient(const SampledSubgraph& sg) {
    size_t num_rel = 0;
    for (const HopRecord& h : sg.hops) num_rel = std::max(num_rel, h.candidate_type_counts.size());
    std::vector<double> grad(num_rel, 0.0);
    for (const HopRecord& h : sg.hops) {
        if (h.sampled_edges.empty()) continue;
        const auto n_k = static_cast<double>(h.sampled_edges.size());
        for (size_t r = 0; r < num_rel; ++r) {
            grad[r] += static_cast<double>(h.sampled_type_counts[r]) -
                       n_k * static_cast<double>(h.candidate_type_counts[r]) *
                           h.per_edge_type_prob[r];
        }
    }
    return grad;
}

double subgraph_log_prob_at(const SampledSubgraph& sg, const std::vector<double>& logits) {
    double lp = 0.0;
    RelationLogits rl{logits, SamplerMode::learned};
    for (const HopRecord& h : sg.hops) {
        if (h.sampled_edges.empty()) continue;
        const std::vector<double> p = hop_probabilities(rl, h.candidate_type_counts);
        for (size_t r = 0; r < logits.size(); ++r)
            lp += static_cast<double>(h.sampled_type_counts[r]) * std::log(p[r]);
    }
    return lp;
}

}  // namespace relsamp
