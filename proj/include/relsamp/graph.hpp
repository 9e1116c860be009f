#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "relsamp/autodiff.hpp"

namespace relsamp {

// Canonical undirected typed edge, u < v.
struct Edge {
    int u = 0;
    int r = 0;
    int v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Relation-partitioned undirected multi-relational graph. Immutable after
// construction; node and relation ids are dense.
class MultiRelGraph {
public:
    static MultiRelGraph from_edges(int num_nodes, int num_relations, std::vector<Edge> edges);
    static MultiRelGraph load_tsv(const std::string& path);

    void write_tsv(const std::string& path) const;
    void write_vocab(const std::string& node_path, const std::string& relation_path) const;

    int num_nodes() const { return num_nodes_; }
    int num_relations() const { return num_relations_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int64_t>& relation_counts() const { return relation_counts_; }

    // Sorted neighbor ids of u through relation r.
    std::span<const int> neighbors(int u, int r) const;
    // Degree of u under relation r, |N_{u,r}|.
    int degree(int u, int r) const { return static_cast<int>(neighbors(u, r).size()); }
    // Total degree over all relations.
    int total_degree(int u) const;
    // Indices into edges() of canonical edges incident to u.
    std::span<const int> incident_edges(int u) const;

    bool has_edge(int u, int r, int v) const;

    // Dense N x R matrix of |N_{u,r}| values.
    ad::Mat neighbor_count_matrix() const;

    const std::vector<std::string>& node_names() const { return node_names_; }
    const std::vector<std::string>& relation_names() const { return relation_names_; }

private:
    void build_index();
    uint64_t edge_key(int u, int r, int v) const;

    int num_nodes_ = 0;
    int num_relations_ = 0;
    std::vector<Edge> edges_;
    std::vector<int64_t> relation_counts_;
    std::vector<std::string> node_names_;
    std::vector<std::string> relation_names_;

    // per-node CSR over relations: nbr_flat_[u] holds neighbor ids sorted by
    // (relation, id); nbr_off_[u][r] .. nbr_off_[u][r+1] is the slice for r
    std::vector<std::vector<int>> nbr_flat_;
    std::vector<std::vector<int>> nbr_off_;
    std::vector<std::vector<int>> incident_;  // edge indices per node
    std::unordered_set<uint64_t> edge_set_;
};

struct EdgeSplit {
    std::vector<Edge> train;
    std::vector<Edge> valid;
    std::vector<Edge> test;
    double fractions[3] = {0.6, 0.2, 0.2};
};

EdgeSplit split_edges(const MultiRelGraph& g, const std::vector<Edge>& edges, double f_train,
                      double f_valid, double f_test, uint64_t seed);

inline EdgeSplit split_edges(const MultiRelGraph& g, double f_train, double f_valid, double f_test,
                             uint64_t seed) {
    return split_edges(g, g.edges(), f_train, f_valid, f_test, seed);
}

// Filtered uniform corruption: pick a positive, replace one endpoint with a
// uniform node, reject corruptions that exist in the graph (or are self-loops).
std::vector<Edge> sample_negatives(const MultiRelGraph& g, const std::vector<Edge>& positives,
                                   int count, uint64_t seed);

// logit[r] = -ln(relation_counts[r]); relations with no edges get 0.
std::vector<double> inverse_frequency_logits(const MultiRelGraph& g);

// Dense node features: first line "N D", then N rows of D decimals.
ad::Mat load_feature_file(const std::string& path);

}  // namespace relsamp
