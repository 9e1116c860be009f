#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace relsamp {

// Planted-informative-relation task: one rare relation determines which
// target-relation edges exist. A target edge (u, t, v) exists iff u and v
// share at least one informative-relation neighbor; the emitted graph
// satisfies this rule exactly.
struct SyntheticSpec {
    int num_nodes = 1000;
    int num_noise_relations = 5;
    int edges_per_noise_relation = 3000;
    int informative_relation_edges = 600;
    int informative_hub_degree = 2;   // spokes per hub; each hub couples C(d,2) pairs
    int target_relation_edges = 200;  // minimum the coupling rule must admit
    uint64_t seed = 0;

    void validate() const;
};

struct SyntheticResult {
    std::string edges_tsv;       // ready-to-write TSV content
    std::string manifest_json;
    int informative_relation_id = 0;
    int target_relation_id = 0;
    int num_target_edges = 0;
};

SyntheticResult generate_synthetic(const SyntheticSpec& spec);

}  // namespace relsamp
