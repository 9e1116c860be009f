#include "relsamp/synthetic.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "relsamp/rng.hpp"

namespace relsamp {

void SyntheticSpec::validate() const {
    if (num_nodes < 3) throw std::invalid_argument("SyntheticSpec: need at least 3 nodes");
    if (num_noise_relations < 0 || informative_relation_edges < 1 || target_relation_edges < 1)
        throw std::invalid_argument("SyntheticSpec: counts out of range");
    if (num_noise_relations > 0 && edges_per_noise_relation < 1)
        throw std::invalid_argument("SyntheticSpec: noise relations need at least one edge");
    if (num_noise_relations > 0 && informative_relation_edges >= edges_per_noise_relation)
        throw std::invalid_argument(
            "SyntheticSpec: informative relation must be rarer than each noise relation");
    if (informative_hub_degree < 2)
        throw std::invalid_argument("SyntheticSpec: informative_hub_degree must be >= 2");
}

namespace {

std::set<std::pair<int, int>> random_pairs(int count, const std::vector<int>& pool, Rng& rng) {
    std::set<std::pair<int, int>> pairs;
    const long long n = static_cast<long long>(pool.size());
    const long long max_pairs = n * (n - 1) / 2;
    if (count > max_pairs) throw std::invalid_argument("gen-synthetic: more edges than node pairs");
    while (static_cast<int>(pairs.size()) < count) {
        int u = pool[rng.next_below(pool.size())];
        int v = pool[rng.next_below(pool.size())];
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        pairs.insert({u, v});
    }
    return pairs;
}

}  // namespace

SyntheticResult generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(derive_seed(spec.seed, 0x73796e7468ULL));

    // Informative edges form hub-and-spoke stars: dedicated hub nodes with
    // exactly `informative_hub_degree` spokes each, so a hub of degree d
    // couples its C(d,2) spoke pairs and every target edge traces back to a
    // shared hub. Hubs never appear as spokes; leftover edge budget below one
    // full star is dropped.
    const int deg = spec.informative_hub_degree;
    const int num_hubs = spec.informative_relation_edges / deg;
    if (num_hubs < 1)
        throw std::invalid_argument("gen-synthetic: informative edge budget below one hub star");
    if (num_hubs + deg > spec.num_nodes)
        throw std::invalid_argument("gen-synthetic: too many informative hubs for the node count");
    std::vector<int> perm(static_cast<size_t>(spec.num_nodes));
    for (int i = 0; i < spec.num_nodes; ++i) perm[static_cast<size_t>(i)] = i;
    rng.shuffle(perm);
    // first num_hubs of the permutation are hubs, the rest is the spoke pool
    const std::vector<int> spoke_pool(perm.begin() + num_hubs, perm.end());
    std::set<std::pair<int, int>> informative;
    auto ordered = [](int a, int b) { return std::pair<int, int>(std::min(a, b), std::max(a, b)); };
    for (int h = 0; h < num_hubs; ++h) {
        const int w = perm[static_cast<size_t>(h)];
        std::set<int> spokes;
        while (static_cast<int>(spokes.size()) < deg)
            spokes.insert(spoke_pool[rng.next_below(spoke_pool.size())]);
        for (int u : spokes) informative.insert(ordered(w, u));
    }

    // informative-relation neighborhoods
    std::vector<std::vector<int>> inf_nbrs(static_cast<size_t>(spec.num_nodes));
    for (const auto& [u, v] : informative) {
        inf_nbrs[static_cast<size_t>(u)].push_back(v);
        inf_nbrs[static_cast<size_t>(v)].push_back(u);
    }

    // every pair sharing an informative neighbor gets a target edge (exact rule)
    std::set<std::pair<int, int>> targets;
    for (int w = 0; w < spec.num_nodes; ++w) {
        const auto& nb = inf_nbrs[static_cast<size_t>(w)];
        for (size_t i = 0; i < nb.size(); ++i)
            for (size_t j = i + 1; j < nb.size(); ++j) {
                int a = nb[i], b = nb[j];
                if (a == b) continue;
                if (a > b) std::swap(a, b);
                targets.insert({a, b});
            }
    }
    if (static_cast<int>(targets.size()) < spec.target_relation_edges)
        throw std::runtime_error(
            "gen-synthetic: infeasible spec: the coupling rule admits only " +
            std::to_string(targets.size()) + " target edges, " +
            std::to_string(spec.target_relation_edges) + " demanded");

    // Noise edges avoid the hubs: hubs participate in the informative relation
    // only, so a hub's embedding carries nothing but its identity and the
    // identities of its spokes.
    std::vector<std::set<std::pair<int, int>>> noise;
    for (int k = 0; k < spec.num_noise_relations; ++k)
        noise.push_back(random_pairs(spec.edges_per_noise_relation, spoke_pool, rng));

    // relation ids follow file order: informative first, noise, target last
    SyntheticResult res;
    res.informative_relation_id = 0;
    res.target_relation_id = spec.num_noise_relations + 1;
    res.num_target_edges = static_cast<int>(targets.size());

    std::string tsv = "# planted-informative-relation synthetic graph\n";
    auto emit = [&tsv](const std::set<std::pair<int, int>>& pairs, const std::string& rel) {
        for (const auto& [u, v] : pairs)
            tsv += "n" + std::to_string(u) + "\t" + rel + "\tn" + std::to_string(v) + "\n";
    };
    emit(informative, "informative");
    for (int k = 0; k < spec.num_noise_relations; ++k) emit(noise[static_cast<size_t>(k)],
                                                            "noise" + std::to_string(k));
    emit(targets, "target");
    res.edges_tsv = std::move(tsv);

    res.manifest_json = std::string("{\n") +
                        "  \"informative_relation_id\": " +
                        std::to_string(res.informative_relation_id) + ",\n" +
                        "  \"informative_relation\": \"informative\",\n" +
                        "  \"target_relation_id\": " + std::to_string(res.target_relation_id) +
                        ",\n" +
                        "  \"target_relation\": \"target\",\n" +
                        "  \"num_nodes\": " + std::to_string(spec.num_nodes) + ",\n" +
                        "  \"num_noise_relations\": " + std::to_string(spec.num_noise_relations) +
                        ",\n" +
                        "  \"num_informative_edges\": " + std::to_string(informative.size()) +
                        ",\n" +
                        "  \"num_target_edges\": " + std::to_string(res.num_target_edges) + ",\n" +
                        "  \"seed\": " + std::to_string(spec.seed) + "\n}\n";
    return res;
}

}  // namespace relsamp
