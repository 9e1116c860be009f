#include "relsamp/graph.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "relsamp/io_util.hpp"
#include "relsamp/rng.hpp"

namespace relsamp {

uint64_t MultiRelGraph::edge_key(int u, int r, int v) const {
    return (static_cast<uint64_t>(u) * static_cast<uint64_t>(num_relations_) +
            static_cast<uint64_t>(r)) *
               static_cast<uint64_t>(num_nodes_) +
           static_cast<uint64_t>(v);
}

MultiRelGraph MultiRelGraph::from_edges(int num_nodes, int num_relations, std::vector<Edge> edges) {
    if (num_nodes < 1 || num_relations < 1)
        throw std::invalid_argument("graph: need at least one node and one relation");
    MultiRelGraph g;
    g.num_nodes_ = num_nodes;
    g.num_relations_ = num_relations;
    for (auto& e : edges) {
        if (e.u == e.v) throw std::invalid_argument("graph: self-loop rejected");
        if (e.u < 0 || e.v < 0 || e.u >= num_nodes || e.v >= num_nodes || e.r < 0 ||
            e.r >= num_relations)
            throw std::invalid_argument("graph: edge id out of range");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.edges_ = std::move(edges);
    g.build_index();
    return g;
}

void MultiRelGraph::build_index() {
    relation_counts_.assign(static_cast<size_t>(num_relations_), 0);
    incident_.assign(static_cast<size_t>(num_nodes_), {});
    edge_set_.clear();
    edge_set_.reserve(edges_.size() * 2);
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(num_nodes_));
    for (size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        ++relation_counts_[static_cast<size_t>(e.r)];
        adj[static_cast<size_t>(e.u)].emplace_back(e.r, e.v);
        adj[static_cast<size_t>(e.v)].emplace_back(e.r, e.u);
        incident_[static_cast<size_t>(e.u)].push_back(static_cast<int>(i));
        incident_[static_cast<size_t>(e.v)].push_back(static_cast<int>(i));
        edge_set_.insert(edge_key(e.u, e.r, e.v));
    }
    nbr_flat_.assign(static_cast<size_t>(num_nodes_), {});
    nbr_off_.assign(static_cast<size_t>(num_nodes_), {});
    for (int u = 0; u < num_nodes_; ++u) {
        auto& a = adj[static_cast<size_t>(u)];
        std::sort(a.begin(), a.end());
        auto& flat = nbr_flat_[static_cast<size_t>(u)];
        auto& off = nbr_off_[static_cast<size_t>(u)];
        off.assign(static_cast<size_t>(num_relations_) + 1, 0);
        flat.reserve(a.size());
        for (const auto& [r, v] : a) {
            flat.push_back(v);
            ++off[static_cast<size_t>(r) + 1];
        }
        for (size_t r = 1; r < off.size(); ++r) off[r] += off[r - 1];
    }
    if (node_names_.empty())
        for (int i = 0; i < num_nodes_; ++i) node_names_.push_back("n" + std::to_string(i));
    if (relation_names_.empty())
        for (int i = 0; i < num_relations_; ++i) relation_names_.push_back(std::to_string(i));
}

std::span<const int> MultiRelGraph::neighbors(int u, int r) const {
    const auto& flat = nbr_flat_.at(static_cast<size_t>(u));
    const auto& off = nbr_off_.at(static_cast<size_t>(u));
    const int lo = off[static_cast<size_t>(r)];
    const int hi = off[static_cast<size_t>(r) + 1];
    return {flat.data() + lo, static_cast<size_t>(hi - lo)};
}

int MultiRelGraph::total_degree(int u) const {
    return static_cast<int>(nbr_flat_.at(static_cast<size_t>(u)).size());
}

std::span<const int> MultiRelGraph::incident_edges(int u) const {
    const auto& v = incident_.at(static_cast<size_t>(u));
    return {v.data(), v.size()};
}

bool MultiRelGraph::has_edge(int u, int r, int v) const {
    if (u == v) return false;
    if (u > v) std::swap(u, v);
    return edge_set_.contains(edge_key(u, r, v));
}

ad::Mat MultiRelGraph::neighbor_count_matrix() const {
    ad::Mat m(num_nodes_, num_relations_);
    for (int u = 0; u < num_nodes_; ++u)
        for (int r = 0; r < num_relations_; ++r) m(u, r) = static_cast<double>(degree(u, r));
    return m;
}

namespace {

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

MultiRelGraph MultiRelGraph::load_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_tsv: cannot open " + path);
    std::unordered_map<std::string, int> node_ids, rel_ids;
    std::vector<std::string> node_names, rel_names;
    std::vector<std::array<int, 3>> raw;  // u, r, v with interned ids
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_comment_or_blank(line)) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, '\t')) fields.push_back(tok);
        if (fields.size() != 3)
            throw std::runtime_error("load_tsv: line " + std::to_string(lineno) +
                                     ": expected 3 tab-separated fields, got " +
                                     std::to_string(fields.size()));
        auto intern = [](std::unordered_map<std::string, int>& m, std::vector<std::string>& names,
                         const std::string& t) {
            auto [it, inserted] = m.emplace(t, static_cast<int>(names.size()));
            if (inserted) names.push_back(t);
            return it->second;
        };
        const int u = intern(node_ids, node_names, fields[0]);
        const int r = intern(rel_ids, rel_names, fields[1]);
        const int v = intern(node_ids, node_names, fields[2]);
        if (u == v)
            throw std::runtime_error("load_tsv: line " + std::to_string(lineno) +
                                     ": self-loop rejected");
        raw.push_back({u, r, v});
    }
    if (node_names.empty()) throw std::runtime_error("load_tsv: no edges in " + path);
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (const auto& [u, r, v] : raw) edges.push_back({std::min(u, v), r, std::max(u, v)});
    MultiRelGraph g = from_edges(static_cast<int>(node_names.size()),
                                 static_cast<int>(rel_names.size()), std::move(edges));
    g.node_names_ = std::move(node_names);
    g.relation_names_ = std::move(rel_names);
    return g;
}

void MultiRelGraph::write_tsv(const std::string& path) const {
    std::string out;
    for (const Edge& e : edges_) {
        out += node_names_[static_cast<size_t>(e.u)];
        out += '\t';
        out += relation_names_[static_cast<size_t>(e.r)];
        out += '\t';
        out += node_names_[static_cast<size_t>(e.v)];
        out += '\n';
    }
    write_file_atomic(path, out);
}

void MultiRelGraph::write_vocab(const std::string& node_path,
                                const std::string& relation_path) const {
    std::string nodes, rels;
    for (size_t i = 0; i < node_names_.size(); ++i)
        nodes += node_names_[i] + "\t" + std::to_string(i) + "\n";
    for (size_t i = 0; i < relation_names_.size(); ++i)
        rels += relation_names_[i] + "\t" + std::to_string(i) + "\n";
    write_file_atomic(node_path, nodes);
    write_file_atomic(relation_path, rels);
}

EdgeSplit split_edges(const MultiRelGraph& g, const std::vector<Edge>& edges, double f_train,
                      double f_valid, double f_test, uint64_t seed) {
    (void)g;
    if (f_train <= 0 || f_valid <= 0 || f_test <= 0)
        throw std::invalid_argument("split_edges: fractions must be positive");
    if (std::abs(f_train + f_valid + f_test - 1.0) > 1e-9)
        throw std::invalid_argument("split_edges: fractions must sum to 1");
    std::vector<Edge> perm = edges;
    Rng rng(seed);
    rng.shuffle(perm);
    const size_t n = perm.size();
    const auto n_valid = static_cast<size_t>(std::floor(f_valid * static_cast<double>(n)));
    const auto n_test = static_cast<size_t>(std::floor(f_test * static_cast<double>(n)));
    const size_t n_train = n - n_valid - n_test;  // remainder goes to train
    EdgeSplit s;
    s.fractions[0] = f_train;
    s.fractions[1] = f_valid;
    s.fractions[2] = f_test;
    s.train.assign(perm.begin(), perm.begin() + static_cast<long>(n_train));
    s.valid.assign(perm.begin() + static_cast<long>(n_train),
                   perm.begin() + static_cast<long>(n_train + n_valid));
    s.test.assign(perm.begin() + static_cast<long>(n_train + n_valid), perm.end());
    if (n >= 3 && (s.train.empty() || s.valid.empty() || s.test.empty()))
        throw std::runtime_error("split_edges: a split with positive fraction came out empty");
    return s;
}

std::vector<Edge> sample_negatives(const MultiRelGraph& g, const std::vector<Edge>& positives,
                                   int count, uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample_negatives: count must be >= 1");
    if (positives.empty()) throw std::invalid_argument("sample_negatives: no positives");
    Rng rng(seed);
    std::vector<Edge> out;
    out.reserve(static_cast<size_t>(count));
    const long long budget = 100LL * count;
    long long attempts = 0;
    int last_rel = positives.front().r;
    while (static_cast<int>(out.size()) < count) {
        if (attempts >= budget)
            throw std::runtime_error(
                "sample_negatives: exceeded resampling budget; relation " +
                std::to_string(last_rel) + " is too dense to corrupt");
        ++attempts;
        const Edge& p = positives[rng.next_below(positives.size())];
        last_rel = p.r;
        const bool corrupt_head = rng.next_below(2) == 0;
        const int cand = static_cast<int>(rng.next_below(static_cast<uint64_t>(g.num_nodes())));
        int u = corrupt_head ? cand : p.u;
        int v = corrupt_head ? p.v : cand;
        if (u == v) continue;
        if (g.has_edge(u, p.r, v)) continue;
        if (u > v) std::swap(u, v);
        out.push_back({u, p.r, v});
    }
    return out;
}

std::vector<double> inverse_frequency_logits(const MultiRelGraph& g) {
    std::vector<double> logits(static_cast<size_t>(g.num_relations()), 0.0);
    for (int r = 0; r < g.num_relations(); ++r) {
        const int64_t c = g.relation_counts()[static_cast<size_t>(r)];
        if (c >= 1) logits[static_cast<size_t>(r)] = -std::log(static_cast<double>(c));
    }
    return logits;
}

ad::Mat load_feature_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_feature_file: cannot open " + path);
    int n = 0, d = 0;
    if (!(in >> n >> d) || n < 1 || d < 1)
        throw std::runtime_error("load_feature_file: bad header in " + path);
    ad::Mat m(n, d);
    for (size_t i = 0; i < m.size(); ++i)
        if (!(in >> m.v[i]))
            throw std::runtime_error("load_feature_file: truncated matrix in " + path);
    return m;
}

}  // namespace relsamp
