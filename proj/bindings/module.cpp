#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "relsamp/config.hpp"
#include "relsamp/graph.hpp"
#include "relsamp/metrics.hpp"
#include "relsamp/sampler.hpp"
#include "relsamp/synthetic.hpp"
#include "relsamp/train.hpp"

namespace py = pybind11;
using namespace relsamp;

namespace {

RelationLogits make_logits(const MultiRelGraph& g, const std::string& mode, uint64_t seed) {
    if (mode == "uniform") return RelationLogits::uniform(g.num_relations());
    if (mode == "inverse-frequency") return RelationLogits::inverse_frequency(g);
    if (mode == "learned") return RelationLogits::learned(g.num_relations(), seed);
    throw std::invalid_argument("sampler mode must be uniform|inverse-frequency|learned");
}

std::vector<Edge> edges_from_tuples(const std::vector<std::tuple<int, int, int>>& tuples) {
    std::vector<Edge> edges;
    edges.reserve(tuples.size());
    for (const auto& [u, r, v] : tuples) edges.push_back({std::min(u, v), r, std::max(u, v)});
    return edges;
}

py::list edges_to_tuples(const std::vector<Edge>& edges) {
    py::list out;
    for (const Edge& e : edges) out.append(py::make_tuple(e.u, e.r, e.v));
    return out;
}

// One high-level entry point: configure with the same key = value vocabulary
// as the CLI config files, train, and return the summary.
py::dict train_on_graph(const MultiRelGraph& g, const py::dict& options) {
    std::string text;
    for (const auto& item : options) {
        const std::string value = py::isinstance<py::bool_>(item.second)
                                      ? (py::cast<bool>(item.second) ? "1" : "0")
                                      : py::cast<std::string>(py::str(item.second));
        text += py::cast<std::string>(py::str(item.first)) + " = " + value + "\n";
    }
    RunConfig cfg = RunConfig::parse_text(text);
    cfg.train.validate();

    Trainer trainer(g, cfg.train);
    FitResult fit = trainer.fit();
    const std::vector<double> final_logits = trainer.model().logits.l;

    trainer.set_model(fit.best_model);
    MetricsReport test =
        trainer.evaluate(trainer.split().test, trainer.test_negatives(), cfg.train.full_graph_eval);

    py::dict out;
    out["best_epoch"] = fit.best_epoch;
    out["best_val_pr_auc"] = fit.best_val_pr_auc;
    out["test_pr_auc"] = test.pr_auc;
    out["test_roc_auc"] = test.roc_auc;
    out["logits"] = final_logits;
    py::list history;
    for (const HistoryRow& r : fit.history) {
        py::dict row;
        row["epoch"] = r.epoch;
        row["train_loss"] = r.train_loss;
        row["val_pr_auc"] = r.val_pr_auc;
        row["val_roc_auc"] = r.val_roc_auc;
        history.append(row);
    }
    out["history"] = history;
    return out;
}

}  // namespace

PYBIND11_MODULE(_relsamp, m) {
    m.doc() = "Relation-dependent neighborhood sampling for multi-relational GCNs";

    py::class_<MultiRelGraph>(m, "Graph")
        .def_static("load_tsv", &MultiRelGraph::load_tsv, py::arg("path"))
        .def_static(
            "from_edges",
            [](int num_nodes, int num_relations,
               const std::vector<std::tuple<int, int, int>>& edges) {
                return MultiRelGraph::from_edges(num_nodes, num_relations,
                                                 edges_from_tuples(edges));
            },
            py::arg("num_nodes"), py::arg("num_relations"), py::arg("edges"))
        .def_property_readonly("num_nodes", &MultiRelGraph::num_nodes)
        .def_property_readonly("num_relations", &MultiRelGraph::num_relations)
        .def_property_readonly("relation_counts", &MultiRelGraph::relation_counts)
        .def_property_readonly("relation_names", &MultiRelGraph::relation_names)
        .def_property_readonly("node_names", &MultiRelGraph::node_names)
        .def("edges", [](const MultiRelGraph& g) { return edges_to_tuples(g.edges()); })
        .def("neighbors",
             [](const MultiRelGraph& g, int u, int r) {
                 auto span = g.neighbors(u, r);
                 return std::vector<int>(span.begin(), span.end());
             },
             py::arg("u"), py::arg("r"))
        .def("degree", &MultiRelGraph::degree, py::arg("u"), py::arg("r"))
        .def("has_edge", &MultiRelGraph::has_edge, py::arg("u"), py::arg("r"), py::arg("v"))
        .def("__repr__", [](const MultiRelGraph& g) {
            return "Graph(nodes=" + std::to_string(g.num_nodes()) +
                   ", relations=" + std::to_string(g.num_relations()) +
                   ", edges=" + std::to_string(g.edges().size()) + ")";
        });

    m.def("generate_synthetic",
          [](int num_nodes, int num_noise_relations, int edges_per_noise_relation,
             int informative_edges, int hub_degree, int target_edges, uint64_t seed) {
              SyntheticSpec spec;
              spec.num_nodes = num_nodes;
              spec.num_noise_relations = num_noise_relations;
              spec.edges_per_noise_relation = edges_per_noise_relation;
              spec.informative_relation_edges = informative_edges;
              spec.informative_hub_degree = hub_degree;
              spec.target_relation_edges = target_edges;
              spec.seed = seed;
              SyntheticResult res = generate_synthetic(spec);
              py::dict out;
              out["edges_tsv"] = res.edges_tsv;
              out["manifest_json"] = res.manifest_json;
              out["informative_relation_id"] = res.informative_relation_id;
              out["target_relation_id"] = res.target_relation_id;
              out["num_target_edges"] = res.num_target_edges;
              return out;
          },
          py::arg("num_nodes") = 1000, py::arg("num_noise_relations") = 5,
          py::arg("edges_per_noise_relation") = 3000, py::arg("informative_edges") = 600,
          py::arg("hub_degree") = 2, py::arg("target_edges") = 200, py::arg("seed") = 0);

    m.def("inverse_frequency_logits", &inverse_frequency_logits, py::arg("graph"));

    m.def("hop_probabilities",
          [](const std::vector<double>& logits, const std::vector<int64_t>& counts) {
              RelationLogits l = RelationLogits::uniform(static_cast<int>(logits.size()));
              l.l = logits;
              return hop_probabilities(l, counts);
          },
          py::arg("logits"), py::arg("candidate_type_counts"));

    m.def("sample_neighborhood",
          [](const MultiRelGraph& g, const std::vector<std::tuple<int, int, int>>& targets,
             const std::string& mode, const std::vector<double>& logits,
             const std::vector<int>& fanouts, const std::vector<int>& cap_multipliers,
             int batch_size, uint64_t seed) {
              RelationLogits l = make_logits(g, mode, seed);
              if (!logits.empty()) {
                  if (logits.size() != static_cast<size_t>(g.num_relations()))
                      throw std::invalid_argument("logits length must equal num_relations");
                  l.l = logits;
              }
              SamplePlan plan;
              if (!fanouts.empty()) plan.fanouts = fanouts;
              if (!cap_multipliers.empty()) plan.cap_multipliers = cap_multipliers;
              plan.validate();
              SampledSubgraph sg =
                  sample_neighborhood(g, edges_from_tuples(targets), l, plan, batch_size, seed);
              py::dict out;
              out["log_prob"] = sg.log_prob;
              out["degenerate"] = sg.degenerate;
              py::list hops;
              for (const HopRecord& hop : sg.hops) {
                  py::dict h;
                  h["candidate_type_counts"] = hop.candidate_type_counts;
                  h["per_edge_type_prob"] = hop.per_edge_type_prob;
                  h["sampled_type_counts"] = hop.sampled_type_counts;
                  h["sampled_edges"] = edges_to_tuples(hop.sampled_edges);
                  hops.append(h);
              }
              out["hops"] = hops;
              return out;
          },
          py::arg("graph"), py::arg("targets"), py::arg("mode") = "uniform",
          py::arg("logits") = std::vector<double>{}, py::arg("fanouts") = std::vector<int>{},
          py::arg("cap_multipliers") = std::vector<int>{}, py::arg("batch_size") = 1,
          py::arg("seed") = 0);

    m.def("pr_auc", &pr_auc, py::arg("scores"), py::arg("labels"));
    m.def("roc_auc", &roc_auc, py::arg("scores"), py::arg("labels"));

    m.def("train", &train_on_graph, py::arg("graph"), py::arg("options"),
          "Train a link-prediction model; options use the CLI config key vocabulary.");
}
