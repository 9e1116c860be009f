#include "relsamp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "relsamp/rng.hpp"
#include "relsamp/train.hpp"

namespace relsamp::verify {

bool Suite::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

namespace {

// materialize W_r from the layer parameters
ad::Mat layer_weight(const RGCNLayerParams& layer, int r) {
    if (!layer.use_basis) return layer.full[static_cast<size_t>(r)];
    ad::Mat w(layer.bases[0].rows, layer.bases[0].cols);
    for (size_t b = 0; b < layer.bases.size(); ++b) {
        const double c = layer.coefficients(r, static_cast<int>(b));
        for (size_t i = 0; i < w.size(); ++i) w.v[i] += c * layer.bases[b].v[i];
    }
    return w;
}

std::vector<double> softmax_edge_probs(const std::vector<double>& logits,
                                       const std::vector<int64_t>& counts) {
    double mx = logits[0];
    for (double x : logits) mx = std::max(mx, x);
    std::vector<double> p(logits.size());
    double denom = 0.0;
    for (size_t r = 0; r < p.size(); ++r) {
        p[r] = std::exp(logits[r] - mx);
        denom += static_cast<double>(counts[r]) * p[r];
    }
    for (double& x : p) x /= denom;
    return p;
}

double max_abs_diff(const ad::Mat& a, const ad::Mat& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

}  // namespace

ad::Mat encode_full_oracle(const MultiRelGraph& g, const Model& model) {
    const int n = g.num_nodes();
    ad::Mat h = model.one_hot_features ? ad::Mat::identity(n) : model.features;

    // Eq.-4-style weights when relation-weighted
    std::vector<double> expl(static_cast<size_t>(g.num_relations()));
    for (int r = 0; r < g.num_relations(); ++r)
        expl[static_cast<size_t>(r)] = std::exp(model.logits.l[static_cast<size_t>(r)]);

    for (size_t l = 0; l < model.layers.size(); ++l) {
        const RGCNLayerParams& layer = model.layers[l];
        std::vector<ad::Mat> weights;
        for (int r = 0; r < g.num_relations(); ++r) weights.push_back(layer_weight(layer, r));
        ad::Mat out(n, layer.self_weight.cols);
        for (int u = 0; u < n; ++u) {
            // self term: h_u W_0
            for (int j = 0; j < out.cols; ++j) {
                double s = 0.0;
                for (int i = 0; i < layer.self_weight.rows; ++i)
                    s += h(u, i) * layer.self_weight(i, j);
                out(u, j) = s;
            }
            double rw_denom = 0.0;
            if (model.weighting == WeightingMode::relation_weighted) {
                for (int r = 0; r < g.num_relations(); ++r)
                    rw_denom += static_cast<double>(g.degree(u, r)) * expl[static_cast<size_t>(r)];
            }
            for (int r = 0; r < g.num_relations(); ++r) {
                const auto nbrs = g.neighbors(u, r);
                if (nbrs.empty()) continue;
                const double c =
                    model.weighting == WeightingMode::degree_normalized
                        ? 1.0 / static_cast<double>(nbrs.size())
                        : expl[static_cast<size_t>(r)] / rw_denom;
                for (int v : nbrs)
                    for (int j = 0; j < out.cols; ++j) {
                        double s = 0.0;
                        for (int i = 0; i < weights[static_cast<size_t>(r)].rows; ++i)
                            s += h(v, i) * weights[static_cast<size_t>(r)](i, j);
                        out(u, j) += c * s;
                    }
            }
        }
        if (l + 1 < model.layers.size())
            for (double& x : out.v) x = x > 0.0 ? x : 0.0;
        h = std::move(out);
    }
    return h;
}

std::vector<Outcome> enumerate_outcomes(const MultiRelGraph& g, const std::vector<Edge>& targets,
                                        const std::vector<double>& logits, const SamplePlan& plan,
                                        int batch_size) {
    // local candidate logic: train-graph edges incident to the frontier,
    // excluding the batch's target edges
    auto candidates_for = [&](const std::set<int>& frontier) {
        std::vector<Edge> cand;
        for (const Edge& e : g.edges()) {
            bool is_target = false;
            for (const Edge& t : targets) {
                Edge c = t;
                if (c.u > c.v) std::swap(c.u, c.v);
                if (c == e) is_target = true;
            }
            if (is_target) continue;
            if (frontier.contains(e.u) || frontier.contains(e.v)) cand.push_back(e);
        }
        return cand;
    };

    std::set<int> frontier0;
    for (const Edge& t : targets) {
        frontier0.insert(t.u);
        frontier0.insert(t.v);
    }

    std::vector<Outcome> outcomes;
    // recursion over hops; each hop enumerates all ordered draw sequences
    std::function<void(int, std::set<int>, SampledSubgraph, double)> recurse =
        [&](int k, std::set<int> frontier, SampledSubgraph sg, double prob) {
            if (k == plan.num_hops()) {
                outcomes.push_back({std::move(sg), prob});
                return;
            }
            const std::vector<Edge> cand = candidates_for(frontier);
            HopRecord hop;
            hop.candidate_type_counts.assign(logits.size(), 0);
            hop.sampled_type_counts.assign(logits.size(), 0);
            if (cand.empty()) {
                if (k == 0) sg.degenerate = true;
                hop.frontier_nodes.assign(frontier.begin(), frontier.end());
                sg.hops.push_back(std::move(hop));
                recurse(k + 1, std::move(frontier), std::move(sg), prob);
                return;
            }
            for (const Edge& e : cand) ++hop.candidate_type_counts[static_cast<size_t>(e.r)];
            hop.per_edge_type_prob = softmax_edge_probs(logits, hop.candidate_type_counts);
            const int64_t want = static_cast<int64_t>(plan.fanouts[static_cast<size_t>(k)]) *
                                 static_cast<int64_t>(frontier.size());
            const int64_t cap = static_cast<int64_t>(plan.cap_multipliers[static_cast<size_t>(k)]) *
                                static_cast<int64_t>(batch_size);
            const int64_t n_k = std::min(want, cap);

            // ordered sequences of n_k draws
            std::function<void(int64_t, HopRecord, double)> draws =
                [&](int64_t i, HopRecord h, double p) {
                    if (i == n_k) {
                        std::set<int> next = frontier;
                        for (const Edge& e : h.sampled_edges) {
                            next.insert(e.u);
                            next.insert(e.v);
                        }
                        h.frontier_nodes.assign(next.begin(), next.end());
                        SampledSubgraph sg2 = sg;
                        for (const Edge& e : h.sampled_edges)
                            sg2.log_prob +=
                                std::log(h.per_edge_type_prob[static_cast<size_t>(e.r)]);
                        sg2.hops.push_back(std::move(h));
                        recurse(k + 1, std::move(next), std::move(sg2), p);
                        return;
                    }
                    for (const Edge& e : cand) {
                        HopRecord h2 = h;
                        h2.sampled_edges.push_back(e);
                        ++h2.sampled_type_counts[static_cast<size_t>(e.r)];
                        draws(i + 1, std::move(h2),
                              p * h.per_edge_type_prob[static_cast<size_t>(e.r)]);
                    }
                };
            draws(0, std::move(hop), prob);
        };
    SampledSubgraph base;
    base.target_edges = targets;
    recurse(0, frontier0, std::move(base), 1.0);
    return outcomes;
}

double chi_square_sf(double x, int dof) {
    // Q(a, x) with a = dof/2, x = x/2 (regularized upper incomplete gamma)
    const double a = static_cast<double>(dof) / 2.0;
    const double xx = x / 2.0;
    if (xx < 0.0 || dof < 1) throw std::invalid_argument("chi_square_sf: bad arguments");
    if (xx == 0.0) return 1.0;
    auto gamma_p_series = [](double aa, double x0) {
        double sum = 1.0 / aa, term = sum, ap = aa;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x0 / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x0 + aa * std::log(x0) - std::lgamma(aa));
    };
    auto gamma_q_cf = [](double aa, double x0) {
        // Lentz's continued fraction
        const double tiny = 1e-300;
        double b = x0 + 1.0 - aa, c = 1.0 / tiny, d = 1.0 / b, h = d;
        for (int i = 1; i <= 500; ++i) {
            const double an = -static_cast<double>(i) * (static_cast<double>(i) - aa);
            b += 2.0;
            d = an * d + b;
            if (std::abs(d) < tiny) d = tiny;
            c = b + an / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            const double del = d * c;
            h *= del;
            if (std::abs(del - 1.0) < 1e-15) break;
        }
        return std::exp(-x0 + aa * std::log(x0) - std::lgamma(aa)) * h;
    };
    if (xx < a + 1.0) return 1.0 - gamma_p_series(a, xx);
    return gamma_q_cf(a, xx);
}

namespace {

MultiRelGraph random_tiny_graph(Rng& rng, int num_nodes, int num_relations, int num_edges) {
    std::set<std::array<int, 3>> used;
    std::vector<Edge> edges;
    int guard = 0;
    while (static_cast<int>(edges.size()) < num_edges && ++guard < 10000) {
        int u = static_cast<int>(rng.next_below(static_cast<uint64_t>(num_nodes)));
        int v = static_cast<int>(rng.next_below(static_cast<uint64_t>(num_nodes)));
        int r = static_cast<int>(rng.next_below(static_cast<uint64_t>(num_relations)));
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (!used.insert({u, r, v}).second) continue;
        edges.push_back({u, r, v});
    }
    return MultiRelGraph::from_edges(num_nodes, num_relations, std::move(edges));
}

double loss_for_model(Model& model, const MultiRelGraph& g, const std::vector<Edge>& scored,
                      const ad::Mat& labels) {
    ad::Tape tape;
    ModelGraph mg(tape, model);
    ad::Var probs = mg.score_edges(mg.encode_full(g), scored);
    ad::Var loss = tape.bce_loss(probs, labels);
    return tape.value(loss)(0, 0);
}

}  // namespace

Suite gradcheck_suite(int num_seeds) {
    Suite suite;
    const double eps = 1e-5;
    const double tol = 1e-4;
    for (int s = 0; s < num_seeds; ++s) {
        Rng rng(derive_seed(1234, static_cast<uint64_t>(s)));
        MultiRelGraph g = random_tiny_graph(rng, 6, 3, 8);
        ModelConfig mc;
        mc.hidden_dim = 4;
        mc.num_layers = 2;
        mc.num_bases = (s % 2 == 0) ? 2 : 30;  // alternate basis decomposition on/off
        mc.decoder = (s % 2 == 0) ? DecoderKind::dedicom : DecoderKind::distmult;
        mc.weighting = WeightingMode::relation_weighted;  // exercises the l gradient
        Model model = Model::init(g, mc, {}, derive_seed(99, static_cast<uint64_t>(s)));

        std::vector<Edge> scored = {g.edges()[0], g.edges()[1]};
        scored.push_back({0, 0, 5});
        ad::Mat labels(static_cast<int>(scored.size()), 1);
        labels(0, 0) = 1.0;
        labels(1, 0) = 1.0;

        // analytic gradients
        ad::Tape tape;
        ModelGraph mg(tape, model);
        ad::Var probs = mg.score_edges(mg.encode_full(g), scored);
        ad::Var loss = tape.bce_loss(probs, labels);
        tape.backward(loss);

        double max_rel = 0.0;
        std::vector<ad::Mat*> params = model.tensor_parameters();
        const auto& pvars = mg.parameter_vars();
        for (size_t k = 0; k < params.size(); ++k) {
            const ad::Mat& analytic = tape.grad(pvars[k]);
            for (size_t i = 0; i < params[k]->size(); ++i) {
                const double orig = params[k]->v[i];
                params[k]->v[i] = orig + eps;
                const double lp = loss_for_model(model, g, scored, labels);
                params[k]->v[i] = orig - eps;
                const double lm = loss_for_model(model, g, scored, labels);
                params[k]->v[i] = orig;
                const double fd = (lp - lm) / (2.0 * eps);
                const double rel =
                    std::abs(analytic.v[i] - fd) / std::max({std::abs(analytic.v[i]), std::abs(fd), 1e-6});
                max_rel = std::max(max_rel, rel);
            }
        }
        // logits gradient (relation-weighted path)
        const ad::Mat& lgrad = tape.grad(mg.logits_var());
        for (int r = 0; r < model.num_relations; ++r) {
            const double orig = model.logits.l[static_cast<size_t>(r)];
            model.logits.l[static_cast<size_t>(r)] = orig + eps;
            const double lp = loss_for_model(model, g, scored, labels);
            model.logits.l[static_cast<size_t>(r)] = orig - eps;
            const double lm = loss_for_model(model, g, scored, labels);
            model.logits.l[static_cast<size_t>(r)] = orig;
            const double fd = (lp - lm) / (2.0 * eps);
            const double rel =
                std::abs(lgrad(0, r) - fd) / std::max({std::abs(lgrad(0, r)), std::abs(fd), 1e-6});
            max_rel = std::max(max_rel, rel);
        }
        suite.checks.push_back({"gradcheck/seed" + std::to_string(s), max_rel < tol, max_rel,
                                "max rel err vs central differences"});
    }
    return suite;
}

namespace {

// star instance: center 0 with `num_spokes` edges of random relations, plus a
// target edge (0, t, partner) where the partner has no other edges
struct StarInstance {
    MultiRelGraph graph;
    std::vector<Edge> targets;
    std::vector<double> logits;
};

StarInstance make_star(Rng& rng, int num_spokes, int num_relations) {
    std::vector<Edge> edges;
    const int partner = num_spokes + 1;
    for (int i = 1; i <= num_spokes; ++i) {
        int r = static_cast<int>(rng.next_below(static_cast<uint64_t>(num_relations)));
        edges.push_back({0, r, i});
    }
    const int tr = static_cast<int>(rng.next_below(static_cast<uint64_t>(num_relations)));
    edges.push_back({0, tr, partner});
    StarInstance inst;
    inst.graph = MultiRelGraph::from_edges(partner + 1, num_relations, edges);
    inst.targets = {{0, tr, partner}};
    for (int r = 0; r < num_relations; ++r) inst.logits.push_back(rng.next_normal());
    return inst;
}

}  // namespace

Suite enumeration_suite(int num_instances, uint64_t seed) {
    Suite suite;
    Rng rng(derive_seed(seed, 0x656e756dULL));

    // --- total probability over all outcomes, random instances, k = 1 and 2
    double worst_norm = 0.0;
    for (int i = 0; i < num_instances; ++i) {
        MultiRelGraph g = random_tiny_graph(rng, 5, 2, 4);
        if (g.edges().size() < 2) continue;
        std::vector<Edge> targets = {g.edges()[0]};
        std::vector<double> logits = {rng.next_normal(), rng.next_normal()};
        SamplePlan plan;
        plan.fanouts = (i % 2 == 0) ? std::vector<int>{1} : std::vector<int>{1, 1};
        plan.cap_multipliers = (i % 2 == 0) ? std::vector<int>{2} : std::vector<int>{2, 2};
        auto outcomes = enumerate_outcomes(g, targets, logits, plan, 1);
        double total = 0.0;
        for (const auto& o : outcomes) total += o.prob;
        worst_norm = std::max(worst_norm, std::abs(total - 1.0));
        // the recorded log-probabilities must agree with the enumeration
        for (const auto& o : outcomes)
            worst_norm = std::max(worst_norm, std::abs(std::exp(o.sg.log_prob) - o.prob));
    }
    suite.checks.push_back({"enumeration/total_probability", worst_norm < 1e-10, worst_norm,
                            "max |sum_g p(g) - 1| over random tiny instances"});

    // --- per-hop normalization of hop_probabilities
    double worst_hop = 0.0;
    for (int i = 0; i < num_instances; ++i) {
        std::vector<int64_t> counts = {1 + static_cast<int64_t>(rng.next_below(5)),
                                       static_cast<int64_t>(rng.next_below(5)),
                                       1 + static_cast<int64_t>(rng.next_below(5))};
        RelationLogits rl{{rng.next_normal(), rng.next_normal(), rng.next_normal()},
                          SamplerMode::learned};
        auto p = hop_probabilities(rl, counts);
        double mass = 0.0;
        for (size_t r = 0; r < p.size(); ++r) mass += static_cast<double>(counts[r]) * p[r];
        worst_hop = std::max(worst_hop, std::abs(mass - 1.0));
    }
    suite.checks.push_back({"enumeration/hop_normalization", worst_hop < 1e-12, worst_hop,
                            "max |sum_r |E_k,r| p_r,k - 1|"});

    // --- estimator unbiasedness at the star center, single layer, pre-activation
    double worst_unbias = 0.0;
    for (int i = 0; i < num_instances; ++i) {
        StarInstance inst = make_star(rng, 2 + static_cast<int>(rng.next_below(4)), 2);
        ModelConfig mc;
        mc.hidden_dim = 3;
        mc.num_layers = 1;
        mc.weighting = WeightingMode::degree_normalized;
        Model model = Model::init(inst.graph, mc, {}, derive_seed(7, static_cast<uint64_t>(i)));
        model.logits.l = inst.logits;
        model.logits.mode = SamplerMode::learned;

        SamplePlan plan;
        plan.fanouts = {1};
        plan.cap_multipliers = {2};  // n_1 = min(1*2, 2*1) = 2 draws
        auto outcomes = enumerate_outcomes(inst.graph, inst.targets, inst.logits, plan, 1);

        // expectation of the sampled aggregation at the center node
        ad::Mat expectation(1, mc.hidden_dim);
        for (const auto& o : outcomes) {
            ad::Tape tape;
            ModelGraph mg(tape, model);
            ad::Var h = mg.encode_sampled(o.sg, inst.graph, EstimatorKind::relational_mc);
            const ad::Mat& hv = tape.value(h);
            for (int j = 0; j < mc.hidden_dim; ++j) expectation(0, j) += o.prob * hv(0, j);
        }

        // closed form: W_0 row(center) + sum_e p_e * W_{r_e}[spoke_e, :]
        const RGCNLayerParams& layer = model.layers[0];
        ad::Mat closed(1, mc.hidden_dim);
        for (int j = 0; j < mc.hidden_dim; ++j) closed(0, j) = layer.self_weight(0, j);
        std::vector<int64_t> counts(2, 0);
        std::vector<Edge> cand;
        for (const Edge& e : inst.graph.edges()) {
            if (e == inst.targets[0]) continue;
            cand.push_back(e);
            ++counts[static_cast<size_t>(e.r)];
        }
        const auto pe = softmax_edge_probs(inst.logits, counts);
        for (const Edge& e : cand) {
            const ad::Mat w = layer_weight(layer, e.r);
            const int spoke = e.u == 0 ? e.v : e.u;
            for (int j = 0; j < mc.hidden_dim; ++j)
                closed(0, j) += pe[static_cast<size_t>(e.r)] * w(spoke, j);
        }
        worst_unbias = std::max(worst_unbias, max_abs_diff(expectation, closed));
    }
    suite.checks.push_back({"enumeration/estimator_unbiasedness", worst_unbias < 1e-10,
                            worst_unbias,
                            "max |E_g[sampled aggregation] - closed-form expectation|"});

    // --- REINFORCE: E[grad_l] vs finite differences of E_g[L(g)]
    double worst_reinforce = 0.0;
    double worst_logprob_grad = 0.0;
    for (int i = 0; i < 8; ++i) {
        StarInstance inst = make_star(rng, 3, 2);
        ModelConfig mc;
        mc.hidden_dim = 3;
        mc.num_layers = 1;
        mc.decoder = DecoderKind::distmult;
        Model model = Model::init(inst.graph, mc, {}, derive_seed(11, static_cast<uint64_t>(i)));
        model.logits.l = inst.logits;
        model.logits.mode = SamplerMode::learned;

        SamplePlan plan;
        plan.fanouts = {1};
        plan.cap_multipliers = {1};
        auto outcomes = enumerate_outcomes(inst.graph, inst.targets, inst.logits, plan, 1);

        ad::Mat labels(1, 1);
        labels(0, 0) = 1.0;
        auto loss_of = [&](const SampledSubgraph& sg) {
            ad::Tape tape;
            ModelGraph mg(tape, model);
            ad::Var probs = mg.score_edges(
                mg.encode_sampled(sg, inst.graph, EstimatorKind::relational_mc), inst.targets);
            return tape.value(tape.bce_loss(probs, labels))(0, 0);
        };

        std::vector<double> expected_grad(2, 0.0);
        for (const auto& o : outcomes) {
            ReinforceStep step = make_reinforce_step(loss_of(o.sg), 0.0, o.sg);
            for (size_t r = 0; r < 2; ++r) expected_grad[r] += o.prob * step.grad_l[r];
        }
        const double fd_eps = 1e-4;
        for (size_t r = 0; r < 2; ++r) {
            double ep = 0.0, em = 0.0;
            for (const auto& o : outcomes) {
                std::vector<double> lp = inst.logits, lm = inst.logits;
                lp[r] += fd_eps;
                lm[r] -= fd_eps;
                ep += std::exp(subgraph_log_prob_at(o.sg, lp)) * loss_of(o.sg);
                em += std::exp(subgraph_log_prob_at(o.sg, lm)) * loss_of(o.sg);
            }
            const double fd = (ep - em) / (2.0 * fd_eps);
            const double rel = std::abs(expected_grad[r] - fd) /
                               std::max({std::abs(expected_grad[r]), std::abs(fd), 1e-6});
            worst_reinforce = std::max(worst_reinforce, rel);
        }

        // analytic d log p / d l vs finite differences, on each outcome
        for (const auto& o : outcomes) {
            auto analytic = subgraph_log_prob_gradient(o.sg);
            for (size_t r = 0; r < 2; ++r) {
                std::vector<double> lp = inst.logits, lm = inst.logits;
                lp[r] += 1e-5;
                lm[r] -= 1e-5;
                const double fd = (subgraph_log_prob_at(o.sg, lp) -
                                   subgraph_log_prob_at(o.sg, lm)) / 2e-5;
                const double rel = std::abs(analytic[r] - fd) /
                                   std::max({std::abs(analytic[r]), std::abs(fd), 1e-4});
                worst_logprob_grad = std::max(worst_logprob_grad, rel);
            }
        }
    }
    suite.checks.push_back({"enumeration/reinforce_expected_gradient", worst_reinforce < 1e-3,
                            worst_reinforce, "rel err of E[grad_l] vs FD of E[L]"});
    suite.checks.push_back({"enumeration/log_prob_gradient", worst_logprob_grad < 1e-6,
                            worst_logprob_grad, "rel err of analytic dlogp/dl vs FD"});
    return suite;
}

Suite frequency_suite(uint64_t seed) {
    Suite suite;

    // star with 5 spokes over 2 relations; uniform mode must be uniform per edge
    Rng rng(derive_seed(seed, 0x66726571ULL));
    std::vector<Edge> edges = {{0, 0, 1}, {0, 0, 2}, {0, 1, 3}, {0, 1, 4}, {0, 0, 5}, {0, 1, 6}};
    MultiRelGraph g = MultiRelGraph::from_edges(7, 2, edges);
    std::vector<Edge> targets = {{0, 1, 6}};

    SamplePlan plan;
    plan.fanouts = {50000};
    plan.cap_multipliers = {1};
    const int draws = 100000;  // n_1 = min(50000*2, 1*100000)

    {
        RelationLogits uni = RelationLogits::uniform(2);
        SampledSubgraph sg = sample_neighborhood(g, targets, uni, plan, draws, seed);
        std::map<Edge, int64_t> freq;
        for (const Edge& e : sg.hops[0].sampled_edges) ++freq[e];
        const int num_cand = 5;
        const double expected = static_cast<double>(draws) / num_cand;
        double chi2 = 0.0;
        for (const Edge& e : edges) {
            if (e == targets[0]) continue;
            const double obs = static_cast<double>(freq[e]);
            chi2 += (obs - expected) * (obs - expected) / expected;
        }
        const double p = chi_square_sf(chi2, num_cand - 1);
        suite.checks.push_back({"frequency/uniform_chi_square", p > 0.01, p,
                                "chi-square p-value vs 1/|candidates| at 1e5 draws"});
    }

    {
        RelationLogits learned{{5.0, -5.0}, SamplerMode::learned};
        SamplePlan plan2;
        plan2.fanouts = {5000};
        plan2.cap_multipliers = {1};
        SampledSubgraph sg = sample_neighborhood(g, targets, learned, plan2, 10000, seed + 1);
        int64_t favored = 0;
        for (const Edge& e : sg.hops[0].sampled_edges)
            if (e.r == 0) ++favored;
        const double frac =
            static_cast<double>(favored) / static_cast<double>(sg.hops[0].sampled_edges.size());
        suite.checks.push_back({"frequency/learned_favored_type", frac >= 0.99, frac,
                                "fraction of draws on the high-logit type"});
    }
    return suite;
}

}  // namespace relsamp::verify
