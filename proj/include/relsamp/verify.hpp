#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relsamp/model.hpp"
#include "relsamp/sampler.hpp"

namespace relsamp::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    double margin = 0.0;  // measured value (error, p-value, ...) for the report
    std::string detail;
};

struct Suite {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

// Independent dense triple-loop evaluation of the R-GCN layer stack; shares
// nothing with the tape-based encoder.
ad::Mat encode_full_oracle(const MultiRelGraph& g, const Model& model);

// Every possible sampling outcome of a tiny instance, with its probability.
// Candidate construction and probabilities are recomputed locally.
struct Outcome {
    SampledSubgraph sg;
    double prob = 0.0;
};
std::vector<Outcome> enumerate_outcomes(const MultiRelGraph& g, const std::vector<Edge>& targets,
                                        const std::vector<double>& logits, const SamplePlan& plan,
                                        int batch_size);

// Upper-tail chi-square survival function (regularized incomplete gamma).
double chi_square_sf(double x, int dof);

// Finite-difference gradient checks of the full 2-layer encoder + decoders,
// including the relation logits under relation weighting.
Suite gradcheck_suite(int num_seeds = 10);

// Exhaustive-enumeration checks: total probability, estimator unbiasedness,
// REINFORCE expected gradient, analytic log-prob gradient.
Suite enumeration_suite(int num_instances = 20, uint64_t seed = 1);

// Empirical draw-frequency checks against the categorical oracle.
Suite frequency_suite(uint64_t seed = 1);

}  // namespace relsamp::verify
