#pragma once

#include <string>

#include "relsamp/synthetic.hpp"
#include "relsamp/train.hpp"

namespace relsamp {

// Flat key = value run configuration ('#' comments, unknown keys rejected).
struct RunConfig {
    std::string edges_path;
    std::string features_path;  // empty: one-hot features
    std::string run_dir = "run";

    TrainConfig train;
    SyntheticSpec synth;

    int bench_repetitions = 5;

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text);

    // Every key with its effective value, one per line, sorted.
    std::string resolved() const;
};

std::string to_string(SamplerMode m);
std::string to_string(WeightingMode m);
std::string to_string(DecoderKind k);
std::string to_string(EstimatorKind k);
std::string to_string(ReinforceBaseline b);

}  // namespace relsamp
