#include "relsamp/config.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "relsamp/io_util.hpp"

namespace relsamp {

std::string to_string(SamplerMode m) {
    switch (m) {
        case SamplerMode::uniform: return "uniform";
        case SamplerMode::inverse_frequency: return "inverse-frequency";
        case SamplerMode::learned: return "learned";
    }
    return "?";
}

std::string to_string(WeightingMode m) {
    return m == WeightingMode::degree_normalized ? "degree-normalized" : "relation-weighted";
}

std::string to_string(DecoderKind k) { return k == DecoderKind::distmult ? "distmult" : "dedicom"; }

std::string to_string(EstimatorKind k) {
    return k == EstimatorKind::relational_mc ? "relational-mc" : "uniform-mc";
}

std::string to_string(ReinforceBaseline b) {
    return b == ReinforceBaseline::off ? "off" : "moving-average";
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw std::invalid_argument("config: key '" + key + "': expected integer, got '" + v + "'");
    }
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw std::invalid_argument("config: key '" + key + "': expected number, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "on") return true;
    if (v == "0" || v == "false" || v == "off") return false;
    throw std::invalid_argument("config: key '" + key + "': expected boolean, got '" + v + "'");
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        uint64_t x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw std::invalid_argument("config: key '" + key + "': expected unsigned integer, got '" +
                                    v + "'");
    }
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_int(key, trim(tok)));
    if (out.empty()) throw std::invalid_argument("config: key '" + key + "': empty list");
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
    return parse_text(read_file(path));
}

RunConfig RunConfig::parse_text(const std::string& text) {
    RunConfig cfg;
    bool logit_lr_set = false;
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "edges_path") cfg.edges_path = val;
        else if (key == "features_path") cfg.features_path = val;
        else if (key == "run_dir") cfg.run_dir = val;
        else if (key == "batch_size") cfg.train.batch_size = parse_int(key, val);
        else if (key == "learning_rate") {
            cfg.train.learning_rate = parse_double(key, val);
            if (!logit_lr_set) cfg.train.logit_learning_rate = cfg.train.learning_rate;
        } else if (key == "logit_learning_rate") {
            cfg.train.logit_learning_rate = parse_double(key, val);
            logit_lr_set = true;
        }
        else if (key == "adam_beta1") cfg.train.adam_beta1 = parse_double(key, val);
        else if (key == "adam_beta2") cfg.train.adam_beta2 = parse_double(key, val);
        else if (key == "max_epochs") cfg.train.max_epochs = parse_int(key, val);
        else if (key == "patience") cfg.train.patience = parse_int(key, val);
        else if (key == "sampler") {
            if (val == "uniform") cfg.train.sampler_mode = SamplerMode::uniform;
            else if (val == "inverse-frequency") cfg.train.sampler_mode = SamplerMode::inverse_frequency;
            else if (val == "learned") cfg.train.sampler_mode = SamplerMode::learned;
            else throw std::invalid_argument("config: sampler must be uniform|inverse-frequency|learned");
        } else if (key == "weighting") {
            if (val == "degree-normalized") cfg.train.weighting = WeightingMode::degree_normalized;
            else if (val == "relation-weighted") cfg.train.weighting = WeightingMode::relation_weighted;
            else throw std::invalid_argument("config: weighting must be degree-normalized|relation-weighted");
        } else if (key == "decoder") {
            if (val == "distmult") cfg.train.decoder = DecoderKind::distmult;
            else if (val == "dedicom") cfg.train.decoder = DecoderKind::dedicom;
            else throw std::invalid_argument("config: decoder must be distmult|dedicom");
        } else if (key == "estimator") {
            if (val == "relational-mc") cfg.train.estimator = EstimatorKind::relational_mc;
            else if (val == "uniform-mc") cfg.train.estimator = EstimatorKind::uniform_mc;
            else throw std::invalid_argument("config: estimator must be relational-mc|uniform-mc");
        } else if (key == "reinforce_baseline") {
            if (val == "off") cfg.train.baseline = ReinforceBaseline::off;
            else if (val == "moving-average") cfg.train.baseline = ReinforceBaseline::moving_average;
            else throw std::invalid_argument("config: reinforce_baseline must be off|moving-average");
        }
        else if (key == "baseline_decay") cfg.train.baseline_decay = parse_double(key, val);
        else if (key == "seed") cfg.train.seed = parse_u64(key, val);
        else if (key == "hidden_dim") cfg.train.hidden_dim = parse_int(key, val);
        else if (key == "num_bases") cfg.train.num_bases = parse_int(key, val);
        else if (key == "num_layers") cfg.train.num_layers = parse_int(key, val);
        else if (key == "fanouts") cfg.train.plan.fanouts = parse_int_list(key, val);
        else if (key == "cap_multipliers") cfg.train.plan.cap_multipliers = parse_int_list(key, val);
        else if (key == "full_message_passing") cfg.train.full_message_passing = parse_bool(key, val);
        else if (key == "full_graph_eval") cfg.train.full_graph_eval = parse_bool(key, val);
        else if (key == "target_relation") cfg.train.target_relation = parse_int(key, val);
        else if (key == "exclude_target_messages")
            cfg.train.exclude_target_messages = parse_bool(key, val);
        else if (key == "split_train") cfg.train.split_train = parse_double(key, val);
        else if (key == "split_valid") cfg.train.split_valid = parse_double(key, val);
        else if (key == "split_test") cfg.train.split_test = parse_double(key, val);
        else if (key == "synth_num_nodes") cfg.synth.num_nodes = parse_int(key, val);
        else if (key == "synth_num_noise_relations") cfg.synth.num_noise_relations = parse_int(key, val);
        else if (key == "synth_edges_per_noise_relation") cfg.synth.edges_per_noise_relation = parse_int(key, val);
        else if (key == "synth_informative_edges") cfg.synth.informative_relation_edges = parse_int(key, val);
        else if (key == "synth_target_edges") cfg.synth.target_relation_edges = parse_int(key, val);
        else if (key == "synth_informative_hub_degree")
            cfg.synth.informative_hub_degree = parse_int(key, val);
        else if (key == "bench_repetitions") cfg.bench_repetitions = parse_int(key, val);
        else throw std::invalid_argument("config: unknown key '" + key + "' at line " +
                                         std::to_string(lineno));
    }
    cfg.synth.seed = cfg.train.seed;
    return cfg;
}

std::string RunConfig::resolved() const {
    std::map<std::string, std::string> kv{
        {"edges_path", edges_path},
        {"features_path", features_path},
        {"run_dir", run_dir},
        {"batch_size", std::to_string(train.batch_size)},
        {"learning_rate", fmt(train.learning_rate)},
        {"logit_learning_rate", fmt(train.logit_learning_rate)},
        {"adam_beta1", fmt(train.adam_beta1)},
        {"adam_beta2", fmt(train.adam_beta2)},
        {"max_epochs", std::to_string(train.max_epochs)},
        {"patience", std::to_string(train.patience)},
        {"sampler", to_string(train.sampler_mode)},
        {"weighting", to_string(train.weighting)},
        {"decoder", to_string(train.decoder)},
        {"estimator", to_string(train.estimator)},
        {"reinforce_baseline", to_string(train.baseline)},
        {"baseline_decay", fmt(train.baseline_decay)},
        {"seed", std::to_string(train.seed)},
        {"hidden_dim", std::to_string(train.hidden_dim)},
        {"num_bases", std::to_string(train.num_bases)},
        {"num_layers", std::to_string(train.num_layers)},
        {"fanouts", join_ints(train.plan.fanouts)},
        {"cap_multipliers", join_ints(train.plan.cap_multipliers)},
        {"full_message_passing", train.full_message_passing ? "1" : "0"},
        {"full_graph_eval", train.full_graph_eval ? "1" : "0"},
        {"target_relation", std::to_string(train.target_relation)},
        {"exclude_target_messages", train.exclude_target_messages ? "1" : "0"},
        {"split_train", fmt(train.split_train)},
        {"split_valid", fmt(train.split_valid)},
        {"split_test", fmt(train.split_test)},
        {"synth_num_nodes", std::to_string(synth.num_nodes)},
        {"synth_num_noise_relations", std::to_string(synth.num_noise_relations)},
        {"synth_edges_per_noise_relation", std::to_string(synth.edges_per_noise_relation)},
        {"synth_informative_edges", std::to_string(synth.informative_relation_edges)},
        {"synth_informative_hub_degree", std::to_string(synth.informative_hub_degree)},
        {"synth_target_edges", std::to_string(synth.target_relation_edges)},
        {"bench_repetitions", std::to_string(bench_repetitions)},
    };
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

}  // namespace relsamp
