#include "tgcn/config.hpp"

#include <charconv>
#include <sstream>

#include "tgcn/util.hpp"

namespace tgcn {

void PipelineConfig::set_seed(std::uint64_t seed) {
    train.seed = seed;
    synth.seed = seed;
}

void PipelineConfig::validate() const {
    train.validate();
    synth.validate();
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ConfigError("test_fraction must be in (0,1)");
    if (val_fraction < 0.0 || val_fraction >= 1.0)
        throw ConfigError("val_fraction must be in [0,1)");
    if (threshold_mode != "fixed" && threshold_mode != "youden")
        throw ConfigError("threshold_mode must be 'fixed' or 'youden'");
    if (knn_k < 1) throw ConfigError("knn_k must be >= 1");
    if (n_boot < 1) throw ConfigError("n_boot must be >= 1");
}

namespace {

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value '" + v + "' for key '" + key + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    long long x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("config: bad integer value '" + v + "' for key '" + key + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: bad boolean value '" + v + "' for key '" + key + "'");
}

}  // namespace

PipelineConfig parse_config(const std::string& text) {
    return parse_config(text, PipelineConfig{});
}

PipelineConfig parse_config(const std::string& text, const PipelineConfig& base) {
    PipelineConfig cfg = base;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::string body = trimmed(line);
        if (body.empty()) continue;
        std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        std::string key = trimmed(body.substr(0, eq));
        std::string val = trimmed(body.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");

        if (key == "learning_rate") cfg.train.learning_rate = parse_double(key, val);
        else if (key == "epochs") cfg.train.epochs = static_cast<int>(parse_int(key, val));
        else if (key == "gamma") cfg.train.gamma = parse_double(key, val);
        else if (key == "alpha") cfg.train.alpha = parse_double(key, val);
        else if (key == "dropout_rate") cfg.train.dropout_rate = parse_double(key, val);
        else if (key == "leaky_slope") cfg.train.leaky_slope = parse_double(key, val);
        else if (key == "seed") cfg.set_seed(static_cast<std::uint64_t>(parse_int(key, val)));
        else if (key == "grad_clip") cfg.train.grad_clip = parse_double(key, val);
        else if (key == "early_stop_patience")
            cfg.train.early_stop_patience = static_cast<int>(parse_int(key, val));
        else if (key == "miss_weight") cfg.train.miss_weight = parse_double(key, val);
        else if (key == "hidden_dim") cfg.train.hidden_dim = static_cast<int>(parse_int(key, val));
        else if (key == "symmetric_alpha") cfg.train.symmetric_alpha = parse_bool(key, val);
        else if (key == "inductive") cfg.train.inductive = parse_bool(key, val);
        else if (key == "stats_after_impute") cfg.train.stats_after_impute = parse_bool(key, val);
        else if (key == "literal_degrees") cfg.train.literal_degrees = parse_bool(key, val);
        else if (key == "n_patients") cfg.synth.n_patients = static_cast<int>(parse_int(key, val));
        else if (key == "n_numeric") cfg.synth.n_numeric = static_cast<int>(parse_int(key, val));
        else if (key == "n_binary") cfg.synth.n_binary = static_cast<int>(parse_int(key, val));
        else if (key == "n_categorical")
            cfg.synth.n_categorical = static_cast<int>(parse_int(key, val));
        else if (key == "n_categories")
            cfg.synth.n_categories = static_cast<int>(parse_int(key, val));
        else if (key == "prevalence") cfg.synth.prevalence = parse_double(key, val);
        else if (key == "signal_strength") cfg.synth.signal_strength = parse_double(key, val);
        else if (key == "missing_rate") cfg.synth.missing_rate = parse_double(key, val);
        else if (key == "noise_std") cfg.synth.noise_std = parse_double(key, val);
        else if (key == "test_fraction") cfg.test_fraction = parse_double(key, val);
        else if (key == "val_fraction") cfg.val_fraction = parse_double(key, val);
        else if (key == "threshold") cfg.threshold = parse_double(key, val);
        else if (key == "threshold_mode") cfg.threshold_mode = val;
        else if (key == "knn_k") cfg.knn_k = static_cast<int>(parse_int(key, val));
        else if (key == "n_boot") cfg.n_boot = static_cast<int>(parse_int(key, val));
        else if (key == "deterministic") cfg.deterministic = parse_bool(key, val);
        else throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    return cfg;
}

std::string write_config(const PipelineConfig& c) {
    std::string out;
    auto kv = [&out](const char* k, const std::string& v) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    };
    kv("learning_rate", format_shortest(c.train.learning_rate));
    kv("epochs", std::to_string(c.train.epochs));
    kv("gamma", format_shortest(c.train.gamma));
    kv("alpha", format_shortest(c.train.alpha));
    kv("dropout_rate", format_shortest(c.train.dropout_rate));
    kv("leaky_slope", format_shortest(c.train.leaky_slope));
    kv("seed", std::to_string(c.train.seed));
    kv("grad_clip", format_shortest(c.train.grad_clip));
    kv("early_stop_patience", std::to_string(c.train.early_stop_patience));
    kv("miss_weight", format_shortest(c.train.miss_weight));
    kv("hidden_dim", std::to_string(c.train.hidden_dim));
    kv("symmetric_alpha", c.train.symmetric_alpha ? "true" : "false");
    kv("inductive", c.train.inductive ? "true" : "false");
    kv("stats_after_impute", c.train.stats_after_impute ? "true" : "false");
    kv("literal_degrees", c.train.literal_degrees ? "true" : "false");
    kv("n_patients", std::to_string(c.synth.n_patients));
    kv("n_numeric", std::to_string(c.synth.n_numeric));
    kv("n_binary", std::to_string(c.synth.n_binary));
    kv("n_categorical", std::to_string(c.synth.n_categorical));
    kv("n_categories", std::to_string(c.synth.n_categories));
    kv("prevalence", format_shortest(c.synth.prevalence));
    kv("signal_strength", format_shortest(c.synth.signal_strength));
    kv("missing_rate", format_shortest(c.synth.missing_rate));
    kv("noise_std", format_shortest(c.synth.noise_std));
    kv("test_fraction", format_shortest(c.test_fraction));
    kv("val_fraction", format_shortest(c.val_fraction));
    kv("threshold", format_shortest(c.threshold));
    kv("threshold_mode", c.threshold_mode);
    kv("knn_k", std::to_string(c.knn_k));
    kv("n_boot", std::to_string(c.n_boot));
    kv("deterministic", c.deterministic ? "true" : "false");
    return out;
}

}  // namespace tgcn
