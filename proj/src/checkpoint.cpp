#include "tgcn/checkpoint.hpp"

#include <cstring>

#include <json.hpp>

#include "tgcn/util.hpp"

namespace tgcn {

namespace {

constexpr char kMagic[8] = {'T', 'G', 'C', 'N', 'C', 'K', 'P', 'T'};

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint64_t get_u64(const std::string& in, std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
    return v;
}

void put_f64(std::string& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    put_u64(out, bits);
}

double get_f64(const std::string& in, std::size_t at) {
    std::uint64_t bits = get_u64(in, at);
    double d;
    std::memcpy(&d, &bits, sizeof d);
    return d;
}

std::string train_config_json(const TrainConfig& c) {
    std::string out = "{";
    out += "\"learning_rate\":" + format_g17(c.learning_rate);
    out += ",\"epochs\":" + std::to_string(c.epochs);
    out += ",\"gamma\":" + format_g17(c.gamma);
    out += ",\"alpha\":" + format_g17(c.alpha);
    out += ",\"dropout_rate\":" + format_g17(c.dropout_rate);
    out += ",\"leaky_slope\":" + format_g17(c.leaky_slope);
    out += ",\"seed\":" + std::to_string(c.seed);
    out += ",\"grad_clip\":" + format_g17(c.grad_clip);
    out += ",\"early_stop_patience\":" + std::to_string(c.early_stop_patience);
    out += ",\"miss_weight\":" + format_g17(c.miss_weight);
    out += ",\"hidden_dim\":" + std::to_string(c.hidden_dim);
    out += ",\"symmetric_alpha\":" + std::string(c.symmetric_alpha ? "true" : "false");
    out += ",\"inductive\":" + std::string(c.inductive ? "true" : "false");
    out += ",\"stats_after_impute\":" + std::string(c.stats_after_impute ? "true" : "false");
    out += ",\"literal_degrees\":" + std::string(c.literal_degrees ? "true" : "false");
    out += "}";
    return out;
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig c;
    c.learning_rate = j.at("learning_rate").get<double>();
    c.epochs = j.at("epochs").get<int>();
    c.gamma = j.at("gamma").get<double>();
    c.alpha = j.at("alpha").get<double>();
    c.dropout_rate = j.at("dropout_rate").get<double>();
    c.leaky_slope = j.at("leaky_slope").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.grad_clip = j.at("grad_clip").get<double>();
    c.early_stop_patience = j.at("early_stop_patience").get<int>();
    c.miss_weight = j.at("miss_weight").get<double>();
    c.hidden_dim = j.at("hidden_dim").get<int>();
    c.symmetric_alpha = j.at("symmetric_alpha").get<bool>();
    c.inductive = j.at("inductive").get<bool>();
    c.stats_after_impute = j.at("stats_after_impute").get<bool>();
    c.literal_degrees = j.at("literal_degrees").get<bool>();
    return c;
}

}  // namespace

std::string checkpoint_bytes(const Checkpoint& ckpt) {
    const ModelDims& dims = ckpt.params.dims;
    std::string header = "{\"format_version\":" + std::to_string(ckpt.format_version);
    header += ",\"created_at\":" + std::to_string(ckpt.created_at);
    header += ",\"schema_fingerprint\":\"" + json_escape(ckpt.schema_fingerprint) + "\"";
    header += ",\"n_feature_nodes\":" + std::to_string(ckpt.params.Z.rows);
    header += ",\"dims\":{\"d\":" + std::to_string(dims.d);
    header += ",\"feat_embed\":" + std::to_string(dims.feat_embed);
    header += ",\"cat_embed\":" + std::to_string(dims.cat_embed);
    header += ",\"mlp_hidden\":" + std::to_string(dims.mlp_hidden);
    header += ",\"cat_cardinalities\":[";
    for (std::size_t k = 0; k < dims.cat_cardinalities.size(); ++k) {
        if (k) header += ",";
        header += std::to_string(dims.cat_cardinalities[k]);
    }
    header += "]}";
    header += ",\"train_config\":" + train_config_json(ckpt.config);
    header += ",\"preprocess\":" + write_stats_json(ckpt.stats);
    header += ",\"tensors\":[";
    bool first = true;
    ckpt.params.for_each_tensor([&](const char* name, const Matrix& m) {
        if (!first) header += ",";
        first = false;
        header += "{\"name\":\"" + std::string(name) + "\",\"rows\":" + std::to_string(m.rows) +
                  ",\"cols\":" + std::to_string(m.cols) + "}";
    });
    header += "]}";

    std::string out(kMagic, sizeof kMagic);
    put_u64(out, header.size());
    out += header;
    ckpt.params.for_each_tensor([&](const char*, const Matrix& m) {
        for (double v : m.a) put_f64(out, v);
    });
    return out;
}

Checkpoint checkpoint_from_bytes(const std::string& bytes) {
    if (bytes.size() < sizeof kMagic + 8 ||
        std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
        throw DataError("checkpoint: not a checkpoint file");
    std::uint64_t header_size = get_u64(bytes, sizeof kMagic);
    std::size_t header_at = sizeof kMagic + 8;
    if (header_at + header_size > bytes.size())
        throw DataError("checkpoint: truncated header");

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes.substr(header_at, header_size));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("checkpoint: invalid header JSON: ") + e.what());
    }

    Checkpoint ckpt;
    ckpt.format_version = doc.at("format_version").get<int>();
    if (ckpt.format_version != 1)
        throw DataError("checkpoint: unsupported format version " +
                        std::to_string(ckpt.format_version));
    ckpt.created_at = doc.at("created_at").get<std::int64_t>();
    ckpt.schema_fingerprint = doc.at("schema_fingerprint").get<std::string>();
    ckpt.config = train_config_from_json(doc.at("train_config"));
    ckpt.stats = parse_stats_json(doc.at("preprocess").dump());

    const auto& jd = doc.at("dims");
    ModelDims dims;
    dims.d = jd.at("d").get<int>();
    dims.feat_embed = jd.at("feat_embed").get<int>();
    dims.cat_embed = jd.at("cat_embed").get<int>();
    dims.mlp_hidden = jd.at("mlp_hidden").get<int>();
    dims.cat_cardinalities = jd.at("cat_cardinalities").get<std::vector<int>>();
    int n_feature_nodes = doc.at("n_feature_nodes").get<int>();
    ckpt.params = ModelParams::zeros_like(dims, n_feature_nodes);

    const auto& jt = doc.at("tensors");
    std::size_t at = header_at + header_size;
    std::size_t ti = 0;
    ckpt.params.for_each_tensor([&](const char* name, Matrix& m) {
        if (ti >= jt.size()) throw DataError("checkpoint: tensor directory too short");
        const auto& entry = jt[ti++];
        if (entry.at("name").get<std::string>() != name ||
            entry.at("rows").get<int>() != m.rows || entry.at("cols").get<int>() != m.cols)
            throw DataError(std::string("checkpoint: tensor directory mismatch at ") + name);
        if (at + m.a.size() * 8 > bytes.size())
            throw DataError(std::string("checkpoint: truncated tensor data at ") + name);
        for (double& v : m.a) {
            v = get_f64(bytes, at);
            at += 8;
        }
    });
    if (ti != jt.size()) throw DataError("checkpoint: tensor directory too long");
    if (at != bytes.size()) throw DataError("checkpoint: trailing bytes after tensor data");
    return ckpt;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    write_file(path, checkpoint_bytes(ckpt));
}

Checkpoint load_checkpoint(const std::string& path) {
    return checkpoint_from_bytes(read_file(path));
}

}  // namespace tgcn
