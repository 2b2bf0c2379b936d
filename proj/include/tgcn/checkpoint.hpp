#pragma once

#include <cstdint>
#include <string>

#include "tgcn/model.hpp"
#include "tgcn/preprocess.hpp"
#include "tgcn/train.hpp"

namespace tgcn {

// Self-describing model container: a JSON header (version, schema fingerprint,
// dims, preprocessing stats, training config, tensor directory) followed by
// raw little-endian float64 tensor blocks in directory order.
struct Checkpoint {
    int format_version = 1;
    std::int64_t created_at = 0;  // unix seconds; stays 0 in deterministic mode
    std::string schema_fingerprint;
    PreprocessStats stats;
    TrainConfig config;
    ModelParams params;
};

std::string checkpoint_bytes(const Checkpoint& ckpt);
Checkpoint checkpoint_from_bytes(const std::string& bytes);

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace tgcn
