#pragma once

#include <string>

#include "swarm/nn/core.hpp"

namespace swarm::nn {

// Binary layout, little-endian:
//   8 bytes magic "SWARMCKP", u32 version, u64 tensor count, then per tensor:
//   u32 name length, name bytes, u64 rows, u64 cols, rows*cols f64 row-major.
// save -> load round-trips bit-exactly.
inline constexpr uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const ParamList& params);
// Every parameter in `params` must be present in the file with a matching
// shape; extra tensors in the file are ignored.
void load_checkpoint(const std::string& path, const ParamList& params);

}  // namespace swarm::nn
