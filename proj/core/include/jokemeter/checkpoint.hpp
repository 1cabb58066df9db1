#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jokemeter/tensor.hpp"

namespace jokemeter {

// Versioned text checkpoint. Layout:
//   JOKEMETER-CKPT v1
//   config <one-line JSON>
//   vocab_hash <hex>
//   param <name> <ndims> <extent...>
//   <values as C99 hexfloats, 8 per line>
//   ...
//   end
// Hexfloat serialization keeps round-trips bit-exact.
struct Checkpoint {
    std::string config_json;
    std::uint64_t vocab_hash = 0;
    std::map<std::string, Tensor> tensors;
};

void save_checkpoint(const std::string& path, const std::string& config_json,
                     std::uint64_t vocab_hash, const std::vector<const Parameter*>& params);

Checkpoint load_checkpoint(const std::string& path);

}  // namespace jokemeter
