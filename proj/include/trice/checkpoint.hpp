#pragma once

#include <cstdint>
#include <string>

#include "trice/network.hpp"

namespace trice {

/// Serialized model state plus training provenance.
struct Checkpoint {
    int format_version = 1;
    std::string model;  // topology preset name: "mlp" or "lenet"
    int num_classes = 10;
    NetworkWeights weights;
    // provenance
    std::string method;
    std::uint64_t seed = 0;
    double sigma_t = 0.0;  // noise scale chosen by training (0 when fixed)
    double sigma_d = 0.0;  // device variation the model was trained against
};

/// Rebuild the topology a checkpoint was trained for.
Network checkpoint_network(const Checkpoint& cp);

void save_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace trice
