#pragma once

#include "qrobust/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace qrobust {

/// Current checkpoint schema version.
inline constexpr int kModelSchemaVersion = 1;

struct ModelCheckpoint {
    CircuitLayout layout;
    ModelParams params;
};

/**
 * Checkpoint document:
 *
 *   {
 *     "version": 1,
 *     "num_qubits": 4,
 *     "sequence_length": 12,
 *     "observable": "ZZZZ",
 *     "ops": [ {"type": "encoding", "qubit": 0, "axis": "Z", "feature_index": 0,
 *               "weight_slot": 0, "bias_slot": 0},
 *              {"type": "cnot", "control": 0, "target": 1}, ... ],
 *     "weights": [...], "biases": [...],
 *     "encoding_trainable": true
 *   }
 */
std::string checkpoint_to_json(const CircuitLayout &layout, const ModelParams &params);

/// Parses a checkpoint document. Also accepts a RunRecord document, in which
/// case the embedded "model" checkpoint is used.
ModelCheckpoint checkpoint_from_json(std::string_view text);

void save_checkpoint(const std::filesystem::path &path, const CircuitLayout &layout,
                     const ModelParams &params);
ModelCheckpoint load_checkpoint(const std::filesystem::path &path);

} // namespace qrobust
