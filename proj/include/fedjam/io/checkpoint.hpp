#pragma once

#include "fedjam/nn/model.hpp"

#include <span>
#include <string>
#include <string_view>

namespace fedjam::io {

inline constexpr std::string_view kCheckpointMagic = "FJCK";
inline constexpr std::uint16_t kCheckpointVersion = 1;

/// Parameters are narrowed to float32; layer rates likewise.
std::string encode_checkpoint(const nn::ModelState& model);
nn::ModelState decode_checkpoint(std::string_view bytes);

void write_checkpoint(const std::string& path, const nn::ModelState& model);
nn::ModelState read_checkpoint(const std::string& path);

/// Layer-by-layer equality with rates compared at checkpoint (float32) precision.
bool same_architecture(std::span<const nn::LayerSpec> a, std::span<const nn::LayerSpec> b, bool compare_frozen = true);

} // namespace fedjam::io
