#pragma once

#include "fedjam/signal/dataset.hpp"

#include <string>
#include <string_view>

namespace fedjam::io {

inline constexpr std::string_view kDatasetMagic = "SSBD";
inline constexpr std::uint16_t kDatasetVersion = 1;

std::string encode_dataset(const signal::ClientDataset& ds);
/// Throws FormatError on bad magic/version, truncation or inconsistent counts.
signal::ClientDataset decode_dataset(std::string_view bytes);

void write_dataset(const std::string& path, const signal::ClientDataset& ds);
signal::ClientDataset read_dataset(const std::string& path);

} // namespace fedjam::io
