#pragma once

#include "fedjam/fl/federation.hpp"
#include "fedjam/signal/dataset.hpp"

#include <span>
#include <vector>

namespace fedjam::pipeline {

/// Dataset-wide affine standardization fitted on the train split only.
struct Standardizer {
    double mean = 0.0;
    double stddev = 1.0;
};

Standardizer fit_standardizer(const signal::ClientDataset& ds);

/// Interleaves (I, Q) into 2*q_len reals per row and applies the standardizer.
nn::Matrix encode_rows(const signal::ClientDataset& ds, std::span<const std::size_t> indices, const Standardizer& s);

fl::ClientData encode_client(const signal::ClientDataset& ds);
std::vector<fl::ClientData> encode_clients(std::span<const signal::ClientDataset> datasets);

} // namespace fedjam::pipeline
