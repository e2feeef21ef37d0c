#pragma once

#include "fedjam/fl/federation.hpp"
#include "fedjam/nn/model.hpp"

#include <cstddef>
#include <span>

namespace fedjam::pipeline {

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const noexcept { return tp + fp + fn + tn; }
    friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Metrics with an undefined (zero-denominator) value reported as 0 and flagged.
struct EvalReport {
    Confusion counts{};
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    double threshold = 0.5;
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f1_undefined = false;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Prediction is positive when prob >= threshold.
Confusion confusion(std::span<const double> probs, std::span<const double> labels, double threshold);

EvalReport report_from_counts(const Confusion& c, double threshold);

/// Pooled (micro-averaged) metrics over every client's test split.
EvalReport evaluate(const nn::ModelState& classifier, std::span<const fl::ClientData> clients, double threshold = 0.5);

} // namespace fedjam::pipeline
