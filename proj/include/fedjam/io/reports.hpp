#pragma once

#include "fedjam/fl/federation.hpp"
#include "fedjam/pipeline/metrics.hpp"
#include "fedjam/pipeline/pca.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fedjam::io {

inline constexpr std::string_view kHistoryHeader =
    "round,stage,algorithm,n_participants,train_loss,valid_loss,train_acc,valid_acc,wall_time_ms";
inline constexpr std::string_view kReportHeader = "algorithm,n_clients,precision,recall,f1,accuracy";

struct HistoryRow {
    std::size_t round = 0;
    int stage = 1;
    std::string algorithm;
    std::size_t n_participants = 0;
    double train_loss = 0.0;
    double valid_loss = 0.0;
    std::optional<double> train_acc;
    std::optional<double> valid_acc;
    std::int64_t wall_time_ms = 0;

    friend bool operator==(const HistoryRow&, const HistoryRow&) = default;
};

std::vector<HistoryRow> history_rows(std::span<const fl::RoundRecord> history, int stage, std::string_view algorithm);

/// Reals are written with 17 significant digits so a read-back is exact.
std::string format_history(std::span<const HistoryRow> rows);
std::vector<HistoryRow> parse_history(std::string_view csv);

struct ReportRow {
    std::string algorithm;
    std::size_t n_clients = 0;
    pipeline::EvalReport report{};
};

std::string format_report(std::span<const ReportRow> rows);
/// Restores algorithm, n_clients and the four metrics; counts are not stored.
std::vector<ReportRow> parse_report(std::string_view csv);

/// `client_id,pc1,pc2` rows.
std::string format_pca(const pipeline::PcaDiagnostic& diag);
/// Single line: `explained_variance_ratio,<r1>,<r2>`.
std::string format_pca_variance(const pipeline::PcaDiagnostic& diag);

struct Series {
    std::string name;
    std::vector<double> values;
};

/// Minimal standalone SVG line chart of one or more series against round index.
std::string line_chart_svg(std::string_view title, std::span<const Series> series);

} // namespace fedjam::io
