#pragma once

#include "fedjam/io/config.hpp"
#include "fedjam/io/reports.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fedjam::io {

struct CommandOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    /// Input checkpoint for stage2 (autoencoder) and eval (classifier).
    std::string checkpoint;
    /// Directory holding client_<id>.ssbds files; when empty, <out>/data is
    /// used if present, otherwise datasets are synthesized in memory.
    std::string data_dir;
    /// eval: train and score the fedavg / fedprox / two-stage grid.
    bool grid = false;
    bool svg = false;
    /// When false, wall_time_ms is written as 0 so runs diff cleanly.
    bool wall_time = true;
};

// Each command writes its artifacts under options.out_dir and returns a
// one-line summary.
std::string cmd_synth(const CommandOptions& options);
std::string cmd_stage1(const CommandOptions& options);
std::string cmd_stage2(const CommandOptions& options);
std::string cmd_eval(const CommandOptions& options);
std::string cmd_pca(const CommandOptions& options);

/// Evaluates the fedavg, fedprox and two-stage rows for every grid fraction.
std::vector<ReportRow> run_grid(const ExperimentConfig& config, const std::vector<signal::ClientDataset>& data,
                                int threads, bool wall_time);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitFormat = 3;
inline constexpr int kExitNumeric = 4;

int exit_code_for(const std::exception& e) noexcept;

/// Full command line without the program name, e.g. {"synth", "--config", "c.json"}.
/// Errors are reported on `err` as a single `error code=<n> kind=<k> message="..."` line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fedjam::io
