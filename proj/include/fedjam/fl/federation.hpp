#pragma once

#include "fedjam/error.hpp"
#include "fedjam/nn/matrix.hpp"
#include "fedjam/nn/model.hpp"
#include "fedjam/nn/optim.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fedjam::fl {

enum class LossKind { mse, bce };
enum class Algorithm { fedavg, fedprox };

std::string_view to_string(Algorithm a) noexcept;

/// One client's encoded data. For mse the target is the input itself; for bce
/// the *_y vectors hold 0/1 labels.
struct ClientData {
    std::uint32_t client_id = 0;
    nn::Matrix train_x;
    std::vector<double> train_y;
    nn::Matrix valid_x;
    std::vector<double> valid_y;
    nn::Matrix test_x;
    std::vector<double> test_y;
};

struct FederationConfig {
    std::size_t n_clients = 0;
    double participation_fraction = 1.0;
    std::size_t rounds = 1;
    std::size_t local_epochs = 1;
    std::size_t batch_size = 64;
    double mu = 0.0;
    bool resample_each_round = false;
    std::uint64_t seed = 0;
    nn::OptimizerConfig optimizer{};
    /// Worker threads for the per-client fan-out. Results do not depend on it.
    int threads = 1;
    bool record_wall_time = true;
};

void validate(const FederationConfig& config);

struct RoundRecord {
    std::size_t round = 0;
    std::vector<std::uint32_t> participants;
    double global_train_loss = 0.0;
    double global_valid_loss = 0.0;
    std::optional<double> train_acc;
    std::optional<double> valid_acc;
    std::map<std::uint32_t, double> per_client_losses;
    std::int64_t wall_time_ms = 0;
};

/// Raised when a loss turns non-finite; carries the rounds completed so far.
class TrainingDiverged : public NumericError {
public:
    TrainingDiverged(const std::string& what, std::vector<RoundRecord> partial)
        : NumericError(what), history(std::move(partial))
    {}

    std::vector<RoundRecord> history;
};

/// ceil(fraction * |all|) distinct ids drawn uniformly without replacement, sorted.
std::vector<std::uint32_t> select_clients(std::span<const std::uint32_t> all, double fraction, std::uint64_t seed);

// Seed schedule shared by local training and anything that replays it.
std::uint64_t local_seed(std::uint64_t master, std::size_t round, std::uint32_t client_id) noexcept;
std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, std::size_t epoch);
std::uint64_t dropout_seed(std::uint64_t seed, std::size_t epoch, std::size_t step) noexcept;

struct LocalResult {
    std::vector<double> params;
    /// Mean training loss over the final epoch (data term only).
    double mean_loss = 0.0;
};

struct LocalTraining {
    LossKind loss = LossKind::mse;
    nn::OptimizerConfig optimizer{};
    std::size_t epochs = 1;
    std::size_t batch_size = 64;
    std::uint64_t seed = 0;
};

LocalResult local_update_fedavg(const nn::ModelState& model_template, std::span<const double> global_params,
                                const ClientData& client, const LocalTraining& training);

/// Every mini-batch gradient gets mu * (w - w_global) on trainable slices.
LocalResult local_update_fedprox(const nn::ModelState& model_template, std::span<const double> global_params,
                                 const ClientData& client, const LocalTraining& training, double mu);

/// mu * (w - w_anchor) with frozen slices zeroed.
std::vector<double> proximal_gradient(const nn::ModelState& model, std::span<const double> w,
                                      std::span<const double> w_anchor, double mu);

struct WeightedParams {
    std::uint32_t client_id = 0;
    std::span<const double> params;
    std::size_t n_samples = 0;
};

/// Size-weighted coordinate mean, summed in ascending client-id order.
std::vector<double> aggregate(std::span<const WeightedParams> weighted);

struct WeightedLoss {
    double loss = 0.0;
    std::size_t n_samples = 0;
};

double global_loss(std::span<const WeightedLoss> per_client);

struct SplitEval {
    double loss = 0.0;
    std::size_t n = 0;
    std::size_t correct = 0;
};

/// Eval-mode loss (and 0.5-threshold hit count for bce) of params on one split.
SplitEval evaluate_split(const nn::ModelState& model, const nn::Matrix& x, std::span<const double> y, LossKind loss);

struct FederationResult {
    std::vector<double> params;
    std::vector<RoundRecord> history;
};

FederationResult run_rounds(const FederationConfig& config, std::span<const ClientData> clients,
                            const nn::ModelState& model_template, LossKind loss, Algorithm algorithm);

} // namespace fedjam::fl
