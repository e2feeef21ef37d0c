#include "fedjam/fl/federation.hpp"

#include "fedjam/nn/loss.hpp"
#include "fedjam/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>

namespace fedjam::fl {

std::string_view to_string(Algorithm a) noexcept { return a == Algorithm::fedavg ? "fedavg" : "fedprox"; }

void validate(const FederationConfig& c)
{
    if (c.n_clients == 0)
        throw ConfigError("federation: n_clients must be positive");
    if (!(c.participation_fraction > 0.0 && c.participation_fraction <= 1.0))
        throw ConfigError("federation: participation_fraction must lie in (0, 1]");
    if (c.rounds == 0)
        throw ConfigError("federation: rounds must be >= 1");
    if (c.local_epochs == 0 || c.batch_size == 0)
        throw ConfigError("federation: local_epochs and batch_size must be >= 1");
    if (!(c.mu >= 0.0))
        throw ConfigError("federation: mu must be >= 0");
    if (!(c.optimizer.lr >= 0.0))
        throw ConfigError("federation: learning rate must be >= 0");
    if (c.threads < 1)
        throw ConfigError("federation: threads must be >= 1");
}

std::vector<std::uint32_t> select_clients(std::span<const std::uint32_t> all, double fraction, std::uint64_t seed)
{
    if (all.empty())
        throw DomainError("select_clients: empty client list");
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw DomainError("select_clients: fraction must lie in (0, 1]");
    std::vector<std::uint32_t> pool(all.begin(), all.end());
    std::sort(pool.begin(), pool.end());
    const auto k = std::min(pool.size(),
                            static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(pool.size()) - 1e-12)));
    // Partial Fisher-Yates over the sorted pool.
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(std::max<std::size_t>(k, 1));
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::uint64_t local_seed(std::uint64_t master, std::size_t round, std::uint32_t client_id) noexcept
{
    return derive_seed(master, {0x10ca1, round, client_id});
}

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, std::size_t epoch)
{
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, {0xe90c, epoch}));
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

std::uint64_t dropout_seed(std::uint64_t seed, std::size_t epoch, std::size_t step) noexcept
{
    return derive_seed(seed, {0xd70, epoch, step});
}

std::vector<double> proximal_gradient(const nn::ModelState& model, std::span<const double> w,
                                      std::span<const double> w_anchor, double mu)
{
    if (w.size() != model.params().size() || w_anchor.size() != w.size())
        throw ShapeError("proximal_gradient: length mismatch");
    std::vector<double> g(w.size(), 0.0);
    for (const nn::ParamSlice& s : model.slices()) {
        if (s.frozen)
            continue;
        for (std::size_t i = s.offset; i < s.offset + s.size(); ++i)
            g[i] = mu * (w[i] - w_anchor[i]);
    }
    return g;
}

namespace {

nn::Matrix loss_gradient_and_value(LossKind kind, const nn::Matrix& out, const nn::Matrix& xb,
                                   std::span<const double> yb, double& loss)
{
    if (kind == LossKind::mse) {
        nn::MseResult r = nn::mse_loss(out, xb);
        loss = r.loss;
        return std::move(r.grad);
    }
    if (out.cols != 1)
        throw ShapeError("bce: model output must have exactly one column");
    nn::BceResult r = nn::bce_loss(out.data, yb);
    loss = r.loss;
    nn::Matrix g(out.rows, 1);
    g.data = std::move(r.grad);
    return g;
}

LocalResult local_train(const nn::ModelState& model_template, std::span<const double> global_params,
                        const ClientData& client, const LocalTraining& t, double mu)
{
    const std::size_t n = client.train_x.rows;
    if (n == 0)
        throw DomainError("local update: client " + std::to_string(client.client_id) + " has an empty train split");
    if (t.loss == LossKind::bce && client.train_y.size() != n)
        throw ShapeError("local update: client " + std::to_string(client.client_id) + " label count mismatch");
    if (t.epochs == 0 || t.batch_size == 0)
        throw DomainError("local update: epochs and batch_size must be >= 1");

    nn::ModelState model = model_template;
    nn::load_params(model, global_params);
    model.set_mode(nn::Mode::train);
    nn::OptimizerState opt(t.optimizer);

    double epoch_loss = 0.0;
    std::vector<double> yb;
    for (std::size_t e = 0; e < t.epochs; ++e) {
        const std::vector<std::size_t> order = epoch_order(n, t.seed, e);
        double sum = 0.0;
        std::size_t step = 0;
        for (std::size_t start = 0; start < n; start += t.batch_size, ++step) {
            const std::size_t stop = std::min(n, start + t.batch_size);
            std::span<const std::size_t> rows(order.data() + start, stop - start);
            const nn::Matrix xb = nn::gather_rows(client.train_x, rows);
            yb.clear();
            if (t.loss == LossKind::bce)
                for (std::size_t r : rows)
                    yb.push_back(client.train_y[r]);

            const nn::ForwardResult fwd = nn::forward(model, xb, dropout_seed(t.seed, e, step));
            double loss = 0.0;
            const nn::Matrix lg = loss_gradient_and_value(t.loss, fwd.output, xb, yb, loss);
            if (!std::isfinite(loss))
                throw NumericError("client " + std::to_string(client.client_id) + ": non-finite training loss");
            std::vector<double> grad = nn::backward(model, fwd.cache, lg);
            if (mu > 0.0) {
                const std::vector<double> prox = proximal_gradient(model, model.params(), global_params, mu);
                for (std::size_t i = 0; i < grad.size(); ++i)
                    grad[i] += prox[i];
            }
            nn::optimizer_step(opt, model, grad);
            sum += loss * static_cast<double>(rows.size());
        }
        epoch_loss = sum / static_cast<double>(n);
    }
    return LocalResult{nn::params_as_vector(model), epoch_loss};
}

} // namespace

LocalResult local_update_fedavg(const nn::ModelState& model_template, std::span<const double> global_params,
                                const ClientData& client, const LocalTraining& training)
{
    return local_train(model_template, global_params, client, training, 0.0);
}

LocalResult local_update_fedprox(const nn::ModelState& model_template, std::span<const double> global_params,
                                 const ClientData& client, const LocalTraining& training, double mu)
{
    if (!(mu >= 0.0))
        throw DomainError("fedprox: mu must be >= 0");
    return local_train(model_template, global_params, client, training, mu);
}

std::vector<double> aggregate(std::span<const WeightedParams> weighted)
{
    if (weighted.empty())
        throw DomainError("aggregate: no client updates");
    std::vector<std::size_t> order(weighted.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return weighted[a].client_id < weighted[b].client_id; });

    const std::size_t len = weighted[order[0]].params.size();
    double total = 0.0;
    for (const WeightedParams& w : weighted) {
        if (w.params.size() != len)
            throw ShapeError("aggregate: parameter vectors differ in length");
        if (w.n_samples == 0)
            throw DomainError("aggregate: client " + std::to_string(w.client_id) + " reports zero samples");
        total += static_cast<double>(w.n_samples);
    }

    // Anchored form w_0 + sum_k (n_k/N)(w_k - w_0): algebraically the weighted
    // mean, but exact for identical inputs and for a single client.
    const std::span<const double> anchor = weighted[order[0]].params;
    std::vector<double> out(anchor.begin(), anchor.end());
    std::vector<double> lo = out;
    std::vector<double> hi = out;
    for (std::size_t oi = 1; oi < order.size(); ++oi) {
        const WeightedParams& w = weighted[order[oi]];
        const double alpha = static_cast<double>(w.n_samples) / total;
        for (std::size_t i = 0; i < len; ++i) {
            out[i] += alpha * (w.params[i] - anchor[i]);
            lo[i] = std::min(lo[i], w.params[i]);
            hi[i] = std::max(hi[i], w.params[i]);
        }
    }
    // Rounding must not carry the mean outside the convex hull.
    for (std::size_t i = 0; i < len; ++i)
        out[i] = std::clamp(out[i], lo[i], hi[i]);
    return out;
}

double global_loss(std::span<const WeightedLoss> per_client)
{
    if (per_client.empty())
        throw DomainError("global_loss: no clients");
    double num = 0.0;
    double den = 0.0;
    for (const WeightedLoss& l : per_client) {
        if (l.n_samples == 0)
            throw DomainError("global_loss: zero-sample client");
        num += static_cast<double>(l.n_samples) * l.loss;
        den += static_cast<double>(l.n_samples);
    }
    return num / den;
}

SplitEval evaluate_split(const nn::ModelState& model, const nn::Matrix& x, std::span<const double> y, LossKind loss)
{
    SplitEval ev;
    ev.n = x.rows;
    if (x.rows == 0)
        return ev;
    constexpr std::size_t kEvalBatch = 256;
    double sum = 0.0;
    std::vector<std::size_t> rows;
    for (std::size_t start = 0; start < x.rows; start += kEvalBatch) {
        const std::size_t stop = std::min(x.rows, start + kEvalBatch);
        rows.resize(stop - start);
        std::iota(rows.begin(), rows.end(), start);
        const nn::Matrix xb = nn::gather_rows(x, rows);
        const nn::Matrix out = nn::infer(model, xb);
        if (loss == LossKind::mse) {
            for (std::size_t i = 0; i < out.data.size(); ++i) {
                const double d = out.data[i] - xb.data[i];
                sum += d * d;
            }
        } else {
            for (std::size_t r = 0; r < out.rows; ++r) {
                const double p = std::clamp(out.data[r], nn::kBceEpsilon, 1.0 - nn::kBceEpsilon);
                const double t = y[start + r];
                sum -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
                if ((out.data[r] >= 0.5 ? 1.0 : 0.0) == t)
                    ++ev.correct;
            }
        }
    }
    const double denom = loss == LossKind::mse ? static_cast<double>(x.rows * x.cols) : static_cast<double>(x.rows);
    ev.loss = sum / denom;
    return ev;
}

namespace {

[[noreturn]] void rethrow_with_client(std::exception_ptr ep, std::uint32_t client_id,
                                      const std::vector<RoundRecord>& history)
{
    const std::string prefix = "client " + std::to_string(client_id) + ": ";
    try {
        std::rethrow_exception(ep);
    } catch (const NumericError& e) {
        throw TrainingDiverged(prefix + e.what(), history);
    } catch (const ShapeError& e) {
        throw ShapeError(prefix + e.what());
    } catch (const DomainError& e) {
        throw DomainError(prefix + e.what());
    } catch (const ContractError& e) {
        throw ContractError(prefix + e.what());
    } catch (const Error& e) {
        throw Error(prefix + e.what());
    }
}

} // namespace

FederationResult run_rounds(const FederationConfig& config, std::span<const ClientData> clients,
                            const nn::ModelState& model_template, LossKind loss, Algorithm algorithm)
{
    validate(config);
    if (clients.size() != config.n_clients)
        throw ConfigError("run_rounds: config expects " + std::to_string(config.n_clients) + " clients, got " +
                          std::to_string(clients.size()));
    std::vector<std::uint32_t> ids;
    std::map<std::uint32_t, std::size_t> by_id;
    for (std::size_t i = 0; i < clients.size(); ++i) {
        ids.push_back(clients[i].client_id);
        if (!by_id.emplace(clients[i].client_id, i).second)
            throw ConfigError("run_rounds: duplicate client id " + std::to_string(clients[i].client_id));
    }

    const std::uint64_t select_seed = derive_seed(config.seed, {0x5e1ec7});
    std::vector<std::uint32_t> participants = select_clients(ids, config.participation_fraction, select_seed);

    FederationResult result;
    result.params = nn::params_as_vector(model_template);
    nn::ModelState global = model_template;
    global.set_mode(nn::Mode::eval);

    const double mu = algorithm == Algorithm::fedprox ? config.mu : 0.0;
    const LocalTraining training_base{loss, config.optimizer, config.local_epochs, config.batch_size, 0};

    for (std::size_t round = 1; round <= config.rounds; ++round) {
        const auto t0 = std::chrono::steady_clock::now();
        if (config.resample_each_round)
            participants = select_clients(ids, config.participation_fraction, derive_seed(select_seed, {round}));

        const std::size_t p = participants.size();
        std::vector<LocalResult> local(p);
        std::vector<std::exception_ptr> errors(p);
#pragma omp parallel for num_threads(config.threads) schedule(dynamic, 1)
        for (std::int64_t si = 0; si < static_cast<std::int64_t>(p); ++si) {
            const auto i = static_cast<std::size_t>(si);
            try {
                const ClientData& c = clients[by_id.at(participants[i])];
                LocalTraining t = training_base;
                t.seed = local_seed(config.seed, round, c.client_id);
                local[i] = algorithm == Algorithm::fedprox
                               ? local_update_fedprox(model_template, result.params, c, t, mu)
                               : local_update_fedavg(model_template, result.params, c, t);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
        for (std::size_t i = 0; i < p; ++i)
            if (errors[i])
                rethrow_with_client(errors[i], participants[i], result.history);

        std::vector<WeightedParams> weighted;
        weighted.reserve(p);
        for (std::size_t i = 0; i < p; ++i)
            weighted.push_back({participants[i], local[i].params, clients[by_id.at(participants[i])].train_x.rows});
        result.params = aggregate(weighted);
        nn::load_params(global, result.params);

        // Global losses over every client, not only this round's participants.
        std::vector<SplitEval> train_eval(clients.size());
        std::vector<SplitEval> valid_eval(clients.size());
#pragma omp parallel for num_threads(config.threads) schedule(dynamic, 1)
        for (std::int64_t si = 0; si < static_cast<std::int64_t>(clients.size()); ++si) {
            const auto i = static_cast<std::size_t>(si);
            train_eval[i] = evaluate_split(global, clients[i].train_x, clients[i].train_y, loss);
            valid_eval[i] = evaluate_split(global, clients[i].valid_x, clients[i].valid_y, loss);
        }

        RoundRecord rec;
        rec.round = round;
        rec.participants = participants;
        std::vector<WeightedLoss> tl;
        std::vector<WeightedLoss> vl;
        std::size_t train_hits = 0, train_n = 0, valid_hits = 0, valid_n = 0;
        for (std::size_t i = 0; i < clients.size(); ++i) {
            if (train_eval[i].n > 0)
                tl.push_back({train_eval[i].loss, train_eval[i].n});
            if (valid_eval[i].n > 0)
                vl.push_back({valid_eval[i].loss, valid_eval[i].n});
            train_hits += train_eval[i].correct;
            train_n += train_eval[i].n;
            valid_hits += valid_eval[i].correct;
            valid_n += valid_eval[i].n;
        }
        rec.global_train_loss = global_loss(tl);
        rec.global_valid_loss = vl.empty() ? 0.0 : global_loss(vl);
        if (loss == LossKind::bce) {
            rec.train_acc = static_cast<double>(train_hits) / static_cast<double>(train_n);
            rec.valid_acc = valid_n ? static_cast<double>(valid_hits) / static_cast<double>(valid_n) : 0.0;
        }
        for (std::size_t i = 0; i < p; ++i)
            rec.per_client_losses[participants[i]] = local[i].mean_loss;
        if (config.record_wall_time)
            rec.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
                                   .count();
        if (!std::isfinite(rec.global_train_loss) || !std::isfinite(rec.global_valid_loss))
            throw TrainingDiverged("round " + std::to_string(round) + ": non-finite global loss", result.history);
        result.history.push_back(std::move(rec));
    }
    return result;
}

} // namespace fedjam::fl
