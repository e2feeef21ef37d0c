#include "fixtures.hpp"

#include "fedjam/error.hpp"
#include "fedjam/fl/federation.hpp"
#include "fedjam/nn/loss.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace fedjam;
using namespace fedjam::fl;

namespace {

nn::ModelState small_classifier(std::size_t dim, std::uint64_t seed)
{
    return nn::ModelState::initialized({nn::LayerSpec::dense(dim, 8), nn::LayerSpec::relu(8),
                                        nn::LayerSpec::dropout(8, 0.25), nn::LayerSpec::dense(8, 1),
                                        nn::LayerSpec::sigmoid(1)},
                                       seed);
}

nn::ModelState small_autoencoder(std::size_t dim, std::uint64_t seed)
{
    return nn::ModelState::initialized({nn::LayerSpec::dense(dim, 6), nn::LayerSpec::relu(6),
                                        nn::LayerSpec::dropout(6, 0.2), nn::LayerSpec::dense(6, dim)},
                                       seed);
}

FederationConfig config(std::size_t n_clients, std::size_t rounds)
{
    FederationConfig c;
    c.n_clients = n_clients;
    c.rounds = rounds;
    c.batch_size = 16;
    c.seed = 99;
    c.optimizer = {nn::OptimizerKind::sgd, 0.05};
    c.record_wall_time = false;
    return c;
}

void expect_same_history(const std::vector<RoundRecord>& a, const std::vector<RoundRecord>& b)
{
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        EXPECT_EQ(a[r].participants, b[r].participants);
        EXPECT_EQ(a[r].global_train_loss, b[r].global_train_loss) << r;
        EXPECT_EQ(a[r].global_valid_loss, b[r].global_valid_loss) << r;
        EXPECT_EQ(a[r].train_acc, b[r].train_acc);
        EXPECT_EQ(a[r].valid_acc, b[r].valid_acc);
        EXPECT_EQ(a[r].per_client_losses, b[r].per_client_losses);
    }
}

} // namespace

TEST(SelectClients, CeilCountSortedDistinctDeterministic)
{
    const std::vector<std::uint32_t> ids = {9, 3, 5, 1, 7, 2, 8};
    for (double f : {0.1, 0.3, 0.5, 0.99, 1.0}) {
        const auto s = select_clients(ids, f, 4);
        EXPECT_EQ(s.size(), static_cast<std::size_t>(std::ceil(f * 7)));
        EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
        EXPECT_EQ(std::set<std::uint32_t>(s.begin(), s.end()).size(), s.size());
        for (auto id : s)
            EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end());
        EXPECT_EQ(s, select_clients(ids, f, 4));
    }
    EXPECT_EQ(select_clients(ids, 1.0, 1), (std::vector<std::uint32_t>{1, 2, 3, 5, 7, 8, 9}));
    EXPECT_THROW(select_clients(ids, 0.0, 1), DomainError);
}

TEST(SelectClients, RoughlyUniform)
{
    const std::vector<std::uint32_t> ids = {0, 1, 2, 3, 4, 5};
    std::vector<int> hits(6);
    for (std::uint64_t seed = 0; seed < 3000; ++seed)
        for (auto id : select_clients(ids, 0.5, seed))
            ++hits[id];
    for (int h : hits)
        EXPECT_NEAR(h / 3000.0, 0.5, 0.04);
}

TEST(Aggregate, WeightedMeanHandCase)
{
    const std::vector<double> a = {1.0, 2.0}, b = {4.0, -2.0};
    const std::vector<WeightedParams> w = {{2, b, 3}, {1, a, 1}};
    const auto out = aggregate(w);
    EXPECT_DOUBLE_EQ(out[0], (1.0 * 1 + 4.0 * 3) / 4);
    EXPECT_DOUBLE_EQ(out[1], (2.0 * 1 - 2.0 * 3) / 4);
    EXPECT_THROW(aggregate(std::vector<WeightedParams>{}), DomainError);
    const std::vector<double> short_v = {1.0};
    EXPECT_THROW(aggregate(std::vector<WeightedParams>{{1, a, 1}, {2, short_v, 1}}), ShapeError);
    EXPECT_THROW(aggregate(std::vector<WeightedParams>{{1, a, 0}}), DomainError);
}

TEST(Aggregate, AlgebraicProperties)
{
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n;
    std::uniform_int_distribution<std::size_t> count(1, 6), size(1, 500);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = count(rng);
        std::vector<std::vector<double>> p(k, std::vector<double>(17));
        for (auto& v : p)
            for (double& e : v)
                e = n(rng) * 10.0;
        std::vector<WeightedParams> w;
        for (std::size_t i = 0; i < k; ++i)
            w.push_back({static_cast<std::uint32_t>(i), p[i], size(rng)});

        const auto out = aggregate(w);
        for (std::size_t j = 0; j < 17; ++j) {
            double lo = p[0][j], hi = p[0][j];
            for (auto& v : p) {
                lo = std::min(lo, v[j]);
                hi = std::max(hi, v[j]);
            }
            EXPECT_GE(out[j], lo);
            EXPECT_LE(out[j], hi);
        }
        auto shuffled = w;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_EQ(aggregate(shuffled), out);

        std::vector<WeightedParams> same;
        for (std::size_t i = 0; i < k; ++i)
            same.push_back({static_cast<std::uint32_t>(i), p[0], size(rng)});
        EXPECT_EQ(aggregate(same), p[0]);
    }
}

TEST(GlobalLoss, SampleWeighted)
{
    const std::vector<WeightedLoss> l = {{1.0, 1}, {4.0, 3}};
    EXPECT_DOUBLE_EQ(global_loss(l), 13.0 / 4.0);
    EXPECT_THROW(global_loss(std::vector<WeightedLoss>{}), DomainError);
}

TEST(Proximal, ZeroOnFrozenSlices)
{
    nn::ModelState m({nn::LayerSpec::dense(2, 2, true), nn::LayerSpec::dense(2, 1)});
    const std::vector<double> w(9, 2.0), anchor(9, 0.5);
    const auto g = proximal_gradient(m, w, anchor, 0.1);
    for (std::size_t i = 0; i < 6; ++i)
        EXPECT_EQ(g[i], 0.0);
    for (std::size_t i = 6; i < 9; ++i)
        EXPECT_DOUBLE_EQ(g[i], 0.15);
}

TEST(LocalUpdate, ProximalTermPullsTowardGlobal)
{
    const auto clients = fixtures::linear_clients(1, 64, 5, 3);
    const nn::ModelState m = small_classifier(5, 1);
    const LocalTraining t{LossKind::bce, {nn::OptimizerKind::sgd, 0.5}, 5, 8, 17};
    const auto free_run = local_update_fedprox(m, m.params(), clients[0], t, 0.0);
    const auto tight = local_update_fedprox(m, m.params(), clients[0], t, 1.0);
    auto dist = [&](const std::vector<double>& p) {
        double s = 0;
        for (std::size_t i = 0; i < p.size(); ++i)
            s += (p[i] - m.params()[i]) * (p[i] - m.params()[i]);
        return s;
    };
    EXPECT_LT(dist(tight.params), dist(free_run.params));
    EXPECT_EQ(local_update_fedavg(m, m.params(), clients[0], t).params, free_run.params);
    EXPECT_THROW(local_update_fedprox(m, m.params(), clients[0], t, -1.0), DomainError);
}

TEST(RunRounds, FedProxWithZeroMuReproducesFedAvg)
{
    const auto clients = fixtures::linear_clients(4, 40, 6, 5);
    FederationConfig c = config(4, 5);
    c.participation_fraction = 0.5;
    c.resample_each_round = true;
    c.mu = 0.0;
    const auto avg = run_rounds(c, clients, small_classifier(6, 2), LossKind::bce, Algorithm::fedavg);
    const auto prox = run_rounds(c, clients, small_classifier(6, 2), LossKind::bce, Algorithm::fedprox);
    expect_same_history(avg.history, prox.history);
    EXPECT_EQ(avg.params, prox.params);

    c.mu = 0.5;
    const auto real_prox = run_rounds(c, clients, small_classifier(6, 2), LossKind::bce, Algorithm::fedprox);
    EXPECT_NE(real_prox.params, avg.params);
}

TEST(RunRounds, ThreadCountDoesNotChangeResults)
{
    const auto clients = fixtures::linear_clients(5, 50, 7, 6);
    FederationConfig c = config(5, 4);
    c.optimizer = {nn::OptimizerKind::adam, 0.01};
    c.mu = 0.01;
    const auto one = run_rounds(c, clients, small_classifier(7, 3), LossKind::bce, Algorithm::fedprox);
    c.threads = 4;
    const auto four = run_rounds(c, clients, small_classifier(7, 3), LossKind::bce, Algorithm::fedprox);
    expect_same_history(one.history, four.history);
    EXPECT_EQ(one.params, four.params);
}

TEST(RunRounds, SingleClientEqualsCentralizedSgd)
{
    auto clients = fixtures::linear_clients(1, 90, 5, 7);
    const FederationConfig c = config(1, 6);
    const nn::ModelState m0 = small_autoencoder(5, 4);
    const auto fed = run_rounds(c, clients, m0, LossKind::mse, Algorithm::fedavg);

    // Plain mini-batch SGD over the same batches and dropout masks.
    nn::ModelState m = m0;
    nn::OptimizerState opt(c.optimizer);
    const auto& x = clients[0].train_x;
    for (std::size_t round = 1; round <= c.rounds; ++round) {
        m.set_mode(nn::Mode::train);
        const std::uint64_t seed = local_seed(c.seed, round, clients[0].client_id);
        const auto order = epoch_order(x.rows, seed, 0);
        for (std::size_t start = 0, step = 0; start < x.rows; start += c.batch_size, ++step) {
            const std::span<const std::size_t> rows(order.data() + start, std::min(c.batch_size, x.rows - start));
            const nn::Matrix xb = nn::gather_rows(x, rows);
            const auto fwd = nn::forward(m, xb, dropout_seed(seed, 0, step));
            nn::sgd_step(opt, m, nn::backward(m, fwd.cache, nn::mse_loss(fwd.output, xb).grad));
        }
        m.set_mode(nn::Mode::eval);
        const double central = nn::mse_loss(nn::infer(m, x), x).loss;
        EXPECT_NEAR(fed.history[round - 1].global_train_loss, central, 1e-12) << round;
    }
}

TEST(RunRounds, LossesTrackAllClientsAndAccuracyForBce)
{
    const auto clients = fixtures::linear_clients(3, 60, 4, 8);
    FederationConfig c = config(3, 8);
    c.participation_fraction = 0.34;
    const auto r = run_rounds(c, clients, small_classifier(4, 9), LossKind::bce, Algorithm::fedavg);
    ASSERT_EQ(r.history.size(), 8u);
    for (const auto& rec : r.history) {
        EXPECT_EQ(rec.participants.size(), 2u);
        EXPECT_EQ(rec.participants, r.history.front().participants);
        EXPECT_EQ(rec.per_client_losses.size(), 2u);
        ASSERT_TRUE(rec.train_acc.has_value());
        EXPECT_GE(*rec.train_acc, 0.0);
        EXPECT_LE(*rec.train_acc, 1.0);
        EXPECT_EQ(rec.wall_time_ms, 0);
    }
    EXPECT_LT(r.history.back().global_train_loss, r.history.front().global_train_loss);
}

TEST(RunRounds, DivergenceCarriesPartialHistory)
{
    auto clients = fixtures::linear_clients(2, 30, 4, 9);
    for (auto& c : clients)
        for (double& v : c.train_x.data)
            v *= 1e150;
    FederationConfig c = config(2, 5);
    c.optimizer.lr = 1e6;
    try {
        run_rounds(c, clients, small_autoencoder(4, 1), LossKind::mse, Algorithm::fedavg);
        FAIL() << "expected divergence";
    } catch (const TrainingDiverged& e) {
        EXPECT_LT(e.history.size(), 5u);
    }
}

TEST(RunRounds, RejectsInconsistentConfig)
{
    const auto clients = fixtures::linear_clients(2, 20, 3, 1);
    FederationConfig c = config(3, 1);
    EXPECT_THROW(run_rounds(c, clients, small_classifier(3, 1), LossKind::bce, Algorithm::fedavg), ConfigError);
    c.n_clients = 2;
    c.participation_fraction = 1.5;
    EXPECT_THROW(run_rounds(c, clients, small_classifier(3, 1), LossKind::bce, Algorithm::fedavg), ConfigError);
}
