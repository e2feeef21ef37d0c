#include "oracles.hpp"

#include "fedjam/error.hpp"
#include "fedjam/signal/dataset.hpp"
#include "fedjam/signal/impairments.hpp"
#include "fedjam/signal/sequences.hpp"
#include "fedjam/signal/ssb.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <string>

using namespace fedjam;
using namespace fedjam::signal;

namespace {

// Golden vectors recorded from a standalone script implementing the
// sequence recursions.
constexpr const char* kPss0 =
    "+--+----++---++-+-+--++--+++++--+--+-+---+-+++--++-+++-++++++-++-++--+-++----+---++++-------+++---+--+++-+-++-+-----+-+-+-++++-";
constexpr const char* kSss1_0 =
    "-+++++--++-+-+-+-+--+--++++-++----+-++++-++---+++-+-+-+++---++--+---+-+++--+--+-+-++++-++--+-+-++-+-+--+--+++--+-----+--+--+---";
constexpr const char* kSss224_2 =
    "----+---++-+----+--+-++-++-+-++--+-++++----+-++--++-++-++-+++--+-+-++----+----++-------++--++++-+++++--+-++++-+++-+-+--+-++++--";

std::string signs(const SyncSequence& s)
{
    std::string out;
    for (double v : s)
        out += v > 0 ? '+' : '-';
    return out;
}

} // namespace

TEST(CellIdentity, DerivesPci)
{
    EXPECT_EQ(derive_pci(0, 0).pci, 0);
    EXPECT_EQ(derive_pci(100, 2).pci, 302);
    EXPECT_EQ(derive_pci(335, 1).pci, 1006);
    EXPECT_EQ(derive_pci(335, 2).pci, 1007);
}

TEST(CellIdentity, RejectsOutOfRangeNamingField)
{
    try {
        derive_pci(336, 0);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("n1"), std::string::npos);
    }
    try {
        derive_pci(0, 3);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("n2"), std::string::npos);
    }
    EXPECT_THROW(derive_pci(-1, 0), DomainError);
}

TEST(Pss, GoldenPrefixAndFullVector)
{
    const SyncSequence p = gen_pss(0);
    const double first8[] = {1, -1, -1, 1, -1, -1, -1, -1};
    for (int i = 0; i < 8; ++i)
        EXPECT_EQ(p[i], first8[i]) << i;
    EXPECT_EQ(signs(p), kPss0);
}

TEST(Pss, BpskAndShiftStructure)
{
    const SyncSequence p0 = gen_pss(0);
    for (int n2 = 0; n2 < 3; ++n2) {
        const SyncSequence p = gen_pss(n2);
        double energy = 0;
        for (std::size_t i = 0; i < kSyncSeqLen; ++i) {
            EXPECT_TRUE(p[i] == 1.0 || p[i] == -1.0);
            energy += p[i] * p[i];
            EXPECT_EQ(p[i], p0[(i + 43 * n2) % 127]);
        }
        EXPECT_EQ(energy, 127.0);
    }
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            const auto pa = gen_pss(a), pb = gen_pss(b);
            double xc = 0;
            for (std::size_t i = 0; i < kSyncSeqLen; ++i)
                xc += pa[i] * pb[i];
            EXPECT_LT(std::abs(xc), 127.0);
        }
    EXPECT_THROW(gen_pss(3), DomainError);
}

TEST(Sss, ShiftsAndGoldenVectors)
{
    EXPECT_EQ(sss_shifts(derive_pci(0, 0)).k0, 0);
    EXPECT_EQ(sss_shifts(derive_pci(0, 0)).k1, 0);
    EXPECT_EQ(sss_shifts(derive_pci(224, 2)).k0, 40);
    EXPECT_EQ(sss_shifts(derive_pci(224, 2)).k1, 0);
    EXPECT_EQ(signs(gen_sss(derive_pci(1, 0))), kSss1_0);
    EXPECT_EQ(signs(gen_sss(derive_pci(224, 2))), kSss224_2);
}

TEST(Sss, MatchesBitPackedOracleOnAllCells)
{
    for (int n1 = 0; n1 <= kMaxCellGroup; ++n1)
        for (int n2 = 0; n2 <= kMaxCellSector; ++n2) {
            const auto got = gen_sss(derive_pci(n1, n2));
            const auto want = oracle::sss(n1, n2);
            ASSERT_TRUE(std::equal(got.begin(), got.end(), want.begin())) << n1 << "," << n2;
        }
    for (int n2 = 0; n2 < 3; ++n2) {
        const auto got = gen_pss(n2);
        const auto want = oracle::pss(n2);
        EXPECT_TRUE(std::equal(got.begin(), got.end(), want.begin()));
    }
}

TEST(SsbGrid, ZeroFillHas254NonzeroEntries)
{
    const SsbGrid g = build_ssb_grid(derive_pci(17, 1), 256, PbchFill::zeros, 5);
    int nz = 0;
    for (const cplx& v : g.symbols)
        nz += v != cplx{};
    EXPECT_EQ(nz, 254);
    const auto pss = gen_pss(1);
    const auto sss = gen_sss(derive_pci(17, 1));
    for (int k = 0; k < 256; ++k) {
        const bool sync = k >= kSyncFirstSubcarrier && k <= kSyncLastSubcarrier;
        EXPECT_EQ(g.at(kPssRow, k), sync ? cplx(pss[k - 56]) : cplx{});
        EXPECT_EQ(g.at(kSssRow, k), sync ? cplx(sss[k - 56]) : cplx{});
    }
}

TEST(SsbGrid, QpskFillIsUnitMagnitudeWithinBand)
{
    const SsbGrid g = build_ssb_grid(derive_pci(3, 0), 512, PbchFill::random_qpsk, 11);
    int pbch = 0;
    for (int l = 0; l < kSsbSymbols; ++l)
        for (int k = 0; k < g.n_fft; ++k) {
            const cplx v = g.at(l, k);
            if (k >= kSsbSubcarriers) {
                EXPECT_EQ(v, cplx{});
            }
            if (is_pbch_element(l, k)) {
                ++pbch;
                EXPECT_NEAR(std::abs(v), 1.0, 1e-15);
            }
        }
    EXPECT_EQ(pbch, 240 + 240 + 48 + 48);
    const SsbGrid again = build_ssb_grid(derive_pci(3, 0), 512, PbchFill::random_qpsk, 11);
    EXPECT_EQ(g.symbols, again.symbols);
}

TEST(SsbGrid, RejectsBadFftSize)
{
    EXPECT_THROW(build_ssb_grid(derive_pci(0, 0), 128, PbchFill::zeros, 0), ConfigError);
    EXPECT_THROW(build_ssb_grid(derive_pci(0, 0), 300, PbchFill::zeros, 0), ConfigError);
}

TEST(Ofdm, DcBinGivesConstantSymbol)
{
    SsbGrid g = make_empty_grid(derive_pci(0, 0), 256);
    g.at(0, 0) = 256.0;
    const auto t = ofdm_modulate(g, 0);
    ASSERT_EQ(t.size(), 4u * 256);
    for (int m = 0; m < 256; ++m)
        EXPECT_NEAR(std::abs(t[m] - cplx(1.0, 0.0)), 0.0, 1e-12);
}

TEST(Ofdm, CyclicPrefixCopiesTail)
{
    const SsbGrid g = build_ssb_grid(derive_pci(9, 2), 256, PbchFill::random_qpsk, 3);
    const int cp = 18;
    const auto t = ofdm_modulate(g, cp);
    ASSERT_EQ(t.size(), 4u * (256 + cp));
    for (int l = 0; l < 4; ++l) {
        const std::size_t base = static_cast<std::size_t>(l) * (256 + cp);
        for (int i = 0; i < cp; ++i)
            EXPECT_EQ(t[base + i], t[base + 256 + i]);
    }
}

TEST(Ofdm, MatchesDirectDftAndParseval)
{
    std::mt19937_64 rng(42);
    std::normal_distribution<double> n;
    SsbGrid g = make_empty_grid(derive_pci(0, 0), 256);
    for (cplx& v : g.symbols)
        v = {n(rng), n(rng)};
    const auto t = ofdm_modulate(g, 0);
    for (int l = 0; l < 4; ++l) {
        std::vector<cplx> row(g.row(l).begin(), g.row(l).end());
        const auto ref = oracle::dft(row, +1);
        double e_time = 0, e_freq = 0;
        for (int m = 0; m < 256; ++m) {
            EXPECT_NEAR(std::abs(t[l * 256 + m] - ref[m] / 256.0), 0.0, 1e-12);
            e_time += std::norm(t[l * 256 + m]);
            e_freq += std::norm(row[m]);
        }
        EXPECT_NEAR(e_time, e_freq / 256.0, 1e-9 * e_time);
    }
}

TEST(Ofdm, RoundTrip)
{
    const SsbGrid g = build_ssb_grid(derive_pci(200, 1), 1024, PbchFill::random_qpsk, 8);
    const auto t = ofdm_modulate(g, 72);
    const SsbGrid back = ofdm_demodulate(t, 1024, 72, g.cell);
    double worst = 0;
    for (std::size_t i = 0; i < g.symbols.size(); ++i)
        worst = std::max(worst, std::abs(back.symbols[i] - g.symbols[i]));
    EXPECT_LT(worst, 1e-9);
}

TEST(Impairments, IdentityChannel)
{
    std::vector<cplx> x(300);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    for (auto& v : x)
        v = {n(rng), n(rng)};
    ChannelSpec ch;
    EXPECT_EQ(apply_impairments(x, ch, std::nullopt), x);
}

TEST(Impairments, EqualPowerToneDoublesPower)
{
    // Monte-Carlo over tone phases and offsets.
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n;
    double ratio_sum = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        std::vector<cplx> x(1024);
        for (auto& v : x)
            v = {n(rng), n(rng)};
        JammerSpec j{JammerKind::constant_tone, 0.0, 0.13, static_cast<std::uint64_t>(t)};
        const auto y = apply_impairments(x, ChannelSpec{}, j);
        ratio_sum += mean_power(y) / mean_power(x);
    }
    EXPECT_NEAR(ratio_sum / trials, 2.0, 0.04);
}

TEST(Impairments, PowersAreCalibrated)
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    std::vector<cplx> x(2048);
    for (auto& v : x)
        v = {n(rng), 0.3 * n(rng)};
    ChannelSpec ch{{cplx(0.9, 0.1), cplx(0.2, -0.3)}, ChannelSpec::kNoiseOff, 4};
    const auto sig = convolve_same(x, ch.taps);
    for (JammerKind kind : {JammerKind::constant_tone, JammerKind::wideband_noise, JammerKind::pss_replay}) {
        JammerSpec j{kind, 7.5, -0.21, 99};
        const auto y = apply_impairments(x, ch, j);
        std::vector<cplx> jam(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            jam[i] = y[i] - sig[i];
        EXPECT_NEAR(mean_power(jam) / mean_power(sig), std::pow(10.0, 0.75), 1e-9) << to_string(kind);
    }
    ch.snr_db = 12.0;
    const auto y = apply_impairments(x, ch, std::nullopt);
    std::vector<cplx> noise(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        noise[i] = y[i] - sig[i];
    EXPECT_NEAR(mean_power(noise), mean_power(sig) / std::pow(10.0, 1.2), 1e-9 * mean_power(sig));
}

TEST(Impairments, DeterministicAndConvolutionIsLinearSame)
{
    std::vector<cplx> x = {1, 2, 3, 4};
    const std::vector<cplx> taps = {1.0, 0.5};
    const auto y = convolve_same(x, taps);
    const std::vector<cplx> want = {1.0, 2.5, 4.0, 5.5};
    EXPECT_EQ(y, want);
    ChannelSpec ch{taps, 10.0, 5};
    JammerSpec j{JammerKind::wideband_noise, 3.0, 0.0, 6};
    EXPECT_EQ(apply_impairments(x, ch, j), apply_impairments(x, ch, j));
    EXPECT_THROW(validate(ChannelSpec{{cplx{}}, 1.0, 0}), DomainError);
    EXPECT_THROW(parse_jammer_kind("reactive"), ConfigError);
}

namespace {

ClientProfile profile(std::uint32_t id, std::uint32_t n_obs, std::uint64_t seed)
{
    ClientProfile p;
    p.client_id = id;
    p.cell = derive_pci(7, 1);
    p.channel = {{cplx(1.0), cplx(0.2, 0.1)}, 10.0, 1};
    p.jammer = {JammerKind::wideband_noise, 8.0, 0.0, 2};
    p.n_obs = n_obs;
    p.seed = seed;
    return p;
}

} // namespace

TEST(Dataset, SplitCounts)
{
    const SplitCounts c = split_counts(5000, {});
    EXPECT_EQ(c.train, 3600u);
    EXPECT_EQ(c.valid, 400u);
    EXPECT_EQ(c.test, 1000u);
    const SplitCounts s = split_counts(600, {});
    EXPECT_EQ(s.train + s.valid + s.test, 600u);
}

TEST(Dataset, BalancedShuffledAndDeterministic)
{
    const ClientProfile p = profile(3, 200, 77);
    const ClientDataset a = synth_client_dataset(p);
    const ClientDataset b = synth_client_dataset(p);
    EXPECT_EQ(a, b);
    ASSERT_EQ(a.observations.size(), 200u);
    EXPECT_EQ(a.q_len, 1024u);
    std::size_t jammed = 0;
    for (const auto& o : a.observations) {
        EXPECT_EQ(o.iq.size(), 1024u);
        jammed += o.label == Label::jammed;
    }
    EXPECT_EQ(jammed, 100u);
    // The shuffle interleaves classes rather than leaving two sorted halves.
    std::size_t first_half_jammed = 0;
    for (std::size_t i = 0; i < 100; ++i)
        first_half_jammed += a.observations[i].label == Label::jammed;
    EXPECT_GT(first_half_jammed, 20u);
    EXPECT_LT(first_half_jammed, 80u);
    EXPECT_EQ(a.indices(SplitTag::train).size(), a.counts.train);
    EXPECT_EQ(a.indices(SplitTag::valid).size(), a.counts.valid);
    EXPECT_EQ(a.indices(SplitTag::test).size(), a.counts.test);
}

TEST(Dataset, SeedsGiveDistinctRealizations)
{
    const auto a = synth_observation(profile(0, 10, 1), 0, Label::pure);
    const auto b = synth_observation(profile(0, 10, 2), 0, Label::pure);
    const auto c = synth_observation(profile(0, 10, 1), 1, Label::pure);
    EXPECT_NE(a, b);
    EXPECT_NE(a, c);
}

TEST(Dataset, PaddedAndTruncatedWindows)
{
    ClientProfile p = profile(0, 4, 1);
    p.cp_len = 16;
    p.q_len = 1000;
    EXPECT_EQ(synth_observation(p, 0, Label::jammed).size(), 1000u);
    p.q_len = 1200;
    EXPECT_EQ(synth_observation(p, 0, Label::jammed).size(), 1200u);
}

TEST(Dataset, RejectsOddObservationCount)
{
    EXPECT_THROW(synth_client_dataset(profile(0, 11, 1)), DomainError);
}
