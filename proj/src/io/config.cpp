#include "fedjam/io/config.hpp"

#include "fedjam/error.hpp"
#include "fedjam/io/binary.hpp"
#include "fedjam/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <random>
#include <set>

namespace fedjam::io {

using nlohmann::json;

namespace {

// Reads fields of one JSON object, remembering which keys were consumed so
// leftovers can be reported as unknown.
class Fields {
public:
    Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object())
            fail("", "expected an object");
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    const json& raw(const std::string& key)
    {
        seen_.insert(key);
        return obj_.at(key);
    }

    template <typename T>
    T get(const std::string& key, T fallback)
    {
        if (!has(key))
            return fallback;
        return as<T>(key, raw(key));
    }

    template <typename T>
    T require(const std::string& key)
    {
        if (!has(key))
            fail(key, "missing required field");
        return as<T>(key, raw(key));
    }

    std::string field(const std::string& key) const { return path_ + "/" + key; }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const
    {
        throw ConfigError("config field '" + (key.empty() ? path_ : field(key)) + "': " + msg);
    }

    void finish() const
    {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.contains(it.key()))
                fail(it.key(), "unknown key");
    }

private:
    template <typename T>
    T as(const std::string& key, const json& v) const
    {
        try {
            if constexpr (std::is_same_v<T, std::uint64_t> || std::is_same_v<T, std::uint32_t> ||
                          std::is_same_v<T, std::size_t>) {
                if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
                    fail(key, "expected a non-negative integer");
            } else if constexpr (std::is_same_v<T, int>) {
                if (!v.is_number_integer())
                    fail(key, "expected an integer");
            } else if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number())
                    fail(key, "expected a number");
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean())
                    fail(key, "expected a boolean");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string())
                    fail(key, "expected a string");
            }
            return v.get<T>();
        } catch (const json::exception& e) {
            fail(key, e.what());
        }
    }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

std::pair<double, double> range_of(Fields& f, const std::string& key, std::pair<double, double> fallback)
{
    if (!f.has(key))
        return fallback;
    const json& v = f.raw(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        f.fail(key, "expected [lo, hi]");
    const double lo = v[0].get<double>(), hi = v[1].get<double>();
    if (lo > hi)
        f.fail(key, "lo must not exceed hi");
    return {lo, hi};
}

std::vector<std::size_t> widths_of(Fields& f, const std::string& key, std::vector<std::size_t> fallback)
{
    if (!f.has(key))
        return fallback;
    const json& v = f.raw(key);
    if (!v.is_array() || v.empty())
        f.fail(key, "expected a non-empty array of positive integers");
    std::vector<std::size_t> out;
    for (const json& e : v) {
        if (!e.is_number_unsigned() || e.get<std::size_t>() == 0)
            f.fail(key, "expected a non-empty array of positive integers");
        out.push_back(e.get<std::size_t>());
    }
    return out;
}

signal::SplitFractions split_of(Fields& f, const std::string& key, signal::SplitFractions fallback)
{
    if (!f.has(key))
        return fallback;
    const json& v = f.raw(key);
    if (!v.is_array() || v.size() != 3)
        f.fail(key, "expected [train, valid, test]");
    signal::SplitFractions s{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    if (!(s.train > 0 && s.valid > 0 && s.test > 0) || std::abs(s.train + s.valid + s.test - 1.0) > 1e-9)
        f.fail(key, "fractions must be positive and sum to 1");
    return s;
}

signal::PbchFill fill_of(Fields& f, const std::string& key, signal::PbchFill fallback)
{
    const std::string s = f.get<std::string>(key, fallback == signal::PbchFill::zeros ? "zeros" : "random_qpsk");
    if (s == "zeros")
        return signal::PbchFill::zeros;
    if (s == "random_qpsk")
        return signal::PbchFill::random_qpsk;
    f.fail(key, "expected \"zeros\" or \"random_qpsk\"");
}

signal::JammerKind kind_of(Fields& f, const std::string& key, const std::string& name)
{
    try {
        return signal::parse_jammer_kind(name);
    } catch (const ConfigError&) {
        f.fail(key, "unknown jammer kind '" + name + "'");
    }
}

void parse_train_stage(const json& j, const std::string& path, pipeline::TrainStageConfig& s)
{
    Fields f(j, path);
    s.rounds = f.get<std::size_t>("rounds", s.rounds);
    s.batch_size = f.get<std::size_t>("batch_size", s.batch_size);
    s.local_epochs = f.get<std::size_t>("local_epochs", s.local_epochs);
    s.optimizer.lr = f.get<double>("lr", s.optimizer.lr);
    s.mu = f.get<double>("mu", s.mu);
    if (f.has("optimizer")) {
        const std::string name = f.get<std::string>("optimizer", "");
        try {
            s.optimizer.kind = nn::parse_optimizer_kind(name);
        } catch (const ConfigError&) {
            f.fail("optimizer", "expected \"sgd\" or \"adam\"");
        }
    }
    if (s.rounds == 0)
        f.fail("rounds", "must be >= 1");
    if (s.batch_size == 0)
        f.fail("batch_size", "must be >= 1");
    if (s.local_epochs == 0)
        f.fail("local_epochs", "must be >= 1");
    if (!(s.optimizer.lr > 0.0))
        f.fail("lr", "must be positive");
    if (!(s.mu >= 0.0))
        f.fail("mu", "must be >= 0");
    f.finish();
}

void parse_stages(const json& j, pipeline::StageConfig& s)
{
    Fields f(j, "/stages");
    if (f.has("preset")) {
        const std::string p = f.get<std::string>("preset", "");
        if (p == "desk")
            s = pipeline::StageConfig::desk();
        else if (p == "full")
            s = pipeline::StageConfig{};
        else
            f.fail("preset", "expected \"desk\" or \"full\"");
    }
    s.encoder = widths_of(f, "encoder", s.encoder);
    s.decoder = widths_of(f, "decoder", s.decoder);
    s.head = widths_of(f, "head", s.head);
    s.cae_dropout = f.get<double>("cae_dropout", s.cae_dropout);
    s.head_dropout = f.get<double>("head_dropout", s.head_dropout);
    if (f.has("stage1"))
        parse_train_stage(f.raw("stage1"), "/stages/stage1", s.stage1);
    if (f.has("stage2"))
        parse_train_stage(f.raw("stage2"), "/stages/stage2", s.stage2);
    f.finish();
    try {
        pipeline::validate(s);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("config field '/stages': ") + e.what());
    }
}

signal::ClientProfile parse_client(const json& j, const std::string& path, const SignalSettings& sig,
                                   std::uint64_t master)
{
    Fields f(j, path);
    signal::ClientProfile p;
    p.client_id = f.require<std::uint32_t>("client_id");
    p.femtocell_id = f.get<std::uint32_t>("femtocell_id", 1);
    const int n1 = f.require<int>("n1");
    const int n2 = f.require<int>("n2");
    try {
        p.cell = signal::derive_pci(n1, n2);
    } catch (const DomainError& e) {
        f.fail(n1 < 0 || n1 > signal::kMaxCellGroup ? "n1" : "n2", e.what());
    }
    if (f.has("taps")) {
        const json& taps = f.raw("taps");
        if (!taps.is_array() || taps.empty())
            f.fail("taps", "expected a non-empty array of [re, im] pairs");
        p.channel.taps.clear();
        for (const json& t : taps) {
            if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number())
                f.fail("taps", "expected [re, im] pairs");
            p.channel.taps.emplace_back(t[0].get<double>(), t[1].get<double>());
        }
        if (p.channel.taps.front() == signal::cplx{})
            f.fail("taps", "tap 0 must be nonzero");
    }
    if (f.has("snr_db")) {
        const json& v = f.raw("snr_db");
        if (v.is_string() && v.get<std::string>() == "off")
            p.channel.snr_db = signal::ChannelSpec::kNoiseOff;
        else if (v.is_number())
            p.channel.snr_db = v.get<double>();
        else
            f.fail("snr_db", "expected a number or \"off\"");
    } else {
        p.channel.snr_db = 10.0;
    }
    {
        Fields jf(f.raw("jammer"), f.field("jammer"));
        p.jammer.kind = kind_of(jf, "kind", jf.require<std::string>("kind"));
        p.jammer.jsr_db = jf.require<double>("jsr_db");
        p.jammer.tone_offset = jf.get<double>("tone_offset", 0.1);
        p.jammer.replay_n_fft = jf.get<int>("replay_n_fft", sig.n_fft);
        if (!(p.jammer.tone_offset > -0.5 && p.jammer.tone_offset < 0.5))
            jf.fail("tone_offset", "must lie in (-0.5, 0.5)");
        jf.finish();
    }
    p.n_obs = f.require<std::uint32_t>("n_obs");
    if (p.n_obs == 0 || p.n_obs % 2 != 0)
        f.fail("n_obs", "must be positive and even");
    p.split = split_of(f, "split", p.split);
    p.seed = f.get<std::uint64_t>("seed", derive_seed(master, {0xc11e47, p.client_id}));
    p.channel.seed = derive_seed(p.seed, {1});
    p.jammer.seed = derive_seed(p.seed, {2});
    p.n_fft = sig.n_fft;
    p.cp_len = sig.cp_len;
    p.q_len = sig.q_len;
    p.pbch_fill = sig.pbch_fill;
    f.finish();
    return p;
}

GeneratorSettings parse_generator(const json& j)
{
    Fields f(j, "/generator");
    GeneratorSettings g;
    g.n_clients = f.get<std::size_t>("n_clients", g.n_clients);
    g.n_femtocells = f.get<std::size_t>("n_femtocells", g.n_femtocells);
    g.n_obs = f.get<std::uint32_t>("n_obs", g.n_obs);
    g.split = split_of(f, "split", g.split);
    g.snr_db = range_of(f, "snr_db", g.snr_db);
    g.jsr_db = range_of(f, "jsr_db", g.jsr_db);
    g.tone_offset = range_of(f, "tone_offset", g.tone_offset);
    if (f.has("n_taps")) {
        const auto r = range_of(f, "n_taps", {g.n_taps.first, g.n_taps.second});
        g.n_taps = {static_cast<int>(r.first), static_cast<int>(r.second)};
        if (g.n_taps.first < 1)
            f.fail("n_taps", "at least one tap is required");
    }
    if (f.has("jammer_kinds")) {
        const json& v = f.raw("jammer_kinds");
        if (!v.is_array() || v.empty())
            f.fail("jammer_kinds", "expected a non-empty array of kind names");
        g.jammer_kinds.clear();
        for (const json& k : v) {
            if (!k.is_string())
                f.fail("jammer_kinds", "expected kind names");
            g.jammer_kinds.push_back(kind_of(f, "jammer_kinds", k.get<std::string>()));
        }
    }
    if (g.n_clients == 0)
        f.fail("n_clients", "must be >= 1");
    if (g.n_femtocells == 0)
        f.fail("n_femtocells", "must be >= 1");
    if (g.n_obs == 0 || g.n_obs % 2 != 0)
        f.fail("n_obs", "must be positive and even");
    if (!(g.tone_offset.first > -0.5 && g.tone_offset.second < 0.5))
        f.fail("tone_offset", "must lie in (-0.5, 0.5)");
    f.finish();
    return g;
}

} // namespace

std::vector<signal::ClientProfile> generate_profiles(const GeneratorSettings& gen, const SignalSettings& sig,
                                                     std::uint64_t master_seed)
{
    std::vector<signal::ClientProfile> out;
    for (std::size_t i = 0; i < gen.n_clients; ++i) {
        Rng rng(derive_seed(master_seed, {0x6e4, i}));
        auto uniform = [&rng](std::pair<double, double> r) {
            return std::uniform_real_distribution<double>(r.first, r.second)(rng);
        };
        signal::ClientProfile p;
        p.client_id = static_cast<std::uint32_t>(i);
        p.femtocell_id = static_cast<std::uint32_t>(i % gen.n_femtocells + 1);
        const int n1 = std::uniform_int_distribution<int>(0, signal::kMaxCellGroup)(rng);
        const int n2 = std::uniform_int_distribution<int>(0, signal::kMaxCellSector)(rng);
        p.cell = signal::derive_pci(n1, n2);
        p.channel.snr_db = uniform(gen.snr_db);
        const int taps = std::uniform_int_distribution<int>(gen.n_taps.first, gen.n_taps.second)(rng);
        p.channel.taps.assign(1, signal::cplx{1.0, 0.0});
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        for (int t = 1; t < taps; ++t) {
            const double gain = 0.5 / t;
            const double re = normal(rng);
            const double im = normal(rng);
            p.channel.taps.emplace_back(gain * re, gain * im);
        }
        p.jammer.kind = gen.jammer_kinds[i % gen.jammer_kinds.size()];
        p.jammer.jsr_db = uniform(gen.jsr_db);
        p.jammer.tone_offset = uniform(gen.tone_offset);
        p.jammer.replay_n_fft = sig.n_fft;
        p.n_obs = gen.n_obs;
        p.split = gen.split;
        p.seed = derive_seed(master_seed, {0xc11e47, p.client_id});
        p.channel.seed = derive_seed(p.seed, {1});
        p.jammer.seed = derive_seed(p.seed, {2});
        p.n_fft = sig.n_fft;
        p.cp_len = sig.cp_len;
        p.q_len = sig.q_len;
        p.pbch_fill = sig.pbch_fill;
        out.push_back(std::move(p));
    }
    return out;
}

ExperimentConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed_override)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }
    Fields f(root, "");
    ExperimentConfig cfg;
    cfg.master_seed = f.get<std::uint64_t>("master_seed", 0);
    if (seed_override)
        cfg.master_seed = *seed_override;

    if (f.has("signal")) {
        Fields s(f.raw("signal"), "/signal");
        if (s.has("preset")) {
            const std::string p = s.get<std::string>("preset", "");
            if (p == "full") {
                // 3297-sample window carved from a 1024-point block with 72-sample prefixes.
                cfg.signal = SignalSettings{1024, 72, 3297, signal::PbchFill::random_qpsk};
            } else if (p != "desk") {
                s.fail("preset", "expected \"desk\" or \"full\"");
            }
        }
        cfg.signal.n_fft = s.get<int>("n_fft", cfg.signal.n_fft);
        cfg.signal.cp_len = s.get<int>("cp_len", cfg.signal.cp_len);
        cfg.signal.q_len = s.get<std::uint32_t>("q_len", cfg.signal.q_len);
        cfg.signal.pbch_fill = fill_of(s, "pbch_fill", cfg.signal.pbch_fill);
        try {
            signal::validate_fft_size(cfg.signal.n_fft);
        } catch (const ConfigError& e) {
            s.fail("n_fft", e.what());
        }
        if (cfg.signal.cp_len < 0 || cfg.signal.cp_len >= cfg.signal.n_fft)
            s.fail("cp_len", "must lie in [0, n_fft)");
        s.finish();
    }

    const bool has_clients = f.has("clients");
    const bool has_generator = f.has("generator");
    if (has_clients == has_generator)
        f.fail("", "exactly one of 'clients' or 'generator' must be given");
    if (has_generator) {
        cfg.generator = parse_generator(f.raw("generator"));
        cfg.clients = generate_profiles(*cfg.generator, cfg.signal, cfg.master_seed);
    } else {
        const json& list = f.raw("clients");
        if (!list.is_array() || list.empty())
            f.fail("clients", "expected a non-empty array of client profiles");
        std::set<std::uint32_t> ids;
        for (std::size_t i = 0; i < list.size(); ++i) {
            cfg.clients.push_back(parse_client(list[i], "/clients/" + std::to_string(i), cfg.signal, cfg.master_seed));
            if (!ids.insert(cfg.clients.back().client_id).second)
                f.fail("clients/" + std::to_string(i) + "/client_id", "duplicate client id");
        }
    }

    if (f.has("stages"))
        parse_stages(f.raw("stages"), cfg.stages);
    else
        pipeline::validate(cfg.stages);

    cfg.federation.n_clients = cfg.clients.size();
    if (f.has("federation")) {
        Fields fed(f.raw("federation"), "/federation");
        if (fed.has("n_clients") && fed.get<std::size_t>("n_clients", 0) != cfg.clients.size())
            fed.fail("n_clients", "does not match the number of client profiles (" +
                                      std::to_string(cfg.clients.size()) + ")");
        cfg.federation.participation_fraction =
            fed.get<double>("participation_fraction", cfg.federation.participation_fraction);
        cfg.federation.resample_each_round = fed.get<bool>("resample_each_round", false);
        if (!(cfg.federation.participation_fraction > 0.0 && cfg.federation.participation_fraction <= 1.0))
            fed.fail("participation_fraction", "must lie in (0, 1]");
        fed.finish();
    }
    cfg.federation.seed = cfg.master_seed;

    if (f.has("eval")) {
        Fields ev(f.raw("eval"), "/eval");
        cfg.threshold = ev.get<double>("threshold", cfg.threshold);
        if (ev.has("grid_fractions")) {
            const json& v = ev.raw("grid_fractions");
            if (!v.is_array() || v.empty())
                ev.fail("grid_fractions", "expected a non-empty array of fractions");
            cfg.grid_fractions.clear();
            for (const json& x : v) {
                if (!x.is_number() || !(x.get<double>() > 0.0 && x.get<double>() <= 1.0))
                    ev.fail("grid_fractions", "fractions must lie in (0, 1]");
                cfg.grid_fractions.push_back(x.get<double>());
            }
        }
        if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0))
            ev.fail("threshold", "must lie in (0, 1)");
        ev.finish();
    }
    cfg.output_dir = f.get<std::string>("output_dir", "");
    cfg.data_dir = f.get<std::string>("data_dir", "");
    f.finish();
    return cfg;
}

ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override)
{
    std::string text;
    try {
        text = read_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    try {
        return parse_config(text, seed_override);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace fedjam::io
