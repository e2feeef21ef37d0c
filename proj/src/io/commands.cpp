#include "fedjam/io/commands.hpp"

#include "fedjam/error.hpp"
#include "fedjam/io/binary.hpp"
#include "fedjam/io/checkpoint.hpp"
#include "fedjam/io/dataset_file.hpp"
#include "fedjam/io/digest.hpp"
#include "fedjam/pipeline/encoding.hpp"
#include "fedjam/pipeline/metrics.hpp"
#include "fedjam/pipeline/pca.hpp"
#include "fedjam/pipeline/stages.hpp"
#include "fedjam/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <filesystem>
#include <iostream>

namespace fedjam::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kHeadSeedTag = 0x4ead;

ExperimentConfig load(const CommandOptions& o)
{
    if (o.config_path.empty())
        throw ConfigError("--config is required");
    ExperimentConfig cfg = load_config(o.config_path, o.seed);
    cfg.federation.threads = o.threads;
    cfg.federation.record_wall_time = o.wall_time;
    return cfg;
}

fs::path out_dir(const CommandOptions& o, const ExperimentConfig& cfg)
{
    fs::path dir = !o.out_dir.empty() ? fs::path(o.out_dir) : fs::path(cfg.output_dir);
    if (dir.empty())
        throw ConfigError("an output directory is required (--out or output_dir)");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

fs::path client_file(const fs::path& dir, std::uint32_t id)
{
    return dir / ("client_" + std::to_string(id) + ".ssbds");
}

std::vector<signal::ClientDataset> synth_all(const ExperimentConfig& cfg)
{
    std::vector<signal::ClientDataset> out;
    out.reserve(cfg.clients.size());
    for (const auto& p : cfg.clients)
        out.push_back(signal::synth_client_dataset(p));
    return out;
}

std::vector<signal::ClientDataset> load_datasets(const CommandOptions& o, const ExperimentConfig& cfg,
                                                 const fs::path& out)
{
    fs::path dir = !o.data_dir.empty() ? fs::path(o.data_dir) : fs::path(cfg.data_dir);
    const bool explicit_dir = !dir.empty();
    if (!explicit_dir) {
        dir = out / "data";
        if (!fs::exists(client_file(dir, cfg.clients.front().client_id)))
            return synth_all(cfg);
    }
    std::vector<signal::ClientDataset> ds;
    for (const auto& p : cfg.clients) {
        signal::ClientDataset d = read_dataset(client_file(dir, p.client_id).string());
        if (d.client_id != p.client_id)
            throw FormatError(client_file(dir, p.client_id).string() + ": client id " + std::to_string(d.client_id) +
                              " does not match profile " + std::to_string(p.client_id));
        ds.push_back(std::move(d));
    }
    return ds;
}

json profile_json(const signal::ClientProfile& p)
{
    json taps = json::array();
    for (const auto& t : p.channel.taps)
        taps.push_back({t.real(), t.imag()});
    json prof = {
        {"client_id", p.client_id},
        {"femtocell_id", p.femtocell_id},
        {"n1", p.cell.n1},
        {"n2", p.cell.n2},
        {"pci", p.cell.pci},
        {"taps", taps},
        {"jammer", {{"kind", signal::to_string(p.jammer.kind)}, {"jsr_db", p.jammer.jsr_db},
                    {"tone_offset", p.jammer.tone_offset}, {"replay_n_fft", p.jammer.replay_n_fft}}},
        {"n_obs", p.n_obs},
        {"split", {p.split.train, p.split.valid, p.split.test}},
        {"n_fft", p.n_fft},
        {"cp_len", p.cp_len},
        {"q_len", signal::window_length(p)},
        {"pbch_fill", p.pbch_fill == signal::PbchFill::zeros ? "zeros" : "random_qpsk"},
    };
    if (std::isfinite(p.channel.snr_db))
        prof["snr_db"] = p.channel.snr_db;
    else
        prof["snr_db"] = "off";
    return prof;
}

void write_history(const fs::path& path, std::span<const fl::RoundRecord> history, int stage,
                   std::string_view algorithm, bool svg)
{
    const auto rows = history_rows(history, stage, algorithm);
    write_file(path.string(), format_history(rows));
    if (svg) {
        Series train{"train_loss", {}}, valid{"valid_loss", {}};
        for (const auto& r : rows) {
            train.values.push_back(r.train_loss);
            valid.values.push_back(r.valid_loss);
        }
        const Series both[] = {train, valid};
        fs::path svg_path = path;
        svg_path.replace_extension(".svg");
        write_file(svg_path.string(), line_chart_svg("stage " + std::to_string(stage) + " loss", both));
    }
}

// Runs a stage, flushing whatever history exists before a divergence propagates.
template <typename Fn>
pipeline::StageResult run_logged(Fn&& fn, const fs::path& history_path, int stage, std::string_view algorithm,
                                 bool svg)
{
    try {
        pipeline::StageResult r = fn();
        write_history(history_path, r.history, stage, algorithm, svg);
        return r;
    } catch (const fl::TrainingDiverged& e) {
        write_history(history_path, e.history, stage, algorithm, svg);
        throw;
    }
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace

std::string cmd_synth(const CommandOptions& o)
{
    const ExperimentConfig cfg = load(o);
    const fs::path dir = out_dir(o, cfg) / "data";
    fs::create_directories(dir);
    json manifest = {{"master_seed", cfg.master_seed}, {"clients", json::array()}};
    for (const auto& p : cfg.clients) {
        const std::string bytes = encode_dataset(signal::synth_client_dataset(p));
        const fs::path file = client_file(dir, p.client_id);
        write_file(file.string(), bytes);
        manifest["clients"].push_back({{"file", file.filename().string()},
                                       {"seed", p.seed},
                                       {"sha256", sha256_hex(bytes)},
                                       {"bytes", bytes.size()},
                                       {"profile", profile_json(p)}});
    }
    write_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
    return "synth: wrote " + std::to_string(cfg.clients.size()) + " datasets to " + dir.string();
}

std::string cmd_stage1(const CommandOptions& o)
{
    const ExperimentConfig cfg = load(o);
    const fs::path dir = out_dir(o, cfg);
    const auto clients = pipeline::encode_clients(load_datasets(o, cfg, dir));
    const auto r = run_logged([&] { return pipeline::run_stage1(clients, cfg.stages, cfg.federation); },
                              dir / "stage1_history.csv", 1, "fedavg", o.svg);
    write_checkpoint((dir / "cae.fjck").string(), r.model);
    return "stage1: " + std::to_string(r.history.size()) + " rounds, final train mse " +
           fmt(r.history.back().global_train_loss);
}

std::string cmd_stage2(const CommandOptions& o)
{
    const ExperimentConfig cfg = load(o);
    const fs::path dir = out_dir(o, cfg);
    const fs::path ckpt = !o.checkpoint.empty() ? fs::path(o.checkpoint) : dir / "cae.fjck";
    const nn::ModelState cae = read_checkpoint(ckpt.string());
    const auto clients = pipeline::encode_clients(load_datasets(o, cfg, dir));
    if (cae.input_dim() != clients.front().train_x.cols)
        throw ConfigError("checkpoint '" + ckpt.string() + "' expects input dim " + std::to_string(cae.input_dim()) +
                          " but the data has " + std::to_string(clients.front().train_x.cols));
    const nn::ModelState clf =
        pipeline::build_classifier(cae, cfg.stages, derive_seed(cfg.master_seed, {kHeadSeedTag}));
    const auto r = run_logged([&] { return pipeline::run_stage2(clients, clf, cfg.stages, cfg.federation); },
                              dir / "stage2_history.csv", 2, "fedprox", o.svg);
    write_checkpoint((dir / "classifier.fjck").string(), r.model);
    return "stage2: " + std::to_string(r.history.size()) + " rounds, final valid acc " +
           fmt(r.history.back().valid_acc.value_or(0.0));
}

std::vector<ReportRow> run_grid(const ExperimentConfig& cfg, const std::vector<signal::ClientDataset>& data,
                                int threads, bool wall_time)
{
    const auto clients = pipeline::encode_clients(data);
    std::vector<ReportRow> rows;
    for (double fraction : cfg.grid_fractions) {
        fl::FederationConfig fed = cfg.federation;
        fed.participation_fraction = fraction;
        fed.threads = threads;
        fed.record_wall_time = wall_time;
        const std::size_t n = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(clients.size())));

        for (fl::Algorithm a : {fl::Algorithm::fedavg, fl::Algorithm::fedprox}) {
            const auto r = pipeline::run_baseline(clients, cfg.stages, fed, a);
            rows.push_back({std::string(fl::to_string(a)), n, pipeline::evaluate(r.model, clients, cfg.threshold)});
        }
        const auto s1 = pipeline::run_stage1(clients, cfg.stages, fed);
        const auto clf =
            pipeline::build_classifier(s1.model, cfg.stages, derive_seed(cfg.master_seed, {kHeadSeedTag}));
        const auto s2 = pipeline::run_stage2(clients, clf, cfg.stages, fed);
        rows.push_back({"two-stage", n, pipeline::evaluate(s2.model, clients, cfg.threshold)});
    }
    return rows;
}

std::string cmd_eval(const CommandOptions& o)
{
    const ExperimentConfig cfg = load(o);
    const fs::path dir = out_dir(o, cfg);
    const auto data = load_datasets(o, cfg, dir);
    std::vector<ReportRow> rows;
    if (o.grid) {
        rows = run_grid(cfg, data, o.threads, o.wall_time);
    } else {
        const fs::path ckpt = !o.checkpoint.empty() ? fs::path(o.checkpoint) : dir / "classifier.fjck";
        const nn::ModelState clf = read_checkpoint(ckpt.string());
        const auto clients = pipeline::encode_clients(data);
        if (clf.input_dim() != clients.front().train_x.cols || clf.output_dim() != 1)
            throw ConfigError("checkpoint '" + ckpt.string() + "' is not a classifier for this data");
        rows.push_back({"two-stage", clients.size(), pipeline::evaluate(clf, clients, cfg.threshold)});
    }
    write_file((dir / "report.csv").string(), format_report(rows));
    std::string summary = "eval:";
    for (const auto& r : rows)
        summary += " " + r.algorithm + "@" + std::to_string(r.n_clients) + " acc=" + fmt(r.report.accuracy) +
                   " f1=" + fmt(r.report.f1) + ";";
    summary.pop_back();
    return summary;
}

std::string cmd_pca(const CommandOptions& o)
{
    const ExperimentConfig cfg = load(o);
    const fs::path dir = out_dir(o, cfg);
    const auto data = load_datasets(o, cfg, dir);
    const pipeline::PcaDiagnostic diag = pipeline::pca_diagnostic(data, 2);
    write_file((dir / "pca.csv").string(), format_pca(diag));
    const std::string variance = format_pca_variance(diag);
    write_file((dir / "pca_variance.csv").string(), variance);
    return variance.substr(0, variance.size() - 1);
}

int exit_code_for(const std::exception& e) noexcept
{
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
        dynamic_cast<const CLI::Error*>(&e))
        return kExitConfig;
    if (dynamic_cast<const FormatError*>(&e))
        return kExitFormat;
    if (dynamic_cast<const NumericError*>(&e))
        return kExitNumeric;
    return kExitFailure;
}

namespace {

std::string_view kind_for(int code)
{
    switch (code) {
    case kExitConfig: return "config";
    case kExitFormat: return "format";
    case kExitNumeric: return "numeric";
    default: return "failure";
    }
}

std::string one_line(std::string_view msg)
{
    std::string s;
    for (char c : msg) {
        if (c == '\n' || c == '\r')
            s += ' ';
        else if (c == '"' || c == '\\')
            s += {'\\', c};
        else
            s += c;
    }
    return s;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Federated jamming detection on synthetic 5G SSB data", "fedjam"};
    app.require_subcommand(1);
    CommandOptions o;
    using Cmd = std::string (*)(const CommandOptions&);
    struct Entry {
        const char* name;
        const char* help;
        Cmd fn;
    };
    const Entry entries[] = {
        {"synth", "Generate per-client datasets and a manifest", cmd_synth},
        {"stage1", "Train the autoencoder with FedAVG", cmd_stage1},
        {"stage2", "Train the classifier head with FedProx", cmd_stage2},
        {"eval", "Score a classifier, or the full comparison grid", cmd_eval},
        {"pca", "Project pooled client data onto its top two components", cmd_pca},
    };
    for (const Entry& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        sub->add_option("--config", o.config_path, "Experiment config (JSON)")->required();
        sub->add_option("--out", o.out_dir, "Output directory");
        sub->add_option("--seed", o.seed, "Override master_seed");
        sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1, 1024));
        sub->add_option("--data", o.data_dir, "Directory with client_<id>.ssbds files");
        sub->add_flag("--svg", o.svg, "Also write SVG charts for histories");
        sub->add_flag("--no-wall-time{false}", o.wall_time, "Write wall_time_ms as 0");
        if (std::string_view(e.name) == "stage2" || std::string_view(e.name) == "eval")
            sub->add_option("--checkpoint", o.checkpoint, "Input checkpoint");
        if (std::string_view(e.name) == "eval")
            sub->add_flag("--grid", o.grid, "Train and score fedavg, fedprox and two-stage per grid fraction");
    }

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error code=" << kExitConfig << " kind=usage message=\"" << one_line(e.what()) << "\"\n";
        return kExitConfig;
    }

    try {
        omp_set_num_threads(o.threads);
        for (const Entry& e : entries)
            if (app.got_subcommand(e.name)) {
                out << e.fn(o) << '\n';
                break;
            }
        return kExitOk;
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        err << "error code=" << code << " kind=" << kind_for(code) << " message=\"" << one_line(e.what()) << "\"\n";
        return code;
    }
}

} // namespace fedjam::io
