#include "fedjam/io/reports.hpp"

#include "fedjam/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace fedjam::io {

namespace {

std::string fmt_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text)
{
    std::vector<std::string_view> out;
    for (std::string_view line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (!line.empty())
            out.push_back(line);
    }
    return out;
}

double parse_real(std::string_view s, std::size_t line)
{
    // from_chars for double is available in libstdc++ 11.
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw FormatError("csv line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
    return v;
}

template <typename Int>
Int parse_int(std::string_view s, std::size_t line)
{
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw FormatError("csv line " + std::to_string(line) + ": bad integer '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> expect_table(std::string_view csv, std::string_view header, std::size_t& n_fields)
{
    auto lines = lines_of(csv);
    if (lines.empty() || lines.front() != header)
        throw FormatError("csv: expected header '" + std::string(header) + "'");
    n_fields = split(header, ',').size();
    lines.erase(lines.begin());
    return lines;
}

} // namespace

std::vector<HistoryRow> history_rows(std::span<const fl::RoundRecord> history, int stage, std::string_view algorithm)
{
    std::vector<HistoryRow> rows;
    rows.reserve(history.size());
    for (const auto& r : history)
        rows.push_back({r.round, stage, std::string(algorithm), r.participants.size(), r.global_train_loss,
                        r.global_valid_loss, r.train_acc, r.valid_acc, r.wall_time_ms});
    return rows;
}

std::string format_history(std::span<const HistoryRow> rows)
{
    std::string out(kHistoryHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += std::to_string(r.round) + ',' + std::to_string(r.stage) + ',' + r.algorithm + ',' +
               std::to_string(r.n_participants) + ',' + fmt_real(r.train_loss) + ',' + fmt_real(r.valid_loss) + ',' +
               (r.train_acc ? fmt_real(*r.train_acc) : "") + ',' + (r.valid_acc ? fmt_real(*r.valid_acc) : "") +
               ',' + std::to_string(r.wall_time_ms) + '\n';
    }
    return out;
}

std::vector<HistoryRow> parse_history(std::string_view csv)
{
    std::size_t n_fields = 0;
    const auto lines = expect_table(csv, kHistoryHeader, n_fields);
    std::vector<HistoryRow> rows;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t ln = i + 2;
        const auto f = split(lines[i], ',');
        if (f.size() != n_fields)
            throw FormatError("csv line " + std::to_string(ln) + ": expected " + std::to_string(n_fields) + " fields");
        HistoryRow r;
        r.round = parse_int<std::size_t>(f[0], ln);
        r.stage = parse_int<int>(f[1], ln);
        r.algorithm = std::string(f[2]);
        r.n_participants = parse_int<std::size_t>(f[3], ln);
        r.train_loss = parse_real(f[4], ln);
        r.valid_loss = parse_real(f[5], ln);
        if (!f[6].empty())
            r.train_acc = parse_real(f[6], ln);
        if (!f[7].empty())
            r.valid_acc = parse_real(f[7], ln);
        r.wall_time_ms = parse_int<std::int64_t>(f[8], ln);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string format_report(std::span<const ReportRow> rows)
{
    std::string out(kReportHeader);
    out += '\n';
    for (const auto& r : rows)
        out += r.algorithm + ',' + std::to_string(r.n_clients) + ',' + fmt_real(r.report.precision) + ',' +
               fmt_real(r.report.recall) + ',' + fmt_real(r.report.f1) + ',' + fmt_real(r.report.accuracy) + '\n';
    return out;
}

std::vector<ReportRow> parse_report(std::string_view csv)
{
    std::size_t n_fields = 0;
    const auto lines = expect_table(csv, kReportHeader, n_fields);
    std::vector<ReportRow> rows;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t ln = i + 2;
        const auto f = split(lines[i], ',');
        if (f.size() != n_fields)
            throw FormatError("csv line " + std::to_string(ln) + ": expected " + std::to_string(n_fields) + " fields");
        ReportRow r;
        r.algorithm = std::string(f[0]);
        r.n_clients = parse_int<std::size_t>(f[1], ln);
        r.report.precision = parse_real(f[2], ln);
        r.report.recall = parse_real(f[3], ln);
        r.report.f1 = parse_real(f[4], ln);
        r.report.accuracy = parse_real(f[5], ln);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string format_pca(const pipeline::PcaDiagnostic& diag)
{
    std::string out = "client_id,pc1,pc2\n";
    const std::size_t k = diag.projections.cols;
    for (std::size_t i = 0; i < diag.projections.rows; ++i) {
        out += std::to_string(diag.client_ids[i]);
        for (std::size_t c = 0; c < 2; ++c)
            out += ',' + fmt_real(c < k ? diag.projections(i, c) : 0.0);
        out += '\n';
    }
    return out;
}

std::string format_pca_variance(const pipeline::PcaDiagnostic& diag)
{
    std::string out = "explained_variance_ratio";
    for (double r : diag.explained_ratio)
        out += ',' + fmt_real(r);
    return out + '\n';
}

std::string line_chart_svg(std::string_view title, std::span<const Series> series)
{
    constexpr double W = 640, H = 400, L = 60, R = 20, T = 40, B = 40;
    static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::size_t n_max = 0;
    for (const auto& s : series) {
        n_max = std::max(n_max, s.values.size());
        for (double v : s.values)
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
    }
    if (!(lo <= hi)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi == lo)
        hi = lo + 1.0;

    auto x_of = [&](std::size_t i) { return L + (n_max > 1 ? (W - L - R) * i / double(n_max - 1) : 0.0); };
    auto y_of = [&](double v) { return T + (H - T - B) * (hi - v) / (hi - lo); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\">" << title
        << "</text>\n"
        << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << L - 4 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_real(hi)
        << "</text>\n"
        << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_real(lo)
        << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % std::size(kColors)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (std::size_t i = 0; i < series[s].values.size(); ++i)
            if (std::isfinite(series[s].values[i]))
                svg << x_of(i) << ',' << y_of(series[s].values[i]) << ' ';
        svg << "\"/>\n<text x=\"" << W - R << "\" y=\"" << T + 14 * (s + 1) << "\" text-anchor=\"end\" fill=\""
            << color << "\" font-size=\"11\">" << series[s].name << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace fedjam::io
