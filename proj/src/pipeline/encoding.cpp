#include "fedjam/pipeline/encoding.hpp"

#include "fedjam/error.hpp"

#include <cmath>

namespace fedjam::pipeline {

Standardizer fit_standardizer(const signal::ClientDataset& ds)
{
    double sum = 0.0;
    double sq = 0.0;
    std::size_t n = 0;
    for (std::size_t i : ds.indices(signal::SplitTag::train)) {
        for (const auto& v : ds.observations[i].iq) {
            const double re = v.real(), im = v.imag();
            sum += re + im;
            sq += re * re + im * im;
            n += 2;
        }
    }
    Standardizer s;
    if (n == 0)
        return s;
    s.mean = sum / static_cast<double>(n);
    const double var = sq / static_cast<double>(n) - s.mean * s.mean;
    s.stddev = var > 0.0 ? std::sqrt(var) : 1.0;
    return s;
}

nn::Matrix encode_rows(const signal::ClientDataset& ds, std::span<const std::size_t> indices, const Standardizer& s)
{
    nn::Matrix m(indices.size(), 2 * static_cast<std::size_t>(ds.q_len));
    const double inv = 1.0 / s.stddev;
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto& iq = ds.observations[indices[r]].iq;
        if (iq.size() != ds.q_len)
            throw FormatError("observation length differs from dataset q_len");
        auto row = m.row(r);
        for (std::size_t j = 0; j < iq.size(); ++j) {
            row[2 * j] = (iq[j].real() - s.mean) * inv;
            row[2 * j + 1] = (iq[j].imag() - s.mean) * inv;
        }
    }
    return m;
}

namespace {

std::vector<double> labels_of(const signal::ClientDataset& ds, std::span<const std::size_t> indices)
{
    std::vector<double> y;
    y.reserve(indices.size());
    for (std::size_t i : indices)
        y.push_back(ds.observations[i].label == signal::Label::jammed ? 1.0 : 0.0);
    return y;
}

} // namespace

fl::ClientData encode_client(const signal::ClientDataset& ds)
{
    const Standardizer s = fit_standardizer(ds);
    fl::ClientData c;
    c.client_id = ds.client_id;
    const auto train = ds.indices(signal::SplitTag::train);
    const auto valid = ds.indices(signal::SplitTag::valid);
    const auto test = ds.indices(signal::SplitTag::test);
    c.train_x = encode_rows(ds, train, s);
    c.train_y = labels_of(ds, train);
    c.valid_x = encode_rows(ds, valid, s);
    c.valid_y = labels_of(ds, valid);
    c.test_x = encode_rows(ds, test, s);
    c.test_y = labels_of(ds, test);
    return c;
}

std::vector<fl::ClientData> encode_clients(std::span<const signal::ClientDataset> datasets)
{
    std::vector<fl::ClientData> out;
    out.reserve(datasets.size());
    for (const auto& ds : datasets)
        out.push_back(encode_client(ds));
    return out;
}

} // namespace fedjam::pipeline
