#include "fedjam/pipeline/pca.hpp"

#include "fedjam/error.hpp"
#include "fedjam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fedjam::pipeline {

void jacobi_eigen(const nn::Matrix& symmetric, std::vector<double>& values, nn::Matrix& vectors)
{
    const std::size_t n = symmetric.rows;
    nn::Matrix a = symmetric;
    nn::Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i)
        v(i, i) = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += a(p, q) * a(p, q);
        if (off < 1e-300)
            break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0)
                    continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
    values.resize(n);
    vectors = nn::Matrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        values[c] = a(order[c], order[c]);
        for (std::size_t r = 0; r < n; ++r)
            vectors(r, c) = v(r, order[c]);
    }
}

namespace {

// Columns of q (d x b, stored column-major as b vectors of length d).
using Basis = std::vector<std::vector<double>>;

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

void orthonormalize(Basis& q, Rng& rng)
{
    std::normal_distribution<double> normal;
    for (std::size_t c = 0; c < q.size(); ++c) {
        for (int attempt = 0; attempt < 4; ++attempt) {
            const double before = std::sqrt(dot(q[c], q[c]));
            // Two Gram-Schmidt passes keep the basis orthogonal to working precision.
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t p = 0; p < c; ++p) {
                    const double h = dot(q[p], q[c]);
                    for (std::size_t i = 0; i < q[c].size(); ++i)
                        q[c][i] -= h * q[p][i];
                }
            const double norm = std::sqrt(dot(q[c], q[c]));
            if (norm > 1e-10 * before && norm > 1e-300) {
                for (double& x : q[c])
                    x /= norm;
                break;
            }
            // Column collapsed into the span of earlier ones: restart it randomly.
            for (double& x : q[c])
                x = normal(rng);
        }
    }
}

// y = C x with C = Xc^T Xc / (n-1), never formed.
void apply_covariance(const nn::Matrix& xc, std::span<const double> x, std::span<double> y, std::vector<double>& tmp)
{
    const std::size_t n = xc.rows, d = xc.cols;
    tmp.assign(n, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        tmp[r] = dot(xc.row(r), x);
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = xc.row(r);
        for (std::size_t j = 0; j < d; ++j)
            y[j] += tmp[r] * row[j];
    }
    const double inv = 1.0 / static_cast<double>(n - 1);
    for (double& v : y)
        v *= inv;
}

} // namespace

PcaResult principal_components(const nn::Matrix& data, std::size_t k, const PcaOptions& options)
{
    const std::size_t n = data.rows, d = data.cols;
    if (n < 2)
        throw DomainError("pca: need at least two observations");
    if (k == 0 || k > d)
        throw DomainError("pca: component count must lie in [1, d]");

    nn::Matrix xc = data;
    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < d; ++j)
            mean[j] += data(r, j);
    for (double& m : mean)
        m /= static_cast<double>(n);
    double total_var = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < d; ++j) {
            xc(r, j) -= mean[j];
            total_var += xc(r, j) * xc(r, j);
        }
    total_var /= static_cast<double>(n - 1);

    PcaResult res;
    res.components = nn::Matrix(k, d);
    res.eigenvalues.assign(k, 0.0);
    res.explained_ratio.assign(k, 0.0);
    res.projections = nn::Matrix(n, k);
    if (!(total_var > 0.0))
        return res;

    const std::size_t b = std::min(d, k + 6);
    Rng rng(0x9ca5eedULL);
    std::normal_distribution<double> normal;
    Basis q(b, std::vector<double>(d));
    for (auto& col : q)
        for (double& x : col)
            x = normal(rng);
    orthonormalize(q, rng);

    Basis z(b, std::vector<double>(d));
    std::vector<double> tmp;
    std::vector<double> ritz;
    nn::Matrix rot;
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        res.iterations = it;
        for (std::size_t c = 0; c < b; ++c)
            apply_covariance(xc, q[c], z[c], tmp);
        // Rayleigh-Ritz on span(q).
        nn::Matrix t(b, b);
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = i; j < b; ++j)
                t(i, j) = t(j, i) = dot(q[i], z[j]);
        jacobi_eigen(t, ritz, rot);
        Basis qr(b, std::vector<double>(d, 0.0));
        Basis zr(b, std::vector<double>(d, 0.0));
        for (std::size_t c = 0; c < b; ++c)
            for (std::size_t s = 0; s < b; ++s) {
                const double w = rot(s, c);
                for (std::size_t i = 0; i < d; ++i) {
                    qr[c][i] += w * q[s][i];
                    zr[c][i] += w * z[s][i];
                }
            }
        double worst = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            double r2 = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double e = zr[c][i] - ritz[c] * qr[c][i];
                r2 += e * e;
            }
            worst = std::max(worst, std::sqrt(r2));
        }
        q = std::move(qr);
        if (worst <= options.tolerance * std::max(ritz[0], 1e-300))
            break;
        q = std::move(zr);
        orthonormalize(q, rng);
    }

    for (std::size_t c = 0; c < k; ++c) {
        auto& v = q[c];
        const auto big = std::max_element(v.begin(), v.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
        const double sign = *big < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < d; ++i)
            res.components(c, i) = sign * v[i];
        res.eigenvalues[c] = std::max(0.0, ritz[c]);
        res.explained_ratio[c] = std::min(1.0, res.eigenvalues[c] / total_var);
    }
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < k; ++c)
            res.projections(r, c) = dot(xc.row(r), res.components.row(c));
    return res;
}

PcaDiagnostic pca_diagnostic(std::span<const signal::ClientDataset> clients, std::size_t n_components)
{
    std::size_t rows = 0;
    std::size_t q_len = 0;
    for (const auto& ds : clients) {
        if (rows > 0 && ds.q_len != q_len && !ds.observations.empty())
            throw ShapeError("pca_diagnostic: clients disagree on q_len");
        if (!ds.observations.empty())
            q_len = ds.q_len;
        rows += ds.observations.size();
    }
    if (rows < 2)
        throw DomainError("pca_diagnostic: need at least two observations");

    const std::size_t d = 2 * q_len;
    nn::Matrix x(rows, d);
    PcaDiagnostic out;
    std::size_t r = 0;
    for (const auto& ds : clients)
        for (const auto& obs : ds.observations) {
            auto row = x.row(r++);
            for (std::size_t j = 0; j < q_len; ++j) {
                row[2 * j] = obs.iq[j].real();
                row[2 * j + 1] = obs.iq[j].imag();
            }
            out.client_ids.push_back(ds.client_id);
        }

    for (std::size_t j = 0; j < d; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < rows; ++i)
            m += x(i, j);
        m /= static_cast<double>(rows);
        double v = 0.0;
        for (std::size_t i = 0; i < rows; ++i)
            v += (x(i, j) - m) * (x(i, j) - m);
        const double sd = std::sqrt(v / static_cast<double>(rows - 1));
        for (std::size_t i = 0; i < rows; ++i)
            x(i, j) = sd > 0.0 ? (x(i, j) - m) / sd : 0.0;
    }

    PcaResult p = principal_components(x, n_components);
    out.projections = std::move(p.projections);
    out.explained_ratio = std::move(p.explained_ratio);
    return out;
}

} // namespace fedjam::pipeline
