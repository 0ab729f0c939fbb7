#include "mfl/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "mfl/error.hpp"
#include "mfl/fft.hpp"
#include "mfl/parallel.hpp"
#include "mfl/summation.hpp"

namespace mfl {

namespace {

struct LagSums {
    std::vector<ComplexSum> sums;
    void merge(const LagSums& other) {
        if (sums.size() < other.sums.size()) sums.resize(other.sums.size());
        for (std::size_t k = 0; k < other.sums.size(); ++k) sums[k].merge(other.sums[k]);
    }
};

constexpr double kPi = kTwoPi / 2.0;

}  // namespace

std::size_t periodogram_bins(std::uint64_t n, std::size_t floor) {
    return std::bit_ceil(std::max<std::size_t>(2 * n, floor));
}

Periodogram periodogram(const BoundedSeq& g, std::uint64_t n, std::size_t bins, std::string source_label) {
    if (n < 2) throw Error(ErrorKind::invalid_argument, "periodogram needs n >= 2");
    if (bins < 2 * n) throw Error(ErrorKind::grid_too_coarse, "periodogram needs bins >= 2n");

    // Half-bin phase shift moves the DFT grid onto bin midpoints.
    std::vector<cplx> x(bins, cplx{});
    const auto s = g.sample(1, n);
    const double half_bin = kPi / static_cast<double>(bins);
    for (std::uint64_t t = 0; t < n; ++t) x[t] = s[t] * cis(t, half_bin);
    const auto S = dft(x, FftSign::backward);

    std::vector<double> density(bins);
    const double scale = 1.0 / (static_cast<double>(n) * kTwoPi);
    for (std::size_t j = 0; j < bins; ++j) density[j] = std::norm(S[j]) * scale;
    return {n, TorusMeasure(bins, std::move(density)), std::move(source_label)};
}

std::vector<cplx> periodogram_coefficients(const BoundedSeq& g, std::uint64_t n, std::uint64_t K) {
    if (K >= n) throw Error(ErrorKind::lag_too_large, "need K < n");
    // sum_{j=0}^{n-1-k} g(j+k+1) conj(g(j+1)), sharded over the base index j+1.
    const auto sums = sharded_reduce<LagSums>(1, n + 1, [&](std::uint64_t lo, std::uint64_t hi, LagSums& acc) {
        const std::uint64_t top = std::min(n, hi - 1 + K);
        const auto s = g.sample(lo, top - lo + 1);
        acc.sums.resize(K + 1);
        for (std::uint64_t i = lo; i < hi; ++i) {
            const cplx base = std::conj(s[i - lo]);
            const std::uint64_t kmax = std::min(K, n - i);
            for (std::uint64_t k = 0; k <= kmax; ++k) acc.sums[k].add(s[i - lo + k] * base);
        }
    });
    std::vector<cplx> out(K + 1);
    for (std::uint64_t k = 0; k <= K; ++k)
        out[k] = k < sums.sums.size() ? sums.sums[k].value() / static_cast<double>(n) : cplx{};
    return out;
}

std::vector<SpectralCoeffCheck> spectral_coeff_checks(const BoundedSeq& g, std::uint64_t n, std::uint64_t K) {
    if (K >= n) throw Error(ErrorKind::lag_too_large, "need k < n");
    const auto table = correlation_table(g, n, K);
    const auto sigma = periodogram_coefficients(g, n, K);
    const double B2 = g.sup_bound() * g.sup_bound();

    // Edge terms j = n-k .. n-1 only touch g on [n-K+1, n+K].
    const std::uint64_t edge_lo = n - K + 1;
    const auto s = g.sample(edge_lo, 2 * K);
    std::vector<SpectralCoeffCheck> out(K + 1);
    for (std::uint64_t k = 0; k <= K; ++k) {
        ComplexSum edge;
        for (std::uint64_t j = n - k; j < n; ++j) edge.add(s[j + k + 1 - edge_lo] * std::conj(s[j + 1 - edge_lo]));
        out[k] = {k, sigma[k], table.values[k], edge.value() / static_cast<double>(n),
                  static_cast<double>(k) * B2 / static_cast<double>(n)};
    }
    return out;
}

SpectralCoeffCheck spectral_coeff_check(const BoundedSeq& g, std::uint64_t n, std::uint64_t k) {
    if (k >= n) throw Error(ErrorKind::lag_too_large, "need k < n");
    return spectral_coeff_checks(g, n, k).back();
}

SpectralLimitDiagnostic spectral_limit_diagnostic(const BoundedSeq& g, const std::vector<std::uint64_t>& n_grid,
                                                  std::uint64_t K, double tolerance) {
    SpectralLimitDiagnostic d;
    d.n_grid = n_grid;
    d.K = K;
    d.tolerance = tolerance;
    for (const std::uint64_t n : n_grid) {
        if (n < 2 * K || n < 2) throw Error(ErrorKind::invalid_argument, "every grid point must be >= 2K");
        d.rows.push_back(periodogram_coefficients(g, n, K));
    }
    const std::size_t m = n_grid.size();
    d.deviation.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            double dev = 0.0;
            for (std::uint64_t k = 0; k <= K; ++k) dev = std::max(dev, std::abs(d.rows[i][k] - d.rows[j][k]));
            d.deviation[i][j] = d.deviation[j][i] = dev;
        }
    d.single_limit_plausible = true;
    for (std::size_t i = m / 2; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (!(d.deviation[i][j] < tolerance)) d.single_limit_plausible = false;
    return d;
}

void write_csv(std::ostream& out, const SpectralLimitDiagnostic& diag) {
    out << "n,k,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < diag.n_grid.size(); ++i)
        for (std::uint64_t k = 0; k <= diag.K; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", diag.rows[i][k].real(), diag.rows[i][k].imag());
            out << diag.n_grid[i] << ',' << k << ',' << buf << '\n';
        }
}

double dirichlet_kernel_sq(std::uint64_t h, double phi) noexcept {
    const double s = std::sin(0.5 * phi);
    if (std::abs(s) > 1e-4) {
        const double r = std::sin(0.5 * static_cast<double>(h) * phi) / s;
        return r * r;
    }
    ComplexSum d;
    for (std::uint64_t l = 1; l <= h; ++l) d.add(cis(l, phi));
    return std::norm(d.value());
}

double dirichlet_energy(const TorusMeasure& eta, std::uint64_t h, std::uint64_t k) {
    if (h < 1 || k < 1) throw Error(ErrorKind::invalid_argument, "dirichlet_energy needs h, k >= 1");
    const std::size_t M = eta.bins();
    if (M / 8 < h * k) throw Error(ErrorKind::grid_too_coarse, "dirichlet_energy needs bins >= 8hk");

    const double w = eta.bin_width();
    const auto& d = eta.density();
    CompensatedSum s;
    for (std::size_t j = 0; j < M; ++j) {
        if (d[j] == 0.0) continue;
        // k * x_j = pi * r / M with r = k (2j+1) mod 2M
        const std::uint64_t r = (k * (2 * j + 1)) % (2 * M);
        s.add(d[j] * w * dirichlet_kernel_sq(h, kPi * static_cast<double>(r) / static_cast<double>(M)));
    }
    for (const Atom& a : eta.atoms()) s.add(a.mass * dirichlet_kernel_sq(h, wrap_angle(static_cast<double>(k) * a.position)));
    return s.value();
}

}  // namespace mfl
