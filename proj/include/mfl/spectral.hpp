#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mfl/sequence.hpp"
#include "mfl/torus_measure.hpp"

namespace mfl {

/// sigma_{g,n}: the measure rho_{g,n}(x) dx / 2pi, with
/// rho_{g,n}(x) = |n^{-1/2} sum_{t=0}^{n-1} g(t+1) e^{itx}|^2 sampled at bin
/// midpoints. The stored density is rho / 2pi, so bin masses follow the
/// TorusMeasure convention.
struct Periodogram {
    std::uint64_t n = 0;
    TorusMeasure measure;
    std::string source_label;

    /// rho_{g,n} at the midpoint of bin j.
    double rho(std::size_t j) const noexcept { return measure.density()[j] * kTwoPi; }
};

/// Smallest power of two >= max(2n, floor); a convenient grid for periodogram().
std::size_t periodogram_bins(std::uint64_t n, std::size_t floor = 0);

/// Zero-padded FFT of length M (bins >= 2n). Total mass equals
/// (1/n) sum |g|^2 up to rounding.
Periodogram periodogram(const BoundedSeq& g, std::uint64_t n, std::size_t bins, std::string source_label = "");

/// One lag of the finite-n consistency relation
///   F_n(k) = sigma_hat(k) + delta,  |delta| <= (k/n) sup|g|^2.
struct SpectralCoeffCheck {
    std::uint64_t k = 0;
    cplx sigma_hat;  // (1/n) sum_{j=0}^{n-1-k} g(j+k+1) conj(g(j+1))
    cplx F_n;        // correlation_table(g, n, k).values[k]
    cplx delta;      // (1/n) sum_{j=n-k}^{n-1} g(j+k+1) conj(g(j+1))
    double bound = 0.0;

    bool within_bound() const noexcept { return std::abs(delta) <= bound; }
};

SpectralCoeffCheck spectral_coeff_check(const BoundedSeq& g, std::uint64_t n, std::uint64_t k);

/// The same check for every lag 0..K, sharing one pass over g.
std::vector<SpectralCoeffCheck> spectral_coeff_checks(const BoundedSeq& g, std::uint64_t n, std::uint64_t K);

/// sigma_hat_{g,n}(k) for k = 0..K (truncated correlations, no edge terms).
std::vector<cplx> periodogram_coefficients(const BoundedSeq& g, std::uint64_t n, std::uint64_t K);

struct SpectralLimitDiagnostic {
    std::vector<std::uint64_t> n_grid;
    std::uint64_t K = 0;
    std::vector<std::vector<cplx>> rows;           // rows[i][k] = sigma_hat_{g, n_i}(k)
    std::vector<std::vector<double>> deviation;    // max_k |rows[i][k] - rows[j][k]|
    double tolerance = 0.0;
    bool single_limit_plausible = false;           // top half of the grid within tolerance
};

SpectralLimitDiagnostic spectral_limit_diagnostic(const BoundedSeq& g, const std::vector<std::uint64_t>& n_grid,
                                                  std::uint64_t K, double tolerance = 0.05);

/// Columns n, k, re, im.
void write_csv(std::ostream& out, const SpectralLimitDiagnostic& diag);

/// |D_h(phi)|^2 with D_h(phi) = sum_{l=1}^{h} e^{i l phi}.
double dirichlet_kernel_sq(std::uint64_t h, double phi) noexcept;

/// integral of |D_h(k theta)|^2 d eta; needs bins >= 8hk.
double dirichlet_energy(const TorusMeasure& eta, std::uint64_t h, std::uint64_t k);

}  // namespace mfl
