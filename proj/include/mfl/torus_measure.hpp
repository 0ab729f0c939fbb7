#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

namespace mfl {

inline constexpr std::size_t kDefaultBins = 4096;

struct Atom {
    double position;  // in [0, 2pi)
    double mass;      // > 0
};

/// Finite positive measure on [0, 2pi): a bin-wise constant density
/// (mass of bin j = density[j] * 2pi / bins) plus a list of atoms. Atoms are
/// kept sorted by position.
class TorusMeasure {
public:
    TorusMeasure(std::size_t bins, std::vector<double> density, std::vector<Atom> atoms = {});

    static TorusMeasure uniform(std::size_t bins = kDefaultBins, double total_mass = 1.0);
    static TorusMeasure point_mass(double position, double mass = 1.0, std::size_t bins = kDefaultBins);
    /// Density sampled at bin midpoints.
    template <class F>
    static TorusMeasure from_density(F&& density, std::size_t bins = kDefaultBins) {
        std::vector<double> d(bins);
        for (std::size_t j = 0; j < bins; ++j) d[j] = density(midpoint_of(j, bins));
        return TorusMeasure(bins, std::move(d));
    }

    static double midpoint_of(std::size_t j, std::size_t bins) noexcept;

    std::size_t bins() const noexcept { return bins_; }
    double bin_width() const noexcept;
    double midpoint(std::size_t j) const noexcept { return midpoint_of(j, bins_); }
    const std::vector<double>& density() const noexcept { return density_; }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }

    double continuous_mass() const noexcept;
    double atomic_mass() const noexcept;
    double total_mass() const noexcept;

    /// Every density value and atom mass multiplied by factor > 0.
    TorusMeasure scaled(double factor) const;
    /// Probability measure; throws zero-mass for a null measure.
    TorusMeasure normalized() const;

    /// a * this + b * other on the same grid; atoms at equal positions merge.
    TorusMeasure mixed(double a, const TorusMeasure& other, double b) const;

private:
    std::size_t bins_;
    std::vector<double> density_;
    std::vector<Atom> atoms_;
};

/// Affinity G of the normalised measures, with dominating measure
/// (eta + nu) / 2: bin-wise sqrt(f_eta f_nu) plus sqrt(m_eta m_nu) over atoms
/// sharing the exact same position. Both measures must share a grid.
double affinity(const TorusMeasure& eta, const TorusMeasure& nu);

/// The same integral computed against the dominating measure
/// t * eta + (1 - t) * nu (normalised), 0 < t < 1.
double affinity_with_dominating(const TorusMeasure& eta, const TorusMeasure& nu, double t);

/// sqrt(2 (1 - G)).
double hellinger(const TorusMeasure& eta, const TorusMeasure& nu);

/// integral of e^{-ikx} d eta, with the density integrated by the midpoint
/// rule. Needs |k| <= bins / 2.
std::complex<double> fourier_coeff(const TorusMeasure& eta, std::int64_t k);

/// (1 / (K + 1)) sum_{n=0..K} |eta^(n)|^2.
double wiener_continuity_stat(const TorusMeasure& eta, std::uint64_t K);

struct RajchmanProfile {
    std::vector<double> magnitudes;  // |eta^(k)| of the normalised measure, k = 0..K
    std::vector<double> tail_max;    // tail_max[k] = max_{j >= k} magnitudes[j]
    double upper_half_max = 0.0;     // max over k in [K/2, K]
    bool dirichlet_flag = false;     // upper_half_max > 1 - 1e-3
};

RajchmanProfile rajchman_profile(const TorusMeasure& eta, std::uint64_t K);

nlohmann::json to_json(const TorusMeasure& eta);
TorusMeasure measure_from_json(const nlohmann::json& j);
TorusMeasure load_measure(const std::filesystem::path& path);
void save_measure(const std::filesystem::path& path, const TorusMeasure& eta);

}  // namespace mfl
