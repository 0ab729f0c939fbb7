#include "mfl/torus_measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "mfl/error.hpp"
#include "mfl/sequence.hpp"
#include "mfl/summation.hpp"

namespace mfl {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;

// e^{-i pi r / M} for r in [0, 2M): the phases k * x_j of bin midpoints.
std::vector<cplx> midpoint_phases(std::size_t bins) {
    std::vector<cplx> table(2 * bins);
    for (std::size_t r = 0; r < 2 * bins; ++r) {
        const long double a = -kTwoPiL * static_cast<long double>(r) / (2.0L * static_cast<long double>(bins));
        table[r] = {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
    }
    return table;
}

cplx atom_phase(std::int64_t k, double position) {
    const long double a =
        std::fmod(-static_cast<long double>(k) * static_cast<long double>(position), kTwoPiL);
    return {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
}

cplx coefficient(const TorusMeasure& eta, std::int64_t k, const std::vector<cplx>& phases) {
    const auto M = static_cast<std::int64_t>(eta.bins());
    const double w = eta.bin_width();
    ComplexSum s;
    const auto& d = eta.density();
    for (std::int64_t j = 0; j < M; ++j) {
        if (d[j] == 0.0) continue;
        std::int64_t r = (k * (2 * j + 1)) % (2 * M);
        if (r < 0) r += 2 * M;
        s.add(d[j] * w * phases[static_cast<std::size_t>(r)]);
    }
    for (const Atom& a : eta.atoms()) s.add(a.mass * atom_phase(k, a.position));
    return s.value();
}

void check_resolution(const TorusMeasure& eta, std::uint64_t K) {
    if (K > eta.bins() / 2)
        throw Error(ErrorKind::resolution, "frequency " + std::to_string(K) + " beyond grid resolution " +
                                               std::to_string(eta.bins() / 2));
}

void check_pair(const TorusMeasure& eta, const TorusMeasure& nu) {
    if (eta.bins() != nu.bins()) throw Error(ErrorKind::grid_mismatch, "measures live on different grids");
    if (!(eta.total_mass() > 0.0) || !(nu.total_mass() > 0.0))
        throw Error(ErrorKind::zero_mass, "affinity needs measures of positive mass");
}

// Atom masses of both measures keyed by exact position.
std::map<double, std::pair<double, double>> paired_atoms(const TorusMeasure& eta, const TorusMeasure& nu,
                                                         double eta_scale, double nu_scale) {
    std::map<double, std::pair<double, double>> out;
    for (const Atom& a : eta.atoms()) out[a.position].first = a.mass * eta_scale;
    for (const Atom& a : nu.atoms()) out[a.position].second = a.mass * nu_scale;
    return out;
}

}  // namespace

TorusMeasure::TorusMeasure(std::size_t bins, std::vector<double> density, std::vector<Atom> atoms)
    : bins_(bins), density_(std::move(density)), atoms_(std::move(atoms)) {
    if (bins_ < 2) throw Error(ErrorKind::invalid_argument, "need at least 2 bins");
    if (density_.size() != bins_) throw Error(ErrorKind::invalid_argument, "density length != bins");
    for (const double v : density_)
        if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "negative or non-finite density");
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.position < b.position; });
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        if (!(a.position >= 0.0 && a.position < kTwoPi))
            throw Error(ErrorKind::invalid_argument, "atom position outside [0, 2pi)");
        if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw Error(ErrorKind::invalid_argument, "atom mass must be > 0");
        if (i > 0 && atoms_[i - 1].position == a.position)
            throw Error(ErrorKind::invalid_argument, "duplicate atom position");
    }
}

TorusMeasure TorusMeasure::uniform(std::size_t bins, double total_mass) {
    return TorusMeasure(bins, std::vector<double>(bins, total_mass / kTwoPi));
}

TorusMeasure TorusMeasure::point_mass(double position, double mass, std::size_t bins) {
    return TorusMeasure(bins, std::vector<double>(bins, 0.0), {{position, mass}});
}

double TorusMeasure::midpoint_of(std::size_t j, std::size_t bins) noexcept {
    return kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(bins);
}

double TorusMeasure::bin_width() const noexcept { return kTwoPi / static_cast<double>(bins_); }

double TorusMeasure::continuous_mass() const noexcept {
    CompensatedSum s;
    for (const double v : density_) s.add(v);
    return s.value() * bin_width();
}

double TorusMeasure::atomic_mass() const noexcept {
    CompensatedSum s;
    for (const Atom& a : atoms_) s.add(a.mass);
    return s.value();
}

double TorusMeasure::total_mass() const noexcept { return continuous_mass() + atomic_mass(); }

TorusMeasure TorusMeasure::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw Error(ErrorKind::invalid_argument, "scale must be > 0");
    std::vector<double> d = density_;
    for (double& v : d) v *= factor;
    std::vector<Atom> atoms = atoms_;
    for (Atom& a : atoms) a.mass *= factor;
    return TorusMeasure(bins_, std::move(d), std::move(atoms));
}

TorusMeasure TorusMeasure::normalized() const {
    const double total = total_mass();
    if (!(total > 0.0)) throw Error(ErrorKind::zero_mass, "cannot normalise a null measure");
    return scaled(1.0 / total);
}

TorusMeasure TorusMeasure::mixed(double a, const TorusMeasure& other, double b) const {
    if (bins_ != other.bins_) throw Error(ErrorKind::grid_mismatch, "measures live on different grids");
    if (a < 0.0 || b < 0.0) throw Error(ErrorKind::invalid_argument, "mixture weights must be >= 0");
    std::vector<double> d(bins_);
    for (std::size_t j = 0; j < bins_; ++j) d[j] = a * density_[j] + b * other.density_[j];
    std::vector<Atom> atoms;
    for (const auto& [pos, masses] : paired_atoms(*this, other, a, b))
        if (masses.first + masses.second > 0.0) atoms.push_back({pos, masses.first + masses.second});
    return TorusMeasure(bins_, std::move(d), std::move(atoms));
}

double affinity(const TorusMeasure& eta, const TorusMeasure& nu) {
    check_pair(eta, nu);
    const double se = 1.0 / eta.total_mass();
    const double sn = 1.0 / nu.total_mass();
    CompensatedSum bins;
    const auto& de = eta.density();
    const auto& dn = nu.density();
    for (std::size_t j = 0; j < eta.bins(); ++j) bins.add(std::sqrt((de[j] * se) * (dn[j] * sn)));
    CompensatedSum total;
    total.add(bins.value() * eta.bin_width());
    for (const auto& [pos, m] : paired_atoms(eta, nu, se, sn)) total.add(std::sqrt(m.first * m.second));
    return total.value();
}

double affinity_with_dominating(const TorusMeasure& eta, const TorusMeasure& nu, double t) {
    check_pair(eta, nu);
    if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::invalid_argument, "mixture parameter must lie in (0, 1)");
    const double se = 1.0 / eta.total_mass();
    const double sn = 1.0 / nu.total_mass();
    // sqrt(d eta / d lambda * d nu / d lambda) d lambda, term by term.
    auto term = [t](double fe, double fn) {
        const double l = t * fe + (1.0 - t) * fn;
        if (l <= 0.0) return 0.0;
        return std::sqrt((fe / l) * (fn / l)) * l;
    };
    CompensatedSum bins;
    const auto& de = eta.density();
    const auto& dn = nu.density();
    for (std::size_t j = 0; j < eta.bins(); ++j) bins.add(term(de[j] * se, dn[j] * sn));
    CompensatedSum total;
    total.add(bins.value() * eta.bin_width());
    for (const auto& [pos, m] : paired_atoms(eta, nu, se, sn)) total.add(term(m.first, m.second));
    return total.value();
}

double hellinger(const TorusMeasure& eta, const TorusMeasure& nu) {
    return std::sqrt(2.0 * std::max(0.0, 1.0 - affinity(eta, nu)));
}

std::complex<double> fourier_coeff(const TorusMeasure& eta, std::int64_t k) {
    check_resolution(eta, static_cast<std::uint64_t>(k < 0 ? -k : k));
    return coefficient(eta, k, midpoint_phases(eta.bins()));
}

double wiener_continuity_stat(const TorusMeasure& eta, std::uint64_t K) {
    check_resolution(eta, K);
    const auto phases = midpoint_phases(eta.bins());
    CompensatedSum s;
    for (std::uint64_t n = 0; n <= K; ++n) s.add(std::norm(coefficient(eta, static_cast<std::int64_t>(n), phases)));
    return s.value() / static_cast<double>(K + 1);
}

RajchmanProfile rajchman_profile(const TorusMeasure& eta, std::uint64_t K) {
    check_resolution(eta, K);
    const TorusMeasure p = eta.normalized();
    const auto phases = midpoint_phases(p.bins());
    RajchmanProfile out;
    out.magnitudes.resize(K + 1);
    for (std::uint64_t k = 0; k <= K; ++k)
        out.magnitudes[k] = std::abs(coefficient(p, static_cast<std::int64_t>(k), phases));
    out.tail_max.resize(K + 1);
    double run = 0.0;
    for (std::uint64_t k = K + 1; k-- > 0;) {
        run = std::max(run, out.magnitudes[k]);
        out.tail_max[k] = run;
    }
    out.upper_half_max = out.tail_max[K / 2];
    out.dirichlet_flag = out.upper_half_max > 1.0 - 1e-3;
    return out;
}

nlohmann::json to_json(const TorusMeasure& eta) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const Atom& a : eta.atoms()) atoms.push_back({{"pos", a.position}, {"mass", a.mass}});
    return {{"bins", eta.bins()}, {"density", eta.density()}, {"atoms", atoms}};
}

TorusMeasure measure_from_json(const nlohmann::json& j) {
    try {
        std::vector<Atom> atoms;
        if (j.contains("atoms"))
            for (const auto& a : j.at("atoms")) atoms.push_back({a.at("pos").get<double>(), a.at("mass").get<double>()});
        return TorusMeasure(j.at("bins").get<std::size_t>(), j.at("density").get<std::vector<double>>(),
                            std::move(atoms));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::format, std::string("measure json: ") + e.what());
    }
}

TorusMeasure load_measure(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::format, path.string() + ": " + e.what());
    }
    return measure_from_json(j);
}

void save_measure(const std::filesystem::path& path, const TorusMeasure& eta) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot open " + path.string());
    out << to_json(eta).dump() << '\n';
}

}  // namespace mfl
