#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mfl/sequence.hpp"
#include "mfl/sieve.hpp"
#include "mfl/symbolic.hpp"

namespace mfl {

/// Hands out sieved windows [1, hi) per label, growing them on demand and
/// optionally persisting them as binary caches. Not thread-safe.
class SieveProvider {
public:
    SieveProvider() = default;
    explicit SieveProvider(std::filesystem::path cache_dir) : cache_dir_(std::move(cache_dir)) {}

    /// Window starting at 1 that covers at least [1, hi).
    const SignSeq& window(SeqLabel label, std::uint64_t hi);

    /// Cache file for a [1, hi) window of the given label.
    std::filesystem::path cache_path(SeqLabel label, std::uint64_t hi) const;

private:
    std::optional<std::filesystem::path> cache_dir_;
    std::map<SeqLabel, SignSeq> windows_;
};

/// (1/N) sum_{n<=N} mu(n) e^{i n theta}. mu must start at 1 and cover [1, N].
cplx davenport_sum(const SignSeq& mu, double theta, std::uint64_t N);
cplx davenport_sum(double theta, std::uint64_t N);

/// (1/N) sum_{n<=N} mu(n) prod_{a in A} mu^2(n+a) e^{i n theta}. The empty
/// shift set reproduces davenport_sum bit for bit.
cplx snmv_sum(const SignSeq& mu, const SupportSet& A, double theta, std::uint64_t N);
cplx snmv_sum(const SupportSet& A, double theta, std::uint64_t N);

/// (1/N) sum_{n<=N} prod_s f(n + a_s)^{i_s} for f = mu or lambda. Throws
/// pattern error when every exponent is 2 or the pattern is empty.
double chowla_correlation(const SignSeq& f, const Pattern& pattern, std::uint64_t N);
double chowla_correlation(const Pattern& pattern, std::uint64_t N, SeqLabel label = SeqLabel::mobius);

/// Exact integer sum_{j<=X} lambda(j) lambda(j+h).
std::int64_t liouville_two_point(const SignSeq& lambda, std::uint64_t h, std::uint64_t X);

/// Fraction of h in [1, H] with |sum_{j<=X} lambda(j) lambda(j+h)| <= delta X.
double mrt_average(const SignSeq& lambda, std::uint64_t H, std::uint64_t X, double delta);
double mrt_average(std::uint64_t H, std::uint64_t X, double delta);

/// |(1/X) sum_{j<=X} lambda(j) lambda(j+h)|.
double two_point_bound(const SignSeq& lambda, std::uint64_t h, std::uint64_t X);
double two_point_bound(std::uint64_t h, std::uint64_t X);

struct FwlgResult {
    double direct = 0.0;                // (1/N) sum_{n<=N} |sum_{l=1}^{h} g(n+kl)|^2
    std::optional<double> spectral;     // dirichlet_energy(periodogram(g on [1,N]), h, k)
    double edge_bound = 0.0;            // (2hk/N) h^2
};

/// g must start at 1 and cover [1, N + hk]. The spectral route needs an
/// FFT of length ~2N and is skipped when with_spectral is false.
FwlgResult fwlg_statistic(const SignSeq& g, std::uint64_t k, std::uint64_t h, std::uint64_t N,
                          bool with_spectral = true);
FwlgResult fwlg_statistic(std::uint64_t k, std::uint64_t h, std::uint64_t N, bool with_spectral = true);

/// (1/(H X)) sum_{x=X}^{2X-1} |sum_{x<k<=x+H} g(k)|; g covers [1, 2X + H).
double short_interval_average(const SignSeq& g, std::uint64_t H, std::uint64_t X);
double short_interval_average(std::uint64_t H, std::uint64_t X);

/// One harmonic of a function on the circle: coeff * e^{i k x}.
struct Harmonic {
    std::int64_t k;
    cplx coeff;
};

/// Per-N statistics plus decay indicators; serialised as the report JSON.
struct ExperimentReport {
    struct Point {
        std::uint64_t N;
        cplx value;
    };

    std::string id;
    nlohmann::json params = nlohmann::json::object();
    std::vector<Point> grid;
    nlohmann::json indicators = nlohmann::json::object();
    std::int64_t runtime_ms = 0;
    std::string input_checksum;

    nlohmann::json to_json() const;
    static ExperimentReport from_json(const nlohmann::json& j);
};

/// Standard decay indicators over the grid: final_abs, first_abs,
/// endpoint_decrease, monotone_nonincreasing.
nlohmann::json decay_indicators(const std::vector<ExperimentReport::Point>& grid);

/// (1/N) sum mu(n) f(n alpha) with f = sum_k c_k e^{i k x}, for each N in
/// the grid. The value is accumulated directly; the linear combination
/// sum_k c_k davenport_sum(k alpha, N) is carried in the indicators together
/// with the largest deviation between the two routes.
ExperimentReport rotation_disjointness(const SignSeq& mu, double alpha, const std::vector<Harmonic>& f,
                                       const std::vector<std::uint64_t>& N_grid);
ExperimentReport rotation_disjointness(double alpha, const std::vector<Harmonic>& f,
                                       const std::vector<std::uint64_t>& N_grid);

}  // namespace mfl
