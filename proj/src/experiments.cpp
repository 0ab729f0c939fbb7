#include "mfl/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "mfl/error.hpp"
#include "mfl/parallel.hpp"
#include "mfl/sieve_cache.hpp"
#include "mfl/spectral.hpp"
#include "mfl/summation.hpp"

namespace mfl {

namespace {

struct CplxAcc {
    ComplexSum s;
    void merge(const CplxAcc& o) { s.merge(o.s); }
};

struct MultiAcc {
    std::vector<ComplexSum> s;
    void merge(const MultiAcc& o) {
        if (s.size() < o.s.size()) s.resize(o.s.size());
        for (std::size_t i = 0; i < o.s.size(); ++i) s[i].merge(o.s[i]);
    }
};

struct IntAcc {
    std::int64_t v = 0;
    void merge(const IntAcc& o) { v += o.v; }
};

void require_window(const SignSeq& seq, std::uint64_t hi, const char* what) {
    if (seq.start() != 1 || !seq.covers(1, hi))
        throw Error(ErrorKind::invalid_range, std::string(what) + ": window must start at 1 and cover [1, " +
                                                  std::to_string(hi) + ")");
}

SignSeq provide(SeqLabel label, std::uint64_t hi) { return sieve(label, 1, std::max<std::uint64_t>(hi, 2)); }

}  // namespace

const SignSeq& SieveProvider::window(SeqLabel label, std::uint64_t hi) {
    if (auto it = windows_.find(label); it != windows_.end() && it->second.covers(1, hi)) return it->second;

    // Round up to whole segments so nearby requests share one cache file.
    const std::uint64_t rounded = (std::max<std::uint64_t>(hi, 2) + kSegmentSize - 1) / kSegmentSize * kSegmentSize + 1;
    std::optional<SignSeq> seq;
    if (cache_dir_) {
        const auto path = cache_path(label, rounded);
        if (std::filesystem::exists(path)) {
            SignSeq cached = read_cache(path);
            if (cached.label() != label || cached.start() != 1 || !cached.covers(1, rounded))
                throw Error(ErrorKind::format, path.string() + " does not hold the expected window");
            seq = std::move(cached);
        } else {
            seq = sieve(label, 1, rounded);
            write_cache(path, *seq);
        }
    } else {
        seq = sieve(label, 1, rounded);
    }
    windows_.insert_or_assign(label, std::move(*seq));
    return windows_.at(label);
}

std::filesystem::path SieveProvider::cache_path(SeqLabel label, std::uint64_t hi) const {
    const std::filesystem::path dir = cache_dir_.value_or(std::filesystem::path("."));
    return dir / (std::string(to_string(label)) + "_1_" + std::to_string(hi) + ".bin");
}

cplx snmv_sum(const SignSeq& mu, const SupportSet& A_in, double theta, std::uint64_t N) {
    if (N < 1) throw Error(ErrorKind::invalid_range, "N must be >= 1");
    const SupportSet A = make_support(A_in);
    const std::uint64_t reach = A.empty() ? 0 : A.back();
    require_window(mu, N + reach + 1, "snmv_sum");
    const auto total = sharded_reduce<CplxAcc>(1, N + 1, [&](std::uint64_t lo, std::uint64_t hi, CplxAcc& acc) {
        for (std::uint64_t n = lo; n < hi; ++n) {
            const int v = mu[n];
            if (v == 0) continue;
            bool alive = true;
            for (const std::uint64_t a : A)
                if (mu[n + a] == 0) {
                    alive = false;
                    break;
                }
            if (alive) acc.s.add(static_cast<double>(v) * cis(n, theta));
        }
    });
    return total.s.value() / static_cast<double>(N);
}

cplx snmv_sum(const SupportSet& A, double theta, std::uint64_t N) {
    const std::uint64_t reach = A.empty() ? 0 : *std::max_element(A.begin(), A.end());
    return snmv_sum(provide(SeqLabel::mobius, N + reach + 1), A, theta, N);
}

cplx davenport_sum(const SignSeq& mu, double theta, std::uint64_t N) { return snmv_sum(mu, {}, theta, N); }

cplx davenport_sum(double theta, std::uint64_t N) { return snmv_sum({}, theta, N); }

double chowla_correlation(const SignSeq& f, const Pattern& pattern, std::uint64_t N) {
    if (pattern.terms().empty()) throw Error(ErrorKind::pattern, "empty pattern");
    if (pattern.all_squared())
        throw Error(ErrorKind::pattern, "all exponents equal 2; use mirsky_cylinder_density for that case");
    if (N < 1) throw Error(ErrorKind::invalid_range, "N must be >= 1");
    require_window(f, N + pattern.max_shift() + 1, "chowla_correlation");
    const auto& terms = pattern.terms();
    const auto total = sharded_reduce<IntAcc>(1, N + 1, [&](std::uint64_t lo, std::uint64_t hi, IntAcc& acc) {
        for (std::uint64_t n = lo; n < hi; ++n) {
            int prod = 1;
            for (const auto& t : terms) {
                const int v = f[n + t.shift];
                prod *= t.exponent == 1 ? v : v * v;
                if (prod == 0) break;
            }
            acc.v += prod;
        }
    });
    return static_cast<double>(total.v) / static_cast<double>(N);
}

double chowla_correlation(const Pattern& pattern, std::uint64_t N, SeqLabel label) {
    return chowla_correlation(provide(label, N + pattern.max_shift() + 1), pattern, N);
}

std::int64_t liouville_two_point(const SignSeq& lambda, std::uint64_t h, std::uint64_t X) {
    if (X < 1) throw Error(ErrorKind::invalid_range, "X must be >= 1");
    require_window(lambda, X + h + 1, "liouville_two_point");
    const auto total = sharded_reduce<IntAcc>(1, X + 1, [&](std::uint64_t lo, std::uint64_t hi, IntAcc& acc) {
        for (std::uint64_t j = lo; j < hi; ++j) acc.v += lambda[j] * lambda[j + h];
    });
    return total.v;
}

double mrt_average(const SignSeq& lambda, std::uint64_t H, std::uint64_t X, double delta) {
    if (H < 1 || H > X) throw Error(ErrorKind::invalid_argument, "mrt_average needs 1 <= H <= X");
    if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorKind::invalid_argument, "delta must lie in (0, 1]");
    std::uint64_t good = 0;
    for (std::uint64_t h = 1; h <= H; ++h) {
        const std::int64_t s = liouville_two_point(lambda, h, X);
        if (static_cast<double>(s < 0 ? -s : s) <= delta * static_cast<double>(X)) ++good;
    }
    return static_cast<double>(good) / static_cast<double>(H);
}

double mrt_average(std::uint64_t H, std::uint64_t X, double delta) {
    return mrt_average(provide(SeqLabel::liouville, X + H + 1), H, X, delta);
}

double two_point_bound(const SignSeq& lambda, std::uint64_t h, std::uint64_t X) {
    if (h < 1) throw Error(ErrorKind::invalid_argument, "h must be >= 1");
    const std::int64_t s = liouville_two_point(lambda, h, X);
    return static_cast<double>(s < 0 ? -s : s) / static_cast<double>(X);
}

double two_point_bound(std::uint64_t h, std::uint64_t X) {
    return two_point_bound(provide(SeqLabel::liouville, X + h + 1), h, X);
}

FwlgResult fwlg_statistic(const SignSeq& g, std::uint64_t k, std::uint64_t h, std::uint64_t N, bool with_spectral) {
    if (k < 1 || h < 1) throw Error(ErrorKind::invalid_argument, "fwlg needs k, h >= 1");
    if (N < 8 * h * k) throw Error(ErrorKind::window_too_short, "fwlg needs N >= 8hk");
    const std::uint64_t span = h * k;
    require_window(g, N + span + 1, "fwlg_statistic");

    // W(n) = sum_{l=1}^{h} g(n + kl);  W(n) = W(n-k) - g(n) + g(n + hk).
    std::vector<std::int64_t> W(N + 1, 0);
    std::uint64_t squares = 0;
    for (std::uint64_t n = 1; n <= N; ++n) {
        std::int64_t w = 0;
        if (n <= k) {
            for (std::uint64_t l = 1; l <= h; ++l) w += g[n + k * l];
        } else {
            w = W[n - k] - g[n] + g[n + span];
        }
        W[n] = w;
        squares += static_cast<std::uint64_t>(w * w);
    }

    FwlgResult out;
    out.direct = static_cast<double>(squares) / static_cast<double>(N);
    out.edge_bound = 2.0 * static_cast<double>(span) / static_cast<double>(N) * static_cast<double>(h * h);
    if (with_spectral) {
        const auto pg = periodogram(BoundedSeq::from_signs(g.slice(1, N + 1)), N, periodogram_bins(N, 8 * span),
                                    std::string(to_string(g.label())));
        out.spectral = dirichlet_energy(pg.measure, h, k);
    }
    return out;
}

FwlgResult fwlg_statistic(std::uint64_t k, std::uint64_t h, std::uint64_t N, bool with_spectral) {
    return fwlg_statistic(provide(SeqLabel::mobius, N + h * k + 1), k, h, N, with_spectral);
}

double short_interval_average(const SignSeq& g, std::uint64_t H, std::uint64_t X) {
    if (H < 1 || H > X) throw Error(ErrorKind::invalid_argument, "short_interval_average needs 1 <= H <= X");
    require_window(g, 2 * X + H, "short_interval_average");
    // S(x) = sum_{x<k<=x+H} g(k), slid over x = X .. 2X-1.
    std::int64_t s = 0;
    for (std::uint64_t j = X + 1; j <= X + H; ++j) s += g[j];
    std::uint64_t total = 0;
    for (std::uint64_t x = X; x < 2 * X; ++x) {
        total += static_cast<std::uint64_t>(s < 0 ? -s : s);
        s += g[x + H + 1] - g[x + 1];
    }
    return static_cast<double>(total) / (static_cast<double>(H) * static_cast<double>(X));
}

double short_interval_average(std::uint64_t H, std::uint64_t X) {
    return short_interval_average(provide(SeqLabel::mobius, 2 * X + H + 1), H, X);
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json points = nlohmann::json::array();
    for (const Point& p : grid) points.push_back({{"N", p.N}, {"value_re", p.value.real()}, {"value_im", p.value.imag()}});
    return {{"id", id},
            {"params", params},
            {"grid", points},
            {"indicators", indicators},
            {"runtime_ms", runtime_ms},
            {"input_checksum", input_checksum},
            {"shard_plan", {{"shard_size", kShardSize}, {"segment_size", kSegmentSize}, {"merge", "index-order"}}}};
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& j) {
    try {
        ExperimentReport r;
        r.id = j.at("id").get<std::string>();
        r.params = j.value("params", nlohmann::json::object());
        for (const auto& p : j.at("grid"))
            r.grid.push_back({p.at("N").get<std::uint64_t>(), {p.at("value_re").get<double>(), p.at("value_im").get<double>()}});
        r.indicators = j.value("indicators", nlohmann::json::object());
        r.runtime_ms = j.value("runtime_ms", std::int64_t{0});
        r.input_checksum = j.value("input_checksum", std::string{});
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::format, std::string("report json: ") + e.what());
    }
}

nlohmann::json decay_indicators(const std::vector<ExperimentReport::Point>& grid) {
    nlohmann::json ind = nlohmann::json::object();
    if (grid.empty()) return ind;
    const double first = std::abs(grid.front().value);
    const double last = std::abs(grid.back().value);
    bool monotone = true;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (std::abs(grid[i].value) > std::abs(grid[i - 1].value)) monotone = false;
    ind["first_abs"] = first;
    ind["final_abs"] = last;
    ind["endpoint_decrease"] = grid.size() > 1 && last < first;
    ind["monotone_nonincreasing"] = monotone;
    return ind;
}

ExperimentReport rotation_disjointness(const SignSeq& mu, double alpha, const std::vector<Harmonic>& f,
                                       const std::vector<std::uint64_t>& N_grid) {
    ExperimentReport report;
    report.id = "rotation";
    nlohmann::json harmonics = nlohmann::json::array();
    for (const Harmonic& hm : f) harmonics.push_back({hm.k, hm.coeff.real(), hm.coeff.imag()});
    report.params = {{"alpha", alpha}, {"harmonics", harmonics}};

    std::vector<double> freqs;
    for (const Harmonic& hm : f) freqs.push_back(wrap_angle(static_cast<double>(hm.k) * alpha));

    nlohmann::json linear = nlohmann::json::array();
    double worst = 0.0;
    for (const std::uint64_t N : N_grid) {
        require_window(mu, N + 1, "rotation_disjointness");
        // one pass, one compensated sum per harmonic
        const auto direct = sharded_reduce<MultiAcc>(1, N + 1, [&](std::uint64_t lo, std::uint64_t hi, MultiAcc& acc) {
            acc.s.resize(f.size());
            for (std::uint64_t n = lo; n < hi; ++n) {
                const int v = mu[n];
                if (v == 0) continue;
                for (std::size_t i = 0; i < f.size(); ++i) acc.s[i].add(static_cast<double>(v) * cis(n, freqs[i]));
            }
        });
        ComplexSum value, combo;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const cplx s_i = i < direct.s.size() ? direct.s[i].value() : cplx{};
            value.add(f[i].coeff * (s_i / static_cast<double>(N)));
            combo.add(f[i].coeff * davenport_sum(mu, freqs[i], N));
        }
        worst = std::max(worst, std::abs(value.value() - combo.value()));
        linear.push_back({{"N", N}, {"value_re", combo.value().real()}, {"value_im", combo.value().imag()}});
        report.grid.push_back({N, value.value()});
    }
    report.indicators = decay_indicators(report.grid);
    report.indicators["linear_combination"] = linear;
    report.indicators["linearity_max_deviation"] = worst;
    return report;
}

ExperimentReport rotation_disjointness(double alpha, const std::vector<Harmonic>& f,
                                       const std::vector<std::uint64_t>& N_grid) {
    const std::uint64_t top = N_grid.empty() ? 1 : *std::max_element(N_grid.begin(), N_grid.end());
    return rotation_disjointness(provide(SeqLabel::mobius, top + 1), alpha, f, N_grid);
}

}  // namespace mfl
