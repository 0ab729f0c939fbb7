// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <cfloat>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "mfl/error.hpp"
#include "mfl/experiments.hpp"
#include "mfl/parallel.hpp"
#include "mfl/runner.hpp"
#include "mfl/sequence.hpp"
#include "mfl/sieve.hpp"
#include "mfl/spectral.hpp"
#include "mfl/symbolic.hpp"
#include "mfl/torus_measure.hpp"
#include "oracle/oracle.hpp"

#ifndef MFL_SOURCE_DIR
#define MFL_SOURCE_DIR "."
#endif

using namespace mfl;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// a criterion reports ok plus a short detail string
struct Verdict {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        } else if (!cond) {
            detail += "; " + what;
        }
    }
};

std::filesystem::path source_dir() { return MFL_SOURCE_DIR; }

std::filesystem::path scratch(const std::string& name) {
    const auto d = std::filesystem::temp_directory_path() / ("mfl_acceptance_" + name);
    std::filesystem::remove_all(d);
    return d;
}

nlohmann::json reference() {
    std::ifstream in(source_dir() / "tests/golden/reference.json");
    if (!in) throw std::runtime_error("missing tests/golden/reference.json");
    return nlohmann::json::parse(in);
}

BoundedSeq random_seq(std::mt19937_64& rng, std::size_t n, double bound) {
    std::uniform_real_distribution<double> r(0.0, bound), a(0.0, kTwoPi);
    std::vector<cplx> s(n);
    for (auto& v : s) v = std::polar(r(rng), a(rng));
    return BoundedSeq::from_samples(std::move(s), bound);
}

TorusMeasure random_measure(std::mt19937_64& rng, std::size_t bins) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> d(bins);
    for (auto& v : d) v = u(rng) < 0.3 ? 0.0 : u(rng);
    std::vector<Atom> atoms;
    const int n_atoms = static_cast<int>(rng() % 4);
    for (int i = 0; i < n_atoms; ++i) atoms.push_back({kTwoPi * static_cast<double>(rng() % 64) / 64.0, 0.1 + u(rng)});
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.position < b.position; });
    atoms.erase(std::unique(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.position == b.position; }),
                atoms.end());
    if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; }) && atoms.empty()) d[0] = 1.0;
    return TorusMeasure(bins, std::move(d), std::move(atoms));
}

// ---- 1
Verdict sieve_exactness() {
    Verdict v;
    const auto t0 = Clock::now();
    const std::uint64_t N = 1'000'000;
    const auto mu = sieve(SeqLabel::mobius, 1, N + 1);
    const auto la = sieve(SeqLabel::liouville, 1, N + 1);
    const auto sq = sieve(SeqLabel::squarefree, 1, N + 1);
    const auto lin = oracle::linear_sieve(N);
    std::uint64_t bad = 0;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const auto f = factor_oracle(n);
        bool repeated = false;
        for (std::size_t i = 1; i < f.size(); ++i) repeated |= f[i] == f[i - 1];
        const int omega = static_cast<int>(f.size());
        const int want_la = omega % 2 ? -1 : 1;
        const int want_mu = repeated ? 0 : want_la;
        bad += mu[n] != want_mu || la[n] != want_la || sq[n] != (repeated ? 0 : 1);
        bad += mu[n] != lin.mu[n] || la[n] != lin.lambda[n] || sq[n] != lin.mu2[n];
    }
    v.require(bad == 0, std::to_string(bad) + " mismatches against the factorisation oracle");

    const std::uint64_t top = 100'000'000, chunk = 10'000'000;
    std::uint64_t broken = 0;
    for (std::uint64_t lo = 1; lo <= top; lo += chunk) {
        const std::uint64_t hi = std::min(top + 1, lo + chunk);
        const auto m = sieve(SeqLabel::mobius, lo, hi);
        const auto l = sieve(SeqLabel::liouville, lo, hi);
        const auto s = sieve(SeqLabel::squarefree, lo, hi);
        for (std::uint64_t n = lo; n < hi; ++n) broken += m[n] != l[n] * s[n];
    }
    v.require(broken == 0, std::to_string(broken) + " violations of mu = lambda mu^2");
    const double secs = seconds_since(t0);
    v.require(secs < 60.0, fmt("took %.1f s", secs));
    if (v.ok) v.detail = fmt("[1, 1e6] exact, identity on [1, 1e8], %.1f s", secs);
    return v;
}

// ---- 2, 3
Verdict squarefree_density() {
    Verdict v;
    const auto basis = primes_upto(10'000);
    const auto est = mirsky_cylinder_density({0}, {}, basis, 10'000'000);
    const double err = std::abs(est.empirical - est.product_estimate);
    v.require(err <= 2e-3, fmt("|%.7f - %.7f| > 2e-3", est.empirical, est.product_estimate));
    const double frozen = reference().at("squarefree_count_1e7").get<double>() / 1e7;
    v.require(est.empirical == frozen, "count differs from the frozen oracle count");
    if (v.ok) v.detail = fmt("empirical %.7f, product %.7f, gap %.2e", est.empirical, est.product_estimate, err);
    return v;
}

Verdict mirsky_pair() {
    Verdict v;
    const auto basis = primes_upto(10'000);
    const auto est = mirsky_cylinder_density({0, 1}, {}, basis, 10'000'000);
    const double err = std::abs(est.empirical - est.product_estimate);
    v.require(err <= 5e-3, fmt("|%.7f - %.7f| > 5e-3", est.empirical, est.product_estimate));
    const double frozen = reference().at("squarefree_pairs_1e7").get<double>() / 1e7;
    v.require(est.empirical == frozen, "pair count differs from the frozen oracle count");
    if (v.ok) v.detail = fmt("empirical %.7f, product %.7f, gap %.2e", est.empirical, est.product_estimate, err);
    return v;
}

// ---- 4
Verdict delta_bound() {
    Verdict v;
    std::mt19937_64 rng(4);
    std::uint64_t checked = 0, over = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double bound = 0.5 + 2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto g = random_seq(rng, 10'000 + 101, bound);
        for (const std::uint64_t n : {1000u, 10'000u}) {
            for (const auto& r : spectral_coeff_checks(g, n, 100)) {
                ++checked;
                over += !(std::abs(r.delta) <= r.bound);
                over += std::abs(r.F_n - r.sigma_hat - r.delta) > 1e-12;
            }
        }
    }
    v.require(over == 0, std::to_string(over) + " of " + std::to_string(checked) + " lags over the bound");
    std::uint64_t not_equal = 0;
    for (const std::uint64_t n : {1000u, 10'000u})
        for (const auto& r : spectral_coeff_checks(BoundedSeq::constant(1.0), n, 100)) not_equal += std::abs(r.delta) != r.bound;
    v.require(not_equal == 0, std::to_string(not_equal) + " lags where g = 1 misses equality");
    if (v.ok) v.detail = std::to_string(checked) + " lags within k/n sup^2, equality for g = 1";
    return v;
}

// ---- 5
Verdict parseval() {
    Verdict v;
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::uint64_t n = 2 + rng() % 5000;
        const auto g = random_seq(rng, n, 1.0 + (rng() % 3));
        long double s = 0;
        for (std::uint64_t t = 1; t <= n; ++t) s += std::norm(g(t));
        const double want = static_cast<double>(s / n);
        const auto pg = periodogram(g, n, periodogram_bins(n));
        worst = std::max(worst, std::abs(pg.measure.total_mass() - want) / want);
    }
    v.require(worst <= 1e-8, fmt("relative error %.3e", worst));
    if (v.ok) v.detail = fmt("worst relative error %.2e", worst);
    return v;
}

// ---- 6
Verdict affinity_axioms() {
    Verdict v;
    std::mt19937_64 rng(6);
    double self_err = 0.0, mix_err = 0.0, hell_err = 0.0;
    bool range = true, symmetric = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto eta = random_measure(rng, 64), nu = random_measure(rng, 64);
        const double G = affinity(eta, nu);
        range &= G >= 0.0 && G <= 1.0;
        symmetric &= affinity(nu, eta) == G;
        self_err = std::max(self_err, std::abs(affinity(eta, eta) - 1.0));
        for (const double t : {0.3, 0.5, 0.7}) mix_err = std::max(mix_err, std::abs(affinity_with_dominating(eta, nu, t) - G));
        const double H = hellinger(eta, nu);
        hell_err = std::max(hell_err, std::abs(H * H - 2.0 * (1.0 - G)));
    }
    v.require(self_err <= 1e-10, fmt("G(eta, eta) off by %.2e", self_err));
    v.require(range, "G outside [0, 1]");
    v.require(symmetric, "G not symmetric");
    v.require(mix_err <= 1e-10, fmt("dominating-measure dependence %.2e", mix_err));
    v.require(hell_err <= 8 * DBL_EPSILON, fmt("H^2 vs 2(1-G) off by %.2e", hell_err));

    std::vector<double> a(128, 0.0), b(128, 0.0);
    for (int j = 0; j < 64; ++j) a[j] = 1.0 + j;
    for (int j = 64; j < 128; ++j) b[j] = 2.0;
    v.require(affinity(TorusMeasure(128, a, {{1.0, 1.0}}), TorusMeasure(128, b, {{2.0, 1.0}})) == 0.0,
              "disjoint supports give G != 0");
    v.require(affinity(TorusMeasure::uniform(128), TorusMeasure::point_mass(0.0, 1.0, 128)) == 0.0,
              "atom against density gives G != 0");
    if (v.ok) v.detail = fmt("1000 pairs; self %.1e, mixtures %.1e, Hellinger %.1e", self_err, mix_err, hell_err);
    return v;
}

// ---- 7
// Box of width w centred at c, as a density on the grid.
TorusMeasure box(double c, double w, std::size_t bins) {
    return TorusMeasure::from_density(
        [=](double x) {
            double d = std::abs(x - c);
            d = std::min(d, kTwoPi - d);
            return d < w / 2 ? 1.0 / w : 0.0;
        },
        bins);
}

Verdict upper_semicontinuity() {
    Verdict v;
    const std::size_t bins = std::size_t{1} << 16;
    const std::vector<std::uint64_t> grid{2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    double worst = -1.0;
    auto check = [&](const char* name, const TorusMeasure& p, const TorusMeasure& q, double limit, std::uint64_t n) {
        const double G = affinity(p, q);
        worst = std::max(worst, G - limit);
        v.require(G <= limit + 1e-6, std::string(name) + fmt(" n=%.0f: G_n = %.9f > G = %.9f", double(n), G, limit));
    };
    const auto u = TorusMeasure::uniform(bins);
    for (const std::uint64_t n : grid) {
        const double w = 1.0 / static_cast<double>(n);
        // oscillating density against the uniform law: weak limit uniform, G = 1
        const auto osc = TorusMeasure::from_density([n](double x) { return (1.0 + std::cos(n * x)) / kTwoPi; }, bins);
        check("oscillation", u, osc, 1.0, n);
        // delta_1 and delta_4 smoothed at scale 1/n: G = 0
        check("separated", box(1.0, w, bins), box(4.0, w, bins), 0.0, n);
        // the same atom smoothed twice: G = 1
        check("equal", box(2.5, w, bins), box(2.5, w, bins), 1.0, n);
    }
    // closed form of the oscillating family: (1/2pi) int sqrt(1 + cos nx) dx = 2 sqrt2 / pi
    const auto osc = TorusMeasure::from_density([](double x) { return (1.0 + std::cos(64 * x)) / kTwoPi; }, bins);
    const double closed = 2.0 * std::sqrt(2.0) / M_PI;
    v.require(std::abs(affinity(u, osc) - closed) < 1e-6, fmt("oscillation G = %.9f, closed form %.9f", affinity(u, osc), closed));
    if (v.ok) v.detail = fmt("%.0f grid points x 3 families, max G_n - G = %.3e", double(grid.size()), worst);
    return v;
}

// ---- 8
Verdict single_frequencies() {
    Verdict v;
    double worst = 0.0;
    for (const auto [a, b] : {std::pair{0.5, 1.7}, {2.0, 3.0001}, {0.1, 3.0}, {1.0, 1.0 + M_PI}}) {
        const auto g = BoundedSeq::exponential(a), h = BoundedSeq::exponential(b);
        const double G = affinity(TorusMeasure::point_mass(a), TorusMeasure::point_mass(b));
        v.require(G == 0.0, fmt("G = %.3e for distinct atoms", G));
        for (const std::uint64_t N : {1000u, 10'000u, 100'000u, 1'000'000u}) {
            const double c = std::abs(cross_correlation(g, h, N));
            worst = std::max(worst, c * static_cast<double>(N));
            v.require(c <= G + 5.0 / N, fmt("|cross| = %.3e at N = %.0f, alpha = %.4f", c, double(N), a));
        }
    }
    if (v.ok) v.detail = fmt("G = 0, max N |cross| = %.3f", worst);
    return v;
}

// ---- 9
Verdict skew_product() {
    Verdict v;
    std::mt19937_64 rng(9);
    std::uint64_t bad = 0;
    for (int trial = 0; trial < 10'000; ++trial) {
        const std::size_t len = 2 + rng() % 40;
        std::vector<std::int8_t> x(len);
        std::size_t ones = 0;
        for (auto& s : x) {
            s = static_cast<std::int8_t>(rng() % 3 != 0);
            ones += s;
        }
        std::vector<std::int8_t> omega(ones + rng() % 4);
        for (auto& s : omega) s = rng() % 2 ? 1 : -1;
        const SkewPoint pt(Block2(1, std::move(x)), std::move(omega));
        const auto before = phi_assemble(pt.x, pt.omega);
        const auto moved = skew_step(pt);
        const auto after = phi_assemble(moved.x, moved.omega);
        bool ok = after.size() + 1 == before.size();
        for (std::size_t i = 0; ok && i < after.size(); ++i) ok = after[i] == before[i + 1];
        const int pr = pt.x[0] * (pt.omega.empty() ? 1 : pt.omega[0]);
        ok = ok && before[0] == pr;
        bad += !ok;
    }
    v.require(bad == 0, std::to_string(bad) + " random points break equivariance or projection");

    const std::uint64_t N = 1'000'000;
    const auto mu = sieve(SeqLabel::mobius, 1, N + 1);
    const auto la = sieve(SeqLabel::liouville, 1, N + 1);
    const auto sq = to_block2(sieve(SeqLabel::squarefree, 1, N + 1));
    std::vector<std::int8_t> omega0;
    for (std::uint64_t n = 1; n <= N; ++n)
        if (sq[n - 1]) omega0.push_back(la[n]);
    v.require(phi_assemble(sq, omega0) == to_block(mu), "Phi(mu^2, lambda signs) != mu on [1, 1e6]");
    if (v.ok) v.detail = "10^4 random points exact; mu rebuilt on [1, 1e6]";
    return v;
}

// ---- 10
Verdict admissibility() {
    Verdict v;
    std::uint64_t sets = 0, bad = 0;
    SupportSet A;
    std::function<void(std::uint64_t)> walk = [&](std::uint64_t next) {
        ++sets;
        bad += is_admissible(A) != oracle::brute_admissible(A);
        if (A.size() == 6) return;
        for (std::uint64_t a = next; a <= 30; ++a) {
            A.push_back(a);
            walk(a + 1);
            A.pop_back();
        }
    };
    walk(0);
    v.require(bad == 0, std::to_string(bad) + " of " + std::to_string(sets) + " sets disagree with brute force");

    const auto sq = sieve(SeqLabel::squarefree, 1, 10'001);
    SupportSet support;
    for (std::uint64_t n = 1; n <= 10'000; ++n)
        if (sq[n]) support.push_back(n);
    v.require(is_admissible(support), "support of mu^2 on [1, 1e4] reported inadmissible");
    v.require(oracle::brute_admissible(support), "brute force rejects the support of mu^2");
    if (v.ok) v.detail = std::to_string(sets) + " sets exhaustive; mu^2 support admissible";
    return v;
}

// ---- 11, 13
RunConfig battery_config(const std::filesystem::path& out) {
    RunConfig cfg = load_config(source_dir() / "tests/data/battery.json");
    cfg.output_dir = out;
    cfg.golden = source_dir() / "tests/golden/battery.json";
    return cfg;
}

Verdict decay_battery() {
    Verdict v;
    const auto t0 = Clock::now();
    const auto out = scratch("battery");
    const RunOutcome r = run(battery_config(out));
    const double secs = seconds_since(t0);
    v.require(r.exit_code == exit_ok, "runner exit " + std::to_string(r.exit_code));
    for (const auto& m : r.messages) v.require(false, m);
    v.require(r.reports.size() == 3, "expected three reports");
    std::string summary;
    for (const auto& rep : r.reports) {
        const double first = std::abs(rep.grid.front().value), last = std::abs(rep.grid.back().value);
        v.require(rep.grid.back().N == 10'000'000, rep.id + ": grid does not end at 1e7");
        v.require(last < 0.05, rep.id + fmt(": |value| = %.3e at 1e7", last));
        v.require(last < first, rep.id + ": no decrease from 1e5 to 1e7");
        summary += rep.id + fmt(" %.2e ", last);
    }
    v.require(secs < 300.0, fmt("took %.1f s", secs));
    if (v.ok) v.detail = summary + fmt("in %.1f s", secs);
    return v;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::string without_runtime(const std::string& text) {
    return std::regex_replace(text, std::regex("\"runtime_ms\": [0-9]+"), "\"runtime_ms\": 0");
}

Verdict determinism() {
    Verdict v;
    const auto first = scratch("det_a"), second = scratch("det_b");
    const unsigned saved = worker_count();
    auto cfg_a = battery_config(first);
    auto cfg_b = battery_config(second);
    cfg_a.workers = 1;
    cfg_b.workers = 4;
    const auto ra = run(cfg_a);
    const auto rb = run(cfg_b);
    set_worker_count(saved);
    v.require(ra.exit_code == exit_ok && rb.exit_code == exit_ok, "battery run failed");
    std::size_t files = 0;
    for (const auto& rep : ra.reports) {
        const auto name = rep.id + ".json";
        const auto a = slurp(first / name), b = slurp(second / name);
        v.require(!a.empty(), name + " missing");
        v.require(without_runtime(a) == without_runtime(b), name + " differs between runs");
        ++files;
    }
    if (v.ok) v.detail = std::to_string(files) + " reports byte-identical across 1 and 4 workers";
    return v;
}

// ---- 12
Verdict fwlg() {
    Verdict v;
    SieveProvider sieves;
    const auto& mu = sieves.window(SeqLabel::mobius, 10'000'000 + 1000);
    double worst = 0.0;
    for (const std::uint64_t k : {1u, 3u})
        for (const std::uint64_t h : {10u, 30u})
            for (const std::uint64_t N : {100'000u, 1'000'000u}) {
                const auto r = fwlg_statistic(mu, k, h, N, true);
                const double gap = std::abs(r.direct - *r.spectral);
                worst = std::max(worst, gap / r.edge_bound);
                v.require(gap <= r.edge_bound, fmt("k=%.0f h=%.0f", double(k), double(h)) +
                                                   fmt(" N=%.0f: gap %.3e", double(N), gap) + fmt(" > %.3e", r.edge_bound));
            }
    double prev = INFINITY;
    std::string scaled;
    for (const std::uint64_t h : {10u, 30u, 100u}) {
        const double s = fwlg_statistic(mu, 1, h, 10'000'000, false).direct / static_cast<double>(h * h);
        v.require(s < prev, fmt("direct/h^2 not decreasing at h = %.0f", double(h)));
        prev = s;
        scaled += fmt("%.4f ", s);
    }
    if (v.ok) v.detail = fmt("max gap/edge bound %.2e; direct/h^2 at 1e7: ", worst) + scaled;
    return v;
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        Verdict (*fn)();
    };
    const Criterion all[] = {
        {1, "sieve exactness", sieve_exactness},
        {2, "square-free density", squarefree_density},
        {3, "Mirsky pair density", mirsky_pair},
        {4, "periodogram edge bound", delta_bound},
        {5, "Parseval", parseval},
        {6, "affinity axioms", affinity_axioms},
        {7, "affinity upper semicontinuity", upper_semicontinuity},
        {8, "single-frequency pairs", single_frequencies},
        {9, "skew-product identities", skew_product},
        {10, "admissibility", admissibility},
        {11, "decay battery", decay_battery},
        {12, "FWLG cross-check", fwlg},
        {13, "determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = c.fn();
        } catch (const std::exception& e) {
            v.ok = false;
            v.detail = std::string("exception: ") + e.what();
        }
        failed += !v.ok;
        std::printf("%s %2d %-30s %6.1fs  %s\n", v.ok ? "PASS" : "FAIL", c.number, c.name, seconds_since(t0),
                    v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 13 criteria passed\n", 13 - failed);
    return failed == 0 ? 0 : 1;
}
