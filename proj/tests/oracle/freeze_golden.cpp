// Regenerates tests/golden/*.json from the naive oracle only. Run by hand:
//   build/tests/freeze_golden tests/golden
// and commit the result.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <unordered_set>

#include <json.hpp>

#include "oracle.hpp"

using nlohmann::json;
using cd = std::complex<double>;

namespace {

constexpr long double kTau = 2.0L * 3.14159265358979323846264338327950288L;
constexpr double kTauD = 6.283185307179586476925286766559;

double wrap(double t) {
    long double r = std::fmod(static_cast<long double>(t), kTau);
    if (r < 0) r += kTau;
    const auto out = static_cast<double>(r);
    return out >= kTauD ? 0.0 : out;
}

json point(std::uint64_t N, cd v) { return {{"N", N}, {"re", v.real()}, {"im", v.imag()}}; }

void save(const std::string& path, const json& j) {
    std::ofstream(path) << j.dump(2) << "\n";
    std::cerr << "wrote " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "tests/golden";
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t top = 10'000'000;
    const auto T = oracle::linear_sieve(2 * top + 200);
    const std::vector<std::uint64_t> grid{100'000, 1'000'000, 10'000'000};

    // decay battery, keyed by experiment id of tests/data/battery.json
    json battery = json::object();
    {
        const double theta = wrap(kTauD * 0.6180339887498949);
        json dav = json::array(), tp = json::array(), sn = json::array();
        for (const auto N : grid) {
            dav.push_back(point(N, oracle::twisted_sum(T, {}, theta, N)));
            tp.push_back(point(N, {static_cast<double>(oracle::two_point(T.lambda, 1, N)) / N, 0.0}));
            sn.push_back(point(N, oracle::twisted_sum(T, {1, 2}, 0.0, N)));
        }
        for (auto [id, vals] : {std::pair{"davenport_golden", dav}, {"chowla_lambda_h1", tp}, {"snmv_1_2", sn}})
            battery[id] = {{"values", vals}, {"tolerance", 1e-9}, {"max_abs_final", 0.05}, {"endpoint_decrease", true}};
    }
    save(dir + "/battery.json", battery);

    json ref = json::object();

    // F_N(1) of mu at N = 10^6
    {
        std::vector<cd> g(1'000'002);
        for (std::uint64_t n = 1; n < g.size(); ++n) g[n] = T.mu[n];
        const cd f1 = oracle::correlation(g, 1'000'000, 1);
        ref["mu_F1_1e6"] = {{"re", f1.real()}, {"im", f1.imag()}};
    }

    // Mertens values and the square-free count
    {
        long long m = 0, q = 0;
        json mert = json::object();
        for (std::uint64_t n = 1; n <= top; ++n) {
            m += T.mu[n];
            q += T.mu2[n];
            if (n == 100'000 || n == 1'000'000 || n == top) mert[std::to_string(n)] = m;
        }
        ref["mertens"] = mert;
        ref["squarefree_count_1e7"] = q;
        long long pairs = 0;
        for (std::uint64_t n = 1; n <= top; ++n) pairs += T.mu2[n] && T.mu2[n + 1];
        ref["squarefree_pairs_1e7"] = pairs;
    }

    // MRT fractions and two-point sums, X = 10^7, h = 1..50
    {
        json sums = json::array();
        for (std::uint64_t h = 1; h <= 50; ++h) sums.push_back(oracle::two_point(T.lambda, h, top));
        ref["lambda_two_point_1e7"] = sums;
        json frac = json::object();
        for (const double delta : {0.001, 0.005, 0.01, 0.05}) {
            int good = 0;
            for (const auto& s : sums) good += std::llabs(s.get<long long>()) <= delta * static_cast<double>(top);
            char key[32];
            std::snprintf(key, sizeof key, "%g", delta);
            frac[key] = good / 50.0;
        }
        ref["mrt_fraction_H50_1e7"] = frac;
        json h2 = json::array();
        for (const auto N : grid) h2.push_back(static_cast<double>(oracle::two_point(T.lambda, 2, N)) / N);
        ref["lambda_two_point_h2"] = h2;
    }

    // FWLG direct statistic, k = 1, N = 10^7
    {
        json fw = json::object();
        for (const std::uint64_t h : {10u, 30u, 100u}) fw[std::to_string(h)] = oracle::fwlg_direct(T.mu, 1, h, top);
        ref["fwlg_k1_1e7"] = fw;
        json small = json::array();
        for (const std::uint64_t k : {1u, 3u})
            for (const std::uint64_t h : {10u, 30u})
                for (const std::uint64_t N : {100'000u, 1'000'000u})
                    small.push_back({{"k", k}, {"h", h}, {"N", N}, {"direct", oracle::fwlg_direct(T.mu, k, h, N)}});
        ref["fwlg_small"] = small;
    }

    // short interval averages at X = 10^6
    {
        json si = json::object();
        for (const std::uint64_t H : {1u, 10u, 100u}) si[std::to_string(H)] = oracle::short_interval(T.mu, H, 1'000'000);
        ref["short_interval_1e6"] = si;
    }

    // rotation by 2 pi sqrt 2 with three harmonics
    {
        const double alpha = wrap(kTauD * std::sqrt(2.0));
        const std::vector<std::pair<long long, cd>> f{{1, {1.0, 0.0}}, {2, {0.5, -0.25}}, {-3, {0.0, 0.75}}};
        json rows = json::array();
        for (const auto N : grid) {
            std::complex<long double> s = 0;
            for (std::uint64_t n = 1; n <= N; ++n) {
                if (T.mu[n] == 0) continue;
                for (const auto& [k, c] : f) {
                    const auto e = oracle::expi(n, wrap(static_cast<double>(k) * alpha));
                    s += static_cast<long double>(T.mu[n]) * std::complex<long double>(c) * std::complex<long double>(e);
                }
            }
            rows.push_back(point(N, {static_cast<double>(s.real() / N), static_cast<double>(s.imag() / N)}));
        }
        ref["rotation_sqrt2"] = rows;
    }

    // truncated correlations of mu, K = 50, for the spectral diagnostic
    {
        json diag = json::array();
        for (const auto n : grid) {
            json row = json::array();
            for (std::uint64_t k = 0; k <= 50; ++k) {
                long long s = 0;
                for (std::uint64_t j = 0; j + k < n; ++j) s += T.mu[j + k + 1] * T.mu[j + 1];
                row.push_back(static_cast<double>(s) / static_cast<double>(n));
            }
            diag.push_back({{"n", n}, {"sigma_hat", row}});
        }
        ref["mu_sigma_hat_K50"] = diag;
    }

    // distinct L-blocks of mu^2 over windows starting at 1..10^7
    {
        json be = json::object();
        for (const std::uint64_t L : {4u, 8u, 16u}) {
            std::unordered_set<std::string> seen;
            std::string w(L, '0');
            for (std::uint64_t n = 1; n <= top; ++n) {
                for (std::uint64_t i = 0; i < L; ++i) w[i] = static_cast<char>('0' + T.mu2[n + i]);
                seen.insert(w);
            }
            be[std::to_string(L)] = seen.size();
        }
        ref["mu2_distinct_blocks_1e7"] = be;
    }

    save(dir + "/reference.json", ref);
    std::cerr << "done in "
              << std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0).count()
              << " s\n";
}
