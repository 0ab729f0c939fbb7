// mfl: command-line front end for the sieve, spectral and experiment modules.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mfl/error.hpp"
#include "mfl/experiments.hpp"
#include "mfl/parallel.hpp"
#include "mfl/runner.hpp"
#include "mfl/sieve.hpp"
#include "mfl/sieve_cache.hpp"
#include "mfl/spectral.hpp"
#include "mfl/symbolic.hpp"
#include "mfl/torus_measure.hpp"

namespace {

using namespace mfl;

constexpr int exit_usage = 2;

// "0,1,5" -> {0,1,5}
std::vector<std::uint64_t> parse_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const unsigned long long v = std::stoull(item, &used);
        if (used != item.size() || item[0] == '-') throw Error(ErrorKind::invalid_argument, "bad list entry '" + item + "'");
        out.push_back(v);
    }
    return out;
}

struct Angle {
    double theta = 0.0;
    double turns = 0.0;
    CLI::Option* theta_opt = nullptr;
    CLI::Option* turns_opt = nullptr;

    void attach(CLI::App* app, const std::string& name) {
        theta_opt = app->add_option("--" + name, theta, name + " in radians");
        turns_opt = app->add_option("--" + name + "-over-2pi", turns, name + " as a multiple of 2 pi");
        theta_opt->excludes(turns_opt);
    }
    double value() const { return *turns_opt ? wrap_angle(kTwoPi * turns) : wrap_angle(theta); }
};

BoundedSeq source(const std::string& label, std::uint64_t n, const Angle& theta) {
    const SeqLabel l = parse_label(label);
    BoundedSeq g = l == SeqLabel::custom ? BoundedSeq::constant(1.0) : BoundedSeq::from_signs(sieve(l, 1, n + 1));
    return theta.value() == 0.0 ? g : modulate(g, theta.value());
}

std::uint64_t cap_n(std::uint64_t n, std::uint64_t cap, const char* what) {
    if (n < 1 || n > cap)
        throw Error(ErrorKind::invalid_range, std::string(what) + " must lie in [1, " + std::to_string(cap) + "]");
    return n;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sieves, spectral measures and Mobius disjointness experiments"};
    app.require_subcommand(1);
    unsigned workers = 0;
    app.add_option("-j,--workers", workers, "worker threads (default: hardware concurrency)")->check(CLI::Range(1u, 1024u));

    // sieve
    auto* c_sieve = app.add_subcommand("sieve", "sieve mu, lambda or mu2 on [lo, hi)");
    std::string s_label = "mobius", s_out;
    std::uint64_t s_lo = 1, s_hi = 1001;
    bool s_csv = false;
    c_sieve->add_option("--label", s_label, "mobius | liouville | squarefree (mu, lambda, mu2)");
    c_sieve->add_option("--lo", s_lo, "first index")->check(CLI::PositiveNumber);
    c_sieve->add_option("--hi", s_hi, "one past the last index")->required();
    c_sieve->add_option("--out", s_out, "write a binary cache file (default name in MFL_CACHE_DIR if set to '-')");
    c_sieve->add_flag("--csv", s_csv, "print n,value rows");

    // correlate
    auto* c_corr = app.add_subcommand("correlate", "autocorrelation table F_N(k), k = 0..K, as CSV");
    std::string c_label = "mobius";
    std::uint64_t c_N = 100000, c_K = 20;
    Angle c_theta;
    c_corr->add_option("--label", c_label, "mobius | liouville | squarefree");
    c_corr->add_option("-N,--N", c_N, "window length");
    c_corr->add_option("-K,--K", c_K, "largest lag");
    c_theta.attach(c_corr, "theta");

    // spectrum
    auto* c_spec = app.add_subcommand("spectrum", "periodogram of a sequence on [1, n]");
    std::string p_label = "mobius", p_out, p_limit;
    std::uint64_t p_n = 100000, p_K = 50;
    std::size_t p_bins = 0;
    Angle p_theta;
    c_spec->add_option("--label", p_label, "mobius | liouville | squarefree");
    c_spec->add_option("-n,--n", p_n, "window length");
    c_spec->add_option("--bins", p_bins, "grid size (default: power of two >= 2n)");
    c_spec->add_option("-K,--K", p_K, "lags for the coefficient CSV");
    c_spec->add_option("--out", p_out, "write the measure as json");
    c_spec->add_option("--limit-grid", p_limit, "comma list of n; prints the spectral limit diagnostic instead");
    p_theta.attach(c_spec, "theta");

    // affinity
    auto* c_aff = app.add_subcommand("affinity", "affinity and Hellinger distance of two measure files");
    std::string a_file, b_file;
    c_aff->add_option("--lhs", a_file, "measure json")->required()->check(CLI::ExistingFile);
    c_aff->add_option("--rhs", b_file, "measure json")->required()->check(CLI::ExistingFile);

    // admissible
    auto* c_adm = app.add_subcommand("admissible", "admissibility of a shift set");
    std::string d_set;
    c_adm->add_option("set", d_set, "comma list, e.g. 0,1,2,3")->required();

    // mirsky
    auto* c_mir = app.add_subcommand("mirsky", "Mirsky cylinder density, product vs count");
    std::string m_ones = "0", m_zeros;
    std::uint64_t m_bound = 10000, m_N = 1000000;
    c_mir->add_option("--ones", m_ones, "shifts with mu^2 = 1");
    c_mir->add_option("--zeros", m_zeros, "shifts with mu^2 = 0");
    c_mir->add_option("--bound", m_bound, "prime bound for the product")->check(CLI::Range(100ull, 100000000ull));
    c_mir->add_option("-N,--n,--N", m_N, "count window");

    // experiment
    auto* c_exp = app.add_subcommand("experiment", "run a config file or a single experiment");
    std::string e_config, e_kind, e_id, e_grid, e_out, e_cache, e_golden, e_A, e_pattern, e_chowla_label = "mobius",
                                                                            e_harm;
    std::uint64_t e_h = 1, e_H = 10, e_k = 1;
    double e_delta = 0.1;
    bool e_large = false, e_spectral = false;
    Angle e_theta, e_alpha;
    c_exp->add_option("--config", e_config, "json config")->check(CLI::ExistingFile);
    c_exp->add_option("--kind", e_kind, "davenport snmv chowla two_point mrt fwlg short_interval rotation");
    c_exp->add_option("--id", e_id, "report id");
    c_exp->add_option("--grid", e_grid, "comma list of N");
    c_exp->add_option("--output-dir", e_out, "report directory");
    c_exp->add_option("--cache-dir", e_cache, "sieve cache directory (else MFL_CACHE_DIR)");
    c_exp->add_option("--golden", e_golden, "golden json to compare against");
    c_exp->add_flag("--large-grid", e_large, "allow N up to 1e8");
    c_exp->add_option("--A", e_A, "snmv shift set, comma list");
    c_exp->add_option("--pattern", e_pattern, "chowla pattern shift:exp,... e.g. 0:1,1:1");
    c_exp->add_option("--chowla-label", e_chowla_label, "mobius | liouville");
    c_exp->add_option("--lag", e_h, "lag h");
    c_exp->add_option("--window", e_H, "window H");
    c_exp->add_option("--step", e_k, "step k");
    c_exp->add_option("--delta", e_delta, "mrt threshold");
    c_exp->add_flag("--spectral", e_spectral, "fwlg spectral cross-check");
    c_exp->add_option("--harmonics", e_harm, "rotation harmonics k:re[:im],...");
    e_theta.attach(c_exp, "theta");
    e_alpha.attach(c_exp, "alpha");
    c_exp->get_option("--config")->excludes("--kind");

    // cache-verify
    auto* c_ver = app.add_subcommand("cache-verify", "check magic, length and checksum of a cache file");
    std::string v_path;
    c_ver->add_option("path", v_path, "cache file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : exit_usage;
    }

    try {
        if (workers > 0) set_worker_count(workers);

        if (*c_sieve) {
            const SeqLabel l = parse_label(s_label);
            if (l == SeqLabel::custom) throw Error(ErrorKind::invalid_argument, "sieve needs mobius, liouville or squarefree");
            if (s_hi <= s_lo) throw Error(ErrorKind::invalid_range, "need lo < hi");
            const SignSeq seq = sieve(l, s_lo, s_hi);
            if (!s_out.empty()) {
                std::filesystem::path path = s_out;
                if (s_out == "-") {
                    path = cache_directory(".") / (std::string(to_string(l)) + "_" + std::to_string(s_lo) + "_" +
                                                   std::to_string(s_hi) + ".bin");
                    std::filesystem::create_directories(path.parent_path());
                }
                write_cache(path, seq);
                std::cout << "wrote " << path.string() << "\n";
            }
            if (s_csv) {
                std::cout << "n,value\n";
                for (std::uint64_t n = s_lo; n < s_hi; ++n) std::cout << n << "," << int(seq[n]) << "\n";
            } else {
                long long sum = 0, nonzero = 0;
                for (const std::int8_t v : seq.values()) {
                    sum += v;
                    nonzero += v != 0;
                }
                std::cout << "label " << to_string(l) << "\nrange [" << s_lo << ", " << s_hi << ")\nsum " << sum
                          << "\nnonzero " << nonzero << "\n";
            }
            return 0;
        }

        if (*c_corr) {
            cap_n(c_N, kLargeGridMax, "N");
            if (c_K >= c_N) throw Error(ErrorKind::lag_too_large, "need K < N");
            write_csv(std::cout, correlation_table(source(c_label, c_N + c_K, c_theta), c_N, c_K));
            return 0;
        }

        if (*c_spec) {
            if (!p_limit.empty()) {
                const auto grid = parse_list(p_limit);
                if (grid.empty()) throw Error(ErrorKind::invalid_argument, "empty --limit-grid");
                const std::uint64_t top = *std::max_element(grid.begin(), grid.end());
                cap_n(top, kDefaultGridMax, "grid entries");
                const auto diag = spectral_limit_diagnostic(source(p_label, top, p_theta), grid, p_K);
                write_csv(std::cout, diag);
                double worst = 0.0;
                for (const auto& row : diag.deviation)
                    for (const double d : row) worst = std::max(worst, d);
                std::fprintf(stderr, "max deviation %.6g  single_limit_plausible %s\n", worst,
                             diag.single_limit_plausible ? "yes" : "no");
                return 0;
            }
            cap_n(p_n, kDefaultGridMax, "n");
            const std::size_t bins = p_bins == 0 ? periodogram_bins(p_n) : p_bins;
            if (bins < 2 * p_n) throw Error(ErrorKind::grid_too_coarse, "bins must be >= 2n");
            const Periodogram pg = periodogram(source(p_label, p_n, p_theta), p_n, bins, p_label);
            if (!p_out.empty()) save_measure(p_out, pg.measure);
            const auto prof = rajchman_profile(pg.measure, std::min<std::uint64_t>(p_K, bins / 2));
            std::printf("n %llu\nbins %zu\ntotal_mass %.15g\nwiener_stat %.6g\nupper_half_max %.6g\n",
                        static_cast<unsigned long long>(p_n), bins, pg.measure.total_mass(),
                        wiener_continuity_stat(pg.measure, std::min<std::uint64_t>(p_K, bins / 2)),
                        prof.upper_half_max);
            return 0;
        }

        if (*c_aff) {
            const TorusMeasure a = load_measure(a_file), b = load_measure(b_file);
            std::printf("affinity %.15g\nhellinger %.15g\n", affinity(a, b), hellinger(a, b));
            return 0;
        }

        if (*c_adm) {
            const SupportSet A = make_support(parse_list(d_set));
            if (A.empty()) throw Error(ErrorKind::invalid_argument, "empty set");
            const bool ok = is_admissible(A);
            std::cout << "admissible " << (ok ? "yes" : "no") << "\n";
            for (std::uint64_t p = 2; p * p <= A.size(); ++p)
                if (is_prime(p)) std::cout << "t(" << p << ") = " << t_classes(p, A) << " of " << p * p << "\n";
            return ok ? 0 : 1;
        }

        if (*c_mir) {
            cap_n(m_N, kLargeGridMax, "N");
            const auto ones = make_support(parse_list(m_ones)), zeros = make_support(parse_list(m_zeros));
            const auto est = mirsky_cylinder_density(ones, zeros, primes_upto(m_bound), m_N);
            std::printf("product %.12g\nempirical %.12g\ntail_factor_lower %.12g\nN %llu\n", est.product_estimate,
                        est.empirical, est.tail_factor_lower, static_cast<unsigned long long>(est.n_check));
            return 0;
        }

        if (*c_exp) {
            RunConfig cfg;
            try {
                if (!e_config.empty()) {
                    cfg = load_config(e_config);
                } else {
                    if (e_kind.empty()) throw Error(ErrorKind::config, "need --config or --kind");
                    nlohmann::json e{{"kind", e_kind}, {"id", e_id.empty() ? e_kind : e_id}};
                    if (*e_theta.theta_opt || *e_theta.turns_opt) e["theta"] = e_theta.value();
                    if (*e_alpha.theta_opt || *e_alpha.turns_opt) e["alpha"] = e_alpha.value();
                    if (!e_A.empty()) e["A"] = parse_list(e_A);
                    if (e_kind == "chowla") {
                        nlohmann::json pat = nlohmann::json::array();
                        std::stringstream ss(e_pattern);
                        std::string item;
                        while (std::getline(ss, item, ',')) {
                            const auto colon = item.find(':');
                            pat.push_back({std::stoull(item.substr(0, colon)),
                                           colon == std::string::npos ? 1 : std::stoi(item.substr(colon + 1))});
                        }
                        e["pattern"] = pat;
                        e["label"] = e_chowla_label;
                    }
                    if (e_kind == "two_point" || e_kind == "fwlg") e["h"] = e_h;
                    if (e_kind == "mrt" || e_kind == "short_interval") e["H"] = e_H;
                    if (e_kind == "mrt") e["delta"] = e_delta;
                    if (e_kind == "fwlg") {
                        e["k"] = e_k;
                        e["spectral"] = e_spectral;
                    }
                    if (e_kind == "rotation") {
                        nlohmann::json hs = nlohmann::json::array();
                        std::stringstream ss(e_harm);
                        std::string item;
                        while (std::getline(ss, item, ',')) {
                            std::vector<std::string> parts;
                            std::stringstream is(item);
                            std::string part;
                            while (std::getline(is, part, ':')) parts.push_back(part);
                            if (parts.size() < 2) throw Error(ErrorKind::config, "harmonic '" + item + "' is not k:re[:im]");
                            hs.push_back({std::stoll(parts[0]), std::stod(parts[1]),
                                          parts.size() > 2 ? std::stod(parts[2]) : 0.0});
                        }
                        e["harmonics"] = hs;
                    }
                    nlohmann::json j{{"experiments", {e}}, {"large_grid", e_large}};
                    if (!e_grid.empty()) j["grid"] = parse_list(e_grid);
                    cfg = parse_config(j);
                }
            } catch (const Error& err) {
                std::cerr << err.what() << "\n";
                return exit_config;
            } catch (const std::exception& err) {
                std::cerr << "config: " << err.what() << "\n";
                return exit_config;
            }
            if (!e_out.empty()) cfg.output_dir = e_out;
            if (!e_golden.empty()) cfg.golden = e_golden;
            if (!e_cache.empty()) {
                cfg.cache_dir = e_cache;
            } else if (const char* env = std::getenv("MFL_CACHE_DIR"); env != nullptr && *env != '\0') {
                cfg.cache_dir = env;
            }
            if (workers > 0) cfg.workers = workers;

            const RunOutcome out = run(cfg);
            for (const auto& r : out.reports) {
                const auto& last = r.grid.back();
                std::printf("%-24s N=%-10llu |value| %.6g  (%lld ms)\n", r.id.c_str(),
                            static_cast<unsigned long long>(last.N), std::abs(last.value),
                            static_cast<long long>(r.runtime_ms));
            }
            for (const auto& m : out.messages) std::cerr << m << "\n";
            return out.exit_code;
        }

        if (*c_ver) {
            const bool ok = cache_verify(v_path);
            std::cout << (ok ? "ok" : "corrupt") << "\n";
            return ok ? 0 : exit_cache;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        if (e.kind() == ErrorKind::checksum || e.kind() == ErrorKind::format) return exit_cache;
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return 0;
}
