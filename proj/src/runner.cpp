#include "mfl/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "mfl/error.hpp"
#include "mfl/parallel.hpp"
#include "mfl/sieve_cache.hpp"

namespace mfl {

namespace {

using nlohmann::json;

const std::set<std::string> kKinds{"davenport", "snmv",  "chowla",         "two_point",
                                   "mrt",       "fwlg",  "short_interval", "rotation"};

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::config, what); }

std::uint64_t get_natural(const json& p, const char* key, std::optional<std::uint64_t> fallback = std::nullopt) {
    if (!p.contains(key)) {
        if (fallback) return *fallback;
        bad(std::string("missing parameter '") + key + "'");
    }
    const json& v = p.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) bad(std::string("'") + key + "' must be a natural number");
    return v.get<std::uint64_t>();
}

double get_real(const json& p, const char* key, double fallback) {
    if (!p.contains(key)) return fallback;
    if (!p.at(key).is_number()) bad(std::string("'") + key + "' must be a number");
    return p.at(key).get<double>();
}

// theta or theta_over_2pi, the latter wins when both are given
double get_angle(const json& p, const std::string& key) {
    const std::string turns = key + "_over_2pi";
    if (p.contains(turns)) return wrap_angle(kTwoPi * get_real(p, turns.c_str(), 0.0));
    return wrap_angle(get_real(p, key.c_str(), 0.0));
}

SupportSet get_support(const json& p, const char* key) {
    if (!p.contains(key)) return {};
    if (!p.at(key).is_array()) bad(std::string("'") + key + "' must be an array");
    std::vector<std::uint64_t> out;
    for (const json& v : p.at(key)) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) bad(std::string("'") + key + "' holds a non-natural");
        out.push_back(v.get<std::uint64_t>());
    }
    return make_support(std::move(out));
}

Pattern get_pattern(const json& p) {
    if (!p.contains("pattern") || !p.at("pattern").is_array()) bad("chowla needs 'pattern': [[shift, exponent], ...]");
    std::vector<Pattern::Term> terms;
    for (const json& t : p.at("pattern")) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
            t[0].get<std::int64_t>() < 0)
            bad("pattern terms are [shift, exponent] pairs");
        terms.push_back({t[0].get<std::uint64_t>(), t[1].get<int>()});
    }
    try {
        Pattern pat(std::move(terms));
        if (pat.terms().empty() || pat.all_squared()) bad("pattern needs at least one exponent 1");
        return pat;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::config) throw;
        bad(e.what());
    }
}

std::vector<Harmonic> get_harmonics(const json& p) {
    if (!p.contains("harmonics") || !p.at("harmonics").is_array() || p.at("harmonics").empty())
        bad("rotation needs 'harmonics': [[k, re, im], ...]");
    std::vector<Harmonic> out;
    for (const json& t : p.at("harmonics")) {
        if (!t.is_array() || t.size() < 2 || t.size() > 3 || !t[0].is_number_integer() || !t[1].is_number() ||
            (t.size() == 3 && !t[2].is_number()))
            bad("harmonics are [k, re] or [k, re, im]");
        out.push_back({t[0].get<std::int64_t>(), {t[1].get<double>(), t.size() == 3 ? t[2].get<double>() : 0.0}});
    }
    return out;
}

SeqLabel input_label(const ExperimentSpec& s) {
    if (s.kind == "two_point" || s.kind == "mrt") return SeqLabel::liouville;
    if (s.kind == "chowla") {
        const SeqLabel l = parse_label(s.params.value("label", std::string("mobius")));
        if (l != SeqLabel::mobius && l != SeqLabel::liouville) bad("chowla label must be mobius or liouville");
        return l;
    }
    return SeqLabel::mobius;
}

// one past the largest index an experiment reads at size N
std::uint64_t reach(const ExperimentSpec& s, std::uint64_t N) {
    const json& p = s.params;
    if (s.kind == "snmv") {
        const auto A = get_support(p, "A");
        return N + (A.empty() ? 0 : A.back()) + 1;
    }
    if (s.kind == "chowla") return N + get_pattern(p).max_shift() + 1;
    if (s.kind == "two_point") return N + get_natural(p, "h") + 1;
    if (s.kind == "mrt") return N + get_natural(p, "H") + 1;
    if (s.kind == "fwlg") return N + get_natural(p, "h") * get_natural(p, "k", 1) + 1;
    if (s.kind == "short_interval") return 2 * N + get_natural(p, "H");
    return N + 1;
}

void validate(const ExperimentSpec& s, std::uint64_t cap) {
    const json& p = s.params;
    if (s.grid.empty()) bad(s.id + ": empty grid");
    for (const std::uint64_t N : s.grid)
        if (N < 1 || N > cap) bad(s.id + ": N = " + std::to_string(N) + " outside [1, " + std::to_string(cap) + "]");
    const std::uint64_t lo = *std::min_element(s.grid.begin(), s.grid.end());
    if (s.kind == "davenport") {
        get_angle(p, "theta");
    } else if (s.kind == "snmv") {
        get_angle(p, "theta");
        get_support(p, "A");
    } else if (s.kind == "chowla") {
        get_pattern(p);
        input_label(s);
    } else if (s.kind == "two_point") {
        if (get_natural(p, "h") < 1) bad(s.id + ": h must be >= 1");
    } else if (s.kind == "mrt") {
        const std::uint64_t H = get_natural(p, "H");
        const double delta = get_real(p, "delta", -1.0);
        if (H < 1 || H > lo) bad(s.id + ": mrt needs 1 <= H <= N");
        if (!(delta > 0.0 && delta <= 1.0)) bad(s.id + ": delta must lie in (0, 1]");
    } else if (s.kind == "fwlg") {
        const std::uint64_t k = get_natural(p, "k", 1), h = get_natural(p, "h");
        if (k < 1 || h < 1) bad(s.id + ": fwlg needs k, h >= 1");
        if (lo < 8 * h * k) bad(s.id + ": fwlg needs N >= 8hk");
        if (p.contains("spectral") && !p.at("spectral").is_boolean()) bad(s.id + ": 'spectral' must be boolean");
    } else if (s.kind == "short_interval") {
        const std::uint64_t H = get_natural(p, "H");
        if (H < 1 || H > lo) bad(s.id + ": short_interval needs 1 <= H <= N");
    } else if (s.kind == "rotation") {
        get_angle(p, "alpha");
        get_harmonics(p);
    }
}

std::vector<std::uint64_t> get_grid(const json& v, const std::string& where) {
    if (!v.is_array()) bad(where + ": grid must be an array");
    std::vector<std::uint64_t> out;
    for (const json& n : v) {
        // 1e7 style literals arrive as floats
        if (n.is_number_integer() && n.get<std::int64_t>() > 0) {
            out.push_back(n.get<std::uint64_t>());
        } else if (n.is_number_float() && n.get<double>() >= 1.0 && n.get<double>() < 9.2e18 &&
                   std::floor(n.get<double>()) == n.get<double>()) {
            out.push_back(static_cast<std::uint64_t>(n.get<double>()));
        } else {
            bad(where + ": grid entries must be positive integers");
        }
    }
    return out;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

cplx evaluate(const ExperimentSpec& s, const SignSeq& f, std::uint64_t N, json& extra) {
    const json& p = s.params;
    if (s.kind == "davenport") return davenport_sum(f, get_angle(p, "theta"), N);
    if (s.kind == "snmv") return snmv_sum(f, get_support(p, "A"), get_angle(p, "theta"), N);
    if (s.kind == "chowla") return chowla_correlation(f, get_pattern(p), N);
    if (s.kind == "two_point")
        return static_cast<double>(liouville_two_point(f, get_natural(p, "h"), N)) / static_cast<double>(N);
    if (s.kind == "mrt") return mrt_average(f, get_natural(p, "H"), N, get_real(p, "delta", 0.0));
    if (s.kind == "short_interval") return short_interval_average(f, get_natural(p, "H"), N);
    if (s.kind == "fwlg") {
        const std::uint64_t h = get_natural(p, "h");
        const FwlgResult r = fwlg_statistic(f, get_natural(p, "k", 1), h, N, p.value("spectral", false));
        json row{{"N", N}, {"direct_over_h2", r.direct / static_cast<double>(h * h)}, {"edge_bound", r.edge_bound}};
        if (r.spectral) {
            row["spectral"] = *r.spectral;
            row["within_edge_bound"] = std::abs(r.direct - *r.spectral) <= r.edge_bound;
        }
        extra.push_back(row);
        return r.direct;
    }
    bad("unknown kind " + s.kind);
}

}  // namespace

RunConfig parse_config(const json& j) {
    if (!j.is_object()) bad("config must be a json object");
    RunConfig cfg;
    try {
        cfg.large_grid = j.value("large_grid", false);
        if (j.contains("grid")) cfg.grid = get_grid(j.at("grid"), "config");
        if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("cache_dir") && !j.at("cache_dir").is_null()) cfg.cache_dir = j.at("cache_dir").get<std::string>();
        if (j.contains("golden") && !j.at("golden").is_null()) cfg.golden = j.at("golden").get<std::string>();
        if (j.contains("workers")) {
            const json& w = j.at("workers");
            if (!w.is_number_integer() || w.get<std::int64_t>() < 1 || w.get<std::int64_t>() > 1024)
                bad("workers must be an integer in [1, 1024]");
            cfg.workers = w.get<unsigned>();
        }
        const std::uint64_t cap = cfg.large_grid ? kLargeGridMax : kDefaultGridMax;
        std::set<std::string> seen;
        for (const json& e : j.value("experiments", json::array())) {
            if (!e.is_object()) bad("experiment entries must be objects");
            ExperimentSpec s;
            s.kind = e.at("kind").get<std::string>();
            if (!kKinds.count(s.kind)) bad("unknown experiment kind '" + s.kind + "'");
            s.id = e.value("id", s.kind);
            if (s.id.empty() || s.id.find_first_of("/\\") != std::string::npos || s.id[0] == '.')
                bad("experiment id '" + s.id + "' is not a plain file name");
            if (!seen.insert(s.id).second) bad("duplicate experiment id '" + s.id + "'");
            s.grid = e.contains("grid") ? get_grid(e.at("grid"), s.id) : cfg.grid;
            s.params = e;
            for (const char* k : {"id", "kind", "grid"}) s.params.erase(k);
            validate(s, cap);
            cfg.experiments.push_back(std::move(s));
        }
    } catch (const json::exception& e) {
        bad(e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::config) throw;
        bad(e.what());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        bad(path.string() + ": " + e.what());
    }
    return parse_config(j);
}

ExperimentReport run_experiment(const ExperimentSpec& spec, SieveProvider& sieves) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t top = *std::max_element(spec.grid.begin(), spec.grid.end());
    const SeqLabel label = input_label(spec);
    const std::uint64_t hi = reach(spec, top);
    const SignSeq& f = sieves.window(label, hi);

    ExperimentReport report;
    report.id = spec.id;
    report.params = spec.params;
    report.params["kind"] = spec.kind;
    report.params["input"] = std::string(to_string(label));

    json extra = json::array();
    for (const std::uint64_t N : spec.grid) {
        if (spec.kind == "rotation") break;
        report.grid.push_back({N, evaluate(spec, f, N, extra)});
    }
    if (spec.kind == "rotation") {
        ExperimentReport r = rotation_disjointness(f, get_angle(spec.params, "alpha"), get_harmonics(spec.params), spec.grid);
        report.grid = std::move(r.grid);
        report.indicators = std::move(r.indicators);
    } else {
        report.indicators = decay_indicators(report.grid);
    }
    if (!extra.empty()) report.indicators["rows"] = extra;

    // params + grid, then the window bytes actually read
    std::uint64_t h = fnv1a64(report.params.dump());
    for (const std::uint64_t N : spec.grid) h = fnv1a64(std::to_string(N) + ",", h);
    const auto used = f.values().first(hi - 1);
    h = fnv1a64(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(used.data()), used.size()), h);
    report.input_checksum = "fnv1a64:" + hex64(h);

    report.runtime_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

GoldenCheck check_golden(const ExperimentReport& report, const json& entry) {
    GoldenCheck out;
    auto fail = [&](std::string msg) {
        out.pass = false;
        out.failures.push_back(report.id + ": " + std::move(msg));
    };
    char buf[256];
    const double tol = entry.value("tolerance", 1e-12);
    if (entry.contains("values")) {
        for (const json& v : entry.at("values")) {
            const std::uint64_t N = v.at("N").get<std::uint64_t>();
            const auto it = std::find_if(report.grid.begin(), report.grid.end(),
                                         [&](const ExperimentReport::Point& p) { return p.N == N; });
            if (it == report.grid.end()) {
                fail("golden N = " + std::to_string(N) + " not in grid");
                continue;
            }
            const cplx want{v.value("re", 0.0), v.value("im", 0.0)};
            const double err = std::abs(it->value - want);
            if (!(err <= tol)) {
                std::snprintf(buf, sizeof buf, "N = %llu off by %.3e (tolerance %.1e)",
                              static_cast<unsigned long long>(N), err, tol);
                fail(buf);
            }
        }
    }
    if (entry.contains("max_abs_final") && !report.grid.empty()) {
        const double cap = entry.at("max_abs_final").get<double>();
        const double got = std::abs(report.grid.back().value);
        if (!(got < cap)) {
            std::snprintf(buf, sizeof buf, "|value| at final N is %.4g, limit %.4g", got, cap);
            fail(buf);
        }
    }
    if (entry.value("endpoint_decrease", false) && !report.indicators.value("endpoint_decrease", false))
        fail("no decrease between first and final N");
    return out;
}

std::string report_text(const ExperimentReport& report) { return report.to_json().dump(2) + "\n"; }

RunOutcome run(const RunConfig& config) {
    RunOutcome out;
    if (config.experiments.empty()) return out;
    try {
        if (config.workers > 0) set_worker_count(config.workers);

        json golden = json::object();
        if (config.golden) {
            std::ifstream in(*config.golden);
            if (!in) bad("cannot open golden file " + config.golden->string());
            try {
                in >> golden;
            } catch (const json::exception& e) {
                bad(config.golden->string() + ": " + e.what());
            }
        }

        std::filesystem::create_directories(config.output_dir);
        SieveProvider sieves = config.cache_dir ? SieveProvider(*config.cache_dir) : SieveProvider();
        for (const ExperimentSpec& spec : config.experiments) {
            ExperimentReport report = run_experiment(spec, sieves);
            {
                std::ofstream f(config.output_dir / (spec.id + ".json"), std::ios::binary | std::ios::trunc);
                f << report_text(report);
                if (!f) throw Error(ErrorKind::io, "cannot write report for " + spec.id);
            }
            if (golden.contains(spec.id)) {
                const GoldenCheck g = check_golden(report, golden.at(spec.id));
                if (!g.pass) {
                    out.exit_code = exit_tolerance;
                    out.messages.insert(out.messages.end(), g.failures.begin(), g.failures.end());
                }
            }
            out.reports.push_back(std::move(report));
        }
    } catch (const Error& e) {
        out.messages.push_back(e.what());
        out.exit_code = (e.kind() == ErrorKind::checksum || e.kind() == ErrorKind::format) ? exit_cache : exit_config;
    } catch (const std::exception& e) {
        out.messages.push_back(e.what());
        out.exit_code = exit_config;
    }
    return out;
}

}  // namespace mfl
