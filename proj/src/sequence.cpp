#include "mfl/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "mfl/error.hpp"
#include "mfl/fft.hpp"
#include "mfl/parallel.hpp"
#include "mfl/summation.hpp"

namespace mfl {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;

// Trig-poly samples are advanced by a rotation recurrence and re-anchored
// with a direct evaluation this often.
constexpr std::uint64_t kReanchor = 256;

struct LagSums {
    std::vector<ComplexSum> sums;
    void merge(const LagSums& other) {
        if (sums.size() < other.sums.size()) sums.resize(other.sums.size());
        for (std::size_t k = 0; k < other.sums.size(); ++k) sums[k].merge(other.sums[k]);
    }
};

struct RealSum {
    CompensatedSum s;
    void merge(const RealSum& o) { s.merge(o.s); }
};

struct CplxSum {
    ComplexSum s;
    void merge(const CplxSum& o) { s.merge(o.s); }
};

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double wrap_angle(double theta) noexcept {
    long double r = std::fmod(static_cast<long double>(theta), kTwoPiL);
    if (r < 0) r += kTwoPiL;
    auto out = static_cast<double>(r);
    return out >= kTwoPi ? 0.0 : out;
}

cplx cis(std::uint64_t n, double theta) noexcept {
    const long double phase = std::fmod(static_cast<long double>(n) * static_cast<long double>(theta), kTwoPiL);
    return {static_cast<double>(std::cos(phase)), static_cast<double>(std::sin(phase))};
}

BoundedSeq::BoundedSeq(Evaluator eval, double sup_bound, std::uint64_t first, std::uint64_t last)
    : eval_(std::move(eval)), sup_bound_(sup_bound), first_(first), last_(last) {
    if (!eval_) throw Error(ErrorKind::invalid_argument, "empty evaluator");
    if (!(sup_bound >= 0.0) || !std::isfinite(sup_bound))
        throw Error(ErrorKind::invalid_argument, "sup_bound must be finite and >= 0");
    if (first < 1 || first > last) throw Error(ErrorKind::invalid_range, "empty sequence domain");
}

BoundedSeq BoundedSeq::from_signs(const SignSeq& seq) {
    return BoundedSeq([seq](std::uint64_t n) { return cplx(seq[n], 0.0); }, 1.0, seq.start(), seq.end() - 1);
}

BoundedSeq BoundedSeq::from_samples(std::vector<cplx> samples, double sup_bound) {
    if (samples.empty()) throw Error(ErrorKind::invalid_range, "no samples");
    if (sup_bound < 0.0) {
        sup_bound = 0.0;
        for (const cplx& z : samples) sup_bound = std::max(sup_bound, std::abs(z));
    }
    const std::uint64_t last = samples.size();
    auto shared = std::make_shared<const std::vector<cplx>>(std::move(samples));
    return BoundedSeq([shared](std::uint64_t n) { return (*shared)[n - 1]; }, sup_bound, 1, last);
}

BoundedSeq BoundedSeq::exponential(double alpha, cplx amplitude) {
    return BoundedSeq([alpha, amplitude](std::uint64_t n) { return amplitude * cis(n, alpha); }, std::abs(amplitude));
}

BoundedSeq BoundedSeq::constant(cplx value) {
    return BoundedSeq([value](std::uint64_t) { return value; }, std::abs(value));
}

cplx BoundedSeq::operator()(std::uint64_t n) const {
    if (n < first_ || n > last_)
        throw Error(ErrorKind::invalid_range, "sequence evaluated at " + std::to_string(n) + " outside its domain");
    return eval_(n);
}

std::vector<cplx> BoundedSeq::sample(std::uint64_t first, std::uint64_t count) const {
    if (count == 0) return {};
    if (first < first_ || first > last_ || count - 1 > last_ - first)
        throw Error(ErrorKind::invalid_range, "sample range outside the sequence domain");
    std::vector<cplx> out(count);
    for (std::uint64_t i = 0; i < count; ++i) out[i] = eval_(first + i);
    return out;
}

BoundedSeq modulate(const BoundedSeq& g, double theta) {
    return BoundedSeq([g, theta](std::uint64_t n) { return g(n) * cis(n, theta); }, g.sup_bound(), g.first(),
                      g.last());
}

cplx CorrelationTable::at(std::int64_t k) const {
    const std::uint64_t mag = k < 0 ? static_cast<std::uint64_t>(-k) : static_cast<std::uint64_t>(k);
    if (mag > K) throw Error(ErrorKind::lag_too_large, "lag beyond table");
    return k < 0 ? std::conj(values[mag]) : values[mag];
}

CorrelationTable correlation_table(const BoundedSeq& g, std::uint64_t N, std::uint64_t K) {
    if (N < 1) throw Error(ErrorKind::invalid_range, "N must be >= 1");
    if (K >= N) throw Error(ErrorKind::lag_too_large, "need K < N");
    const auto sums = sharded_reduce<LagSums>(1, N + 1, [&](std::uint64_t lo, std::uint64_t hi, LagSums& acc) {
        const auto s = g.sample(lo, hi - lo + K);
        acc.sums.resize(K + 1);
        for (std::uint64_t i = 0; i < hi - lo; ++i) {
            const cplx base = std::conj(s[i]);
            for (std::uint64_t k = 0; k <= K; ++k) acc.sums[k].add(s[i + k] * base);
        }
    });
    CorrelationTable table{N, K, g.sup_bound(), std::vector<cplx>(K + 1)};
    for (std::uint64_t k = 0; k <= K; ++k) table.values[k] = sums.sums[k].value() / static_cast<double>(N);
    // F(0) is a sum of |g|^2; drop the imaginary rounding residue.
    table.values[0] = {table.values[0].real(), 0.0};
    return table;
}

cplx cross_correlation(const BoundedSeq& g, const BoundedSeq& h, std::uint64_t N) {
    if (N < 1) throw Error(ErrorKind::invalid_range, "N must be >= 1");
    const auto total = sharded_reduce<CplxSum>(1, N + 1, [&](std::uint64_t lo, std::uint64_t hi, CplxSum& acc) {
        const auto a = g.sample(lo, hi - lo);
        const auto b = h.sample(lo, hi - lo);
        for (std::size_t i = 0; i < a.size(); ++i) acc.s.add(a[i] * std::conj(b[i]));
    });
    return total.s.value() / static_cast<double>(N);
}

TrigPoly::TrigPoly(std::vector<TrigTerm> terms) : terms_(std::move(terms)) {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const double a = terms_[i].alpha;
        if (!(a >= 0.0 && a < kTwoPi)) throw Error(ErrorKind::invalid_argument, "frequency outside [0, 2pi)");
        for (std::size_t j = 0; j < i; ++j)
            if (terms_[j].alpha == a) throw Error(ErrorKind::invalid_argument, "duplicate frequency");
    }
}

cplx TrigPoly::operator()(std::uint64_t n) const noexcept {
    ComplexSum s;
    for (const TrigTerm& t : terms_) s.add(t.coeff * cis(n, t.alpha));
    return s.value();
}

std::vector<cplx> TrigPoly::sample(std::uint64_t first, std::uint64_t count) const {
    std::vector<cplx> out(count, cplx{});
    for (const TrigTerm& t : terms_) {
        const cplx step = cis(1, t.alpha);
        cplx z;
        for (std::uint64_t i = 0; i < count; ++i) {
            z = (i % kReanchor == 0) ? t.coeff * cis(first + i, t.alpha) : z * step;
            out[i] += z;
        }
    }
    return out;
}

TrigPoly TrigPoly::truncated(std::size_t m) const {
    return TrigPoly(std::vector<TrigTerm>(terms_.begin(), terms_.begin() + std::min(m, terms_.size())));
}

TrigPoly TrigPoly::shifted(double theta) const {
    std::vector<TrigTerm> out = terms_;
    for (TrigTerm& t : out) t.alpha = wrap_angle(t.alpha + theta);
    return TrigPoly(std::move(out));
}

double besicovitch_distance(const BoundedSeq& g, const TrigPoly& P, std::uint64_t N) {
    if (N < 1) throw Error(ErrorKind::invalid_range, "N must be >= 1");
    const auto total = sharded_reduce<RealSum>(1, N + 1, [&](std::uint64_t lo, std::uint64_t hi, RealSum& acc) {
        const auto a = g.sample(lo, hi - lo);
        const auto b = P.sample(lo, hi - lo);
        for (std::size_t i = 0; i < a.size(); ++i) acc.s.add(std::abs(a[i] - b[i]));
    });
    return total.s.value() / static_cast<double>(N);
}

TrigPoly trig_approx(const BoundedSeq& g, std::size_t M, std::uint64_t N) {
    if (M < 1 || N < 2 * M) throw Error(ErrorKind::invalid_argument, "trig_approx needs M >= 1 and N >= 2M");
    const auto x = g.sample(1, N);
    if (std::all_of(x.begin(), x.end(), [](const cplx& z) { return z == cplx{}; })) return {};

    // X_j = sum_{t=0}^{N-1} g(t+1) e^{-2 pi i j t / N}
    const auto X = dft(x, FftSign::forward);
    std::vector<double> power(N);
    for (std::uint64_t j = 0; j < N; ++j) power[j] = std::norm(X[j]);
    std::vector<std::uint64_t> order(N);
    std::iota(order.begin(), order.end(), std::uint64_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint64_t a, std::uint64_t b) { return power[a] > power[b]; });

    std::vector<std::uint64_t> chosen;
    for (const std::uint64_t j : order) {
        if (chosen.size() == M || power[j] <= 0.0) break;
        const bool near = std::any_of(chosen.begin(), chosen.end(), [&](std::uint64_t c) {
            const std::uint64_t d = j > c ? j - c : c - j;
            return std::min(d, N - d) <= 2;
        });
        if (!near) chosen.push_back(j);
    }

    std::vector<TrigTerm> terms;
    terms.reserve(chosen.size());
    for (const std::uint64_t j : chosen) {
        const double alpha = kTwoPi * static_cast<double>(j) / static_cast<double>(N);
        // sum_{n=1}^{N} g(n) e^{-i n alpha} = e^{-i alpha} X_j
        terms.push_back({alpha, std::conj(cis(1, alpha)) * X[j] / static_cast<double>(N)});
    }
    return TrigPoly(std::move(terms));
}

void write_csv(std::ostream& out, const CorrelationTable& table) {
    out << "k,re,im\n";
    for (std::uint64_t k = 0; k <= table.K; ++k)
        out << k << ',' << fmt_double(table.values[k].real()) << ',' << fmt_double(table.values[k].imag()) << '\n';
}

void write_csv(std::ostream& out, const TrigPoly& poly) {
    out << "alpha,re_c,im_c\n";
    for (const TrigTerm& t : poly.terms())
        out << fmt_double(t.alpha) << ',' << fmt_double(t.coeff.real()) << ',' << fmt_double(t.coeff.imag()) << '\n';
}

}  // namespace mfl
