#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include "mfl/sieve.hpp"

namespace mfl {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// e^{i n theta}, with the phase reduced in extended precision.
cplx cis(std::uint64_t n, double theta) noexcept;

/// Wraps an angle into [0, 2pi).
double wrap_angle(double theta) noexcept;

/// A bounded complex sequence n -> g(n), n >= 1, with |g(n)| <= sup_bound on
/// its domain [first, last].
class BoundedSeq {
public:
    using Evaluator = std::function<cplx(std::uint64_t)>;

    BoundedSeq(Evaluator eval, double sup_bound, std::uint64_t first = 1,
               std::uint64_t last = std::numeric_limits<std::uint64_t>::max());

    static BoundedSeq from_signs(const SignSeq& seq);
    /// Samples are g(1), g(2), ...; sup_bound defaults to max |sample|.
    static BoundedSeq from_samples(std::vector<cplx> samples, double sup_bound = -1.0);
    static BoundedSeq exponential(double alpha, cplx amplitude = 1.0);
    static BoundedSeq constant(cplx value);

    /// Throws invalid-range outside the domain.
    cplx operator()(std::uint64_t n) const;

    /// g(first), ..., g(first + count - 1).
    std::vector<cplx> sample(std::uint64_t first, std::uint64_t count) const;

    double sup_bound() const noexcept { return sup_bound_; }
    std::uint64_t first() const noexcept { return first_; }
    std::uint64_t last() const noexcept { return last_; }

private:
    Evaluator eval_;
    double sup_bound_;
    std::uint64_t first_;
    std::uint64_t last_;
};

/// n -> g(n) e^{i n theta}.
BoundedSeq modulate(const BoundedSeq& g, double theta);

/// F_N(k), k = 0..K. Readers obtain negative lags through at().
struct CorrelationTable {
    std::uint64_t N = 0;
    std::uint64_t K = 0;
    double sup_bound = 0.0;
    std::vector<cplx> values;

    /// F(k) for |k| <= K, using F(-k) = conj(F(k)).
    cplx at(std::int64_t k) const;
};

/// F_N(k) = (1/N) sum_{n=1..N} g(n+k) conj(g(n)), k = 0..K. Needs K < N.
CorrelationTable correlation_table(const BoundedSeq& g, std::uint64_t N, std::uint64_t K);

/// (1/N) sum_{j=1..N} g(j) conj(h(j)).
cplx cross_correlation(const BoundedSeq& g, const BoundedSeq& h, std::uint64_t N);

struct TrigTerm {
    double alpha;  // frequency in [0, 2pi)
    cplx coeff;
};

/// P(n) = sum_k c_k e^{i alpha_k n} with pairwise distinct frequencies.
class TrigPoly {
public:
    TrigPoly() = default;
    explicit TrigPoly(std::vector<TrigTerm> terms);

    const std::vector<TrigTerm>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    cplx operator()(std::uint64_t n) const noexcept;
    std::vector<cplx> sample(std::uint64_t first, std::uint64_t count) const;

    /// The first m terms (in stored order).
    TrigPoly truncated(std::size_t m) const;
    /// Frequencies shifted by theta (mod 2pi); same coefficients.
    TrigPoly shifted(double theta) const;

private:
    std::vector<TrigTerm> terms_;
};

/// (1/N) sum_{t=1..N} |g(t) - P(t)|.
double besicovitch_distance(const BoundedSeq& g, const TrigPoly& P, std::uint64_t N);

/// Picks the M strongest bins of the size-N periodogram of g (no two within
/// 2 bins of each other, circularly) and projects g onto them. Strongest
/// first; ties broken by lower bin. Empty when g vanishes on [1, N].
TrigPoly trig_approx(const BoundedSeq& g, std::size_t M, std::uint64_t N);

void write_csv(std::ostream& out, const CorrelationTable& table);
void write_csv(std::ostream& out, const TrigPoly& poly);

}  // namespace mfl
