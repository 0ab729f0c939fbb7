#include "mfl/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfl/error.hpp"
#include "mfl/parallel.hpp"

namespace mfl {

std::string_view to_string(SeqLabel label) noexcept {
    switch (label) {
    case SeqLabel::mobius: return "mobius";
    case SeqLabel::liouville: return "liouville";
    case SeqLabel::squarefree: return "squarefree";
    case SeqLabel::custom: return "custom";
    }
    return "custom";
}

SeqLabel parse_label(std::string_view name) {
    if (name == "mobius" || name == "mu") return SeqLabel::mobius;
    if (name == "liouville" || name == "lambda") return SeqLabel::liouville;
    if (name == "squarefree" || name == "mu2") return SeqLabel::squarefree;
    if (name == "custom") return SeqLabel::custom;
    throw Error(ErrorKind::invalid_argument, "unknown sequence label '" + std::string(name) + "'");
}

SignSeq::SignSeq(SeqLabel label, std::uint64_t start, std::vector<std::int8_t> values)
    : label_(label), start_(start) {
    if (start == 0) throw Error(ErrorKind::invalid_range, "windows are 1-based");
    if (values.size() > kMaxIndex - start) throw Error(ErrorKind::range_overflow, "window end exceeds index width");
    for (const std::int8_t v : values) {
        if (v < -1 || v > 1) throw Error(ErrorKind::invalid_argument, "value outside {-1,0,+1}");
        if (label == SeqLabel::liouville && v == 0)
            throw Error(ErrorKind::invalid_argument, "liouville window contains 0");
        if (label == SeqLabel::squarefree && v == -1)
            throw Error(ErrorKind::invalid_argument, "squarefree window contains -1");
    }
    auto store = std::make_shared<const std::vector<std::int8_t>>(std::move(values));
    data_ = store->data();
    size_ = store->size();
    store_ = std::move(store);
}

std::int8_t SignSeq::at(std::uint64_t n) const {
    if (n < start_ || n >= end())
        throw Error(ErrorKind::invalid_range, "index " + std::to_string(n) + " outside window [" +
                                                  std::to_string(start_) + ", " + std::to_string(end()) + ")");
    return data_[n - start_];
}

SignSeq SignSeq::slice(std::uint64_t lo, std::uint64_t hi) const {
    if (lo >= hi || !covers(lo, hi)) throw Error(ErrorKind::invalid_range, "slice outside window");
    return SignSeq(label_, lo, store_, data_ + (lo - start_), hi - lo);
}

bool operator==(const SignSeq& a, const SignSeq& b) noexcept {
    return a.label_ == b.label_ && a.start_ == b.start_ && a.size_ == b.size_ &&
           std::equal(a.data_, a.data_ + a.size_, b.data_);
}

std::uint64_t isqrt(std::uint64_t n) noexcept {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

PrimeBasis primes_upto(std::uint64_t bound) {
    if (bound < 2) throw Error(ErrorKind::invalid_range, "prime bound must be >= 2");
    std::vector<bool> composite(bound + 1, false);
    PrimeBasis basis{bound, {}};
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        basis.primes.push_back(i);
        if (i <= bound / i)
            for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return basis;
}

namespace {

__extension__ typedef unsigned __int128 u128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// First multiple of q that is >= lo.
std::uint64_t first_multiple(std::uint64_t q, std::uint64_t lo) { return (lo + q - 1) / q * q; }

void sieve_segment(SeqLabel label, std::uint64_t lo, std::uint64_t hi, std::span<const std::uint64_t> primes,
                   std::int8_t* out) {
    const std::uint64_t len = hi - lo;
    if (label == SeqLabel::squarefree) {
        std::fill(out, out + len, std::int8_t{1});
        for (const std::uint64_t p : primes) {
            const std::uint64_t pp = p * p;
            if (pp >= hi) break;
            for (std::uint64_t m = first_multiple(pp, lo); m < hi; m += pp) out[m - lo] = 0;
        }
        return;
    }

    // prod[i] accumulates the part of lo+i built from primes <= sqrt(hi-1);
    // whatever is left over is a single prime, which flips the sign once more.
    std::vector<std::uint64_t> prod(len, 1);
    std::fill(out, out + len, std::int8_t{1});
    for (const std::uint64_t p : primes) {
        if (p * p >= hi) break;
        if (label == SeqLabel::mobius) {
            for (std::uint64_t m = first_multiple(p, lo); m < hi; m += p) {
                prod[m - lo] *= p;
                out[m - lo] = static_cast<std::int8_t>(-out[m - lo]);
            }
            const std::uint64_t pp = p * p;
            for (std::uint64_t m = first_multiple(pp, lo); m < hi; m += pp) out[m - lo] = 0;
        } else {
            for (std::uint64_t q = p;; q *= p) {
                for (std::uint64_t m = first_multiple(q, lo); m < hi; m += q) {
                    prod[m - lo] *= p;
                    out[m - lo] = static_cast<std::int8_t>(-out[m - lo]);
                }
                if (q > (hi - 1) / p) break;
            }
        }
    }
    for (std::uint64_t i = 0; i < len; ++i)
        if (prod[i] != lo + i) out[i] = static_cast<std::int8_t>(-out[i]);
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (const std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (const std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

SignSeq sieve(SeqLabel label, std::uint64_t lo, std::uint64_t hi) {
    if (label == SeqLabel::custom) throw Error(ErrorKind::invalid_argument, "cannot sieve a custom sequence");
    if (hi > kMaxIndex) throw Error(ErrorKind::range_overflow, "hi exceeds 2^63-1");
    if (lo < 1 || lo >= hi) throw Error(ErrorKind::invalid_range, "need 1 <= lo < hi");

    const std::uint64_t root = isqrt(hi - 1);
    const std::vector<std::uint64_t> primes = root >= 2 ? primes_upto(root).primes : std::vector<std::uint64_t>{};

    std::vector<std::int8_t> values(hi - lo);
    const std::uint64_t segments = (hi - lo + kSegmentSize - 1) / kSegmentSize;
    parallel_for(segments, [&](std::size_t s) {
        const std::uint64_t seg_lo = lo + s * kSegmentSize;
        const std::uint64_t seg_hi = std::min(hi, seg_lo + kSegmentSize);
        sieve_segment(label, seg_lo, seg_hi, primes, values.data() + (seg_lo - lo));
    });
    return SignSeq(label, lo, std::move(values));
}

std::vector<std::uint64_t> factor_oracle(std::uint64_t n) {
    if (n == 0) throw Error(ErrorKind::invalid_range, "factor_oracle needs n >= 1");
    if (n > 1'000'000'000ULL) throw Error(ErrorKind::range_overflow, "factor_oracle supports n <= 1e9");
    std::vector<std::uint64_t> factors;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        while (n % d == 0) {
            factors.push_back(d);
            n /= d;
        }
    }
    if (n > 1) factors.push_back(n);
    return factors;
}

}  // namespace mfl
