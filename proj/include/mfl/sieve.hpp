#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace mfl {

/// Largest index any window may reach (exclusive upper bound of a window).
inline constexpr std::uint64_t kMaxIndex = (std::uint64_t{1} << 63) - 1;

/// Segment width used by the segmented sieve.
inline constexpr std::uint64_t kSegmentSize = std::uint64_t{1} << 20;

enum class SeqLabel : std::uint8_t { mobius = 0, liouville = 1, squarefree = 2, custom = 3 };

std::string_view to_string(SeqLabel label) noexcept;
SeqLabel parse_label(std::string_view name);

/// Immutable window [start, start + size) of a {-1, 0, +1}-valued arithmetic
/// function. Copies share storage; slices are O(1).
class SignSeq {
public:
    /// Validates the alphabet and the label invariants (liouville has no
    /// zeros, squarefree has no -1).
    SignSeq(SeqLabel label, std::uint64_t start, std::vector<std::int8_t> values);

    SeqLabel label() const noexcept { return label_; }
    std::uint64_t start() const noexcept { return start_; }
    std::uint64_t end() const noexcept { return start_ + size_; }
    std::uint64_t size() const noexcept { return size_; }
    bool covers(std::uint64_t lo, std::uint64_t hi) const noexcept {
        return lo >= start_ && hi <= end();
    }

    /// Value at absolute index n; unchecked.
    std::int8_t operator[](std::uint64_t n) const noexcept { return data_[n - start_]; }
    /// Value at absolute index n; throws invalid-range outside the window.
    std::int8_t at(std::uint64_t n) const;

    std::span<const std::int8_t> values() const noexcept { return {data_, size_}; }

    /// Sub-window [lo, hi) sharing storage.
    SignSeq slice(std::uint64_t lo, std::uint64_t hi) const;

    friend bool operator==(const SignSeq& a, const SignSeq& b) noexcept;

private:
    SignSeq(SeqLabel label, std::uint64_t start, std::shared_ptr<const std::vector<std::int8_t>> store,
            const std::int8_t* data, std::uint64_t size)
        : label_(label), start_(start), store_(std::move(store)), data_(data), size_(size) {}

    SeqLabel label_;
    std::uint64_t start_;
    std::shared_ptr<const std::vector<std::int8_t>> store_;
    const std::int8_t* data_;
    std::uint64_t size_;
};

struct PrimeBasis {
    std::uint64_t bound = 0;
    std::vector<std::uint64_t> primes;
};

/// Sieves mu, lambda or mu^2 over [lo, hi) in kSegmentSize segments.
/// mu(1) = lambda(1) = mu^2(1) = 1.
SignSeq sieve(SeqLabel label, std::uint64_t lo, std::uint64_t hi);

/// Trial-division factorisation for 1 <= n <= 1e9, primes in nondecreasing
/// order. Test oracle for the sieve.
std::vector<std::uint64_t> factor_oracle(std::uint64_t n);

/// All primes <= bound (bound >= 2).
PrimeBasis primes_upto(std::uint64_t bound);

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n) noexcept;

std::uint64_t isqrt(std::uint64_t n) noexcept;

}  // namespace mfl
