#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfl/sieve.hpp"

namespace mfl {

/// Finite shift set A (0-based), kept sorted and deduplicated.
using SupportSet = std::vector<std::uint64_t>;

SupportSet make_support(std::vector<std::uint64_t> shifts);

/// Chowla-type pattern: distinct shifts a_s with exponents i_s in {1, 2}.
class Pattern {
public:
    struct Term {
        std::uint64_t shift;
        int exponent;
    };

    /// Rejects repeated shifts and exponents outside {1, 2}.
    explicit Pattern(std::vector<Term> terms);

    const std::vector<Term>& terms() const noexcept { return terms_; }
    SupportSet support() const;
    std::uint64_t max_shift() const noexcept { return terms_.empty() ? 0 : terms_.back().shift; }
    bool all_squared() const noexcept;

private:
    std::vector<Term> terms_;
};

enum class Alphabet { binary, ternary };

[[noreturn]] void throw_symbol_error(std::int8_t symbol);

/// Finite word over {0,1} (binary) or {-1,0,+1} (ternary) read from a start
/// offset.
template <Alphabet A>
class Block {
public:
    Block() = default;
    Block(std::uint64_t start, std::vector<std::int8_t> symbols) : start_(start), symbols_(std::move(symbols)) {
        for (const std::int8_t s : symbols_) check(s);
    }

    std::uint64_t start() const noexcept { return start_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    std::int8_t operator[](std::size_t i) const noexcept { return symbols_[i]; }
    std::span<const std::int8_t> symbols() const noexcept { return symbols_; }

    friend bool operator==(const Block&, const Block&) = default;

private:
    static void check(std::int8_t s) {
        const bool ok = A == Alphabet::binary ? (s == 0 || s == 1) : (s >= -1 && s <= 1);
        if (!ok) throw_symbol_error(s);
    }

    std::uint64_t start_ = 1;
    std::vector<std::int8_t> symbols_;
};

using Block2 = Block<Alphabet::binary>;
using Block3 = Block<Alphabet::ternary>;

Block3 to_block(const SignSeq& seq);
Block2 to_block2(const SignSeq& seq);

/// Number of residues of A modulo p^2. p must be prime, A nonempty.
std::uint64_t t_classes(std::uint64_t p, const SupportSet& A);

/// t(p, A) < p^2 for every prime p; only p^2 <= |A| can fail.
bool is_admissible(const SupportSet& A);

struct MirskyEstimate {
    double product_estimate = 0.0;  // truncated Euler product, inclusion-exclusion over B
    double empirical = 0.0;         // frequency over n <= N_check
    double tail_factor_lower = 1.0; // prod_{p > P} (1 - |A|/p^2) >= 1 - |A|/P
    std::uint64_t n_check = 0;
};

inline constexpr std::size_t kMaxZeroSet = 20;

/// Product side only: sum_{C subset of B} (-1)^{|C|} prod_{p in basis} (1 - t(p, A u C)/p^2).
double mirsky_product(const SupportSet& ones, const SupportSet& zeros, const PrimeBasis& basis);

/// Cylinder density of {mu^2(n+a) = 1 for a in ones, mu^2(n+b) = 0 for b in
/// zeros}. squarefree must be a mu^2 window starting at 1 that covers
/// [1, N_check + max shift].
MirskyEstimate mirsky_cylinder_density(const SupportSet& ones, const SupportSet& zeros, const PrimeBasis& basis,
                                       std::uint64_t N_check, const SignSeq& squarefree);
MirskyEstimate mirsky_cylinder_density(const SupportSet& ones, const SupportSet& zeros, const PrimeBasis& basis,
                                       std::uint64_t N_check);

/// Empirical distribution of the L-blocks starting at positions 1..N.
/// Keys are block strings: '-' for -1, '0', '1'.
struct BlockTable {
    std::uint64_t L = 0;
    std::uint64_t N = 0;
    std::map<std::string, std::uint64_t> counts;
    std::map<std::string, double> freq;  // counts / N
};

BlockTable empirical_block_measure(std::span<const std::int8_t> x, std::uint64_t L, std::uint64_t N);
template <Alphabet A>
BlockTable empirical_block_measure(const Block<A>& x, std::uint64_t L, std::uint64_t N) {
    return empirical_block_measure(x.symbols(), L, N);
}

/// Total-variation distance between the two (L-1)-marginals of the table
/// (drop the last symbol vs drop the first). Zero for a shift-invariant
/// table; at most 1/N for any table built from a single sequence.
double shift_invariance_defect(const BlockTable& table);

void write_csv(std::ostream& out, const BlockTable& table);

struct BlockEntropy {
    std::vector<std::uint64_t> L_grid;
    std::vector<std::uint64_t> distinct;  // number of distinct L-blocks
    std::vector<double> exponent;         // log2(distinct) / L
    std::vector<double> envelope;         // running minimum of exponent
};

/// Block-complexity exponents over the windows starting at 1..N; L <= 64.
BlockEntropy block_entropy_estimate(std::span<const std::int8_t> x, const std::vector<std::uint64_t>& L_grid,
                                    std::uint64_t N);

/// Coordinate-wise square.
Block2 square_map(const Block3& y);

/// (x, omega) with omega long enough to sign every 1 of x.
struct SkewPoint {
    Block2 x;
    std::vector<std::int8_t> omega;  // +-1 symbols

    SkewPoint(Block2 x, std::vector<std::int8_t> omega);
};

/// (x, omega) -> (Sx, S^{x_1} omega).
SkewPoint skew_step(const SkewPoint& pt);

/// Zeros off supp(x); the k-th one of x carries omega[k].
Block3 phi_assemble(const Block2& x, std::span<const std::int8_t> omega);

/// (square_map(y), signs of y along its support).
std::pair<Block2, std::vector<std::int8_t>> phi_disassemble(const Block3& y);

}  // namespace mfl
