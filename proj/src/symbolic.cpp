#include "mfl/symbolic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "mfl/error.hpp"
#include "mfl/parallel.hpp"
#include "mfl/summation.hpp"

namespace mfl {

namespace {

__extension__ typedef unsigned __int128 Code;

struct CodeHash {
    std::size_t operator()(Code c) const noexcept {
        const auto lo = static_cast<std::uint64_t>(c);
        const auto hi = static_cast<std::uint64_t>(c >> 64);
        return std::hash<std::uint64_t>{}(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
    }
};

constexpr std::uint64_t kMaxBlockLength = 64;

// 2 bits per symbol: 0 -> 00, +1 -> 01, -1 -> 11.
Code symbol_bits(std::int8_t s) { return s == 0 ? 0 : (s > 0 ? 1 : 3); }

std::string decode(Code c, std::uint64_t L) {
    std::string out(L, '0');
    for (std::uint64_t i = 0; i < L; ++i) {
        const auto bits = static_cast<unsigned>((c >> (2 * (L - 1 - i))) & 3);
        out[i] = bits == 0 ? '0' : (bits == 1 ? '1' : '-');
    }
    return out;
}

Code window_mask(std::uint64_t L) { return L == 64 ? ~Code{0} : ((Code{1} << (2 * L)) - 1); }

struct Count {
    std::uint64_t n = 0;
    void merge(const Count& o) { n += o.n; }
};

std::uint64_t prime_square(std::uint64_t p) {
    if (p >= (std::uint64_t{1} << 32)) throw Error(ErrorKind::range_overflow, "p^2 exceeds 64 bits");
    return p * p;
}

std::uint64_t count_residues(std::uint64_t pp, const SupportSet& A) {
    std::vector<std::uint64_t> r;
    r.reserve(A.size());
    for (const std::uint64_t a : A) r.push_back(a % pp);
    std::sort(r.begin(), r.end());
    return static_cast<std::uint64_t>(std::unique(r.begin(), r.end()) - r.begin());
}

// prod_{p in basis} (1 - t(p, S)/p^2), with t = |S| once p^2 exceeds the span of S.
double euler_product(const SupportSet& S, const PrimeBasis& basis) {
    if (S.empty()) return 1.0;
    const std::uint64_t span = S.back() - S.front();
    double prod = 1.0;
    for (const std::uint64_t p : basis.primes) {
        const std::uint64_t pp = p * p;
        const std::uint64_t t = pp > span ? S.size() : count_residues(pp, S);
        if (t >= pp) return 0.0;
        prod *= 1.0 - static_cast<double>(t) / static_cast<double>(pp);
    }
    return prod;
}

void check_mirsky_inputs(const SupportSet& ones, const SupportSet& zeros, const PrimeBasis& basis) {
    for (const std::uint64_t b : zeros)
        if (std::binary_search(ones.begin(), ones.end(), b))
            throw Error(ErrorKind::non_disjoint, "ones and zeros share shift " + std::to_string(b));
    if (zeros.size() > kMaxZeroSet) throw Error(ErrorKind::invalid_argument, "at most 20 zero positions");
    if (basis.bound < 100) throw Error(ErrorKind::invalid_argument, "prime basis bound must be >= 100");
}

}  // namespace

void throw_symbol_error(std::int8_t symbol) {
    throw Error(ErrorKind::invalid_argument, "symbol " + std::to_string(symbol) + " outside the block alphabet");
}

SupportSet make_support(std::vector<std::uint64_t> shifts) {
    std::sort(shifts.begin(), shifts.end());
    shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());
    return shifts;
}

Pattern::Pattern(std::vector<Term> terms) : terms_(std::move(terms)) {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.shift < b.shift; });
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].exponent != 1 && terms_[i].exponent != 2)
            throw Error(ErrorKind::pattern, "exponents must be 1 or 2");
        if (i > 0 && terms_[i - 1].shift == terms_[i].shift)
            throw Error(ErrorKind::pattern, "shift " + std::to_string(terms_[i].shift) + " repeated");
    }
}

SupportSet Pattern::support() const {
    SupportSet s;
    for (const Term& t : terms_) s.push_back(t.shift);
    return s;
}

bool Pattern::all_squared() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.exponent == 2; });
}

Block3 to_block(const SignSeq& seq) {
    return Block3(seq.start(), std::vector<std::int8_t>(seq.values().begin(), seq.values().end()));
}

Block2 to_block2(const SignSeq& seq) {
    std::vector<std::int8_t> v(seq.values().begin(), seq.values().end());
    for (std::int8_t& s : v) s = static_cast<std::int8_t>(s * s);
    return Block2(seq.start(), std::move(v));
}

std::uint64_t t_classes(std::uint64_t p, const SupportSet& A) {
    if (!is_prime(p)) throw Error(ErrorKind::non_prime, std::to_string(p) + " is not prime");
    if (A.empty()) throw Error(ErrorKind::invalid_argument, "t(p, A) needs a nonempty A");
    return count_residues(prime_square(p), A);
}

bool is_admissible(const SupportSet& A) {
    const SupportSet S = make_support(A);
    const std::uint64_t n = S.size();
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (!is_prime(p)) continue;
        if (count_residues(p * p, S) >= p * p) return false;
    }
    return true;
}

double mirsky_product(const SupportSet& ones_in, const SupportSet& zeros_in, const PrimeBasis& basis) {
    const SupportSet ones = make_support(ones_in);
    const SupportSet zeros = make_support(zeros_in);
    check_mirsky_inputs(ones, zeros, basis);
    CompensatedSum total;
    const std::uint64_t subsets = std::uint64_t{1} << zeros.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        SupportSet S = ones;
        for (std::size_t i = 0; i < zeros.size(); ++i)
            if (mask >> i & 1) S.push_back(zeros[i]);
        S = make_support(std::move(S));
        const double sign = (std::popcount(mask) % 2 == 0) ? 1.0 : -1.0;
        total.add(sign * euler_product(S, basis));
    }
    return total.value();
}

MirskyEstimate mirsky_cylinder_density(const SupportSet& ones_in, const SupportSet& zeros_in, const PrimeBasis& basis,
                                       std::uint64_t N_check, const SignSeq& squarefree) {
    const SupportSet ones = make_support(ones_in);
    const SupportSet zeros = make_support(zeros_in);
    check_mirsky_inputs(ones, zeros, basis);
    if (N_check < 1) throw Error(ErrorKind::invalid_range, "N_check must be >= 1");
    const std::uint64_t reach = std::max(ones.empty() ? 0 : ones.back(), zeros.empty() ? 0 : zeros.back());
    if (!squarefree.covers(1, N_check + reach + 1))
        throw Error(ErrorKind::invalid_range, "squarefree window does not cover [1, N_check + max shift]");

    MirskyEstimate est;
    est.n_check = N_check;
    est.product_estimate = mirsky_product(ones, zeros, basis);
    const double width = static_cast<double>(ones.size() + zeros.size());
    est.tail_factor_lower = std::max(0.0, 1.0 - width / static_cast<double>(basis.bound));

    const auto hits = sharded_reduce<Count>(1, N_check + 1, [&](std::uint64_t lo, std::uint64_t hi, Count& acc) {
        for (std::uint64_t n = lo; n < hi; ++n) {
            bool ok = true;
            for (const std::uint64_t a : ones)
                if (squarefree[n + a] == 0) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            for (const std::uint64_t b : zeros)
                if (squarefree[n + b] != 0) {
                    ok = false;
                    break;
                }
            if (ok) ++acc.n;
        }
    });
    est.empirical = static_cast<double>(hits.n) / static_cast<double>(N_check);
    return est;
}

MirskyEstimate mirsky_cylinder_density(const SupportSet& ones, const SupportSet& zeros, const PrimeBasis& basis,
                                       std::uint64_t N_check) {
    std::uint64_t reach = 0;
    for (const std::uint64_t a : ones) reach = std::max(reach, a);
    for (const std::uint64_t b : zeros) reach = std::max(reach, b);
    return mirsky_cylinder_density(ones, zeros, basis, N_check, sieve(SeqLabel::squarefree, 1, N_check + reach + 1));
}

BlockTable empirical_block_measure(std::span<const std::int8_t> x, std::uint64_t L, std::uint64_t N) {
    if (L < 1 || L > kMaxBlockLength) throw Error(ErrorKind::invalid_argument, "block length must be in [1, 64]");
    if (N < 1) throw Error(ErrorKind::invalid_range, "N must be >= 1");
    if (N + L > x.size()) throw Error(ErrorKind::window_too_long, "need N + L <= length of x");

    std::unordered_map<Code, std::uint64_t, CodeHash> counts;
    const Code mask = window_mask(L);
    Code code = 0;
    for (std::uint64_t i = 0; i < N + L - 1; ++i) {
        code = ((code << 2) | symbol_bits(x[i])) & mask;
        if (i + 1 >= L) ++counts[code];
    }
    BlockTable table{L, N, {}, {}};
    for (const auto& [c, n] : counts) table.counts.emplace(decode(c, L), n);
    for (const auto& [block, n] : table.counts)
        table.freq.emplace(block, static_cast<double>(n) / static_cast<double>(N));
    return table;
}

double shift_invariance_defect(const BlockTable& table) {
    if (table.L < 1 || table.N < 1) throw Error(ErrorKind::invalid_argument, "empty block table");
    std::map<std::string, std::int64_t> diff;
    for (const auto& [block, n] : table.counts) {
        diff[block.substr(0, table.L - 1)] += static_cast<std::int64_t>(n);
        diff[block.substr(1)] -= static_cast<std::int64_t>(n);
    }
    std::uint64_t l1 = 0;
    for (const auto& [block, d] : diff) l1 += static_cast<std::uint64_t>(d < 0 ? -d : d);
    return 0.5 * static_cast<double>(l1) / static_cast<double>(table.N);
}

void write_csv(std::ostream& out, const BlockTable& table) {
    out << "block,frequency\n";
    char buf[32];
    for (const auto& [block, f] : table.freq) {
        std::snprintf(buf, sizeof buf, "%.17g", f);
        out << block << ',' << buf << '\n';
    }
}

BlockEntropy block_entropy_estimate(std::span<const std::int8_t> x, const std::vector<std::uint64_t>& L_grid,
                                    std::uint64_t N) {
    BlockEntropy out;
    out.L_grid = L_grid;
    for (const std::uint64_t L : L_grid) {
        if (L < 1 || L > kMaxBlockLength) throw Error(ErrorKind::invalid_argument, "block length must be in [1, 64]");
        if (N < 1 || N + L - 1 > x.size()) throw Error(ErrorKind::window_too_long, "windows run past the data");
        std::unordered_set<Code, CodeHash> seen;
        const Code mask = window_mask(L);
        Code code = 0;
        for (std::uint64_t i = 0; i < N + L - 1; ++i) {
            code = ((code << 2) | symbol_bits(x[i])) & mask;
            if (i + 1 >= L) seen.insert(code);
        }
        out.distinct.push_back(seen.size());
        out.exponent.push_back(std::log2(static_cast<double>(seen.size())) / static_cast<double>(L));
        out.envelope.push_back(out.envelope.empty() ? out.exponent.back()
                                                    : std::min(out.envelope.back(), out.exponent.back()));
    }
    return out;
}

Block2 square_map(const Block3& y) {
    std::vector<std::int8_t> v(y.symbols().begin(), y.symbols().end());
    for (std::int8_t& s : v) s = static_cast<std::int8_t>(s * s);
    return Block2(y.start(), std::move(v));
}

SkewPoint::SkewPoint(Block2 x_in, std::vector<std::int8_t> omega_in) : x(std::move(x_in)), omega(std::move(omega_in)) {
    for (const std::int8_t s : omega)
        if (s != 1 && s != -1) throw Error(ErrorKind::invalid_argument, "omega symbols must be +-1");
    const auto ones = static_cast<std::size_t>(std::count(x.symbols().begin(), x.symbols().end(), std::int8_t{1}));
    if (omega.size() < ones) throw Error(ErrorKind::omega_too_short, "omega cannot sign every 1 of x");
}

SkewPoint skew_step(const SkewPoint& pt) {
    if (pt.x.empty()) throw Error(ErrorKind::exhausted_block, "x has no symbol left to shift");
    const std::size_t drop = pt.x[0] == 1 ? 1 : 0;
    if (drop > pt.omega.size()) throw Error(ErrorKind::exhausted_block, "omega exhausted");
    Block2 x(pt.x.start() + 1, std::vector<std::int8_t>(pt.x.symbols().begin() + 1, pt.x.symbols().end()));
    return SkewPoint(std::move(x), std::vector<std::int8_t>(pt.omega.begin() + static_cast<std::ptrdiff_t>(drop),
                                                            pt.omega.end()));
}

Block3 phi_assemble(const Block2& x, std::span<const std::int8_t> omega) {
    std::vector<std::int8_t> out(x.size(), 0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        if (k >= omega.size()) throw Error(ErrorKind::omega_too_short, "omega cannot sign every 1 of x");
        if (omega[k] != 1 && omega[k] != -1) throw Error(ErrorKind::invalid_argument, "omega symbols must be +-1");
        out[i] = omega[k++];
    }
    return Block3(x.start(), std::move(out));
}

std::pair<Block2, std::vector<std::int8_t>> phi_disassemble(const Block3& y) {
    std::vector<std::int8_t> signs;
    for (const std::int8_t s : y.symbols())
        if (s != 0) signs.push_back(s);
    return {square_map(y), std::move(signs)};
}

}  // namespace mfl
