#pragma once

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace circuitflow {

// Coefficients live in a commutative ring supplied as a value type with the
// usual operators. Two instantiations ship: arbitrary-precision integers
// (Int) and prime fields (Fp<M>).
template <typename R>
concept CommutativeRing = requires(R a, R b) {
    { a + b } -> std::convertible_to<R>;
    { a - b } -> std::convertible_to<R>;
    { a * b } -> std::convertible_to<R>;
    { -a } -> std::convertible_to<R>;
    { a == b } -> std::convertible_to<bool>;
    R{0};
    R{1};
    R{std::int64_t{2}};
};

using Int = boost::multiprecision::cpp_int;

// 2^61 - 1, a Mersenne prime. Default modulus for randomized equivalence
// testing; large enough to dwarf every degree reachable at test scale.
inline constexpr std::uint64_t kDefaultPrime = 2305843009213693951ULL;

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

} // namespace detail

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                            23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                            23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// Prime-field element with compile-time modulus. Values are kept in
// canonical form 0 <= value < M.
template <std::uint64_t M>
class Fp {
    static_assert(M >= 2, "modulus must be at least 2");

public:
    constexpr Fp() : v_(0) {}
    constexpr Fp(std::int64_t x) {
        std::int64_t r = x % static_cast<std::int64_t>(M);
        if (r < 0) r += static_cast<std::int64_t>(M);
        v_ = static_cast<std::uint64_t>(r);
    }

    static constexpr std::uint64_t modulus() { return M; }
    constexpr std::uint64_t canonical() const { return v_; }

    friend Fp operator+(Fp a, Fp b) {
        std::uint64_t s = a.v_ + b.v_;
        if (s >= M) s -= M;
        return from_raw(s);
    }
    friend Fp operator-(Fp a, Fp b) {
        std::uint64_t s = a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + M - b.v_;
        return from_raw(s);
    }
    friend Fp operator*(Fp a, Fp b) { return from_raw(detail::mulmod_u64(a.v_, b.v_, M)); }
    friend Fp operator-(Fp a) { return from_raw(a.v_ == 0 ? 0 : M - a.v_); }
    friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
    friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }

private:
    static constexpr Fp from_raw(std::uint64_t v) {
        Fp r;
        r.v_ = v;
        return r;
    }
    std::uint64_t v_;
};

// Per-ring glue used by parsing, printing, and field evaluation.
template <typename R>
struct ring_traits;

template <>
struct ring_traits<Int> {
    static std::string name() { return "integer"; }
    static std::string to_string(const Int& v) { return v.str(); }
    static Int from_string(const std::string& s) { return Int(s); }
    // Canonical residue of v modulo p.
    static std::uint64_t to_residue(const Int& v, std::uint64_t p) {
        Int r = v % p;
        if (r < 0) r += p;
        return static_cast<std::uint64_t>(r);
    }
};

template <std::uint64_t M>
struct ring_traits<Fp<M>> {
    static std::string name() { return "fp" + std::to_string(M); }
    static std::string to_string(const Fp<M>& v) { return std::to_string(v.canonical()); }
    static Fp<M> from_string(const std::string& s) {
        Int x(s);
        Int r = x % M;
        if (r < 0) r += M;
        return Fp<M>(static_cast<std::int64_t>(static_cast<std::uint64_t>(r) % M));
    }
    // Field elements only evaluate in their own field; anything else would
    // not be a ring homomorphism.
    static std::uint64_t to_residue(const Fp<M>& v, std::uint64_t p) {
        if (p != M)
            throw std::invalid_argument(
                "ring: cannot evaluate mod " + std::to_string(p) +
                " a constant from the field of modulus " + std::to_string(M));
        return v.canonical();
    }
};

} // namespace circuitflow
