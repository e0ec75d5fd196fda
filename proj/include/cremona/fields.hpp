#pragma once

// Exact coefficient fields. Two models are provided: a word-sized prime
// field F_p with a process-wide modulus (default p = 2^61 - 1, so products
// fit double-width native arithmetic) and arbitrary-precision rationals.
// Everything downstream is templated on one of the two.

#include <concepts>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "cremona/errors.hpp"
#include "cremona/rng.hpp"

namespace cremona {

inline constexpr u64 kMersenne61 = (u64{1} << 61) - 1;  // 2305843009213693951
inline constexpr u64 kDefaultPrime = kMersenne61;
inline constexpr u64 kMaxModulus = u64{1} << 62;

namespace detail {

inline u64 addmod(u64 a, u64 b, u64 p) {
    u64 s = a + b;  // p < 2^62, no overflow
    return s >= p ? s - p : s;
}

inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

inline u64 mulmod(u64 a, u64 b, u64 p) {
    u128 z = u128{a} * b;
    if (p == kMersenne61) {
        // 2^61 = 1 (mod p): fold high bits twice, then one final subtract
        u64 s = u64(z & kMersenne61) + u64(z >> 61);
        s = (s & kMersenne61) + (s >> 61);
        return s >= kMersenne61 ? s - kMersenne61 : s;
    }
    return u64(z % p);
}

inline u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin; the fixed witness set decides primality for
/// every 64-bit integer.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Prime field F_p with a process-wide modulus, NTL-style. The modulus is
/// set once before a computation starts; elements store canonical residues.
class Fp {
public:
    Fp() = default;

    static void set_modulus(u64 p) {
        if (p >= kMaxModulus) throw parse_error("prime field modulus must be < 2^62");
        if (!is_prime(p)) throw parse_error("prime field modulus " + std::to_string(p) + " is not prime");
        p_ = p;
    }
    static u64 modulus() { return p_; }

    static Fp zero() { return Fp{}; }
    static Fp one() { return from_raw(1 % p_); }
    static Fp from_raw(u64 v) {
        Fp x;
        x.v_ = v % p_;
        return x;
    }
    static Fp from_int(i64 v) {
        u64 m = v < 0 ? u64(-(v + 1)) + 1 : u64(v);
        u64 r = m % p_;
        return v < 0 ? from_raw(r == 0 ? 0 : p_ - r) : from_raw(r);
    }

    u64 raw() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    Fp& operator+=(const Fp& o) {
        v_ = detail::addmod(v_, o.v_, p_);
        return *this;
    }
    Fp& operator-=(const Fp& o) {
        v_ = detail::submod(v_, o.v_, p_);
        return *this;
    }
    Fp& operator*=(const Fp& o) {
        v_ = detail::mulmod(v_, o.v_, p_);
        return *this;
    }
    Fp& operator/=(const Fp& o) { return *this *= o.inverse(); }

    friend Fp operator+(Fp a, const Fp& b) { return a += b; }
    friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
    friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
    friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
    Fp operator-() const { return from_raw(v_ == 0 ? 0 : p_ - v_); }

    Fp inverse() const {
        if (v_ == 0) throw error("division by zero in F_p");
        return from_raw(detail::powmod(v_, p_ - 2, p_));
    }

    bool operator==(const Fp& o) const { return v_ == o.v_; }
    bool operator!=(const Fp& o) const { return v_ != o.v_; }

    /// Balanced decimal form: residues above p/2 print as negatives, so
    /// -1 round-trips as "-1" rather than a 19-digit residue.
    std::string to_string() const {
        if (v_ > p_ / 2) return "-" + std::to_string(p_ - v_);
        return std::to_string(v_);
    }

    /// Accepts a signed decimal integer of any length or a fraction "a/b".
    static Fp parse(std::string_view text);

    static Fp random(Rng& rng) { return from_raw(rng.below(p_)); }
    static Fp random_nonzero(Rng& rng) { return from_raw(1 + rng.below(p_ - 1)); }

    /// Size of the sample space used by randomized identity tests.
    static u64 sample_space_size() { return p_; }

private:
    u64 v_ = 0;
    static inline u64 p_ = kDefaultPrime;
};

/// RAII modulus switch, for tests that need a small field.
struct FpScope {
    explicit FpScope(u64 p) : saved_(Fp::modulus()) { Fp::set_modulus(p); }
    ~FpScope() { Fp::set_modulus(saved_); }
    FpScope(const FpScope&) = delete;
    FpScope& operator=(const FpScope&) = delete;

private:
    u64 saved_;
};

/// Exact rationals in lowest terms with positive denominator, backed by
/// Boost.Multiprecision.
class Rat {
public:
    using big_int = boost::multiprecision::cpp_int;
    using big_rational = boost::multiprecision::cpp_rational;

    Rat() = default;
    explicit Rat(big_rational v) : v_(std::move(v)) {}

    static Rat zero() { return Rat{}; }
    static Rat one() { return Rat(big_rational(1)); }
    static Rat from_int(i64 v) { return Rat(big_rational(v)); }

    bool is_zero() const { return v_.is_zero(); }

    Rat& operator+=(const Rat& o) {
        v_ += o.v_;
        return *this;
    }
    Rat& operator-=(const Rat& o) {
        v_ -= o.v_;
        return *this;
    }
    Rat& operator*=(const Rat& o) {
        v_ *= o.v_;
        return *this;
    }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw error("division by zero in Q");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    Rat operator-() const { return Rat(-v_); }

    Rat inverse() const {
        if (is_zero()) throw error("division by zero in Q");
        return Rat(1 / v_);
    }

    bool operator==(const Rat& o) const { return v_ == o.v_; }
    bool operator!=(const Rat& o) const { return v_ != o.v_; }

    const big_rational& value() const { return v_; }

    std::string to_string() const {
        std::string s = numerator(v_).str();
        if (denominator(v_) != 1) s += "/" + denominator(v_).str();
        return s;
    }

    static Rat parse(std::string_view text);

    // Random values are small integers: large enough for reliable identity
    // testing, small enough to keep exact elimination tractable.
    static constexpr i64 kSampleRadius = 1 << 10;
    static Rat random(Rng& rng) { return from_int(i64(rng.below(2 * kSampleRadius + 1)) - kSampleRadius); }
    static Rat random_nonzero(Rng& rng) {
        i64 v = i64(rng.below(2 * kSampleRadius)) - kSampleRadius;
        if (v >= 0) ++v;
        return from_int(v);
    }
    static u64 sample_space_size() { return 2 * kSampleRadius + 1; }

private:
    big_rational v_;
};

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

}  // namespace detail

inline Fp Fp::parse(std::string_view text) {
    bool neg = false;
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
        neg = text[0] == '-';
        text.remove_prefix(1);
    }
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    if (!detail::all_digits(num)) throw parse_error("bad field element '" + std::string(text) + "'");
    u64 v = 0;
    for (char c : num) v = detail::addmod(detail::mulmod(v, 10, p_), u64(c - '0') % p_, p_);
    if (slash != std::string_view::npos) {
        std::string_view den = text.substr(slash + 1);
        if (!detail::all_digits(den)) throw parse_error("bad field element '" + std::string(text) + "'");
        u64 d = 0;
        for (char c : den) d = detail::addmod(detail::mulmod(d, 10, p_), u64(c - '0') % p_, p_);
        if (d == 0) throw parse_error("zero denominator in field element");
        v = detail::mulmod(v, detail::powmod(d, p_ - 2, p_), p_);
    }
    Fp x = from_raw(v);
    return neg ? -x : x;
}

inline Rat Rat::parse(std::string_view text) {
    bool neg = false;
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
        neg = text[0] == '-';
        text.remove_prefix(1);
    }
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    if (!detail::all_digits(num)) throw parse_error("bad rational '" + std::string(text) + "'");
    const std::string num_str(num);
    big_int n{num_str};
    big_int d = 1;
    if (slash != std::string_view::npos) {
        std::string_view den = text.substr(slash + 1);
        if (!detail::all_digits(den)) throw parse_error("bad rational '" + std::string(text) + "'");
        const std::string den_str(den);
        d = big_int{den_str};
        if (d == 0) throw parse_error("zero denominator in rational");
    }
    Rat x{big_rational(n, d)};
    return neg ? -x : x;
}

template <class F>
concept field_type = requires(F a, F b, Rng& rng) {
    { F::zero() } -> std::same_as<F>;
    { F::one() } -> std::same_as<F>;
    { F::from_int(i64{}) } -> std::same_as<F>;
    { a + b } -> std::same_as<F>;
    { a - b } -> std::same_as<F>;
    { a * b } -> std::same_as<F>;
    { a / b } -> std::same_as<F>;
    { -a } -> std::same_as<F>;
    { a.inverse() } -> std::same_as<F>;
    { a.is_zero() } -> std::same_as<bool>;
    { a == b } -> std::same_as<bool>;
    { a.to_string() } -> std::same_as<std::string>;
    { F::parse(std::string_view{}) } -> std::same_as<F>;
    { F::random(rng) } -> std::same_as<F>;
    { F::random_nonzero(rng) } -> std::same_as<F>;
    { F::sample_space_size() } -> std::same_as<u64>;
};

/// Runtime field descriptor for documents and the CLI.
struct FieldSpec {
    bool rationals = false;
    u64 prime = kDefaultPrime;

    static FieldSpec make_rationals() { return FieldSpec{true, 0}; }
    static FieldSpec make_prime(u64 p) {
        FieldSpec s{false, p};
        s.validate();
        return s;
    }

    void validate() const {
        if (rationals) return;
        if (prime >= kMaxModulus) throw parse_error("prime must be < 2^62");
        if (!is_prime(prime)) throw parse_error("field modulus " + std::to_string(prime) + " is not prime");
    }

    std::string description() const {
        return rationals ? std::string("rationals") : "F_" + std::to_string(prime);
    }

    bool operator==(const FieldSpec& o) const {
        return rationals == o.rationals && (rationals || prime == o.prime);
    }
};

/// Calls fn.operator()<F>() with the field selected by spec; for prime
/// fields the process-wide modulus is set first.
template <class Fn>
decltype(auto) with_field(const FieldSpec& spec, Fn&& fn) {
    spec.validate();
    if (spec.rationals) return fn.template operator()<Rat>();
    Fp::set_modulus(spec.prime);
    return fn.template operator()<Fp>();
}

}  // namespace cremona
