#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "nilcentral/error.hpp"

namespace nilcentral {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Deterministic Miller-Rabin, valid for all 64-bit inputs with this base set.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

} // namespace detail

/// Identifies the coefficient field: the rationals, or a prime field F_p with p >= 3.
class FieldSpec {
public:
    enum class Kind { rationals, prime_field };

    static FieldSpec rationals() { return FieldSpec(Kind::rationals, 0); }

    static FieldSpec prime(std::uint64_t p) {
        if (p < 3) {
            throw domain_error("prime field modulus must be at least 3, got " + std::to_string(p));
        }
        if (p >= (std::uint64_t{1} << 62)) {
            throw domain_error("prime field modulus must be below 2^62, got " + std::to_string(p));
        }
        if (!detail::is_prime_u64(p)) {
            throw domain_error("prime field modulus must be prime, got " + std::to_string(p));
        }
        return FieldSpec(Kind::prime_field, p);
    }

    /// Accepts "Q" or "F<p>" (e.g. "F7").
    static FieldSpec parse(std::string_view text) {
        if (text == "Q") return rationals();
        if (text.size() >= 2 && text[0] == 'F') {
            std::string_view digits = text.substr(1);
            if (digits.empty() || digits[0] == '0') {
                throw parse_error("invalid field spec: " + std::string(text));
            }
            std::uint64_t p = 0;
            for (char c : digits) {
                if (c < '0' || c > '9') {
                    throw parse_error("invalid field spec: " + std::string(text));
                }
                if (p > ((std::uint64_t{1} << 62) / 10)) {
                    throw domain_error("prime field modulus must be below 2^62");
                }
                p = p * 10 + static_cast<std::uint64_t>(c - '0');
            }
            return prime(p);
        }
        throw parse_error("invalid field spec: " + std::string(text));
    }

    Kind kind() const { return kind_; }
    bool is_rationals() const { return kind_ == Kind::rationals; }
    bool is_prime_field() const { return kind_ == Kind::prime_field; }

    /// 0 for the rationals, p for F_p.
    std::uint64_t characteristic() const { return p_; }

    std::uint64_t modulus() const {
        if (!is_prime_field()) throw domain_error("modulus() called on the rationals");
        return p_;
    }

    std::string str() const {
        if (is_rationals()) return "Q";
        return "F" + std::to_string(p_);
    }

    friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
        return a.kind_ == b.kind_ && a.p_ == b.p_;
    }
    friend bool operator!=(const FieldSpec& a, const FieldSpec& b) { return !(a == b); }

private:
    FieldSpec(Kind kind, std::uint64_t p) : kind_(kind), p_(p) {}

    Kind kind_;
    std::uint64_t p_;
};

/// An exact field element. Rationals are GMP-backed; prime-field elements are
/// canonical residues in [0, p). Every value knows its field, and operations on
/// elements of different fields throw mismatch_error.
class Scalar {
public:
    Scalar() = delete;

    static Scalar zero(const FieldSpec& spec) { return from_int(spec, 0); }
    static Scalar one(const FieldSpec& spec) { return from_int(spec, 1); }

    static Scalar from_int(const FieldSpec& spec, long long value) {
        Scalar s(spec);
        if (spec.is_rationals()) {
            s.rat_ = static_cast<long>(value);
        } else {
            const std::uint64_t p = spec.modulus();
            if (value >= 0) {
                s.res_ = static_cast<std::uint64_t>(value) % p;
            } else {
                std::uint64_t mag = static_cast<std::uint64_t>(-(value + 1)) + 1;
                std::uint64_t r = mag % p;
                s.res_ = (r == 0) ? 0 : p - r;
            }
        }
        return s;
    }

    /// Grammar: '-'? digits ('/' digits)? with the sign only on the numerator.
    /// Rationals are reduced to lowest terms; prime-field fractions require the
    /// denominator to be invertible mod p.
    static Scalar parse(const FieldSpec& spec, std::string_view text) {
        std::string_view num = text;
        std::string_view den;
        bool has_den = false;
        if (auto slash = text.find('/'); slash != std::string_view::npos) {
            num = text.substr(0, slash);
            den = text.substr(slash + 1);
            has_den = true;
        }
        bool negative = false;
        if (!num.empty() && num[0] == '-') {
            negative = true;
            num = num.substr(1);
        }
        auto all_digits = [](std::string_view s) {
            if (s.empty()) return false;
            for (char c : s) {
                if (c < '0' || c > '9') return false;
            }
            return true;
        };
        if (!all_digits(num)) throw parse_error("invalid scalar: " + std::string(text));
        if (has_den && !all_digits(den)) throw parse_error("invalid scalar: " + std::string(text));

        Scalar s(spec);
        if (spec.is_rationals()) {
            mpz_class n(std::string(num), 10);
            if (negative) n = -n;
            if (has_den) {
                mpz_class d(std::string(den), 10);
                if (d == 0) throw parse_error("zero denominator in scalar: " + std::string(text));
                s.rat_ = mpq_class(n, d);
                s.rat_.canonicalize();
            } else {
                s.rat_ = mpq_class(n);
            }
        } else {
            const std::uint64_t p = spec.modulus();
            auto residue_of = [p](std::string_view digits) {
                std::uint64_t r = 0;
                for (char c : digits) {
                    r = detail::mulmod_u64(r, 10, p);
                    r = (r + static_cast<std::uint64_t>(c - '0')) % p;
                }
                return r;
            };
            std::uint64_t n = residue_of(num);
            if (negative && n != 0) n = p - n;
            if (has_den) {
                std::uint64_t d = residue_of(den);
                if (d == 0) {
                    throw parse_error("denominator not invertible mod " + std::to_string(p) +
                                      " in scalar: " + std::string(text));
                }
                n = detail::mulmod_u64(n, detail::powmod_u64(d, p - 2, p), p);
            }
            s.res_ = n;
        }
        return s;
    }

    const FieldSpec& spec() const { return spec_; }

    bool is_zero() const {
        if (spec_.is_rationals()) return rat_ == 0;
        return res_ == 0;
    }

    bool is_one() const {
        if (spec_.is_rationals()) return rat_ == 1;
        return res_ == 1;
    }

    /// Canonical text: lowest-terms "a" or "a/b" over Q, decimal residue over F_p.
    std::string str() const {
        if (spec_.is_rationals()) return rat_.get_str();
        return std::to_string(res_);
    }

    Scalar operator-() const {
        Scalar out(*this);
        if (spec_.is_rationals()) {
            out.rat_ = -rat_;
        } else if (res_ != 0) {
            out.res_ = spec_.modulus() - res_;
        }
        return out;
    }

    Scalar& operator+=(const Scalar& rhs) {
        check_same(rhs, "+");
        if (spec_.is_rationals()) {
            rat_ += rhs.rat_;
        } else {
            const std::uint64_t p = spec_.modulus();
            res_ = (res_ + rhs.res_) % p;
        }
        return *this;
    }

    Scalar& operator-=(const Scalar& rhs) {
        check_same(rhs, "-");
        if (spec_.is_rationals()) {
            rat_ -= rhs.rat_;
        } else {
            const std::uint64_t p = spec_.modulus();
            res_ = (res_ + p - rhs.res_) % p;
        }
        return *this;
    }

    Scalar& operator*=(const Scalar& rhs) {
        check_same(rhs, "*");
        if (spec_.is_rationals()) {
            rat_ *= rhs.rat_;
        } else {
            res_ = detail::mulmod_u64(res_, rhs.res_, spec_.modulus());
        }
        return *this;
    }

    Scalar& operator/=(const Scalar& rhs) {
        check_same(rhs, "/");
        if (rhs.is_zero()) throw domain_error("division by zero");
        if (spec_.is_rationals()) {
            rat_ /= rhs.rat_;
        } else {
            const std::uint64_t p = spec_.modulus();
            res_ = detail::mulmod_u64(res_, detail::powmod_u64(rhs.res_, p - 2, p), p);
        }
        return *this;
    }

    Scalar inverse() const {
        if (is_zero()) throw domain_error("inverse of zero");
        Scalar out = one(spec_);
        out /= *this;
        return out;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        a.check_same(b, "==");
        if (a.spec_.is_rationals()) return a.rat_ == b.rat_;
        return a.res_ == b.res_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

private:
    explicit Scalar(const FieldSpec& spec) : spec_(spec), rat_(0), res_(0) {}

    void check_same(const Scalar& rhs, const char* op) const {
        if (spec_ != rhs.spec_) {
            throw mismatch_error(std::string("field mismatch in '") + op + "': " + spec_.str() +
                                 " vs " + rhs.spec_.str());
        }
    }

    FieldSpec spec_;
    mpq_class rat_;
    std::uint64_t res_;
};

inline Scalar scalar_pow(const Scalar& base, unsigned long exponent) {
    Scalar out = Scalar::one(base.spec());
    Scalar sq = base;
    unsigned long e = exponent;
    while (e > 0) {
        if (e & 1) out *= sq;
        sq *= sq;
        e >>= 1;
    }
    return out;
}

} // namespace nilcentral
