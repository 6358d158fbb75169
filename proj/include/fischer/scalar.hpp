#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fischer {

using Rational = boost::multiprecision::cpp_rational;

// Coefficient field for all algebra computations: the rationals, or a prime
// field F_p with p an odd prime >= 3. Characteristic 2 is never allowed; the
// algebra constructions divide by 2.
struct FieldSpec {
    std::int64_t p = 0;  // 0 encodes the rationals, otherwise an odd prime

    static FieldSpec rationals() noexcept { return {}; }
    static FieldSpec prime(std::int64_t p);

    bool is_prime_field() const noexcept { return p != 0; }
    std::int64_t characteristic() const noexcept { return p; }
    std::string str() const;  // "0" for rationals, decimal p otherwise

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

// Immutable exact field element. Prime-field values are residues in [0, p);
// rationals are kept in lowest terms with positive denominator (maintained by
// the backing arbitrary-precision type). No rounding ever occurs.
class Scalar {
public:
    Scalar() = default;  // rational zero

    static Scalar zero(const FieldSpec& f) { return from_int(0, f); }
    static Scalar one(const FieldSpec& f) { return from_int(1, f); }
    static Scalar from_int(std::int64_t v, const FieldSpec& f);
    static Scalar from_rational(Rational r, const FieldSpec& f);

    const FieldSpec& field() const noexcept { return spec_; }
    bool is_zero() const noexcept {
        return spec_.is_prime_field() ? res_ == 0 : rat_.is_zero();
    }

    // Residue in [0, p); only meaningful for prime fields.
    std::int64_t residue() const noexcept { return res_; }
    const Rational& rational() const noexcept { return rat_; }

    Scalar operator-() const;
    Scalar inv() const;  // throws std::domain_error on zero

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inv(); }

    friend bool operator==(const Scalar&, const Scalar&) = default;

    std::string str() const;  // decimal, or "num/den" when den != 1

private:
    static void require_same_field(const Scalar& a, const Scalar& b);

    FieldSpec spec_{};
    std::int64_t res_ = 0;  // prime fields only
    Rational rat_ = 0;      // rationals only
};

// The default structure constant: the field element 1/4. Well-defined in
// every admitted field since the characteristic is never 2.
Scalar delta_default(const FieldSpec& f);

// Parses "a" or "a/b" with optionally signed decimal integers a, b.
// Throws std::invalid_argument on malformed text, std::domain_error when the
// denominator is zero or not invertible.
Scalar parse_scalar(const std::string& text, const FieldSpec& f);

inline void Scalar::require_same_field(const Scalar& a, const Scalar& b) {
    if (a.spec_ != b.spec_)
        throw std::invalid_argument("scalar operands from different fields");
}

inline Scalar& Scalar::operator+=(const Scalar& o) {
    require_same_field(*this, o);
    if (spec_.is_prime_field()) {
        res_ += o.res_;
        if (res_ >= spec_.p) res_ -= spec_.p;
    } else {
        rat_ += o.rat_;
    }
    return *this;
}

inline Scalar& Scalar::operator-=(const Scalar& o) {
    require_same_field(*this, o);
    if (spec_.is_prime_field()) {
        res_ -= o.res_;
        if (res_ < 0) res_ += spec_.p;
    } else {
        rat_ -= o.rat_;
    }
    return *this;
}

inline Scalar& Scalar::operator*=(const Scalar& o) {
    require_same_field(*this, o);
    if (spec_.is_prime_field()) {
        res_ = static_cast<std::int64_t>(
            static_cast<__int128>(res_) * o.res_ % spec_.p);
    } else {
        rat_ *= o.rat_;
    }
    return *this;
}

inline Scalar Scalar::operator-() const {
    Scalar r = *this;
    if (spec_.is_prime_field()) {
        if (r.res_ != 0) r.res_ = spec_.p - r.res_;
    } else {
        r.rat_ = -r.rat_;
    }
    return r;
}

}  // namespace fischer
