#include "fischer/scalar.hpp"

#include <cstdlib>

namespace fischer {

namespace {

bool is_odd_prime(std::int64_t p) {
    if (p < 3 || p % 2 == 0) return false;
    for (std::int64_t d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

// Inverse of a mod p via extended Euclid; a in [1, p).
std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
    std::int64_t r0 = p, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1;
        std::int64_t s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    return s0 < 0 ? s0 + p : s0;
}

}  // namespace

FieldSpec FieldSpec::prime(std::int64_t p) {
    if (p > (std::int64_t{1} << 31) || !is_odd_prime(p))
        throw std::invalid_argument("field modulus must be an odd prime >= 3");
    FieldSpec f;
    f.p = p;
    return f;
}

std::string FieldSpec::str() const { return std::to_string(p); }

Scalar Scalar::from_int(std::int64_t v, const FieldSpec& f) {
    Scalar s;
    s.spec_ = f;
    if (f.is_prime_field()) {
        s.res_ = v % f.p;
        if (s.res_ < 0) s.res_ += f.p;
    } else {
        s.rat_ = v;
    }
    return s;
}

Scalar Scalar::from_rational(Rational r, const FieldSpec& f) {
    if (!f.is_prime_field()) {
        Scalar s;
        s.spec_ = f;
        s.rat_ = std::move(r);
        return s;
    }
    using boost::multiprecision::cpp_int;
    const cpp_int p = f.p;
    auto num = Scalar::from_int(static_cast<std::int64_t>(numerator(r) % p), f);
    auto den = Scalar::from_int(static_cast<std::int64_t>(denominator(r) % p), f);
    return num * den.inv();
}

Scalar Scalar::inv() const {
    if (is_zero()) throw std::domain_error("division by zero");
    Scalar r = *this;
    if (spec_.is_prime_field())
        r.res_ = mod_inverse(res_, spec_.p);
    else
        r.rat_ = Rational(1) / rat_;
    return r;
}

std::string Scalar::str() const {
    if (spec_.is_prime_field()) return std::to_string(res_);
    const auto num = numerator(rat_);
    const auto den = denominator(rat_);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Scalar delta_default(const FieldSpec& f) {
    return Scalar::from_int(4, f).inv();
}

Scalar parse_scalar(const std::string& text, const FieldSpec& f) {
    const auto parse_int = [](const std::string& part) {
        if (part.empty()) throw std::invalid_argument("empty number in scalar");
        std::size_t i = part[0] == '-' ? 1 : 0;
        if (i == part.size()) throw std::invalid_argument("malformed scalar: " + part);
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9')
                throw std::invalid_argument("malformed scalar: " + part);
        return boost::multiprecision::cpp_int(part);
    };

    const auto slash = text.find('/');
    Rational value;
    if (slash == std::string::npos) {
        value = parse_int(text);
    } else {
        const auto num = parse_int(text.substr(0, slash));
        const auto den = parse_int(text.substr(slash + 1));
        if (den == 0) throw std::domain_error("zero denominator in scalar");
        value = Rational(num) / Rational(den);
    }
    return Scalar::from_rational(std::move(value), f);
}

}  // namespace fischer
