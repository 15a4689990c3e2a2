#pragma once

#include <gmpxx.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace bnck {

/// Numeric-mode tolerance shared by all tolerant comparisons. Exact-mode
/// values never consult it.
inline std::atomic<double>& numeric_tolerance_storage() {
    static std::atomic<double> tol{1e-9};
    return tol;
}
inline double numeric_tolerance() { return numeric_tolerance_storage().load(); }
inline void set_numeric_tolerance(double t) { numeric_tolerance_storage().store(t); }

/// Rational scalar with a parallel numeric (double) mode. Exact values are
/// canonical p/q with q > 0 and gcd(|p|, q) = 1 (maintained by GMP). Any
/// operation touching a numeric value yields a numeric value.
class Scalar {
public:
    Scalar() : exact_(true), q_(0), d_(0.0) {}
    Scalar(int n) : exact_(true), q_(n), d_(0.0) {}
    Scalar(long n) : exact_(true), q_((signed long)n), d_(0.0) {}
    Scalar(long num, long den) : exact_(true), q_((signed long)num, (signed long)den), d_(0.0) {
        if (den == 0) throw std::domain_error("Scalar: zero denominator");
        q_.canonicalize();
    }
    explicit Scalar(const mpq_class& q) : exact_(true), q_(q), d_(0.0) { q_.canonicalize(); }

    static Scalar numeric(double v) {
        Scalar s;
        s.exact_ = false;
        s.d_ = v;
        return s;
    }

    /// Parses "p", "p/q" or a decimal like "-1.25" (decimals stay exact).
    static Scalar parse(const std::string& text);

    bool exact() const { return exact_; }
    double to_double() const { return exact_ ? q_.get_d() : d_; }
    const mpq_class& rat() const {
        if (!exact_) throw std::logic_error("Scalar: rat() on numeric value");
        return q_;
    }
    /// Numeric twin of this value.
    Scalar as_numeric() const { return numeric(to_double()); }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return Scalar(mpq_class(a.q_ + b.q_));
        return numeric(a.to_double() + b.to_double());
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return Scalar(mpq_class(a.q_ - b.q_));
        return numeric(a.to_double() - b.to_double());
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return Scalar(mpq_class(a.q_ * b.q_));
        return numeric(a.to_double() * b.to_double());
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (b.is_zero()) throw std::domain_error("Scalar: division by zero");
        if (a.exact_ && b.exact_) return Scalar(mpq_class(a.q_ / b.q_));
        return numeric(a.to_double() / b.to_double());
    }
    Scalar operator-() const {
        if (exact_) return Scalar(mpq_class(-q_));
        return numeric(-d_);
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    bool is_zero() const {
        if (exact_) return sgn(q_) == 0;
        return std::fabs(d_) <= numeric_tolerance();
    }
    int sign() const {
        if (exact_) return sgn(q_);
        if (is_zero()) return 0;
        return d_ > 0 ? 1 : -1;
    }
    Scalar abs() const { return sign() < 0 ? -*this : *this; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return a.q_ == b.q_;
        double x = a.to_double(), y = b.to_double();
        return std::fabs(x - y) <= numeric_tolerance() * (1.0 + std::max(std::fabs(x), std::fabs(y)));
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
    friend bool operator<(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return a.q_ < b.q_;
        return a.to_double() < b.to_double();
    }
    friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
    friend bool operator<=(const Scalar& a, const Scalar& b) { return !(b < a); }
    friend bool operator>=(const Scalar& a, const Scalar& b) { return !(a < b); }

    /// Exact square root when the value is a perfect rational square;
    /// numeric values take the floating square root. nullopt otherwise.
    std::optional<Scalar> sqrt() const {
        if (sign() < 0) return std::nullopt;
        if (!exact_) return numeric(std::sqrt(d_));
        mpz_class num = q_.get_num(), den = q_.get_den();
        if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
            mpz_class rn, rd;
            mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
            mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
            return Scalar(mpq_class(rn, rd));
        }
        return std::nullopt;
    }

    /// Serializes as "p" or "p/q"; numeric values print as decimals.
    std::string str() const {
        if (!exact_) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", d_);
            return buf;
        }
        if (q_.get_den() == 1) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

private:
    bool exact_;
    mpq_class q_;
    double d_;
};

inline Scalar Scalar::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("Scalar: empty literal");
    std::string s = text;
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        // decimal literal: shift the point into a denominator power of ten
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac = s.size() - dot - 1;
        std::string den = "1";
        den.append(frac, '0');
        try {
            mpq_class q(digits + "/" + den);
            q.canonicalize();
            return Scalar(q);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("Scalar: bad literal '" + text + "'");
        }
    }
    try {
        mpq_class q(s);
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
        q.canonicalize();
        return Scalar(q);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("Scalar: bad literal '" + text + "'");
    }
}

/// Element of Q[i] (or its numeric twin): re + im*i with i^2 = -1.
class CScalar {
public:
    Scalar re, im;

    CScalar() = default;
    CScalar(const Scalar& r) : re(r), im(0) {}
    CScalar(int r) : re(r), im(0) {}
    CScalar(const Scalar& r, const Scalar& i) : re(r), im(i) {}
    static CScalar i() { return CScalar(Scalar(0), Scalar(1)); }

    friend CScalar operator+(const CScalar& a, const CScalar& b) { return {a.re + b.re, a.im + b.im}; }
    friend CScalar operator-(const CScalar& a, const CScalar& b) { return {a.re - b.re, a.im - b.im}; }
    friend CScalar operator*(const CScalar& a, const CScalar& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend CScalar operator/(const CScalar& a, const CScalar& b) {
        Scalar n = b.re * b.re + b.im * b.im;
        if (n.is_zero()) throw std::domain_error("CScalar: division by zero");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    CScalar operator-() const { return {-re, -im}; }
    CScalar& operator+=(const CScalar& o) { return *this = *this + o; }
    CScalar& operator-=(const CScalar& o) { return *this = *this - o; }
    CScalar& operator*=(const CScalar& o) { return *this = *this * o; }
    CScalar& operator/=(const CScalar& o) { return *this = *this / o; }

    CScalar conj() const { return {re, -im}; }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }
    friend bool operator==(const CScalar& a, const CScalar& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const CScalar& a, const CScalar& b) { return !(a == b); }

    /// Pivot magnitude for numeric elimination.
    double mag() const { return std::fabs(re.to_double()) + std::fabs(im.to_double()); }
    std::string str() const {
        if (im.is_zero()) return re.str();
        return re.str() + (im.sign() < 0 ? "-" : "+") + im.abs().str() + "i";
    }
};

// scalar_traits lets Matrix<T> treat Scalar and CScalar uniformly.
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Scalar> {
    static Scalar zero() { return Scalar(0); }
    static Scalar one() { return Scalar(1); }
    static bool is_zero(const Scalar& s) { return s.is_zero(); }
    static double mag(const Scalar& s) { return std::fabs(s.to_double()); }
};
template <>
struct scalar_traits<CScalar> {
    static CScalar zero() { return CScalar(Scalar(0)); }
    static CScalar one() { return CScalar(Scalar(1)); }
    static bool is_zero(const CScalar& s) { return s.is_zero(); }
    static double mag(const CScalar& s) { return s.mag(); }
};

}  // namespace bnck
