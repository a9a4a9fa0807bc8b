#pragma once

// Exact scalars: arbitrary-precision rationals (GMP) and Gaussian rationals.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace umbrella {

using Rational = mpq_class;

/// Parses "p/q", "p" or "-p/q" (decimal integers). Throws std::invalid_argument.
inline Rational parse_rational(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    if (s.front() == '+') s.erase(s.begin());
    const auto slash = s.find('/');
    auto valid_int = [](std::string_view part) {
        if (!part.empty() && part.front() == '-') part.remove_prefix(1);
        if (part.empty()) return false;
        for (char c : part) {
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        }
        return true;
    };
    const std::string_view num = std::string_view(s).substr(0, slash);
    const std::string_view den =
        slash == std::string::npos ? std::string_view{} : std::string_view(s).substr(slash + 1);
    if (!valid_int(num) || (slash != std::string::npos && (den.empty() || den.front() == '-' || !valid_int(den)))) {
        throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    }
    Rational q;
    q.get_num() = mpz_class(std::string(num));
    q.get_den() = den.empty() ? mpz_class(1) : mpz_class(std::string(den));
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline double to_double(const Rational& q) { return q.get_d(); }

/// Closest "nice" rational to x: continued-fraction convergent with |x - p/q| <= tol·max(1,|x|)
/// and denominator at most max_den.
inline Rational rationalize(double x, double tol = 1e-12, long max_den = 1'000'000'000L) {
    if (!(x == x)) throw std::invalid_argument("rationalize: NaN");
    const bool neg = x < 0;
    double r = neg ? -x : x;
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    const double target = r;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(r);
        const mpz_class ai(a);
        mpz_class p2 = ai * p1 + p0;
        mpz_class q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        const double approx = mpq_class(p1, q1).get_d();
        if (std::abs(approx - target) <= tol * std::max(1.0, target)) break;
        const double frac = r - a;
        if (frac <= 0) break;
        r = 1.0 / frac;
    }
    if (q1 == 0) return Rational(0);
    Rational out(p1, q1);
    out.canonicalize();
    return neg ? Rational(-out) : out;
}

/// a + b·i with a, b rational.
struct Complex {
    Rational re{0};
    Rational im{0};

    Complex() = default;
    Complex(Rational r) : re(std::move(r)) {}  // NOLINT: implicit real embedding
    Complex(int r) : re(r) {}                  // NOLINT
    Complex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    Complex conj() const { return {re, -im}; }

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator/(const Complex& a, const Complex& b) {
        const Rational n = b.re * b.re + b.im * b.im;
        if (sgn(n) == 0) throw std::domain_error("division by zero complex rational");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o) { *this = *this * o; return *this; }
    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }
};

inline bool is_zero(const Complex& c) { return sgn(c.re) == 0 && sgn(c.im) == 0; }

inline std::string to_string(const Complex& c) {
    if (is_zero(c.im)) return to_string(c.re);
    std::string im_part;
    if (c.im == 1) im_part = "i";
    else if (c.im == -1) im_part = "-i";
    else im_part = to_string(c.im) + "i";
    if (is_zero(c.re)) return im_part;
    if (im_part.front() == '-') return to_string(c.re) + " - " + im_part.substr(1);
    return to_string(c.re) + " + " + im_part;
}

}  // namespace umbrella
