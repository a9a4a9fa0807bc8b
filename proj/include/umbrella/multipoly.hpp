#pragma once

// Sparse multivariate polynomials with exact coefficients, and truncated jets.
//
// Terms are kept in a std::map ordered by GrlexLess (total degree ascending, then
// lexicographically descending, so x1 precedes x2 inside a degree). Zero coefficients
// are never stored. Every value is immutable once built; all operations are pure.

#include "rational.hpp"

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace umbrella {

using Exponent = std::vector<std::uint32_t>;

inline unsigned total_degree(const Exponent& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

struct GrlexLess {
    bool operator()(const Exponent& a, const Exponent& b) const {
        const unsigned da = total_degree(a);
        const unsigned db = total_degree(b);
        if (da != db) return da < db;
        return b < a;
    }
};

/// Default term-count limit for products and compositions.
inline constexpr std::size_t kDefaultTermCap = 1'000'000;

class TermCapExceeded : public std::length_error {
public:
    explicit TermCapExceeded(std::size_t cap)
        : std::length_error("polynomial term count exceeds cap of " + std::to_string(cap)) {}
};

inline std::vector<std::string> default_var_names(std::size_t n) {
    if (n == 2) return {"t", "s"};
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
    return names;
}

template <class Coeff>
class BasicPoly {
public:
    using coeff_type = Coeff;
    using TermMap = std::map<Exponent, Coeff, GrlexLess>;

    BasicPoly() = default;

    explicit BasicPoly(std::size_t num_vars, std::vector<std::string> names = {})
        : nvars_(num_vars), names_(std::move(names)) {
        if (names_.empty()) names_ = default_var_names(nvars_);
        if (names_.size() != nvars_) throw std::invalid_argument("var_names length must equal num_vars");
    }

    static BasicPoly constant(std::size_t n, const Coeff& c) {
        BasicPoly p(n);
        p.add_term(Exponent(n, 0), c);
        return p;
    }

    static BasicPoly variable(std::size_t n, std::size_t i, std::vector<std::string> names = {}) {
        if (i >= n) throw std::out_of_range("variable index out of range");
        BasicPoly p(n, std::move(names));
        Exponent e(n, 0);
        e[i] = 1;
        p.add_term(e, Coeff(1));
        return p;
    }

    static BasicPoly monomial(std::size_t n, Exponent e, const Coeff& c) {
        if (e.size() != n) throw std::invalid_argument("exponent length must equal num_vars");
        BasicPoly p(n);
        p.add_term(std::move(e), c);
        return p;
    }

    std::size_t num_vars() const { return nvars_; }
    const std::vector<std::string>& var_names() const { return names_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    BasicPoly with_names(std::vector<std::string> names) const {
        if (names.size() != nvars_) throw std::invalid_argument("var_names length must equal num_vars");
        BasicPoly p = *this;
        p.names_ = std::move(names);
        return p;
    }

    Coeff coefficient(const Exponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Coeff(0) : it->second;
    }

    Coeff constant_term() const { return coefficient(Exponent(nvars_, 0)); }

    /// Total degree; -1 for the zero polynomial.
    int degree() const { return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.rbegin()->first)); }

    /// Lowest total degree present (order of vanishing); -1 for zero.
    int order() const { return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.begin()->first)); }

    /// Accumulates c·x^e, pruning the term if it cancels.
    void add_term(Exponent e, const Coeff& c) {
        if (e.size() != nvars_) throw std::invalid_argument("exponent length must equal num_vars");
        if (umbrella::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(std::move(e), c);
        if (!inserted) {
            it->second += c;
            if (umbrella::is_zero(it->second)) terms_.erase(it);
        }
    }

    BasicPoly operator-() const {
        BasicPoly r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    BasicPoly& operator+=(const BasicPoly& o) {
        require_same_vars(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    BasicPoly& operator-=(const BasicPoly& o) {
        require_same_vars(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
    friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
    friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) { return multiply(a, b); }

    BasicPoly scaled(const Coeff& k) const {
        BasicPoly r(nvars_, names_);
        if (umbrella::is_zero(k)) return r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * k);
        return r;
    }

    /// Exact product; truncated at total degree `trunc` when given.
    static BasicPoly multiply(const BasicPoly& a, const BasicPoly& b,
                              std::optional<unsigned> trunc = std::nullopt,
                              std::size_t cap = kDefaultTermCap) {
        a.require_same_vars(b);
        BasicPoly r(a.nvars_, a.names_);
        Exponent e(a.nvars_);
        for (const auto& [ea, ca] : a.terms_) {
            const unsigned da = total_degree(ea);
            if (trunc && da > *trunc) break;
            for (const auto& [eb, cb] : b.terms_) {
                if (trunc && da + total_degree(eb) > *trunc) break;
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
                if (r.terms_.size() > cap) throw TermCapExceeded(cap);
            }
        }
        return r;
    }

    BasicPoly pow(unsigned k, std::optional<unsigned> trunc = std::nullopt,
                  std::size_t cap = kDefaultTermCap) const {
        BasicPoly result = constant(nvars_, Coeff(1)).with_names(names_);
        BasicPoly base = *this;
        while (k > 0) {
            if (k & 1u) result = multiply(result, base, trunc, cap);
            k >>= 1u;
            if (k > 0) base = multiply(base, base, trunc, cap);
        }
        return result;
    }

    BasicPoly diff(std::size_t var) const {
        if (var >= nvars_) throw std::out_of_range("poly_diff: variable index out of range");
        BasicPoly r(nvars_, names_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exponent d = e;
            d[var] -= 1;
            r.terms_.emplace(std::move(d), c * Coeff(static_cast<int>(e[var])));
        }
        return r;
    }

    /// Drops every term of total degree > k.
    BasicPoly truncated(unsigned k) const {
        BasicPoly r(nvars_, names_);
        for (const auto& [e, c] : terms_) {
            if (total_degree(e) > k) break;
            r.terms_.emplace(e, c);
        }
        return r;
    }

    /// Homogeneous component of degree d.
    BasicPoly homogeneous_part(unsigned d) const {
        BasicPoly r(nvars_, names_);
        for (const auto& [e, c] : terms_) {
            if (total_degree(e) == d) r.terms_.emplace(e, c);
        }
        return r;
    }

    template <class F>
    auto map_coefficients(F&& f) const -> BasicPoly<decltype(f(std::declval<const Coeff&>()))> {
        BasicPoly<decltype(f(std::declval<const Coeff&>()))> r(nvars_, names_);
        for (const auto& [e, c] : terms_) r.add_term(e, f(c));
        return r;
    }

    friend bool operator==(const BasicPoly& a, const BasicPoly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const BasicPoly& a, const BasicPoly& b) { return !(a == b); }

    void require_same_vars(const BasicPoly& o) const {
        if (nvars_ != o.nvars_) {
            throw std::invalid_argument("variable-count mismatch: " + std::to_string(nvars_) + " vs " +
                                        std::to_string(o.nvars_));
        }
    }

private:
    std::size_t nvars_ = 0;
    std::vector<std::string> names_;
    TermMap terms_;
};

using Poly = BasicPoly<Rational>;
using CPoly = BasicPoly<Complex>;

inline CPoly to_complex(const Poly& p) {
    return p.map_coefficients([](const Rational& c) { return Complex(c); });
}
inline Poly real_part(const CPoly& p) {
    return p.map_coefficients([](const Complex& c) { return c.re; });
}
inline Poly imag_part(const CPoly& p) {
    return p.map_coefficients([](const Complex& c) { return c.im; });
}

// ---------------------------------------------------------------------------
// Ring operations

enum class ArithOp { Add, Sub, Mul };

template <class C>
BasicPoly<C> poly_arith(const BasicPoly<C>& a, const BasicPoly<C>& b, ArithOp op,
                        std::size_t cap = kDefaultTermCap) {
    a.require_same_vars(b);
    switch (op) {
        case ArithOp::Add: return a + b;
        case ArithOp::Sub: return a - b;
        case ArithOp::Mul: return BasicPoly<C>::multiply(a, b, std::nullopt, cap);
    }
    throw std::invalid_argument("unknown arithmetic op");
}

template <class C>
BasicPoly<C> poly_diff(const BasicPoly<C>& f, std::size_t var) {
    return f.diff(var);
}

/// Substitutes args[i] for variable i of f. With `trunc`, every intermediate product is
/// truncated at that total degree, which yields the jet of the composition when every
/// argument vanishes at the origin.
template <class C>
BasicPoly<C> poly_compose(const BasicPoly<C>& f, const std::vector<BasicPoly<C>>& args,
                          std::optional<unsigned> trunc = std::nullopt,
                          std::size_t cap = kDefaultTermCap) {
    if (args.size() != f.num_vars()) {
        throw std::invalid_argument("poly_compose: arity mismatch (" + std::to_string(args.size()) +
                                    " args for " + std::to_string(f.num_vars()) + " variables)");
    }
    if (args.empty()) throw std::invalid_argument("poly_compose: no arguments");
    const std::size_t n = args.front().num_vars();
    for (const auto& a : args) {
        if (a.num_vars() != n) throw std::invalid_argument("poly_compose: arguments disagree on num_vars");
    }
    const auto& names = args.front().var_names();
    std::vector<std::vector<BasicPoly<C>>> powers(args.size());
    std::vector<int> orders(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) {
        powers[i].push_back(BasicPoly<C>::constant(n, C(1)).with_names(names));
        orders[i] = args[i].order();
    }
    auto power = [&](std::size_t i, unsigned e) -> const BasicPoly<C>& {
        while (powers[i].size() <= e) {
            powers[i].push_back(BasicPoly<C>::multiply(powers[i].back(), args[i], trunc, cap));
        }
        return powers[i][e];
    };

    BasicPoly<C> result(n, names);
    for (const auto& [e, c] : f.terms()) {
        if (trunc) {
            // Lower bound on the order of the substituted monomial.
            long lower = 0;
            bool vanishes = false;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (orders[i] < 0) { vanishes = true; break; }
                lower += static_cast<long>(e[i]) * orders[i];
            }
            if (vanishes || lower > static_cast<long>(*trunc)) continue;
        }
        BasicPoly<C> term = BasicPoly<C>::constant(n, c).with_names(names);
        for (std::size_t i = 0; i < e.size() && !term.is_zero(); ++i) {
            if (e[i] == 0) continue;
            term = BasicPoly<C>::multiply(term, power(i, e[i]), trunc, cap);
        }
        result += term;
        if (result.size() > cap) throw TermCapExceeded(cap);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Numeric evaluation

inline double coeff_to_double(const Rational& c) { return c.get_d(); }
inline std::complex<double> coeff_to_cdouble(const Rational& c) { return {c.get_d(), 0.0}; }
inline std::complex<double> coeff_to_cdouble(const Complex& c) { return {c.re.get_d(), c.im.get_d()}; }

/// Floating-point snapshot of a polynomial for fast repeated evaluation.
template <class Scalar>
class CompiledPoly {
public:
    CompiledPoly() = default;

    template <class C>
    explicit CompiledPoly(const BasicPoly<C>& p) : nvars_(p.num_vars()) {
        for (const auto& [e, c] : p.terms()) {
            Scalar v;
            if constexpr (std::is_same_v<Scalar, double>) v = coeff_to_double(c);
            else v = coeff_to_cdouble(c);
            terms_.emplace_back(v, e);
            for (std::size_t i = 0; i < e.size(); ++i) max_exp_ = std::max<unsigned>(max_exp_, e[i]);
        }
    }

    template <class Arg>
    auto operator()(std::span<const Arg> x) const {
        using R = decltype(Scalar{} * Arg{});
        if (x.size() != nvars_) throw std::invalid_argument("evaluation point has wrong dimension");
        std::vector<std::vector<Arg>> pw(nvars_, std::vector<Arg>(max_exp_ + 1, Arg(1)));
        for (std::size_t i = 0; i < nvars_; ++i) {
            for (unsigned k = 1; k <= max_exp_; ++k) pw[i][k] = pw[i][k - 1] * x[i];
        }
        R sum{};
        for (const auto& [c, e] : terms_) {
            R term = c;
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (e[i]) term *= pw[i][e[i]];
            }
            sum += term;
        }
        return sum;
    }

    std::size_t num_vars() const { return nvars_; }

private:
    std::size_t nvars_ = 0;
    unsigned max_exp_ = 0;
    std::vector<std::pair<Scalar, Exponent>> terms_;
};

template <class C>
double evaluate(const BasicPoly<C>& p, std::span<const double> x) {
    return CompiledPoly<double>(p)(x);
}

// ---------------------------------------------------------------------------
// Jets: classes modulo M^{k+1}

template <class C>
struct BasicJet {
    BasicPoly<C> poly;
    unsigned order = 0;

    friend bool operator==(const BasicJet& a, const BasicJet& b) {
        return a.order == b.order && a.poly == b.poly;
    }
};

using Jet = BasicJet<Rational>;

template <class C>
BasicJet<C> jet_truncate(const BasicPoly<C>& f, unsigned k) {
    return {f.truncated(k), k};
}

template <class C>
BasicJet<C> jet_mul(const BasicJet<C>& a, const BasicJet<C>& b) {
    const unsigned k = std::min(a.order, b.order);
    return {BasicPoly<C>::multiply(a.poly, b.poly, k), k};
}

/// Inverse of a unit in the truncated ring: returns v with u·v ≡ 1 mod M^{k+1}.
template <class C>
BasicJet<C> jet_reciprocal(const BasicJet<C>& u) {
    const C c0 = u.poly.constant_term();
    if (umbrella::is_zero(c0)) throw std::domain_error("jet_reciprocal: zero constant term");
    const std::size_t n = u.poly.num_vars();
    const C inv0 = C(1) / c0;
    // u = c0 (1 + w) with w in M; 1/u = inv0 · Σ (-w)^j.
    BasicPoly<C> w = u.poly.truncated(u.order);
    w.add_term(Exponent(n, 0), -c0);
    const BasicPoly<C> minus_w = w.scaled(-inv0);
    BasicPoly<C> sum = BasicPoly<C>::constant(n, C(1)).with_names(u.poly.var_names());
    BasicPoly<C> power = sum;
    for (unsigned j = 1; j <= u.order; ++j) {
        power = BasicPoly<C>::multiply(power, minus_w, u.order);
        if (power.is_zero()) break;
        sum += power;
    }
    return {sum.scaled(inv0), u.order};
}

/// All exponents of total degree <= k in n variables, in graded-lex order.
inline std::vector<Exponent> monomial_basis(std::size_t n, unsigned k) {
    if (n == 0) throw std::invalid_argument("monomial_basis: n must be >= 1");
    std::vector<Exponent> out;
    Exponent e(n, 0);
    // Enumerate degree by degree; inside a degree, lexicographically descending.
    for (unsigned d = 0; d <= k; ++d) {
        auto rec = [&](auto&& self, std::size_t i, unsigned remaining) -> void {
            if (i + 1 == n) {
                e[i] = remaining;
                out.push_back(e);
                return;
            }
            for (unsigned a = remaining + 1; a-- > 0;) {
                e[i] = a;
                self(self, i + 1, remaining - a);
            }
        };
        rec(rec, 0, d);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text rendering, e.g. "-3t^3 - t s^2 - 3t^5"

namespace detail {

struct CoeffText {
    bool negative = false;
    std::string magnitude;  // empty when the magnitude is one
    bool glue = true;       // print directly against the monomial
};

inline CoeffText coeff_text(const Rational& c, bool is_constant) {
    CoeffText t;
    t.negative = sgn(c) < 0;
    const Rational a = abs(c);
    if (is_constant || a != 1) {
        t.magnitude = to_string(a);
        t.glue = is_integer(a);
    }
    return t;
}

inline CoeffText coeff_text(const Complex& c, bool is_constant) {
    if (is_zero(c.im)) return coeff_text(c.re, is_constant);
    CoeffText t;
    if (is_zero(c.re)) {
        t.negative = sgn(c.im) < 0;
        const Rational a = abs(c.im);
        t.magnitude = (a == 1 ? std::string() : to_string(a)) + "i";
        t.glue = false;
        return t;
    }
    t.magnitude = "(" + to_string(c) + ")";
    return t;
}

}  // namespace detail

template <class C>
std::string to_string(const BasicPoly<C>& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        const bool is_const = total_degree(e) == 0;
        const auto ct = detail::coeff_text(c, is_const);
        if (first) out += ct.negative ? "-" : "";
        else out += ct.negative ? " - " : " + ";
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += ' ';
            mono += p.var_names()[i];
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        out += ct.magnitude;
        if (!mono.empty() && !ct.magnitude.empty() && !ct.glue) out += ' ';
        out += mono;
    }
    return out;
}

}  // namespace umbrella
