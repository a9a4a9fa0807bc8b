#pragma once

#include <umbrella/matrix.hpp>
#include <umbrella/multipoly.hpp>

#include <initializer_list>
#include <ostream>
#include <random>
#include <utility>

namespace test_support {

using umbrella::Exponent;
using umbrella::Poly;
using umbrella::Rational;

// Builds a polynomial from (exponent, coefficient) pairs.
inline Poly P(std::size_t n, std::initializer_list<std::pair<Exponent, Rational>> terms) {
    Poly p(n);
    for (const auto& [e, c] : terms) p.add_term(e, c);
    return p;
}

inline Poly P2(std::initializer_list<std::pair<Exponent, Rational>> terms) { return P(2, terms); }

inline Rational random_rational(std::mt19937_64& rng, int span = 9, int max_den = 5) {
    std::uniform_int_distribution<int> num(-span, span), den(1, max_den);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline Poly random_poly(std::mt19937_64& rng, std::size_t n, unsigned max_deg, int terms) {
    std::uniform_int_distribution<unsigned> deg(0, max_deg);
    std::uniform_int_distribution<std::size_t> var(0, n - 1);
    Poly p(n);
    for (int i = 0; i < terms; ++i) {
        Exponent e(n, 0);
        const unsigned d = deg(rng);
        for (unsigned j = 0; j < d; ++j) ++e[var(rng)];
        p.add_term(e, random_rational(rng));
    }
    return p;
}

}  // namespace test_support

namespace umbrella {

inline void PrintTo(const Poly& p, std::ostream* os) { *os << to_string(p); }
inline void PrintTo(const RatMatrix& m, std::ostream* os) { *os << to_string(m); }
inline void PrintTo(const Jet& j, std::ostream* os) { *os << to_string(j.poly) << " + O(" << j.order + 1 << ")"; }

}  // namespace umbrella
