#pragma once

// Finite-determinacy data for planar vector-field germs, by graded linear algebra in
// the truncated rings C(2)/M^{k+1}.

#include "foliation.hpp"
#include "matrix.hpp"
#include "multipoly.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace umbrella {

namespace detail {

/// Rows trunc(m · X_i, k) for every monomial m of degree <= k, as coordinates in the
/// monomial basis of degree <= k.
inline RatMatrix ideal_rows(const VectorField2& x, unsigned k) {
    const auto basis = monomial_basis(2, k);
    std::map<Exponent, std::size_t, GrlexLess> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
    RatMatrix rows(2 * basis.size(), basis.size());
    std::size_t r = 0;
    for (const Poly* gen : {&x.alpha, &x.beta}) {
        for (const auto& m : basis) {
            const Poly prod = Poly::multiply(Poly::monomial(2, m, Rational(1)), *gen, k);
            for (const auto& [e, c] : prod.terms()) rows(r, index.at(e)) = c;
            ++r;
        }
    }
    return rows;
}

inline std::size_t basis_size(unsigned k) { return static_cast<std::size_t>(k + 1) * (k + 2) / 2; }

}  // namespace detail

/// dim C(2) / (<X_1, X_2> + M^{k+1}).
inline std::size_t tau_k(const VectorField2& x, unsigned k) {
    if (k < 1) throw std::invalid_argument("tau_k: k must be >= 1");
    return detail::basis_size(k) - rank(detail::ideal_rows(x, k));
}

inline bool is_in_Ak(const VectorField2& x, unsigned k) {
    return static_cast<long>(tau_k(x, k)) > static_cast<long>(k) - 1;
}

/// M^{k+1} ⊆ <X> + M^{k+2}: every monomial of degree k+1 is, modulo M^{k+2}, a
/// combination of monomial multiples of the generators.
inline bool nakayama_certificate(const VectorField2& x, unsigned k) {
    const RatMatrix s = detail::ideal_rows(x, k + 1);
    const std::size_t base = rank(s);
    const std::size_t first = detail::basis_size(k);
    const std::size_t count = k + 2;  // monomials of degree k+1
    RatMatrix ext(s.rows() + count, s.cols());
    ext.set_block(0, 0, s);
    for (std::size_t i = 0; i < count; ++i) ext(s.rows() + i, first + i) = 1;
    return rank(ext) == base;
}

enum class MultiplicityStatus { Finite, UndeterminedUpToK };

struct MultiplicityReport {
    std::vector<std::size_t> tau_sequence;  // tau_1 .. tau_K
    std::vector<bool> in_Ak;
    std::optional<std::size_t> mu0;
    std::optional<unsigned> certified_at;
    MultiplicityStatus status = MultiplicityStatus::UndeterminedUpToK;
};

inline constexpr unsigned kDefaultKMax = 12;

inline MultiplicityReport multiplicity(const VectorField2& x, unsigned k_max = kDefaultKMax) {
    if (k_max < 2) throw std::invalid_argument("multiplicity: k_max must be >= 2");
    MultiplicityReport rep;
    for (unsigned k = 1; k <= k_max; ++k) {
        const std::size_t tau = tau_k(x, k);
        rep.tau_sequence.push_back(tau);
        rep.in_Ak.push_back(static_cast<long>(tau) > static_cast<long>(k) - 1);
        if (!rep.certified_at && nakayama_certificate(x, k)) {
            rep.certified_at = k;
            rep.mu0 = tau;
            rep.status = MultiplicityStatus::Finite;
        }
    }
    return rep;
}

inline const char* to_string(MultiplicityStatus s) {
    return s == MultiplicityStatus::Finite ? "finite" : "undetermined_up_to_K";
}

// ---------------------------------------------------------------------------
// Łojasiewicz probe

struct LojasiewiczRow {
    double r = 0;
    double min_norm = 0;
};

struct LojasiewiczReport {
    std::vector<LojasiewiczRow> rows;
    std::optional<double> exponent;  // absent when some minimum is zero or only one radius
};

inline LojasiewiczReport lojasiewicz_probe(const VectorField2& x, const std::vector<double>& radii,
                                           unsigned samples_per_circle) {
    if (radii.empty()) throw std::invalid_argument("lojasiewicz_probe: empty radii");
    if (samples_per_circle == 0) throw std::invalid_argument("lojasiewicz_probe: samples_per_circle must be positive");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0)) throw std::invalid_argument("lojasiewicz_probe: radii must be positive");
        if (i > 0 && !(radii[i] < radii[i - 1])) throw std::invalid_argument("lojasiewicz_probe: radii must decrease");
    }
    const CompiledPoly<double> a(x.alpha), b(x.beta);
    LojasiewiczReport rep;
    bool all_positive = true;
    for (double r : radii) {
        double best = std::numeric_limits<double>::infinity();
        for (unsigned j = 0; j < samples_per_circle; ++j) {
            const double th = 2 * std::numbers::pi * j / samples_per_circle;
            const std::array<double, 2> p{r * std::cos(th), r * std::sin(th)};
            const double va = a(std::span<const double>(p)), vb = b(std::span<const double>(p));
            best = std::min(best, std::hypot(va, vb));
        }
        rep.rows.push_back({r, best});
        if (!(best > 0)) all_positive = false;
    }
    if (all_positive && radii.size() >= 2) {
        double mx = 0, my = 0;
        for (const auto& row : rep.rows) {
            mx += std::log(row.r);
            my += std::log(row.min_norm);
        }
        mx /= rep.rows.size();
        my /= rep.rows.size();
        double sxy = 0, sxx = 0;
        for (const auto& row : rep.rows) {
            const double dx = std::log(row.r) - mx;
            sxy += dx * (std::log(row.min_norm) - my);
            sxx += dx * dx;
        }
        rep.exponent = sxy / sxx;
    }
    return rep;
}

}  // namespace umbrella
