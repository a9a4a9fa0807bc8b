#pragma once

// JSON encodings of polynomials, maps, Hénon data, matrices, Jordan data and fields.
// Exact values are always strings ("p/q"); reading reports the JSON path of any
// schema violation.

#include "convexity.hpp"
#include "foliation.hpp"
#include "matrix.hpp"
#include "multipoly.hpp"
#include "symplectic.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace umbrella {

using Json = nlohmann::ordered_json;

/// Malformed or schema-violating input.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(origin + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
    throw InputError(where + ": " + what);
}

inline const Json& member(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) schema_error(where, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) schema_error(where, std::string("missing key \"") + key + "\"");
    return *it;
}

inline std::size_t as_size(const Json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) schema_error(where, "expected a non-negative integer");
    return j.get<std::size_t>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scalars

inline Json rational_to_json(const Rational& q) { return to_string(q); }

inline Rational rational_from_json(const Json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            detail::schema_error(where, e.what());
        }
    }
    if (j.is_number_integer()) return Rational(j.get<long>());
    detail::schema_error(where, "expected a rational string such as \"-3/4\"");
}

inline Json complex_to_json(const Complex& c) { return Json{{"re", to_string(c.re)}, {"im", to_string(c.im)}}; }

inline Complex complex_from_json(const Json& j, const std::string& where) {
    if (j.is_object()) {
        Complex c;
        if (j.contains("re")) c.re = rational_from_json(j["re"], where + ".re");
        if (j.contains("im")) c.im = rational_from_json(j["im"], where + ".im");
        return c;
    }
    return Complex(rational_from_json(j, where));
}

// ---------------------------------------------------------------------------
// Polynomials

template <class C>
Json poly_to_json(const BasicPoly<C>& p, bool with_text = true) {
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms()) {
        Json coef;
        if constexpr (std::is_same_v<C, Complex>) coef = complex_to_json(c);
        else coef = rational_to_json(c);
        terms.push_back(Json{{"exp", e}, {"coef", coef}});
    }
    Json j{{"vars", p.var_names()}, {"terms", terms}};
    if (with_text) j["text"] = to_string(p);
    return j;
}

template <class C>
BasicPoly<C> poly_from_json(const Json& j, const std::string& where = "$") {
    const Json& vars = detail::member(j, "vars", where);
    if (!vars.is_array()) detail::schema_error(where + ".vars", "expected an array of names");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (!vars[i].is_string()) detail::schema_error(where + ".vars[" + std::to_string(i) + "]", "expected a string");
        names.push_back(vars[i].get<std::string>());
    }
    if (names.empty()) detail::schema_error(where + ".vars", "at least one variable is required");
    BasicPoly<C> p(names.size(), names);
    const Json& terms = detail::member(j, "terms", where);
    if (!terms.is_array()) detail::schema_error(where + ".terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string at = where + ".terms[" + std::to_string(i) + "]";
        const Json& ex = detail::member(terms[i], "exp", at);
        if (!ex.is_array() || ex.size() != names.size()) {
            detail::schema_error(at + ".exp", "expected " + std::to_string(names.size()) + " exponents");
        }
        Exponent e;
        for (std::size_t k = 0; k < ex.size(); ++k) {
            e.push_back(static_cast<std::uint32_t>(detail::as_size(ex[k], at + ".exp[" + std::to_string(k) + "]")));
        }
        const Json& coef = detail::member(terms[i], "coef", at);
        if constexpr (std::is_same_v<C, Complex>) p.add_term(e, complex_from_json(coef, at + ".coef"));
        else p.add_term(e, rational_from_json(coef, at + ".coef"));
    }
    return p;
}

// ---------------------------------------------------------------------------
// Maps and Hénon data

inline Json polymap_to_json(const PolyMap& f) {
    Json comps = Json::array();
    for (const auto& c : f.components()) comps.push_back(poly_to_json(c));
    return Json{{"source_dim", f.source_dim()}, {"target_dim", f.target_dim()}, {"components", comps}};
}

inline PolyMap polymap_from_json(const Json& j, const std::string& where = "$") {
    const std::size_t src = detail::as_size(detail::member(j, "source_dim", where), where + ".source_dim");
    const std::size_t tgt = detail::as_size(detail::member(j, "target_dim", where), where + ".target_dim");
    const Json& comps = detail::member(j, "components", where);
    if (!comps.is_array() || comps.size() != tgt) {
        detail::schema_error(where + ".components", "expected " + std::to_string(tgt) + " polynomials");
    }
    std::vector<Poly> polys;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string at = where + ".components[" + std::to_string(i) + "]";
        Poly p = poly_from_json<Rational>(comps[i], at);
        if (p.num_vars() != src) detail::schema_error(at, "expected " + std::to_string(src) + " variables");
        polys.push_back(std::move(p));
    }
    try {
        return PolyMap(src, std::move(polys));
    } catch (const std::invalid_argument& e) {
        detail::schema_error(where, e.what());
    }
}

inline Json henon_to_json(const HenonSpec& s) {
    return Json{{"V", poly_to_json(s.V)}, {"eta", {to_string(s.eta[0]), to_string(s.eta[1])}}, {"N", s.N}};
}

inline HenonSpec henon_from_json(const Json& j, const std::string& where = "$") {
    HenonSpec s;
    s.V = poly_from_json<Rational>(detail::member(j, "V", where), where + ".V");
    if (s.V.num_vars() != 2) detail::schema_error(where + ".V", "V must be a polynomial in two variables");
    const Json& eta = detail::member(j, "eta", where);
    if (!eta.is_array() || eta.size() != 2) detail::schema_error(where + ".eta", "expected two rationals");
    s.eta = {rational_from_json(eta[0], where + ".eta[0]"), rational_from_json(eta[1], where + ".eta[1]")};
    const std::size_t n = detail::as_size(detail::member(j, "N", where), where + ".N");
    if (n < 1) detail::schema_error(where + ".N", "N must be at least 1");
    s.N = static_cast<unsigned>(n);
    return s;
}

// ---------------------------------------------------------------------------
// Matrices, Jordan data, fields

inline Json matrix_to_json(const RatMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_string(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

/// Row-major array of rational strings; {"matrix": [...]} is accepted too.
inline RatMatrix matrix_from_json(const Json& j, const std::string& where = "$") {
    if (j.is_object()) return matrix_from_json(detail::member(j, "matrix", where), where + ".matrix");
    if (!j.is_array() || j.empty()) detail::schema_error(where, "expected a non-empty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    RatMatrix m(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != cols || cols == 0) detail::schema_error(at, "rows must have equal, positive length");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = rational_from_json(j[i][k], at + "[" + std::to_string(k) + "]");
    }
    return m;
}

inline Json jordan_to_json(const RealJordanSpec& spec) {
    Json blocks = Json::array();
    for (const auto& b : spec.blocks) {
        if (const auto* r = std::get_if<RealBlock>(&b)) {
            blocks.push_back(Json{{"type", "real"}, {"lambda", to_string(r->lambda)}, {"size", r->size}});
        } else {
            const auto& c = std::get<ComplexBlock>(b);
            blocks.push_back(Json{{"type", "complex"}, {"s", to_string(c.s)}, {"t", to_string(c.t)}, {"pairs", c.pair_count}});
        }
    }
    return Json{{"blocks", blocks}};
}

inline RealJordanSpec jordan_from_json(const Json& j, const std::string& where = "$") {
    const Json& blocks = detail::member(j, "blocks", where);
    if (!blocks.is_array()) detail::schema_error(where + ".blocks", "expected an array");
    RealJordanSpec spec;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string at = where + ".blocks[" + std::to_string(i) + "]";
        const Json& type = detail::member(blocks[i], "type", at);
        if (type == "real") {
            spec.blocks.emplace_back(RealBlock{rational_from_json(detail::member(blocks[i], "lambda", at), at + ".lambda"),
                                               detail::as_size(detail::member(blocks[i], "size", at), at + ".size")});
        } else if (type == "complex") {
            spec.blocks.emplace_back(ComplexBlock{rational_from_json(detail::member(blocks[i], "s", at), at + ".s"),
                                                  rational_from_json(detail::member(blocks[i], "t", at), at + ".t"),
                                                  detail::as_size(detail::member(blocks[i], "pairs", at), at + ".pairs")});
        } else {
            detail::schema_error(at + ".type", "expected \"real\" or \"complex\"");
        }
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        detail::schema_error(where, e.what());
    }
    return spec;
}

inline Json field_to_json(const VectorField2& x) {
    return Json{{"alpha", poly_to_json(x.alpha)}, {"beta", poly_to_json(x.beta)}};
}

inline VectorField2 field_from_json(const Json& j, const std::string& where = "$") {
    const Poly a = poly_from_json<Rational>(detail::member(j, "alpha", where), where + ".alpha");
    const Poly b = poly_from_json<Rational>(detail::member(j, "beta", where), where + ".beta");
    try {
        return VectorField2(a, b);
    } catch (const std::invalid_argument& e) {
        detail::schema_error(where, e.what());
    }
}

/// {"coefficients": [[c0, c1, ...], ...]} with one list per component of f(ζ), or a
/// PolyMap from R^2.
inline PolyMap curve_from_json(const Json& j, const std::string& where = "$") {
    if (j.is_object() && j.contains("coefficients")) {
        const Json& cs = j["coefficients"];
        if (!cs.is_array() || cs.empty()) detail::schema_error(where + ".coefficients", "expected a non-empty array");
        std::vector<std::vector<Complex>> out;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const std::string at = where + ".coefficients[" + std::to_string(i) + "]";
            if (!cs[i].is_array()) detail::schema_error(at, "expected an array of coefficients");
            std::vector<Complex> comp;
            for (std::size_t k = 0; k < cs[i].size(); ++k) comp.push_back(complex_from_json(cs[i][k], at + "[" + std::to_string(k) + "]"));
            out.push_back(std::move(comp));
        }
        return holomorphic_curve(out);
    }
    return polymap_from_json(j, where);
}

inline Json kallin_to_json(const KallinCertificate& c) {
    Json alphas = Json::array();
    for (const auto& block : c.alphas) {
        Json b = Json::array();
        for (const auto& a : block) b.push_back(to_string(a));
        alphas.push_back(b);
    }
    Json deltas = Json::array();
    for (const auto& d : c.block_deltas) deltas.push_back(to_string(d));
    return Json{{"p", poly_to_json(c.p)},
                {"alphas", alphas},
                {"delta", to_string(c.delta)},
                {"block_deltas", deltas},
                {"qform_L1", matrix_to_json(c.qform_L1)},
                {"qform_L2", matrix_to_json(c.qform_L2)},
                {"margin_L1", to_string(c.margin_L1)},
                {"margin_L2", to_string(c.margin_L2)}};
}

}  // namespace umbrella
