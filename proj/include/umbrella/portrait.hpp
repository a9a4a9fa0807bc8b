#pragma once

// Numerical phase portraits of planar polynomial fields (t', s') = (alpha, beta).

#include "foliation.hpp"
#include "multipoly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace umbrella {

enum class Termination { ReachedOrigin, LeftBox, MaxSteps, ReachedEnd, StepUnderflow };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::ReachedOrigin: return "reached_origin";
        case Termination::LeftBox: return "left_box";
        case Termination::MaxSteps: return "max_steps";
        case Termination::ReachedEnd: return "reached_end";
        case Termination::StepUnderflow: return "step_underflow";
    }
    return "?";
}

struct TrajectoryPoint {
    double time, t, s;
};

/// Times are elapsed flow time and always increase; `backward` records that the field
/// was followed in negative time.
struct Trajectory {
    std::vector<TrajectoryPoint> points;
    Termination terminated = Termination::ReachedEnd;
    bool backward = false;
};

inline constexpr double kOriginRadius = 1e-10;

struct IntegrateOptions {
    double tol = 1e-10;
    double box = 1;
    std::size_t max_steps = 1'000'000;
};

namespace detail {

class PlanarField {
public:
    PlanarField(const VectorField2& x, double sign) : a_(x.alpha), b_(x.beta), sign_(sign) {}
    std::array<double, 2> operator()(const std::array<double, 2>& p) const {
        const std::span<const double> sp(p);
        return {sign_ * a_(sp), sign_ * b_(sp)};
    }

private:
    CompiledPoly<double> a_, b_;
    double sign_;
};

struct DpStep {
    std::array<double, 2> y5, k7;
    double err;
};

// Dormand–Prince 5(4) with first-same-as-last reuse of k1.
inline DpStep dp_step(const PlanarField& f, const std::array<double, 2>& y, const std::array<double, 2>& k1, double h,
                      double tol) {
    static constexpr double a21 = 1.0 / 5, a31 = 3.0 / 40, a32 = 9.0 / 40, a41 = 44.0 / 45, a42 = -56.0 / 15,
                            a43 = 32.0 / 9, a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729, a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656, b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84, e1 = 71.0 / 57600,
                            e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                            e7 = -1.0 / 40;
    auto at = [&](std::initializer_list<std::pair<double, const std::array<double, 2>*>> terms) {
        std::array<double, 2> r = y;
        for (const auto& [c, k] : terms)
            for (int i = 0; i < 2; ++i) r[i] += h * c * (*k)[i];
        return r;
    };
    const auto k2 = f(at({{a21, &k1}}));
    const auto k3 = f(at({{a31, &k1}, {a32, &k2}}));
    const auto k4 = f(at({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const auto k5 = f(at({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const auto k6 = f(at({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    DpStep out;
    out.y5 = at({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    out.k7 = f(out.y5);
    double err = 0;
    for (int i = 0; i < 2; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * out.k7[i]);
        const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(out.y5[i]));
        err = std::max(err, std::abs(e) / sc);
    }
    out.err = err;
    return out;
}

inline bool inside(const std::array<double, 2>& y, double box) {
    return std::abs(y[0]) <= box && std::abs(y[1]) <= box;
}

}  // namespace detail

/// Follows the field from `start` for |t_end| units of time (backward when t_end < 0),
/// stopping inside the origin ball, on the boundary of [-box, box]^2, or at the step cap.
inline Trajectory integrate(const VectorField2& x, std::array<double, 2> start, double t_end,
                            const IntegrateOptions& opt = {}) {
    if (!(opt.tol > 0)) throw std::invalid_argument("integrate: tol must be positive");
    if (!(opt.box > 0)) throw std::invalid_argument("integrate: box must be positive");
    if (!detail::inside(start, opt.box)) throw std::invalid_argument("integrate: start lies outside the box");
    const detail::PlanarField f(x, t_end < 0 ? -1.0 : 1.0);
    const double span = std::abs(t_end);

    Trajectory tr;
    tr.backward = t_end < 0;
    tr.points.push_back({0, start[0], start[1]});
    auto y = start;
    if (std::hypot(y[0], y[1]) < kOriginRadius) {
        tr.terminated = Termination::ReachedOrigin;
        return tr;
    }
    double tau = 0;
    auto k1 = f(y);
    const double fn = std::hypot(k1[0], k1[1]);
    double h = fn > 0 ? std::min(span, 0.01 * std::max(std::hypot(y[0], y[1]), opt.tol) / fn) : span;
    double err_prev = 1e-4;
    constexpr double alpha = 0.17, beta = 0.04, safety = 0.9;
    bool rejected = false;

    for (std::size_t steps = 0;; ++steps) {
        if (tau >= span) {
            tr.terminated = Termination::ReachedEnd;
            return tr;
        }
        if (steps >= opt.max_steps) {
            tr.terminated = Termination::MaxSteps;
            return tr;
        }
        h = std::min(h, span - tau);
        if (h < 1e-14 * std::max(1.0, tau)) {
            tr.terminated = Termination::StepUnderflow;
            return tr;
        }
        const auto st = detail::dp_step(f, y, k1, h, opt.tol);
        if (!(st.err <= 1)) {
            const double fac = std::isfinite(st.err) ? std::max(0.2, safety * std::pow(st.err, -alpha)) : 0.2;
            h *= std::min(1.0, fac);
            rejected = true;
            continue;
        }
        if (!detail::inside(st.y5, opt.box)) {
            // shrink the step until the endpoint sits on the boundary
            double lo = 0, hi = h;
            std::array<double, 2> edge = y;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                const auto trial = detail::dp_step(f, y, k1, mid, opt.tol).y5;
                if (detail::inside(trial, opt.box)) {
                    lo = mid;
                    edge = trial;
                } else {
                    hi = mid;
                }
            }
            if (lo > 0) tr.points.push_back({tau + lo, edge[0], edge[1]});
            tr.terminated = Termination::LeftBox;
            return tr;
        }
        tau += h;
        y = st.y5;
        k1 = st.k7;
        tr.points.push_back({tau, y[0], y[1]});
        if (std::hypot(y[0], y[1]) < kOriginRadius) {
            tr.terminated = Termination::ReachedOrigin;
            return tr;
        }
        const double e = std::max(st.err, 1e-10);
        double fac = safety * std::pow(e, -alpha) * std::pow(err_prev, beta);
        fac = std::clamp(fac, 0.2, rejected ? 1.0 : 10.0);
        h *= fac;
        err_prev = e;
        rejected = false;
    }
}

// ---------------------------------------------------------------------------
// Separatrices

struct Arc {
    std::vector<std::array<double, 2>> points;  // passes through the origin
    double theta = 0;                           // direction of the first half at the origin
};

enum class SeparatrixStatus { Found, Node, NoneFound };

inline const char* to_string(SeparatrixStatus s) {
    switch (s) {
        case SeparatrixStatus::Found: return "found";
        case SeparatrixStatus::Node: return "node";
        case SeparatrixStatus::NoneFound: return "none_found";
    }
    return "?";
}

struct SeparatrixResult {
    SeparatrixStatus status = SeparatrixStatus::NoneFound;
    std::vector<double> directions;  // characteristic directions in [0, 2pi)
    std::vector<Arc> arcs;
};

struct SeparatrixOptions {
    double tol = 1e-10;
    double t_max = 1e6;
    unsigned bins = 720;
    double seed_fraction = 1e-2;
    std::size_t max_steps = 1'000'000;
};

/// Directions theta at which the lowest-order homogeneous part of the field is radial:
/// zeros of F(theta) = cos(theta) beta_m - sin(theta) alpha_m. Empty when F vanishes
/// identically.
inline std::optional<std::vector<double>> characteristic_directions(const VectorField2& x, unsigned bins = 720) {
    const int oa = x.alpha.order(), ob = x.beta.order();
    if (oa < 0 && ob < 0) return std::nullopt;
    const unsigned m = static_cast<unsigned>(oa < 0 ? ob : ob < 0 ? oa : std::min(oa, ob));
    const Poly am = x.alpha.homogeneous_part(m), bm = x.beta.homogeneous_part(m);
    const Poly t = Poly::variable(2, 0, plane_names()), s = Poly::variable(2, 1, plane_names());
    if (t * bm - s * am == Poly(2, plane_names())) return std::nullopt;
    const CompiledPoly<double> ac(am), bc(bm);
    auto F = [&](double th) {
        const std::array<double, 2> p{std::cos(th), std::sin(th)};
        const std::span<const double> sp(p);
        return std::cos(th) * bc(sp) - std::sin(th) * ac(sp);
    };
    std::vector<double> dirs;
    const double w = 2 * std::numbers::pi / bins;
    for (unsigned k = 0; k < bins; ++k) {
        double lo = w * (k + 0.5), hi = w * (k + 1.5);
        double flo = F(lo), fhi = F(hi);
        if ((flo < 0) == (fhi < 0) || flo == 0) continue;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = F(mid);
            if ((fm < 0) == (flo < 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        double th = std::fmod(0.5 * (lo + hi), 2 * std::numbers::pi);
        if (std::abs(th - 2 * std::numbers::pi) < 1e-12) th = 0;
        dirs.push_back(th);
    }
    std::sort(dirs.begin(), dirs.end());
    return dirs;
}

namespace detail {

// Half-separatrix leaving the origin in direction theta, as a polyline from the origin.
inline std::vector<std::array<double, 2>> half_separatrix(const VectorField2& x, double theta, double box,
                                                          const SeparatrixOptions& opt) {
    const double r0 = opt.seed_fraction * box;
    const std::array<double, 2> seed{r0 * std::cos(theta), r0 * std::sin(theta)};
    const detail::PlanarField f(x, 1.0);
    const auto v = f(seed);
    const double radial = seed[0] * v[0] + seed[1] * v[1];
    const auto tr = integrate(x, seed, radial < 0 ? -opt.t_max : opt.t_max, {opt.tol, box, opt.max_steps});
    std::vector<std::array<double, 2>> pts{{0.0, 0.0}};
    for (const auto& p : tr.points) pts.push_back({p.t, p.s});
    return pts;
}

inline double angle_gap(double a, double b) {
    const double d = std::fmod(std::abs(a - b), 2 * std::numbers::pi);
    return std::min(d, 2 * std::numbers::pi - d);
}

}  // namespace detail

/// Arcs through the origin traced along characteristic directions; opposite directions
/// are joined into one arc.
inline SeparatrixResult separatrices(const VectorField2& x, double box, const SeparatrixOptions& opt = {}) {
    if (!(box > 0)) throw std::invalid_argument("separatrices: box must be positive");
    SeparatrixResult res;
    const auto dirs = characteristic_directions(x, opt.bins);
    if (!dirs) {
        res.status = SeparatrixStatus::Node;
        return res;
    }
    res.directions = *dirs;
    if (dirs->empty()) return res;
    const double pair_tol = 4 * 2 * std::numbers::pi / opt.bins;
    std::vector<bool> used(dirs->size(), false);
    for (std::size_t i = 0; i < dirs->size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        Arc arc;
        arc.theta = (*dirs)[i];
        auto first = detail::half_separatrix(x, arc.theta, box, opt);
        std::optional<std::size_t> partner;
        for (std::size_t j = i + 1; j < dirs->size(); ++j) {
            if (!used[j] && detail::angle_gap((*dirs)[j], arc.theta + std::numbers::pi) < pair_tol) {
                partner = j;
                break;
            }
        }
        if (partner) {
            used[*partner] = true;
            auto second = detail::half_separatrix(x, (*dirs)[*partner], box, opt);
            arc.points.assign(second.rbegin(), second.rend());
            arc.points.insert(arc.points.end(), first.begin() + 1, first.end());
        } else {
            arc.points = std::move(first);
        }
        res.arcs.push_back(std::move(arc));
    }
    res.status = SeparatrixStatus::Found;
    return res;
}

namespace detail {

inline bool segments_cross(std::array<double, 2> p, std::array<double, 2> q, std::array<double, 2> r,
                           std::array<double, 2> s) {
    auto cross = [](std::array<double, 2> o, std::array<double, 2> a, std::array<double, 2> b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    auto opposite = [](double u, double v) { return (u > 0 && v < 0) || (u < 0 && v > 0); };
    return opposite(cross(p, q, r), cross(p, q, s)) && opposite(cross(r, s, p), cross(r, s, q));
}

}  // namespace detail

/// Smallest distance between vertices of two different arcs, ignoring vertices inside
/// the origin ball.
inline double arc_separation(const std::vector<Arc>& arcs, double ball = 1e-6) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t j = i + 1; j < arcs.size(); ++j)
            for (const auto& u : arcs[i].points) {
                if (std::hypot(u[0], u[1]) < ball) continue;
                for (const auto& v : arcs[j].points) {
                    if (std::hypot(v[0], v[1]) < ball) continue;
                    best = std::min(best, std::hypot(u[0] - v[0], u[1] - v[1]));
                }
            }
    return best;
}

/// Whether two different arcs cross transversally at a point outside the origin ball.
inline bool arcs_cross(const std::vector<Arc>& arcs, double ball = 1e-6) {
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t j = i + 1; j < arcs.size(); ++j)
            for (std::size_t a = 0; a + 1 < arcs[i].points.size(); ++a)
                for (std::size_t b = 0; b + 1 < arcs[j].points.size(); ++b) {
                    const auto &p = arcs[i].points[a], &q = arcs[i].points[a + 1];
                    const auto &r = arcs[j].points[b], &s = arcs[j].points[b + 1];
                    if (!detail::segments_cross(p, q, r, s)) continue;
                    const double dx = q[0] - p[0], dy = q[1] - p[1], ex = s[0] - r[0], ey = s[1] - r[1];
                    const double u = ((r[0] - p[0]) * ey - (r[1] - p[1]) * ex) / (dx * ey - dy * ex);
                    if (std::hypot(p[0] + u * dx, p[1] + u * dy) >= ball) return true;
                }
    return false;
}

// ---------------------------------------------------------------------------
// Grids and probes

struct PortraitOptions {
    double tol = 1e-10;
    double t_end = 100;
    std::size_t max_steps = 1'000'000;
};

/// Seed i of n: cell centers of a ceil(sqrt(n))^2 lattice on [-box, box]^2, row-major.
inline std::vector<std::array<double, 2>> seed_lattice(double box, std::size_t n) {
    if (n == 0) throw std::invalid_argument("number of seeds must be at least 1");
    const auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    std::vector<std::array<double, 2>> seeds;
    for (std::size_t i = 0; i < m && seeds.size() < n; ++i)
        for (std::size_t j = 0; j < m && seeds.size() < n; ++j)
            seeds.push_back({-box + (2 * j + 1) * box / m, box - (2 * i + 1) * box / m});
    return seeds;
}

inline std::vector<Trajectory> phase_portrait_grid(const VectorField2& x, double box, std::size_t n_seeds,
                                                   const PortraitOptions& opt = {}) {
    if (!(box > 0)) throw std::invalid_argument("box must be positive");
    std::vector<Trajectory> out;
    for (const auto& seed : seed_lattice(box, n_seeds))
        out.push_back(integrate(x, seed, opt.t_end, {opt.tol, box, opt.max_steps}));
    return out;
}

/// min ||X|| over lattice points of spacing box/grid in [-box, box]^2 with norm >= box/grid.
inline double zero_isolation_probe(const VectorField2& x, double box, unsigned grid) {
    if (grid < 8) throw std::invalid_argument("zero_isolation_probe: grid must be >= 8");
    if (!(box > 0)) throw std::invalid_argument("box must be positive");
    const CompiledPoly<double> a(x.alpha), b(x.beta);
    const double h = box / grid;
    double best = std::numeric_limits<double>::infinity();
    const int g = static_cast<int>(grid);
    for (int i = -g; i <= g; ++i)
        for (int j = -g; j <= g; ++j) {
            const std::array<double, 2> p{i * h, j * h};
            if (std::hypot(p[0], p[1]) < h * (1 - 1e-12)) continue;
            const std::span<const double> sp(p);
            best = std::min(best, std::hypot(a(sp), b(sp)));
        }
    return best;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const Trajectory& tr) {
    os << "time,t,s\n";
    for (const auto& p : tr.points) os << format_double(p.time) << ',' << format_double(p.t) << ',' << format_double(p.s) << '\n';
}

}  // namespace umbrella
