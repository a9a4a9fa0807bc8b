#pragma once

#include "acceptance.hpp"
#include "convexity.hpp"
#include "foliation.hpp"
#include "io.hpp"
#include "local_algebra.hpp"
#include "portrait.hpp"
#include "symplectic.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace umbrella::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kOutDirEnv = "UMBRELLA_OUT_DIR";

struct RunConfig {
    std::string subcommand;
    std::string map, field, matrix, jordan, spec, curve;
    std::optional<unsigned> jet_order;
    unsigned kmax = kDefaultKMax;
    std::vector<double> radii;
    unsigned samples = 720;
    double weinstock_tol = kDefaultWeinstockTol;
    unsigned check_order = 4;
    bool inverse = false;
    double box = 0.5;
    std::size_t seeds = 64;
    double ode_tol = 1e-10;
    double t_end = 100;
    std::size_t max_steps = 1'000'000;
    unsigned probe_grid = 128;
    std::optional<double> disc;
    std::vector<double> annulus;
    unsigned quad = 32;
    std::string out;
    std::uint64_t seed = acceptance::kDefaultSeed;
};

namespace detail {

inline bool flag_present(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// Splices the flags of a JSON config file into the argument list. Flags given on the
/// command line win; a "command" key supplies the subcommand when none is given.
inline std::vector<std::string> expand_config(std::vector<std::string> args, const std::vector<std::string>& commands) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config requires a file argument");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (path.empty()) return args;
    const Json cfg = read_json_file(path);
    if (!cfg.is_object()) throw InputError(path + ": $: expected an object of flags");
    const bool has_command = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return std::find(commands.begin(), commands.end(), a) != commands.end();
    });
    for (const auto& [key, value] : cfg.items()) {
        if (key == "command") {
            if (!value.is_string()) throw InputError(path + ": $.command: expected a string");
            if (!has_command) args.insert(args.begin(), value.get<std::string>());
            continue;
        }
        const std::string flag = "--" + key;
        if (flag_present(args, flag)) continue;
        auto scalar = [&](const Json& v, const std::string& where) -> std::string {
            if (v.is_string()) return v.get<std::string>();
            if (v.is_number()) return v.dump();
            throw InputError(path + ": " + where + ": expected a string or number");
        };
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_array()) {
            args.push_back(flag);
            for (std::size_t i = 0; i < value.size(); ++i)
                args.push_back(scalar(value[i], "$." + key + "[" + std::to_string(i) + "]"));
        } else {
            args.push_back(flag);
            args.push_back(scalar(value, "$." + key));
        }
    }
    return args;
}

inline std::optional<std::filesystem::path> default_out_dir() {
    const char* env = std::getenv(kOutDirEnv);
    if (env == nullptr || *env == '\0') return std::nullopt;
    return std::filesystem::path(env);
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw UsageError("cannot write " + p.string());
    os << text;
    if (!os) throw UsageError("cannot write " + p.string());
}

inline Json number_array(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

// ---------------------------------------------------------------------------

inline PolyMap load_map(const std::string& path) {
    const Json j = read_json_file(path);
    if (j.is_object() && j.contains("V")) return henon_map(henon_from_json(j));
    return polymap_from_json(j);
}

inline Json coefficients_json(const SystemCoefficients& c) {
    return Json{{"g11", to_string(c.g11)},
                {"g12", to_string(c.g12)},
                {"g22", to_string(c.g22)},
                {"a02", to_string(c.a02)},
                {"b12", to_string(c.b12)},
                {"b03", to_string(c.b03)},
                {"g12_from_beta", to_string(c.g12_from_beta)},
                {"consistent", c.consistent},
                {"matches_template", c.matches_template},
                {"alpha_rest", poly_to_json(c.alpha_rest)},
                {"beta_rest", poly_to_json(c.beta_rest)}};
}

inline Json analyze_map(const RunConfig& cfg) {
    const PolyMap phi = load_map(cfg.map);
    VectorField2 x;
    if (cfg.jet_order) {
        auto [a, b] = jet_foliation(phi, *cfg.jet_order);
        x = {a.poly, b.poly};
    } else {
        x = characteristic_field(phi);
    }
    const SystemCoefficients c = extract_system_coefficients(x, CoefficientCheck::Lenient);
    Json j;
    j["alpha"] = poly_to_json(x.alpha);
    j["beta"] = poly_to_json(x.beta);
    j["coefficients"] = coefficients_json(c);
    j["generic"] = c.generic;
    j["jet_order"] = cfg.jet_order ? Json(*cfg.jet_order) : Json(nullptr);
    return j;
}

inline Json determinacy(const RunConfig& cfg) {
    const VectorField2 x = field_from_json(read_json_file(cfg.field));
    const MultiplicityReport rep = multiplicity(x, cfg.kmax);
    Json in_ak = Json::array();
    for (bool b : rep.in_Ak) in_ak.push_back(b);
    Json j;
    j["status"] = to_string(rep.status);
    j["mu0"] = rep.mu0 ? Json(*rep.mu0) : Json(nullptr);
    j["certified_at"] = rep.certified_at ? Json(*rep.certified_at) : Json(nullptr);
    j["k_max"] = cfg.kmax;
    j["tau_sequence"] = rep.tau_sequence;
    j["in_Ak"] = in_ak;
    if (!cfg.radii.empty()) {
        const LojasiewiczReport lo = lojasiewicz_probe(x, cfg.radii, cfg.samples);
        Json rows = Json::array();
        for (const auto& r : lo.rows) rows.push_back(Json{{"r", r.r}, {"min_norm", r.min_norm}});
        j["lojasiewicz"] = Json{{"rows", rows}, {"exponent", lo.exponent ? Json(*lo.exponent) : Json(nullptr)}};
    }
    return j;
}

inline Json report_json(const KallinReport& r) {
    return Json{{"valid", r.valid},
                {"qform_L1", matrix_to_json(r.qform_L1)},
                {"qform_L2", matrix_to_json(r.qform_L2)},
                {"margin_L1", to_string(r.margin_L1)},
                {"margin_L2", to_string(r.margin_L2)},
                {"problems", r.problems}};
}

inline Json convexity(const RunConfig& cfg) {
    const RatMatrix a = matrix_from_json(read_json_file(cfg.matrix));
    if (!a.square() || a.rows() == 0) throw InputError(cfg.matrix + ": $: matrix must be square and nonempty");
    std::optional<RealJordanSpec> given;
    if (!cfg.jordan.empty()) {
        given = jordan_from_json(read_json_file(cfg.jordan));
        if (given->dim() != a.rows()) {
            throw InputError(cfg.jordan + ": $.blocks: Jordan form has dimension " + std::to_string(given->dim()) +
                             " but the matrix has dimension " + std::to_string(a.rows()));
        }
    }

    const Verdict v = weinstock_decide(a, cfg.weinstock_tol);
    Json j;
    j["verdict"] = to_string(v.kind);
    if (v.witness) j["witness"] = format_complex(*v.witness);
    if (v.kind != VerdictKind::Convex) return j;

    std::string source = "given";
    RealJordanSpec spec;
    if (given) {
        spec = *given;
    } else if (auto exact = detect_real_jordan(a)) {
        spec = *exact;
        source = "exact";
    } else {
        spec = jordan_from_diagonalizable(a);
        source = "numeric";
    }
    const RatMatrix ja = spec.to_matrix();
    const KallinCertificate cert = kallin_construct(spec);
    j["jordan"] = jordan_to_json(spec);
    j["jordan_source"] = source;
    j["matrix_is_jordan_form"] = (ja == a);
    j["certificate"] = kallin_to_json(cert);
    j["report"] = report_json(kallin_verify(cert, ja));
    return j;
}

inline Json henon(const RunConfig& cfg) {
    const HenonSpec spec = henon_from_json(read_json_file(cfg.spec));
    const PolyMap h = henon_map(spec);
    Json j;
    j["spec"] = henon_to_json(spec);
    j["map"] = polymap_to_json(h);
    j["degree"] = h.degree();
    j["degree_bound"] = spec.degree_bound();
    j["symplectic_to_order"] = cfg.check_order;
    j["symplectic"] = defect_vanishes(symplectic_defect(h, cfg.check_order));
    if (cfg.inverse) {
        const PolyMap g = henon_inverse(spec);
        j["inverse"] = polymap_to_json(g);
        j["inverse_verified"] = apply_henon(spec, g) == PolyMap::identity(4) &&
                                apply_henon_inverse(spec, h) == PolyMap::identity(4);
    }
    return j;
}

inline Json area(const RunConfig& cfg) {
    const PolyMap h = curve_from_json(read_json_file(cfg.curve));
    if (cfg.disc.has_value() == !cfg.annulus.empty()) throw UsageError("area: give exactly one of --disc or --annulus");
    AreaDomain dom = Disc{};
    Json d;
    if (cfg.disc) {
        if (!(*cfg.disc > 0)) throw UsageError("area: --disc radius must be positive");
        dom = Disc{*cfg.disc};
        d = Json{{"type", "disc"}, {"r", *cfg.disc}};
    } else {
        if (cfg.annulus.size() != 2 || !(cfg.annulus[0] > 0) || !(cfg.annulus[1] > cfg.annulus[0]))
            throw UsageError("area: --annulus takes two radii 0 < r < R");
        dom = Annulus{cfg.annulus[0], cfg.annulus[1]};
        d = Json{{"type", "annulus"}, {"r", cfg.annulus[0]}, {"R", cfg.annulus[1]}};
    }
    const AreaResult r = symplectic_area(h, dom, cfg.quad);
    return Json{{"domain", d},
                {"quadrature_nodes", cfg.quad},
                {"area", r.area},
                {"boundary_integral", r.boundary_integral},
                {"difference", r.area - r.boundary_integral}};
}

inline Json portrait(const RunConfig& cfg, const std::filesystem::path& dir) {
    const VectorField2 x = field_from_json(read_json_file(cfg.field));
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw UsageError("cannot create output directory " + dir.string());

    auto pad = [](std::size_t i) {
        std::string s = std::to_string(i);
        return std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
    };
    const auto seeds = seed_lattice(cfg.box, cfg.seeds);
    const auto trs = phase_portrait_grid(x, cfg.box, cfg.seeds, {cfg.ode_tol, cfg.t_end, cfg.max_steps});
    Json list = Json::array();
    for (std::size_t i = 0; i < trs.size(); ++i) {
        const std::string name = "traj_" + pad(i) + ".csv";
        std::ostringstream os;
        write_csv(os, trs[i]);
        write_text(dir / name, os.str());
        list.push_back(Json{{"file", name},
                            {"seed", number_array({seeds[i][0], seeds[i][1]})},
                            {"terminated", to_string(trs[i].terminated)},
                            {"points", trs[i].points.size()}});
    }

    SeparatrixOptions sopt;
    sopt.tol = cfg.ode_tol;
    sopt.max_steps = cfg.max_steps;
    const SeparatrixResult sep = separatrices(x, cfg.box, sopt);
    Json arcs = Json::array();
    for (std::size_t i = 0; i < sep.arcs.size(); ++i) {
        const std::string name = "separatrix_" + std::to_string(i) + ".csv";
        std::ostringstream os;
        os << "t,s\n";
        for (const auto& p : sep.arcs[i].points) os << format_double(p[0]) << ',' << format_double(p[1]) << '\n';
        write_text(dir / name, os.str());
        arcs.push_back(Json{{"file", name}, {"theta", sep.arcs[i].theta}, {"points", sep.arcs[i].points.size()}});
    }
    Json sj{{"status", to_string(sep.status)}, {"directions", number_array(sep.directions)}, {"arcs", arcs}};
    if (sep.arcs.size() > 1) {
        sj["separation"] = arc_separation(sep.arcs);
        sj["crossing"] = arcs_cross(sep.arcs);
    }

    Json j;
    j["box"] = cfg.box;
    j["tol"] = cfg.ode_tol;
    j["t_end"] = cfg.t_end;
    j["trajectories"] = list;
    j["separatrices"] = sj;
    if (cfg.probe_grid > 0) j["zero_isolation_min"] = zero_isolation_probe(x, cfg.box, cfg.probe_grid);
    write_text(dir / "manifest.json", j.dump() + "\n");
    return j;
}

inline Json selftest(const RunConfig& cfg, std::ostream& err, bool& all_pass) {
    const auto results = acceptance::run_all(cfg.seed);
    Json list = Json::array();
    std::size_t passed = 0;
    for (const auto& r : results) {
        err << acceptance::format_line(r) << '\n';
        passed += r.pass ? 1 : 0;
        list.push_back(Json{{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    }
    all_pass = passed == results.size();
    return Json{{"seed", cfg.seed}, {"passed", passed}, {"total", results.size()}, {"criteria", list}};
}

}  // namespace detail

/// Runs one invocation; `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Characteristic foliations of Whitney umbrellas, determinacy, and polynomial convexity", "umbrella"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--out", cfg.out, "Output file (directory for portrait); default $UMBRELLA_OUT_DIR or stdout");
    app.add_option("--seed", cfg.seed, "Seed for randomized suites");
    app.add_option("--config", "JSON file whose keys mirror the long flags");

    auto* am = app.add_subcommand("analyze-map", "Characteristic foliation of phi(umbrella)");
    am->add_option("--map", cfg.map, "PolyMap or Henon spec JSON")->required()->check(CLI::ExistingFile);
    am->add_option("--jet-order", cfg.jet_order, "Compute only the k-jet of the field")->check(CLI::Range(1u, 30u));

    auto* dt = app.add_subcommand("determinacy", "Multiplicity and A_k membership of a planar field");
    dt->add_option("--field", cfg.field, "Field JSON {alpha, beta}")->required()->check(CLI::ExistingFile);
    dt->add_option("--kmax", cfg.kmax, "Highest truncation order")->check(CLI::Range(2u, 40u));
    dt->add_option("--radii", cfg.radii, "Decreasing radii for the Lojasiewicz probe");
    dt->add_option("--samples", cfg.samples, "Samples per circle")->check(CLI::Range(1u, 1'000'000u));

    auto* cv = app.add_subcommand("convexity", "Weinstock test and Kallin certificate");
    cv->add_option("--matrix", cfg.matrix, "Square matrix, row-major rational strings")->required()->check(CLI::ExistingFile);
    cv->add_option("--jordan", cfg.jordan, "Real Jordan form of the matrix")->check(CLI::ExistingFile);
    cv->add_option("--tol", cfg.weinstock_tol, "Relative eigenvalue tolerance")->check(CLI::Range(0.0, 1.0));

    auto* hn = app.add_subcommand("henon", "Expand a composite Henon map");
    hn->add_option("--spec", cfg.spec, "Henon spec JSON {V, eta, N}")->required()->check(CLI::ExistingFile);
    hn->add_option("--check-order", cfg.check_order, "Order of the symplectic check")->check(CLI::Range(0u, 30u));
    hn->add_flag("--inverse", cfg.inverse, "Also emit and verify the inverse");

    auto* pt = app.add_subcommand("portrait", "Trajectories and separatrices as CSV");
    pt->add_option("--field", cfg.field, "Field JSON {alpha, beta}")->required()->check(CLI::ExistingFile);
    pt->add_option("--box", cfg.box, "Half-width of the square window")->check(CLI::Range(1e-6, 1e3));
    pt->add_option("--seeds", cfg.seeds, "Number of lattice seeds")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
    pt->add_option("--tol", cfg.ode_tol, "Integrator tolerance")->check(CLI::Range(1e-14, 1e-2));
    pt->add_option("--t-end", cfg.t_end, "Integration time")->check(CLI::Range(1e-9, 1e12));
    pt->add_option("--max-steps", cfg.max_steps, "Step cap per trajectory")->check(CLI::Range(std::size_t{1}, std::size_t{100'000'000}));
    pt->add_option("--probe-grid", cfg.probe_grid, "Zero-isolation probe lattice (0 skips)")->check(CLI::Range(0u, 4096u));

    auto* ar = app.add_subcommand("area", "Symplectic area of a holomorphic curve");
    ar->add_option("--curve", cfg.curve, "Curve JSON {coefficients} or PolyMap")->required()->check(CLI::ExistingFile);
    ar->add_option("--disc", cfg.disc, "Disc radius");
    ar->add_option("--annulus", cfg.annulus, "Annulus radii r R")->expected(2);
    ar->add_option("--quad", cfg.quad, "Gauss-Legendre nodes")->check(CLI::Range(1u, 512u));

    auto* st = app.add_subcommand("selftest", "Run the acceptance suite");

    std::vector<std::string> commands;
    for (const auto* s : app.get_subcommands({})) commands.push_back(s->get_name());

    try {
        args = detail::expand_config(std::move(args), commands);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsageError;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsageError;
    }

    const CLI::App* sub = app.get_subcommands().front();
    cfg.subcommand = sub->get_name();
    const auto env_dir = detail::default_out_dir();

    try {
        std::optional<std::filesystem::path> target;
        if (!cfg.out.empty()) {
            target = cfg.out;
        } else if (env_dir) {
            target = cfg.subcommand == "portrait" ? *env_dir / "portrait" : *env_dir / (cfg.subcommand + ".json");
        }
        if (cfg.subcommand == "portrait" && !target) throw UsageError("portrait: --out directory is required");
        if (target && cfg.subcommand != "portrait") {
            const auto parent = target->parent_path();
            if (!parent.empty() && !std::filesystem::is_directory(parent)) {
                if (env_dir && cfg.out.empty()) std::filesystem::create_directories(parent);
                else throw UsageError("output directory does not exist: " + parent.string());
            }
        }

        Json result;
        bool ok = true;
        if (sub == am) result = detail::analyze_map(cfg);
        else if (sub == dt) result = detail::determinacy(cfg);
        else if (sub == cv) result = detail::convexity(cfg);
        else if (sub == hn) result = detail::henon(cfg);
        else if (sub == ar) result = detail::area(cfg);
        else if (sub == pt) result = detail::portrait(cfg, *target);
        else if (sub == st) result = detail::selftest(cfg, err, ok);

        const std::string text = result.dump() + "\n";
        if (target && cfg.subcommand != "portrait") detail::write_text(*target, text);
        else out << text;
        return ok ? kOk : kDomainError;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace umbrella::cli
