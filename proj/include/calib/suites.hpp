#pragma once

// Named verification suites: configuration, section and profile specs, and the
// sampled runs that fill a VerificationReport.

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "calib/errors.hpp"
#include "calib/examples.hpp"
#include "calib/g2.hpp"
#include "calib/octonion.hpp"
#include "calib/report.hpp"
#include "calib/spin7.hpp"
#include "calib/stenzel.hpp"
#include "calib/submanifold.hpp"

namespace calib {

inline std::vector<std::string> suite_names() {
    return {"stenzel-lagrangian", "g2-associative", "g2-coassociative", "cayley",
            "pde",                "frame-change",   "octonion",         "classify"};
}

struct SuiteConfig {
    std::string suite;
    std::string chart;    // empty selects the suite default
    std::string section;  // empty selects the suite default
    int samples = 50;
    std::uint64_t seed = 1;
    double fd_step = 1e-5;
    double tol_algebraic = 1e-10;
    double tol_geometric = 1e-6;
    double tol_verdict = 1e-4;
    std::string profile = "default";
    std::string format = "json";
    std::string out;

    void validate() const {
        if (!(tol_algebraic > 0) || !(tol_geometric > 0) || !(tol_verdict > 0))
            throw config_error("tolerances must be positive");
        if (samples < 1) throw config_error("samples must be at least 1");
        if (!(fd_step > 0) || fd_step > 1e-2) throw config_error("fd-step must lie in (0, 1e-2]");
        if (format != "json" && format != "csv") throw config_error("format must be json or csv");
    }

    // Flat key=value assignment shared by config files and overrides.
    void set(const std::string& key, const std::string& value) {
        auto num = [&](const std::string& v) {
            try {
                size_t pos = 0;
                const double d = std::stod(v, &pos);
                if (pos != v.size()) throw std::invalid_argument(v);
                return d;
            } catch (const std::exception&) {
                throw config_error("bad numeric value for " + key + ": " + v);
            }
        };
        if (key == "suite") suite = value;
        else if (key == "chart") chart = value;
        else if (key == "section") section = value;
        else if (key == "samples") {
            const double d = num(value);
            if (d != std::floor(d) || d > 1e7) throw config_error("samples must be an integer");
            samples = static_cast<int>(d);
        } else if (key == "seed") {
            try {
                size_t pos = 0;
                seed = std::stoull(value, &pos);
                if (pos != value.size()) throw std::invalid_argument(value);
            } catch (const std::exception&) {
                throw config_error("bad seed: " + value);
            }
        } else if (key == "fd_step" || key == "fd-step") fd_step = num(value);
        else if (key == "tol_algebraic" || key == "tol-algebraic") tol_algebraic = num(value);
        else if (key == "tol_geometric" || key == "tol-geometric") tol_geometric = num(value);
        else if (key == "tol_verdict" || key == "tol-verdict") tol_verdict = num(value);
        else if (key == "profile") profile = value;
        else if (key == "format") format = value;
        else if (key == "out") out = value;
        else throw config_error("unknown config key: " + key);
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["suite"] = suite;
        j["chart"] = chart;
        j["section"] = section;
        j["samples"] = samples;
        j["seed"] = seed;
        j["fd_step"] = fd_step;
        j["tol_algebraic"] = tol_algebraic;
        j["tol_geometric"] = tol_geometric;
        j["tol_verdict"] = tol_verdict;
        j["profile"] = profile;
        j["format"] = format;
        return j;
    }
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Flat key=value file; '#' starts a comment.
inline void load_config_file(SuiteConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw config_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

// ---------------------------------------------------------------------------
// Section specs: a kind word followed by key=value parameters, separated by
// spaces or commas, e.g. "sinphi C=1 D=0", "const re=0.4", "mu=0.3e1".

struct SectionSpec {
    std::string kind;
    std::map<std::string, double> params;

    double get(const std::string& k, double dflt) const {
        const auto it = params.find(k);
        return it == params.end() ? dflt : it->second;
    }
};

namespace detail {

inline double parse_number(const std::string& v, const std::string& what) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw config_error("bad value in " + what + ": " + v);
    }
}

}  // namespace detail

inline SectionSpec parse_section(const std::string& text) {
    SectionSpec s;
    std::string norm = text;
    for (char& ch : norm)
        if (ch == ',' || ch == ';' || ch == ':') ch = ' ';
    std::istringstream is(norm);
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
            if (!s.kind.empty()) throw config_error("section: unexpected token " + tok);
            s.kind = tok;
            continue;
        }
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "mu") {
            // mu=<lambda>e<k> is lambda times the k-th frame covector.
            if (s.kind.empty()) s.kind = "mu";
            static const std::regex frame_re(R"(^([-+]?(?:[0-9]+\.?[0-9]*|\.[0-9]+))?e([1-9])$)");
            std::smatch m;
            if (std::regex_match(val, m, frame_re)) {
                s.params["lambda"] = m[1].matched ? detail::parse_number(m[1].str(), "mu") : 1.0;
                s.params["k"] = std::stod(m[2].str());
            } else {
                s.params["lambda"] = detail::parse_number(val, "mu");
                s.params["k"] = 1;
            }
            continue;
        }
        s.params[key] = detail::parse_number(val, "section");
    }
    if (s.kind.empty()) throw config_error("section: missing kind in '" + text + "'");
    return s;
}

// Sections of F (G2) or V- (Spin(7)) described by G = a + i b.
inline SectionFamily section_family(const SectionSpec& s) {
    const cplx c(s.get("re", 1.0), s.get("im", 0.0));
    if (s.kind == "zero") return SectionFamily::zero();
    if (s.kind == "const" || s.kind == "constant") return SectionFamily::constant_value(cplx(s.get("re", 0.0), s.get("im", 0.0)));
    if (s.kind == "sinphi") return SectionFamily::sinphi(s.get("C", 0.0), s.get("D", 0.0));
    if (s.kind == "veronese") return SectionFamily::veronese({c}, {s.get("k", 0.0)});
    if (s.kind == "equatorial" || s.kind == "holo") return SectionFamily::equatorial({c}, {s.get("k", 0.0)});
    throw config_error("section kind '" + s.kind + "' is not a G-section");
}

// Coefficient function gamma of eta = gamma f^1.
inline std::function<double(const Vec&)> eta_function(const SectionSpec& s) {
    const double c = s.get("c", 1.0);
    if (s.kind == "eta") return [c](const Vec&) { return c; };
    if (s.kind == "eta-u1") return [c](const Vec& u) { return c * u[0]; };
    if (s.kind == "zero") return [](const Vec&) { return 0.0; };
    throw config_error("section kind '" + s.kind + "' is not an eta-section");
}

inline ConormalTwist twist_from(const SectionSpec& s, const ImmersionChart& c) {
    if (s.kind == "zero") return zero_twist(c.n + 1);
    if (s.kind != "mu") throw config_error("section kind '" + s.kind + "' is not a conormal twist");
    const double lambda = s.get("lambda", 0.0);
    const int k = static_cast<int>(s.get("k", 1));
    if (k < 1 || k > c.q) throw config_error("mu: frame index out of range");
    if (lambda == 0.0) return zero_twist(c.n + 1);
    return frame_twist(c, k, lambda);
}

// ---------------------------------------------------------------------------
// Profiles: "default" (u = v = 1, v' = 1 + r^2, v'' = 2r + 1), "unit"
// (every function 1) or "const u=.. v=.. vp=.. vpp=..".

struct ProfileSpec {
    Profile bs;
    StenzelProfile st;
};

inline ProfileSpec parse_profile(const std::string& text) {
    ProfileSpec p;
    const SectionSpec s = parse_section(text.empty() ? "default" : text);
    if (s.kind == "default") {
        if (!s.params.empty()) throw config_error("profile default takes no parameters");
    } else if (s.kind == "unit") {
        p.st = StenzelProfile::constant(1.0, 1.0);
    } else if (s.kind == "const") {
        for (const auto& [k, v] : s.params)
            if (k != "u" && k != "v" && k != "vp" && k != "vpp") throw config_error("profile: unknown parameter " + k);
        p.bs = Profile::constant(s.get("u", 1.0), s.get("v", 1.0));
        p.st = StenzelProfile::constant(s.get("vp", 1.0), s.get("vpp", 1.0));
    } else {
        throw config_error("unknown profile: " + s.kind);
    }
    p.bs.require_positive();
    p.st.require_positive();
    return p;
}

// ---------------------------------------------------------------------------
// Suite runs

namespace detail {

inline double uniform(std::mt19937_64& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

inline std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline ImmersionChart suite_chart(const SuiteConfig& cfg, const std::string& dflt) {
    ImmersionChart c = chart_by_name(cfg.chart.empty() ? dflt : cfg.chart);
    c.fd_step = cfg.fd_step;
    return c;
}

inline std::string section_or(const SuiteConfig& cfg, const std::string& dflt) {
    return cfg.section.empty() ? dflt : cfg.section;
}

inline void require_surface_in_s4(const ImmersionChart& c, const std::string& suite) {
    if (c.q != 2 || c.n != 4) throw config_error(suite + " needs a surface chart in S^4");
}

inline double fiber_radius(std::initializer_list<double> xs) {
    double r = 0;
    for (double x : xs) r += x * x;
    return std::sqrt(r);
}

inline void run_stenzel(const SuiteConfig& cfg, const ProfileSpec& prof, VerificationReport& r) {
    const ImmersionChart c = suite_chart(cfg, "equatorial");
    const ConormalTwist mu = twist_from(parse_section(section_or(cfg, "mu=0")), c);
    std::mt19937_64 rng(cfg.seed);
    const int m = c.n - c.q;
    for (int s = 0; s < cfg.samples; ++s) {
        const Vec u = sample_point(c, rng);
        Vec t(m);
        do {
            for (int j = 0; j < m; ++j) t[j] = uniform(rng, -1.5, 1.5);
        } while (t.norm() < 0.2);
        const TwistedConormalPoint p = twisted_conormal_fd(c, mu, u, t);
        const LagrangianResidual lr = lagrangian_residual(p, prof.st);
        r.points.push_back({to_std(u), to_std(t), {{"omega_all", lr.all}, {"omega_mixed", lr.mixed}}, {{"mu", p.a.norm()}}});
    }
}

inline void run_g2_associative(const SuiteConfig& cfg, const ProfileSpec& prof, VerificationReport& r) {
    const ImmersionChart c = suite_chart(cfg, "veronese");
    require_surface_in_s4(c, cfg.suite);
    const SectionFamily sec = section_family(parse_section(section_or(cfg, "sinphi C=1 D=0")));
    std::mt19937_64 rng(cfg.seed);
    for (int s = 0; s < cfg.samples; ++s) {
        const Vec u = sample_point(c, rng);
        const double t1 = uniform(rng, -2, 2);
        const AdaptedFramePoint p = adapted_frame(c, u);
        const SectionJet jet = section_jet(sec, p);
        const double rad = fiber_radius({t1, jet.G.real(), jet.G.imag()});
        const Multivector psi = g2_psi(prof.bs.u(rad), prof.bs.v(rad));
        const auto E = g2_tangent_E_sigma(p, jet, t1);
        const Classification cl = classify(p.A, cfg.tol_geometric);
        r.points.push_back({to_std(u),
                            {t1},
                            {{"associative", associative_residual(psi, E[0], E[1], E[2])}},
                            {{"minimal", cl.trace}, {"holomorphic", std::abs(pde_residual(jet, p.gamma))}}});
    }
}

inline void run_g2_coassociative(const SuiteConfig& cfg, const ProfileSpec& prof, VerificationReport& r) {
    const ImmersionChart c = suite_chart(cfg, "equatorial");
    require_surface_in_s4(c, cfg.suite);
    const auto eta = eta_function(parse_section(section_or(cfg, "eta c=1")));
    std::mt19937_64 rng(cfg.seed);
    for (int s = 0; s < cfg.samples; ++s) {
        const Vec u = sample_point(c, rng);
        const double t2 = uniform(rng, -2, 2), t3 = uniform(rng, -2, 2);
        const AdaptedFramePoint p = adapted_frame(c, u);
        const ScalarJet ej = scalar_jet(eta, p);
        const double rad = fiber_radius({ej.value, t2, t3});
        const Multivector phi = g2_phi(prof.bs.u(rad), prof.bs.v(rad));
        const auto E = g2_tangent_eta_F(p, ej, t2, t3);
        const Classification cl = classify(p.A, cfg.tol_geometric);
        r.points.push_back({to_std(u),
                            {t2, t3},
                            {{"coassociative", coassociative_residual(phi, E[0], E[1], E[2], E[3])}},
                            {{"negative_superminimal", cl.superminimal_neg}, {"parallel", parallel_E_residual(ej)}}});
    }
}

inline void run_cayley(const SuiteConfig& cfg, const ProfileSpec& prof, VerificationReport& r) {
    const ImmersionChart c = suite_chart(cfg, "veronese");
    require_surface_in_s4(c, cfg.suite);
    const SectionFamily sec = section_family(parse_section(section_or(cfg, "zero")));
    const SpinorFrame sf = spinor_frames();
    std::mt19937_64 rng(cfg.seed);
    for (int s = 0; s < cfg.samples; ++s) {
        const Vec u = sample_point(c, rng);
        const double t1 = uniform(rng, -2, 2), t2 = uniform(rng, -2, 2);
        const AdaptedFramePoint p = adapted_frame(c, u);
        const SectionJet jet = section_jet(sec, p);
        const double rad = fiber_radius({t1, t2, jet.G.real(), jet.G.imag()});
        const Multivector Phi = cayley_form(prof.bs.u(rad), prof.bs.v(rad));
        const auto E = cayley_tangent(sf, p, jet, t1, t2);
        const Classification cl = classify(p.A, cfg.tol_geometric);
        r.points.push_back({to_std(u),
                            {t1, t2},
                            {{"eta", cayley_residual(Phi, E)}, {"phi_volume", cayley_volume_defect(Phi, E)}},
                            {{"minimal", cl.trace}, {"holomorphic", dbar_Vminus_residual(sf, p, jet).norm()}}});
    }
}

inline void run_pde(const SuiteConfig& cfg, VerificationReport& r) {
    const ImmersionChart c = suite_chart(cfg, "veronese");
    require_surface_in_s4(c, cfg.suite);
    const SectionFamily sec = section_family(parse_section(section_or(cfg, "sinphi C=1 D=0")));
    std::mt19937_64 rng(cfg.seed);
    for (int s = 0; s < cfg.samples; ++s) {
        const Vec u = sample_point(c, rng);
        r.points.push_back({to_std(u), {}, {{"pde", std::abs(pde_residual(sec, c, u))}}, {}});
    }
}

inline void run_frame_change(const SuiteConfig& cfg, VerificationReport& r) {
    const SectionSpec spec = parse_section(section_or(cfg, "sinphi C=1 D=0"));
    if (spec.kind != "sinphi") throw config_error("frame-change needs a sinphi section");
    if (!cfg.chart.empty() && cfg.chart != "veronese") throw config_error("frame-change runs on the veronese chart");
    const double C = spec.get("C", 0.0), D = spec.get("D", 0.0);
    const ImmersionChart c = veronese_chart();
    std::mt19937_64 rng(cfg.seed);
    for (int s = 0; s < cfg.samples; ++s) {
        Vec u;
        do u = sample_point(c, rng);
        while (!in_overlap(u));
        const FrameChangeReport f = frame_change_check(u, C, D);
        r.points.push_back({to_std(u),
                            {},
                            {{"point", f.point},
                             {"sin_phi", f.sin_phi},
                             {"tangent", f.tangent},
                             {"normal", f.normal},
                             {"two_forms", f.two_forms},
                             {"hat_pde", f.hat_pde}},
                            {}});
    }
}

inline void run_octonion(const SuiteConfig& cfg, VerificationReport& r) {
    std::mt19937_64 rng(cfg.seed);
    const auto sd = sd_frame();
    for (int s = 0; s < cfg.samples; ++s) {
        const PinorContext ctx = random_pinor_context(rng);
        const Octonion x = random_octonion(rng);
        Eigen::Vector4d a, b;
        for (int k = 0; k < 4; ++k) {
            a[k] = std::normal_distribution<double>()(rng);
            b[k] = std::normal_distribution<double>()(rng);
        }
        const double scale = 1.0 + x.norm() * (1.0 + a.norm() * b.norm());
        const Octonion clif = gamma(ctx, a, gamma(ctx, b, x)) + gamma(ctx, b, gamma(ctx, a, x)) + x * (2.0 * a.dot(b));
        const auto [xp, xm] = pinor_split(x, ctx);
        const Octonion split = gamma_volume(ctx, xm) + xm;
        auto g = [&ctx](const Multivector& f, const Octonion& y) { return gamma_form(ctx, f, y); };
        double sq = 0, prod = 0;
        for (int i = 0; i < 3; ++i) {
            sq = std::max(sq, (g(sd[i], g(sd[i], xm)) + xm * 16.0).norm());
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            prod = std::max(prod, (g(sd[i], g(sd[j], xm)) - g(sd[k], xm) * 4.0).norm());
        }
        r.points.push_back({{},
                            {x.c.begin(), x.c.end()},
                            {{"clifford", clif.norm() / scale},
                             {"volume_split", split.norm() / scale},
                             {"f_square", sq / (16 * scale)},
                             {"f_product", prod / (16 * scale)}},
                            {}});
    }
}

inline void run_classify(const SuiteConfig& cfg, VerificationReport& r) {
    const ImmersionChart c = suite_chart(cfg, "veronese");
    std::mt19937_64 rng(cfg.seed);
    for (int s = 0; s < cfg.samples; ++s) {
        const Vec u = sample_point(c, rng);
        const AdaptedFramePoint p = adapted_frame(c, u);
        const Classification cl = classify(p.A, cfg.tol_geometric);
        NamedValues crit{{"minimal", cl.trace}, {"austere", cl.austere}};
        if (c.q == 2 && c.n == 4) {
            crit.emplace_back("superminimal_positive", cl.superminimal_pos);
            crit.emplace_back("superminimal_negative", cl.superminimal_neg);
        }
        r.points.push_back({to_std(u),
                            {},
                            {{"frame", frame_defect(p)},
                             {"connection_antisymmetry", connection_antisymmetry(p.gamma)},
                             {"symmetry", symmetry_defect(p.A)}},
                            crit});
    }
}

}  // namespace detail

inline VerdictPolicy suite_policy(const SuiteConfig& cfg) {
    VerdictPolicy pol;
    const bool algebraic = cfg.suite == "octonion";
    pol.tol = algebraic ? cfg.tol_algebraic : cfg.tol_verdict;
    pol.separation = 10.0 * pol.tol;
    pol.biconditional = cfg.suite == "stenzel-lagrangian" || cfg.suite == "g2-associative" ||
                        cfg.suite == "g2-coassociative" || cfg.suite == "cayley";
    return pol;
}

// Runs a named suite. Throws config_error for unknown names or bad parameters;
// all other failures surface in the verdict.
inline VerificationReport run_suite(const SuiteConfig& cfg, bool stamp = true) {
    cfg.validate();
    const ProfileSpec prof = parse_profile(cfg.profile);
    VerificationReport r;
    r.suite = cfg.suite;
    r.config = cfg.to_json();
    if (cfg.suite == "stenzel-lagrangian") detail::run_stenzel(cfg, prof, r);
    else if (cfg.suite == "g2-associative") detail::run_g2_associative(cfg, prof, r);
    else if (cfg.suite == "g2-coassociative") detail::run_g2_coassociative(cfg, prof, r);
    else if (cfg.suite == "cayley") detail::run_cayley(cfg, prof, r);
    else if (cfg.suite == "pde") detail::run_pde(cfg, r);
    else if (cfg.suite == "frame-change") detail::run_frame_change(cfg, r);
    else if (cfg.suite == "octonion") detail::run_octonion(cfg, r);
    else if (cfg.suite == "classify") detail::run_classify(cfg, r);
    else throw config_error("unknown suite: " + cfg.suite);
    compute_aggregates(r);
    apply_verdict(r, suite_policy(cfg));
    if (stamp) r.timestamp = utc_timestamp();
    return r;
}

// Golden-table comparison at sampled points of the table's chart.
inline VerificationReport run_table(const std::string& name, const SuiteConfig& cfg, bool stamp = true) {
    cfg.validate();
    const auto tables = load_golden_tables();
    const GoldenTable& t = find_golden_table(tables, name);
    ImmersionChart c = chart_by_name(t.chart);
    c.fd_step = cfg.fd_step;
    VerificationReport r;
    r.suite = "table:" + name;
    r.config = cfg.to_json();
    r.config["table"] = name;
    r.config["chart"] = t.chart;
    std::mt19937_64 rng(cfg.seed);
    for (int s = 0; s < cfg.samples; ++s) {
        const Vec u = sample_point(c, rng);
        r.points.push_back({detail::to_std(u), {}, {{"deviation", golden_deviation(t, adapted_frame(c, u))}}, {}});
    }
    compute_aggregates(r);
    VerdictPolicy pol;
    pol.tol = t.tolerance;
    pol.separation = 10.0 * t.tolerance;
    pol.biconditional = false;
    apply_verdict(r, pol);
    if (stamp) r.timestamp = utc_timestamp();
    return r;
}

}  // namespace calib
