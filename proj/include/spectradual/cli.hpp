#pragma once

/**
 * @file cli.hpp
 * @brief The `spectradual` command line: eig, duals, oracle, hypercp,
 * bodydist and selftest, each printing one JSON report.
 *
 * Exit codes: 0 ok, 1 internal error, 2 parse or input error,
 * 3 unverified result or failed check, 4 oracle size limit.
 */

#include "convbody.hpp"
#include "eigsolve.hpp"
#include "errors.hpp"
#include "graphlap.hpp"
#include "homfun.hpp"
#include "hypercp.hpp"
#include "io.hpp"
#include "selftest.hpp"
#include "subdiff.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace spectradual::cli {

using io::json;

enum Exit : int { ok = 0, internal = 1, parse = 2, unverified = 3, size_limit = 4 };

struct Options {
    std::string command;
    std::string which;  // oracle name
    std::string graph, hypergraph;
    std::vector<std::string> bodies;
    std::string a = "1", b = "1";
    double p = 2.0, q = 2.0;
    int k = 2;
    std::string target = "max";
    std::uint64_t seed = 42;
    double tol = 1e-14;
    int max_iters = 500;
    std::string json_out;
    std::vector<int> suites;
};

/// "inf", "infinity" or a number ≥ 1.
inline double parse_norm(const std::string& s, const char* what) {
    std::string t;
    for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "inf" || t == "infinity" || t == "+inf") return kInf;
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string(what) + ": not a norm index: \"" + s + "\"");
    }
}

namespace detail {

class Report {
public:
    explicit Report(std::string command) {
        j_["command"] = std::move(command);
        j_["inputs"] = json::object();
        j_["results"] = json::object();
        j_["checks"] = json::array();
    }
    json& inputs() { return j_["inputs"]; }
    json& results() { return j_["results"]; }

    // |lhs − rhs| ≤ tol·max(1, |rhs|); both infinite and equal also passes.
    bool check(const std::string& name, double lhs, double rhs, double tol) {
        bool passed = lhs == rhs || std::abs(lhs - rhs) <= tol * std::max(1.0, std::abs(rhs));
        add(name, passed, lhs, rhs, tol);
        return passed;
    }
    void add(const std::string& name, bool passed, double lhs, double rhs, double tol) {
        json c;
        c["name"] = name;
        c["passed"] = passed;
        c["lhs"] = io::number(lhs);
        c["rhs"] = io::number(rhs);
        c["tol"] = io::number(tol);
        j_["checks"].push_back(c);
        all_ = all_ && passed;
    }
    bool all_passed() const { return all_; }
    json finish(double ms) {
        j_["timing_ms"] = io::number(std::round(ms * 1000.0) / 1000.0);
        return j_;
    }

private:
    json j_;
    bool all_ = true;
};

inline SolveConfig config(const Options& o) {
    SolveConfig c;
    c.seed = o.seed;
    c.tol = o.tol;
    c.max_iters = o.max_iters;
    c.validate();
    return c;
}

inline json config_json(const SolveConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["tol"] = io::number(c.tol);
    j["max_iters"] = c.max_iters;
    j["restarts"] = c.restarts;
    return j;
}

inline std::string norm_name(double a) { return std::isinf(a) ? "inf" : io::number(a).dump(); }

inline Graph load_graph(const Options& o) {
    if (o.graph.empty()) throw ParseError("--graph is required");
    return io::read_graph(o.graph);
}

inline json sets_json(const std::vector<std::vector<long>>& sets) {
    json a = json::array();
    for (const auto& s : sets) a.push_back(io::nodes_1based(s));
    return a;
}

inline json mask_json(std::uint64_t m, long n) { return io::nodes_1based(mask_nodes(m, n)); }

// Exhaustive starts where the suites use them: sign patterns for maxima, indicators for minima.
inline void add_starts(SolveConfig& cfg, const HomFun& f, const HomFun& g, bool maximize) {
    if (!f.polyhedral() || !g.polyhedral() || f.dim() > 8) return;
    cfg.starts = maximize ? selftest::detail::sign_vectors(f.dim()) : selftest::detail::indicator_vectors(f.dim());
}

inline double cut_ratio(const Graph& G, const std::vector<long>& set) {
    std::uint64_t m = 0;
    for (long v : set) m |= std::uint64_t{1} << v;
    return cut_value(G, m) / static_cast<double>(set.size());
}

}  // namespace detail

inline int cmd_eig(const Options& o, json& out) {
    detail::Report R("eig");
    Graph G = detail::load_graph(o);
    const double a = parse_norm(o.a, "--a"), b = parse_norm(o.b, "--b");
    if (o.target != "max" && o.target != "min-nonzero") throw ParseError("--target must be max or min-nonzero");
    const bool maximize = o.target == "max";
    SolveConfig cfg = detail::config(o);
    R.inputs()["graph"] = io::to_json(G);
    R.inputs()["a"] = detail::norm_name(a);
    R.inputs()["b"] = detail::norm_name(b);
    R.inputs()["target"] = o.target;
    R.inputs()["config"] = detail::config_json(cfg);

    auto P = laplacian_pair(G, a, b);
    detail::add_starts(cfg, P.f, P.g, maximize);
    SpectrumEstimate est = maximize ? power_max(P.f, P.g, cfg) : ratiodca_min(P.f, P.g, cfg);
    R.results()["estimate"] = io::to_json(est);
    R.add("certificate", est.verified, est.certificate ? est.certificate->residual : kInf, 0.0, 1e-7);

    // Combinatorial identities where an exact oracle applies.
    try {
        if (a == 1.0 && b == 1.0 && !maximize && connected(G)) {
            R.check("h2 match", est.lambda, cheeger(G, 2).value, 1e-9);
        } else if (a == 1.0 && std::isinf(b)) {
            const double c = selftest::maxcut_calibration();
            R.results()["indicator_factor"] = io::number(c);
            if (maximize) R.check("maxcut match", est.lambda, c * maxcut(G).value, 1e-9);
            else R.check("mincut match", est.lambda, c * mincut(G).value, 1e-9);
        } else if (std::isinf(a) && std::isinf(b) && !maximize && connected(G)) {
            R.check("2/diam", est.lambda, 2.0 / static_cast<double>(diameter(G)), 1e-9);
        }
    } catch (const SizeLimitError& e) {
        R.results()["oracle_skipped"] = e.what();
    }
    bool good = est.verified && R.all_passed();
    out = R.finish(0.0);
    return good ? Exit::ok : Exit::unverified;
}

inline int cmd_duals(const Options& o, json& out) {
    detail::Report R("duals");
    Graph G = detail::load_graph(o);
    const double a = parse_norm(o.a, "--a"), b = parse_norm(o.b, "--b");
    SolveConfig cfg = detail::config(o);
    cfg.certify = false;
    R.inputs()["graph"] = io::to_json(G);
    R.inputs()["a"] = detail::norm_name(a);
    R.inputs()["b"] = detail::norm_name(b);
    R.inputs()["config"] = detail::config_json(cfg);

    auto P = laplacian_pair(G, a, b);
    std::vector<FormPair> forms = {{"(f o K, g)", P.f, P.g}};
    for (auto& fp : dual_forms(P)) forms.push_back(fp);
    json arr = json::array();
    std::vector<double> lam;
    for (const auto& fp : forms) {
        SolveConfig c = cfg;
        detail::add_starts(c, fp.f, fp.g, true);
        double l = power_max(fp.f, fp.g, c).lambda;
        lam.push_back(l);
        json e;
        e["form"] = fp.name;
        e["dim"] = fp.f.dim();
        e["lambda_max"] = io::number(l);
        arr.push_back(e);
    }
    R.results()["forms"] = arr;
    const long df = P.f.kernel_basis().cols(), dg = P.g.kernel_basis().cols();
    const long dfg = linalg::intersect(P.f.kernel_basis(), P.g.kernel_basis(), G.n()).cols();
    R.results()["kernel_dims"] = json{{"d_f", df}, {"d_g", dg}, {"d_fg", dfg}};
    for (std::size_t i = 1; i < forms.size(); ++i) R.check("agreement " + forms[i].name, lam[i], lam[0], 1e-6);
    out = R.finish(0.0);
    return R.all_passed() ? Exit::ok : Exit::unverified;
}

inline int cmd_oracle(const Options& o, json& out) {
    detail::Report R("oracle");
    Graph G = detail::load_graph(o);
    R.inputs()["graph"] = io::to_json(G);
    R.inputs()["which"] = o.which;
    const std::string& w = o.which;
    if (w == "cheeger" || w == "balls" || w == "multiway") R.inputs()["k"] = o.k;
    json& res = R.results();
    if (w == "cheeger") {
        auto c = cheeger(G, o.k);
        res["value"] = io::number(c.value);
        res["sets"] = detail::sets_json(c.sets);
        double worst = 0.0;
        for (const auto& s : c.sets) worst = std::max(worst, detail::cut_ratio(G, s));
        if (!c.sets.empty()) R.check("witness attains h_k", worst, c.value, 1e-12);
        if (o.k == 2 && connected(G)) {
            auto P = laplacian_pair(G, 1.0, 1.0);
            SolveConfig cfg = detail::config(o);
            detail::add_starts(cfg, P.f, P.g, false);
            auto est = ratiodca_min(P.f, P.g, cfg);
            R.add("lambda2 certified", est.verified, est.certificate ? est.certificate->residual : kInf, 0.0, 1e-7);
            R.check("lambda2 = h2", est.lambda, c.value, 1e-9);
        }
    } else if (w == "mincut" || w == "maxcut") {
        const bool mx = w == "maxcut";
        auto c = mx ? maxcut(G) : mincut(G);
        res["value"] = io::number(c.value);
        res["set"] = detail::mask_json(c.set, G.n());
        R.check("witness cut value", cut_value(G, c.set), c.value, 1e-12);
        auto P = laplacian_pair(G, 1.0, kInf);
        SolveConfig cfg = detail::config(o);
        detail::add_starts(cfg, P.f, P.g, mx);
        auto est = mx ? power_max(P.f, P.g, cfg) : ratiodca_min(P.f, P.g, cfg);
        const double f = selftest::maxcut_calibration();
        res["indicator_factor"] = io::number(f);
        R.check(mx ? "(1,inf) lambda_max = c maxcut" : "(1,inf) lambda_min = c mincut", est.lambda, f * c.value, 1e-9);
    } else if (w == "diam") {
        long d = diameter(G);
        res["value"] = d == kUnreachable ? json("inf") : json(d);
        if (connected(G)) {
            auto cand = infty_eigvec_candidate(G);
            auto P = laplacian_pair(G, kInf, kInf);
            res["candidate"] = io::vec(cand.x);
            R.add("(2/diam, x) certifies", verify_eigenpair(P.f, P.g, cand.lambda, cand.x).feasible, cand.lambda,
                  2.0 / static_cast<double>(d), 0.0);
        }
    } else if (w == "balls") {
        auto bb = inscribed_ball_bound(G, o.k);
        res["value"] = io::number(bb.value);
        json balls = json::array();
        double worst = 0.0;
        for (const auto& ball : bb.balls) {
            balls.push_back(json{{"center", ball.center + 1}, {"radius", ball.radius}, {"size", io::number(ball.size)}});
            worst = std::max(worst, 1.0 / ball_size(G, ball.center, ball.radius));
        }
        res["balls"] = balls;
        if (!bb.balls.empty()) R.check("witness attains bound", worst, bb.value, 1e-12);
    } else if (w == "multiway") {
        auto mw = multiway_maxcut_bound(G, o.k);
        res["value"] = io::number(mw.value);
        res["blocks"] = detail::sets_json(mw.blocks);
        std::vector<int> label(static_cast<std::size_t>(G.n()), -1);
        for (std::size_t i = 0; i < mw.blocks.size(); ++i)
            for (long v : mw.blocks[i]) label[static_cast<std::size_t>(v)] = static_cast<int>(i);
        if (!mw.blocks.empty())
            R.check("witness attains bound", quotient_maxcut(G, label, static_cast<int>(mw.blocks.size())), mw.value, 1e-12);
    } else {
        throw ParseError("oracle: unknown oracle \"" + w + "\" (cheeger, mincut, maxcut, diam, balls, multiway)");
    }
    out = R.finish(0.0);
    return R.all_passed() ? Exit::ok : Exit::unverified;
}

inline int cmd_hypercp(const Options& o, json& out) {
    detail::Report R("hypercp");
    if (o.hypergraph.empty()) throw ParseError("--hypergraph is required");
    Hypergraph H = io::read_hypergraph(o.hypergraph);
    SolveConfig cfg = detail::config(o);
    R.inputs()["n"] = H.n();
    R.inputs()["edges"] = static_cast<long>(H.edges().size());
    R.inputs()["p"] = io::number(o.p);
    R.inputs()["q"] = io::number(o.q);
    R.inputs()["config"] = detail::config_json(cfg);
    auto cs = cp_scores_with_duals(H, o.p, o.q, cfg);
    R.results()["lambda"] = io::number(cs.primal.lambda);
    R.results()["scores"] = io::vec(cs.primal.x);
    R.results()["verified"] = cs.primal.verified;
    R.results()["contracted_lambda"] = io::number(cs.contracted.lambda);
    R.results()["lifted_lambda"] = io::number(cs.lifted.lambda);
    R.check("contracted dual agrees", cs.contracted.lambda, cs.primal.lambda, 1e-6);
    R.check("lifted dual agrees", cs.lifted.lambda, cs.primal.lambda, 1e-6);
    out = R.finish(0.0);
    return R.all_passed() ? Exit::ok : Exit::unverified;
}

inline int cmd_bodydist(const Options& o, json& out) {
    detail::Report R("bodydist");
    if (o.bodies.size() != 2) throw ParseError("bodydist: pass --body twice");
    SymPolytope K = io::read_polytope(o.bodies[0]), L = io::read_polytope(o.bodies[1]);
    R.inputs()["K"] = io::to_json(K);
    R.inputs()["L"] = io::to_json(L);
    auto ex = st_extremes(K, L);
    double d = hat_distance(K, L);
    double dp = hat_distance(polar(K), polar(L));
    R.results()["lambda_min"] = io::number(ex.lambda_min);
    R.results()["lambda_max"] = io::number(ex.lambda_max);
    R.results()["hat_distance"] = io::number(d);
    R.results()["hat_distance_polars"] = io::number(dp);
    R.check("polar identity", dp, d, 1e-8);
    R.check("reciprocity lambda_min(K,L) lambda_max(L,K)", ex.lambda_min * lambda_max(L, K), 1.0, 1e-12);
    out = R.finish(0.0);
    return R.all_passed() ? Exit::ok : Exit::unverified;
}

inline int cmd_selftest(const Options& o, json& out) {
    detail::Report R("selftest");
    R.inputs()["seed"] = o.seed;
    auto all = selftest::all_suites();
    std::vector<int> ids = o.suites;
    if (ids.empty())
        for (int i = 1; i <= static_cast<int>(all.size()); ++i) ids.push_back(i);
    json sel = json::array();
    for (int id : ids) sel.push_back(id);
    R.inputs()["suites"] = sel;
    std::vector<selftest::SuiteResult> results;
    json arr = json::array();
    for (int id : ids) {
        if (id < 1 || id > static_cast<int>(all.size())) throw ParseError("selftest: no suite " + std::to_string(id));
        auto r = all[static_cast<std::size_t>(id - 1)](o.seed);
        json s;
        s["id"] = r.id;
        s["name"] = r.name;
        s["passed"] = r.passed();
        s["cases"] = r.cases;
        s["failures"] = r.failures;
        s["note"] = r.note;
        json cs = json::array();
        for (const auto& c : r.checks)
            cs.push_back(json{{"name", c.name}, {"passed", c.passed}, {"lhs", io::number(c.lhs)}, {"rhs", io::number(c.rhs)}, {"tol", io::number(c.tol)}});
        s["checks"] = cs;
        arr.push_back(s);
        R.add("suite " + std::to_string(r.id) + " " + r.name, r.passed(), static_cast<double>(r.failures), 0.0, 0.0);
        results.push_back(std::move(r));
    }
    R.results()["suites"] = arr;
    R.results()["digest"] = selftest::digest(results);
    out = R.finish(0.0);
    return R.all_passed() ? Exit::ok : Exit::unverified;
}

inline json error_json(const std::string& msg, int code) { return json{{"error", msg}, {"exit_code", code}}; }

/// Parses argv, runs one command, writes the report; returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Options o;
    CLI::App app{"Nonlinear spectral duality toolkit"};
    app.require_subcommand(1);
    auto common = [&](CLI::App* s) {
        s->add_option("--seed", o.seed, "random seed");
        s->add_option("--tol", o.tol, "relative ratio tolerance");
        s->add_option("--max-iters", o.max_iters, "iteration cap per run");
        s->add_option("--json-out", o.json_out, "write the report to PATH instead of stdout");
    };
    auto graph_flags = [&](CLI::App* s) {
        s->add_option("--graph", o.graph, "graph file (JSON or TSV edge list)")->required();
        s->add_option("--a", o.a, "edge norm index (1..inf)");
        s->add_option("--b", o.b, "node norm index (1..inf)");
    };
    auto* eig = app.add_subcommand("eig", "extremal eigenvalue of a graph Laplacian pair");
    graph_flags(eig);
    eig->add_option("--target", o.target, "max or min-nonzero");
    common(eig);
    auto* duals = app.add_subcommand("duals", "lambda_max on the primal pair and its four dual forms");
    graph_flags(duals);
    common(duals);
    auto* oracle = app.add_subcommand("oracle", "exact combinatorial quantities");
    oracle->add_option("which", o.which, "cheeger, mincut, maxcut, diam, balls or multiway")->required();
    oracle->add_option("--graph", o.graph, "graph file")->required();
    oracle->add_option("--k", o.k, "number of sets, balls or blocks");
    common(oracle);
    auto* hyper = app.add_subcommand("hypercp", "hypergraph core-periphery scores");
    hyper->add_option("--hypergraph", o.hypergraph, "hypergraph JSON")->required();
    hyper->add_option("--p", o.p, "constraint norm index (> 1)");
    hyper->add_option("--q", o.q, "per-edge norm index (≥ 1)");
    common(hyper);
    auto* body = app.add_subcommand("bodydist", "hat distance of two symmetric polytopes");
    body->add_option("--body", o.bodies, "polytope JSON (twice: K then L)")->required()->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    common(body);
    auto* self = app.add_subcommand("selftest", "property suites");
    self->add_option("--suite", o.suites, "suite ids to run (default all)");
    common(self);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return Exit::ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return Exit::ok;
    } catch (const CLI::ParseError& e) {
        err << error_json(e.what(), Exit::parse).dump() << '\n';
        return Exit::parse;
    }

    int code = Exit::internal;
    json report;
    auto t0 = std::chrono::steady_clock::now();
    try {
        if (*eig) code = cmd_eig(o, report);
        else if (*duals) code = cmd_duals(o, report);
        else if (*oracle) code = cmd_oracle(o, report);
        else if (*hyper) code = cmd_hypercp(o, report);
        else if (*body) code = cmd_bodydist(o, report);
        else code = cmd_selftest(o, report);
    } catch (const SizeLimitError& e) {
        err << error_json(e.what(), Exit::size_limit).dump() << '\n';
        return Exit::size_limit;
    } catch (const ParseError& e) {
        err << error_json(e.what(), Exit::parse).dump() << '\n';
        return Exit::parse;
    } catch (const DomainError& e) {
        err << error_json(e.what(), Exit::parse).dump() << '\n';
        return Exit::parse;
    } catch (const DimensionError& e) {
        err << error_json(e.what(), Exit::parse).dump() << '\n';
        return Exit::parse;
    } catch (const std::exception& e) {
        err << error_json(e.what(), Exit::internal).dump() << '\n';
        return Exit::internal;
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    report["timing_ms"] = io::number(std::round(ms * 1000.0) / 1000.0);
    std::string text = report.dump(2) + "\n";
    if (o.json_out.empty()) {
        out << text;
    } else {
        std::ofstream f(o.json_out);
        if (!f) {
            err << error_json("cannot write " + o.json_out, Exit::parse).dump() << '\n';
            return Exit::parse;
        }
        f << text;
    }
    return code;
}

}  // namespace spectradual::cli
