#pragma once

/**
 * @file io.hpp
 * @brief JSON and TSV readers/writers: HomFun expression trees, graphs,
 * hypergraphs, polytopes, certificates and solver estimates.
 */

#include "convbody.hpp"
#include "eigsolve.hpp"
#include "errors.hpp"
#include "graphlap.hpp"
#include "homfun.hpp"
#include "hypercp.hpp"
#include "subdiff.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace spectradual::io {

using json = nlohmann::ordered_json;

// ------------------------------------------------------------- numbers

/// Finite doubles as numbers; ±∞ and NaN as strings.
inline json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline double read_number(const json& j, const char* what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf" || s == "Infinity" || s == "∞") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw ParseError(std::string(what) + ": expected a number");
}

inline json vec(const Vec& v) {
    json a = json::array();
    for (long i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
    return a;
}

inline Vec read_vec(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array");
    Vec v(static_cast<long>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<long>(i)) = read_number(j[i], what);
    return v;
}

/// Row-major nested arrays.
inline json mat(const Mat& M) {
    json a = json::array();
    for (long i = 0; i < M.rows(); ++i) a.push_back(vec(M.row(i).transpose()));
    return a;
}

inline Mat read_mat(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw ParseError(std::string(what) + ": expected a nonempty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Mat M(static_cast<long>(j.size()), static_cast<long>(cols));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw ParseError(std::string(what) + ": ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) M(static_cast<long>(i), static_cast<long>(c)) = read_number(j[i][c], what);
    }
    return M;
}

inline json linear_map(const LinearMap& A) { return mat(A.dense()); }

/// Nested arrays, or {"select": [...], "cols": n} for a coordinate selection.
inline LinearMap read_linear_map(const json& j) {
    if (j.is_object() && j.contains("select")) {
        std::vector<long> idx;
        for (const auto& v : j.at("select")) idx.push_back(v.get<long>());
        return LinearMap::select(idx, j.at("cols").get<long>());
    }
    return LinearMap(read_mat(j, "LinearMap"));
}

// ------------------------------------------------------------- HomFun

inline json to_json(const HomFun& f) {
    const Node& n = f.node();
    json j;
    j["op"] = n.tag;
    json args = json::array();
    json params = json::object();
    switch (n.op) {
        case Op::weighted_lp:
            if (n.tag == "linfty_max") params["n"] = n.dim;
            else {
                params["weights"] = vec(n.weights);
                params["p"] = number(n.p);
            }
            break;
        case Op::max_abs:
        case Op::hull_gauge: params["points"] = mat(n.points); break;
        case Op::composite:
        case Op::composite_dual: {
            for (const auto& a : n.args) args.push_back(to_json(a));
            json maps = json::array();
            for (const auto& m : n.maps) maps.push_back(linear_map(m));
            params["maps"] = maps;
            break;
        }
        case Op::pullback:
            args.push_back(to_json(n.args[0]));
            params["map"] = linear_map(n.maps[0]);
            break;
        case Op::pushforward:
            args.push_back(to_json(n.args[0]));
            params["map"] = linear_map(n.maps[0]);
            params["direct"] = n.direct;
            break;
        case Op::dual:
            args.push_back(to_json(n.args[0]));
            params["numeric"] = n.numeric;
            break;
        case Op::legendre:
        case Op::polarity: args.push_back(to_json(n.args[0])); break;
        case Op::power:
            args.push_back(to_json(n.args[0]));
            params["r"] = number(n.r);
            break;
        case Op::scale:
            args.push_back(to_json(n.args[0]));
            params["c"] = number(n.r);
            break;
    }
    j["args"] = args;
    j["params"] = params;
    return j;
}

inline HomFun homfun_from_json(const json& j) {
    if (!j.is_object() || !j.contains("op")) throw ParseError("HomFun: expected an object with \"op\"");
    const std::string op = j.at("op").get<std::string>();
    const json params = j.value("params", json::object());
    std::vector<HomFun> args;
    if (j.contains("args"))
        for (const auto& a : j.at("args")) args.push_back(homfun_from_json(a));
    auto need = [&](std::size_t k) {
        if (args.size() != k) throw ParseError("HomFun " + op + ": expected " + std::to_string(k) + " argument(s)");
    };
    auto param = [&](const char* key) -> const json& {
        if (!params.contains(key)) throw ParseError("HomFun " + op + ": missing parameter \"" + key + "\"");
        return params.at(key);
    };
    if (op == "weighted_lp") return weighted_lp(read_vec(param("weights"), "weights"), read_number(param("p"), "p"));
    if (op == "lp_norm") return lp_norm(param("n").get<long>(), read_number(param("p"), "p"));
    if (op == "linfty_max") return linfty_max(param("n").get<long>());
    if (op == "support_function") return support_function(read_mat(param("points"), "points"));
    if (op == "polytope_gauge") return polytope_gauge(read_mat(param("points"), "points"));
    if (op == "hull_gauge") return hull_gauge(read_mat(param("points"), "points"));
    if (op == "composite_norm" || op == "composite_dual") {
        if (args.size() < 2) throw ParseError("HomFun " + op + ": needs an outer and at least one inner function");
        std::vector<LinearMap> maps;
        for (const auto& m : param("maps")) maps.push_back(read_linear_map(m));
        std::vector<HomFun> inner(args.begin() + 1, args.end());
        return op == "composite_norm" ? composite_norm(args[0], inner, maps) : composite_dual(args[0], inner, maps);
    }
    if (op == "pullback") {
        need(1);
        return pullback(args[0], read_linear_map(param("map")));
    }
    if (op == "pushforward") {
        need(1);
        LinearMap A = read_linear_map(param("map"));
        return params.value("direct", false) ? pushforward_direct(args[0], A) : pushforward(args[0], A);
    }
    if (op == "dual") {
        need(1);
        return params.value("numeric", false) ? dual_numeric(args[0]) : dual(args[0]);
    }
    if (op == "legendre") {
        need(1);
        return legendre(args[0]);
    }
    if (op == "polarity") {
        need(1);
        return polarity(args[0]);
    }
    if (op == "power") {
        need(1);
        return power(args[0], read_number(param("r"), "r"));
    }
    if (op == "scale") {
        need(1);
        return scale(args[0], read_number(param("c"), "c"));
    }
    throw ParseError("HomFun: unknown op \"" + op + "\"");
}

// --------------------------------------------------------- certificates

inline json to_json(const EigenCertificate& c) {
    json j;
    j["lambda"] = number(c.lambda);
    j["x"] = vec(c.x);
    j["feasible"] = c.feasible;
    j["witness"] = vec(c.witness);
    j["residual"] = number(c.residual);
    j["exact"] = c.exact;
    return j;
}

inline json to_json(const SpectrumEstimate& e) {
    json j;
    j["lambda"] = number(e.lambda);
    j["x"] = vec(e.x);
    j["verified"] = e.verified;
    j["runs"] = e.runs;
    json h = json::array();
    for (double v : e.history) h.push_back(number(v));
    j["history"] = h;
    j["certificate"] = e.certificate ? to_json(*e.certificate) : json(nullptr);
    return j;
}

inline SolveConfig solve_config_from_json(const json& j) {
    SolveConfig c;
    c.max_iters = j.value("max_iters", c.max_iters);
    if (j.contains("tol")) c.tol = read_number(j.at("tol"), "tol");
    c.seed = j.value("seed", c.seed);
    c.restarts = j.value("restarts", c.restarts);
    c.certify = j.value("certify", c.certify);
    c.threads = j.value("threads", c.threads);
    if (j.contains("starts"))
        for (const auto& s : j.at("starts")) c.starts.push_back(read_vec(s, "starts"));
    c.validate();
    return c;
}

// --------------------------------------------------------------- files

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
}

// JSON errors from nlohmann (type_error, out_of_range) become ParseError.
template <class Fn>
auto guarded(const std::string& what, Fn fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
}

/// {"n": N, "edges": [[i, j, w], ...]}, 1-indexed.
inline Graph graph_from_json(const json& j) {
    return guarded("graph JSON", [&] {
        const long n = j.at("n").get<long>();
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() < 2 || e.size() > 3) throw ParseError("graph JSON: edge must be [i, j] or [i, j, w]");
            double w = e.size() == 3 ? read_number(e[2], "edge weight") : 1.0;
            edges.push_back({e[0].get<long>() - 1, e[1].get<long>() - 1, w});
        }
        return Graph(n, edges);
    });
}

inline json to_json(const Graph& G) {
    json j;
    j["n"] = G.n();
    json e = json::array();
    for (const auto& ed : G.edges()) e.push_back(json::array({ed.i + 1, ed.j + 1, number(ed.w)}));
    j["edges"] = e;
    return j;
}

/// Lines `i<TAB>j<TAB>w` (1-indexed, w optional); '#' starts a comment.
inline Graph graph_from_tsv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<Edge> edges;
    long n = 0, lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok.size() < 2 || tok.size() > 3) throw ParseError("graph TSV line " + std::to_string(lineno) + ": expected i j [w]");
        try {
            std::size_t pos = 0;
            long i = std::stol(tok[0], &pos);
            if (pos != tok[0].size()) throw std::invalid_argument("i");
            long jv = std::stol(tok[1], &pos);
            if (pos != tok[1].size()) throw std::invalid_argument("j");
            double w = 1.0;
            if (tok.size() == 3) {
                w = std::stod(tok[2], &pos);
                if (pos != tok[2].size()) throw std::invalid_argument("w");
            }
            if (i < 1 || jv < 1) throw ParseError("graph TSV line " + std::to_string(lineno) + ": indices are 1-based");
            n = std::max({n, i, jv});
            edges.push_back({i - 1, jv - 1, w});
        } catch (const std::logic_error&) {
            throw ParseError("graph TSV line " + std::to_string(lineno) + ": malformed number");
        }
    }
    if (n == 0) throw ParseError("graph TSV: no edges");
    return Graph(n, edges);
}

inline bool looks_like_json(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{';
    }
    return false;
}

inline Graph read_graph(const std::string& path) {
    std::string text = read_file(path);
    if (looks_like_json(text)) return graph_from_json(parse_json(text, path));
    return graph_from_tsv(text);
}

/// {"n": N, "edges": [{"nodes": [...], "w": w}, ...]}, 1-indexed nodes.
inline Hypergraph hypergraph_from_json(const json& j) {
    return guarded("hypergraph JSON", [&] {
        const long n = j.at("n").get<long>();
        std::vector<Hyperedge> edges;
        for (const auto& e : j.at("edges")) {
            Hyperedge h;
            for (const auto& v : e.at("nodes")) h.nodes.push_back(v.get<long>() - 1);
            h.w = e.contains("w") ? read_number(e.at("w"), "hyperedge weight") : 1.0;
            edges.push_back(std::move(h));
        }
        return Hypergraph(n, edges);
    });
}

inline Hypergraph read_hypergraph(const std::string& path) { return hypergraph_from_json(parse_json(read_file(path), path)); }

/// {"dim": d, "vertices": [[...], ...]}; negatives are added on load.
inline SymPolytope polytope_from_json(const json& j) {
    return guarded("polytope JSON", [&] {
        const long d = j.at("dim").get<long>();
        Mat V = read_mat(j.at("vertices"), "vertices");
        if (V.cols() != d) throw ParseError("polytope JSON: vertex length differs from dim");
        return SymPolytope::from_points(V, true);
    });
}

inline json to_json(const SymPolytope& P) {
    json j;
    j["dim"] = P.dim();
    j["vertices"] = mat(P.vertices());
    return j;
}

inline SymPolytope read_polytope(const std::string& path) { return polytope_from_json(parse_json(read_file(path), path)); }

inline json nodes_1based(const std::vector<long>& v) {
    json a = json::array();
    for (long x : v) a.push_back(x + 1);
    return a;
}

}  // namespace spectradual::io
