#include <doctest.h>

#include <spectradual/cli.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

using spectradual::io::json;

namespace {

const std::string data = SPECTRADUAL_DATA_DIR;

struct Out {
    int code;
    std::string out, err;
    json report() const { return json::parse(out); }
};

Out run(std::vector<std::string> args) {
    args.insert(args.begin(), "spectradual");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    int code = spectradual::cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
    return {code, o.str(), e.str()};
}

std::optional<json> find_check(const json& r, const std::string& name) {
    for (const auto& c : r["checks"])
        if (c["name"] == name) return c;
    return std::nullopt;
}

std::string without_timing(const std::string& text) {
    json j = json::parse(text);
    j.erase("timing_ms");
    return j.dump();
}

std::string temp_file(const std::string& name, const std::string& content) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p.string();
}

}  // namespace

TEST_CASE("report layout") {
    auto r = run({"eig", "--graph", data + "/k2.json"});
    REQUIRE(r.code == 0);
    json j = r.report();
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"command", "inputs", "results", "checks", "timing_ms"});
    CHECK(j["results"]["estimate"]["lambda"].get<double>() == doctest::Approx(1.0));
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("lhs"));
        CHECK(c.contains("rhs"));
        CHECK(c.contains("tol"));
    }
}

TEST_CASE("eig examples") {
    auto p4 = run({"eig", "--graph", data + "/p4.json", "--target", "min-nonzero"});
    CHECK(p4.code == 0);
    CHECK(p4.report()["results"]["estimate"]["lambda"].get<double>() == doctest::Approx(0.5));
    auto h2 = find_check(p4.report(), "h2 match");
    REQUIRE(h2);
    CHECK((*h2)["passed"] == true);

    auto k3 = run({"eig", "--graph", data + "/k3.json", "--a", "1", "--b", "inf"});
    CHECK(k3.code == 0);
    auto mc = find_check(k3.report(), "maxcut match");
    REQUIRE(mc);
    CHECK((*mc)["passed"] == true);
    CHECK(k3.report()["results"]["estimate"]["lambda"].get<double>() == doctest::Approx(4.0));

    auto k2 = run({"eig", "--graph", data + "/k2.json", "--a", "inf", "--b", "inf", "--target", "min-nonzero"});
    CHECK(k2.code == 0);
    CHECK(k2.report()["results"]["estimate"]["lambda"].get<double>() == doctest::Approx(2.0));
    REQUIRE(find_check(k2.report(), "2/diam"));
}

TEST_CASE("duals agree on the path with unit norms") {
    auto r = run({"duals", "--graph", data + "/p4.json"});
    CHECK(r.code == 0);
    json j = r.report();
    CHECK(j["results"]["forms"].size() == 5);
    CHECK(j["checks"].size() == 4);
    CHECK(j["results"]["kernel_dims"]["d_f"] == 1);
    CHECK(j["results"]["kernel_dims"]["d_g"] == 0);
}

TEST_CASE("duals report the kernel obstruction with exit code 3") {
    // With a = 2, b = 1 the primal maximum √2 sits at a node indicator,
    // while the kernel-projected dual pair peaks at √1.5.
    auto r = run({"duals", "--graph", data + "/p4.json", "--a", "2", "--b", "1"});
    CHECK(r.code == 3);
    json j = r.report();
    CHECK(j["results"]["forms"][0]["lambda_max"].get<double>() == doctest::Approx(std::sqrt(2.0)));
    CHECK(j["results"]["forms"][1]["lambda_max"].get<double>() == doctest::Approx(std::sqrt(1.5)));
}

TEST_CASE("oracle examples") {
    auto c = run({"oracle", "cheeger", "--graph", data + "/p4.json", "--k", "2"});
    CHECK(c.code == 0);
    CHECK(c.report()["results"]["value"].get<double>() == doctest::Approx(0.5));
    CHECK(c.report()["results"]["sets"].size() == 2);
    auto b = run({"oracle", "balls", "--graph", data + "/p5.json", "--k", "1"});
    CHECK(b.code == 0);
    CHECK(b.report()["results"]["value"].get<double>() == doctest::Approx(0.25));
    auto d = run({"oracle", "diam", "--graph", data + "/p4.json"});
    CHECK(d.code == 0);
    CHECK(d.report()["results"]["value"] == 3);
    auto m = run({"oracle", "maxcut", "--graph", data + "/c5_chord.tsv"});
    CHECK(m.code == 0);
}

TEST_CASE("hypercp and bodydist examples") {
    auto h = run({"hypercp", "--hypergraph", data + "/edge_hyper.json"});
    CHECK(h.code == 0);
    CHECK(h.report()["results"]["lambda"].get<double>() == doctest::Approx(1.0));
    auto b = run({"bodydist", "--body", data + "/square.json", "--body", data + "/diamond.json"});
    CHECK(b.code == 0);
    CHECK(b.report()["results"]["hat_distance"].get<double>() == doctest::Approx(2.0));
    auto pc = find_check(b.report(), "polar identity");
    REQUIRE(pc);
    CHECK((*pc)["passed"] == true);
}

TEST_CASE("selftest subset") {
    auto r = run({"selftest", "--suite", "9", "--suite", "8"});
    CHECK(r.code == 0);
    json j = r.report();
    CHECK(j["results"]["suites"].size() == 2);
    CHECK(j["results"]["digest"].is_string());
    CHECK(without_timing(r.out) == without_timing(run({"selftest", "--suite", "9", "--suite", "8"}).out));
}

TEST_CASE("exit codes for bad input") {
    CHECK(run({"eig", "--graph", data + "/p4.json", "--a", "foo"}).code == 2);
    CHECK(run({"eig", "--graph", data + "/p4.json", "--a", "0.5"}).code == 2);
    CHECK(run({"eig", "--graph", data + "/p4.json", "--target", "middle"}).code == 2);
    CHECK(run({"eig", "--graph", data + "/missing.json"}).code == 2);
    CHECK(run({"eig"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"oracle", "nope", "--graph", data + "/p4.json"}).code == 2);
    CHECK(run({"bodydist", "--body", data + "/square.json"}).code == 2);
    CHECK(run({"eig", "--graph", temp_file("sd_bad.json", "{\"n\": 3, \"edges\": [[1, 2")}).code == 2);
    CHECK(run({"eig", "--graph", temp_file("sd_range.json", "{\"n\": 3, \"edges\": [[1, 9, 1]]}")}).code == 2);
    auto e = run({"eig", "--graph", data + "/p4.json", "--a", "foo"});
    CHECK(json::parse(e.err)["exit_code"] == 2);
    CHECK(e.out.empty());
}

TEST_CASE("size limit exit code") {
    std::string edges;
    for (int i = 1; i < 30; ++i) edges += (i > 1 ? "," : "") + std::string("[") + std::to_string(i) + "," + std::to_string(i + 1) + ",1]";
    std::string big = temp_file("sd_p30.json", "{\"n\": 30, \"edges\": [" + edges + "]}");
    CHECK(run({"oracle", "cheeger", "--graph", big}).code == 4);
    CHECK(run({"oracle", "maxcut", "--graph", big}).code == 4);
}

TEST_CASE("deterministic output and json-out") {
    auto a = run({"eig", "--graph", data + "/c5_chord.tsv", "--a", "1", "--b", "2", "--seed", "7"});
    auto b = run({"eig", "--graph", data + "/c5_chord.tsv", "--a", "1", "--b", "2", "--seed", "7"});
    CHECK(without_timing(a.out) == without_timing(b.out));
    setenv("SPECTRADUAL_THREADS", "1", 1);
    auto c = run({"eig", "--graph", data + "/c5_chord.tsv", "--a", "1", "--b", "2", "--seed", "7"});
    unsetenv("SPECTRADUAL_THREADS");
    CHECK(without_timing(a.out) == without_timing(c.out));

    auto path = (std::filesystem::temp_directory_path() / "sd_report.json").string();
    auto w = run({"eig", "--graph", data + "/k2.json", "--json-out", path});
    CHECK(w.code == 0);
    CHECK(w.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(json::parse(ss.str())["command"] == "eig");
}

TEST_CASE("help exits cleanly") {
    auto h = run({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("eig") != std::string::npos);
}
