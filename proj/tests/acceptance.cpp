// Acceptance run: one PASS/FAIL line per criterion, then the runtime budget.
// Exit status is nonzero when any criterion fails.

#include <spectradual/selftest.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
    using namespace spectradual::selftest;
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 42;
    const double budget_s = 300.0;

    auto t0 = std::chrono::steady_clock::now();
    auto suites = all_suites();
    std::vector<SuiteResult> results;
    int failed = 0;
    for (std::size_t i = 0; i < suites.size(); ++i) {
        SuiteResult r = suites[i](seed);
        std::printf("criterion %2d  %-28s %s  cases=%ld failures=%ld  %.1fs\n", r.id, r.name.c_str(),
                    r.passed() ? "PASS" : "FAIL", r.cases, r.failures, r.seconds);
        for (const auto& c : r.checks)
            std::printf("    %-4s %s: lhs=%.6g rhs=%.6g tol=%.1e\n", c.passed ? "ok" : "BAD", c.name.c_str(), c.lhs, c.rhs, c.tol);
        if (!r.passed()) {
            ++failed;
            if (!r.note.empty()) std::printf("    first failure: %s\n", r.note.c_str());
        }
        std::fflush(stdout);
        results.push_back(std::move(r));
    }
    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = total < budget_s;
    std::printf("runtime       %-28s %s  %.1fs < %.0fs\n", "full selftest", in_budget ? "PASS" : "FAIL", total, budget_s);
    std::printf("digest %s (seed %llu)\n", digest(results).c_str(), static_cast<unsigned long long>(seed));
    std::printf("%d of %zu criteria failed\n", failed, results.size());
    return failed == 0 && in_budget ? 0 : 1;
}
