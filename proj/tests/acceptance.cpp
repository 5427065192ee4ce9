// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <locq/cli.hpp>
#include <locq/verify.hpp>

namespace
{

void report(const locq::CriterionResult &r, double seconds)
{
    std::printf("[%s] %2d %-14s %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
                seconds);
    std::fflush(stdout);
}

template <typename F>
locq::CriterionResult timed(F f)
{
    const auto t0 = std::chrono::steady_clock::now();
    auto r = f();
    report(r, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return r;
}

locq::CriterionResult verify_all_exits_zero()
{
    std::ostringstream out, err;
    const int code = locq::cli::run({"verify-all"}, out, err);
    bool parsed = false, all = false;
    std::size_t suites = 0;
    try {
        const auto doc = nlohmann::json::parse(out.str());
        parsed = true;
        suites = doc.at("result").at("suites").size();
        all = doc.at("result").at("pass").get<bool>();
    } catch (const std::exception &) {
    }
    const bool pass = code == 0 && parsed && all && suites == 9;
    return {10, "verify-all", pass,
            "exit " + std::to_string(code) + ", " + std::to_string(suites) + " suites, all pass: " + (all ? "yes" : "no")};
}

} // namespace

int main()
{
    using namespace locq::verify;
    std::vector<locq::CriterionResult> results;
    results.push_back(timed(dh_exactness));
    results.push_back(timed(pfaffian_suite));
    results.push_back(timed(macdonald_suite));
    results.push_back(timed(euler_suite));
    results.push_back(timed(orbifold_suite));
    results.push_back(timed(twisted_suite));
    results.push_back(timed(qidentity_suite));
    results.push_back(timed(spectral_suite));
    results.push_back(timed(genus_suite));
    results.push_back(timed(verify_all_exits_zero));

    std::size_t failed = 0;
    for (const auto &r : results) {
        failed += r.pass ? 0 : 1;
    }
    std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
    return failed == 0 ? 0 : 1;
}
