// Command-line front end: run jobs, replay property suites, evaluate expressions.

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "hypercurve/error.hpp"
#include "hypercurve/expr.hpp"
#include "hypercurve/job.hpp"
#include "hypercurve/props.hpp"

using namespace hypercurve;

namespace {

int cmd_run(const std::string& file, const std::string& out, std::optional<std::uint64_t> seed, bool parallel) {
    job::RunOptions opts;
    opts.seed = seed;
    opts.parallel = parallel;
    opts.default_tol = job::tolerance_from_env();
    const auto result = job::run_job_file(file, opts);
    if (out.empty()) {
        std::cout << result.report;
    } else {
        std::ofstream sink(out, std::ios::binary);
        if (!sink) throw job::SchemaError(out, "cannot write report");
        sink << result.report;
    }
    return result.exit_code;
}

int cmd_check(const std::string& suite, std::uint64_t seed, int instances) {
    const auto report = props::run_suite(suite, seed, instances);
    std::cout << "suite " << report.suite << " seed " << report.seed << "\n" << props::format_report(report);
    return report.passed() ? job::kExitOk : job::kExitFailed;
}

int cmd_eval(const std::string& text) {
    try {
        const auto e = expr::parse(text);
        const auto v = expr::eval(e);
        std::cout << "cartesian:  " << format_cartesian(v) << "\n"
                  << "idempotent: " << format_idempotent(v) << "\n";
        return job::kExitOk;
    } catch (const expr::ParseError& err) {
        std::cerr << text << "\n" << std::string(err.position(), ' ') << "^ expected " << err.expected()
                  << ", found " << err.found() << "\n";
        return job::kExitInput;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bicomplex path integrals and hyperbolic variation"};
    app.require_subcommand(1);

    std::string job_file;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool parallel = false;
    auto* run = app.add_subcommand("run", "Run a TOML job and print a JSON report");
    run->add_option("job", job_file, "Job file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "Write the report here instead of stdout");
    run->add_option("--seed", seed, "Seed for props-check tasks");
    run->add_flag("--parallel", parallel, "Run tasks concurrently (report order is unchanged)");

    std::string suite;
    std::uint64_t check_seed = 42;
    int instances = 0;
    auto* check = app.add_subcommand("check", "Run a property suite on seeded random instances");
    check->add_option("suite", suite, "Suite name")->required();
    check->add_option("--seed", check_seed, "Random seed");
    check->add_option("--instances", instances, "Instance count (0 = suite default)")->check(CLI::NonNegativeNumber);

    std::string text;
    auto* eval = app.add_subcommand("eval", "Evaluate a constant expression");
    eval->add_option("expr", text, "Expression")->required();

    app.add_subcommand("suites", "List property suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(job_file, out, seed, parallel);
        if (*check) return cmd_check(suite, check_seed, instances);
        if (*eval) return cmd_eval(text);
        for (auto name : props::suite_names()) std::cout << name << "\n";
        return job::kExitOk;
    } catch (const Error& err) {
        std::cerr << "hypercurve: " << err.what() << "\n";
        return job::kExitInput;
    }
}
