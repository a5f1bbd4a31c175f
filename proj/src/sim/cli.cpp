#include "metasim/sim/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "metasim/sim/runner.hpp"

namespace metasim::sim {

namespace {

struct RunOptions {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string transcript;
    bool verbose = false;
};

Scenario load_with_seed(const RunOptions& opts) {
    auto s = load_scenario(opts.scenario);
    if (opts.seed)
        s.seed = *opts.seed;
    return s;
}

int do_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    Scenario scenario;
    const CryptoProvider* crypto;
    try {
        scenario = load_with_seed(opts);
        crypto = &provider_from_env();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_load_failure;
    }

    Simulation sim(std::move(scenario), *crypto);
    if (opts.verbose)
        sim.set_verbose(&out);
    try {
        sim.run();
    } catch (const InvariantBreach& e) {
        err << "invariant breach: " << e.what() << '\n';
        return exit_invariant_breach;
    }

    std::ofstream file(opts.transcript, std::ios::binary | std::ios::trunc);
    file << sim.transcript().serialize();
    if (!file) {
        err << "error: cannot write " << opts.transcript << '\n';
        return exit_load_failure;
    }
    out << "scenario " << sim.scenario().name << " seed " << sim.scenario().seed << ": "
        << sim.transcript().size() << " records, provider " << crypto->name() << '\n';
    return exit_ok;
}

int do_verify(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    Scenario scenario;
    const CryptoProvider* crypto;
    Transcript recorded;
    try {
        scenario = load_with_seed(opts);
        crypto = &provider_from_env();
        std::ifstream in(opts.transcript, std::ios::binary);
        if (!in)
            throw Error("transcript-not-found", opts.transcript);
        std::ostringstream buf;
        buf << in.rdbuf();
        recorded = Transcript::parse(buf.str());
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_load_failure;
    }

    Transcript replayed;
    try {
        replayed = run_scenario(scenario, *crypto);
    } catch (const InvariantBreach& e) {
        err << "invariant breach: " << e.what() << '\n';
        return exit_invariant_breach;
    }

    const auto& a = recorded.records();
    const auto& b = replayed.records();
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        if (i < a.size() && i < b.size() && a[i] == b[i])
            continue;
        err << "mismatch at record " << i + 1 << ": recorded ";
        err << (i < a.size() ? a[i].event + " " + a[i].outcome : std::string("<none>"));
        err << ", replayed ";
        err << (i < b.size() ? b[i].event + " " + b[i].outcome : std::string("<none>")) << '\n';
        return exit_transcript_mismatch;
    }
    out << "transcript matches (" << a.size() << " records)\n";
    return exit_ok;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deterministic multi-world identity simulator", "metasim"};
    app.require_subcommand(1);

    RunOptions run_opts, verify_opts;
    std::uint64_t run_seed = 0, verify_seed = 0;

    auto* run = app.add_subcommand("run", "Run a scenario and write its transcript");
    run->add_option("--scenario", run_opts.scenario, "Scenario file or bundled name")->required();
    auto* run_seed_opt = run->add_option("--seed", run_seed, "RNG seed (defaults to the scenario's)");
    run->add_option("--transcript", run_opts.transcript, "Output transcript path")->required();
    run->add_flag("--verbose", run_opts.verbose, "Echo records while running");

    auto* verify = app.add_subcommand("verify", "Re-run a scenario and compare with a transcript");
    verify->add_option("--transcript", verify_opts.transcript, "Recorded transcript")->required();
    verify->add_option("--scenario", verify_opts.scenario, "Scenario file or bundled name")->required();
    auto* verify_seed_opt = verify->add_option("--seed", verify_seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, r;
        int code = app.exit(e, o, r);
        out << o.str();
        err << r.str();
        return code == 0 ? exit_ok : exit_load_failure;
    }

    if (*run_seed_opt)
        run_opts.seed = run_seed;
    if (*verify_seed_opt)
        verify_opts.seed = verify_seed;

    if (*run)
        return do_run(run_opts, out, err);
    return do_verify(verify_opts, out, err);
}

}  // namespace metasim::sim
