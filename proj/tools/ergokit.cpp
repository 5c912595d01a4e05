// Command line front end: ergokit [options] WORKSPACE SUBCOMMAND [OP] [ARGS...]
#include <CLI11.hpp>

#include <iostream>

#include "ergokit/workspace.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Exact computations with piecewise translations of the real line"};
    std::string path, command;
    std::vector<std::string> rest;
    ergokit::Request req;
    long budget = 0;
    long trunc = 0;
    std::string eps;

    app.add_option("workspace", path, "workspace JSON file")->required();
    app.add_option("command", command, "validate | op | metric | construct | analyze | report")
        ->required()
        ->check(CLI::IsMember({"validate", "op", "metric", "construct", "analyze", "report"}));
    app.add_option("args", rest, "operation name followed by its arguments");
    auto* ob = app.add_option("--budget", budget, "step budget (default 10000, or ERGOKIT_BUDGET)");
    auto* oe = app.add_option("--eps", eps, "epsilon for rokhlin and factor (default 1/2)");
    auto* ot = app.add_option("--trunc", trunc, "number of weak-metric test sets (default 32)");
    app.add_option("--out", req.out, "output format")->check(CLI::IsMember({"json", "tsv"}));
    app.add_flag("--plot", req.plot, "TSV rows start, end, kind for analyze classify|hopf");
    app.positionals_at_end(false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    req.command = command;
    if (!rest.empty()) {
        req.op = rest.front();
        req.args.assign(rest.begin() + 1, rest.end());
    }
    if (*ob) req.budget = budget;
    if (*oe) req.eps = eps;
    if (*ot) req.trunc = trunc;

    ergokit::Outcome out = ergokit::run_file(path, req);
    std::cout << out.out;
    std::cerr << out.err;
    return out.exit_code;
}
