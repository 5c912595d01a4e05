#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ergokit/json_io.hpp"

namespace ergokit {

// Named objects of one session. "R" (the line) and "id" are reserved.
struct Workspace {
    long d = 0;
    std::map<std::string, IntervalSet> sets;
    std::map<std::string, PMap> maps;
    std::map<std::string, PartialIso> partials;
    std::optional<long> budget;
    std::optional<long> weak_truncation;

    ojson to_json() const;
};

// Sets the session field, then parses and validates every object.
Workspace parse_workspace(const ojson& j);
Workspace parse_workspace_text(const std::string& text);
Workspace load_workspace(const std::string& path);

struct Request {
    std::string command;  // validate | op | metric | construct | analyze | report
    std::string op;
    std::vector<std::string> args;
    std::optional<long> budget;
    std::optional<std::string> eps;
    std::optional<long> trunc;
    bool plot = false;
    std::string out = "json";
};

struct Outcome {
    int exit_code = 0;
    std::string out;  // report for stdout
    std::string err;  // diagnostics for stderr
};

// 0 success, 2 validation or precondition, 3 budget, 4 out of class, 5 failed re-check.
int exit_code_for(const std::string& code);

Outcome run_command(const Workspace& ws, const Request& req);
// Loads the workspace itself so that parse errors become reports too.
Outcome run_file(const std::string& path, const Request& req);
Outcome run_text(const std::string& text, const Request& req);

}  // namespace ergokit
