#pragma once

#include "conslaw/problem.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace conslaw {

enum class Verdict { Pass, Fail, Degenerate };
const char* to_string(Verdict v);

struct Check {
    std::string name;
    Verdict verdict = Verdict::Pass;
    double max_residual = 0;
    double median_residual = 0;
    int samples = 0;
    std::map<std::string, double> witness;  // worst sample point on failure
    std::string note;
};

struct Report {
    static constexpr int kSchemaVersion = 1;

    std::string command;
    std::string inputs_digest;
    OracleConfig config;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, std::vector<std::string>>> derived;  // printable expressions, in order
    std::string error;  // operation error surfaced with context
    double wall_ms = 0;

    /// True when there is no error and every check passes.
    [[nodiscard]] bool passed() const;
    void derive(const std::string& key, std::vector<std::string> values);
    void derive(const std::string& key, const std::vector<Expr>& values);
};

/// Options of one command: flag name (without dashes) -> value.
using CommandArgs = std::map<std::string, std::string>;

struct CommandInfo {
    std::string name;
    std::vector<std::string> required;
    std::vector<std::string> optional;
    std::string help;
};
const std::vector<CommandInfo>& command_table();

/// Thrown for unknown commands, missing or unexpected options and references
/// to absent blocks.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Run one command against a parsed problem. Operation errors are reported in
/// Report::error; usage problems throw UsageError.
Report run(const std::string& command, const CommandArgs& args, const ProblemFile& problem,
           const OracleConfig& cfg = {});

std::string to_json(const Report& r, bool with_time = true);
Report report_from_json(const std::string& json);
std::string to_text(const Report& r);

}  // namespace conslaw
