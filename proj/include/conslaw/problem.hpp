#pragma once

#include "conslaw/linearize.hpp"
#include "conslaw/nonlocal.hpp"
#include "conslaw/parse.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conslaw {

/// One `run` line of a suite block.
struct SuiteRun {
    std::vector<std::string> args;  // command followed by its options
    bool expect_pass = true;
    int line = 0;
};

/// A named block of a problem file. Which fields are filled depends on `kind`.
struct ProblemBlock {
    std::string kind;
    std::string name;
    std::string ref;  // system the block is written against, if any
    int line = 0;
    int column = 0;
    Vocabulary vars;

    SystemDef system;          // system
    std::vector<Expr> items;   // multipliers, densities, ansatz, expressions, lagrangian
    Generator generator;       // generator
    PointTransformation transform;
    ExprMatrix factor;         // transform: A[a][b]
    // candidate
    LinearizationCandidate candidate;
    std::string target;        // linear system for L F = 0
    std::string adjoint;       // linear system for L* F = 0
    std::vector<std::vector<Expr>> solutions;
    std::vector<std::vector<Expr>> msolutions;
    ExprMatrix A;
    // nlt
    std::optional<Expr> F, G;
    std::optional<Expr> Fint;
    std::vector<Expr> c;
    // suite
    std::vector<SuiteRun> runs;
};

struct ProblemFile {
    std::string path;
    std::string text;
    std::vector<ProblemBlock> blocks;

    /// Throws std::invalid_argument when no block of that kind has this name.
    [[nodiscard]] const ProblemBlock& get(const std::string& name, const std::string& kind) const;
    [[nodiscard]] const ProblemBlock* find(const std::string& name) const;
};

/// Errors are ParseError with the line and column in the file.
ProblemFile parse_problem_text(const std::string& text, const std::string& path = "<input>");
ProblemFile parse_problem_file(const std::string& path);

}  // namespace conslaw
