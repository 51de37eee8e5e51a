#pragma once

#include "conslaw/jet.hpp"

#include <stdexcept>
#include <string>

namespace conslaw {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column);
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return column_; }
    [[nodiscard]] const std::string& message() const { return msg_; }

private:
    std::string msg_;
    int line_;
    int column_;
};

/// Parse one expression of the DSL. `line`/`column` locate text[0] for error
/// reporting when the expression is embedded in a larger file.
Expr parse_expr(const std::string& text, const Vocabulary& vocab, int line = 1, int column = 1);

/// Split "u_tx" into ("u", {t, x}) against the declared names. Returns false
/// if the name is not a jet of a declared dependent variable.
bool split_jet_name(const std::string& name, const Vocabulary& vocab, std::string& dep, MultiIndex& index);

}  // namespace conslaw
