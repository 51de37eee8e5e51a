#include "conslaw/problem.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace conslaw {

namespace {

const std::set<std::string> kKinds = {"system",    "multipliers", "densities", "ansatz", "expressions", "lagrangian",
                                      "generator", "transform",   "candidate", "nlt",    "suite"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// A piece of source text with the position of its first character.
struct Span {
    std::string text;
    int line = 1;
    int column = 1;

    [[nodiscard]] Span sub(std::size_t pos, std::size_t len = std::string::npos) const
    {
        return {text.substr(pos, len), line, column + static_cast<int>(pos)};
    }
    [[nodiscard]] Span trimmed() const
    {
        const auto b = text.find_first_not_of(" \t\r");
        if (b == std::string::npos) return {"", line, column + static_cast<int>(text.size())};
        const auto e = text.find_last_not_of(" \t\r");
        return sub(b, e - b + 1);
    }
};

[[noreturn]] void fail(const Span& at, const std::string& msg) { throw ParseError(msg, at.line, at.column); }

// Split at commas outside parentheses.
std::vector<Span> split_list(const Span& s)
{
    std::vector<Span> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.text.size(); ++i) {
        const char c = i < s.text.size() ? s.text[i] : ',';
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            Span piece = s.sub(start, i - start).trimmed();
            if (piece.text.empty()) fail(piece, "empty list entry");
            out.push_back(piece);
            start = i + 1;
        }
    }
    return out;
}

int paren_balance(const std::string& s)
{
    int d = 0;
    for (char c : s) {
        if (c == '(') ++d;
        if (c == ')') --d;
    }
    return d;
}

std::string check_ident(const Span& s)
{
    if (s.text.empty() || !ident_start(s.text[0])) fail(s, "expected a name");
    for (char c : s.text)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') fail(s, "invalid name '" + s.text + "'");
    return s.text;
}

class Parser {
public:
    Parser(const std::string& text, std::string path) : path_(std::move(path))
    {
        std::istringstream in(text);
        std::string raw;
        int n = 0;
        while (std::getline(in, raw)) {
            ++n;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            lines_.push_back({raw, n, 1});
        }
    }

    ProblemFile run()
    {
        ProblemFile out;
        out.path = path_;
        std::size_t i = 0;
        while (i < lines_.size()) {
            Span l = lines_[i].trimmed();
            if (l.text.empty()) {
                ++i;
                continue;
            }
            ProblemBlock b = header(l);
            ++i;
            bool closed = false;
            while (i < lines_.size()) {
                Span s = lines_[i].trimmed();
                ++i;
                if (s.text.empty()) continue;
                if (s.text == "}") {
                    closed = true;
                    break;
                }
                // join continuation lines while parentheses are open
                while (paren_balance(s.text) > 0 && i < lines_.size()) {
                    s.text += " " + trim(lines_[i].text);
                    ++i;
                }
                statement(b, s);
            }
            if (!closed) fail({"", b.line, b.column}, "block '" + b.name + "' is not closed");
            finish(b);
            blocks_.push_back(b);
        }
        if (blocks_.empty()) fail({"", 1, 1}, "no blocks");
        out.blocks = blocks_;
        return out;
    }

private:
    std::string path_;
    std::vector<Span> lines_;
    std::vector<ProblemBlock> blocks_;

    const ProblemBlock* lookup(const std::string& name) const
    {
        for (const auto& b : blocks_)
            if (b.name == name) return &b;
        return nullptr;
    }

    const ProblemBlock& system_ref(const Span& at)
    {
        const ProblemBlock* r = lookup(at.text);
        if (!r) fail(at, "unresolved reference '" + at.text + "'");
        if (r->kind != "system") fail(at, "'" + at.text + "' is not a system");
        return *r;
    }

    ProblemBlock header(const Span& l)
    {
        if (l.text.back() != '{') fail(l, "expected a block header ending in '{'");
        Span h = l.sub(0, l.text.size() - 1).trimmed();
        ProblemBlock b;
        b.line = h.line;
        b.column = h.column;
        std::size_t p = 0;
        while (p < h.text.size() && ident_char(h.text[p])) ++p;
        b.kind = h.text.substr(0, p);
        if (!kKinds.count(b.kind)) fail(h, "unknown block kind '" + b.kind + "'");
        Span rest = h.sub(p).trimmed();
        std::size_t q = 0;
        while (q < rest.text.size() && ident_char(rest.text[q])) ++q;
        if (q == 0) fail(rest, "expected a block name");
        b.name = rest.text.substr(0, q);
        if (lookup(b.name)) fail(rest, "duplicate block name '" + b.name + "'");
        Span tail = rest.sub(q).trimmed();
        if (!tail.text.empty()) {
            if (tail.text[0] != ':') fail(tail, "expected ':' or '{'");
            Span r = tail.sub(1).trimmed();
            const ProblemBlock* ref = lookup(r.text);
            if (!ref) fail(r, "unresolved reference '" + r.text + "'");
            b.ref = r.text;
            b.vars = ref->vars;
        }
        if (b.kind == "system") b.system.name = b.name;
        return b;
    }

    Expr expr(const ProblemBlock& b, const Span& s) const { return expr(b.vars, s); }
    static Expr expr(const Vocabulary& v, const Span& s)
    {
        if (s.text.empty()) fail(s, "expected an expression");
        return parse_expr(s.text, v, s.line, s.column);
    }
    std::vector<Expr> row(const Vocabulary& v, const Span& s) const
    {
        std::vector<Expr> out;
        for (const auto& p : split_list(s)) out.push_back(expr(v, p));
        return out;
    }

    void declare(ProblemBlock& b, const std::string& kw, const Span& rest)
    {
        for (const auto& item : split_list(rest)) {
            if (kw == "function") {
                const auto slash = item.text.find('/');
                if (slash == std::string::npos) fail(item, "expected name/arity");
                const std::string n = check_ident(item.sub(0, slash).trimmed());
                Span ar = item.sub(slash + 1).trimmed();
                if (ar.text.empty() || ar.text.find_first_not_of("0123456789") != std::string::npos)
                    fail(ar, "arity must be a positive integer");
                if (b.vars.declares(n)) fail(item, "'" + n + "' is already declared");
                b.vars.functions[n] = std::stoi(ar.text);
                continue;
            }
            if (kw == "define") {
                const auto open = item.text.find('(');
                if (open == std::string::npos || item.text.back() != ')') fail(item, "expected name(args)");
                const std::string n = check_ident(item.sub(0, open).trimmed());
                if (b.vars.declares(n)) fail(item, "'" + n + "' is already declared");
                Span args = item.sub(open + 1, item.text.size() - open - 2);
                std::vector<Expr> es;
                for (const auto& a : split_list(args)) {
                    Expr e = expr(b, a);
                    if (e.kind() != Kind::Indep && !(e.kind() == Kind::Jet && e.index().empty()))
                        fail(a, "arguments of a defined function must be coordinates");
                    es.push_back(e);
                }
                b.vars.functions[n] = static_cast<int>(es.size());
                b.vars.default_args[n] = es;
                continue;
            }
            const std::string n = check_ident(item);
            if (b.vars.declares(n)) fail(item, "'" + n + "' is already declared");
            if (kw == "indep") b.vars.indep.push_back(n);
            if (kw == "dep") b.vars.dep.push_back(n);
            if (kw == "param") b.vars.params.push_back(n);
        }
    }

    void statement(ProblemBlock& b, const Span& s)
    {
        std::size_t p = 0;
        while (p < s.text.size() && (std::isalnum(static_cast<unsigned char>(s.text[p])) || s.text[p] == '_')) ++p;
        const std::string kw = s.text.substr(0, p);
        const Span rest = s.sub(p).trimmed();
        // bare text after the keyword distinguishes statements from expressions such as "t*exp(x)"
        const bool keyword_form = p < s.text.size() && (s.text[p] == ' ' || s.text[p] == '\t');

        if (keyword_form && (kw == "indep" || kw == "dep" || kw == "param" || kw == "function" || kw == "define")) {
            if (b.kind == "suite") fail(s, "declarations are not allowed in a suite");
            declare(b, kw, rest);
            return;
        }
        const std::string& k = b.kind;
        if (k == "system") {
            if (kw == "eq" && keyword_form) {
                b.system.equations.push_back(expr(b, rest));
            } else if (kw == "solved" && keyword_form) {
                const auto eq = rest.text.find('=');
                if (eq == std::string::npos) fail(rest, "expected jet = expression");
                const Expr lhs = expr(b, rest.sub(0, eq).trimmed());
                if (lhs.kind() != Kind::Jet) fail(rest, "left side of a solved form must be a derivative");
                b.system.solved.emplace_back(lhs, expr(b, rest.sub(eq + 1).trimmed()));
            } else {
                fail(s, "expected eq, solved or a declaration");
            }
        } else if (k == "multipliers" || k == "densities" || k == "ansatz" || k == "expressions" || k == "lagrangian") {
            b.items.push_back(expr(b, s));
        } else if (k == "generator") {
            if (kw == "type" && keyword_form) {
                if (rest.text == "point")
                    b.generator.type = Generator::Type::Point;
                else if (rest.text == "evolutionary")
                    b.generator.type = Generator::Type::Evolutionary;
                else
                    fail(rest, "type must be point or evolutionary");
            } else if (kw == "xi" && keyword_form) {
                b.generator.type = Generator::Type::Point;
                b.generator.xi.push_back(expr(b, rest));
            } else if (kw == "eta" && keyword_form) {
                b.generator.eta.push_back(expr(b, rest));
            } else {
                fail(s, "expected type, xi or eta");
            }
        } else if (k == "transform") {
            if (kw == "epsilon" && keyword_form) {
                const std::string n = check_ident(rest);
                if (!b.vars.is_param(n)) {
                    if (b.vars.declares(n)) fail(rest, "'" + n + "' is already declared");
                    b.vars.params.push_back(n);
                }
                b.transform.epsilon = n;
            } else if (kw == "forward" && keyword_form) {
                b.transform.forward.push_back(expr(b, rest));
            } else if (kw == "inverse" && keyword_form) {
                b.transform.inverse_maps.push_back(expr(b, rest));
            } else if (kw == "factor" && keyword_form) {
                b.factor.push_back(row(b.vars, rest));
            } else {
                fail(s, "expected epsilon, forward, inverse or factor");
            }
        } else if (k == "candidate") {
            candidate_statement(b, kw, keyword_form, s, rest);
        } else if (k == "nlt") {
            if (kw == "F" && keyword_form)
                b.F = expr(b, rest);
            else if (kw == "G" && keyword_form)
                b.G = expr(b, rest);
            else if (kw == "Fint" && keyword_form)
                b.Fint = expr(b, rest);
            else if (kw == "c" && keyword_form)
                b.c = row(b.vars, rest);
            else
                fail(s, "expected F, G, Fint or c");
        } else if (k == "suite") {
            if (kw != "run" || !keyword_form) fail(s, "expected run");
            const auto arrow = rest.text.rfind("=>");
            if (arrow == std::string::npos) fail(rest, "expected '=> pass' or '=> fail'");
            const Span want = rest.sub(arrow + 2).trimmed();
            if (want.text != "pass" && want.text != "fail") fail(want, "expected pass or fail");
            SuiteRun r;
            r.expect_pass = want.text == "pass";
            r.line = s.line;
            std::istringstream ws(rest.text.substr(0, arrow));
            std::string tok;
            while (ws >> tok) r.args.push_back(tok);
            if (r.args.empty()) fail(rest, "expected a command");
            b.runs.push_back(r);
        }
    }

    void candidate_statement(ProblemBlock& b, const std::string& kw, bool keyword_form, const Span& s, const Span& rest)
    {
        if (!keyword_form) fail(s, "expected a candidate statement");
        auto& c = b.candidate;
        if (kw == "alpha") {
            c.alpha.push_back(row(b.vars, rest));
        } else if (kw == "beta") {
            c.beta.push_back(row(b.vars, rest));
        } else if (kw == "X") {
            c.X.push_back(expr(b, rest));
        } else if (kw == "psi") {
            c.psi.push_back(expr(b, rest));
        } else if (kw == "A") {
            b.A.push_back(row(b.vars, rest));
        } else if (kw == "target") {
            const ProblemBlock& t = system_ref(rest);
            b.target = t.name;
            c.target_vars = t.vars;
            c.L = frechet(t.system);
        } else if (kw == "adjoint") {
            b.adjoint = system_ref(rest).name;
        } else if (kw == "solution") {
            if (b.target.empty()) fail(s, "solution before target");
            b.solutions.push_back(row(lookup(b.target)->vars, rest));
        } else if (kw == "msolution") {
            if (b.adjoint.empty()) fail(s, "msolution before adjoint");
            b.msolutions.push_back(row(lookup(b.adjoint)->vars, rest));
        } else {
            fail(s, "unknown candidate statement '" + kw + "'");
        }
    }

    void finish(ProblemBlock& b)
    {
        const Span at{"", b.line, b.column};
        const std::size_t n = b.vars.indep.size(), m = b.vars.dep.size();
        const std::string& k = b.kind;
        if (k == "system") {
            b.system.vars = b.vars;
            if (b.system.equations.empty()) fail(at, "system '" + b.name + "' has no equations");
        } else if (k == "lagrangian") {
            if (b.items.size() != 1) fail(at, "a lagrangian block holds exactly one expression");
        } else if (k == "multipliers" || k == "densities" || k == "ansatz" || k == "expressions") {
            if (b.items.empty()) fail(at, k + " block '" + b.name + "' is empty");
            if (k == "densities" && b.items.size() != n)
                fail(at, "densities need one component per independent variable");
            const ProblemBlock* r = b.ref.empty() ? nullptr : lookup(b.ref);
            if ((k == "multipliers" || k == "ansatz") && r && r->kind == "system" &&
                b.items.size() != r->system.equations.size())
                fail(at, k + " need one component per equation of '" + r->name + "'");
        } else if (k == "generator") {
            const auto& g = b.generator;
            if (g.eta.size() != m) fail(at, "generator needs one eta per dependent variable");
            if (g.type == Generator::Type::Point && g.xi.size() != n)
                fail(at, "point generator needs one xi per independent variable");
        } else if (k == "transform") {
            auto& t = b.transform;
            t.vars = b.vars;
            if (t.forward.size() != n + m || t.inverse_maps.size() != n + m)
                fail(at, "transform needs forward and inverse maps for every variable");
            for (const auto& r : b.factor)
                if (r.size() != b.factor.size()) fail(at, "factor matrix must be square");
        } else if (k == "candidate") {
            if (b.target.empty()) fail(at, "candidate needs a target");
            try {
                b.candidate.validate(b.vars);
            } catch (const std::invalid_argument& e) {
                fail(at, e.what());
            }
            if (!b.A.empty()) {
                if (b.adjoint.empty()) fail(at, "A given without an adjoint system");
                if (b.A.size() != lookup(b.adjoint)->vars.dep.size()) fail(at, "A needs one row per adjoint unknown");
                for (const auto& r : b.A)
                    if (r.size() != m) fail(at, "A needs one column per dependent variable");
            }
        } else if (k == "nlt") {
            if (!b.F || !b.G) fail(at, "nlt block needs F and G");
            if (!b.c.empty() && b.c.size() != 5) fail(at, "c holds exactly five constants");
            if (m == 0) fail(at, "nlt block needs a dependent variable");
        } else if (k == "suite") {
            if (b.runs.empty()) fail(at, "suite '" + b.name + "' has no runs");
        }
    }
};

}  // namespace

const ProblemBlock* ProblemFile::find(const std::string& name) const
{
    for (const auto& b : blocks)
        if (b.name == name) return &b;
    return nullptr;
}

const ProblemBlock& ProblemFile::get(const std::string& name, const std::string& kind) const
{
    const ProblemBlock* b = find(name);
    if (!b) throw std::invalid_argument("no block named '" + name + "'");
    if (b->kind != kind) throw std::invalid_argument("block '" + name + "' is a " + b->kind + ", expected " + kind);
    return *b;
}

ProblemFile parse_problem_text(const std::string& text, const std::string& path)
{
    ProblemFile f = Parser(text, path).run();
    f.text = text;
    return f;
}

ProblemFile parse_problem_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str(), path);
}

}  // namespace conslaw
