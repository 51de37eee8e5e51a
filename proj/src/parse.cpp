#include "conslaw/parse.hpp"

#include <cctype>
#include <optional>
#include <set>

namespace conslaw {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      msg_(msg),
      line_(line),
      column_(column)
{
}

bool split_jet_name(const std::string& name, const Vocabulary& vocab, std::string& dep, MultiIndex& index)
{
    if (vocab.is_dep(name)) {
        dep = name;
        index.clear();
        return true;
    }
    const auto us = name.find('_');
    if (us == std::string::npos || us == 0) return false;
    const std::string head = name.substr(0, us);
    if (!vocab.is_dep(head)) return false;
    std::string rest = name.substr(us + 1);
    if (rest.empty()) return false;
    MultiIndex idx;
    std::size_t pos = 0;
    while (pos < rest.size()) {
        std::string best;
        for (const auto& x : vocab.indep)
            if (x.size() > best.size() && rest.compare(pos, x.size(), x) == 0) best = x;
        if (best.empty()) return false;
        idx.push_back(best);
        pos += best.size();
    }
    dep = head;
    index = std::move(idx);
    return true;
}

namespace {

class Parser {
public:
    Parser(const std::string& text, const Vocabulary& vocab, int line, int column)
        : s_(text), vocab_(vocab), line_(line), col_(column)
    {
    }

    Expr run()
    {
        skip();
        if (pos_ >= s_.size()) fail("empty expression");
        Expr e = expr();
        skip();
        if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }

    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const
    {
        int line = line_;
        int col = col_;
        for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
            if (s_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, line, col);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr()
    {
        Expr acc = term();
        std::vector<Expr> ts{acc};
        for (;;) {
            if (accept('+'))
                ts.push_back(term());
            else if (accept('-'))
                ts.push_back(-term());
            else
                break;
        }
        return ts.size() == 1 ? ts.front() : Expr::sum(std::move(ts));
    }

    Expr term()
    {
        Expr acc = unary();
        for (;;) {
            if (accept('*')) {
                acc = acc * unary();
            } else if (accept('/')) {
                const std::size_t at = pos_;
                Expr d = unary();
                if (d.is_zero()) fail_at("division by zero", at);
                acc = acc / d;
            } else {
                break;
            }
        }
        return acc;
    }

    Expr unary()
    {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power()
    {
        Expr base = primary();
        if (accept('^')) {
            skip();
            const std::size_t at = pos_;
            Expr ex = unary();
            if (!ex.is_number()) fail_at("exponent must be a rational constant", at);
            if (base.is_zero() && ex.number().is_negative()) fail_at("zero to a negative power", at);
            return pow(base, ex.number());
        }
        return base;
    }

    Expr number()
    {
        const std::size_t start = pos_;
        std::int64_t num = 0;
        std::int64_t den = 1;
        bool frac = false;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
            const char c = s_[pos_++];
            if (c == '.') {
                if (frac) fail_at("malformed number", start);
                frac = true;
                continue;
            }
            if (__builtin_mul_overflow(num, 10, &num) || __builtin_add_overflow(num, c - '0', &num))
                fail_at("number too large", start);
            if (frac && __builtin_mul_overflow(den, 10, &den)) fail_at("number too precise", start);
        }
        return Expr(Rational(num, den));
    }

    std::string identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    std::vector<Expr> call_args()
    {
        expect('(');
        std::vector<Expr> args;
        if (accept(')')) return args;
        do {
            args.push_back(expr());
        } while (accept(','));
        expect(')');
        return args;
    }

    Expr primary()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) fail(std::string("unexpected '") + c + "'");
        const std::size_t start = pos_;
        const std::string id = identifier();

        // derivative marks on arbitrary functions: F'(u), F''(u), a'{0,1}(x,y)
        std::vector<int> marks;
        bool braced = false;
        int primes = 0;
        while (pos_ < s_.size() && s_[pos_] == '\'') {
            ++primes;
            ++pos_;
        }
        if (primes == 1 && pos_ < s_.size() && s_[pos_] == '{') {
            ++pos_;
            braced = true;
            do {
                skip();
                const std::size_t at = pos_;
                Expr n = number();
                if (!n.is_number() || !n.number().is_integer() || n.number().is_negative())
                    fail_at("derivative order must be a non-negative integer", at);
                marks.push_back(static_cast<int>(n.number().num()));
            } while (accept(','));
            expect('}');
        }
        skip();
        const bool call = pos_ < s_.size() && s_[pos_] == '(';
        if (primes > 0 && !call) fail("derivative marks must be followed by an argument list");

        if (call) {
            if (id == "int" && primes == 0) return integral();
            std::vector<Expr> args = call_args();
            if (primes == 0 && is_elementary_function(id)) {
                if (args.size() != 1) fail_at(id + " takes one argument", start);
                return Expr::function(id, args[0]);
            }
            if (primes == 0 && id == "sqrt") {
                if (args.size() != 1) fail_at("sqrt takes one argument", start);
                return sqrt(args[0]);
            }
            auto it = vocab_.functions.find(id);
            if (it == vocab_.functions.end()) fail_at("undeclared function '" + id + "'", start);
            if (static_cast<int>(args.size()) != it->second)
                fail_at("function '" + id + "' expects " + std::to_string(it->second) + " argument(s)", start);
            std::vector<int> orders(args.size(), 0);
            if (braced) {
                if (marks.size() != args.size()) fail_at("derivative orders do not match arity", start);
                orders = marks;
            } else if (primes > 0) {
                if (args.size() != 1) fail_at("use '{...} orders for functions of several arguments", start);
                orders[0] = primes;
            }
            return Expr::arbitrary(id, std::move(orders), std::move(args));
        }

        if (bound_.count(id)) return Expr::param(id);
        if (id == "pi" || id == "sqrt2") return Expr::constant(id);
        if (vocab_.is_indep(id)) return Expr::indep(id);
        if (vocab_.is_param(id)) return Expr::param(id);
        std::string dep;
        MultiIndex idx;
        if (split_jet_name(id, vocab_, dep, idx)) return Expr::jet(dep, std::move(idx));
        if (auto sh = shorthand(id)) return *sh;
        fail_at("undeclared identifier '" + id + "'", start);
    }

    // alpha, alpha_xu for functions declared with default arguments
    std::optional<Expr> shorthand(const std::string& id) const
    {
        const auto us = id.find('_');
        const std::string head = id.substr(0, us);
        auto it = vocab_.default_args.find(head);
        if (it == vocab_.default_args.end()) return std::nullopt;
        const auto& args = it->second;
        std::vector<int> orders(args.size(), 0);
        if (us != std::string::npos) {
            const std::string rest = id.substr(us + 1);
            if (rest.empty()) return std::nullopt;
            std::size_t pos = 0;
            while (pos < rest.size()) {
                std::size_t best = args.size();
                std::size_t len = 0;
                for (std::size_t i = 0; i < args.size(); ++i) {
                    const std::string n = args[i].str();
                    if (n.size() > len && rest.compare(pos, n.size(), n) == 0) {
                        best = i;
                        len = n.size();
                    }
                }
                if (best == args.size()) return std::nullopt;
                ++orders[best];
                pos += len;
            }
        }
        return Expr::arbitrary(head, std::move(orders), args);
    }

    Expr integral()
    {
        expect('(');
        skip();
        const std::size_t at = pos_;
        const std::string dummy = identifier();
        if (dummy.empty()) fail_at("expected integration variable", at);
        if (vocab_.declares(dummy)) fail_at("integration variable '" + dummy + "' shadows a declared name", at);
        expect(',');
        Expr lo = expr();
        expect(',');
        Expr hi = expr();
        expect(',');
        const bool fresh = bound_.insert(dummy).second;
        Expr body = expr();
        if (fresh) bound_.erase(dummy);
        expect(')');
        return Expr::integral(dummy, lo, hi, body);
    }

    const std::string& s_;
    const Vocabulary& vocab_;
    int line_;
    int col_;
    std::size_t pos_ = 0;
    std::set<std::string> bound_;
};

}  // namespace

Expr parse_expr(const std::string& text, const Vocabulary& vocab, int line, int column)
{
    Parser p(text, vocab, line, column);
    return p.run();
}

}  // namespace conslaw
