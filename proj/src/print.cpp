#include "conslaw/expr.hpp"

#include <sstream>

namespace conslaw {

namespace {

enum Prec { PSum = 1, PProduct = 2, PPower = 3, PAtom = 4 };

Prec precedence(const Expr& e)
{
    switch (e.kind()) {
        case Kind::Sum:
            return PSum;
        case Kind::Product:
            return PProduct;
        case Kind::Number:
            return (e.number().is_negative() || !e.number().is_integer()) ? PProduct : PAtom;
        case Kind::Power:
            return PPower;
        default:
            return PAtom;
    }
}

void print(std::ostream& os, const Expr& e);

void print_wrapped(std::ostream& os, const Expr& e, Prec min)
{
    if (precedence(e) < min) {
        os << '(';
        print(os, e);
        os << ')';
    } else {
        print(os, e);
    }
}

void print_args(std::ostream& os, const std::vector<Expr>& args)
{
    os << '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) os << ", ";
        print(os, args[i]);
    }
    os << ')';
}

void print_product(std::ostream& os, const Expr& e)
{
    const auto& a = e.args();
    std::size_t start = 0;
    if (a.front().kind() == Kind::Number) {
        const Rational& c = a.front().number();
        if (c == Rational(-1))
            os << '-';
        else
            os << c.str() << '*';
        start = 1;
    }
    for (std::size_t i = start; i < a.size(); ++i) {
        if (i > start) os << '*';
        print_wrapped(os, a[i], PPower);
    }
}

void print(std::ostream& os, const Expr& e)
{
    switch (e.kind()) {
        case Kind::Number:
            os << e.number().str();
            return;
        case Kind::Constant:
        case Kind::Indep:
        case Kind::Param:
            os << e.name();
            return;
        case Kind::Jet:
            os << e.name();
            if (!e.index().empty()) {
                os << '_';
                for (const auto& s : e.index()) os << s;
            }
            return;
        case Kind::Function:
            os << e.name();
            print_args(os, e.args());
            return;
        case Kind::Arbitrary: {
            os << e.name();
            const auto& o = e.orders();
            if (o.size() == 1) {
                for (int k = 0; k < o[0]; ++k) os << '\'';
            } else {
                bool any = false;
                for (int k : o) any = any || k != 0;
                if (any) {
                    os << "'{";
                    for (std::size_t i = 0; i < o.size(); ++i) os << (i ? "," : "") << o[i];
                    os << '}';
                }
            }
            print_args(os, e.args());
            return;
        }
        case Kind::Integral:
            os << "int(" << e.name() << ", ";
            print(os, e.args()[0]);
            os << ", ";
            print(os, e.args()[1]);
            os << ", ";
            print(os, e.args()[2]);
            os << ')';
            return;
        case Kind::Power: {
            const Expr& b = e.args()[0];
            if (b.kind() == Kind::Power || precedence(b) < PAtom) {
                os << '(';
                print(os, b);
                os << ')';
            } else {
                print(os, b);
            }
            const Rational& p = e.number();
            if (p.is_integer() && !p.is_negative())
                os << '^' << p.str();
            else
                os << "^(" << p.str() << ')';
            return;
        }
        case Kind::Product:
            print_product(os, e);
            return;
        case Kind::Sum: {
            const auto& a = e.args();
            for (std::size_t i = 0; i < a.size(); ++i) {
                auto [c, rest] = split_coefficient(a[i]);
                if (i == 0) {
                    print_wrapped(os, a[i], PSum);
                } else if (c.is_negative()) {
                    os << " - ";
                    print(os, Expr(-c) * rest);
                } else {
                    os << " + ";
                    print(os, a[i]);
                }
            }
            return;
        }
    }
}

}  // namespace

std::string Expr::str() const
{
    std::ostringstream os;
    print(os, *this);
    return os.str();
}

}  // namespace conslaw
