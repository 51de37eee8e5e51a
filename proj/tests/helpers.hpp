#pragma once

#include "conslaw/parse.hpp"

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

inline conslaw::Vocabulary make_vocab(std::vector<std::string> indep, std::vector<std::string> dep,
                                      std::map<std::string, int> functions = {},
                                      std::vector<std::string> params = {})
{
    conslaw::Vocabulary v;
    v.indep = std::move(indep);
    v.dep = std::move(dep);
    v.functions = std::move(functions);
    v.params = std::move(params);
    return v;
}

// Declare f(args...) with default arguments so that f_xu style names parse.
inline void declare_default(conslaw::Vocabulary& v, const std::string& name, const std::vector<std::string>& args)
{
    std::vector<conslaw::Expr> es;
    for (const auto& a : args) es.push_back(conslaw::parse_expr(a, v));
    v.functions[name] = static_cast<int>(args.size());
    v.default_args[name] = es;
}

inline conslaw::SystemDef make_system(const conslaw::Vocabulary& v, std::initializer_list<std::string> eqs,
                                      std::initializer_list<std::pair<std::string, std::string>> solved = {})
{
    conslaw::SystemDef s;
    s.vars = v;
    for (const auto& e : eqs) s.equations.push_back(conslaw::parse_expr(e, v));
    for (const auto& [l, r] : solved) s.solved.emplace_back(conslaw::parse_expr(l, v), conslaw::parse_expr(r, v));
    return s;
}

inline std::vector<conslaw::Expr> parse_all(const conslaw::Vocabulary& v, std::initializer_list<std::string> es)
{
    std::vector<conslaw::Expr> out;
    for (const auto& e : es) out.push_back(conslaw::parse_expr(e, v));
    return out;
}

// telegraph potential system with arbitrary F, G
inline conslaw::Vocabulary nlt_vocab()
{
    return make_vocab({"t", "x"}, {"u", "v"}, {{"F", 1}, {"G", 1}});
}

inline conslaw::SystemDef nlt_potential_system()
{
    return make_system(nlt_vocab(), {"v_t - F(u)*u_x - G(u)", "v_x - u_t"},
                       {{"v_t", "F(u)*u_x + G(u)"}, {"u_t", "v_x"}});
}

inline conslaw::SystemDef exp_sine_system()
{
    return make_system(make_vocab({"t", "x"}, {"u", "v"}), {"v_t + (1 - 2*exp(2*u))*u_x - exp(u)", "v_x - u_t"},
                       {{"v_t", "(2*exp(2*u) - 1)*u_x + exp(u)"}, {"u_t", "v_x"}});
}

inline conslaw::SystemDef tanh_system()
{
    return make_system(make_vocab({"t", "x"}, {"u", "v"}), {"v_t - sech(u)^2*u_x - tanh(u)", "v_x - u_t"},
                       {{"v_t", "sech(u)^2*u_x + tanh(u)"}, {"u_t", "v_x"}});
}

// phase shared by the exponential-sine multipliers and densities
inline std::string exp_sine_phase(const std::string& u, const std::string& v)
{
    return "1/2*(" + v + " + (x + 2*exp(" + u + "))/sqrt2)";
}

inline std::vector<std::string> exp_sine_multipliers(const std::string& t = "t", const std::string& u = "u",
                                                     const std::string& v = "v")
{
    const std::string A = "exp(-1/2*(" + u + " + (" + t + ")/sqrt2))";
    const std::string ph = exp_sine_phase(u, v);
    return {A + "*sin(" + ph + ")", "-" + A + "*(sqrt2*exp(" + u + ")*sin(" + ph + ") + cos(" + ph + "))"};
}

inline std::vector<std::string> exp_sine_densities(const std::string& t = "t", const std::string& u = "u",
                                                   const std::string& v = "v")
{
    const std::string A = "exp(-1/2*(" + u + " + (" + t + ")/sqrt2))";
    const std::string ph = exp_sine_phase(u, v);
    return {"-2*" + A + "*cos(" + ph + ")", "2*" + A + "*(sqrt2*exp(" + u + ")*cos(" + ph + ") - sin(" + ph + "))"};
}

inline std::vector<std::string> tanh_multipliers()
{
    return {"exp(x)*(2*x + t^2 - v^2 - 2*log(cosh(u)))", "2*exp(x)*(v*tanh(u) - t)"};
}

inline std::vector<std::string> tanh_densities()
{
    return {"exp(x)*(2*t*u - 1/3*v^3 + v*(t^2 + 2*x - 2*log(cosh(u))))",
            "exp(x)*((v^2 - t^2 - 2*x + 2*(1 + log(cosh(u))))*tanh(u) - 2*(t*v + u))"};
}

inline std::string replace_all(std::string s, const std::string& from, const std::string& to)
{
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
    return s;
}
