#pragma once

#include "conslaw/jet.hpp"

#include <random>

// Random expression generator for property tests.
struct RandomExprGen {
    explicit RandomExprGen(std::uint64_t seed, conslaw::Vocabulary v) : rng(seed), vocab(std::move(v)) {}

    std::mt19937_64 rng;
    conslaw::Vocabulary vocab;
    int max_order = 2;        // jet order of leaves
    bool polynomial = false;  // only sums/products/positive integer powers
    bool integrals = false;

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    conslaw::Expr number()
    {
        static const int num[] = {1, 2, 3, -1, -2, 1, 5};
        static const int den[] = {1, 1, 2, 1, 3, 4, 1};
        const int k = pick(7);
        return conslaw::Expr(conslaw::Rational(num[k], den[k]));
    }

    conslaw::Expr jet()
    {
        const auto& dep = vocab.dep[pick(static_cast<int>(vocab.dep.size()))];
        conslaw::MultiIndex idx;
        const int order = pick(max_order + 1);
        for (int i = 0; i < order; ++i) idx.push_back(vocab.indep[pick(static_cast<int>(vocab.indep.size()))]);
        return conslaw::Expr::jet(dep, idx);
    }

    conslaw::Expr leaf()
    {
        switch (pick(5)) {
            case 0:
                return number();
            case 1:
                return conslaw::Expr::indep(vocab.indep[pick(static_cast<int>(vocab.indep.size()))]);
            default:
                return jet();
        }
    }

    conslaw::Expr gen(int depth)
    {
        using conslaw::Expr;
        if (depth <= 0) return leaf();
        const int choices = polynomial ? 3 : (integrals ? 7 : 6);
        switch (pick(choices)) {
            case 0: {
                std::vector<Expr> ts;
                const int n = 2 + pick(2);
                for (int i = 0; i < n; ++i) ts.push_back(gen(depth - 1));
                return Expr::sum(ts);
            }
            case 1:
                return gen(depth - 1) * gen(depth - 1);
            case 2:
                return pow(gen(depth - 1), conslaw::Rational(2 + pick(2)));
            case 3: {
                static const char* fs[] = {"sin", "cos", "exp", "tanh", "sech", "sinh"};
                return Expr::function(fs[pick(6)], gen(depth - 1) * conslaw::Rational(1, 2));
            }
            case 4: {
                // reciprocal of something bounded away from zero
                Expr b = gen(depth - 1);
                return pow(Expr(3) + b * b, conslaw::Rational(-1));
            }
            case 5: {
                for (const auto& [name, arity] : vocab.functions) {
                    if (arity != 1 || pick(2)) continue;
                    const int order = pick(3);
                    return Expr::arbitrary(name, {order}, {gen(depth - 1)});
                }
                return gen(depth - 1) + leaf();
            }
            default: {
                const std::string s = "s";
                Expr body = conslaw::Expr::param(s) * gen(depth - 1) + pow(conslaw::Expr::param(s), 2);
                return Expr::integral(s, Expr(0), leaf(), body);
            }
        }
    }
};
