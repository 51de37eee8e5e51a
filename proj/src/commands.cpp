#include "conslaw/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

namespace conslaw {

const std::vector<CommandInfo>& command_table()
{
    static const std::vector<CommandInfo> table = {
        {"derive-det", {"system", "ansatz"}, {"expect"}, "multiplier determining equations for an ansatz"},
        {"verify-mult", {"system", "mult"}, {}, "Euler operators annihilate the characteristic form"},
        {"verify-cl", {"system", "mult", "dens"}, {}, "characteristic form equals the divergence of the densities"},
        {"densities", {"system", "mult"}, {"base", "expect"}, "line-integral densities for a two-variable system"},
        {"transform-cl", {"system", "mult", "transform"}, {"dens", "expect"}, "transport a law through a point map"},
        {"lie-expand", {"system", "mult", "dens", "transform"}, {"max-order", "expect"},
         "epsilon expansion of a law under a one-parameter family"},
        {"newness", {"system", "mult", "known"}, {}, "compare a multiplier set with known ones on solutions"},
        {"potentialize", {"system", "dens"}, {"index", "mult", "expect"}, "potential system from a conserved form"},
        {"nonlocal-test", {"generator", "potentials"}, {}, "does a generator depend on potential variables"},
        {"nlt-residual", {"nlt"}, {}, "classification residuals and the closed-form potential symmetry"},
        {"euler-lagrange", {"lagrangian"}, {"expect"}, "Euler-Lagrange equations"},
        {"variational-sym", {"lagrangian", "generator"}, {}, "X L is a total divergence"},
        {"noether-flux", {"lagrangian", "generator", "flux"}, {}, "conserved densities f - W"},
        {"frechet", {"system"}, {}, "linearizing operator"},
        {"adjoint", {"system"}, {}, "adjoint of the linearizing operator"},
        {"self-adjoint", {"system"}, {}, "is the linearizing operator self-adjoint"},
        {"bilinear-check", {"system"}, {"system2"}, "V L U - U L* V is a divergence"},
        {"sym-det", {"system", "generator"}, {"expect", "unknowns"}, "point symmetry determining equations"},
        {"linearize-check", {"system", "candidate"}, {"points"}, "symmetry form, mapping and mapped linearity"},
        {"multiplier-form-check", {"system", "candidate"}, {}, "multipliers built from adjoint solutions"},
        {"adjoint-pairing", {"system", "system2"}, {}, "adjoint of one linear system matches another"},
        {"classify-dh", {"nlt"}, {"tag"}, "classifying functions d and h"},
    };
    return table;
}

namespace {

Check zero_check(const std::string& name, const ZeroVerdict& z, bool pass, const std::string& note = {})
{
    Check c;
    c.name = name;
    c.verdict = pass ? Verdict::Pass : Verdict::Fail;
    c.max_residual = z.max_residual;
    c.median_residual = z.median_residual;
    c.samples = z.samples_used;
    if (!pass) c.witness = z.witness;
    c.note = note;
    return c;
}

Check flag_check(const std::string& name, bool pass, const std::string& note = {})
{
    Check c;
    c.name = name;
    c.verdict = pass ? Verdict::Pass : Verdict::Fail;
    c.note = note;
    return c;
}

std::vector<std::string> split_names(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ','))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string hex(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

std::string operator_lines(const LinearOperator& L)
{
    std::string s = L.str();
    while (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

struct Ctx {
    const CommandArgs& args;
    const ProblemFile& pf;
    const OracleConfig& cfg;
    Report& rep;

    [[nodiscard]] bool has(const std::string& k) const { return args.count(k) > 0; }
    [[nodiscard]] const std::string& arg(const std::string& k) const { return args.at(k); }
    [[nodiscard]] const ProblemBlock& block(const std::string& flag, const std::string& kind) const
    {
        try {
            return pf.get(arg(flag), kind);
        } catch (const std::invalid_argument& e) {
            throw UsageError("--" + flag + ": " + e.what());
        }
    }
    [[nodiscard]] const SystemDef& system(const std::string& flag = "system") const
    {
        return block(flag, "system").system;
    }
    [[nodiscard]] const std::vector<Expr>& items(const std::string& flag, const std::string& kind) const
    {
        return block(flag, kind).items;
    }
    [[nodiscard]] int integer(const std::string& flag, int fallback) const
    {
        if (!has(flag)) return fallback;
        try {
            std::size_t pos = 0;
            const int v = std::stoi(arg(flag), &pos);
            if (pos != arg(flag).size()) throw std::invalid_argument("trailing text");
            return v;
        } catch (const std::exception&) {
            throw UsageError("--" + flag + " expects an integer");
        }
    }
};

void cmd_derive_det(Ctx& c)
{
    const SystemDef& sys = c.system();
    const auto rows = derive_determining(sys, c.items("ansatz", "ansatz"), c.cfg);
    c.rep.derive("equations", rows);
    if (!c.has("expect")) {
        c.rep.checks.push_back(flag_check("derived", !rows.empty(), std::to_string(rows.size()) + " equations"));
        return;
    }
    const auto& want = c.items("expect", "expressions");
    const auto match = rows.size() == want.size() ? match_proportional(rows, want, c.cfg) : std::vector<int>{};
    std::vector<std::string> pairs;
    for (std::size_t i = 0; i < match.size(); ++i) pairs.push_back(std::to_string(i) + " -> " + std::to_string(match[i]));
    c.rep.derive("matching", pairs);
    c.rep.checks.push_back(flag_check("matches expected", !match.empty(),
                                      std::to_string(rows.size()) + " derived, " + std::to_string(want.size()) +
                                          " expected"));
}

void cmd_verify_mult(Ctx& c)
{
    const auto v = verify_multipliers(c.system(), c.items("mult", "multipliers"), c.cfg);
    c.rep.checks.push_back(zero_check("multipliers", v.oracle, v.passes));
    if (!v.passes) c.rep.derive("euler residuals", v.residuals);
}

void cmd_verify_cl(Ctx& c)
{
    const auto v = verify_conservation_law(c.system(), c.items("mult", "multipliers"), c.items("dens", "densities"), c.cfg);
    c.rep.checks.push_back(zero_check("conservation law", v.oracle, v.passes));
}

std::pair<Expr, Expr> parse_base(const Ctx& c)
{
    if (!c.has("base")) return {Expr(0), Expr(0)};
    const auto parts = split_names(c.arg("base"));
    if (parts.size() != 2) throw UsageError("--base expects a,b");
    const Vocabulary& v = c.system().vars;
    try {
        return {parse_expr(parts[0], v), parse_expr(parts[1], v)};
    } catch (const ParseError& e) {
        throw UsageError(std::string("--base: ") + e.what());
    }
}

void cmd_densities(Ctx& c)
{
    const SystemDef& sys = c.system();
    const auto [a, b] = parse_base(c);
    const auto r = densities_2var(sys, c.items("mult", "multipliers"), a, b, c.cfg);
    c.rep.derive("densities", r.law.densities);
    c.rep.checks.push_back(zero_check("conservation law", r.check.oracle, r.check.passes));
    if (c.has("expect")) {
        const auto& want = c.items("expect", "densities");
        std::vector<Expr> diffs;
        for (std::size_t i = 0; i < want.size(); ++i) diffs.push_back(r.law.densities.at(i) - want[i]);
        const auto z = is_zero(divergence(diffs, sys.vars), c.cfg);
        c.rep.checks.push_back(zero_check("differs from expected by a null divergence", z, z.zero));
    }
}

void cmd_transform_cl(Ctx& c)
{
    const SystemDef& sys = c.system();
    const ProblemBlock& tb = c.block("transform", "transform");
    if (tb.factor.empty()) throw UsageError("transform '" + tb.name + "' has no factor matrix");
    tb.transform.validate(c.cfg);
    const auto fv = verify_factor_matrix(sys, tb.transform, tb.factor, c.cfg);
    c.rep.checks.push_back(zero_check("factor matrix", fv.oracle, fv.passes));
    if (!fv.passes) return;
    const auto tm = transform_multipliers(sys, c.items("mult", "multipliers"), tb.transform, tb.factor, c.cfg);
    c.rep.derive("multipliers", tm.multipliers);
    c.rep.checks.push_back(zero_check("transformed multipliers", tm.verdict.oracle, tm.verdict.passes));
    if (c.has("dens")) {
        ConservationLaw cl;
        cl.multipliers = c.items("mult", "multipliers");
        cl.densities = c.items("dens", "densities");
        const auto tl = transform_densities(cl, tb.transform, c.cfg);
        c.rep.derive("densities", tl.law.densities);
        const auto law = verify_conservation_law(sys, tm.multipliers, tl.law.densities, c.cfg);
        c.rep.checks.push_back(zero_check("transformed law", law.oracle, law.passes));
    }
    if (c.has("expect")) {
        const auto nv = newness_test(tm.multipliers, {c.items("expect", "multipliers")}, sys, c.cfg);
        c.rep.checks.push_back(flag_check("proportional to expected", !nv.is_new, nv.is_new ? "" : "c = " + fmt(nv.c)));
    }
}

void cmd_lie_expand(Ctx& c)
{
    const SystemDef& sys = c.system();
    const ProblemBlock& tb = c.block("transform", "transform");
    tb.transform.validate(c.cfg);
    ConservationLaw cl;
    cl.multipliers = c.items("mult", "multipliers");
    cl.densities = c.items("dens", "densities");
    const int max_order = c.integer("max-order", kSeriesCap);
    const auto orders = lie_expand(sys, cl, tb.transform, max_order, tb.factor, c.cfg);
    std::vector<std::vector<Expr>> sets;
    for (const auto& o : orders) {
        const std::string k = "order " + std::to_string(o.order);
        c.rep.derive(k + " multipliers", o.multipliers);
        c.rep.derive(k + " densities", o.densities);
        c.rep.checks.push_back(zero_check(k + " multipliers", o.multiplier_check.oracle, o.multiplier_check.passes));
        c.rep.checks.push_back(zero_check(k + " law", o.law_check.oracle, o.law_check.passes));
        sets.push_back(o.multipliers);
    }
    if (orders.empty()) c.rep.checks.push_back(flag_check("nonzero orders", false, "every order vanished"));
    if (c.has("expect")) {
        for (const auto& name : split_names(c.arg("expect"))) {
            CommandArgs one{{"expect", name}};
            Ctx sub{one, c.pf, c.cfg, c.rep};
            const auto nv = newness_test(sub.items("expect", "multipliers"), sets, sys, c.cfg);
            c.rep.checks.push_back(flag_check(
                "expected " + name, !nv.is_new,
                nv.is_new ? "not produced" : "order " + std::to_string(orders[nv.index].order) + ", c = " + fmt(nv.c)));
        }
    }
}

void cmd_newness(Ctx& c)
{
    std::vector<std::vector<Expr>> known;
    for (const auto& name : split_names(c.arg("known"))) {
        CommandArgs one{{"known", name}};
        Ctx sub{one, c.pf, c.cfg, c.rep};
        known.push_back(sub.items("known", "multipliers"));
    }
    const auto nv = newness_test(c.items("mult", "multipliers"), known, c.system(), c.cfg);
    c.rep.checks.push_back(flag_check("new", nv.is_new,
                                      nv.is_new ? "" : "matches known set " + std::to_string(nv.index) + " with c = " + fmt(nv.c)));
}

void cmd_potentialize(Ctx& c)
{
    const SystemDef& sys = c.system();
    const auto& dens = c.items("dens", "densities");
    PotentialSystem p;
    if (c.has("mult")) {
        ConservationLaw cl;
        cl.multipliers = c.items("mult", "multipliers");
        cl.densities = dens;
        p = potentialize(sys, cl, c.cfg);
    } else {
        if (!c.has("index")) throw UsageError("potentialize needs --index or --mult");
        const int idx = c.integer("index", 0);
        if (idx < 0) throw UsageError("--index must be non-negative");
        const std::size_t it = sys.vars.indep.size() == 2 && sys.vars.indep[1] == "t" ? 1 : 0;
        p = potentialize(sys, static_cast<std::size_t>(idx), dens.at(it), dens.at(1 - it), c.cfg);
    }
    c.rep.derive("potential", std::vector<std::string>{p.potential});
    c.rep.derive("equations", p.system.equations);
    c.rep.derive("replaced", std::vector<std::string>{std::to_string(p.replaced)});
    c.rep.checks.push_back(zero_check("recovers the source", p.recovery, p.recovery.zero));
    if (!p.caveat.empty()) c.rep.derive("caveat", std::vector<std::string>{p.caveat});
    if (c.has("expect")) {
        const auto& want = c.items("expect", "expressions");
        c.rep.checks.push_back(flag_check("structurally equal to expected", want == p.system.equations));
    }
}

void cmd_nonlocal(Ctx& c)
{
    const auto v = nonlocal_symmetry_test(c.block("generator", "generator").generator, split_names(c.arg("potentials")), c.cfg);
    c.rep.derive("dependent coefficients", v.dependent_coefficients);
    c.rep.checks.push_back(flag_check("nonlocal", v.nonlocal, v.nonlocal ? "nonlocal" : "local"));
}

void cmd_nlt_residual(Ctx& c)
{
    const ProblemBlock& b = c.block("nlt", "nlt");
    if (b.c.size() != 5) throw UsageError("nlt block '" + b.name + "' has no constants c");
    const Expr u = Expr::jet(b.vars.dep[0]);
    const auto cls = nlt_classification_residual(*b.F, *b.G, b.c, u, c.cfg);
    c.rep.derive("residuals", std::vector<Expr>{cls.r1, cls.r2});
    c.rep.derive("status", std::vector<std::string>{to_string(cls.status)});
    c.rep.checks.push_back(zero_check("residuals vanish", cls.oracle, cls.oracle.zero));
    Check lin;
    lin.name = "linearizable";
    lin.verdict = cls.status == NltClassification::Status::Linearizable ? Verdict::Pass
                  : cls.status == NltClassification::Status::Degenerate ? Verdict::Degenerate
                                                                          : Verdict::Fail;
    lin.note = to_string(cls.status);
    c.rep.checks.push_back(lin);
    if (cls.oracle.zero && b.vars.dep.size() == 2) {
        const auto sym = nlt_potential_symmetry(b.c, *b.F, *b.G, b.vars, b.Fint, c.cfg);
        std::vector<Expr> coeffs = sym.generator.xi;
        coeffs.insert(coeffs.end(), sym.generator.eta.begin(), sym.generator.eta.end());
        c.rep.derive("generator", coeffs);
        c.rep.checks.push_back(zero_check("potential symmetry", sym.oracle, sym.oracle.zero));
    }
}

void cmd_euler_lagrange(Ctx& c)
{
    const ProblemBlock& lb = c.block("lagrangian", "lagrangian");
    const SystemDef el = euler_lagrange(lb.items[0], lb.vars);
    c.rep.derive("equations", el.equations);
    if (!c.has("expect")) {
        c.rep.checks.push_back(flag_check("derived", true));
        return;
    }
    const auto& want = c.items("expect", "expressions");
    bool same = want.size() == el.equations.size();
    for (std::size_t i = 0; same && i < want.size(); ++i)
        same = el.equations[i] == want[i] || el.equations[i] == -want[i];
    c.rep.checks.push_back(flag_check("structurally equal to expected", same, "up to sign per equation"));
}

void cmd_variational(Ctx& c)
{
    const ProblemBlock& lb = c.block("lagrangian", "lagrangian");
    const auto v = variational_symmetry_test(lb.items[0], c.block("generator", "generator").generator, lb.vars, c.cfg);
    c.rep.checks.push_back(zero_check("X L is a divergence", v.oracle, v.divergence));
}

void cmd_noether(Ctx& c)
{
    const ProblemBlock& lb = c.block("lagrangian", "lagrangian");
    const auto r = noether_flux(lb.items[0], c.block("generator", "generator").generator, c.items("flux", "expressions"),
                                lb.vars, c.cfg);
    c.rep.derive("densities", r.densities);
    c.rep.checks.push_back(zero_check("X L = D_i f^i", r.flux_match, r.flux_match.zero));
    c.rep.checks.push_back(zero_check("eta E(L) = D_i(f^i - W^i)", r.identity, r.identity.zero));
}

void cmd_frechet(Ctx& c)
{
    c.rep.derive("operator", std::vector<std::string>{operator_lines(frechet(c.system()))});
    c.rep.checks.push_back(flag_check("derived", true));
}

void cmd_adjoint(Ctx& c)
{
    c.rep.derive("adjoint", std::vector<std::string>{operator_lines(adjoint(frechet(c.system())))});
    c.rep.checks.push_back(flag_check("derived", true));
}

void cmd_self_adjoint(Ctx& c)
{
    const auto v = is_self_adjoint(c.system(), c.cfg);
    c.rep.derive("L", std::vector<std::string>{operator_lines(v.L)});
    c.rep.derive("L*", std::vector<std::string>{operator_lines(v.Lstar)});
    c.rep.checks.push_back(zero_check("self-adjoint", v.oracle, v.self_adjoint, v.self_adjoint ? "L = L*" : "L != L*"));
}

void cmd_bilinear(Ctx& c)
{
    const SystemDef& sys = c.system();
    const LinearOperator L = frechet(sys);
    const LinearOperator Ls = c.has("system2") ? frechet(c.system("system2")) : adjoint(L);
    const auto v = bilinear_identity_check(L, Ls, sys.vars, c.cfg);
    c.rep.derive("form", std::vector<Expr>{v.form});
    c.rep.checks.push_back(zero_check("V L U - U L* V is a divergence", v.divergence.oracle, v.passes));
}

void cmd_sym_det(Ctx& c)
{
    const SystemDef& sys = c.system();
    const ProblemBlock& gb = c.block("generator", "generator");
    const auto rows = symmetry_determining(sys, gb.generator, c.cfg);
    c.rep.derive("equations", rows);
    if (!c.has("expect")) {
        // a generator with undetermined coefficient functions yields equations;
        // a concrete one is admitted iff they all vanish
        bool undetermined = false;
        for (const auto& [f, args] : gb.vars.default_args)
            if (!sys.vars.is_function(f)) undetermined = true;
        if (undetermined) {
            c.rep.checks.push_back(flag_check("derived", !rows.empty(), std::to_string(rows.size()) + " equations"));
        } else {
            const auto z = is_zero(symmetry_residuals(sys, gb.generator), c.cfg);
            c.rep.checks.push_back(zero_check("admitted", z, z.zero));
        }
        return;
    }
    if (!c.has("unknowns")) throw UsageError("sym-det --expect needs --unknowns");
    const auto sv = same_linear_span(rows, c.items("expect", "expressions"), split_names(c.arg("unknowns")), c.cfg);
    c.rep.checks.push_back(flag_check("same span as expected", sv.equivalent,
                                      "ranks " + std::to_string(sv.rank_a) + ", " + std::to_string(sv.rank_b) +
                                          ", joint " + std::to_string(sv.rank_joint)));
}

void cmd_linearize(Ctx& c)
{
    const SystemDef& sys = c.system();
    const ProblemBlock& cb = c.block("candidate", "candidate");
    if (!cb.solutions.empty()) {
        const auto v = verify_symmetry_form(sys, cb.candidate, cb.solutions, c.cfg);
        for (std::size_t k = 0; k < v.checks.size(); ++k)
            c.rep.checks.push_back(zero_check("symmetry from solution " + std::to_string(k), v.checks[k], v.checks[k].zero));
    }
    if (cb.candidate.psi.empty()) return;
    const auto m = verify_theorem5(sys.vars, cb.candidate, c.cfg);
    c.rep.checks.push_back(zero_check("invariant coordinates", m.invariants, m.invariants.zero));
    c.rep.checks.push_back(zero_check("Kronecker system", m.kronecker, m.kronecker.zero));
    c.rep.checks.push_back(flag_check("functional independence", m.invariant_rank == static_cast<int>(sys.vars.indep.size()),
                                      "rank " + std::to_string(m.invariant_rank)));
    c.rep.checks.push_back(flag_check("invertible mapping",
                                      m.mapping_rank == static_cast<int>(sys.vars.indep.size() + sys.vars.dep.size()),
                                      "rank " + std::to_string(m.mapping_rank)));
    if (!m.passes) return;
    c.rep.derive("z", m.mapping.z);
    c.rep.derive("w", m.mapping.w);
    if (cb.solutions.empty()) return;
    const auto ml = verify_mapped_linearity(sys, m.mapping, cb.candidate.L, cb.candidate.target_vars, cb.solutions,
                                            c.integer("points", 16), c.cfg);
    Check ch = flag_check("mapped system is linear", ml.passes, "homogeneous target assumed");
    ch.max_residual = ml.max_residual;
    ch.samples = ml.points;
    c.rep.checks.push_back(ch);
}

void cmd_multiplier_form(Ctx& c)
{
    const SystemDef& sys = c.system();
    const ProblemBlock& cb = c.block("candidate", "candidate");
    if (cb.A.empty() || cb.msolutions.empty()) throw UsageError("candidate '" + cb.name + "' has no A or msolution");
    const ProblemBlock& adj = c.pf.get(cb.adjoint, "system");
    const auto v = verify_multiplier_form(sys, cb.A, cb.candidate.X, frechet(adj.system), adj.vars, cb.msolutions, c.cfg);
    for (std::size_t k = 0; k < v.checks.size(); ++k) {
        c.rep.derive("multipliers " + std::to_string(k), v.multipliers[k]);
        c.rep.checks.push_back(zero_check("multipliers from solution " + std::to_string(k), v.checks[k].oracle,
                                          v.checks[k].passes));
    }
}

void cmd_adjoint_pairing(Ctx& c)
{
    const SystemDef& s1 = c.system();
    const SystemDef& s2 = c.system("system2");
    const LinearOperator L = frechet(s1);
    const auto v = adjoint_pairing_check(L, frechet(s2), c.cfg);
    std::vector<std::string> cols, rows;
    for (std::size_t i = 0; i < v.column_map.size(); ++i)
        cols.push_back(s1.vars.dep[i] + " -> " + s2.vars.dep[static_cast<std::size_t>(v.column_map[i])]);
    for (std::size_t i = 0; i < v.row_map.size(); ++i) rows.push_back(std::to_string(i) + " -> " + std::to_string(v.row_map[i]));
    c.rep.derive("adjoint", std::vector<std::string>{operator_lines(adjoint(L))});
    c.rep.derive("unknowns", cols);
    c.rep.derive("rows", rows);
    c.rep.checks.push_back(flag_check("adjoint matches", v.passes));
    const auto bl = bilinear_identity_check(L, adjoint(L), s1.vars, c.cfg);
    c.rep.checks.push_back(zero_check("bilinear identity", bl.divergence.oracle, bl.passes));
}

void cmd_classify_dh(Ctx& c)
{
    const ProblemBlock& b = c.block("nlt", "nlt");
    const auto r = classify_dh(*b.F, *b.G, Expr::jet(b.vars.dep[0]), c.cfg);
    c.rep.derive("d", std::vector<Expr>{r.d});
    c.rep.derive("h", std::vector<Expr>{r.h});
    c.rep.derive("tag", std::vector<std::string>{r.tag});
    if (c.has("tag"))
        c.rep.checks.push_back(flag_check("tag", r.tag == c.arg("tag"), r.tag));
    else
        c.rep.checks.push_back(flag_check("classified", true, r.tag));
}

const std::map<std::string, std::function<void(Ctx&)>>& handlers()
{
    static const std::map<std::string, std::function<void(Ctx&)>> h = {
        {"derive-det", cmd_derive_det},
        {"verify-mult", cmd_verify_mult},
        {"verify-cl", cmd_verify_cl},
        {"densities", cmd_densities},
        {"transform-cl", cmd_transform_cl},
        {"lie-expand", cmd_lie_expand},
        {"newness", cmd_newness},
        {"potentialize", cmd_potentialize},
        {"nonlocal-test", cmd_nonlocal},
        {"nlt-residual", cmd_nlt_residual},
        {"euler-lagrange", cmd_euler_lagrange},
        {"variational-sym", cmd_variational},
        {"noether-flux", cmd_noether},
        {"frechet", cmd_frechet},
        {"adjoint", cmd_adjoint},
        {"self-adjoint", cmd_self_adjoint},
        {"bilinear-check", cmd_bilinear},
        {"sym-det", cmd_sym_det},
        {"linearize-check", cmd_linearize},
        {"multiplier-form-check", cmd_multiplier_form},
        {"adjoint-pairing", cmd_adjoint_pairing},
        {"classify-dh", cmd_classify_dh},
    };
    return h;
}

}  // namespace

Report run(const std::string& command, const CommandArgs& args, const ProblemFile& problem, const OracleConfig& cfg)
{
    const CommandInfo* info = nullptr;
    for (const auto& ci : command_table())
        if (ci.name == command) info = &ci;
    if (!info) throw UsageError("unknown command '" + command + "'");
    for (const auto& r : info->required)
        if (!args.count(r)) throw UsageError(command + " needs --" + r);
    for (const auto& [k, v] : args) {
        const bool known = std::find(info->required.begin(), info->required.end(), k) != info->required.end() ||
                           std::find(info->optional.begin(), info->optional.end(), k) != info->optional.end();
        if (!known) throw UsageError(command + " does not take --" + k);
    }
    cfg.validate();

    Report rep;
    rep.command = command;
    rep.config = cfg;
    std::string digest_src = problem.text + "\n" + command;
    for (const auto& [k, v] : args) digest_src += "\n--" + k + "=" + v;
    rep.inputs_digest = hex(stable_hash(digest_src));

    const auto t0 = std::chrono::steady_clock::now();
    Ctx ctx{args, problem, cfg, rep};
    try {
        handlers().at(command)(ctx);
    } catch (const UsageError&) {
        throw;
    } catch (const ParseError& e) {
        rep.error = std::string("parse error: ") + e.what();
    } catch (const std::invalid_argument& e) {
        rep.error = command + ": " + e.what();
    } catch (const std::domain_error& e) {
        rep.error = command + ": " + e.what();
    } catch (const OracleError& e) {
        rep.error = command + ": " + e.what();
    }
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace conslaw
