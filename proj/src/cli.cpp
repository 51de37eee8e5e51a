#include "conslaw/cli.hpp"

#include "conslaw/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <ostream>

namespace conslaw {

namespace {

struct Invocation {
    std::string command;
    std::string file;
    CommandArgs args;
    OracleConfig cfg;
    bool json = false;
};

// Options are stored per subcommand and collected after parsing.
class Parser {
public:
    explicit Parser(bool with_suite) : app_("conservation laws, symmetries and linearization checks", "conslaw")
    {
        app_.set_help_all_flag("--help-all", "help for every command");
        app_.require_subcommand(1);
        app_.fallthrough();
        app_.add_option("--seed", inv_.cfg.seed, "oracle seed")->capture_default_str();
        app_.add_option("--samples", inv_.cfg.samples, "oracle sample count")->capture_default_str();
        app_.add_option("--tol", inv_.cfg.rel_tol, "relative tolerance")->capture_default_str();
        app_.add_flag("--json", inv_.json, "print the report as JSON");
        for (const auto& info : command_table()) {
            CLI::App* sub = app_.add_subcommand(info.name, info.help);
            sub->add_option("file", inv_.file, "problem file")->required();
            auto& store = values_[info.name];
            for (const auto& f : info.required) sub->add_option("--" + f, store[f])->required();
            for (const auto& f : info.optional) sub->add_option("--" + f, store[f]);
        }
        if (with_suite) {
            CLI::App* sub = app_.add_subcommand("suite", "run every suite block of a problem file");
            sub->add_option("file", inv_.file, "problem file")->required();
        }
    }

    CLI::App& app() { return app_; }

    Invocation finish()
    {
        for (CLI::App* sub : app_.get_subcommands()) {
            inv_.command = sub->get_name();
            for (auto& [k, v] : values_[inv_.command])
                if (sub->get_option("--" + k)->count() > 0) inv_.args[k] = v;
        }
        return inv_;
    }

private:
    CLI::App app_;
    Invocation inv_;
    std::map<std::string, std::map<std::string, std::string>> values_;
};

int execute(const Invocation& inv, const ProblemFile& pf, std::ostream& out)
{
    const Report rep = run(inv.command, inv.args, pf, inv.cfg);
    out << (inv.json ? to_json(rep) + "\n" : to_text(rep));
    return rep.passed() ? kExitPass : kExitFail;
}

int run_suite(const Invocation& inv, const ProblemFile& pf, std::ostream& out, std::ostream& err)
{
    int total = 0;
    int mismatches = 0;
    for (const auto& b : pf.blocks) {
        if (b.kind != "suite") continue;
        for (const auto& r : b.runs) {
            ++total;
            std::vector<std::string> argv = {r.args[0], pf.path};
            argv.insert(argv.end(), r.args.begin() + 1, r.args.end());
            std::reverse(argv.begin(), argv.end());
            Parser p(false);
            std::string label = b.name + ":" + std::to_string(r.line);
            for (const auto& a : r.args) label += " " + a;
            bool got = false;
            std::string detail;
            try {
                p.app().parse(std::move(argv));
                Invocation sub = p.finish();
                // globals given to `suite` apply unless the run line overrides them
                if (sub.cfg.seed == OracleConfig{}.seed) sub.cfg.seed = inv.cfg.seed;
                if (sub.cfg.samples == OracleConfig{}.samples) sub.cfg.samples = inv.cfg.samples;
                if (sub.cfg.rel_tol == OracleConfig{}.rel_tol) sub.cfg.rel_tol = inv.cfg.rel_tol;
                const Report rep = run(sub.command, sub.args, pf, sub.cfg);
                got = rep.passed();
                if (!rep.error.empty()) detail = rep.error;
                for (const auto& c : rep.checks)
                    if (c.verdict != Verdict::Pass && detail.empty()) detail = c.name + " " + to_string(c.verdict);
            } catch (const CLI::ParseError& e) {
                detail = std::string("usage: ") + e.what();
                err << label << ": " << detail << "\n";
                ++mismatches;
                continue;
            } catch (const UsageError& e) {
                detail = std::string("usage: ") + e.what();
                err << label << ": " << detail << "\n";
                ++mismatches;
                continue;
            }
            const bool ok = got == r.expect_pass;
            if (!ok) ++mismatches;
            out << (ok ? "ok    " : "FAIL  ") << label << " => " << (got ? "pass" : "fail");
            if (!detail.empty()) out << "  (" << detail << ")";
            out << "\n";
        }
    }
    if (total == 0) {
        err << pf.path << ": no suite blocks\n";
        return kExitUsage;
    }
    out << total - mismatches << "/" << total << " runs as expected\n";
    return mismatches == 0 ? kExitPass : kExitFail;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Parser p(true);
    try {
        p.app().parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        out << p.app().help();
        return kExitPass;
    } catch (const CLI::CallForAllHelp&) {
        out << p.app().help("", CLI::AppFormatMode::All);
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const Invocation inv = p.finish();
    try {
        inv.cfg.validate();
        const ProblemFile pf = parse_problem_file(inv.file);
        if (inv.command == "suite") return run_suite(inv, pf, out, err);
        return execute(inv, pf, out);
    } catch (const ParseError& e) {
        err << inv.file << ":" << e.line() << ":" << e.column() << ": " << e.message() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace conslaw
