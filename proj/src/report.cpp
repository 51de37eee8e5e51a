#include "conslaw/report.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>

namespace conslaw {

using ojson = nlohmann::ordered_json;

const char* to_string(Verdict v)
{
    switch (v) {
        case Verdict::Pass:
            return "pass";
        case Verdict::Fail:
            return "fail";
        case Verdict::Degenerate:
            return "degenerate";
    }
    return "?";
}

namespace {

Verdict verdict_from(const std::string& s)
{
    if (s == "pass") return Verdict::Pass;
    if (s == "degenerate") return Verdict::Degenerate;
    if (s == "fail") return Verdict::Fail;
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

}  // namespace

bool Report::passed() const
{
    if (!error.empty()) return false;
    for (const auto& c : checks)
        if (c.verdict != Verdict::Pass) return false;
    return true;
}

void Report::derive(const std::string& key, std::vector<std::string> values) { derived.emplace_back(key, std::move(values)); }

void Report::derive(const std::string& key, const std::vector<Expr>& values)
{
    std::vector<std::string> s;
    for (const auto& e : values) s.push_back(e.str());
    derive(key, std::move(s));
}

std::string to_json(const Report& r, bool with_time)
{
    ojson j;
    j["schema"] = Report::kSchemaVersion;
    j["command"] = r.command;
    j["inputs_digest"] = r.inputs_digest;
    j["config"] = {{"seed", r.config.seed}, {"samples", r.config.samples}, {"tol", r.config.rel_tol}};
    j["verdict"] = r.passed() ? "pass" : "fail";
    ojson checks = ojson::array();
    for (const auto& c : r.checks) {
        ojson cj;
        cj["name"] = c.name;
        cj["verdict"] = to_string(c.verdict);
        cj["max_residual"] = c.max_residual;
        cj["median_residual"] = c.median_residual;
        cj["samples"] = c.samples;
        cj["witness"] = ojson::object();
        for (const auto& [k, v] : c.witness) cj["witness"][k] = v;
        cj["note"] = c.note;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    ojson derived = ojson::object();
    for (const auto& [k, vs] : r.derived) derived[k] = vs;
    j["derived"] = derived;
    j["error"] = r.error;
    if (with_time) j["wall_ms"] = r.wall_ms;
    return j.dump(2);
}

Report report_from_json(const std::string& text)
{
    const ojson j = ojson::parse(text);
    if (j.at("schema").get<int>() != Report::kSchemaVersion) throw std::invalid_argument("unsupported report schema");
    Report r;
    r.command = j.at("command").get<std::string>();
    r.inputs_digest = j.at("inputs_digest").get<std::string>();
    r.config.seed = j.at("config").at("seed").get<std::uint64_t>();
    r.config.samples = j.at("config").at("samples").get<int>();
    r.config.rel_tol = j.at("config").at("tol").get<double>();
    for (const auto& cj : j.at("checks")) {
        Check c;
        c.name = cj.at("name").get<std::string>();
        c.verdict = verdict_from(cj.at("verdict").get<std::string>());
        c.max_residual = cj.at("max_residual").get<double>();
        c.median_residual = cj.at("median_residual").get<double>();
        c.samples = cj.at("samples").get<int>();
        for (const auto& [k, v] : cj.at("witness").items()) c.witness[k] = v.get<double>();
        c.note = cj.at("note").get<std::string>();
        r.checks.push_back(c);
    }
    for (const auto& [k, v] : j.at("derived").items()) r.derived.emplace_back(k, v.get<std::vector<std::string>>());
    r.error = j.at("error").get<std::string>();
    if (j.contains("wall_ms")) r.wall_ms = j.at("wall_ms").get<double>();
    return r;
}

std::string to_text(const Report& r)
{
    std::ostringstream os;
    os << "command: " << r.command << "\n";
    os << "verdict: " << (r.passed() ? "pass" : "fail") << "\n";
    if (!r.error.empty()) os << "error: " << r.error << "\n";
    for (const auto& c : r.checks) {
        os << "  [" << to_string(c.verdict) << "] " << c.name;
        if (c.samples > 0)
            os << "  max " << std::setprecision(3) << c.max_residual << "  median " << c.median_residual << "  ("
               << c.samples << " samples)";
        if (!c.note.empty()) os << "  " << c.note;
        os << "\n";
        if (!c.witness.empty()) {
            os << "    witness:";
            for (const auto& [k, v] : c.witness) os << " " << k << "=" << std::setprecision(6) << v;
            os << "\n";
        }
    }
    for (const auto& [k, vs] : r.derived) {
        os << k << ":\n";
        for (const auto& v : vs) os << "  " << v << "\n";
    }
    os << "seed " << r.config.seed << ", samples " << r.config.samples << ", tol " << r.config.rel_tol << ", "
       << std::fixed << std::setprecision(1) << r.wall_ms << " ms\n";
    return os.str();
}

}  // namespace conslaw
