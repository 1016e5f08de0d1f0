// cmfiber: exact Delta-CM loci of the modular curves X_0(M,N) and X_1(M,N)
// over imaginary quadratic discriminants, with a volcano-based self-check
// suite.  Deterministic JSON/text/DOT output.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cmfiber/exports.hpp"
#include "cmfiber/fiberengine.hpp"
#include "cmfiber/isogtools.hpp"
#include "cmfiber/oddcm.hpp"
#include "cmfiber/primdeg.hpp"
#include "cmfiber/selfcheck.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace cmfiber;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitInternal = 3;
constexpr int kExitResource = 4;

std::pair<i64, i64> parse_level(const std::string& s)
{
    auto comma = s.find(',');
    try {
        if (comma == std::string::npos)
            return {1, std::stoll(s)};
        return {std::stoll(s.substr(0, comma)), std::stoll(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw usage_error("cannot parse level '" + s + "' (expected M,N)");
    }
}

const char* kind_name(FieldLabel::Kind k)
{
    return k == FieldLabel::Rational ? "rational" : "ringclass";
}

json fiber_json(i64 delta, i64 M, i64 N, const std::string& curve)
{
    Discriminant d = split_discriminant(delta);
    json j;
    j["delta"] = delta;
    j["delta_k"] = d.fundamental;
    j["conductor"] = d.conductor;
    j["level"] = {M, N};
    j["curve"] = curve;
    if (curve == "x0") {
        Spectrum s = x0_general(delta, M, N);
        j["fiber"] = json::array();
        i64 sum = 0;
        for (const auto& [lab, m] : s.entries) {
            j["fiber"].push_back({{"kind", kind_name(lab.kind)},
                                  {"conductor", lab.conductor},
                                  {"multiplicity", m},
                                  {"degree_over_q", abs_degree(lab, d.fundamental)}});
            sum += m * rel_degree(lab, d.conductor, d.fundamental);
        }
        j["degree_sum"] = sum;
        j["degree_expected"] = checked_i64(chk_mul(chk_mul(M, euler_phi(M)), psi_degree(N)));
    } else {
        auto degs = x1_degrees(delta, M, N);
        j["degrees"] = json::array();
        i64 sum = 0;
        for (auto [deg, m] : degs) {
            j["degrees"].push_back({{"degree", deg}, {"multiplicity", m}});
            sum += deg * m;
        }
        j["degree_sum"] = sum;
        i64 factor = N >= 3 ? euler_phi(N) / 2 : 1;
        j["degree_expected"] = checked_i64(chk_mul(
            chk_mul(chk_mul(M, euler_phi(M)), psi_degree(N)),
            chk_mul(factor, class_number_via_dee(d.conductor, d.fundamental))));
    }
    return j;
}

void print_fiber_text(std::ostream& os, const json& j)
{
    os << "Delta = " << j["delta"].get<i64>() << " = " << j["conductor"].get<i64>()
       << "^2 * " << j["delta_k"].get<i64>() << ", X_" << (j["curve"] == "x0" ? "0" : "1")
       << "(" << j["level"][0].get<i64>() << "," << j["level"][1].get<i64>() << ")\n";
    if (j.contains("fiber")) {
        for (const auto& e : j["fiber"]) {
            os << "  " << (e["kind"] == "rational" ? "Q(" : "K(")
               << e["conductor"].get<i64>() << ")  multiplicity " << std::setw(4)
               << e["multiplicity"].get<i64>() << "  degree " << e["degree_over_q"].get<i64>()
               << "\n";
        }
    } else {
        for (const auto& e : j["degrees"])
            os << "  degree " << e["degree"].get<i64>() << "  multiplicity "
               << e["multiplicity"].get<i64>() << "\n";
    }
    os << "  degree sum " << j["degree_sum"].get<i64>() << " (expected "
       << j["degree_expected"].get<i64>() << ")\n";
}

int run_check(const std::string& suite, std::ostream& os)
{
    std::vector<SuiteReport> reports;
    if (suite == "appendix" || suite == "all")
        reports.push_back(check_appendix_fixtures());
    if (suite == "oracle" || suite == "all")
        reports.push_back(check_oracle_equivalence());
    if (suite == "invariants" || suite == "all")
        reports.push_back(check_invariants());
    if (reports.empty())
        throw usage_error("unknown suite '" + suite + "'");
    bool ok = true;
    for (const auto& r : reports) {
        for (const auto& d : r.disputed)
            os << "[disputed] " << d << "\n";
        for (const auto& f : r.failures)
            os << "[fail] " << f << "\n";
        os << (r.ok() ? "PASS" : "FAIL") << " suite " << r.name << ": " << r.checked
           << " checks, " << r.failures.size() << " failures, " << r.disputed.size()
           << " disputed\n";
        ok = ok && r.ok();
    }
    return ok ? kExitOk : kExitInternal;
}

int run_command(const std::vector<std::string>& args, std::ostream& os)
{
    CLI::App app{"cmfiber"};
    app.require_subcommand(0, 1);

    // fiber
    auto* fiber = app.add_subcommand("fiber", "Delta-CM fiber of X_0(M,N) or X_1(M,N)");
    i64 fiber_delta = 0;
    std::string fiber_level, fiber_curve = "x0", fiber_format = "json";
    fiber->add_option("--delta", fiber_delta, "imaginary quadratic discriminant")->required();
    fiber->add_option("--level", fiber_level, "level M,N with M | N")->required();
    fiber->add_option("--curve", fiber_curve, "x0 or x1")
        ->check(CLI::IsMember({"x0", "x1"}));
    fiber->add_option("--format", fiber_format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));

    // primitive
    auto* prim = app.add_subcommand("primitive", "primitive residue fields and degrees");
    i64 prim_delta = 0;
    std::string prim_level, prim_format = "json";
    prim->add_option("--delta", prim_delta)->required();
    prim->add_option("--level", prim_level)->required();
    prim->add_option("--format", prim_format)->check(CLI::IsMember({"json", "text"}));

    // volcano
    auto* volc = app.add_subcommand("volcano", "truncated l-isogeny volcano export");
    i64 v_dk = 0, v_ell = 0, v_f0 = 1;
    int v_depth = 0;
    std::string v_format = "dot";
    volc->add_option("--dk", v_dk, "fundamental discriminant")->required();
    volc->add_option("--ell", v_ell, "prime")->required();
    volc->add_option("--f0", v_f0, "prime-to-l conductor");
    volc->add_option("--depth", v_depth)->required();
    volc->add_option("--format", v_format)->check(CLI::IsMember({"dot", "json"}));

    // oddcm
    auto* odd = app.add_subcommand("oddcm", "odd-degree CM classification");
    std::string odd_level, odd_curve = "x0";
    i64 odd_delta = 0;
    odd->add_option("--level", odd_level)->required();
    auto* odd_delta_opt = odd->add_option("--delta", odd_delta);
    odd->add_option("--curve", odd_curve)->check(CLI::IsMember({"x0", "x1"}));

    // kwon
    auto* kw = app.add_subcommand("kwon", "Kwon m_l and K(f)-rational bounds");
    i64 kw_delta = 0, kw_ell = 0;
    kw->add_option("--delta", kw_delta)->required();
    auto* kw_ell_opt = kw->add_option("--ell", kw_ell);

    // check
    auto* chk = app.add_subcommand("check", "run the self-check suites");
    std::string chk_suite = "all";
    chk->add_option("--suite", chk_suite, "appendix, oracle, invariants, or all");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            os << app.help();
            return kExitOk;
        }
        throw usage_error(e.what());
    }

    auto require_divides = [](i64 M, i64 N) {
        if (M < 1 || N < 1 || N % M != 0)
            throw domain_error("level must satisfy M | N");
    };

    if (fiber->parsed()) {
        auto [M, N] = parse_level(fiber_level);
        require_divides(M, N);
        json j = fiber_json(fiber_delta, M, N, fiber_curve);
        if (fiber_format == "json")
            os << j.dump(2) << "\n";
        else
            print_fiber_text(os, j);
        return kExitOk;
    }
    if (prim->parsed()) {
        auto [M, N] = parse_level(prim_level);
        require_divides(M, N);
        PrimitiveReport r = primitive_compile(prim_delta, M, N);
        Discriminant d = split_discriminant(prim_delta);
        json j;
        j["delta"] = prim_delta;
        j["delta_k"] = d.fundamental;
        j["conductor"] = d.conductor;
        j["level"] = {M, N};
        j["fields"] = json::array();
        for (const auto& f : r.fields)
            j["fields"].push_back({{"kind", kind_name(f.kind)},
                                   {"conductor", f.conductor},
                                   {"degree_over_q", abs_degree(f, d.fundamental)}});
        j["degrees"] = r.degrees;
        j["dreaded"] = r.dreaded;
        j["x1_degrees"] = primitive_x1(prim_delta, M, N);
        if (prim_format == "json") {
            os << j.dump(2) << "\n";
        } else {
            os << "primitive residue fields of X_0(" << M << "," << N << ") over Delta="
               << prim_delta << ":";
            for (const auto& f : r.fields)
                os << " " << f.str();
            os << "\n  primitive degrees:";
            for (i64 deg : r.degrees)
                os << " " << deg;
            if (r.dreaded)
                os << "  (dreaded: two primitive degrees)";
            os << "\n";
        }
        return kExitOk;
    }
    if (volc->parsed()) {
        Volcano V = build_volcano({v_dk, v_ell, v_f0, v_depth});
        os << export_graph(V, v_format == "dot" ? GraphFormat::Dot : GraphFormat::Json);
        return kExitOk;
    }
    if (odd->parsed()) {
        auto [M, N] = parse_level(odd_level);
        require_divides(M, N);
        CurveFamily fam = odd_curve == "x1" ? CurveFamily::X1 : CurveFamily::X0;
        OddCmReport rep = d_odd_cm(M, N, fam);
        json j;
        j["level"] = {M, N};
        j["curve"] = odd_curve;
        if (odd_delta_opt->count() > 0) {
            j["delta"] = odd_delta;
            auto deg = primitive_odd_degree(odd_delta, M, N);
            j["exists"] = deg.has_value();
            j["primitive_odd_degree"] = deg ? json(*deg) : json(nullptr);
            if (deg && fam == CurveFamily::X1 && N >= 3)
                j["primitive_odd_degree"] =
                    checked_i64(chk_mul(*deg, euler_phi(N) / 2));
        }
        j["d_odd_cm"] = rep.exists ? json(*rep.d_odd_cm) : json(nullptr);
        j["corresponding_discriminants"] = rep.corresponding_discriminants;
        os << j.dump(2) << "\n";
        return kExitOk;
    }
    if (kw->parsed()) {
        Discriminant d = split_discriminant(kw_delta);
        json j;
        j["delta"] = kw_delta;
        j["delta_k"] = d.fundamental;
        j["conductor"] = d.conductor;
        json m = json::object();
        for (auto [p, e] : factorize(2 * -kw_delta)) {
            i64 v = kwon_m(kw_delta, p);
            if (v > 0)
                m[std::to_string(p)] = v;
        }
        j["m"] = m;
        if (kw_ell_opt->count() > 0) {
            j["ell"] = kw_ell;
            j["m_ell"] = kwon_m(kw_delta, kw_ell);
            auto kr = k_rational_max(kw_delta, kw_ell);
            j["k_rational_max"] = kr ? json(*kr) : json("unbounded");
        }
        os << j.dump(2) << "\n";
        return kExitOk;
    }
    if (chk->parsed())
        return run_check(chk_suite, os);
    throw usage_error("no subcommand given (try --help)");
}

int run_with_exit_codes(const std::vector<std::string>& args, std::ostream& os)
{
    try {
        return run_command(args, os);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

std::vector<std::string> tokenize(const std::string& line)
{
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.size() >= 2 && args[0] == "--batch") {
        std::ifstream in(args[1]);
        if (!in) {
            std::cerr << "usage error: cannot open batch file " << args[1] << "\n";
            return kExitUsage;
        }
        int rc = kExitOk;
        std::string line;
        while (std::getline(in, line)) {
            auto toks = tokenize(line);
            if (toks.empty() || toks[0][0] == '#')
                continue;
            int one = run_with_exit_codes(toks, std::cout);
            if (rc == kExitOk)
                rc = one;
        }
        return rc;
    }
    return run_with_exit_codes(args, std::cout);
}
