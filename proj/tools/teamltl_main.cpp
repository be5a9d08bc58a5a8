// ============================================================================
// teamltl -- command-line front end
//
// Subcommands:
//   classify   print fragment information for a formula
//   dnf        expand `or` into explicit disjuncts
//   quasiflat  quasi-flat normal form (alpha plus existential parts)
//   eval       evaluate a formula on a team (lax) or multiteam (strict)
//   mc         model check a Kripke structure
//   sat        satisfiability with witness team
//   translate  swap between the G/M and GA/ME fragments
//   tefeval    evaluate a one-step (XE/XA/GE/GA/UE/UA) formula on a multiteam
//
// Exit codes: 0 verdict true/holds (or plain success), 1 verdict false/fails,
// 2 usage/parse/fragment error, 3 resource limit.  Output is deterministic;
// `--json` emits a stable JSON object (timing values vary, everything else is
// byte-identical across runs).
// ============================================================================
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "teamltl/teamltl.hpp"

namespace {

using nlohmann::json;
using namespace teamltl;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    std::chrono::duration<double, std::milli> d = std::chrono::steady_clock::now() - start;
    return d.count();
}

struct Options {
    std::string formula;
    std::string team_file;
    std::string kripke_file;
    std::string semantics;
    std::string mode = "dnf";
    std::string direction;
    std::size_t audit_bound = 1;
    unsigned jobs = 1;
    bool dedupe = false;
    bool as_json = false;
};

json witness_json(const Verdict& v) {
    if (v.witness_team) {
        json arr = json::array();
        for (const LassoTrace& t : *v.witness_team) arr.push_back(t.render());
        return arr;
    }
    if (v.witness) return v.witness->render();
    return nullptr;
}

// Shared report shape for all verdict-producing subcommands.
int report_verdict(const Verdict& v, const Options& opt, double ms) {
    if (opt.as_json) {
        json out;
        out["verdict"] = v.holds;
        out["witness"] = witness_json(v);
        out["disjunct_index"] =
            v.disjunct_index ? json(*v.disjunct_index) : json(nullptr);
        out["timings"] = {{"total_ms", ms}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "verdict: " << (v.holds ? "holds" : "fails") << "\n";
        if (v.disjunct_index) std::cout << "disjunct_index: " << *v.disjunct_index << "\n";
        if (v.witness_team) {
            std::cout << "witness team:\n";
            for (const LassoTrace& t : *v.witness_team) std::cout << "  " << t.render() << "\n";
        } else if (v.witness) {
            std::cout << "witness: " << v.witness->render() << "\n";
        }
    }
    return v.holds ? 0 : 1;
}

int report_bool(bool value, const Options& opt, double ms) {
    if (opt.as_json) {
        json out;
        out["verdict"] = value;
        out["witness"] = nullptr;
        out["disjunct_index"] = nullptr;
        out["timings"] = {{"total_ms", ms}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << (value ? "true" : "false") << "\n";
    }
    return value ? 0 : 1;
}

int run_classify(const Options& opt) {
    auto start = std::chrono::steady_clock::now();
    FragmentInfo info = classify(parse_formula(opt.formula));
    double ms = elapsed_ms(start);
    if (opt.as_json) {
        json out;
        out["fragment"] = {{"is_ltl", info.is_ltl},
                           {"is_left_flat", info.is_left_flat},
                           {"is_left_dc", info.is_left_dc},
                           {"bor_count", info.bor_count},
                           {"has_bneg", info.has_bneg},
                           {"has_atoms", info.has_atoms},
                           {"size", info.size}};
        out["timings"] = {{"total_ms", ms}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "is_ltl: " << (info.is_ltl ? "true" : "false") << "\n"
                  << "is_left_flat: " << (info.is_left_flat ? "true" : "false") << "\n"
                  << "is_left_dc: " << (info.is_left_dc ? "true" : "false") << "\n"
                  << "bor_count: " << info.bor_count << "\n"
                  << "has_bneg: " << (info.has_bneg ? "true" : "false") << "\n"
                  << "has_atoms: " << (info.has_atoms ? "true" : "false") << "\n"
                  << "size: " << info.size << "\n";
    }
    return 0;
}

int run_dnf(const Options& opt) {
    auto start = std::chrono::steady_clock::now();
    DnfForm form = to_dnf(parse_formula(opt.formula));
    if (opt.dedupe) form = dedupe(form);
    double ms = elapsed_ms(start);
    if (opt.as_json) {
        json arr = json::array();
        for (const Formula& d : form.disjuncts) arr.push_back(render(d));
        json out;
        out["disjuncts"] = arr;
        out["timings"] = {{"total_ms", ms}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "disjuncts: " << form.disjuncts.size() << "\n";
        for (std::size_t i = 0; i < form.disjuncts.size(); ++i)
            std::cout << "[" << i << "] " << render(form.disjuncts[i]) << "\n";
    }
    return 0;
}

int run_quasiflat(const Options& opt) {
    auto start = std::chrono::steady_clock::now();
    QuasiFlatForm form = to_quasiflat(parse_formula(opt.formula));
    double ms = elapsed_ms(start);
    if (opt.as_json) {
        json arr = json::array();
        for (const QuasiFlatDisjunct& d : form.disjuncts) {
            json betas = json::array();
            for (const Formula& b : d.betas) betas.push_back(render(b));
            arr.push_back({{"alpha", render(d.alpha)}, {"betas", betas}});
        }
        json out;
        out["disjuncts"] = arr;
        out["timings"] = {{"total_ms", ms}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "disjuncts: " << form.disjuncts.size() << "\n";
        for (std::size_t i = 0; i < form.disjuncts.size(); ++i) {
            std::cout << "[" << i << "] alpha: " << render(form.disjuncts[i].alpha) << "\n";
            const auto& betas = form.disjuncts[i].betas;
            for (std::size_t j = 0; j < betas.size(); ++j)
                std::cout << "[" << i << "] beta[" << j << "]: " << render(betas[j]) << "\n";
        }
    }
    return 0;
}

int run_eval(const Options& opt) {
    Formula f = parse_formula(opt.formula);
    TeamFile tf = parse_team_file(read_file(opt.team_file));
    EvalOptions eopts;
    eopts.limits = Limits::from_env();
    eopts.audit_bound = opt.audit_bound;
    auto start = std::chrono::steady_clock::now();
    bool value = false;
    if (opt.semantics == "lax")
        value = eval_lax(tf.team(), f, eopts);
    else
        value = eval_strict(tf.multiteam(), f, eopts);
    return report_bool(value, opt, elapsed_ms(start));
}

int run_mc(const Options& opt) {
    Formula f = parse_formula(opt.formula);
    KripkeStructure K = parse_kripke(read_file(opt.kripke_file));
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    if (opt.mode == "dnf")
        v = mc_team_dnf(K, f, nullptr, opt.jobs);
    else if (opt.mode == "quasiflat")
        v = mc_team_quasiflat(K, f);
    else
        v = mc_ltl(K, f);
    return report_verdict(v, opt, elapsed_ms(start));
}

int run_sat(const Options& opt) {
    Formula f = parse_formula(opt.formula);
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    if (opt.mode == "dnf")
        v = sat_team_dnf(f, nullptr, opt.jobs);
    else if (opt.mode == "quasiflat")
        v = sat_team_quasiflat(f);
    else
        v = sat_ltl(f);
    return report_verdict(v, opt, elapsed_ms(start));
}

int run_translate(const Options& opt) {
    Formula f = parse_formula(opt.formula);
    auto start = std::chrono::steady_clock::now();
    Formula out = opt.direction == "to-ltl" ? translate_to_ltl(f) : translate_to_ctl(f);
    double ms = elapsed_ms(start);
    if (opt.as_json) {
        json j;
        j["formula"] = render(out);
        j["timings"] = {{"total_ms", ms}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << render(out) << "\n";
    }
    return 0;
}

int run_tefeval(const Options& opt) {
    Formula f = parse_formula(opt.formula);
    TeamFile tf = parse_team_file(read_file(opt.team_file));
    EvalOptions eopts;
    eopts.limits = Limits::from_env();
    auto start = std::chrono::steady_clock::now();
    bool value = eval_tef(tf.multiteam(), f, eopts);
    return report_bool(value, opt, elapsed_ms(start));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"teamltl -- asynchronous team semantics toolkit"};
    app.require_subcommand(1);
    Options opt;

    auto add_formula = [&](CLI::App* cmd) {
        cmd->add_option("-f,--formula", opt.formula, "formula text")->required();
        cmd->add_flag("--json", opt.as_json, "emit a JSON report");
    };

    CLI::App* classify_cmd = app.add_subcommand("classify", "print fragment information");
    add_formula(classify_cmd);

    CLI::App* dnf_cmd = app.add_subcommand("dnf", "expand `or` into disjuncts");
    add_formula(dnf_cmd);
    dnf_cmd->add_flag("--dedupe", opt.dedupe, "drop duplicate disjuncts");

    CLI::App* qf_cmd = app.add_subcommand("quasiflat", "quasi-flat normal form");
    add_formula(qf_cmd);

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a formula on a team file");
    add_formula(eval_cmd);
    eval_cmd->add_option("--semantics", opt.semantics, "lax (set) or strict (multiset)")
        ->required()
        ->check(CLI::IsMember({"lax", "strict"}));
    eval_cmd->add_option("--team", opt.team_file, "team file")->required();
    eval_cmd->add_option("--audit-bound", opt.audit_bound, "extra loop rounds for U/G schedules")
        ->check(CLI::PositiveNumber);

    CLI::App* mc_cmd = app.add_subcommand("mc", "model check a Kripke structure");
    add_formula(mc_cmd);
    mc_cmd->add_option("--kripke", opt.kripke_file, "Kripke structure file")->required();
    mc_cmd->add_option("--mode", opt.mode, "dnf, quasiflat or ltl")
        ->check(CLI::IsMember({"dnf", "quasiflat", "ltl"}));
    mc_cmd->add_option("--jobs", opt.jobs, "parallel disjunct checks")->check(CLI::PositiveNumber);

    CLI::App* sat_cmd = app.add_subcommand("sat", "satisfiability with witness");
    add_formula(sat_cmd);
    sat_cmd->add_option("--mode", opt.mode, "dnf, quasiflat or ltl")
        ->check(CLI::IsMember({"dnf", "quasiflat", "ltl"}));
    sat_cmd->add_option("--jobs", opt.jobs, "parallel disjunct checks")->check(CLI::PositiveNumber);

    CLI::App* tr_cmd = app.add_subcommand("translate", "swap G/M and GA/ME fragments");
    add_formula(tr_cmd);
    tr_cmd->add_option("--direction", opt.direction, "to-ltl or to-ctl")
        ->required()
        ->check(CLI::IsMember({"to-ltl", "to-ctl"}));

    CLI::App* tef_cmd = app.add_subcommand("tefeval", "evaluate a one-step formula");
    add_formula(tef_cmd);
    tef_cmd->add_option("--team", opt.team_file, "team file (multiteam)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit cleanly, usage errors map to 2
    }

    try {
        if (classify_cmd->parsed()) return run_classify(opt);
        if (dnf_cmd->parsed()) return run_dnf(opt);
        if (qf_cmd->parsed()) return run_quasiflat(opt);
        if (eval_cmd->parsed()) return run_eval(opt);
        if (mc_cmd->parsed()) return run_mc(opt);
        if (sat_cmd->parsed()) return run_sat(opt);
        if (tr_cmd->parsed()) return run_translate(opt);
        if (tef_cmd->parsed()) return run_tefeval(opt);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const FragmentViolation& e) {
        std::cerr << "fragment error: " << e.what() << "\n";
        return 2;
    } catch (const NotLeftTotalError& e) {
        std::cerr << "kripke error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
