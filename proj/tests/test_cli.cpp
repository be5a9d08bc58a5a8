// End-to-end tests of the command-line binary: exit codes, output shapes,
// JSON report keys, limit overrides, and byte-level determinism.
#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

using nlohmann::json;

struct CmdResult {
    int code;
    std::string out;
};

// Runs the binary under test through the shell, capturing stdout.
CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const char* bin = std::getenv("TEAMLTL_CLI_BIN");
    REQUIRE(bin != nullptr);
    std::string cmd = env_prefix + "'" + bin + "' " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), out};
}

// Input files live in a per-process scratch directory.
std::string fixture(const std::string& name, const std::string& content) {
    static std::filesystem::path dir = [] {
        std::filesystem::path d = std::filesystem::temp_directory_path() /
                                  ("teamltl_cli_" + std::to_string(getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    std::filesystem::path p = dir / name;
    std::ofstream(p) << content;
    return p.string();
}

const std::string kSelfLoopP = "states: s0\ninit: s0\nlabel s0 {p}\nedge s0 s0\n";
const std::string kBranching =
    "states: a b\ninit: a\nlabel a {p}\nlabel b {q}\nedge a a\nedge a b\nedge b b\n";

}  // namespace

TEST_CASE("cli: usage and parse failures exit with code 2") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("bogus").code == 2);
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("eval -f 'p'").code == 2);  // missing --semantics/--team
    std::string team = fixture("tiny.team", "trace t = / {p}\n");
    CHECK(run_cli("eval --semantics sloppy --team '" + team + "' -f 'p'").code == 2);
    CHECK(run_cli("eval --semantics lax --team '" + team + "' -f 'p &'").code == 2);
    CHECK(run_cli("eval --semantics lax --team '/no/such/file' -f 'p'").code == 2);
    CHECK(run_cli("eval --semantics lax --team '" + team + "' -f 'p' --audit-bound 0").code == 2);
    CHECK(run_cli("dnf -f '~ p'").code == 2);  // outside the `or` fragment
    std::string sink = fixture("sink.kripke",
                               "states: s0 s1\ninit: s0\nlabel s0 {p}\nlabel s1 {q}\n"
                               "edge s0 s1\n");
    CHECK(run_cli("mc --kripke '" + sink + "' -f 'G p'").code == 2);  // s1 has no edges
}

TEST_CASE("cli: evaluation verdicts map to exit codes") {
    std::string single = fixture("ex1.team", "trace t = {p} / {q}\n");
    CmdResult falsy = run_cli("eval --semantics lax --team '" + single + "' -f 'G (p or q)'");
    CHECK(falsy.code == 1);
    CHECK(falsy.out == "false\n");

    std::string pair = fixture("pair.team", "trace t = / {p}\ntrace u = / {q}\n");
    CmdResult truthy = run_cli("eval --semantics lax --team '" + pair + "' -f 'G (p | q)'");
    CHECK(truthy.code == 0);
    CHECK(truthy.out == "true\n");
    CHECK(run_cli("eval --semantics lax --team '" + pair + "' -f 'G (p or q)'").code == 1);

    std::string multi = fixture("multi.team", "trace t = / {p}\nmulti t x2\n");
    CmdResult strict = run_cli("eval --semantics strict --team '" + multi + "' -f 'p'");
    CHECK(strict.code == 0);
    CHECK(strict.out == "true\n");

    CmdResult wide =
        run_cli("eval --semantics lax --team '" + pair + "' -f 'G (p | q)' --audit-bound 2");
    CHECK(wide.code == 0);

    CmdResult js = run_cli("eval --semantics lax --team '" + single + "' -f 'G (p or q)' --json");
    CHECK(js.code == 1);
    json v = json::parse(js.out);
    CHECK(v["verdict"] == false);
    CHECK(v["witness"].is_null());
    CHECK(v["disjunct_index"].is_null());
    CHECK(v["timings"]["total_ms"].is_number());
}

TEST_CASE("cli: disjunct expansion output") {
    CmdResult r = run_cli("dnf -f 'G (p or q)'");
    CHECK(r.code == 0);
    CHECK(r.out == "disjuncts: 2\n[0] G p\n[1] G q\n");

    CmdResult deduped = run_cli("dnf --dedupe -f 'p or p'");
    CHECK(deduped.code == 0);
    CHECK(deduped.out == "disjuncts: 1\n[0] p\n");

    CmdResult js = run_cli("dnf -f 'G (p or q)' --json");
    CHECK(js.code == 0);
    json v = json::parse(js.out);
    CHECK(v["disjuncts"] == json::array({"G p", "G q"}));
}

TEST_CASE("cli: quasi-flat and classify output") {
    CmdResult qf = run_cli("quasiflat -f '~ p'");
    CHECK(qf.code == 0);
    CHECK(qf.out == "disjuncts: 1\n[0] alpha: top\n[0] beta[0]: !p\n");

    CmdResult cl = run_cli("classify -f 'G (p or q)'");
    CHECK(cl.code == 0);
    CHECK(cl.out ==
          "is_ltl: false\nis_left_flat: false\nis_left_dc: true\nbor_count: 1\n"
          "has_bneg: false\nhas_atoms: false\nsize: 4\n");
}

TEST_CASE("cli: model checking with disjunct reporting") {
    std::string loop = fixture("selfloop.kripke", kSelfLoopP);
    CmdResult r = run_cli("mc --kripke '" + loop + "' -f 'G p or G q' --mode dnf");
    CHECK(r.code == 0);
    CHECK(r.out.find("verdict: holds") != std::string::npos);
    CHECK(r.out.find("disjunct_index: 0") != std::string::npos);

    CmdResult js = run_cli("mc --kripke '" + loop + "' -f 'G p or G q' --mode dnf --json");
    CHECK(js.code == 0);
    json v = json::parse(js.out);
    CHECK(v["verdict"] == true);
    CHECK(v["disjunct_index"] == 0);
    CHECK(v.contains("witness"));
    CHECK(v["timings"]["total_ms"].is_number());

    CmdResult jobs = run_cli("mc --kripke '" + loop + "' -f 'G p or G q' --mode dnf --jobs 2");
    CHECK(jobs.code == 0);
    CHECK(jobs.out.find("disjunct_index: 0") != std::string::npos);

    std::string branch = fixture("branch.kripke", kBranching);
    CmdResult fails = run_cli("mc --kripke '" + branch + "' -f 'G p' --mode ltl");
    CHECK(fails.code == 1);
    CHECK(fails.out.find("verdict: fails") != std::string::npos);
    CHECK(fails.out.find("witness: ") != std::string::npos);

    CmdResult second = run_cli("mc --kripke '" + branch + "' -f 'G p or (G (p | q))' --mode dnf");
    CHECK(second.code == 0);
    CHECK(second.out.find("disjunct_index: 1") != std::string::npos);
}

TEST_CASE("cli: satisfiability with witness teams") {
    CmdResult sat = run_cli("sat -f 'p & X !p' --mode dnf");
    CHECK(sat.code == 0);
    CHECK(sat.out.find("verdict: holds") != std::string::npos);
    CHECK(sat.out.find("witness team:") != std::string::npos);

    CmdResult js = run_cli("sat -f 'p & X !p' --mode dnf --json");
    json v = json::parse(js.out);
    CHECK(v["verdict"] == true);
    CHECK(v["witness"].is_array());
    CHECK(!v["witness"].empty());

    CHECK(run_cli("sat -f 'p & !p' --mode dnf").code == 1);
    CHECK(run_cli("sat -f 'p & !p' --mode ltl").code == 1);
}

TEST_CASE("cli: fragment translations") {
    CmdResult to_ltl = run_cli("translate --direction to-ltl -f 'GA p'");
    CHECK(to_ltl.code == 0);
    CHECK(to_ltl.out == "G p\n");

    CmdResult to_ctl = run_cli("translate --direction to-ctl -f 'q M p'");
    CHECK(to_ctl.code == 0);
    CHECK(to_ctl.out == "q ME p\n");

    CHECK(run_cli("translate --direction to-ltl -f 'p UE q'").code == 2);
    CHECK(run_cli("translate --direction sideways -f 'G p'").code == 2);
}

TEST_CASE("cli: one-step evaluation subcommand") {
    std::string catchup =
        fixture("catchup.team", "trace a = {p} / {q}\ntrace b = {p} {p} / {q}\n");
    CmdResult r = run_cli("tefeval --team '" + catchup + "' -f 'p UE q'");
    CHECK(r.code == 0);
    CHECK(r.out == "true\n");
    CHECK(run_cli("tefeval --team '" + catchup + "' -f 'GA p'").code == 1);
    CHECK(run_cli("tefeval --team '" + catchup + "' -f 'p U q'").code == 2);
}

TEST_CASE("cli: limit overrides via the environment") {
    std::string pair = fixture("pair2.team", "trace t = / {p}\ntrace u = / {q}\n");
    CHECK(run_cli("eval --semantics lax --team '" + pair + "' -f 'p | q'",
                  "TEAMLTL_LIMITS='traces=1' ")
              .code == 3);
    CHECK(run_cli("eval --semantics lax --team '" + pair + "' -f 'p | q'",
                  "TEAMLTL_LIMITS='cheese=1' ")
              .code == 2);

    std::string wide = fixture("wide.team",
                               "trace w = {p} {p} {p} {p} {p} {p} {p} {p} {p} / {q}\n");
    CHECK(run_cli("eval --semantics lax --team '" + wide + "' -f 'top U q'").code == 3);
    CHECK(run_cli("eval --semantics lax --team '" + wide + "' -f 'top U q'",
                  "TEAMLTL_LIMITS='pos=32' ")
              .code == 0);
}

TEST_CASE("cli: output is deterministic across runs") {
    CmdResult a = run_cli("dnf -f 'G (p or q) & (p or X q)'");
    CmdResult b = run_cli("dnf -f 'G (p or q) & (p or X q)'");
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);

    std::string loop = fixture("selfloop2.kripke", kSelfLoopP);
    std::string cmd = "mc --kripke '" + loop + "' -f 'G p or G q' --mode dnf --json";
    json v1 = json::parse(run_cli(cmd).out);
    json v2 = json::parse(run_cli(cmd).out);
    v1.erase("timings");
    v2.erase("timings");
    CHECK(v1 == v2);
}
