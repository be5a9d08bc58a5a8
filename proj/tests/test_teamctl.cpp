// One-step operators over configuration graphs, and the syntactic
// translation between the two operator families.
#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "teamltl/teamltl.hpp"

using namespace teamltl;

namespace {

Step step(std::initializer_list<const char*> props) {
    Step s;
    for (const char* p : props) s.insert(p);
    return s;
}

Multiteam mt2(const LassoTrace& a, const LassoTrace& b) {
    return {MultiteamEntry{"1", a}, MultiteamEntry{"2", b}};
}

// parse-and-render, to compare formulas modulo parenthesization
std::string norm(const std::string& s) { return render(parse_formula(s)); }

}  // namespace

TEST_CASE("translation to the plain temporal operators") {
    CHECK(render(translate_to_ltl(parse_formula("GA p"))) == "G p");
    CHECK(render(translate_to_ltl(parse_formula("q ME p"))) == "p U (p & q)");
    CHECK(render(translate_to_ltl(parse_formula("X (p or q)"))) == "X (p or q)");
    CHECK(render(translate_to_ltl(parse_formula("(GA p) or (q ME p)"))) ==
          norm("(G p) or (p U (p & q))"));

    // raw one-step until is outside the translatable fragment
    CHECK_THROWS_AS(translate_to_ltl(parse_formula("p UE q")), FragmentViolation);
    // a disjunction under GA makes the image non-left-flat
    CHECK_THROWS_AS(translate_to_ltl(parse_formula("GA (p or q)")), FragmentViolation);
    CHECK_THROWS_AS(translate_to_ltl(parse_formula("GA (p or (q ME p))")), FragmentViolation);
    CHECK_THROWS_AS(translate_to_ltl(parse_formula("~ p")), FragmentViolation);
}

TEST_CASE("translation to the one-step operators") {
    CHECK(render(translate_to_ctl(parse_formula("G p"))) == "GA p");
    CHECK(render(translate_to_ctl(parse_formula("q M p"))) == "q ME p");
    CHECK(render(translate_to_ctl(parse_formula("X (p or q)"))) == "X (p or q)");
    CHECK_THROWS_AS(translate_to_ctl(parse_formula("p U q")), FragmentViolation);
    CHECK_THROWS_AS(translate_to_ctl(parse_formula("G (p or q)")), FragmentViolation);
}

TEST_CASE("one-step evaluation: documented examples") {
    LassoTrace allp({}, {step({"p"})});
    CHECK(eval_tef(mt2(allp, allp), parse_formula("GA p")));

    // freeze trace 1 while trace 2 catches up; after two more joint steps
    // both traces read {q}
    LassoTrace t1({step({"p"})}, {step({"q"})});
    LassoTrace t2({step({"p"}), step({"p"})}, {step({"q"})});
    CHECK(eval_tef(mt2(t1, t2), parse_formula("p UE q")));

    Multiteam single = {MultiteamEntry{"1", t1}};
    CHECK(eval_tef(single, parse_formula("XA q")));
}

TEST_CASE("one-step evaluation: more operator shapes") {
    LassoTrace pq({step({"p"})}, {step({"q"})});
    LassoTrace allq({}, {step({"q"})});
    Multiteam T = mt2(pq, allq);

    CHECK(eval_tef(T, parse_formula("XE q")));        // advance only the first entry
    CHECK_FALSE(eval_tef(T, parse_formula("XA p")));  // that same step kills p
    CHECK(eval_tef(T, parse_formula("GE q | p")));    // split: {allq} always q, {pq} now p
    CHECK(eval_tef(T, parse_formula("GE (q | p)")));  // split point-wise along the run
    CHECK_FALSE(eval_tef(T, parse_formula("GA q")));  // initially p on the first entry
    CHECK_FALSE(eval_tef(T, parse_formula("GE q")));  // already fails at the start
    CHECK(eval_tef(T, parse_formula("(p | q) UE q")));
    CHECK(eval_tef(mt2(allq, allq), parse_formula("GA q")));

    // the initial configuration satisfies neither p nor q as a team, so no
    // schedule can even start a p-until-q run
    CHECK_FALSE(eval_tef(T, parse_formula("p UA q")));
    CHECK_FALSE(eval_tef(T, parse_formula("p UE q")));

    // the universal until must survive desynchronizing schedules: advancing
    // only one copy of {p}{q}... yields the mixed team {{q}..., {p}{q}...}
    // which satisfies neither argument
    CHECK_FALSE(eval_tef(mt2(pq, pq), parse_formula("p UA q")));
    Multiteam single = {MultiteamEntry{"1", pq}};
    CHECK(eval_tef(single, parse_formula("p UA q")));

    CHECK_THROWS_AS(eval_tef(T, parse_formula("p U q")), FragmentViolation);
    CHECK_THROWS_AS(eval_tef(T, parse_formula("~ p")), FragmentViolation);
}

TEST_CASE("one-step evaluation on the empty multiteam") {
    Multiteam none;
    CHECK(eval_tef(none, parse_formula("p")));
    CHECK(eval_tef(none, parse_formula("GA p")));
    CHECK(eval_tef(none, parse_formula("p UA q")));
    CHECK(eval_tef(none, parse_formula("p UE q")));   // the empty team is the witness
    CHECK_FALSE(eval_tef(none, parse_formula("XE p")));  // no nonempty subset to advance
    CHECK(eval_tef(none, parse_formula("XA p")));
    CHECK_FALSE(eval_tef(none, parse_formula("GE p")));  // no infinite schedule exists
}

TEST_CASE("local clocks: stepwise strictly monotone prefixes = graph walks") {
    // tau(0) = all zeros and each tick advances a nonempty subset of entries
    // by one.  Projecting every tick to canonical positions must give exactly
    // the walks of the configuration graph, i.e. wrapping commutes with
    // advancing: canonical(canonical(p) + 1) == canonical(p + 1).
    std::vector<std::string> props = {"p", "q"};
    oracle::Rng rng(61);
    for (int round = 0; round < 12; ++round) {
        std::vector<LassoTrace> traces = oracle::gen_traces(rng, 2, 3, props);
        const std::size_t n = traces.size();
        auto canon = [&](std::vector<std::size_t> pos) {
            for (std::size_t i = 0; i < n; ++i) pos[i] = traces[i].canonical_position(pos[i]);
            return pos;
        };

        for (std::size_t horizon = 0; horizon <= 4; ++horizon) {
            using Run = std::vector<std::vector<std::size_t>>;
            std::set<Run> clock_runs, walks;

            std::function<void(Run&, bool)> extend = [&](Run& run, bool canonical) {
                if (run.size() == horizon + 1) {
                    if (canonical) {
                        walks.insert(run);
                    } else {
                        Run c;
                        for (const auto& pos : run) c.push_back(canon(pos));
                        clock_runs.insert(c);
                    }
                    return;
                }
                for (std::uint64_t m = 1; m < (std::uint64_t(1) << n); ++m) {
                    std::vector<std::size_t> next = run.back();
                    for (std::size_t i = 0; i < n; ++i)
                        if ((m >> i) & 1) ++next[i];
                    run.push_back(canonical ? canon(next) : next);
                    extend(run, canonical);
                    run.pop_back();
                }
            };

            Run raw = {std::vector<std::size_t>(n, 0)};
            extend(raw, false);
            Run canonical_run = {canon(std::vector<std::size_t>(n, 0))};
            extend(canonical_run, true);

            CAPTURE(round, horizon);
            CHECK(clock_runs == walks);
        }
    }
}

TEST_CASE("flat argument: GA p equals the all-suffixes check") {
    oracle::Rng rng(62);
    std::vector<std::string> props = {"p", "q"};
    Formula gap = parse_formula("GA p");
    for (int i = 0; i < 40; ++i) {
        std::vector<LassoTrace> traces = oracle::gen_traces(rng, 2, 3, props);
        bool all = true;
        for (const LassoTrace& t : traces)
            for (std::size_t v = 0; v < t.num_positions(); ++v)
                all = all && t.step_at(v).count("p") != 0;
        CAPTURE(i);
        CHECK(eval_tef(oracle::to_multiteam(traces), gap) == all);
    }
}

TEST_CASE("translated formulas agree with the multiset semantics") {
    oracle::Rng rng(63);
    std::vector<std::string> props = {"p", "q"};
    for (int i = 0; i < 60; ++i) {
        Formula f = oracle::gen_tef(rng, 3, props, true);
        Formula image = translate_to_ltl(f);
        std::vector<LassoTrace> entries = oracle::gen_traces(rng, 2, 3, props);
        Multiteam T = oracle::to_multiteam(entries);
        CAPTURE(render(f), render(image));
        CHECK(eval_tef(T, f) == eval_strict(T, image));
        CHECK(eval_strict(T, image) == eval_lax(support(T), image));
    }
}

TEST_CASE("configuration space guard") {
    std::vector<Step> longpre(7, step({"p"}));
    LassoTrace longtrace(longpre, {step({"q"})});
    Multiteam big;
    for (int i = 0; i < 7; ++i)
        big.push_back(MultiteamEntry{"e" + std::to_string(i), longtrace});
    EvalOptions opts;
    opts.limits.traces = 8;
    CHECK_THROWS_AS(eval_tef(big, parse_formula("GA p"), opts), ResourceLimitError);
}
