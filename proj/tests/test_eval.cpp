// Exact team evaluation: golden verdicts, oracle agreement, edge cases.
#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "teamltl/teamltl.hpp"

using namespace teamltl;

namespace {

Step step(std::initializer_list<const char*> props) {
    Step s;
    for (const char* p : props) s.insert(p);
    return s;
}

const LassoTrace kPQ({step({"p"})}, {step({"q"})});   // {p}{q}^w
const LassoTrace kAllP({}, {step({"p"})});            // {p}^w
const LassoTrace kAllQ({}, {step({"q"})});            // {q}^w

Multiteam copies(const LassoTrace& t, std::size_t n) {
    Multiteam mt;
    for (std::size_t i = 1; i <= n; ++i)
        mt.push_back(MultiteamEntry{"c" + std::to_string(i), t});
    return mt;
}

}  // namespace

TEST_CASE("golden verdicts: G(p or q) separates the semantics") {
    Formula f = parse_formula("G (p or q)");

    // set semantics
    CHECK_FALSE(eval_lax({kPQ}, f));
    CHECK_FALSE(eval_lax(make_team({kAllP, kAllQ}), f));
    CHECK(eval_lax({kAllP}, f));
    CHECK(eval_lax({kAllQ}, f));

    // multiset semantics: one copy differs from two copies of the same trace
    CHECK(eval_strict(copies(kPQ, 1), f));
    CHECK_FALSE(eval_strict(copies(kPQ, 2), f));
}

TEST_CASE("golden verdicts: G(E p1 or E p2) on the alternating trace") {
    LassoTrace alt({}, {step({"p1"}), step({"p2"})});  // ({p1}{p2})^w
    CHECK(eval_lax({alt}, parse_formula("G (E p1 or E p2)")));
    CHECK_FALSE(eval_lax({alt}, parse_formula("G E p1")));
    CHECK_FALSE(eval_lax({alt}, parse_formula("G E p2")));
}

TEST_CASE("single-trace evaluation") {
    CHECK(eval_ltl(kAllP, parse_formula("G p")));
    CHECK(eval_ltl(kPQ, parse_formula("p U q")));
    CHECK(eval_ltl(kPQ, parse_formula("G (p | q)")));
    CHECK_FALSE(eval_ltl(kPQ, parse_formula("G p")));
    CHECK_THROWS_AS(eval_ltl(kPQ, parse_formula("p or q")), FragmentViolation);
}

TEST_CASE("empty team satisfies everything without top-level ~") {
    for (const char* text : {"p", "bot", "G (p or q)", "p U (q & r)",
                             "dep(p, q)", "inc(p ; q)", "(p | q) & X r"}) {
        CAPTURE(text);
        CHECK(eval_lax({}, parse_formula(text)));
        CHECK(eval_strict({}, parse_formula(text)));
    }
    CHECK_FALSE(eval_lax({}, parse_formula("~ p")));
    CHECK_FALSE(eval_lax({}, parse_formula("~ (p or q)")));
    CHECK(eval_lax({}, parse_formula("~ ~ p")));
    // E is a plain existential: it needs a witness trace, so it is the one
    // connective (besides ~) that can fail on the empty team.
    CHECK_FALSE(eval_lax({}, parse_formula("E p")));
    CHECK_FALSE(eval_strict({}, parse_formula("E p")));
}

TEST_CASE("dependence and inclusion atoms") {
    // dep(p, q): the truth value of p determines the truth value of q (at time 0)
    LassoTrace p_q({}, {step({"p", "q"})});
    LassoTrace p_noq({}, {step({"p"})});
    LassoTrace nop_q({}, {step({"q"})});
    Formula dep = parse_formula("dep(p, q)");
    CHECK(eval_lax(make_team({p_q, nop_q}), dep));
    CHECK_FALSE(eval_lax(make_team({p_q, p_noq}), dep));

    // inc(p ; q): every trace's p-value is some trace's q-value
    Formula inc = parse_formula("inc(p ; q)");
    CHECK(eval_lax(make_team({p_q}), inc));
    CHECK_FALSE(eval_lax(make_team({p_noq}), inc));   // p true, q never true
    CHECK(eval_lax(make_team({p_noq, nop_q}), inc));  // q-values {true,false} cover

    // atom arguments must be plain LTL
    CHECK_THROWS_AS(eval_lax({kAllP}, binary(FKind::Until, prop("p"), dep_atom({bor(prop("p"), prop("q")), prop("q")}))),
                    FragmentViolation);
}

TEST_CASE("strict evaluation is flat for plain LTL formulas") {
    oracle::Rng rng(21);
    std::vector<std::string> props = {"p", "q"};
    for (int i = 0; i < 200; ++i) {
        Formula f = oracle::gen_ltl(rng, 3, props);
        std::vector<LassoTrace> entries = oracle::gen_traces(rng, 3, 3, props);
        bool all = true;
        for (const LassoTrace& t : entries) all = all && eval_ltl(t, f);
        CAPTURE(render(f));
        CHECK(eval_strict(oracle::to_multiteam(entries), f) == all);
    }
}

TEST_CASE("lax agreement with the reference semantics") {
    oracle::Rng rng(22);
    std::vector<std::string> props = {"p", "q"};
    for (int i = 0; i < 120; ++i) {
        int budget = 2;
        Formula f = oracle::gen_left_dc(rng, 3, props, budget);
        std::vector<LassoTrace> traces = oracle::gen_traces(rng, 2, 2, props);
        Team T = make_team(traces);
        CAPTURE(render(f), T.size() > 0 ? T[0].render() : "-",
                T.size() > 1 ? T[1].render() : "-");
        CHECK(eval_lax(T, f) == oracle::eval_lax(traces, f));
    }
}

TEST_CASE("lax agreement on formulas with E and atoms") {
    oracle::Rng rng(23);
    std::vector<std::string> props = {"p", "q"};
    for (int i = 0; i < 80; ++i) {
        Formula base = oracle::gen_ltl(rng, 2, props);
        Formula f;
        switch (i % 4) {
            case 0: f = land(exists(base), oracle::gen_ltl(rng, 2, props)); break;
            case 1: f = until(oracle::gen_ltl(rng, 2, props), exists(base)); break;
            case 2: f = land(dep_atom({prop("p"), prop("q")}), globally(exists(base))); break;
            default: f = bor(inc_atom({prop("p")}, {prop("q")}), exists(base)); break;
        }
        std::vector<LassoTrace> traces = oracle::gen_traces(rng, 2, 2, props);
        CAPTURE(render(f));
        CHECK(eval_lax(make_team(traces), f) == oracle::eval_lax(traces, f));
    }
}

TEST_CASE("strict agreement with the reference semantics") {
    oracle::Rng rng(24);
    std::vector<std::string> props = {"p", "q"};
    for (int i = 0; i < 120; ++i) {
        int budget = 2;
        Formula f = oracle::gen_left_dc(rng, 3, props, budget);
        std::vector<LassoTrace> entries = oracle::gen_traces(rng, 2, 2, props);
        CAPTURE(render(f));
        CHECK(eval_strict(oracle::to_multiteam(entries), f) == oracle::eval_strict(entries, f));
    }
}

TEST_CASE("until needs value choices beyond one loop unrolling") {
    // T = { {p}^w, {q}{r}^w } with (E p) U (p | r).  The only way to satisfy
    // the goal is to keep the {p}^w suffix available while {q}{r}^w advances,
    // i.e. {p}^w takes a nonzero value even though all its suffixes are the
    // trace itself; collapsing values into [0, positions) misses the verdict.
    LassoTrace allp({}, {step({"p"})});
    LassoTrace qr({step({"q"})}, {step({"r"})});
    Formula f = parse_formula("(E p) U (p | r)");
    CHECK(eval_lax(make_team({allp, qr}), f));
    CHECK(oracle::eval_lax({allp, qr}, f));
    // the goal team {p}^w suffixes alone cannot absorb {q}{r}^w's position 0
    CHECK_FALSE(eval_ltl(qr, parse_formula("p | r")));
}

TEST_CASE("suffix-set reachability is coarser than the choice ordering") {
    // For single-valued choices c, c' on T: if c' < c pointwise then the
    // suffix team of c is reachable from the suffix team of c' by a further
    // (set-valued) suffix step.  The converse direction fails; witness below.
    std::vector<std::string> props = {"p", "q"};
    oracle::Rng rng(25);

    auto suffix_team = [](const std::vector<LassoTrace>& T, const std::vector<std::size_t>& c) {
        std::vector<LassoTrace> out;
        for (std::size_t i = 0; i < T.size(); ++i) out.push_back(T[i].suffix(c[i]));
        return oracle::dedup(out);
    };
    // does some g on `from` (suffix values per member, set-valued) reach `to`?
    auto reachable = [](std::vector<LassoTrace> from, std::vector<LassoTrace> to) {
        std::vector<std::size_t> sizes;
        for (const LassoTrace& t : from) sizes.push_back(t.num_positions());
        bool found = !oracle::all_choices(sizes, [&](const std::vector<std::uint64_t>& g) {
            std::vector<LassoTrace> image;
            for (std::size_t i = 0; i < from.size(); ++i)
                for (std::size_t v : oracle::mask_values(g[i])) image.push_back(from[i].suffix(v));
            return oracle::dedup(image) != to;  // true = keep searching
        });
        return found;
    };

    for (int round = 0; round < 30; ++round) {
        std::vector<LassoTrace> T = oracle::gen_traces(rng, 2, 3, props);
        std::vector<std::size_t> limits;
        for (const LassoTrace& t : T) limits.push_back(t.num_positions());
        oracle::all_tuples(limits, [&](const std::vector<std::size_t>& c) {
            return oracle::all_tuples(limits, [&](const std::vector<std::size_t>& cp) {
                bool below = c != cp;
                for (std::size_t i = 0; i < T.size() && below; ++i)
                    below = cp[i] < c[i];
                if (below) {
                    CAPTURE(round);
                    CHECK(reachable(suffix_team(T, cp), suffix_team(T, c)));
                }
                return true;
            });
        });
    }

    // Converse failure, frozen: t1 = {p}^w, t2 = ({p}{q})^w, c' = (0,1), c = (0,0).
    // The c'-team { {p}^w, ({q}{p})^w } reaches the c-team { {p}^w, ({p}{q})^w }
    // by advancing the second suffix one step, yet c' is not below c (1 > 0).
    LassoTrace t1({}, {step({"p"})});
    LassoTrace t2({}, {step({"p"}), step({"q"})});
    CHECK(reachable(suffix_team({t1, t2}, {0, 1}), suffix_team({t1, t2}, {0, 0})));
    CHECK_FALSE(1 < 0);  // max(c'(t2)) < max(c(t2)) fails, so c' < c fails
}

TEST_CASE("resource guards reject oversized inputs with structured errors") {
    Formula f = parse_formula("G p");
    std::vector<LassoTrace> many;
    for (int i = 0; i < 7; ++i) {
        std::vector<Step> pre;
        for (int j = 0; j < i; ++j) pre.push_back(step({"p"}));
        pre.push_back(step({"q"}));
        many.push_back(LassoTrace(pre, {step({"p"})}));
    }
    CHECK_THROWS_AS(eval_lax(make_team(many), f), ResourceLimitError);  // > 6 traces

    std::vector<Step> longpre(9, step({"p"}));
    CHECK_THROWS_AS(eval_lax({LassoTrace(longpre, {step({"q"})})}, f),
                    ResourceLimitError);  // > 8 canonical positions

    Formula deep = prop("p");
    for (int i = 0; i < 12; ++i) deep = next(deep);
    CHECK_THROWS_AS(eval_lax({kAllP}, deep), ResourceLimitError);  // depth > 10

    // overrides lift the guard
    EvalOptions opts;
    opts.limits.pos = 16;
    CHECK(eval_lax({LassoTrace(longpre, {step({"q"})})}, parse_formula("top U q"), opts));
    CHECK_THROWS_AS(eval_lax({kAllP}, f, EvalOptions{.audit_bound = 0}), ResourceLimitError);
}

TEST_CASE("audit bound widening never changes verdicts") {
    oracle::Rng rng(26);
    std::vector<std::string> props = {"p", "q"};
    for (int i = 0; i < 60; ++i) {
        int budget = 2;
        Formula f = oracle::gen_left_dc(rng, 3, props, budget);
        std::vector<LassoTrace> traces = oracle::gen_traces(rng, 2, 3, props);
        Team T = make_team(traces);
        EvalOptions audit;
        audit.audit_bound = 2;
        CAPTURE(render(f));
        CHECK(eval_lax(T, f) == eval_lax(T, f, audit));
        CHECK(eval_strict(oracle::to_multiteam(traces), f) ==
              eval_strict(oracle::to_multiteam(traces), f, audit));
    }
}
