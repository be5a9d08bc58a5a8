// Formula AST: parsing, printing, desugaring, duals, fragment classification.
#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "teamltl/teamltl.hpp"

using namespace teamltl;

TEST_CASE("parsing the documented examples") {
    Formula f = parse_formula("G (p or q)");
    REQUIRE(f->kind == FKind::Globally);
    REQUIRE(f->left->kind == FKind::BOr);
    CHECK(f->left->left->kind == FKind::Prop);
    CHECK(f->left->left->name == "p");
    CHECK(f->left->right->name == "q");

    Formula g = parse_formula("p U (q & X !r)");
    REQUIRE(g->kind == FKind::Until);
    CHECK(g->left->name == "p");
    REQUIRE(g->right->kind == FKind::And);
    CHECK(g->right->left->name == "q");
    REQUIRE(g->right->right->kind == FKind::Next);
    CHECK(g->right->right->left->kind == FKind::NegProp);
    CHECK(g->right->right->left->name == "r");

    Formula h = parse_formula("inc(o1,c ; o1,!c)");
    REQUIRE(h->kind == FKind::IncAtom);
    REQUIRE(h->args.size() == 2);
    REQUIRE(h->args2.size() == 2);
    CHECK(h->args[0]->name == "o1");
    CHECK(h->args[1]->name == "c");
    CHECK(h->args2[0]->name == "o1");
    CHECK(h->args2[1]->kind == FKind::NegProp);
    CHECK(h->args2[1]->name == "c");
}

TEST_CASE("precedence: or < | < & < binary temporal < unary") {
    Formula f = parse_formula("a or b | c & X d");
    REQUIRE(f->kind == FKind::BOr);
    REQUIRE(f->right->kind == FKind::Or);
    REQUIRE(f->right->right->kind == FKind::And);
    REQUIRE(f->right->right->right->kind == FKind::Next);

    Formula g = parse_formula("G p U q");  // unary binds tightest: (G p) U q
    REQUIRE(g->kind == FKind::Until);
    CHECK(g->left->kind == FKind::Globally);
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_formula("p &"), ParseError);
    CHECK_THROWS_AS(parse_formula("(p"), ParseError);
    CHECK_THROWS_AS(parse_formula("p q"), ParseError);
    CHECK_THROWS_AS(parse_formula("inc(p ; q,r)"), ParseError);  // arity mismatch
    CHECK_THROWS_AS(parse_formula(""), ParseError);
    CHECK_THROWS_AS(parse_formula("U p"), ParseError);
}

TEST_CASE("parse(render(f)) is the identity on generated formulas") {
    oracle::Rng rng(11);
    std::vector<std::string> props = {"p", "q", "r"};
    int budget = 100;
    for (int i = 0; i < 120; ++i) {
        Formula f = oracle::gen_left_dc(rng, 4, props, budget);
        Formula g = parse_formula(render(f));
        CHECK(equal(f, g));
    }
    // also both team atoms and the sugared operators
    for (const char* text : {"dep(p, q, r)", "inc(p ; q)", "F p", "p W1 q", "p W2 q",
                             "p R1 q", "p R2 q", "q M p", "E (p U q)", "~ (p or q)",
                             "q ME p", "XE p", "XA p", "GE p", "GA p", "p UE q", "p UA q"}) {
        Formula f = parse_formula(text);
        CHECK(equal(f, parse_formula(render(f))));
    }
}

TEST_CASE("desugaring the derived operators") {
    CHECK(equal(desugar(parse_formula("F p")), parse_formula("top U p")));
    CHECK(equal(desugar(parse_formula("p W1 q")), parse_formula("G p | (p U q)")));
    CHECK(equal(desugar(parse_formula("p W2 q")), parse_formula("G p or (p U q)")));
    CHECK(equal(desugar(parse_formula("p R1 q")), parse_formula("q U ((q & p) | G q)")));
    CHECK(equal(desugar(parse_formula("p R2 q")), parse_formula("q U ((q & p) or G q)")));
    CHECK(equal(desugar(parse_formula("q M p")), parse_formula("p U (p & q)")));
}

TEST_CASE("desugar is idempotent") {
    oracle::Rng rng(12);
    std::vector<std::string> props = {"p", "q"};
    for (int i = 0; i < 80; ++i) {
        int budget = 3;
        Formula f = oracle::gen_left_dc(rng, 4, props, budget);
        Formula d = desugar(f);
        CHECK(equal(desugar(d), d));
    }
    Formula sugar = parse_formula("(q M p) W1 (F r)");
    CHECK(equal(desugar(desugar(sugar)), desugar(sugar)));
}

TEST_CASE("dual complements eval_ltl on every lasso") {
    // documented shapes first
    CHECK(render(dual(parse_formula("p"))) == "!p");
    CHECK(render(dual(parse_formula("G p"))) == "top U !p");
    CHECK(equal(dual(parse_formula("p U q")),
                parse_formula("G !q | (!q U (!q & !p))")));

    std::vector<LassoTrace> lassos = oracle::all_lassos(4, {"p", "q"});
    oracle::Rng rng(13);
    std::vector<std::string> props = {"p", "q"};
    for (int i = 0; i < 60; ++i) {
        Formula f = oracle::gen_ltl(rng, 3, props);
        Formula d = dual(f);
        Formula dd = dual(d);
        for (const LassoTrace& t : lassos) {
            bool direct = oracle::eval_ltl(t, f);
            CHECK(oracle::eval_ltl(t, d) == !direct);
            CHECK(eval_ltl(t, d) == !direct);
            CHECK(eval_ltl(t, dd) == direct);  // involution up to literal flips
        }
    }
    CHECK_THROWS_AS(dual(parse_formula("p or q")), FragmentViolation);
}

TEST_CASE("classify: documented examples") {
    FragmentInfo a = classify(parse_formula("G (p or q)"));
    CHECK_FALSE(a.is_ltl);
    CHECK_FALSE(a.is_left_flat);
    CHECK(a.is_left_dc);
    CHECK(a.bor_count == 1);
    CHECK_FALSE(a.has_bneg);
    CHECK_FALSE(a.has_atoms);

    FragmentInfo b = classify(parse_formula("(G p) or q"));
    CHECK(b.is_left_flat);
    CHECK_FALSE(b.is_ltl);

    FragmentInfo c = classify(parse_formula("G (E p1 or E p2)"));
    CHECK_FALSE(c.is_left_dc);

    FragmentInfo d = classify(parse_formula("p U (q & X !r)"));
    CHECK(d.is_ltl);
    CHECK(d.is_left_flat);
    CHECK(d.is_left_dc);
    CHECK(d.size == 6);

    FragmentInfo e = classify(parse_formula("~ p"));
    CHECK(e.has_bneg);
    CHECK_FALSE(e.is_ltl);
    FragmentInfo g = classify(parse_formula("dep(p, q)"));
    CHECK(g.has_atoms);
}

TEST_CASE("classify implications hold on generated formulas") {
    oracle::Rng rng(14);
    std::vector<std::string> props = {"p", "q"};
    for (int i = 0; i < 150; ++i) {
        int budget = 4;
        Formula f = oracle::gen_left_dc(rng, 4, props, budget);
        FragmentInfo info = classify(f);
        if (info.is_ltl) CHECK(info.is_left_flat);
        if (info.is_left_flat) CHECK(info.is_left_dc);
        CHECK(info.size >= 1);
        CHECK(info.size == node_count(desugar(f)));
    }
}

TEST_CASE("fragment membership helpers") {
    CHECK(is_ltl_formula(parse_formula("p U (q | G r)")));
    CHECK_FALSE(is_ltl_formula(parse_formula("p or q")));
    CHECK(is_bor_fragment(parse_formula("G (p or q)")));
    CHECK_FALSE(is_bor_fragment(parse_formula("~ p")));
    CHECK_FALSE(is_bor_fragment(parse_formula("E p")));
    CHECK(is_ltl_formula(parse_formula("F p")));   // sugar desugars to LTL
    CHECK(is_bor_fragment(parse_formula("p W2 q")));
}
