// ============================================================================
// model_check.hpp -- LTL model checking and satisfiability with witnesses
//
// mc_ltl decides whether every trace of a Kripke structure satisfies an LTL
// formula, by emptiness of the product of the structure with the automaton
// of the formula's dual; a nonempty product yields a counterexample lasso,
// which is re-verified against the single-trace evaluator before being
// returned.  sat_ltl decides satisfiability by automaton nonemptiness and
// returns a re-verified witness lasso.  Witness extraction uses shortest
// cycles (BFS) and the canonical lasso normalization, so diagnostics stay
// small and reproducible.
// ============================================================================
#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "buchi.hpp"
#include "errors.hpp"
#include "eval_ltl.hpp"
#include "formula.hpp"
#include "kripke.hpp"
#include "trace.hpp"

namespace teamltl {

struct Verdict {
    bool holds = false;
    std::optional<LassoTrace> witness;          // counterexample (MC) or model (SAT)
    std::optional<Team> witness_team;           // satisfying team (team-level SAT)
    std::optional<std::size_t> disjunct_index;  // which disjunct decided (team procedures)
};

// Every trace of K satisfies f?
inline Verdict mc_ltl(const KripkeStructure& K, const Formula& f) {
    Formula d = desugar(f);
    if (!is_ltl_formula(d))
        throw FragmentViolation("model checking needs a plain LTL formula");
    BuchiAutomaton ba = ltl_to_buchi(dual(d));

    std::size_t nq = ba.size();
    std::size_t n = K.states.size() * nq;
    std::vector<std::vector<int>> adj(n);
    std::vector<bool> accepting(n, false);
    auto node = [&](int w, int q) { return static_cast<std::size_t>(w) * nq + q; };
    for (int w = 0; w < static_cast<int>(K.states.size()); ++w)
        for (int q = 0; q < static_cast<int>(nq); ++q) {
            accepting[node(w, q)] = ba.accepting[static_cast<std::size_t>(q)];
            if (!ba.letter_ok(q, K.label(w))) continue;
            for (int w2 : K.succ[static_cast<std::size_t>(w)])
                for (int q2 : ba.adj[static_cast<std::size_t>(q)])
                    adj[node(w, q)].push_back(static_cast<int>(node(w2, q2)));
        }
    std::vector<int> initial;
    for (int q : ba.initial) initial.push_back(static_cast<int>(node(K.initial, q)));

    auto found = detail::LassoSearch{adj, accepting}.run(initial);
    if (!found) return Verdict{.holds = true};

    auto state_of = [&](int v) { return static_cast<int>(static_cast<std::size_t>(v) / nq); };
    std::vector<int> stem, cycle;
    for (int v : found->first) stem.push_back(state_of(v));
    for (int v : found->second) cycle.push_back(state_of(v));
    // sanity: the projected path must exist in K
    std::vector<int> walk = stem;
    walk.insert(walk.end(), cycle.begin(), cycle.end());
    walk.push_back(cycle.front());
    for (std::size_t i = 0; i + 1 < walk.size(); ++i)
        if (!K.has_edge(walk[i], walk[i + 1]))
            throw std::logic_error("internal error: counterexample path not generated by K");
    LassoTrace witness = trace_of_path(K, stem, cycle);
    if (eval_ltl(witness, d))
        throw std::logic_error("internal error: counterexample satisfies the formula");
    return Verdict{.holds = false, .witness = std::move(witness)};
}

// Some trace satisfies f?
inline Verdict sat_ltl(const Formula& f) {
    Formula d = desugar(f);
    if (!is_ltl_formula(d))
        throw FragmentViolation("satisfiability needs a plain LTL formula");
    BuchiAutomaton ba = ltl_to_buchi(d);
    auto found = detail::LassoSearch{ba.adj, ba.accepting}.run(ba.initial);
    if (!found) return Verdict{.holds = false};
    // each state consumes a letter when leaving; use its minimal letter
    std::vector<Step> prefix, loop;
    for (int q : found->first) prefix.push_back(ba.pos[static_cast<std::size_t>(q)]);
    for (int q : found->second) loop.push_back(ba.pos[static_cast<std::size_t>(q)]);
    LassoTrace witness(prefix, loop);
    if (!eval_ltl(witness, d))
        throw std::logic_error("internal error: witness fails the formula");
    return Verdict{.holds = true, .witness = std::move(witness)};
}

} // namespace teamltl
