// ============================================================================
// decide.hpp -- team-level decision procedures
//
// Model checking and satisfiability for two fragments, reduced to the
// classical LTL engine:
//
//   * formulas with Boolean disjunction (`or`, no ~/E/atoms): stream the
//     selection disjuncts one at a time; the team property holds iff some
//     disjunct holds flatly (every trace / some trace).  At most one
//     disjunct is materialized at any moment.
//
//   * left-downward-closed formulas with ~: materialize the quasi-flat form;
//     a disjunct (alpha, betas) holds on Traces(K) iff alpha holds on every
//     trace and each beta on some trace.  The existential checks reuse
//     mc_ltl on the dual: a counterexample to dual(beta) is precisely a
//     trace of K satisfying beta.
//
// Disjuncts are examined in enumeration order and the first success decides
// (deterministic disjunct_index); with jobs > 1, disjuncts are checked in
// index-ascending chunks so the reported index is still the least one.
// Witness teams from the SAT procedures are re-verified against the exact
// team evaluator before being returned.
// ============================================================================
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "eval_team.hpp"
#include "formula.hpp"
#include "kripke.hpp"
#include "model_check.hpp"
#include "normal_form.hpp"
#include "trace.hpp"

namespace teamltl {

// Per-disjunct audit trail, filled when a diagnostics map is supplied.
struct DisjunctReport {
    Formula alpha;
    std::optional<Verdict> alpha_verdict;
    std::vector<std::pair<Formula, Verdict>> beta_checks;
};
using DecisionDiagnostics = std::map<std::size_t, DisjunctReport>;

namespace detail {

// Least index in [0,count) where check returns true, examining indices in
// ascending chunks of `jobs` parallel evaluations.
inline std::optional<std::size_t> least_true_index(
    std::uint64_t count, std::size_t jobs, const std::function<bool(std::uint64_t)>& check) {
    if (jobs <= 1) {
        for (std::uint64_t i = 0; i < count; ++i)
            if (check(i)) return i;
        return std::nullopt;
    }
    for (std::uint64_t base = 0; base < count; base += jobs) {
        std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(jobs, count - base));
        std::vector<char> hit(n, 0);
        std::vector<std::thread> threads;
        threads.reserve(n);
        for (std::size_t t = 0; t < n; ++t)
            threads.emplace_back([&, t] { hit[t] = check(base + t) ? 1 : 0; });
        for (std::thread& th : threads) th.join();
        for (std::size_t t = 0; t < n; ++t)
            if (hit[t]) return base + t;
    }
    return std::nullopt;
}

inline EvalOptions verification_options() {
    EvalOptions opts;
    opts.limits.traces = 64;
    opts.limits.pos = 512;
    opts.limits.depth = 128;
    return opts;
}

} // namespace detail

// Does every trace of K satisfy f (a formula with `or`)?  Streams the
// selection disjuncts; per-disjunct counterexamples land in `diag`.
inline Verdict mc_team_dnf(const KripkeStructure& K, const Formula& f,
                           DecisionDiagnostics* diag = nullptr, std::size_t jobs = 1) {
    if (jobs <= 1) {
        SelectionCursor cursor(f);
        std::size_t index = 0;
        while (std::optional<Formula> d = cursor.next()) {
            Verdict v = mc_ltl(K, *d);
            if (diag) (*diag)[index] = DisjunctReport{*d, v, {}};
            if (v.holds) return Verdict{.holds = true, .disjunct_index = index};
            ++index;
        }
        return Verdict{.holds = false};
    }
    SelectionCursor probe(f);  // validates the fragment, counts disjuncts
    std::mutex mu;
    auto check = [&](std::uint64_t i) {
        SelectionCursor c(f);
        c.seek(i);
        Formula d = *c.next();
        Verdict v = mc_ltl(K, d);
        bool holds = v.holds;
        if (diag) {
            std::lock_guard<std::mutex> lock(mu);
            (*diag)[static_cast<std::size_t>(i)] = DisjunctReport{d, std::move(v), {}};
        }
        return holds;
    };
    auto idx = detail::least_true_index(probe.size(), jobs, check);
    if (!idx) return Verdict{.holds = false};
    return Verdict{.holds = true, .disjunct_index = static_cast<std::size_t>(*idx)};
}

// Is f (a formula with `or`) satisfiable by some nonempty team?  A singleton
// of any satisfying trace of any disjunct works, by flatness of disjuncts
// and downward closure of the fragment.
inline Verdict sat_team_dnf(const Formula& f, DecisionDiagnostics* diag = nullptr,
                            std::size_t jobs = 1) {
    SelectionCursor probe(f);
    std::mutex mu;
    std::map<std::uint64_t, Verdict> wins;
    auto check = [&](std::uint64_t i) {
        SelectionCursor c(f);
        c.seek(i);
        Formula d = *c.next();
        Verdict v = sat_ltl(d);
        bool holds = v.holds;
        std::lock_guard<std::mutex> lock(mu);
        if (holds) wins[i] = v;
        if (diag) (*diag)[static_cast<std::size_t>(i)] = DisjunctReport{d, std::move(v), {}};
        return holds;
    };
    auto idx = detail::least_true_index(probe.size(), jobs == 0 ? 1 : jobs, check);
    if (!idx) return Verdict{.holds = false};
    LassoTrace w = *wins.at(*idx).witness;
    Team team = make_team({w});
    if (!eval_lax(team, f, detail::verification_options()))
        throw std::logic_error("internal error: satisfiability witness fails the formula");
    return Verdict{.holds = true,
                   .witness = std::move(w),
                   .witness_team = std::move(team),
                   .disjunct_index = static_cast<std::size_t>(*idx)};
}

// Does every-trace satisfaction of f (left-downward-closed, ~ allowed) hold
// on Traces(K)?  Decided disjunct-wise on the quasi-flat form.
inline Verdict mc_team_quasiflat(const KripkeStructure& K, const Formula& f,
                                 DecisionDiagnostics* diag = nullptr, std::size_t jobs = 1) {
    QuasiFlatForm qf = to_quasiflat(f);
    std::mutex mu;
    auto check = [&](std::uint64_t i) {
        const QuasiFlatDisjunct& d = qf.disjuncts[static_cast<std::size_t>(i)];
        DisjunctReport report{d.alpha, std::nullopt, {}};
        bool ok = true;
        Verdict va = mc_ltl(K, d.alpha);
        ok = va.holds;
        report.alpha_verdict = std::move(va);
        for (std::size_t j = 0; ok && j < d.betas.size(); ++j) {
            // some trace of K satisfies beta  <=>  dual(beta) fails on K
            Verdict vb = mc_ltl(K, dual(d.betas[j]));
            ok = !vb.holds;
            report.beta_checks.emplace_back(d.betas[j], std::move(vb));
        }
        if (diag) {
            std::lock_guard<std::mutex> lock(mu);
            (*diag)[static_cast<std::size_t>(i)] = std::move(report);
        }
        return ok;
    };
    auto idx = detail::least_true_index(qf.disjuncts.size(), jobs == 0 ? 1 : jobs, check);
    if (!idx) return Verdict{.holds = false};
    return Verdict{.holds = true, .disjunct_index = static_cast<std::size_t>(*idx)};
}

// Is f (left-downward-closed, ~ allowed) satisfiable by some nonempty team?
// A disjunct (alpha, betas) is realizable iff every alpha ∧ beta_j is
// LTL-satisfiable; the per-j witnesses form the team.
inline Verdict sat_team_quasiflat(const Formula& f, DecisionDiagnostics* diag = nullptr,
                                  std::size_t jobs = 1) {
    QuasiFlatForm qf = to_quasiflat(f);
    std::mutex mu;
    std::map<std::uint64_t, Team> wins;
    auto check = [&](std::uint64_t i) {
        const QuasiFlatDisjunct& d = qf.disjuncts[static_cast<std::size_t>(i)];
        DisjunctReport report{d.alpha, std::nullopt, {}};
        std::vector<LassoTrace> members;
        bool ok = true;
        if (d.betas.empty()) {
            Verdict v = sat_ltl(d.alpha);
            ok = v.holds;
            if (ok) members.push_back(*v.witness);
            report.alpha_verdict = std::move(v);
        } else {
            for (std::size_t j = 0; ok && j < d.betas.size(); ++j) {
                Verdict v = sat_ltl(land(d.alpha, d.betas[j]));
                ok = v.holds;
                if (ok) members.push_back(*v.witness);
                report.beta_checks.emplace_back(d.betas[j], std::move(v));
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        if (ok) wins[i] = make_team(members);
        if (diag) (*diag)[static_cast<std::size_t>(i)] = std::move(report);
        return ok;
    };
    auto idx = detail::least_true_index(qf.disjuncts.size(), jobs == 0 ? 1 : jobs, check);
    if (!idx) return Verdict{.holds = false};
    Team team = wins.at(*idx);
    if (!eval_lax(team, f, detail::verification_options()))
        throw std::logic_error("internal error: satisfiability witness team fails the formula");
    Verdict out{.holds = true, .disjunct_index = static_cast<std::size_t>(*idx)};
    out.witness_team = std::move(team);
    return out;
}

} // namespace teamltl
