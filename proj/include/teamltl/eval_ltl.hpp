// ============================================================================
// eval_ltl.hpp -- classical LTL evaluation on a lasso trace
//
// Memoized recursion over (subformula, canonical position).  Since the trace
// is ultimately periodic, each subformula has a well-defined truth value at
// each of the P+L canonical positions, and temporal operators only need to
// inspect positions reachable from the current one:
//
//   G f   at i :  f at every position >= i (canonicalized)
//   f U g at i :  forward scan; within P+L+1 steps every reachable canonical
//                 position has been visited, so the scan terminates
// ============================================================================
#pragma once

#include <algorithm>
#include <map>
#include <utility>

#include "errors.hpp"
#include "formula.hpp"
#include "trace.hpp"

namespace teamltl {
namespace detail {

class LtlEvaluator {
public:
    explicit LtlEvaluator(const LassoTrace& t) : t_(t) {}

    bool eval(const Formula& f, std::size_t pos) {
        pos = t_.canonical_position(pos);
        auto key = std::make_pair(f.get(), pos);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool value = compute(f, pos);
        memo_.emplace(key, value);
        return value;
    }

private:
    bool compute(const Formula& f, std::size_t pos) {
        switch (f->kind) {
            case FKind::Prop:
                return t_.step_at(pos).count(f->name) > 0;
            case FKind::NegProp:
                return t_.step_at(pos).count(f->name) == 0;
            case FKind::Top:
                return true;
            case FKind::Bot:
                return false;
            case FKind::And:
                return eval(f->left, pos) && eval(f->right, pos);
            case FKind::Or:
                return eval(f->left, pos) || eval(f->right, pos);
            case FKind::Next:
                return eval(f->left, pos + 1);
            case FKind::Globally: {
                // Positions >= pos canonicalize to {pos..P+L-1} when pos is in
                // the prefix, and to the whole loop {P..P+L-1} otherwise.
                std::size_t from = std::min(pos, t_.prefix_len());
                for (std::size_t j = from; j < t_.num_positions(); ++j)
                    if (!eval(f->left, j)) return false;
                return true;
            }
            case FKind::Until: {
                for (std::size_t k = 0; k <= t_.num_positions(); ++k) {
                    if (eval(f->right, pos + k)) return true;
                    if (!eval(f->left, pos + k)) return false;
                }
                return false;
            }
            default:
                throw FragmentViolation("single-trace evaluation needs an LTL formula");
        }
    }

    const LassoTrace& t_;
    std::map<std::pair<const FormulaNode*, std::size_t>, bool> memo_;
};

// Evaluation entry for already-desugared LTL formulas.
inline bool eval_ltl_prim(const LassoTrace& t, const Formula& f, std::size_t pos = 0) {
    return LtlEvaluator(t).eval(f, pos);
}

} // namespace detail

// Truth value of the LTL formula f on the infinite trace denoted by t.
inline bool eval_ltl(const LassoTrace& t, const Formula& f) {
    Formula d = desugar(f);
    if (!classify(d).is_ltl)
        throw FragmentViolation("single-trace evaluation needs an LTL formula");
    return detail::eval_ltl_prim(t, d);
}

} // namespace teamltl
