// ============================================================================
// formula.hpp -- AST for team temporal formulas, desugaring, dual, classify
//
// One node type covers the whole input language:
//
//   * literals              p, !p, top, bot
//   * team connectives      & (conjunction), | (splitting disjunction),
//                           `or` (Boolean disjunction), ~ (Boolean negation),
//                           E (existential trace quantifier, sugar for ~dual)
//   * temporal operators    X, G, U  plus derived F, W1, W2, R1, R2, M
//   * team atoms            dep(...), inc(... ; ...)
//   * one-step / evaluation-function operators   XE, XA, GE, GA, UE, UA
//                           plus derived ME (existential strong release)
//
// Classical negation appears only on propositions (negation normal form);
// `~` is the separate team-level Boolean negation.
//
// Nodes are immutable and shared (shared_ptr DAG); all transformations
// build new nodes.  Structural equality is provided by equal()/operator==.
// ============================================================================
#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace teamltl {

enum class FKind {
    Prop,
    NegProp,
    Top,
    Bot,
    And,
    Or,    // splitting disjunction |
    BOr,   // Boolean disjunction `or`
    BNeg,  // Boolean negation ~
    Exists,
    Next,
    Globally,
    Until,
    Finally,      // sugar: F a = top U a
    WeakUntil1,   // sugar: a W1 b = G a | (a U b)
    WeakUntil2,   // sugar: a W2 b = G a or (a U b)
    Release1,     // sugar: a R1 b = b U ((b & a) | G b)
    Release2,     // sugar: a R2 b = b U ((b & a) or G b)
    StrongRelease,  // sugar: a M b = b U (b & a)
    DepAtom,
    IncAtom,
    NextE,      // XE: some one-step advance
    NextA,      // XA: every one-step advance
    GloballyE,  // GE
    GloballyA,  // GA
    UntilE,     // UE
    UntilA,     // UA
    StrongReleaseE,  // sugar: a ME b = b UE (b & a)
};

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
    FKind kind;
    std::string name;            // Prop / NegProp
    Formula left;                // unary child or binary left
    Formula right;               // binary right
    std::vector<Formula> args;   // DepAtom: determinants then target; IncAtom: left tuple
    std::vector<Formula> args2;  // IncAtom: right tuple
};

// --- factories --------------------------------------------------------------

inline Formula make_node(FKind k, std::string name, Formula l, Formula r,
                         std::vector<Formula> args = {}, std::vector<Formula> args2 = {}) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = k;
    n->name = std::move(name);
    n->left = std::move(l);
    n->right = std::move(r);
    n->args = std::move(args);
    n->args2 = std::move(args2);
    return n;
}

inline Formula prop(std::string name) { return make_node(FKind::Prop, std::move(name), nullptr, nullptr); }
inline Formula nprop(std::string name) { return make_node(FKind::NegProp, std::move(name), nullptr, nullptr); }
inline Formula top() { return make_node(FKind::Top, "", nullptr, nullptr); }
inline Formula bot() { return make_node(FKind::Bot, "", nullptr, nullptr); }
inline Formula unary(FKind k, Formula a) { return make_node(k, "", std::move(a), nullptr); }
inline Formula binary(FKind k, Formula l, Formula r) { return make_node(k, "", std::move(l), std::move(r)); }
inline Formula land(Formula l, Formula r) { return binary(FKind::And, std::move(l), std::move(r)); }
inline Formula lor(Formula l, Formula r) { return binary(FKind::Or, std::move(l), std::move(r)); }
inline Formula bor(Formula l, Formula r) { return binary(FKind::BOr, std::move(l), std::move(r)); }
inline Formula bneg(Formula a) { return unary(FKind::BNeg, std::move(a)); }
inline Formula exists(Formula a) { return unary(FKind::Exists, std::move(a)); }
inline Formula next(Formula a) { return unary(FKind::Next, std::move(a)); }
inline Formula globally(Formula a) { return unary(FKind::Globally, std::move(a)); }
inline Formula until(Formula l, Formula r) { return binary(FKind::Until, std::move(l), std::move(r)); }
inline Formula dep_atom(std::vector<Formula> determinants_then_target) {
    return make_node(FKind::DepAtom, "", nullptr, nullptr, std::move(determinants_then_target));
}
inline Formula inc_atom(std::vector<Formula> lhs, std::vector<Formula> rhs) {
    return make_node(FKind::IncAtom, "", nullptr, nullptr, std::move(lhs), std::move(rhs));
}

inline bool is_binary_kind(FKind k) {
    switch (k) {
        case FKind::And:
        case FKind::Or:
        case FKind::BOr:
        case FKind::Until:
        case FKind::WeakUntil1:
        case FKind::WeakUntil2:
        case FKind::Release1:
        case FKind::Release2:
        case FKind::StrongRelease:
        case FKind::UntilE:
        case FKind::UntilA:
        case FKind::StrongReleaseE:
            return true;
        default:
            return false;
    }
}

inline bool is_unary_kind(FKind k) {
    switch (k) {
        case FKind::BNeg:
        case FKind::Exists:
        case FKind::Next:
        case FKind::Globally:
        case FKind::Finally:
        case FKind::NextE:
        case FKind::NextA:
        case FKind::GloballyE:
        case FKind::GloballyA:
            return true;
        default:
            return false;
    }
}

// --- structural equality and size -------------------------------------------

inline bool equal(const Formula& a, const Formula& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->name != b->name) return false;
    if (!equal(a->left, b->left) || !equal(a->right, b->right)) return false;
    if (a->args.size() != b->args.size() || a->args2.size() != b->args2.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
    for (std::size_t i = 0; i < a->args2.size(); ++i)
        if (!equal(a->args2[i], b->args2[i])) return false;
    return true;
}

inline std::size_t node_count(const Formula& f) {
    if (!f) return 0;
    std::size_t n = 1 + node_count(f->left) + node_count(f->right);
    for (const Formula& a : f->args) n += node_count(a);
    for (const Formula& a : f->args2) n += node_count(a);
    return n;
}

inline std::size_t nesting_depth(const Formula& f) {
    if (!f) return 0;
    std::size_t d = std::max(nesting_depth(f->left), nesting_depth(f->right));
    for (const Formula& a : f->args) d = std::max(d, nesting_depth(a));
    for (const Formula& a : f->args2) d = std::max(d, nesting_depth(a));
    return d + 1;
}

// All propositions mentioned in the formula.
inline void collect_props(const Formula& f, std::set<std::string>& out) {
    if (!f) return;
    if (f->kind == FKind::Prop || f->kind == FKind::NegProp) out.insert(f->name);
    collect_props(f->left, out);
    collect_props(f->right, out);
    for (const Formula& a : f->args) collect_props(a, out);
    for (const Formula& a : f->args2) collect_props(a, out);
}

inline std::set<std::string> props_of(const Formula& f) {
    std::set<std::string> out;
    collect_props(f, out);
    return out;
}

// --- desugaring --------------------------------------------------------------
// Rewrites the derived operators to primitives:
//   F a     -> top U a
//   a W1 b  -> G a | (a U b)
//   a W2 b  -> G a or (a U b)
//   a R1 b  -> b U ((b & a) | G b)
//   a R2 b  -> b U ((b & a) or G b)
//   a M b   -> b U (b & a)
//   a ME b  -> b UE (b & a)
// Everything else is rebuilt unchanged (children desugared).  Idempotent.

inline Formula desugar(const Formula& f) {
    if (!f) return nullptr;
    Formula l = desugar(f->left);
    Formula r = desugar(f->right);
    switch (f->kind) {
        case FKind::Finally:
            return until(top(), l);
        case FKind::WeakUntil1:
            return lor(globally(l), until(l, r));
        case FKind::WeakUntil2:
            return bor(globally(l), until(l, r));
        case FKind::Release1:
            return until(r, lor(land(r, l), globally(r)));
        case FKind::Release2:
            return until(r, bor(land(r, l), globally(r)));
        case FKind::StrongRelease:
            return until(r, land(r, l));
        case FKind::StrongReleaseE:
            return binary(FKind::UntilE, r, land(r, l));
        case FKind::DepAtom: {
            std::vector<Formula> args;
            args.reserve(f->args.size());
            for (const Formula& a : f->args) args.push_back(desugar(a));
            return dep_atom(std::move(args));
        }
        case FKind::IncAtom: {
            std::vector<Formula> lhs, rhs;
            lhs.reserve(f->args.size());
            rhs.reserve(f->args2.size());
            for (const Formula& a : f->args) lhs.push_back(desugar(a));
            for (const Formula& a : f->args2) rhs.push_back(desugar(a));
            return inc_atom(std::move(lhs), std::move(rhs));
        }
        default:
            if (!l && !r) return f;  // literal, already primitive
            return make_node(f->kind, f->name, std::move(l), std::move(r));
    }
}

// --- fragment classification --------------------------------------------------

struct FragmentInfo {
    bool is_ltl = false;
    bool is_left_flat = false;
    bool is_left_dc = false;
    std::size_t bor_count = 0;  // occurrences of `or` after desugaring
    bool has_bneg = false;
    bool has_atoms = false;
    std::size_t size = 0;  // node count after desugaring
};

namespace detail {

// Membership in plain LTL: literals, &, |, X, G, U only.
inline bool is_ltl_node(const Formula& f) {
    if (!f) return true;
    switch (f->kind) {
        case FKind::Prop:
        case FKind::NegProp:
        case FKind::Top:
        case FKind::Bot:
            return true;
        case FKind::And:
        case FKind::Or:
        case FKind::Next:
        case FKind::Globally:
        case FKind::Until:
            return is_ltl_node(f->left) && is_ltl_node(f->right);
        default:
            return false;
    }
}

// Membership in the `or` extension (no ~, no E, no atoms, no one-step ops).
inline bool is_bor_fragment_node(const Formula& f) {
    if (!f) return true;
    switch (f->kind) {
        case FKind::Prop:
        case FKind::NegProp:
        case FKind::Top:
        case FKind::Bot:
            return true;
        case FKind::And:
        case FKind::Or:
        case FKind::BOr:
        case FKind::Next:
        case FKind::Globally:
        case FKind::Until:
            return is_bor_fragment_node(f->left) && is_bor_fragment_node(f->right);
        default:
            return false;
    }
}

// Left-argument checks: the "left argument" of G (and GE/GA) is its only
// child; of U (and UE/UA) the first child.  is_left_flat demands these be
// LTL, is_left_dc demands they be in the `or` fragment.
inline bool left_args_satisfy(const Formula& f, bool (*pred)(const Formula&)) {
    if (!f) return true;
    switch (f->kind) {
        case FKind::Globally:
        case FKind::GloballyE:
        case FKind::GloballyA:
            return pred(f->left) && left_args_satisfy(f->left, pred);
        case FKind::Until:
        case FKind::UntilE:
        case FKind::UntilA:
            return pred(f->left) && left_args_satisfy(f->left, pred) &&
                   left_args_satisfy(f->right, pred);
        default: {
            if (!left_args_satisfy(f->left, pred) || !left_args_satisfy(f->right, pred))
                return false;
            for (const Formula& a : f->args)
                if (!left_args_satisfy(a, pred)) return false;
            for (const Formula& a : f->args2)
                if (!left_args_satisfy(a, pred)) return false;
            return true;
        }
    }
}

inline void count_features(const Formula& f, FragmentInfo& info) {
    if (!f) return;
    if (f->kind == FKind::BOr) ++info.bor_count;
    if (f->kind == FKind::BNeg) info.has_bneg = true;
    if (f->kind == FKind::DepAtom || f->kind == FKind::IncAtom) info.has_atoms = true;
    count_features(f->left, info);
    count_features(f->right, info);
    for (const Formula& a : f->args) count_features(a, info);
    for (const Formula& a : f->args2) count_features(a, info);
}

} // namespace detail

// Membership tests (applied to the desugared formula).
inline bool is_ltl_formula(const Formula& f) { return detail::is_ltl_node(desugar(f)); }
inline bool is_bor_fragment(const Formula& f) { return detail::is_bor_fragment_node(desugar(f)); }

inline FragmentInfo classify(const Formula& f) {
    Formula d = desugar(f);
    FragmentInfo info;
    detail::count_features(d, info);
    info.size = node_count(d);
    info.is_ltl = detail::is_ltl_node(d);
    info.is_left_flat = detail::left_args_satisfy(d, &detail::is_ltl_node);
    info.is_left_dc = detail::left_args_satisfy(d, &detail::is_bor_fragment_node);
    return info;
}

// --- dual (negation normal form of the classical negation) -------------------
/// For LTL f, dual(f) satisfies: on every trace, dual(f) holds iff f fails.
// The U case goes through the weak-until expansion
//   not (a U b)  =  G !b  |  (!b U (!b & !a)),
// since G is primitive here and release is not.

inline Formula dual(const Formula& f) {
    Formula d = desugar(f);
    if (!detail::is_ltl_node(d))
        throw FragmentViolation("dual is defined on LTL formulas only");
    struct Impl {
        static Formula go(const Formula& f) {
            switch (f->kind) {
                case FKind::Prop:
                    return nprop(f->name);
                case FKind::NegProp:
                    return prop(f->name);
                case FKind::Top:
                    return bot();
                case FKind::Bot:
                    return top();
                case FKind::And:
                    return lor(go(f->left), go(f->right));
                case FKind::Or:
                    return land(go(f->left), go(f->right));
                case FKind::Next:
                    return next(go(f->left));
                case FKind::Globally:
                    return until(top(), go(f->left));
                case FKind::Until: {
                    Formula nl = go(f->left);
                    Formula nr = go(f->right);
                    return lor(globally(nr), until(nr, land(nr, nl)));
                }
                default:
                    throw FragmentViolation("dual is defined on LTL formulas only");
            }
        }
    };
    return Impl::go(d);
}

} // namespace teamltl
