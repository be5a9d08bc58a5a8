// ============================================================================
// teamctl.hpp -- one-step (tef) operator semantics and the CTL-style
//                fragment translation
//
// The one-step operators XE/XA/GE/GA/UE/UA quantify over time evaluation
// functions: schedules that, at each tick, advance a nonempty subset of the
// multiteam's entries by one position.  On a finite multiteam of lasso
// traces the schedule space collapses to a finite configuration graph:
//
//   nodes = per-entry canonical positions (wrapping past prefix+loop),
//   edges = advance a nonempty subset of entries by one.
//
// Every schedule projects to an infinite path from the all-zeros node and
// every infinite path lifts to a schedule, so
//
//   XE/XA = some/every one-step successor,
//   GA    = every reachable node satisfies the argument,
//   GE    = some infinite path stays in the satisfying region
//           (cycle search; wrap self-loops count — they are real progress),
//   UE    = some finite path (k >= 0 steps) ends in the right argument
//           passing only through the left,
//   UA    = least fixpoint: right, or left with all successors in the set.
//
// Satisfaction of a subformula at a node is satisfaction of the node's
// suffix multiteam, evaluated recursively and memoized per (multiteam,
// subformula); the remaining connectives (literals, &, |, or, X) follow
// the multiset semantics.  On the empty multiteam the graph has no edges:
// existential one-step operators are false, XA is vacuously true, GA and
// UE reduce to the argument at the empty multiteam, and UA's fixpoint
// admits the node when either argument holds there.
//
// translate_to_ltl / translate_to_ctl implement the syntactic swap between
// the left-flat fragments (GA <-> G and ME <-> M, M desugaring to U); the
// swapped formula must be left-flat, everything else is rejected.
// ============================================================================
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "eval_team.hpp"
#include "formula.hpp"
#include "limits.hpp"
#include "trace.hpp"

namespace teamltl {

namespace detail {

inline void validate_tef_formula(const Formula& f) {
    if (!f) return;
    switch (f->kind) {
        case FKind::Prop:
        case FKind::NegProp:
        case FKind::Top:
        case FKind::Bot:
            return;
        case FKind::And:
        case FKind::Or:
        case FKind::BOr:
        case FKind::Next:
        case FKind::NextE:
        case FKind::NextA:
        case FKind::GloballyE:
        case FKind::GloballyA:
        case FKind::UntilE:
        case FKind::UntilA:
            validate_tef_formula(f->left);
            validate_tef_formula(f->right);
            return;
        default:
            throw FragmentViolation(
                "one-step evaluation accepts literals, &, |, or, X, XE, XA, GE, GA, UE, UA, "
                "ME only");
    }
}

class TefEvaluator {
public:
    explicit TefEvaluator(TeamEvalContext& ctx) : ctx_(ctx) {}

    bool eval(std::vector<int> T, const Formula& f) {
        std::sort(T.begin(), T.end());
        auto key = std::make_pair(T, f.get());
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        ctx_.charge();
        bool v = compute(T, f);
        memo_.emplace(std::move(key), v);
        return v;
    }

private:
    static constexpr std::size_t kMaxConfigs = std::size_t(1) << 18;

    bool compute(const std::vector<int>& T, const Formula& f) {
        switch (f->kind) {
            case FKind::Prop:
            case FKind::NegProp:
            case FKind::Top:
            case FKind::Bot:
                for (int tid : T)
                    if (!ctx_.ltl(tid, f)) return false;
                return true;
            case FKind::And:
                return eval(T, f->left) && eval(T, f->right);
            case FKind::BOr:
                return eval(T, f->left) || eval(T, f->right);
            case FKind::Or: {
                std::size_t n = T.size();
                if (n > 62) throw ResourceLimitError("multiteam too large for partitioning");
                std::uint64_t full = (std::uint64_t(1) << n) - 1;
                for (std::uint64_t m = 0;; ++m) {
                    ctx_.charge();
                    std::vector<int> left, right;
                    for (std::size_t i = 0; i < n; ++i)
                        ((m >> i) & 1 ? left : right).push_back(T[i]);
                    if (eval(std::move(left), f->left) && eval(std::move(right), f->right))
                        return true;
                    if (m == full) break;
                }
                return false;
            }
            case FKind::Next:
                return eval(advanced(T, ~std::uint64_t(0)), f->left);
            case FKind::NextE:
            case FKind::NextA: {
                bool exists = f->kind == FKind::NextE;
                std::uint64_t full = T.empty() ? 0 : (std::uint64_t(1) << T.size()) - 1;
                for (std::uint64_t m = 1; m <= full; ++m) {
                    ctx_.charge();
                    if (eval(advanced(T, m), f->left) == exists) return exists;
                }
                return !exists;
            }
            case FKind::GloballyE:
                return globally_exists(T, f->left);
            case FKind::GloballyA:
                return globally_all(T, f->left);
            case FKind::UntilE:
                return until_exists(T, f->left, f->right);
            case FKind::UntilA:
                return until_all(T, f->left, f->right);
            default:
                throw FragmentViolation("unsupported connective in one-step evaluation");
        }
    }

    std::vector<int> advanced(const std::vector<int>& T, std::uint64_t mask) {
        std::vector<int> out;
        out.reserve(T.size());
        for (std::size_t i = 0; i < T.size(); ++i)
            out.push_back((mask >> i) & 1 ? ctx_.suffix_id(T[i], 1) : T[i]);
        return out;
    }

    // --- configuration space over a fixed multiteam --------------------------
    struct Space {
        std::vector<int> base;             // entry trace ids
        std::vector<std::size_t> span;     // canonical positions per entry
        std::vector<std::size_t> stride;   // mixed-radix encoding
        std::size_t total = 1;
        std::uint64_t full_mask = 0;
    };

    Space make_space(const std::vector<int>& T) {
        Space s;
        s.base = T;
        for (int tid : T) s.span.push_back(ctx_.trace(tid).num_positions());
        s.stride.resize(T.size());
        for (std::size_t i = 0; i < T.size(); ++i) {
            s.stride[i] = s.total;
            s.total *= s.span[i];
            if (s.total > kMaxConfigs)
                throw ResourceLimitError("configuration space exceeds bound");
        }
        s.full_mask = T.empty() ? 0 : (std::uint64_t(1) << T.size()) - 1;
        return s;
    }

    std::size_t pos_of(const Space& s, std::size_t code, std::size_t i) const {
        return (code / s.stride[i]) % s.span[i];
    }

    std::size_t advance_code(const Space& s, std::size_t code, std::uint64_t mask) {
        std::size_t out = 0;
        for (std::size_t i = 0; i < s.base.size(); ++i) {
            std::size_t pos = pos_of(s, code, i);
            if ((mask >> i) & 1)
                pos = ctx_.trace(s.base[i]).canonical_position(pos + 1);
            out += pos * s.stride[i];
        }
        return out;
    }

    bool sat_at(const Space& s, std::size_t code, const Formula& g) {
        std::vector<int> team;
        team.reserve(s.base.size());
        for (std::size_t i = 0; i < s.base.size(); ++i)
            team.push_back(ctx_.suffix_id(s.base[i], pos_of(s, code, i)));
        return eval(std::move(team), g);
    }

    bool globally_all(const std::vector<int>& T, const Formula& g) {
        Space s = make_space(T);
        std::set<std::size_t> seen = {0};
        std::vector<std::size_t> queue = {0};
        for (std::size_t head = 0; head < queue.size(); ++head) {
            std::size_t c = queue[head];
            if (!sat_at(s, c, g)) return false;
            for (std::uint64_t m = 1; m <= s.full_mask; ++m) {
                ctx_.charge();
                std::size_t nc = advance_code(s, c, m);
                if (seen.insert(nc).second) queue.push_back(nc);
            }
        }
        return true;
    }

    bool globally_exists(const std::vector<int>& T, const Formula& g) {
        Space s = make_space(T);
        if (!sat_at(s, 0, g)) return false;
        // reachable region satisfying g
        std::set<std::size_t> region = {0};
        std::vector<std::size_t> queue = {0};
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (std::uint64_t m = 1; m <= s.full_mask; ++m) {
                ctx_.charge();
                std::size_t nc = advance_code(s, queue[head], m);
                if (!region.count(nc) && sat_at(s, nc, g)) {
                    region.insert(nc);
                    queue.push_back(nc);
                }
            }
        }
        // any cycle inside the region (all of it is reachable from 0)
        std::map<std::size_t, int> color;  // 1 = on stack, 2 = done
        for (std::size_t start : region) {
            if (color.count(start)) continue;
            std::vector<std::pair<std::size_t, std::uint64_t>> stack = {{start, 1}};
            color[start] = 1;
            while (!stack.empty()) {
                auto& [c, next_mask] = stack.back();
                if (next_mask > s.full_mask) {
                    color[c] = 2;
                    stack.pop_back();
                    continue;
                }
                std::uint64_t m = next_mask++;
                ctx_.charge();
                std::size_t nc = advance_code(s, c, m);
                if (!region.count(nc)) continue;
                auto it = color.find(nc);
                if (it == color.end()) {
                    color[nc] = 1;
                    stack.push_back({nc, 1});
                } else if (it->second == 1) {
                    return true;  // back edge closes a satisfying cycle
                }
            }
        }
        return false;
    }

    bool until_exists(const std::vector<int>& T, const Formula& g, const Formula& h) {
        Space s = make_space(T);
        if (sat_at(s, 0, h)) return true;  // k = 0
        if (!sat_at(s, 0, g)) return false;
        std::set<std::size_t> seen = {0};
        std::vector<std::size_t> queue = {0};
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (std::uint64_t m = 1; m <= s.full_mask; ++m) {
                ctx_.charge();
                std::size_t nc = advance_code(s, queue[head], m);
                if (seen.count(nc)) continue;
                if (sat_at(s, nc, h)) return true;
                seen.insert(nc);
                if (sat_at(s, nc, g)) queue.push_back(nc);
            }
        }
        return false;
    }

    bool until_all(const std::vector<int>& T, const Formula& g, const Formula& h) {
        Space s = make_space(T);
        // reachable configurations
        std::set<std::size_t> reach = {0};
        std::vector<std::size_t> queue = {0};
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (std::uint64_t m = 1; m <= s.full_mask; ++m) {
                ctx_.charge();
                std::size_t nc = advance_code(s, queue[head], m);
                if (reach.insert(nc).second) queue.push_back(nc);
            }
        }
        // least fixpoint of: h, or g with every successor already inside
        std::set<std::size_t> inside;
        for (std::size_t c : reach)
            if (sat_at(s, c, h)) inside.insert(c);
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t c : reach) {
                ctx_.charge();
                if (inside.count(c) || !sat_at(s, c, g)) continue;
                bool all_in = true;
                for (std::uint64_t m = 1; m <= s.full_mask && all_in; ++m)
                    all_in = inside.count(advance_code(s, c, m)) != 0;
                if (all_in) {
                    inside.insert(c);
                    grew = true;
                }
            }
        }
        return inside.count(0) != 0;
    }

    TeamEvalContext& ctx_;
    std::map<std::pair<std::vector<int>, const FormulaNode*>, bool> memo_;
};

} // namespace detail

// Exact satisfaction of a one-step (tef) formula on a finite multiteam.
inline bool eval_tef(const Multiteam& T, const Formula& f, const EvalOptions& opts = {}) {
    Formula d = desugar(f);
    detail::validate_tef_formula(d);
    std::vector<const LassoTrace*> members;
    for (const MultiteamEntry& e : T) members.push_back(&e.trace);
    detail::check_input_guards(d, T.size(), members, opts.limits);
    detail::TeamEvalContext ctx(opts);
    std::vector<int> ids;
    ids.reserve(T.size());
    for (const MultiteamEntry& e : T) ids.push_back(ctx.intern(e.trace));
    return detail::TefEvaluator(ctx).eval(std::move(ids), d);
}

// ----------------------------------------------------------------------------
// Fragment translations (GA <-> G, ME <-> M; everything else fixed)
// ----------------------------------------------------------------------------
namespace detail {

inline Formula swap_tef_ops(const Formula& f, bool to_ltl) {
    switch (f->kind) {
        case FKind::Prop:
        case FKind::NegProp:
        case FKind::Top:
        case FKind::Bot:
            return f;
        case FKind::And:
        case FKind::Or:
        case FKind::BOr:
            return binary(f->kind, swap_tef_ops(f->left, to_ltl), swap_tef_ops(f->right, to_ltl));
        case FKind::Next:
            return next(swap_tef_ops(f->left, to_ltl));
        case FKind::GloballyA:
            if (!to_ltl) break;
            return globally(swap_tef_ops(f->left, to_ltl));
        case FKind::StrongReleaseE:
            if (!to_ltl) break;
            return binary(FKind::StrongRelease, swap_tef_ops(f->left, to_ltl),
                          swap_tef_ops(f->right, to_ltl));
        case FKind::Globally:
            if (to_ltl) break;
            return unary(FKind::GloballyA, swap_tef_ops(f->left, to_ltl));
        case FKind::StrongRelease:
            if (to_ltl) break;
            return binary(FKind::StrongReleaseE, swap_tef_ops(f->left, to_ltl),
                          swap_tef_ops(f->right, to_ltl));
        default:
            break;
    }
    throw FragmentViolation(
        to_ltl ? "translation accepts literals, &, |, or, X, GA and ME only"
               : "translation accepts literals, &, |, or, X, G and M only");
}

} // namespace detail

// Left-flat TeamCTL(X, GA, ME, or)  ->  left-flat formula with G and U.
// The ME sugar is expanded: [q ME p] becomes p U (p & q).
inline Formula translate_to_ltl(const Formula& f) {
    Formula mapped = detail::swap_tef_ops(f, /*to_ltl=*/true);
    if (!classify(mapped).is_left_flat)
        throw FragmentViolation("translation needs left-flat input: G arguments and the "
                                "position argument of ME must be plain LTL");
    return desugar(mapped);
}

// Left-flat formula with G and M (no plain U)  ->  left-flat TeamCTL form.
inline Formula translate_to_ctl(const Formula& f) {
    Formula mapped = detail::swap_tef_ops(f, /*to_ltl=*/false);
    if (!classify(mapped).is_left_flat)
        throw FragmentViolation("translation needs left-flat input: G arguments and the "
                                "position argument of M must be plain LTL");
    return mapped;
}

} // namespace teamltl
