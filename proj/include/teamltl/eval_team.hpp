// ============================================================================
// eval_team.hpp -- exact team-semantics evaluators
//
//   eval_lax    set-based semantics on teams (splitting disjunction = cover)
//   eval_strict multiset semantics on multiteams (splitting = partition)
//
// Both are exact, exponential-time reference evaluators over finite teams of
// lasso traces, with per-call memoization keyed on (normalized team,
// subformula).
//
// Quantifier bases.  Temporal operators quantify over functions assigning
// future positions to traces.  Distinct suffixes of a lasso are realized at
// the canonical positions {0..P+L-1}, which makes the G quantifier finite:
// only the chosen suffix sets matter.  The U quantifier additionally depends
// on positions through the side conditions "max f(t) != 0" (membership in
// the obligation team T') and the obligation ordering (min/max comparisons),
// and there the canonical range alone is *not* complete: a trace with empty
// prefix can be sent once around the loop (position value L), which keeps
// the same suffix but moves the trace into T'.  Example: with
// T = { {p}^w, {q}{r}^w } the formula (E p) U (p | r) holds — choose
// position 1 on both traces, so that the obligation team contains the
// {p}-trace that witnesses E p — but no choice within canonical positions
// works, because position 1 on {p}^w collapses to 0.  The U value universe
// is therefore [0, P + B*L - 1] plus {L} when P = 0, where B >= 1 is the
// audit bound.  Larger B re-checks the same verdicts over a strictly larger
// base (see the audit-mode CLI flag); B's size never changes the answer,
// only the amount of redundant quantification.
//
// Obligation families (lax U).  For a chosen per-trace value set S with
// minimum m and maximum k != 0, an obligation function maps the trace to a
// nonempty value set with minimum <= m and maximum < k.  Three facts keep
// the check finite and exact:
//   * if the U left argument is downward closed, only the inclusion-maximal
//     obligation team (all suffixes at values < k, unioned over traces)
//     needs checking;
//   * otherwise the obligation teams are exactly the subsets M of that
//     maximal team V that intersect, for every trace t in T', the "pivot"
//     suffixes of t at values <= min(m, k-1);
//   * replacing any function by its projection into the value universe
//     preserves the induced teams and only shrinks the obligation family.
//
// Resource policy: input sizes are guarded by Limits; the enumerations
// themselves run under a work budget and raise ResourceLimitError when
// exhausted.  Answers are exact or absent, never truncated.
// ============================================================================
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "eval_ltl.hpp"
#include "formula.hpp"
#include "limits.hpp"
#include "trace.hpp"

namespace teamltl {

struct EvalOptions {
    Limits limits{};
    // Quantifier base for U (and the strict G): position values range over
    // [0, prefix + audit_bound*loop - 1], plus the loop-length value for
    // prefix-free traces.  1 = canonical base; larger values audit it.
    std::size_t audit_bound = 1;
    // Elementary enumeration steps allowed per evaluation call.
    std::size_t work_budget = std::size_t(1) << 28;
};

namespace detail {

// Shared plumbing: trace interning, cached single-trace evaluation, cached
// suffix computation, the work budget, and fragment bookkeeping.
class TeamEvalContext {
public:
    explicit TeamEvalContext(const EvalOptions& opts) : opts_(opts), budget_(opts.work_budget) {}

    const EvalOptions& options() const { return opts_; }

    int intern(const LassoTrace& t) {
        auto it = trace_ids_.find(t);
        if (it != trace_ids_.end()) return it->second;
        int id = static_cast<int>(traces_.size());
        trace_ids_.emplace(t, id);
        traces_.push_back(t);
        return id;
    }

    const LassoTrace& trace(int id) const { return traces_[static_cast<std::size_t>(id)]; }

    int suffix_id(int tid, std::size_t value) {
        std::size_t pos = trace(tid).canonical_position(value);
        auto key = std::make_pair(tid, pos);
        auto it = suffix_ids_.find(key);
        if (it != suffix_ids_.end()) return it->second;
        int sid = intern(trace(tid).suffix(pos));
        suffix_ids_.emplace(key, sid);
        return sid;
    }

    bool ltl(int tid, const Formula& f) {
        auto key = std::make_pair(tid, f.get());
        auto it = ltl_cache_.find(key);
        if (it != ltl_cache_.end()) return it->second;
        bool v = eval_ltl_prim(trace(tid), f);
        ltl_cache_.emplace(key, v);
        return v;
    }

    // Syntactic downward-closure check (no ~, no E, no inclusion atom, no
    // one-step operators); justifies the partition and maximal-obligation
    // fast paths.
    bool dc_safe(const Formula& f) {
        if (!f) return true;
        auto it = dc_cache_.find(f.get());
        if (it != dc_cache_.end()) return it->second;
        bool v;
        switch (f->kind) {
            case FKind::BNeg:
            case FKind::Exists:
            case FKind::IncAtom:
            case FKind::NextE:
            case FKind::NextA:
            case FKind::GloballyE:
            case FKind::GloballyA:
            case FKind::UntilE:
            case FKind::UntilA:
                v = false;
                break;
            case FKind::DepAtom: {
                v = true;  // dependence atoms are downward closed
                break;
            }
            default:
                v = dc_safe(f->left) && dc_safe(f->right);
                break;
        }
        dc_cache_.emplace(f.get(), v);
        return v;
    }

    void charge(std::size_t units = 1) {
        if (units > budget_)
            throw ResourceLimitError(
                "evaluation work budget exhausted; reduce team size, trace length or "
                "formula complexity");
        budget_ -= units;
    }

    std::uint64_t bit(int id) const {
        if (id >= 64)
            throw ResourceLimitError("suffix universe exceeds 64 distinct traces");
        return std::uint64_t(1) << id;
    }

    // The U value universe for a trace under the configured audit bound.
    std::vector<std::size_t> until_values(int tid) {
        const LassoTrace& t = trace(tid);
        std::size_t hi = t.prefix_len() + opts_.audit_bound * t.loop_len();
        std::vector<std::size_t> vals;
        for (std::size_t v = 0; v < hi; ++v) vals.push_back(v);
        if (t.prefix_len() == 0 && t.loop_len() >= hi)
            vals.push_back(t.loop_len());  // one full loop round: same suffix, max != 0
        return vals;
    }

    // Position values for the G quantifier (suffix sets only; no extension).
    std::vector<std::size_t> globally_values(int tid) {
        const LassoTrace& t = trace(tid);
        std::size_t hi = t.prefix_len() + opts_.audit_bound * t.loop_len();
        std::vector<std::size_t> vals;
        for (std::size_t v = 0; v < hi; ++v) vals.push_back(v);
        return vals;
    }

private:
    const EvalOptions& opts_;
    std::size_t budget_;
    std::map<LassoTrace, int> trace_ids_;
    // deque: trace(id) references must survive intern() growth
    std::deque<LassoTrace> traces_;
    std::map<std::pair<int, std::size_t>, int> suffix_ids_;
    std::map<std::pair<int, const FormulaNode*>, bool> ltl_cache_;
    std::map<const FormulaNode*, bool> dc_cache_;
};

// Shared input validation: team connectives only (no one-step operators),
// LTL arguments where the grammar demands them.
inline void validate_team_formula(const Formula& f) {
    if (!f) return;
    switch (f->kind) {
        case FKind::NextE:
        case FKind::NextA:
        case FKind::GloballyE:
        case FKind::GloballyA:
        case FKind::UntilE:
        case FKind::UntilA:
            throw FragmentViolation(
                "one-step operators (XE/XA/GE/GA/UE/UA) have no team-semantics reading; "
                "use the tef evaluator");
        case FKind::Exists:
            if (!is_ltl_formula(f->left))
                throw FragmentViolation("E needs an LTL argument");
            break;
        case FKind::DepAtom:
            for (const Formula& a : f->args)
                if (!is_ltl_formula(a))
                    throw FragmentViolation("dep(...) arguments must be LTL formulas");
            break;
        case FKind::IncAtom:
            for (const Formula& a : f->args)
                if (!is_ltl_formula(a))
                    throw FragmentViolation("inc(...) arguments must be LTL formulas");
            for (const Formula& a : f->args2)
                if (!is_ltl_formula(a))
                    throw FragmentViolation("inc(...) arguments must be LTL formulas");
            break;
        default:
            break;
    }
    validate_team_formula(f->left);
    validate_team_formula(f->right);
    for (const Formula& a : f->args) validate_team_formula(a);
    for (const Formula& a : f->args2) validate_team_formula(a);
}

inline void check_input_guards(const Formula& desugared, std::size_t member_count,
                               const std::vector<const LassoTrace*>& members,
                               const Limits& limits) {
    if (member_count > limits.traces)
        throw ResourceLimitError("team has " + std::to_string(member_count) +
                                 " members, limit is " + std::to_string(limits.traces) +
                                 " (override via TEAMLTL_LIMITS)");
    for (const LassoTrace* t : members) {
        if (t->num_positions() > limits.pos)
            throw ResourceLimitError("trace has " + std::to_string(t->num_positions()) +
                                     " canonical positions, limit is " +
                                     std::to_string(limits.pos) +
                                     " (override via TEAMLTL_LIMITS)");
    }
    if (nesting_depth(desugared) > limits.depth)
        throw ResourceLimitError("formula nesting depth exceeds " +
                                 std::to_string(limits.depth) +
                                 " (override via TEAMLTL_LIMITS)");
}

// ----------------------------------------------------------------------------
// Lax evaluator
// ----------------------------------------------------------------------------
class LaxEvaluator {
public:
    explicit LaxEvaluator(TeamEvalContext& ctx) : ctx_(ctx) {}

    // team: sorted vector of interned trace ids (duplicate-free)
    bool eval(std::vector<int> team, const Formula& f) {
        int team_id = intern_team(std::move(team));
        return eval_interned(team_id, f);
    }

private:
    int intern_team(std::vector<int> team) {
        auto it = team_ids_.find(team);
        if (it != team_ids_.end()) return it->second;
        int id = static_cast<int>(teams_.size());
        team_ids_.emplace(team, id);
        teams_.push_back(std::move(team));
        return id;
    }

    const std::vector<int>& team(int id) const { return teams_[static_cast<std::size_t>(id)]; }

    bool eval_interned(int team_id, const Formula& f) {
        auto key = std::make_pair(team_id, f.get());
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        ctx_.charge();
        bool v = compute(team_id, f);
        memo_.emplace(key, v);
        return v;
    }

    // Builds the sorted team of the global-id mask and evaluates.
    bool eval_mask(std::uint64_t mask, const Formula& f) {
        std::vector<int> members;
        for (int id = 0; mask != 0; ++id, mask >>= 1)
            if (mask & 1) members.push_back(id);
        return eval_interned(intern_team(std::move(members)), f);
    }

    std::uint64_t team_mask(int team_id) {
        std::uint64_t m = 0;
        for (int tid : team(team_id)) m |= ctx_.bit(tid);
        return m;
    }

    bool compute(int team_id, const Formula& f) {
        const std::vector<int>& T = team(team_id);
        switch (f->kind) {
            case FKind::Prop:
            case FKind::NegProp:
            case FKind::Top:
            case FKind::Bot:
                for (int tid : T)
                    if (!ctx_.ltl(tid, f)) return false;
                return true;
            case FKind::And:
                return eval_interned(team_id, f->left) && eval_interned(team_id, f->right);
            case FKind::BOr:
                return eval_interned(team_id, f->left) || eval_interned(team_id, f->right);
            case FKind::BNeg:
                return !eval_interned(team_id, f->left);
            case FKind::Exists:
                for (int tid : T)
                    if (ctx_.ltl(tid, f->left)) return true;
                return false;
            case FKind::DepAtom:
                return dep_holds(T, f);
            case FKind::IncAtom:
                return inc_holds(T, f);
            case FKind::Or:
                return split_holds(T, f);
            case FKind::Next: {
                std::vector<int> advanced;
                advanced.reserve(T.size());
                for (int tid : T) advanced.push_back(ctx_.suffix_id(tid, 1));
                std::sort(advanced.begin(), advanced.end());
                advanced.erase(std::unique(advanced.begin(), advanced.end()), advanced.end());
                return eval_interned(intern_team(std::move(advanced)), f->left);
            }
            case FKind::Globally:
                return globally_holds(T, f);
            case FKind::Until:
                return until_holds(T, f);
            default:
                throw FragmentViolation("unsupported connective in team evaluation");
        }
    }

    bool dep_holds(const std::vector<int>& T, const Formula& f) {
        // args = determinants then target
        std::vector<std::vector<bool>> rows;
        rows.reserve(T.size());
        for (int tid : T) {
            std::vector<bool> row;
            row.reserve(f->args.size());
            for (const Formula& a : f->args) row.push_back(ctx_.ltl(tid, a));
            rows.push_back(std::move(row));
        }
        std::size_t n = f->args.size();
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = i + 1; j < rows.size(); ++j) {
                bool same = true;
                for (std::size_t k = 0; k + 1 < n && same; ++k) same = rows[i][k] == rows[j][k];
                if (same && rows[i][n - 1] != rows[j][n - 1]) return false;
            }
        return true;
    }

    bool inc_holds(const std::vector<int>& T, const Formula& f) {
        for (int tid : T) {
            std::vector<bool> lhs;
            for (const Formula& a : f->args) lhs.push_back(ctx_.ltl(tid, a));
            bool found = false;
            for (int uid : T) {
                bool same = true;
                for (std::size_t k = 0; k < f->args2.size() && same; ++k)
                    same = lhs[k] == ctx_.ltl(uid, f->args2[k]);
                if (same) {
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
        return true;
    }

    // Splitting disjunction: covers T1 u T2 = T.  When a side is downward
    // closed the other side can absorb the overlap, so enumerating subsets
    // (2^n) suffices; otherwise all covers (3^n) are tried.
    bool split_holds(const std::vector<int>& T, const Formula& f) {
        std::size_t n = T.size();
        if (n > 62) throw ResourceLimitError("team too large for cover enumeration");
        std::uint64_t full = n == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << n) - 1;
        auto subteam = [&](std::uint64_t mask) {
            std::vector<int> sub;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (std::uint64_t(1) << i)) sub.push_back(T[i]);
            return intern_team(std::move(sub));
        };
        bool dcl = ctx_.dc_safe(f->left);
        bool dcr = ctx_.dc_safe(f->right);
        if (dcl || dcr) {
            for (std::uint64_t m = 0;; ++m) {
                ctx_.charge();
                // dcl: right side gets an arbitrary subset, left the complement;
                // dcr: symmetric.
                std::uint64_t left_mask = dcl ? (full & ~m) : m;
                std::uint64_t right_mask = dcl ? m : (full & ~m);
                if (eval_interned(subteam(left_mask), f->left) &&
                    eval_interned(subteam(right_mask), f->right))
                    return true;
                if (m == full) break;
            }
            return false;
        }
        for (std::uint64_t m1 = 0;; ++m1) {
            ctx_.charge();
            if (eval_interned(subteam(m1), f->left)) {
                // right side must cover the complement; extras come from m1
                std::uint64_t base = full & ~m1;
                std::uint64_t extra = m1;
                // iterate all subsets of m1 (including empty)
                std::uint64_t sub = extra;
                while (true) {
                    ctx_.charge();
                    if (eval_interned(subteam(base | sub), f->right)) return true;
                    if (sub == 0) break;
                    sub = (sub - 1) & extra;
                }
            }
            if (m1 == full) break;
        }
        return false;
    }

    // G: for every choice of a nonempty suffix set per trace, the union team
    // satisfies the argument.  Enumerated as a running set of suffix-id
    // unions (global-id masks).
    bool globally_holds(const std::vector<int>& T, const Formula& f) {
        std::set<std::uint64_t> unions = {0};
        for (int tid : T) {
            // distinct suffixes of this trace
            std::vector<int> sids;
            for (std::size_t v : ctx_.globally_values(tid)) sids.push_back(ctx_.suffix_id(tid, v));
            std::sort(sids.begin(), sids.end());
            sids.erase(std::unique(sids.begin(), sids.end()), sids.end());
            if (sids.size() > 20)
                throw ResourceLimitError("trace has too many suffixes for G enumeration");
            std::vector<std::uint64_t> choices;
            for (std::uint64_t s = 1; s < (std::uint64_t(1) << sids.size()); ++s) {
                std::uint64_t m = 0;
                for (std::size_t i = 0; i < sids.size(); ++i)
                    if (s & (std::uint64_t(1) << i)) m |= ctx_.bit(sids[i]);
                choices.push_back(m);
            }
            std::sort(choices.begin(), choices.end());
            choices.erase(std::unique(choices.begin(), choices.end()), choices.end());
            std::set<std::uint64_t> next;
            for (std::uint64_t u : unions)
                for (std::uint64_t c : choices) {
                    ctx_.charge();
                    next.insert(u | c);
                    if (next.size() > (std::size_t(1) << 22))
                        throw ResourceLimitError("G enumeration exceeded state bound");
                }
            unions = std::move(next);
        }
        for (std::uint64_t u : unions)
            if (!eval_mask(u, f->left)) return false;
        return true;
    }

    // One per-trace U option: chosen suffix set, T' membership, obligation
    // contribution (maximal team and pivot constraint).
    struct UntilOption {
        std::uint64_t psi;     // suffixes contributed to the U right-argument team
        std::uint64_t vmax;    // suffixes at values below the chosen maximum
        std::uint64_t pivots;  // suffixes at values <= min(chosen min, max-1)
        bool in_tprime;
    };

    std::vector<UntilOption> until_options(int tid, bool singletons_only) {
        std::vector<std::size_t> values = ctx_.until_values(tid);
        // below[i]: mask of suffixes at values strictly below values[i].
        // Values are contiguous 0..hi-1 optionally followed by the loop
        // length; compute prefix-or masks by value.
        std::size_t maxval = values.back();
        std::vector<std::uint64_t> below(maxval + 2, 0);
        for (std::size_t v = 0; v <= maxval; ++v)
            below[v + 1] = below[v] | ctx_.bit(ctx_.suffix_id(tid, v));
        auto option_for = [&](const std::vector<std::size_t>& chosen) {
            UntilOption o{0, 0, 0, false};
            for (std::size_t v : chosen) o.psi |= ctx_.bit(ctx_.suffix_id(tid, v));
            std::size_t mn = chosen.front(), mx = chosen.back();
            if (mx != 0) {
                o.in_tprime = true;
                o.vmax = below[mx];
                o.pivots = below[std::min(mn, mx - 1) + 1];
            }
            return o;
        };
        std::vector<UntilOption> out;
        if (singletons_only) {
            for (std::size_t v : values) out.push_back(option_for({v}));
            return out;
        }
        if (values.size() > 20)
            throw ResourceLimitError("value universe too large for U enumeration");
        for (std::uint64_t s = 1; s < (std::uint64_t(1) << values.size()); ++s) {
            ctx_.charge();
            std::vector<std::size_t> chosen;
            for (std::size_t i = 0; i < values.size(); ++i)
                if (s & (std::uint64_t(1) << i)) chosen.push_back(values[i]);
            out.push_back(option_for(chosen));
        }
        return out;
    }

    bool until_holds(const std::vector<int>& T, const Formula& f) {
        bool dcl = ctx_.dc_safe(f->left);
        bool dcr = ctx_.dc_safe(f->right);
        if (dcl && dcr) return until_dc(T, f, /*singletons=*/true);
        if (dcl) return until_dc(T, f, /*singletons=*/false);
        return until_general(T, f);
    }

    // Downward-closed left argument: only the maximal obligation team needs
    // checking.  With both sides downward closed, singleton value sets
    // suffice (minimum projection preserves satisfaction).
    bool until_dc(const std::vector<int>& T, const Formula& f, bool singletons) {
        std::set<std::pair<std::uint64_t, std::uint64_t>> states = {{0, 0}};
        for (int tid : T) {
            std::vector<UntilOption> opts = until_options(tid, singletons);
            std::set<std::pair<std::uint64_t, std::uint64_t>> next;
            for (const auto& [psi, vmax] : states)
                for (const UntilOption& o : opts) {
                    ctx_.charge();
                    next.emplace(psi | o.psi, vmax | o.vmax);
                    if (next.size() > (std::size_t(1) << 22))
                        throw ResourceLimitError("U enumeration exceeded state bound");
                }
            states = std::move(next);
        }
        for (const auto& [psi, vmax] : states) {
            if (!eval_mask(psi, f->right)) continue;
            if (vmax == 0 || eval_mask(vmax, f->left)) return true;
        }
        return false;
    }

    // General left argument: obligation teams are the subsets of the maximal
    // team V that intersect every trace's pivot set; all of them must
    // satisfy the left argument.
    bool until_general(const std::vector<int>& T, const Formula& f) {
        using State = std::tuple<std::uint64_t, std::uint64_t, std::vector<std::uint64_t>>;
        std::set<State> states = {{0, 0, {}}};
        for (int tid : T) {
            std::vector<UntilOption> opts = until_options(tid, /*singletons=*/false);
            std::set<State> next;
            for (const State& st : states)
                for (const UntilOption& o : opts) {
                    ctx_.charge();
                    auto [psi, vmax, pivots] = st;
                    psi |= o.psi;
                    vmax |= o.vmax;
                    if (o.in_tprime) insert_pivot(pivots, o.pivots);
                    next.emplace(psi, vmax, std::move(pivots));
                    if (next.size() > (std::size_t(1) << 20))
                        throw ResourceLimitError("U enumeration exceeded state bound");
                }
            states = std::move(next);
        }
        for (const auto& [psi, vmax, pivots] : states) {
            if (!eval_mask(psi, f->right)) continue;
            if (pivots.empty()) return true;  // T' empty: no obligations
            if (obligations_hold(vmax, pivots, f->left)) return true;
        }
        return false;
    }

    // Keeps the pivot list inclusion-minimal: a subset constraint implies
    // every superset constraint.
    static void insert_pivot(std::vector<std::uint64_t>& pivots, std::uint64_t p) {
        for (std::uint64_t q : pivots)
            if ((q & p) == q) return;  // existing subset constraint implies p
        pivots.erase(std::remove_if(pivots.begin(), pivots.end(),
                                    [p](std::uint64_t q) { return (q & p) == p; }),
                     pivots.end());
        pivots.push_back(p);
        std::sort(pivots.begin(), pivots.end());
    }

    bool obligations_hold(std::uint64_t vmax, const std::vector<std::uint64_t>& pivots,
                          const Formula& left) {
        // every subset of vmax that meets all pivot masks must satisfy `left`
        std::uint64_t m = vmax;
        while (true) {
            ctx_.charge();
            bool meets = true;
            for (std::uint64_t p : pivots)
                if ((m & p) == 0) {
                    meets = false;
                    break;
                }
            if (meets && !eval_mask(m, left)) return false;
            if (m == 0) break;
            m = (m - 1) & vmax;
        }
        return true;
    }

    TeamEvalContext& ctx_;
    std::map<std::vector<int>, int> team_ids_;
    // deque: handlers hold references into elements across intern_team calls
    std::deque<std::vector<int>> teams_;
    std::map<std::pair<int, const FormulaNode*>, bool> memo_;
};

// ----------------------------------------------------------------------------
// Strict evaluator
// ----------------------------------------------------------------------------
class StrictEvaluator {
public:
    explicit StrictEvaluator(TeamEvalContext& ctx) : ctx_(ctx) {}

    // multiteam: sorted vector of interned trace ids, duplicates allowed
    bool eval(std::vector<int> mt, const Formula& f) {
        std::sort(mt.begin(), mt.end());
        auto key = std::make_pair(mt, f.get());
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        ctx_.charge();
        bool v = compute(mt, f);
        memo_.emplace(std::make_pair(std::move(mt), f.get()), v);
        return v;
    }

private:
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
            case FKind::BNeg:
                return !eval(T, f->left);
            case FKind::Exists:
                for (int tid : T)
                    if (ctx_.ltl(tid, f->left)) return true;
                return false;
            case FKind::DepAtom:
            case FKind::IncAtom:
                return atom_holds(T, f);
            case FKind::Or: {
                // multiset partition: each entry goes to exactly one side
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
            case FKind::Next: {
                std::vector<int> advanced;
                advanced.reserve(T.size());
                for (int tid : T) advanced.push_back(ctx_.suffix_id(tid, 1));
                return eval(std::move(advanced), f->left);
            }
            case FKind::Globally: {
                std::set<std::vector<int>> shifted;
                std::vector<std::vector<std::size_t>> values;
                for (int tid : T) values.push_back(ctx_.globally_values(tid));
                enumerate_products(T, values, shifted);
                for (const std::vector<int>& S : shifted)
                    if (!eval(S, f->left)) return false;
                return true;
            }
            case FKind::Until:
                return until_holds(T, f);
            default:
                throw FragmentViolation("unsupported connective in team evaluation");
        }
    }

    bool atom_holds(const std::vector<int>& T, const Formula& f) {
        if (f->kind == FKind::DepAtom) {
            std::size_t n = f->args.size();
            std::vector<std::vector<bool>> rows;
            for (int tid : T) {
                std::vector<bool> row;
                for (const Formula& a : f->args) row.push_back(ctx_.ltl(tid, a));
                rows.push_back(std::move(row));
            }
            for (std::size_t i = 0; i < rows.size(); ++i)
                for (std::size_t j = i + 1; j < rows.size(); ++j) {
                    bool same = true;
                    for (std::size_t k = 0; k + 1 < n && same; ++k)
                        same = rows[i][k] == rows[j][k];
                    if (same && rows[i][n - 1] != rows[j][n - 1]) return false;
                }
            return true;
        }
        for (int tid : T) {
            std::vector<bool> lhs;
            for (const Formula& a : f->args) lhs.push_back(ctx_.ltl(tid, a));
            bool found = false;
            for (int uid : T) {
                bool same = true;
                for (std::size_t k = 0; k < f->args2.size() && same; ++k)
                    same = lhs[k] == ctx_.ltl(uid, f->args2[k]);
                if (same) {
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
        return true;
    }

    // Collects all distinct suffix multiteams T[f,oo) for per-entry values
    // from the given ranges.
    void enumerate_products(const std::vector<int>& T,
                            const std::vector<std::vector<std::size_t>>& values,
                            std::set<std::vector<int>>& out) {
        std::vector<std::size_t> idx(T.size(), 0);
        while (true) {
            ctx_.charge();
            std::vector<int> shifted;
            shifted.reserve(T.size());
            for (std::size_t i = 0; i < T.size(); ++i)
                shifted.push_back(ctx_.suffix_id(T[i], values[i][idx[i]]));
            std::sort(shifted.begin(), shifted.end());
            out.insert(std::move(shifted));
            if (out.size() > (std::size_t(1) << 20))
                throw ResourceLimitError("suffix enumeration exceeded state bound");
            std::size_t i = 0;
            for (; i < idx.size(); ++i) {
                if (++idx[i] < values[i].size()) break;
                idx[i] = 0;
            }
            if (i == idx.size()) break;
            if (T.empty()) break;
        }
    }

    bool until_holds(const std::vector<int>& T, const Formula& f) {
        std::vector<std::vector<std::size_t>> values;
        for (int tid : T) values.push_back(ctx_.until_values(tid));
        std::vector<std::size_t> idx(T.size(), 0);
        while (true) {
            ctx_.charge();
            std::vector<int> shifted;
            shifted.reserve(T.size());
            for (std::size_t i = 0; i < T.size(); ++i)
                shifted.push_back(ctx_.suffix_id(T[i], values[i][idx[i]]));
            if (eval(std::move(shifted), f->right) && obligations_hold(T, values, idx, f->left))
                return true;
            std::size_t i = 0;
            for (; i < idx.size(); ++i) {
                if (++idx[i] < values[i].size()) break;
                idx[i] = 0;
            }
            if (i == idx.size()) break;
            if (T.empty()) break;
        }
        return false;
    }

    // For entries with value != 0 (the obligation multiteam T'), every
    // pointwise-smaller value tuple must satisfy the left argument.
    bool obligations_hold(const std::vector<int>& T,
                          const std::vector<std::vector<std::size_t>>& values,
                          const std::vector<std::size_t>& idx, const Formula& left) {
        std::vector<int> tprime;
        std::vector<std::vector<std::size_t>> ranges;
        for (std::size_t i = 0; i < T.size(); ++i) {
            std::size_t v = values[i][idx[i]];
            if (v != 0) {
                tprime.push_back(T[i]);
                std::vector<std::size_t> r;
                for (std::size_t w = 0; w < v; ++w) r.push_back(w);
                ranges.push_back(std::move(r));
            }
        }
        if (tprime.empty()) return true;
        std::set<std::vector<int>> teams;
        enumerate_products(tprime, ranges, teams);
        for (const std::vector<int>& S : teams)
            if (!eval(S, left)) return false;
        return true;
    }

    TeamEvalContext& ctx_;
    std::map<std::pair<std::vector<int>, const FormulaNode*>, bool> memo_;
};

} // namespace detail

// ----------------------------------------------------------------------------
// Public entry points
// ----------------------------------------------------------------------------

// Exact lax (set-based) satisfaction of f on the team T.
inline bool eval_lax(const Team& T, const Formula& f, const EvalOptions& opts = {}) {
    Formula d = desugar(f);
    detail::validate_team_formula(d);
    if (opts.audit_bound < 1) throw ResourceLimitError("audit bound must be >= 1");
    std::vector<const LassoTrace*> members;
    for (const LassoTrace& t : T) members.push_back(&t);
    detail::check_input_guards(d, T.size(), members, opts.limits);
    detail::TeamEvalContext ctx(opts);
    std::vector<int> ids;
    ids.reserve(T.size());
    for (const LassoTrace& t : T) ids.push_back(ctx.intern(t));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return detail::LaxEvaluator(ctx).eval(std::move(ids), d);
}

// Exact strict (multiset-based) satisfaction of f on the multiteam T.
inline bool eval_strict(const Multiteam& T, const Formula& f, const EvalOptions& opts = {}) {
    Formula d = desugar(f);
    detail::validate_team_formula(d);
    if (opts.audit_bound < 1) throw ResourceLimitError("audit bound must be >= 1");
    std::vector<const LassoTrace*> members;
    for (const MultiteamEntry& e : T) members.push_back(&e.trace);
    detail::check_input_guards(d, T.size(), members, opts.limits);
    detail::TeamEvalContext ctx(opts);
    std::vector<int> ids;
    ids.reserve(T.size());
    for (const MultiteamEntry& e : T) ids.push_back(ctx.intern(e.trace));
    return detail::StrictEvaluator(ctx).eval(std::move(ids), d);
}

} // namespace teamltl
