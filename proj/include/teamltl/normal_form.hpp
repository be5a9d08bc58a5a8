// ============================================================================
// normal_form.hpp -- disjunctive and quasi-flat normal forms
//
// to_dnf rewrites a formula of team LTL with Boolean disjunction (no ~, no E,
// no dependence/inclusion atoms) into an equivalent Boolean disjunction of
// plain LTL formulas: each disjunct arises from a selection function that
// picks, for every `or` occurrence, the left or the right operand.  The
// disjunct list has length exactly 2^k for k occurrences (duplicates are
// kept; a selection that lands inside a discarded subtree repeats an earlier
// disjunct) and is ordered by a binary counter over the occurrences in
// pre-order, leftmost occurrence most significant, bit value 0 selecting the
// left operand.
//
// enumerate_selections yields the same disjuncts one at a time without
// materializing the list; SelectionStats tracks how many disjuncts are alive
// so that streaming consumers can demonstrate single-disjunct residency.
//
// to_quasiflat rewrites a left-downward-closed formula (every G argument and
// U left argument free of ~ and E) into a list of pairs (alpha, betas)
// denoting the disjunction over i of (alpha_i ∧ AND_j E beta_{i,j}); under
// the set-based semantics the formula holds on a team iff some disjunct has
// alpha_i true on every trace and each beta_{i,j} true on some trace.
// ============================================================================
#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "eval_ltl.hpp"
#include "formula.hpp"
#include "syntax.hpp"
#include "trace.hpp"

namespace teamltl {

struct DnfForm {
    std::vector<Formula> disjuncts;  // LTL formulas, length 2^bor_count
};

struct QuasiFlatDisjunct {
    Formula alpha;                // LTL
    std::vector<Formula> betas;   // LTL, each under an implicit E
};

struct QuasiFlatForm {
    std::vector<QuasiFlatDisjunct> disjuncts;  // empty list denotes bot
};

// ----------------------------------------------------------------------------
// Materialization accounting (used to demonstrate streaming residency)
// ----------------------------------------------------------------------------
struct SelectionStats {
    std::atomic<std::size_t> live{0};
    std::atomic<std::size_t> peak{0};
    std::atomic<std::size_t> total{0};

    void reset() {
        live.store(0);
        peak.store(0);
        total.store(0);
    }
    void on_materialize() {
        std::size_t now = ++live;
        ++total;
        std::size_t p = peak.load();
        while (now > p && !peak.compare_exchange_weak(p, now)) {
        }
    }
    void on_release(std::size_t n = 1) { live -= n; }
};

inline SelectionStats& selection_stats() {
    static SelectionStats stats;
    return stats;
}

namespace detail {

inline void require_bor_fragment(const Formula& f) {
    if (!is_bor_fragment(f))
        throw FragmentViolation(
            "disjunctive normal form needs a formula built from literals, &, |, or, X, G, U "
            "(no ~, no E, no dep/inc)");
}

// Number of `or` occurrences in the subtree (tree occurrences; shared nodes
// have a fixed per-subtree count).
inline std::size_t bor_occurrences(const Formula& f,
                                   std::map<const FormulaNode*, std::size_t>& cache) {
    if (!f) return 0;
    auto it = cache.find(f.get());
    if (it != cache.end()) return it->second;
    std::size_t n = f->kind == FKind::BOr ? 1 : 0;
    n += bor_occurrences(f->left, cache);
    n += bor_occurrences(f->right, cache);
    for (const Formula& a : f->args) n += bor_occurrences(a, cache);
    for (const Formula& a : f->args2) n += bor_occurrences(a, cache);
    cache.emplace(f.get(), n);
    return n;
}

// Rebuilds the formula under the given selection.  `base` is the pre-order
// index of the first `or` occurrence inside f; occurrences in discarded
// subtrees keep their bit positions (their values are simply ignored).
inline Formula apply_selection(const Formula& f, std::uint64_t selection, std::size_t total,
                               std::size_t base,
                               std::map<const FormulaNode*, std::size_t>& cache) {
    if (!f) return f;
    if (f->kind == FKind::BOr) {
        bool right = (selection >> (total - 1 - base)) & 1;
        std::size_t child_base = base + 1 + (right ? bor_occurrences(f->left, cache) : 0);
        return apply_selection(right ? f->right : f->left, selection, total, child_base, cache);
    }
    if (!f->left && !f->right) return f;
    // this node consumes no index; children follow in pre-order sequence
    Formula l = apply_selection(f->left, selection, total, base, cache);
    std::size_t after_left = base + bor_occurrences(f->left, cache);
    Formula r = apply_selection(f->right, selection, total, after_left, cache);
    if (equal(l, f->left) && equal(r, f->right)) return f;
    return make_node(f->kind, f->name, l, r, f->args, f->args2);
}

} // namespace detail

// ----------------------------------------------------------------------------
// Streaming enumeration
// ----------------------------------------------------------------------------
class SelectionCursor {
public:
    explicit SelectionCursor(Formula f) : source_(desugar(f)) {
        detail::require_bor_fragment(source_);
        k_ = detail::bor_occurrences(source_, cache_);
        if (k_ > 62) throw ResourceLimitError("too many `or` occurrences to enumerate");
        count_ = std::uint64_t(1) << k_;
    }

    SelectionCursor(const SelectionCursor&) = delete;
    SelectionCursor& operator=(const SelectionCursor&) = delete;

    ~SelectionCursor() { drop_current(); }

    std::uint64_t size() const { return count_; }
    std::uint64_t position() const { return next_; }

    // Yields the next disjunct, releasing the previous one.
    std::optional<Formula> next() {
        drop_current();
        if (next_ == count_) return std::nullopt;
        Formula d = detail::apply_selection(source_, next_, k_, 0, cache_);
        selection_stats().on_materialize();
        holding_ = true;
        ++next_;
        return d;
    }

    void reset() {
        drop_current();
        next_ = 0;
    }

    // Positions the cursor so the next yield is disjunct `index`.
    void seek(std::uint64_t index) {
        drop_current();
        next_ = index < count_ ? index : count_;
    }

private:
    void drop_current() {
        if (holding_) {
            selection_stats().on_release();
            holding_ = false;
        }
    }

    Formula source_;
    std::map<const FormulaNode*, std::size_t> cache_;
    std::size_t k_ = 0;
    std::uint64_t count_ = 0;
    std::uint64_t next_ = 0;
    bool holding_ = false;
};

// ----------------------------------------------------------------------------
// Materialized disjunctive normal form
// ----------------------------------------------------------------------------
inline DnfForm to_dnf(const Formula& f) {
    Formula d = desugar(f);
    detail::require_bor_fragment(d);
    std::map<const FormulaNode*, std::size_t> cache;
    std::size_t k = detail::bor_occurrences(d, cache);
    if (k > 20) throw ResourceLimitError("too many `or` occurrences to materialize");
    DnfForm out;
    out.disjuncts.reserve(std::size_t(1) << k);
    for (std::uint64_t v = 0; v < (std::uint64_t(1) << k); ++v) {
        out.disjuncts.push_back(detail::apply_selection(d, v, k, 0, cache));
        selection_stats().on_materialize();
    }
    return out;
}

// Removes syntactically equal disjuncts, keeping first occurrences.
inline DnfForm dedupe(const DnfForm& form) {
    DnfForm out;
    std::set<std::string> seen;
    for (const Formula& d : form.disjuncts)
        if (seen.insert(render(d)).second) out.disjuncts.push_back(d);
    return out;
}

// ----------------------------------------------------------------------------
// Quasi-flat normal form
// ----------------------------------------------------------------------------
namespace detail {

inline Formula smart_and(const Formula& a, const Formula& b) {
    if (a->kind == FKind::Top) return b;
    if (b->kind == FKind::Top) return a;
    return land(a, b);
}

inline bool quasiflat_input_ok(const Formula& f) {
    if (!f) return true;
    switch (f->kind) {
        case FKind::Prop:
        case FKind::NegProp:
        case FKind::Top:
        case FKind::Bot:
            return true;
        case FKind::Exists:
            return is_ltl_formula(f->left);
        case FKind::And:
        case FKind::Or:
        case FKind::BOr:
            return quasiflat_input_ok(f->left) && quasiflat_input_ok(f->right);
        case FKind::BNeg:
            return quasiflat_input_ok(f->left);
        case FKind::Next:
            return quasiflat_input_ok(f->left);
        case FKind::Globally:
            return is_bor_fragment(f->left);
        case FKind::Until:
            return is_bor_fragment(f->left) && quasiflat_input_ok(f->right);
        default:
            return false;
    }
}

inline std::vector<QuasiFlatDisjunct> quasiflat_rec(const Formula& f) {
    switch (f->kind) {
        case FKind::Prop:
        case FKind::NegProp:
        case FKind::Top:
        case FKind::Bot:
            return {{f, {}}};
        case FKind::Exists:
            return {{top(), {f->left}}};
        case FKind::And: {
            auto L = quasiflat_rec(f->left);
            auto R = quasiflat_rec(f->right);
            std::vector<QuasiFlatDisjunct> out;
            out.reserve(L.size() * R.size());
            for (const auto& a : L)
                for (const auto& b : R) {
                    QuasiFlatDisjunct d{smart_and(a.alpha, b.alpha), a.betas};
                    d.betas.insert(d.betas.end(), b.betas.begin(), b.betas.end());
                    out.push_back(std::move(d));
                }
            return out;
        }
        case FKind::Or: {
            // (alpha_i | alpha_k) ∧ AND_j E(alpha_i ∧ beta_{i,j})
            //                     ∧ AND_j E(alpha_k ∧ beta_{k,j})
            auto L = quasiflat_rec(f->left);
            auto R = quasiflat_rec(f->right);
            std::vector<QuasiFlatDisjunct> out;
            out.reserve(L.size() * R.size());
            for (const auto& a : L)
                for (const auto& b : R) {
                    QuasiFlatDisjunct d{lor(a.alpha, b.alpha), {}};
                    for (const Formula& bt : a.betas) d.betas.push_back(smart_and(a.alpha, bt));
                    for (const Formula& bt : b.betas) d.betas.push_back(smart_and(b.alpha, bt));
                    out.push_back(std::move(d));
                }
            return out;
        }
        case FKind::BOr: {
            auto L = quasiflat_rec(f->left);
            auto R = quasiflat_rec(f->right);
            L.insert(L.end(), R.begin(), R.end());
            return L;
        }
        case FKind::BNeg: {
            // ~ OR_i (alpha_i ∧ AND_j E beta_{i,j})
            //   = AND_i ( E dual(alpha_i)  or  OR_j dual(beta_{i,j}) )
            // distributed left-to-right into disjuncts; per i the E-option
            // comes first, then the beta options in order.
            auto D = quasiflat_rec(f->left);
            std::vector<QuasiFlatDisjunct> out = {{top(), {}}};
            for (const auto& d : D) {
                std::vector<QuasiFlatDisjunct> next;
                std::vector<QuasiFlatDisjunct> options;
                options.push_back({top(), {dual(d.alpha)}});
                for (const Formula& bt : d.betas) options.push_back({dual(bt), {}});
                for (const auto& acc : out)
                    for (const auto& opt : options) {
                        QuasiFlatDisjunct m{smart_and(acc.alpha, opt.alpha), acc.betas};
                        m.betas.insert(m.betas.end(), opt.betas.begin(), opt.betas.end());
                        next.push_back(std::move(m));
                        if (next.size() > (std::size_t(1) << 20))
                            throw ResourceLimitError(
                                "quasi-flat negation expansion exceeded size bound");
                    }
                out = std::move(next);
            }
            return out;
        }
        case FKind::Next: {
            auto D = quasiflat_rec(f->left);
            for (auto& d : D) {
                d.alpha = next(d.alpha);
                for (Formula& bt : d.betas) bt = next(bt);
            }
            return D;
        }
        case FKind::Globally: {
            DnfForm dnf = to_dnf(f->left);
            std::vector<QuasiFlatDisjunct> out;
            out.reserve(dnf.disjuncts.size());
            for (const Formula& a : dnf.disjuncts) out.push_back({globally(a), {}});
            return out;
        }
        case FKind::Until: {
            // alpha_i U alpha_k ∧ AND_j E(alpha_i U (alpha_k ∧ beta_{k,j}))
            DnfForm dnf = to_dnf(f->left);
            auto R = quasiflat_rec(f->right);
            std::vector<QuasiFlatDisjunct> out;
            out.reserve(dnf.disjuncts.size() * R.size());
            for (const Formula& a : dnf.disjuncts)
                for (const auto& b : R) {
                    QuasiFlatDisjunct d{until(a, b.alpha), {}};
                    for (const Formula& bt : b.betas)
                        d.betas.push_back(until(a, smart_and(b.alpha, bt)));
                    out.push_back(std::move(d));
                }
            return out;
        }
        default:
            throw FragmentViolation("quasi-flat translation hit an unsupported connective");
    }
}

} // namespace detail

inline QuasiFlatForm to_quasiflat(const Formula& f) {
    Formula d = desugar(f);
    if (!detail::quasiflat_input_ok(d))
        throw FragmentViolation(
            "quasi-flat translation needs a left-downward-closed formula: every G argument "
            "and U left argument must avoid ~, E and atoms (and dep/inc are not supported)");
    return QuasiFlatForm{detail::quasiflat_rec(d)};
}

// Removes syntactically equal disjuncts, keeping first occurrences.
inline QuasiFlatForm dedupe(const QuasiFlatForm& form) {
    QuasiFlatForm out;
    std::set<std::string> seen;
    for (const QuasiFlatDisjunct& d : form.disjuncts) {
        std::string key = render(d.alpha);
        for (const Formula& b : d.betas) key += " @@ " + render(b);
        if (seen.insert(key).second) out.disjuncts.push_back(d);
    }
    return out;
}

// Direct evaluation of the quasi-flat reading on a team: some disjunct has
// alpha on every trace and each beta on some trace.
inline bool eval_quasiflat(const Team& T, const QuasiFlatForm& form) {
    for (const QuasiFlatDisjunct& d : form.disjuncts) {
        bool ok = true;
        for (const LassoTrace& t : T)
            if (!eval_ltl(t, d.alpha)) {
                ok = false;
                break;
            }
        for (std::size_t j = 0; ok && j < d.betas.size(); ++j) {
            bool found = false;
            for (const LassoTrace& t : T)
                if (eval_ltl(t, d.betas[j])) {
                    found = true;
                    break;
                }
            ok = found;
        }
        if (ok) return true;
    }
    return false;
}

} // namespace teamltl
