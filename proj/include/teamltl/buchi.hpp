// ============================================================================
// buchi.hpp -- tableau-style translation of LTL formulas to Buchi automata
//
// The construction is the classical on-the-fly expansion with formula-set
// nodes: a node carries the obligations that hold at the position it
// represents (Old), plus the obligations deferred to the next position
// (Next).  G unfolds as "arg now, G again next"; U splits into "right now"
// or "left now, U again next"; each U subformula contributes one acceptance
// set (nodes where the U is absent or its right argument is present).  The
// generalized acceptance is then degeneralized with a round-robin counter.
//
// Convention: a state constrains the letter it consumes when *leaving* —
// the run n_0 n_1 n_2 ... over the word a_0 a_1 a_2 ... requires a_i to
// satisfy the literals of n_i.
//
// No minimization is attempted; correctness and auditability over size.
// ============================================================================
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"
#include "trace.hpp"

namespace teamltl {

struct BuchiAutomaton {
    // Letter constraints per state: positive literals that must be in the
    // consumed letter, negative literals that must be absent.
    std::vector<Step> pos;
    std::vector<Step> neg;
    std::vector<std::vector<int>> adj;  // sorted successor state ids
    std::vector<int> initial;           // sorted
    std::vector<bool> accepting;
    std::vector<std::string> ap;        // sorted propositions of the source formula

    std::size_t size() const { return adj.size(); }
    bool letter_ok(int state, const Step& letter) const {
        for (const std::string& p : pos[static_cast<std::size_t>(state)])
            if (!letter.count(p)) return false;
        for (const std::string& p : neg[static_cast<std::size_t>(state)])
            if (letter.count(p)) return false;
        return true;
    }
};

namespace detail {

// Stable integer ids for the subformula occurrences of one formula,
// assigned in pre-order; gives deterministic set orders independent of
// allocation addresses.
class FormulaIds {
public:
    explicit FormulaIds(const Formula& f) { walk(f); }

    int id(const Formula& f) const { return ids_.at(f.get()); }
    const Formula& formula(int id) const { return table_[static_cast<std::size_t>(id)]; }
    std::size_t count() const { return table_.size(); }

private:
    void walk(const Formula& f) {
        if (!f || ids_.count(f.get())) return;
        ids_.emplace(f.get(), static_cast<int>(table_.size()));
        table_.push_back(f);
        walk(f->left);
        walk(f->right);
    }
    std::map<const FormulaNode*, int> ids_;
    std::vector<Formula> table_;
};

struct TableauNode {
    std::set<int> old;
    std::set<int> next;
    std::set<int> incoming;  // -1 marks the virtual initial predecessor
};

class TableauBuilder {
public:
    explicit TableauBuilder(const Formula& f) : ids_(f), root_(f) {}

    BuchiAutomaton build() {
        expand({ids_.id(root_)}, {}, {}, {-1});

        // acceptance sets, one per U occurrence (ascending id order)
        std::vector<std::pair<int, int>> untils;  // (until id, right-arg id)
        for (int i = 0; i < static_cast<int>(ids_.count()); ++i) {
            const Formula& g = ids_.formula(i);
            if (g->kind == FKind::Until) untils.emplace_back(i, ids_.id(g->right));
        }
        std::size_t k = std::max<std::size_t>(1, untils.size());
        auto in_set = [&](std::size_t set_idx, const TableauNode& n) {
            if (untils.empty()) return true;
            auto [u, r] = untils[set_idx];
            return !n.old.count(u) || n.old.count(r);
        };

        BuchiAutomaton ba;
        std::size_t m = nodes_.size();
        ba.pos.resize(m * k);
        ba.neg.resize(m * k);
        ba.adj.resize(m * k);
        ba.accepting.assign(m * k, false);
        for (std::size_t q = 0; q < m; ++q) {
            Step qpos, qneg;
            for (int fid : nodes_[q].old) {
                const Formula& g = ids_.formula(fid);
                if (g->kind == FKind::Prop) qpos.insert(g->name);
                if (g->kind == FKind::NegProp) qneg.insert(g->name);
            }
            for (std::size_t i = 0; i < k; ++i) {
                ba.pos[q * k + i] = qpos;
                ba.neg[q * k + i] = qneg;
                if (i == 0 && in_set(0, nodes_[q])) ba.accepting[q * k] = true;
            }
        }
        for (std::size_t r = 0; r < m; ++r)
            for (int q : nodes_[r].incoming) {
                if (q < 0) continue;
                for (std::size_t i = 0; i < k; ++i) {
                    std::size_t j = in_set(i, nodes_[static_cast<std::size_t>(q)])
                                        ? (i + 1) % k
                                        : i;
                    ba.adj[static_cast<std::size_t>(q) * k + i].push_back(
                        static_cast<int>(r * k + j));
                }
            }
        for (auto& a : ba.adj) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
        for (std::size_t r = 0; r < m; ++r)
            if (nodes_[r].incoming.count(-1)) ba.initial.push_back(static_cast<int>(r * k));
        for (const std::string& p : props_of(root_)) ba.ap.push_back(p);
        return ba;
    }

private:
    void expand(std::set<int> neu, std::set<int> old, std::set<int> next,
                std::set<int> incoming) {
        if (neu.empty()) {
            auto key = std::make_pair(old, next);
            if (auto it = node_index_.find(key); it != node_index_.end()) {
                auto& inc = nodes_[static_cast<std::size_t>(it->second)].incoming;
                inc.insert(incoming.begin(), incoming.end());
                return;
            }
            int id = static_cast<int>(nodes_.size());
            if (nodes_.size() >= 20000)
                throw ResourceLimitError("automaton construction exceeded state bound");
            nodes_.push_back({old, next, incoming});
            node_index_.emplace(std::move(key), id);
            expand(next, {}, {}, {id});
            return;
        }
        int fid = *neu.begin();
        neu.erase(neu.begin());
        const Formula& g = ids_.formula(fid);
        auto add_new = [&](std::set<int> base, const Formula& child) {
            int cid = ids_.id(child);
            if (!old.count(cid)) base.insert(cid);
            return base;
        };
        switch (g->kind) {
            case FKind::Bot:
                return;  // inconsistent node, dropped
            case FKind::Top:
                // recorded in old (no letter constraint) so that a fulfilled
                // `x U top` counts as fulfilled in the acceptance sets
                old.insert(fid);
                expand(std::move(neu), std::move(old), std::move(next), std::move(incoming));
                return;
            case FKind::Prop:
            case FKind::NegProp: {
                FKind opposite = g->kind == FKind::Prop ? FKind::NegProp : FKind::Prop;
                for (int oid : old) {
                    const Formula& h = ids_.formula(oid);
                    if (h->kind == opposite && h->name == g->name) return;  // contradiction
                }
                old.insert(fid);
                expand(std::move(neu), std::move(old), std::move(next), std::move(incoming));
                return;
            }
            case FKind::And: {
                std::set<int> n2 = add_new(add_new(neu, g->left), g->right);
                old.insert(fid);
                expand(std::move(n2), std::move(old), std::move(next), std::move(incoming));
                return;
            }
            case FKind::Or: {
                std::set<int> old2 = old;
                old2.insert(fid);
                expand(add_new(neu, g->left), old2, next, incoming);
                expand(add_new(neu, g->right), std::move(old2), std::move(next),
                       std::move(incoming));
                return;
            }
            case FKind::Next: {
                old.insert(fid);
                next.insert(ids_.id(g->left));
                expand(std::move(neu), std::move(old), std::move(next), std::move(incoming));
                return;
            }
            case FKind::Globally: {
                std::set<int> n2 = add_new(neu, g->left);
                old.insert(fid);
                next.insert(fid);
                expand(std::move(n2), std::move(old), std::move(next), std::move(incoming));
                return;
            }
            case FKind::Until: {
                std::set<int> old2 = old;
                old2.insert(fid);
                // fulfill now
                expand(add_new(neu, g->right), old2, next, incoming);
                // or defer: left now, the U again next
                std::set<int> next2 = next;
                next2.insert(fid);
                expand(add_new(neu, g->left), std::move(old2), std::move(next2),
                       std::move(incoming));
                return;
            }
            default:
                throw FragmentViolation("automaton construction needs a plain LTL formula");
        }
    }

    FormulaIds ids_;
    Formula root_;
    std::vector<TableauNode> nodes_;
    std::map<std::pair<std::set<int>, std::set<int>>, int> node_index_;
};

// Generic search for a reachable accepting cycle in an explicit graph.
// Returns (stem, cycle) as node-id paths: stem leads from an initial node to
// the cycle entry; cycle starts and ends at that entry (entry not repeated).
// Exploration follows ascending node ids, so results are deterministic.
struct LassoSearch {
    const std::vector<std::vector<int>>& adj;
    const std::vector<bool>& accepting;

    std::optional<std::pair<std::vector<int>, std::vector<int>>> run(
        const std::vector<int>& initial) const {
        std::size_t n = adj.size();
        std::vector<int> parent(n, -2);  // -2 unvisited, -1 root
        std::vector<int> order;
        for (int s : initial)
            if (parent[static_cast<std::size_t>(s)] == -2) {
                parent[static_cast<std::size_t>(s)] = -1;
                order.push_back(s);
            }
        for (std::size_t head = 0; head < order.size(); ++head) {
            int u = order[head];
            for (int v : adj[static_cast<std::size_t>(u)])
                if (parent[static_cast<std::size_t>(v)] == -2) {
                    parent[static_cast<std::size_t>(v)] = u;
                    order.push_back(v);
                }
        }
        for (int a : order) {
            if (!accepting[static_cast<std::size_t>(a)]) continue;
            std::optional<std::vector<int>> cyc = cycle_through(a);
            if (!cyc) continue;
            std::vector<int> stem;
            for (int u = a; u != -1; u = parent[static_cast<std::size_t>(u)])
                stem.push_back(u);
            std::reverse(stem.begin(), stem.end());
            stem.pop_back();  // cycle entry itself belongs to the cycle
            return std::make_pair(std::move(stem), std::move(*cyc));
        }
        return std::nullopt;
    }

private:
    // shortest path a -> ... -> a (length >= 1) via BFS
    std::optional<std::vector<int>> cycle_through(int a) const {
        std::size_t n = adj.size();
        std::vector<int> parent(n, -2);
        std::vector<int> order;
        for (int v : adj[static_cast<std::size_t>(a)])
            if (parent[static_cast<std::size_t>(v)] == -2) {
                parent[static_cast<std::size_t>(v)] = -1;
                order.push_back(v);
            }
        bool self = false;
        for (int v : adj[static_cast<std::size_t>(a)]) self |= v == a;
        if (self) return std::vector<int>{a};
        for (std::size_t head = 0; head < order.size(); ++head) {
            int u = order[head];
            for (int v : adj[static_cast<std::size_t>(u)]) {
                if (v == a) {
                    std::vector<int> path;
                    for (int w = u; w != -1; w = parent[static_cast<std::size_t>(w)])
                        path.push_back(w);
                    path.push_back(a);
                    std::reverse(path.begin(), path.end());
                    return path;
                }
                if (parent[static_cast<std::size_t>(v)] == -2) {
                    parent[static_cast<std::size_t>(v)] = u;
                    order.push_back(v);
                }
            }
        }
        return std::nullopt;
    }
};

} // namespace detail

inline BuchiAutomaton ltl_to_buchi(const Formula& f) {
    Formula d = desugar(f);
    if (!is_ltl_formula(d))
        throw FragmentViolation("automaton construction needs a plain LTL formula");
    return detail::TableauBuilder(d).build();
}

// Does the automaton accept the infinite word spelled by the lasso trace?
inline bool accepts_lasso(const BuchiAutomaton& ba, const LassoTrace& t) {
    std::size_t span = t.num_positions();
    std::size_t n = ba.size() * span;
    std::vector<std::vector<int>> adj(n);
    std::vector<bool> accepting(n, false);
    auto node = [&](int q, std::size_t i) { return static_cast<std::size_t>(q) * span + i; };
    for (int q = 0; q < static_cast<int>(ba.size()); ++q)
        for (std::size_t i = 0; i < span; ++i) {
            accepting[node(q, i)] = ba.accepting[static_cast<std::size_t>(q)];
            if (!ba.letter_ok(q, t.step_at(i))) continue;
            std::size_t j = t.canonical_position(i + 1);
            for (int r : ba.adj[static_cast<std::size_t>(q)])
                adj[node(q, i)].push_back(static_cast<int>(node(r, j)));
        }
    std::vector<int> initial;
    for (int q : ba.initial) initial.push_back(static_cast<int>(node(q, 0)));
    return detail::LassoSearch{adj, accepting}.run(initial).has_value();
}

} // namespace teamltl
