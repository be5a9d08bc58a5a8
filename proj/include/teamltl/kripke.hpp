// ============================================================================
// kripke.hpp -- finite Kripke structures and their lasso traces
//
// A structure is a finite state set with a left-total edge relation, a
// labeling of states with proposition sets, and one initial state.  The text
// format is line-oriented:
//
//     states: s0 s1 ...
//     init: s0
//     label s0 {p,q}        # one line per state; {} allowed
//     edge s0 s1            # one line per edge
//
// with `#` comments and blank lines ignored.  The `states:` line must come
// first.  Missing outgoing edges raise NotLeftTotalError naming a sink.
// ============================================================================
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "trace.hpp"

namespace teamltl {

struct KripkeStructure {
    std::vector<std::string> states;            // index = state id, file order
    std::map<std::string, int> index;           // name -> id
    std::vector<Step> labels;                   // by state id
    std::vector<std::vector<int>> succ;         // sorted successor ids
    int initial = 0;

    const std::string& name(int id) const { return states[static_cast<std::size_t>(id)]; }
    const Step& label(int id) const { return labels[static_cast<std::size_t>(id)]; }
    bool has_edge(int a, int b) const {
        const auto& s = succ[static_cast<std::size_t>(a)];
        return std::binary_search(s.begin(), s.end(), b);
    }
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

} // namespace detail

inline KripkeStructure parse_kripke(const std::string& text) {
    KripkeStructure K;
    bool have_states = false, have_init = false;
    std::vector<bool> labeled;
    std::vector<std::set<int>> succ_sets;
    std::size_t line_no = 0;
    std::string line;
    std::size_t start = 0;
    auto fail = [&](const std::string& msg) {
        throw ParseError("kripke:" + std::to_string(line_no) + ": " + msg);
    };
    auto state_id = [&](const std::string& name) {
        auto it = K.index.find(name);
        if (it == K.index.end()) fail("unknown state '" + name + "'");
        return it->second;
    };
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::vector<std::string> tok = detail::split_ws(line);
        if (tok.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (tok[0] == "states:") {
            if (have_states) fail("duplicate states: line");
            have_states = true;
            if (tok.size() < 2) fail("states: line needs at least one state");
            for (std::size_t i = 1; i < tok.size(); ++i) {
                if (K.index.count(tok[i])) fail("duplicate state '" + tok[i] + "'");
                K.index.emplace(tok[i], static_cast<int>(K.states.size()));
                K.states.push_back(tok[i]);
            }
            K.labels.resize(K.states.size());
            labeled.assign(K.states.size(), false);
            succ_sets.resize(K.states.size());
        } else if (!have_states) {
            fail("the states: line must come first");
        } else if (tok[0] == "init:") {
            if (have_init) fail("duplicate init: line");
            if (tok.size() != 2) fail("init: line needs exactly one state");
            K.initial = state_id(tok[1]);
            have_init = true;
        } else if (tok[0] == "label") {
            if (tok.size() < 3) fail("label line needs a state and a {..} set");
            int id = state_id(tok[1]);
            if (labeled[static_cast<std::size_t>(id)])
                fail("duplicate label for state '" + tok[1] + "'");
            std::string rest;
            for (std::size_t i = 2; i < tok.size(); ++i) rest += tok[i];
            detail::LineScanner sc(rest, line_no);
            K.labels[static_cast<std::size_t>(id)] = detail::parse_step(sc);
            if (!sc.at_end()) fail("trailing input after label set");
            labeled[static_cast<std::size_t>(id)] = true;
        } else if (tok[0] == "edge") {
            if (tok.size() != 3) fail("edge line needs two states");
            succ_sets[static_cast<std::size_t>(state_id(tok[1]))].insert(state_id(tok[2]));
        } else {
            fail("unrecognized directive '" + tok[0] + "'");
        }
        if (end == text.size()) break;
    }
    if (!have_states) throw ParseError("kripke: missing states: line");
    if (!have_init) throw ParseError("kripke: missing init: line");
    for (std::size_t i = 0; i < K.states.size(); ++i)
        if (!labeled[i])
            throw ParseError("kripke: state '" + K.states[i] + "' has no label line");
    for (std::size_t i = 0; i < K.states.size(); ++i)
        if (succ_sets[i].empty()) throw NotLeftTotalError(K.states[i]);
    K.succ.resize(K.states.size());
    for (std::size_t i = 0; i < K.states.size(); ++i)
        K.succ[i].assign(succ_sets[i].begin(), succ_sets[i].end());
    return K;
}

// The trace generated by the state path stem + cycle (cycle entered after the
// stem, repeated forever).
inline LassoTrace trace_of_path(const KripkeStructure& K, const std::vector<int>& stem,
                                const std::vector<int>& cycle) {
    std::vector<Step> prefix, loop;
    for (int s : stem) prefix.push_back(K.label(s));
    for (int s : cycle) loop.push_back(K.label(s));
    return LassoTrace(prefix, loop);
}

// All simple lassos from the initial state: paths with pairwise-distinct
// states that close a cycle back onto the path, total path length <= max_len
// states.  Returned traces are canonical and duplicate-free, sorted.
inline std::vector<LassoTrace> enumerate_simple_lassos(const KripkeStructure& K,
                                                       std::size_t max_len) {
    std::vector<LassoTrace> out;
    std::vector<int> path;
    std::vector<bool> on_path(K.states.size(), false);
    std::vector<int> pos_of(K.states.size(), -1);
    struct Rec {
        const KripkeStructure& K;
        std::size_t max_len;
        std::vector<int>& path;
        std::vector<bool>& on_path;
        std::vector<int>& pos_of;
        std::vector<LassoTrace>& out;
        void go(int s) {
            path.push_back(s);
            on_path[static_cast<std::size_t>(s)] = true;
            pos_of[static_cast<std::size_t>(s)] = static_cast<int>(path.size()) - 1;
            for (int n : K.succ[static_cast<std::size_t>(s)]) {
                if (on_path[static_cast<std::size_t>(n)]) {
                    int at = pos_of[static_cast<std::size_t>(n)];
                    std::vector<int> stem(path.begin(), path.begin() + at);
                    std::vector<int> cycle(path.begin() + at, path.end());
                    out.push_back(trace_of_path(K, stem, cycle));
                } else if (path.size() < max_len) {
                    go(n);
                }
            }
            on_path[static_cast<std::size_t>(s)] = false;
            pos_of[static_cast<std::size_t>(s)] = -1;
            path.pop_back();
        }
    } rec{K, max_len, path, on_path, pos_of, out};
    rec.go(K.initial);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace teamltl
