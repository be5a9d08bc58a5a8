// ============================================================================
// trace.hpp -- lasso traces, teams, multiteams, and the team file format
//
// A LassoTrace finitely represents an ultimately periodic infinite trace
// u . v^omega, where u (the prefix) and v (the loop) are finite sequences of
// proposition sets.  Two lassos may denote the same infinite word; we keep
// every trace in a canonical form (minimal loop, maximal absorption of the
// prefix into the loop) so that structural equality coincides with semantic
// equality.  Canonicalization happens at construction; all operations
// (suffix, projection) return canonical traces.
//
// Positions:  the suffix map i |-> t[i,oo) takes only finitely many values;
// every value is realized at a "canonical position" in {0, ..., P+L-1}
// (P = prefix length, L = loop length).  For i >= P, suffix(t, i) reduces i
// to P + ((i-P) mod L) first.  On canonical traces the canonical positions
// produce pairwise distinct suffixes, which the evaluators rely on.
//
// Teams are duplicate-free trace sets; multiteams are indexed families that
// may repeat a trace under distinct indices.
// ============================================================================
#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace teamltl {

// One time step: the set of atomic propositions holding at that step.
using Step = std::set<std::string>;

// ----------------------------------------------------------------------------
// LassoTrace
// ----------------------------------------------------------------------------
class LassoTrace {
public:
    // Builds the canonical representation of prefix . loop^omega.
    // The loop must be nonempty.
    LassoTrace(std::vector<Step> prefix, std::vector<Step> loop)
        : prefix_(std::move(prefix)), loop_(std::move(loop)) {
        if (loop_.empty())
            throw ParseError("lasso trace needs a nonempty loop");
        normalize();
    }

    const std::vector<Step>& prefix() const { return prefix_; }
    const std::vector<Step>& loop() const { return loop_; }
    std::size_t prefix_len() const { return prefix_.size(); }
    std::size_t loop_len() const { return loop_.size(); }

    // Number of canonical positions (= number of distinct suffixes).
    std::size_t num_positions() const { return prefix_.size() + loop_.size(); }

    // Reduces an arbitrary position to its canonical representative.
    std::size_t canonical_position(std::size_t i) const {
        if (i < prefix_.size()) return i;
        return prefix_.size() + (i - prefix_.size()) % loop_.size();
    }

    // The proposition set at position i.
    const Step& step_at(std::size_t i) const {
        std::size_t j = canonical_position(i);
        return j < prefix_.size() ? prefix_[j] : loop_[j - prefix_.size()];
    }

    // The canonical lasso denoting t[i,oo).
    LassoTrace suffix(std::size_t i) const {
        std::size_t j = canonical_position(i);
        if (j <= prefix_.size()) {
            return LassoTrace(std::vector<Step>(prefix_.begin() + static_cast<std::ptrdiff_t>(j),
                                                prefix_.end()),
                              loop_);
        }
        std::size_t k = j - prefix_.size();  // 0 < k < loop length
        std::vector<Step> rotated(loop_.begin() + static_cast<std::ptrdiff_t>(k), loop_.end());
        rotated.insert(rotated.end(), loop_.begin(), loop_.begin() + static_cast<std::ptrdiff_t>(k));
        return LassoTrace({}, std::move(rotated));
    }

    // Pointwise projection onto the given proposition set (renormalizes).
    LassoTrace restrict_ap(const std::set<std::string>& ap) const {
        auto project = [&ap](const std::vector<Step>& steps) {
            std::vector<Step> out;
            out.reserve(steps.size());
            for (const Step& s : steps) {
                Step kept;
                for (const std::string& p : s)
                    if (ap.count(p)) kept.insert(p);
                out.push_back(std::move(kept));
            }
            return out;
        };
        return LassoTrace(project(prefix_), project(loop_));
    }

    // All propositions mentioned anywhere on the trace.
    std::set<std::string> props() const {
        std::set<std::string> out;
        for (const Step& s : prefix_) out.insert(s.begin(), s.end());
        for (const Step& s : loop_) out.insert(s.begin(), s.end());
        return out;
    }

    // Deterministic serialization, e.g. "{p} {q,r} / {}".  An empty prefix
    // renders as "/ ..." alone.  Injective on canonical traces, so it doubles
    // as the team serialization sort key.
    std::string render() const {
        std::string out;
        for (const Step& s : prefix_) {
            out += render_step(s);
            out += ' ';
        }
        out += '/';
        for (const Step& s : loop_) {
            out += ' ';
            out += render_step(s);
        }
        return out;
    }

    friend bool operator==(const LassoTrace& a, const LassoTrace& b) {
        return a.prefix_ == b.prefix_ && a.loop_ == b.loop_;
    }
    friend bool operator!=(const LassoTrace& a, const LassoTrace& b) { return !(a == b); }
    friend bool operator<(const LassoTrace& a, const LassoTrace& b) {
        if (a.prefix_ != b.prefix_) return a.prefix_ < b.prefix_;
        return a.loop_ < b.loop_;
    }

private:
    static std::string render_step(const Step& s) {
        std::string out = "{";
        bool first = true;
        for (const std::string& p : s) {
            if (!first) out += ',';
            out += p;
            first = false;
        }
        out += '}';
        return out;
    }

    // Canonical form: (1) shrink the loop to its primitive root; (2) absorb
    // prefix steps that coincide with the step one loop-length earlier, i.e.
    // while the last prefix step equals the last loop step, drop it and
    // rotate the loop right.  Rotation preserves primitivity, so the two
    // passes need not repeat.
    void normalize() {
        for (std::size_t d = 1; d < loop_.size(); ++d) {
            if (loop_.size() % d != 0) continue;
            bool periodic = true;
            for (std::size_t i = d; i < loop_.size() && periodic; ++i)
                periodic = loop_[i] == loop_[i % d];
            if (periodic) {
                loop_.resize(d);
                break;
            }
        }
        while (!prefix_.empty() && prefix_.back() == loop_.back()) {
            prefix_.pop_back();
            std::rotate(loop_.begin(), loop_.end() - 1, loop_.end());
        }
    }

    std::vector<Step> prefix_;
    std::vector<Step> loop_;
};

// ----------------------------------------------------------------------------
// Teams and multiteams
// ----------------------------------------------------------------------------

// A team is a duplicate-free vector of canonical traces, sorted by rendering
// for deterministic serialization.
using Team = std::vector<LassoTrace>;

inline Team make_team(std::vector<LassoTrace> traces) {
    std::sort(traces.begin(), traces.end(),
              [](const LassoTrace& a, const LassoTrace& b) { return a.render() < b.render(); });
    traces.erase(std::unique(traces.begin(), traces.end()), traces.end());
    return traces;
}

inline Team restrict_ap(const Team& team, const std::set<std::string>& ap) {
    std::vector<LassoTrace> projected;
    projected.reserve(team.size());
    for (const LassoTrace& t : team) projected.push_back(t.restrict_ap(ap));
    return make_team(std::move(projected));
}

// A multiteam entry: an opaque index paired with a trace.  Distinct entries
// carry distinct indices; the same trace may appear under several indices.
struct MultiteamEntry {
    std::string index;
    LassoTrace trace;
};

using Multiteam = std::vector<MultiteamEntry>;

inline Team support(const Multiteam& mt) {
    std::vector<LassoTrace> traces;
    traces.reserve(mt.size());
    for (const MultiteamEntry& e : mt) traces.push_back(e.trace);
    return make_team(std::move(traces));
}

// ----------------------------------------------------------------------------
// Team file format
//
//   trace NAME = STEP+ / STEP+      declares a named lasso (loop after '/')
//   multi NAME xK                   marks K >= 1 multiteam copies of NAME
//
// STEP is `{}` or `{p,q,...}`.  Blank lines and `#` comments are ignored.
// A team is the set of all declared traces; a multiteam takes each declared
// trace with its multiplicity (default 1), indexed NAME#1, NAME#2, ...
// ----------------------------------------------------------------------------
struct TeamFile {
    std::vector<std::pair<std::string, LassoTrace>> traces;  // declaration order
    std::map<std::string, std::size_t> multiplicity;         // names with `multi` lines

    Team team() const {
        std::vector<LassoTrace> all;
        all.reserve(traces.size());
        for (const auto& [name, t] : traces) all.push_back(t);
        return make_team(std::move(all));
    }

    Multiteam multiteam() const {
        Multiteam mt;
        for (const auto& [name, t] : traces) {
            auto it = multiplicity.find(name);
            std::size_t copies = it == multiplicity.end() ? 1 : it->second;
            for (std::size_t k = 1; k <= copies; ++k)
                mt.push_back(MultiteamEntry{name + "#" + std::to_string(k), t});
        }
        return mt;
    }
};

namespace detail {

// Minimal per-line scanner for the team file format.
class LineScanner {
public:
    LineScanner(const std::string& line, std::size_t line_no) : line_(line), line_no_(line_no) {}

    void skip_ws() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= line_.size();
    }

    bool try_consume(char c) {
        skip_ws();
        if (pos_ < line_.size() && line_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!try_consume(c)) fail(std::string("expected '") + c + "'");
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < line_.size() &&
               (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) fail("expected an identifier");
        return line_.substr(start, pos_ - start);
    }

    std::size_t number() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected a number");
        return std::stoul(line_.substr(start, pos_ - start));
    }

    char peek() {
        skip_ws();
        return pos_ < line_.size() ? line_[pos_] : '\0';
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("line " + std::to_string(line_no_) + ", column " +
                         std::to_string(pos_ + 1) + ": " + msg);
    }

private:
    const std::string& line_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

inline Step parse_step(LineScanner& sc) {
    sc.expect('{');
    Step step;
    if (!sc.try_consume('}')) {
        while (true) {
            step.insert(sc.ident());
            if (sc.try_consume('}')) break;
            sc.expect(',');
        }
    }
    return step;
}

} // namespace detail

inline TeamFile parse_team_file(const std::string& text) {
    TeamFile out;
    std::map<std::string, std::size_t> seen;  // name -> defining line
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);

        detail::LineScanner sc(line, line_no);
        if (sc.at_end()) continue;
        std::string keyword = sc.ident();
        if (keyword == "trace") {
            std::string name = sc.ident();
            if (seen.count(name))
                sc.fail("trace '" + name + "' already declared on line " +
                        std::to_string(seen[name]));
            seen[name] = line_no;
            sc.expect('=');
            std::vector<Step> prefix, loop;
            while (sc.peek() == '{') prefix.push_back(detail::parse_step(sc));
            sc.expect('/');
            while (sc.peek() == '{') loop.push_back(detail::parse_step(sc));
            if (loop.empty()) sc.fail("loop needs at least one step");
            if (!sc.at_end()) sc.fail("trailing input after trace declaration");
            out.traces.emplace_back(name, LassoTrace(std::move(prefix), std::move(loop)));
        } else if (keyword == "multi") {
            std::string name = sc.ident();
            sc.expect('x');
            std::size_t count = sc.number();
            if (count < 1) sc.fail("multiplicity must be at least 1");
            if (!sc.at_end()) sc.fail("trailing input after multi declaration");
            if (out.multiplicity.count(name))
                sc.fail("multiplicity for '" + name + "' already declared");
            out.multiplicity[name] = count;
        } else {
            sc.fail("unknown declaration '" + keyword + "' (expected 'trace' or 'multi')");
        }
    }
    for (const auto& [name, count] : out.multiplicity) {
        if (!seen.count(name))
            throw ParseError("multi declaration refers to undeclared trace '" + name + "'");
    }
    return out;
}

} // namespace teamltl
