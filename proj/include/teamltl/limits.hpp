// ============================================================================
// limits.hpp -- resource guards for the exponential evaluators
//
// Team-semantics evaluation is inherently exponential, so every public
// evaluation entry point checks its *inputs* against a small set of limits
// before doing any work:
//
//   traces  -- maximum number of traces (or multiteam entries) in the input
//   pos     -- maximum number of distinct suffix positions per input trace
//   depth   -- maximum formula nesting depth
//
// The defaults (6 / 8 / 10) keep worst-case enumerations within interactive
// time.  They can be raised or lowered via the TEAMLTL_LIMITS environment
// variable, e.g.
//
//   TEAMLTL_LIMITS="traces=8,pos=10,depth=12"
//
// Unknown keys are rejected loudly rather than ignored; a typo in a limit
// name should never silently run with defaults.  The limits govern input
// sizes only -- intermediate teams produced during evaluation (for instance
// suffix unions) may legitimately be larger and are not re-checked.
// ============================================================================
#pragma once

#include <cstdlib>
#include <string>

#include "errors.hpp"

namespace teamltl {

struct Limits {
    std::size_t traces = 6;  // max traces / multiteam entries per input team
    std::size_t pos = 8;     // max distinct suffix positions per trace
    std::size_t depth = 10;  // max formula nesting depth

    // Parses a "key=value,key=value" override string.  Throws ParseError on
    // unknown keys, missing '=', or non-numeric values.
    static Limits parse(const std::string& spec) {
        Limits out;
        std::size_t i = 0;
        while (i < spec.size()) {
            std::size_t comma = spec.find(',', i);
            if (comma == std::string::npos) comma = spec.size();
            std::string item = spec.substr(i, comma - i);
            std::size_t eq = item.find('=');
            if (eq == std::string::npos)
                throw ParseError("limit entry '" + item + "' is missing '='");
            std::string key = item.substr(0, eq);
            std::string val = item.substr(eq + 1);
            std::size_t parsed = 0;
            try {
                std::size_t used = 0;
                parsed = std::stoul(val, &used);
                if (used != val.size()) throw std::invalid_argument(val);
            } catch (const std::exception&) {
                throw ParseError("limit '" + key + "' has non-numeric value '" + val + "'");
            }
            if (parsed == 0)
                throw ParseError("limit '" + key + "' must be positive");
            if (key == "traces")
                out.traces = parsed;
            else if (key == "pos")
                out.pos = parsed;
            else if (key == "depth")
                out.depth = parsed;
            else
                throw ParseError("unknown limit key '" + key + "' (expected traces, pos or depth)");
            i = comma + 1;
        }
        return out;
    }

    // Reads TEAMLTL_LIMITS from the environment; defaults when unset.
    static Limits from_env() {
        const char* env = std::getenv("TEAMLTL_LIMITS");
        if (env == nullptr || *env == '\0') return Limits{};
        return parse(env);
    }
};

} // namespace teamltl
