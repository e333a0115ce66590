#pragma once
// Command-line front end: inline factor grammar, problem documents, a
// content-addressed result cache, and the subcommand dispatcher.
#include <optional>
#include <string>
#include <vector>

#include "gengap/formulas.hpp"

namespace gengap::cli {

// bumped whenever an algorithm change invalidates cached reports
inline constexpr const char* kAlgoVersion = "gengap/1";

// ---- factor and problem parsing ----

// Inline grammar: "C6", "C2xC2", "C5xZ", "Z", "ZxZ", "Nil(C2,rank=2)".
// 'x' separates direct factors; each is C<n> or Z; Nil(<abelian>,rank=<e>)
// names G x Z^e explicitly. Unrecognized text raises gg_error.
groups::FactorSpec parse_factor(const std::string& text);

// Factor list separated by ',' or '*' at paren depth zero:
// "C2*C3", "C2xZ,C3xZ", "Nil(C2,rank=2) * C3".
std::vector<groups::FactorSpec> parse_factors(const std::string& text);

struct ProblemDoc {
    formulas::FreeProductProblem problem;
    std::optional<int> kernel_stage;  // "module": {"kernel": s}
};

// Problem document:
//   {"factors": ["C2xZ", {"abelian": [3,3], "free_rank": 1, "label": "H",
//                         "presentation": {...}}],
//    "module": "augmentation" | "relation" | {"kernel": s}}
// Malformed documents raise gg_error naming the offending field.
ProblemDoc problem_from_json(const std::string& text);

// Presentation document {"alphabet": [...], "relators": [...], "images": [...]}
// attached to a finite factor; relators use the word grammar and must die
// under the images.
void attach_presentation(groups::FactorSpec& f, const std::string& json_text);

// readable problem summary used in every report
std::string problem_json(const formulas::FreeProductProblem& pr, bool pretty = false);

// content-complete rendering (multiplication tables, presentations) used for
// cache keys; byte-stable across runs
std::string canonical_problem_string(const formulas::FreeProductProblem& pr);

// ---- result cache ----

struct CacheConfig {
    std::string dir;       // resolved directory; empty when disabled
    bool enabled = false;
};

// precedence: --cache-dir flag > GENGAP_CACHE_DIR > ./.gengap-cache;
// no_cache disables lookups and stores entirely
CacheConfig cache_config(bool no_cache, const std::string& dir_flag);

// 64-bit FNV-1a, 16 hex digits
std::string content_hash(const std::string& text);

// key for one cache entry: op name plus the hash of version + inputs
std::string cache_key(const std::string& op, const std::string& canonical_input);

// Loads a stored payload; a missing entry returns nullopt silently, an
// unreadable or non-JSON entry returns nullopt with a warning pushed.
std::optional<std::string> cache_load(const CacheConfig& c, const std::string& key,
                                      std::vector<std::string>& warnings);

// Best-effort store (temp file + rename); IO failures degrade to a warning.
void cache_store(const CacheConfig& c, const std::string& key, const std::string& payload,
                 std::vector<std::string>& warnings);

// ---- dispatch ----

// Runs one subcommand; returns the process exit code:
//   0 success, 1 hypothesis/input violation, 2 exhausted budget or
//   incomplete verification, 3 internal invariant failure.
int run_cli(int argc, const char* const* argv);

} // namespace gengap::cli
