#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "crex/regex.hpp"

namespace crex {

struct MarkerFamily {
    std::vector<ByteSet> sets;
    bool capped = false;  // the size cap cut the family short
    bool empty() const { return sets.empty(); }
};

inline constexpr size_t kMarkerFamilyCap = 64;

MarkerFamily markerSets(const RegexAst& ast, int node, size_t cap = kMarkerFamilyCap);
inline MarkerFamily markerSets(const RegexAst& ast) { return markerSets(ast, ast.root); }

// Every counter-bearing body has a nonempty marker family.
bool isLetterMarked(const RegexAst& ast);

enum class SyncVerdict { Yes, No, Unknown };
const char* verdictName(SyncVerdict v);

struct SyncOptions {
    size_t stateCap = 20000;
    bool letterMarkedShortcut = true;
};

struct SyncResult {
    SyncVerdict verdict = SyncVerdict::Unknown;
    std::string reason;   // no-counting | letter-marked | determinized | replication | resource-limit
    std::string witness;  // replication: byte path to the offending state
    std::string detail;
};

// Expects a normalized tree; throws NotFlatError for nested counting.
SyncResult isSynchronizing(const RegexAst& ast, const SyncOptions& opts = {});

// Sum over counters of the upper bound (the lower bound when unbounded).
uint64_t sumOfUpperBounds(const RegexAst& ast);

struct CounterDetail {
    std::string body;
    uint32_t min = 0;
    uint32_t max = 0;
    bool letterMarked = false;
};

struct Classification {
    std::string pattern;
    bool parsed = false;
    std::string errorCode;
    std::string errorMessage;
    bool usesCounting = false;
    bool isFlat = true;
    uint64_t sumOfUpperBounds = 0;
    bool aboveThreshold = false;
    bool letterMarked = false;
    bool familyCapped = false;
    std::optional<SyncResult> sync;  // set for parsed, flat, counting patterns
    std::vector<CounterDetail> counters;
};

Classification classify(const std::string& pattern, uint64_t threshold = 20, const SyncOptions& opts = {});

nlohmann::json toJson(const Classification& c);

// Lines starting with '#' and blank lines are skipped.
nlohmann::json classifyCorpus(const std::vector<std::string>& lines, uint64_t threshold = 20,
                              const SyncOptions& opts = {});

}  // namespace crex
