#pragma once

#include <map>
#include <memory>
#include <string_view>
#include <vector>

#include "crex/augmented.hpp"
#include "crex/offset_list.hpp"
#include "crex/oracle.hpp"

namespace crex {

struct MatchStats {
    uint64_t bytes = 0;
    uint64_t guardEvals = 0;
    OlStats lists;
};

struct MatchOutcome {
    bool accepted = false;
    int finalState = -1;
};

// Process-wide tally of finished simulation runs. A run ends on reset() or
// destruction; its stats are checked against the merge ledger.
struct LedgerAudit {
    uint64_t runs = 0;
    uint64_t violations = 0;
    uint64_t moves = 0;
    uint64_t budget = 0;  // increments + inserts
};
LedgerAudit ledgerAudit();

// Fast simulation of an augmented CSA over offset lists.
class AugmentedMatcher {
public:
    explicit AugmentedMatcher(AugmentedCsa& csa);
    ~AugmentedMatcher();
    AugmentedMatcher(const AugmentedMatcher&) = delete;
    AugmentedMatcher& operator=(const AugmentedMatcher&) = delete;

    void reset();
    void step(unsigned char b);
    void feed(std::string_view text) {
        for (char c : text) step(static_cast<unsigned char>(c));
    }
    bool accepted() const;
    int state() const { return state_; }
    const MatchStats& stats() const { return stats_; }

    // Full simulation state, for backtracking searches.
    struct Snapshot {
        int state = 0;
        std::vector<std::vector<int64_t>> slots;
        MatchStats stats;
    };
    Snapshot snapshot() const;
    void restore(const Snapshot& s);

    // Shared register id -> represented set, for live registers.
    std::map<int, std::vector<int64_t>> registerValues() const;
    // The state-indexed memory these registers stand for.
    SetMemory decodeBasic() const;

private:
    AugmentedCsa* csa_;
    int state_ = 0;
    std::vector<int> slots_;  // aligned with the active set; -1 = empty
    std::vector<int> scratch_;
    OffsetListPool pool_;
    MatchStats stats_;

    bool evalAtom(const SharedAtom& a) const;
};

MatchOutcome matchWord(AugmentedCsa& csa, std::string_view text);

enum class Engine { Augmented, Basic, Oracle };
const char* engineName(Engine e);

struct ProgramOptions {
    Engine engine = Engine::Augmented;
    bool unanchored = false;
    bool dotAll = false;
    bool eager = false;  // build every state before matching
    size_t stateCap = defaultStateCap();
};

// Pattern compiled for one engine; holds the streaming match state.
class Program {
public:
    // Throws RegexError, NotFlatError (automaton engines), ReplicationError
    // and ResourceLimitError (eager mode, or later from feed()).
    Program(std::string_view pattern, const ProgramOptions& opts);

    void reset();
    void feed(std::string_view bytes);
    bool accepted() const;
    bool match(std::string_view text) {
        reset();
        feed(text);
        return accepted();
    }

    const RegexAst& ast() const { return ast_; }
    const CountingAutomaton& ca() const { return ca_; }
    Engine engine() const { return opts_.engine; }
    MatchStats stats() const;
    size_t statesBuilt() const;

private:
    ProgramOptions opts_;
    RegexAst ast_;
    CountingAutomaton ca_;
    std::unique_ptr<AugmentedCsa> aug_;
    std::unique_ptr<AugmentedMatcher> augSim_;
    std::unique_ptr<BasicCsa> basic_;
    std::unique_ptr<BasicSim> basicSim_;
    std::unique_ptr<OracleSim> oracleSim_;
    uint64_t bytes_ = 0;
};

}  // namespace crex
