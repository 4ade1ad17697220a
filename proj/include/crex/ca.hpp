#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crex/regex.hpp"

namespace crex {

enum class CmpOp : uint8_t { Lt, Ge };

struct CaAtom {
    int counter = 0;
    CmpOp op = CmpOp::Lt;
    uint32_t k = 0;
    bool operator==(const CaAtom&) const = default;
    auto operator<=>(const CaAtom&) const = default;
};

// Conjunction; empty means true.
using CaGuard = std::vector<CaAtom>;

enum class Assign : uint8_t { Zero, One, Keep, Inc };

struct CounterInfo {
    int node = -1;       // counted node in the source AST
    uint32_t min = 0;
    uint32_t max = 0;    // kInf when unbounded
    std::vector<int> states;  // states(x), sorted
    std::vector<int> entry;   // first positions of the body
    std::vector<int> exit;    // last positions of the body
    bool infinite() const { return max == kInf; }
    // Values of unbounded counters saturate here.
    uint32_t cap() const { return infinite() ? min + 1 : max; }
    bool contains(int q) const;
};

struct CaTransition {
    int src = 0;
    ByteSet cls;
    CaGuard guard;
    std::vector<Assign> update;  // one entry per counter
    int dst = 0;
};

// Final condition: nullopt is false, an empty guard is true.
using FinalCond = std::optional<CaGuard>;

struct CountingAutomaton {
    int numStates = 1;                 // state 0 is the initial state
    std::vector<CounterInfo> counters;
    std::vector<CaTransition> trans;
    std::vector<FinalCond> finals;     // per state
    std::vector<ByteSet> stateClass;   // symbol class read when entering the state
    std::vector<std::string> stateNames;

    // Candidate transitions for (state, byte).
    const std::vector<int>& candidates(int state, unsigned char b) const {
        return index_[static_cast<size_t>(state) * 256 + b];
    }
    void buildIndex();

    // Partition of bytes into classes that no transition label separates.
    std::vector<int> byteClassOf;          // byte -> class id
    std::vector<ByteSet> byteClasses;      // class id -> bytes
    void buildByteClasses();

private:
    std::vector<std::vector<int>> index_;
};

struct FollowTriple {
    int from = 0;
    int to = 0;
    int loopNode = -1;  // counted node id, or -1 for null
    bool operator==(const FollowTriple&) const = default;
    auto operator<=>(const FollowTriple&) const = default;
};

std::vector<int> firstSet(const RegexAst& ast);
std::vector<int> lastSet(const RegexAst& ast);
std::vector<int> firstSet(const RegexAst& ast, int node);
std::vector<int> lastSet(const RegexAst& ast, int node);
std::vector<FollowTriple> followSet(const RegexAst& ast);

// Expects a normalized AST.
CountingAutomaton buildCa(const RegexAst& ast);

struct CaConfiguration {
    int state = 0;
    std::vector<uint32_t> mem;
    bool operator==(const CaConfiguration&) const = default;
    auto operator<=>(const CaConfiguration&) const = default;
};

CaConfiguration initialConfig(const CountingAutomaton& ca);
bool holds(const CaGuard& g, const std::vector<uint32_t>& mem);
bool isFinal(const CountingAutomaton& ca, const CaConfiguration& c);
std::vector<CaConfiguration> caStep(const CountingAutomaton& ca, const CaConfiguration& c, unsigned char b);

// Structural problems found; empty for well-formed output of buildCa.
std::vector<std::string> validateCaProperties(const CountingAutomaton& ca);

std::string guardToString(const CountingAutomaton& ca, const CaGuard& g);
std::string counterName(size_t i);

}  // namespace crex
