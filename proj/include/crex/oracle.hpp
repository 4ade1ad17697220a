#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "crex/ca.hpp"

namespace crex {

// Breadth-first simulation of the configuration set.
class OracleSim {
public:
    // Throws ResourceLimitError once the frontier outgrows frontierCap.
    explicit OracleSim(const CountingAutomaton& ca, size_t frontierCap = defaultStateCap())
        : ca_(&ca), cap_(frontierCap) {
        reset();
    }
    explicit OracleSim(CountingAutomaton&&, size_t = 0) = delete;
    void reset();
    void step(unsigned char b);
    bool accepted() const;
    const std::set<CaConfiguration>& frontier() const { return frontier_; }

private:
    const CountingAutomaton* ca_;
    size_t cap_;
    std::set<CaConfiguration> frontier_;
};

bool oracleMatch(const CountingAutomaton& ca, std::string_view word);

// Membership straight from the inductive language definition, by dynamic
// programming over substrings. Works on raw or normalized trees.
bool astMatch(const RegexAst& ast, std::string_view word);

// Subset construction over configurations.
struct ExplicitDfa {
    std::vector<std::vector<CaConfiguration>> sets;
    std::vector<std::vector<int>> next;  // [state][byte class]
    std::vector<bool> accepting;
    std::vector<int> byteClassOf;
    size_t numStates() const { return sets.size(); }
    bool run(std::string_view word) const;
};

ExplicitDfa explicitDeterminize(const CountingAutomaton& ca, size_t stateCap = defaultStateCap());

struct SyncWitness {
    int k = 0;
    std::string u;  // in L(S)^k
    std::string v;  // in L(S)^(k+1), prefix of u
};

// Bounded search for a word of L(S)^k with a prefix in L(S)^(k+1), k <= maxK,
// |u| <= maxLen. Proper prefixes are preferred over v == u.
std::optional<SyncWitness> synchronizingWitness(const RegexAst& body, int maxK, size_t maxLen);

bool checkSyncWitness(const RegexAst& body, const SyncWitness& w);

// Is `word` a concatenation of exactly k words of L(body)?
bool inPower(const RegexAst& body, std::string_view word, int k);

}  // namespace crex
