#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crex/ca.hpp"

namespace crex::testing {

// Flat patterns on which augmented determinization is expected to succeed.
const std::vector<std::string>& namedFixtures();

// Flat regexes over {a,b,c} with repetition bounds <= 5; not filtered.
std::vector<std::string> randomFlatRegexes(uint64_t seed, size_t n);

// Hand-built automaton with states q0, p, q, r, s and one counter x in
// [2,5]: q0 -c-> p and q0 -c-> q set x to 1; q -a-> s copies x;
// p -a-> r increments under x<5; p -a-> s resets to 1 under x>=2.
// r and s accept. Reading "c" reaches the state set {p,q}.
CountingAutomaton handBuiltCa();

// One byte per byte class of the automaton.
std::string probeAlphabet(const CountingAutomaton& ca);

struct CrossCheck {
    uint64_t nodes = 0;       // distinct prefixes simulated
    uint64_t memoHits = 0;    // subtrees skipped on an identical joint state
    uint64_t mismatches = 0;
    uint64_t ledgerViolations = 0;
    std::string firstMismatch;
    std::string detail;
};

// Runs the augmented matcher, the basic CSA and the configuration oracle in
// lockstep over every word up to maxLen on the probe alphabet, and checks
// each against the AST-level membership oracle. Subtrees reached in a joint
// state already explored at least as deep are skipped.
CrossCheck crossCheck(const std::string& pattern, size_t maxLen);

std::string dataFile(const std::string& name);
std::string goldenFile(const std::string& name);
std::string readFile(const std::string& path);
std::vector<std::string> readLines(const std::string& path);

// Printable form of a word for failure messages.
std::string show(const std::string& w);

}  // namespace crex::testing
