#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "crex/csa.hpp"

namespace crex {

// Thrown when an update would need a register with two postponed
// increments. `witness` drives the automaton to the offending state and
// ends with the byte whose update fails; `classes` is the same path as
// byte-class ids.
struct ReplicationError : Error {
    std::string stateDesc;
    std::string termDesc;
    int cls = -1;
    std::vector<int> classes;
    std::string witness;
    explicit ReplicationError(const std::string& msg) : Error(msg) {}
    const char* code() const noexcept override { return "REPLICATION"; }
};

// Shared register x_S: carrier entries are 2q (q) or 2q+1 (q marked, one
// postponed increment).
struct SharedReg {
    int counter = 0;
    std::vector<int> carrier;
    bool operator==(const SharedReg&) const = default;
    auto operator<=>(const SharedReg&) const = default;
};

class SharedRegistry {
public:
    int intern(const SharedReg& r);
    const SharedReg& at(int id) const { return regs_[static_cast<size_t>(id)]; }
    size_t size() const { return regs_.size(); }

private:
    std::vector<SharedReg> regs_;
    std::map<SharedReg, int> ids_;
};

// r-term over shared registers: constant, x_S, or (+)x_S (filtered
// increment, saturating for unbounded counters).
struct SharedTerm {
    RTerm::Kind kind = RTerm::Kind::Const;
    uint32_t value = 0;
    int src = -1;
    bool inc = false;
    bool operator==(const SharedTerm&) const = default;
    auto operator<=>(const SharedTerm&) const = default;
};

struct SharedAssign {
    int reg = 0;
    std::vector<SharedTerm> terms;
};

struct SharedUpdate {
    std::vector<SharedAssign> assigns;  // sorted by register id
    std::vector<int> ac;                // assigned registers, sorted
};

// Turns a basic update into one over shared registers. `ac` is the active
// set of the source state. Throws ReplicationError (without witness).
SharedUpdate buildSharedUpdate(const BasicCsa& basic, const std::vector<RegAssign>& update, const std::vector<int>& ac,
                               SharedRegistry& regs);

// Predicate on one active register, possibly read through a postponed
// increment.
struct SharedAtom {
    enum class Shift : uint8_t { None, Filtered, Saturated };
    int slot = 0;  // index into the source state's active set
    int reg = 0;
    CmpOp op = CmpOp::Lt;
    uint32_t k = 0;
    Shift shift = Shift::None;
    uint32_t bound = 0;  // Filtered: counter max; Saturated: cap
};
using SharedDisj = std::vector<SharedAtom>;  // empty = false

// Rewrites x_q op k against the active set.
SharedDisj rewritePredicate(const BasicCsa& basic, const SharedRegistry& regs, const RegAtom& atom,
                            const std::vector<int>& ac);

struct SlotTerm {
    RTerm::Kind kind = RTerm::Kind::Const;
    uint32_t value = 0;
    int srcSlot = -1;
    int srcReg = -1;
    bool inc = false;
    uint32_t filterLt = 0;  // nonzero: drop values >= filterLt before increment
    uint32_t satCap = 0;
};

struct SlotAssign {
    int dstSlot = 0;
    int reg = 0;
    std::vector<SlotTerm> terms;
};

struct AugTransition {
    bool pruned = false;  // some positive guard literal rewrote to false
    int target = -1;
    std::vector<SlotAssign> update;
};

struct AugBlock {
    const CsaBlock* basic = nullptr;
    std::vector<SharedDisj> atoms;     // aligned with basic->atoms
    std::vector<AugTransition> trans;  // aligned with basic->trans
};

struct AugState {
    int basic = 0;
    std::vector<int> ac;
    std::vector<std::vector<SharedDisj>> final;  // DNF; empty conjunct = true
};

class AugmentedCsa {
public:
    explicit AugmentedCsa(const CountingAutomaton& ca, size_t stateCap = defaultStateCap());
    // keeps a pointer to the automaton
    explicit AugmentedCsa(CountingAutomaton&&, size_t = 0) = delete;
    AugmentedCsa(const AugmentedCsa&) = delete;
    AugmentedCsa& operator=(const AugmentedCsa&) = delete;

    const CountingAutomaton& ca() const { return *ca_; }
    BasicCsa& basic() { return basic_; }
    const BasicCsa& basic() const { return basic_; }
    const SharedRegistry& registers() const { return regs_; }

    int initial() const { return 0; }
    size_t numStates() const { return states_.size(); }
    const AugState& state(int s) const { return states_[static_cast<size_t>(s)]; }
    int numClasses() const { return basic_.numClasses(); }

    const AugBlock& block(int s, int cls);
    const AugBlock* builtBlock(int s, int cls) const { return blocks_[static_cast<size_t>(s)][static_cast<size_t>(cls)].get(); }
    void buildAll();
    size_t transitionCount() const;

    std::string regName(int reg) const;
    std::string stateName(int s) const;
    std::string termToString(const SlotTerm& t) const;
    std::string atomToString(const SharedAtom& a) const;
    std::vector<int> pathTo(int s) const;

private:
    const CountingAutomaton* ca_;
    size_t cap_;
    BasicCsa basic_;
    SharedRegistry regs_;
    std::vector<AugState> states_;
    std::map<std::pair<int, std::vector<int>>, int> ids_;
    std::vector<std::pair<int, int>> parent_;  // (state, class)
    std::vector<std::vector<std::unique_ptr<AugBlock>>> blocks_;

    int intern(int basicState, std::vector<int> ac, int from, int cls);
    std::unique_ptr<AugBlock> buildBlock(int s, int cls);
};

// Eager construction of every reachable state and transition.
std::unique_ptr<AugmentedCsa> determinizeAugmented(const CountingAutomaton& ca, size_t stateCap = defaultStateCap());
std::unique_ptr<AugmentedCsa> determinizeAugmented(CountingAutomaton&&, size_t = 0) = delete;

// A byte of the class, preferring printable ones.
unsigned char representativeByte(const ByteSet& cls);

}  // namespace crex
