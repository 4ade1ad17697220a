#pragma once

#include <map>
#include <memory>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crex/ca.hpp"

namespace crex {

// Atomic predicate over a set register: satisfied when some element is.
struct RegAtom {
    int reg = 0;
    CmpOp op = CmpOp::Lt;
    uint32_t k = 0;
    bool operator==(const RegAtom&) const = default;
    auto operator<=>(const RegAtom&) const = default;
};

struct Literal {
    RegAtom atom;
    bool positive = true;
    bool operator==(const Literal&) const = default;
};

// One r-term: a constant singleton, or a register optionally filtered,
// then optionally incremented (saturating for unbounded counters).
struct RTerm {
    enum class Kind : uint8_t { Const, Reg };
    Kind kind = Kind::Const;
    uint32_t value = 0;
    int reg = -1;
    bool filtered = false;
    CmpOp fop = CmpOp::Lt;
    uint32_t fk = 0;
    bool inc = false;
    uint32_t satCap = 0;  // nonzero: saturate the increment here

    static RTerm constant(uint32_t v) {
        RTerm t;
        t.value = v;
        return t;
    }
    static RTerm copy(int reg) {
        RTerm t;
        t.kind = Kind::Reg;
        t.reg = reg;
        return t;
    }
    bool operator==(const RTerm&) const = default;
    auto operator<=>(const RTerm&) const = default;
};

using SetTerm = std::vector<RTerm>;  // union, sorted and duplicate-free

struct RegAssign {
    int reg = 0;
    SetTerm term;
    bool operator==(const RegAssign&) const = default;
};

using SetMemory = std::map<int, std::set<uint32_t>>;

// Satisfiability over nonempty finite sets of naturals: each register is a
// nonempty set, a positive literal needs a witness element, a negative one
// constrains every element.
bool literalsSatisfiable(const std::vector<Literal>& lits);

// Satisfiable sign assignments over `atoms` (bit i set = atom i positive).
// Throws ResourceLimitError past `cap` minterms.
std::vector<uint64_t> mintermMasks(const std::vector<RegAtom>& atoms, size_t cap = 1u << 16);
std::vector<std::vector<Literal>> minterms(const std::vector<RegAtom>& atoms);

struct Constituent {
    int caTrans = -1;
    int src = 0;
    int dst = 0;
    std::vector<RegAtom> guard;
    std::vector<RegAssign> update;
};

struct CsaTransition {
    uint64_t mask = 0;
    std::vector<Literal> guard;
    std::vector<RegAssign> update;  // registers not listed become empty
    int target = 0;
};

// All transitions out of one (state, byte class).
struct CsaBlock {
    std::vector<RegAtom> atoms;
    std::vector<CsaTransition> trans;
    std::vector<int32_t> dense;                 // mask -> transition, -1 if none
    std::unordered_map<uint64_t, int> sparse;   // used when atoms are many

    int lookup(uint64_t mask) const {
        if (!dense.empty()) return dense[mask];
        auto it = sparse.find(mask);
        return it == sparse.end() ? -1 : it->second;
    }
    void index();
};

// Final condition in disjunctive form; an empty conjunct is true.
using FinalDnf = std::vector<std::vector<RegAtom>>;

// Deterministic counting-set automaton over registers x_q.
class BasicCsa {
public:
    explicit BasicCsa(const CountingAutomaton& ca, size_t stateCap = defaultStateCap());
    explicit BasicCsa(CountingAutomaton&&, size_t = 0) = delete;

    const CountingAutomaton& ca() const { return *ca_; }
    int reg(int counter, int q) const { return counter * ca_->numStates + q; }
    int regCounter(int r) const { return r / ca_->numStates; }
    int regState(int r) const { return r % ca_->numStates; }
    std::string regName(int r) const;

    int initial() const { return 0; }
    int dead() const { return 1; }
    size_t numStates() const { return sets_.size(); }
    int numClasses() const { return static_cast<int>(ca_->byteClasses.size()); }
    const std::vector<int>& stateSet(int s) const { return sets_[static_cast<size_t>(s)]; }
    const FinalDnf& finalCond(int s) const { return finals_[static_cast<size_t>(s)]; }
    std::string stateName(int s) const;

    std::vector<Constituent> constituents(int s, int cls) const;
    // Builds on first request.
    const CsaBlock& block(int s, int cls);
    const CsaBlock* builtBlock(int s, int cls) const;
    void buildAll();
    size_t transitionCount() const;

    int internSet(std::vector<int> set);

private:
    const CountingAutomaton* ca_;
    size_t cap_;
    std::vector<std::vector<int>> sets_;
    std::vector<FinalDnf> finals_;
    std::map<std::vector<int>, int> ids_;
    std::vector<std::vector<std::unique_ptr<CsaBlock>>> blocks_;

    std::unique_ptr<CsaBlock> buildBlock(int s, int cls);
};

SetMemory initialMemory(const BasicCsa& csa);
bool evalAtom(const RegAtom& a, const SetMemory& mem);
bool evalFinal(const FinalDnf& f, const SetMemory& mem);
std::set<uint32_t> evalTerm(const RTerm& t, const SetMemory& mem);

// Reference simulation with explicit sets.
class BasicSim {
public:
    explicit BasicSim(BasicCsa& csa) : csa_(&csa) { reset(); }
    void reset();
    void step(unsigned char b);
    bool accepted() const { return evalFinal(csa_->finalCond(state_), mem_); }
    int state() const { return state_; }
    const SetMemory& memory() const { return mem_; }

private:
    BasicCsa* csa_;
    int state_ = 0;
    SetMemory mem_;
};

bool basicMatch(BasicCsa& csa, std::string_view word);

// Registers x_q with q outside states(x) always hold 0; with liveOnly they
// are left out (except at the initial state).
std::pair<std::vector<int>, SetMemory> encode(const BasicCsa& csa, const std::vector<CaConfiguration>& configs,
                                              bool liveOnly = false);
// Absent registers decode as {0}.
std::vector<CaConfiguration> decode(const BasicCsa& csa, const std::vector<int>& states, const SetMemory& mem);

std::string atomToString(const BasicCsa& csa, const RegAtom& a);
std::string termToString(const BasicCsa& csa, const RTerm& t);

}  // namespace crex
