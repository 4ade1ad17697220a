#include "crex/augmented.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace crex {

int SharedRegistry::intern(const SharedReg& r) {
    auto it = ids_.find(r);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(regs_.size());
    regs_.push_back(r);
    ids_.emplace(r, id);
    return id;
}

namespace {

const char* kMacron = "\xCC\x84";  // combining overline marks q-bar
const char* kOplus = "\xE2\x8A\x95";

std::string sharedName(const CountingAutomaton& ca, const SharedReg& r) {
    std::string s = counterName(static_cast<size_t>(r.counter)) + "_{";
    for (size_t i = 0; i < r.carrier.size(); ++i) {
        if (i) s += ",";
        s += ca.stateNames[static_cast<size_t>(r.carrier[i] / 2)];
        if (r.carrier[i] & 1) s += kMacron;
    }
    return s + "}";
}

bool carrierHas(const SharedReg& r, int entry) { return std::binary_search(r.carrier.begin(), r.carrier.end(), entry); }

}  // namespace

SharedUpdate buildSharedUpdate(const BasicCsa& basic, const std::vector<RegAssign>& update, const std::vector<int>& ac,
                               SharedRegistry& regs) {
    const CountingAutomaton& ca = basic.ca();
    struct Entry {
        int counter;
        int lval;  // 2r or 2r+1
        std::set<SharedTerm> terms;
    };

    // evaluate postponed increments
    std::vector<Entry> tilde;
    for (const RegAssign& ra : update) {
        Entry e{basic.regCounter(ra.reg), 2 * basic.regState(ra.reg), {}};
        for (const RTerm& t : ra.term) {
            if (t.kind == RTerm::Kind::Const) {
                e.terms.insert({RTerm::Kind::Const, t.value, -1, false});
                continue;
            }
            if (t.filtered && !t.inc) throw std::logic_error("filtered copy outside an increment");
            const int x = basic.regCounter(t.reg), q = basic.regState(t.reg);
            for (int sid : ac) {
                const SharedReg& sr = regs.at(sid);
                if (sr.counter != x) continue;
                if (carrierHas(sr, 2 * q)) e.terms.insert({RTerm::Kind::Reg, 0, sid, t.inc});
                if (carrierHas(sr, 2 * q + 1)) {
                    if (t.inc) {
                        ReplicationError err("double increment of " + sharedName(ca, sr) + " assigned to " +
                                             basic.regName(ra.reg));
                        err.termDesc = std::string(kOplus) + kOplus + sharedName(ca, sr);
                        throw err;
                    }
                    e.terms.insert({RTerm::Kind::Reg, 0, sid, true});
                }
            }
        }
        tilde.push_back(std::move(e));
    }

    // registers read both with and without increment
    std::set<int> plainRead, incRead, conflict;
    for (const Entry& e : tilde)
        for (const SharedTerm& t : e.terms)
            if (t.kind == RTerm::Kind::Reg) (t.inc ? incRead : plainRead).insert(t.src);
    std::set_intersection(plainRead.begin(), plainRead.end(), incRead.begin(), incRead.end(),
                          std::inserter(conflict, conflict.end()));

    // postpone conflicting increments onto the marked l-value
    std::vector<Entry> ring;
    for (const Entry& e : tilde) {
        Entry kept{e.counter, e.lval, {}};
        Entry marked{e.counter, e.lval + 1, {}};
        for (const SharedTerm& t : e.terms) {
            if (t.kind == RTerm::Kind::Reg && t.inc && conflict.count(t.src)) {
                marked.terms.insert({RTerm::Kind::Reg, 0, t.src, false});
            } else {
                kept.terms.insert(t);
            }
        }
        if (!kept.terms.empty()) ring.push_back(std::move(kept));
        if (!marked.terms.empty()) ring.push_back(std::move(marked));
    }

    // group each r-term under the set of l-values it is assigned to
    std::map<std::pair<int, SharedTerm>, std::set<int>> lval;
    for (const Entry& e : ring)
        for (const SharedTerm& t : e.terms) lval[{e.counter, t}].insert(e.lval);
    std::map<int, std::set<SharedTerm>> byReg;
    for (const auto& [key, lvs] : lval) {
        int reg = regs.intern({key.first, std::vector<int>(lvs.begin(), lvs.end())});
        byReg[reg].insert(key.second);
    }

    SharedUpdate out;
    std::map<int, int> reads;
    for (auto& [reg, terms] : byReg) {
        out.ac.push_back(reg);
        out.assigns.push_back({reg, std::vector<SharedTerm>(terms.begin(), terms.end())});
        for (const SharedTerm& t : terms)
            if (t.kind == RTerm::Kind::Reg && ++reads[t.src] > 1)
                throw std::logic_error("shared update reads " + sharedName(ca, regs.at(t.src)) + " twice");
    }
    return out;
}

SharedDisj rewritePredicate(const BasicCsa& basic, const SharedRegistry& regs, const RegAtom& atom,
                            const std::vector<int>& ac) {
    SharedDisj out;
    const int x = basic.regCounter(atom.reg), q = basic.regState(atom.reg);
    const CounterInfo& ci = basic.ca().counters[static_cast<size_t>(x)];
    for (size_t i = 0; i < ac.size(); ++i) {
        const SharedReg& sr = regs.at(ac[i]);
        if (sr.counter != x) continue;
        SharedAtom a;
        a.slot = static_cast<int>(i);
        a.reg = ac[i];
        a.op = atom.op;
        a.k = atom.k;
        if (carrierHas(sr, 2 * q)) out.push_back(a);
        if (carrierHas(sr, 2 * q + 1)) {
            a.shift = ci.infinite() ? SharedAtom::Shift::Saturated : SharedAtom::Shift::Filtered;
            a.bound = ci.infinite() ? ci.cap() : ci.max;
            out.push_back(a);
        }
    }
    return out;
}

unsigned char representativeByte(const ByteSet& cls) {
    for (const char* range : {"az", "AZ", "09", "!~", "  "}) {
        for (int c = static_cast<unsigned char>(range[0]); c <= static_cast<unsigned char>(range[1]); ++c)
            if (cls.test(static_cast<size_t>(c))) return static_cast<unsigned char>(c);
    }
    for (int c = 0; c < 256; ++c)
        if (cls.test(static_cast<size_t>(c))) return static_cast<unsigned char>(c);
    return 0;
}

AugmentedCsa::AugmentedCsa(const CountingAutomaton& ca, size_t stateCap)
    : ca_(&ca), cap_(std::max<size_t>(stateCap, 1)), basic_(ca, stateCap) {
    std::vector<int> ac;
    for (size_t x = 0; x < ca.counters.size(); ++x) ac.push_back(regs_.intern({static_cast<int>(x), {0}}));
    std::sort(ac.begin(), ac.end());
    intern(basic_.initial(), std::move(ac), -1, -1);
}

int AugmentedCsa::intern(int basicState, std::vector<int> ac, int from, int cls) {
    auto key = std::make_pair(basicState, ac);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    if (states_.size() >= cap_) throw ResourceLimitError("augmented CSA exceeds " + std::to_string(cap_) + " states");
    AugState st;
    st.basic = basicState;
    st.ac = std::move(ac);
    for (const auto& conj : basic_.finalCond(basicState)) {
        std::vector<SharedDisj> c;
        bool dead = false;
        for (const RegAtom& a : conj) {
            SharedDisj d = rewritePredicate(basic_, regs_, a, st.ac);
            if (d.empty()) {
                dead = true;
                break;
            }
            c.push_back(std::move(d));
        }
        if (dead) continue;
        if (c.empty()) {
            st.final = {{}};
            break;
        }
        st.final.push_back(std::move(c));
    }
    int id = static_cast<int>(states_.size());
    ids_.emplace(std::move(key), id);
    states_.push_back(std::move(st));
    parent_.emplace_back(from, cls);
    blocks_.emplace_back(static_cast<size_t>(numClasses()));
    return id;
}

std::vector<int> AugmentedCsa::pathTo(int s) const {
    std::vector<int> path;
    while (s >= 0 && parent_[static_cast<size_t>(s)].first >= 0) {
        path.push_back(parent_[static_cast<size_t>(s)].second);
        s = parent_[static_cast<size_t>(s)].first;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::unique_ptr<AugBlock> AugmentedCsa::buildBlock(int s, int cls) {
    const int basicId = states_[static_cast<size_t>(s)].basic;
    const std::vector<int> ac = states_[static_cast<size_t>(s)].ac;
    auto blk = std::make_unique<AugBlock>();
    const CsaBlock& bb = basic_.block(basicId, cls);
    blk->basic = &bb;
    for (const RegAtom& a : bb.atoms) blk->atoms.push_back(rewritePredicate(basic_, regs_, a, ac));

    for (const CsaTransition& tr : bb.trans) {
        AugTransition at;
        for (size_t i = 0; i < tr.guard.size(); ++i)
            if (tr.guard[i].positive && blk->atoms[i].empty()) at.pruned = true;
        if (at.pruned) {
            blk->trans.push_back(std::move(at));
            continue;
        }
        SharedUpdate su;
        try {
            su = buildSharedUpdate(basic_, tr.update, ac, regs_);
        } catch (const ReplicationError& e) {
            ReplicationError full("irresolvable counter replication in state " + stateName(s) + " on " +
                                  classToString(ca_->byteClasses[static_cast<size_t>(cls)]) + ": " + e.what());
            full.stateDesc = stateName(s);
            full.termDesc = e.termDesc;
            full.cls = cls;
            full.classes = pathTo(s);
            full.classes.push_back(cls);
            for (int c : full.classes)
                full.witness += static_cast<char>(representativeByte(ca_->byteClasses[static_cast<size_t>(c)]));
            throw full;
        }
        at.target = intern(tr.target, su.ac, s, cls);
        std::vector<char> read(ac.size(), 0);
        for (const SharedAssign& sa : su.assigns) {
            SlotAssign slot;
            slot.reg = sa.reg;
            slot.dstSlot = static_cast<int>(std::lower_bound(su.ac.begin(), su.ac.end(), sa.reg) - su.ac.begin());
            for (const SharedTerm& t : sa.terms) {
                SlotTerm st;
                st.kind = t.kind;
                st.value = t.value;
                if (t.kind == RTerm::Kind::Reg) {
                    st.srcReg = t.src;
                    st.srcSlot = static_cast<int>(std::lower_bound(ac.begin(), ac.end(), t.src) - ac.begin());
                    // the matcher moves source lists, so each may be read once
                    if (read[static_cast<size_t>(st.srcSlot)]++)
                        throw std::logic_error("update reads register " + std::to_string(t.src) + " twice");
                    st.inc = t.inc;
                    if (t.inc) {
                        const CounterInfo& ci = ca_->counters[static_cast<size_t>(regs_.at(t.src).counter)];
                        if (ci.infinite()) st.satCap = ci.cap();
                        else st.filterLt = ci.max;
                    }
                }
                slot.terms.push_back(st);
            }
            at.update.push_back(std::move(slot));
        }
        blk->trans.push_back(std::move(at));
    }
    return blk;
}

const AugBlock& AugmentedCsa::block(int s, int cls) {
    if (!blocks_[static_cast<size_t>(s)][static_cast<size_t>(cls)]) {
        auto built = buildBlock(s, cls);
        blocks_[static_cast<size_t>(s)][static_cast<size_t>(cls)] = std::move(built);
    }
    return *blocks_[static_cast<size_t>(s)][static_cast<size_t>(cls)];
}

void AugmentedCsa::buildAll() {
    for (size_t s = 0; s < states_.size(); ++s)
        for (int c = 0; c < numClasses(); ++c) block(static_cast<int>(s), c);
}

size_t AugmentedCsa::transitionCount() const {
    size_t n = 0;
    for (const auto& row : blocks_)
        for (const auto& b : row)
            if (b)
                for (const auto& t : b->trans) n += t.pruned ? 0 : 1;
    return n;
}

std::string AugmentedCsa::regName(int reg) const { return sharedName(*ca_, regs_.at(reg)); }

std::string AugmentedCsa::stateName(int s) const {
    const AugState& st = state(s);
    std::string out = "(" + basic_.stateName(st.basic) + ", {";
    for (size_t i = 0; i < st.ac.size(); ++i) out += (i ? "," : "") + regName(st.ac[i]);
    return out + "})";
}

std::string AugmentedCsa::termToString(const SlotTerm& t) const {
    if (t.kind == RTerm::Kind::Const) return std::to_string(t.value);
    return (t.inc ? std::string(kOplus) : std::string()) + regName(t.srcReg);
}

std::string AugmentedCsa::atomToString(const SharedAtom& a) const {
    std::string v = regName(a.reg);
    if (a.shift != SharedAtom::Shift::None) v = "(" + v + "+1)";
    return v + (a.op == CmpOp::Lt ? "<" : ">=") + std::to_string(a.k);
}

std::unique_ptr<AugmentedCsa> determinizeAugmented(const CountingAutomaton& ca, size_t stateCap) {
    auto csa = std::make_unique<AugmentedCsa>(ca, stateCap);
    csa->buildAll();
    return csa;
}

}  // namespace crex
