#include <algorithm>
#include <deque>
#include <sstream>

#include "crex/csa.hpp"

namespace crex {

bool literalsSatisfiable(const std::vector<Literal>& lits) {
    struct Dom {
        int64_t lo = 0;
        int64_t hi = INT64_MAX;
    };
    std::map<int, Dom> dom;
    for (const Literal& l : lits) {
        Dom& d = dom[l.atom.reg];
        if (l.positive) continue;
        if (l.atom.op == CmpOp::Lt) d.lo = std::max<int64_t>(d.lo, l.atom.k);
        else d.hi = std::min<int64_t>(d.hi, static_cast<int64_t>(l.atom.k) - 1);
    }
    for (const auto& [r, d] : dom)
        if (d.lo > d.hi) return false;
    for (const Literal& l : lits) {
        if (!l.positive) continue;
        const Dom& d = dom[l.atom.reg];
        const int64_t k = l.atom.k;
        if (l.atom.op == CmpOp::Lt ? d.lo >= k : std::max(d.lo, k) > d.hi) return false;
    }
    return true;
}

std::vector<uint64_t> mintermMasks(const std::vector<RegAtom>& atoms, size_t cap) {
    if (atoms.size() > 64) throw ResourceLimitError("too many guard atoms in one transition block");
    std::map<int, std::vector<size_t>> groups;
    for (size_t i = 0; i < atoms.size(); ++i) groups[atoms[i].reg].push_back(i);

    std::vector<uint64_t> acc{0};
    for (const auto& [reg, idx] : groups) {
        if (idx.size() > 20) throw ResourceLimitError("too many guard atoms on one register");
        std::vector<uint64_t> local;
        for (uint64_t m = 0; m < (uint64_t{1} << idx.size()); ++m) {
            std::vector<Literal> lits;
            uint64_t bits = 0;
            for (size_t j = 0; j < idx.size(); ++j) {
                bool pos = (m >> j) & 1;
                lits.push_back({atoms[idx[j]], pos});
                if (pos) bits |= uint64_t{1} << idx[j];
            }
            if (literalsSatisfiable(lits)) local.push_back(bits);
        }
        std::vector<uint64_t> next;
        for (uint64_t a : acc)
            for (uint64_t b : local) {
                next.push_back(a | b);
                if (next.size() > cap) throw ResourceLimitError("minterm count exceeds cap");
            }
        acc = std::move(next);
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

std::vector<std::vector<Literal>> minterms(const std::vector<RegAtom>& atoms) {
    std::vector<std::vector<Literal>> out;
    for (uint64_t m : mintermMasks(atoms)) {
        std::vector<Literal> lits;
        for (size_t i = 0; i < atoms.size(); ++i) lits.push_back({atoms[i], ((m >> i) & 1) != 0});
        out.push_back(std::move(lits));
    }
    return out;
}

void CsaBlock::index() {
    dense.clear();
    sparse.clear();
    if (atoms.size() <= 16) {
        dense.assign(size_t{1} << atoms.size(), -1);
        for (size_t i = 0; i < trans.size(); ++i) dense[trans[i].mask] = static_cast<int32_t>(i);
    } else {
        for (size_t i = 0; i < trans.size(); ++i) sparse[trans[i].mask] = static_cast<int>(i);
    }
}

BasicCsa::BasicCsa(const CountingAutomaton& ca, size_t stateCap) : ca_(&ca), cap_(std::max<size_t>(stateCap, 2)) {
    internSet({0});
    internSet({});
}

std::string BasicCsa::regName(int r) const {
    return counterName(static_cast<size_t>(regCounter(r))) + "_{" + ca_->stateNames[static_cast<size_t>(regState(r))] + "}";
}

std::string BasicCsa::stateName(int s) const {
    std::string out = "{";
    for (int q : stateSet(s)) {
        if (out.size() > 1) out += ",";
        out += ca_->stateNames[static_cast<size_t>(q)];
    }
    return out + "}";
}

int BasicCsa::internSet(std::vector<int> set) {
    auto it = ids_.find(set);
    if (it != ids_.end()) return it->second;
    if (sets_.size() >= cap_)
        throw ResourceLimitError("basic CSA exceeds " + std::to_string(cap_) + " states");
    FinalDnf fin;
    for (int q : set) {
        const FinalCond& f = ca_->finals[static_cast<size_t>(q)];
        if (!f) continue;
        std::vector<RegAtom> conj;
        for (const CaAtom& a : *f) conj.push_back({reg(a.counter, q), a.op, a.k});
        if (conj.empty()) {
            fin = {{}};
            break;
        }
        fin.push_back(std::move(conj));
    }
    int id = static_cast<int>(sets_.size());
    ids_.emplace(set, id);
    sets_.push_back(std::move(set));
    finals_.push_back(std::move(fin));
    blocks_.emplace_back(ca_->byteClasses.size());
    return id;
}

std::vector<Constituent> BasicCsa::constituents(int s, int cls) const {
    std::vector<Constituent> out;
    const ByteSet& bytes = ca_->byteClasses[static_cast<size_t>(cls)];
    unsigned char rep = 0;
    while (!bytes.test(rep)) ++rep;
    for (int q : stateSet(s)) {
        for (int t : ca_->candidates(q, rep)) {
            const CaTransition& tr = ca_->trans[static_cast<size_t>(t)];
            Constituent c;
            c.caTrans = t;
            c.src = q;
            c.dst = tr.dst;
            std::vector<const CaAtom*> atomOf(ca_->counters.size(), nullptr);
            for (const CaAtom& a : tr.guard) {
                c.guard.push_back({reg(a.counter, q), a.op, a.k});
                atomOf[static_cast<size_t>(a.counter)] = &a;
            }
            std::sort(c.guard.begin(), c.guard.end());
            for (size_t x = 0; x < ca_->counters.size(); ++x) {
                const CounterInfo& ci = ca_->counters[x];
                if (!ci.contains(tr.dst)) continue;  // dead register, always 0
                RTerm term;
                Assign u = tr.update[x];
                if ((u == Assign::Keep || u == Assign::Inc) && !ci.contains(q)) {
                    // reading a dead register: its value is 0
                    term = RTerm::constant(u == Assign::Inc ? 1 : 0);
                } else if (u == Assign::Zero || u == Assign::One) {
                    term = RTerm::constant(u == Assign::One ? 1 : 0);
                } else {
                    term = RTerm::copy(reg(static_cast<int>(x), q));
                    if (const CaAtom* a = atomOf[x]) {
                        term.filtered = true;
                        term.fop = a->op;
                        term.fk = a->k;
                    }
                    if (u == Assign::Inc) {
                        term.inc = true;
                        if (ci.infinite()) term.satCap = ci.cap();
                    }
                }
                c.update.push_back({reg(static_cast<int>(x), tr.dst), {term}});
            }
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::unique_ptr<CsaBlock> BasicCsa::buildBlock(int s, int cls) {
    auto blk = std::make_unique<CsaBlock>();
    std::vector<Constituent> cons = constituents(s, cls);
    for (const auto& c : cons) blk->atoms.insert(blk->atoms.end(), c.guard.begin(), c.guard.end());
    std::sort(blk->atoms.begin(), blk->atoms.end());
    blk->atoms.erase(std::unique(blk->atoms.begin(), blk->atoms.end()), blk->atoms.end());
    auto bitOf = [&](const RegAtom& a) {
        return static_cast<size_t>(std::lower_bound(blk->atoms.begin(), blk->atoms.end(), a) - blk->atoms.begin());
    };
    std::vector<uint64_t> need(cons.size(), 0);
    for (size_t i = 0; i < cons.size(); ++i)
        for (const RegAtom& a : cons[i].guard) need[i] |= uint64_t{1} << bitOf(a);

    for (uint64_t mask : mintermMasks(blk->atoms)) {
        CsaTransition tr;
        tr.mask = mask;
        for (size_t i = 0; i < blk->atoms.size(); ++i) tr.guard.push_back({blk->atoms[i], ((mask >> i) & 1) != 0});
        std::vector<int> target;
        std::map<int, std::set<RTerm>> upd;
        for (size_t i = 0; i < cons.size(); ++i) {
            if ((need[i] & mask) != need[i]) continue;
            target.push_back(cons[i].dst);
            for (const RegAssign& ra : cons[i].update) upd[ra.reg].insert(ra.term.begin(), ra.term.end());
        }
        std::sort(target.begin(), target.end());
        target.erase(std::unique(target.begin(), target.end()), target.end());
        for (auto& [r, terms] : upd) tr.update.push_back({r, SetTerm(terms.begin(), terms.end())});
        tr.target = internSet(std::move(target));
        blk->trans.push_back(std::move(tr));
    }
    blk->index();
    return blk;
}

const CsaBlock& BasicCsa::block(int s, int cls) {
    auto& slot = blocks_[static_cast<size_t>(s)][static_cast<size_t>(cls)];
    if (!slot) {
        auto built = buildBlock(s, cls);
        // buildBlock may have grown blocks_, so look the slot up again
        blocks_[static_cast<size_t>(s)][static_cast<size_t>(cls)] = std::move(built);
    }
    return *blocks_[static_cast<size_t>(s)][static_cast<size_t>(cls)];
}

const CsaBlock* BasicCsa::builtBlock(int s, int cls) const {
    return blocks_[static_cast<size_t>(s)][static_cast<size_t>(cls)].get();
}

void BasicCsa::buildAll() {
    for (size_t s = 0; s < sets_.size(); ++s)
        for (int c = 0; c < numClasses(); ++c) block(static_cast<int>(s), c);
}

size_t BasicCsa::transitionCount() const {
    size_t n = 0;
    for (const auto& row : blocks_)
        for (const auto& b : row)
            if (b) n += b->trans.size();
    return n;
}

SetMemory initialMemory(const BasicCsa& csa) {
    SetMemory m;
    for (size_t x = 0; x < csa.ca().counters.size(); ++x) m[csa.reg(static_cast<int>(x), 0)] = {0};
    return m;
}

bool evalAtom(const RegAtom& a, const SetMemory& mem) {
    auto it = mem.find(a.reg);
    if (it == mem.end() || it->second.empty()) return false;
    return a.op == CmpOp::Lt ? *it->second.begin() < a.k : *it->second.rbegin() >= a.k;
}

bool evalFinal(const FinalDnf& f, const SetMemory& mem) {
    return std::any_of(f.begin(), f.end(), [&](const std::vector<RegAtom>& conj) {
        return std::all_of(conj.begin(), conj.end(), [&](const RegAtom& a) { return evalAtom(a, mem); });
    });
}

std::set<uint32_t> evalTerm(const RTerm& t, const SetMemory& mem) {
    if (t.kind == RTerm::Kind::Const) return {t.value};
    std::set<uint32_t> out;
    auto it = mem.find(t.reg);
    if (it == mem.end()) return out;
    for (uint32_t v : it->second) {
        if (t.filtered && (t.fop == CmpOp::Lt ? !(v < t.fk) : !(v >= t.fk))) continue;
        if (t.inc) v = t.satCap ? std::min(v + 1, t.satCap) : v + 1;
        out.insert(v);
    }
    return out;
}

void BasicSim::reset() {
    state_ = csa_->initial();
    mem_ = initialMemory(*csa_);
}

void BasicSim::step(unsigned char b) {
    const int cls = csa_->ca().byteClassOf[b];
    const CsaBlock& blk = csa_->block(state_, cls);
    uint64_t mask = 0;
    for (size_t i = 0; i < blk.atoms.size(); ++i)
        if (evalAtom(blk.atoms[i], mem_)) mask |= uint64_t{1} << i;
    int ti = blk.lookup(mask);
    if (ti < 0) throw std::logic_error("basic CSA: memory satisfies no minterm");
    const CsaTransition& tr = blk.trans[static_cast<size_t>(ti)];
    SetMemory next;
    for (const RegAssign& ra : tr.update) {
        std::set<uint32_t> vals;
        for (const RTerm& t : ra.term) vals.merge(evalTerm(t, mem_));
        if (!vals.empty()) next[ra.reg] = std::move(vals);
    }
    mem_ = std::move(next);
    state_ = tr.target;
}

bool basicMatch(BasicCsa& csa, std::string_view word) {
    BasicSim sim(csa);
    for (char c : word) sim.step(static_cast<unsigned char>(c));
    return sim.accepted();
}

std::pair<std::vector<int>, SetMemory> encode(const BasicCsa& csa, const std::vector<CaConfiguration>& configs,
                                              bool liveOnly) {
    std::vector<int> states;
    SetMemory mem;
    const auto& counters = csa.ca().counters;
    for (const CaConfiguration& c : configs) {
        states.push_back(c.state);
        for (size_t x = 0; x < counters.size(); ++x) {
            if (liveOnly && c.state != 0 && !counters[x].contains(c.state)) continue;
            mem[csa.reg(static_cast<int>(x), c.state)].insert(c.mem[x]);
        }
    }
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    return {states, mem};
}

std::vector<CaConfiguration> decode(const BasicCsa& csa, const std::vector<int>& states, const SetMemory& mem) {
    std::vector<CaConfiguration> out;
    const size_t nc = csa.ca().counters.size();
    for (int q : states) {
        std::vector<std::vector<uint32_t>> choices(nc);
        for (size_t x = 0; x < nc; ++x) {
            auto it = mem.find(csa.reg(static_cast<int>(x), q));
            if (it == mem.end()) choices[x] = {0};
            else choices[x].assign(it->second.begin(), it->second.end());
        }
        std::vector<std::vector<uint32_t>> prod{{}};
        for (const auto& ch : choices) {
            std::vector<std::vector<uint32_t>> next;
            for (const auto& p : prod)
                for (uint32_t v : ch) {
                    next.push_back(p);
                    next.back().push_back(v);
                }
            prod = std::move(next);
        }
        for (auto& m : prod) out.push_back({q, std::move(m)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string atomToString(const BasicCsa& csa, const RegAtom& a) {
    return csa.regName(a.reg) + (a.op == CmpOp::Lt ? "<" : ">=") + std::to_string(a.k);
}

std::string termToString(const BasicCsa& csa, const RTerm& t) {
    if (t.kind == RTerm::Kind::Const) return std::to_string(t.value);
    std::string s = csa.regName(t.reg);
    if (t.filtered) s += std::string("[") + (t.fop == CmpOp::Lt ? "<" : ">=") + std::to_string(t.fk) + "]";
    if (t.inc) s += "+1";
    if (t.satCap) s = "sat" + std::to_string(t.satCap) + "(" + s + ")";
    return s;
}

}  // namespace crex
