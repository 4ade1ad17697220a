#include "crex/matcher.hpp"

#include <algorithm>
#include <atomic>

namespace crex {

namespace {
constexpr int kEmpty = -1;
constexpr int kConsumed = -2;

std::atomic<uint64_t> gRuns{0}, gViolations{0}, gMoves{0}, gBudget{0};

void audit(const MatchStats& s) {
    if (s.bytes == 0) return;
    gRuns.fetch_add(1, std::memory_order_relaxed);
    gMoves.fetch_add(s.lists.moves, std::memory_order_relaxed);
    gBudget.fetch_add(s.lists.increments + s.lists.inserts, std::memory_order_relaxed);
    if (!s.lists.ledgerHolds()) gViolations.fetch_add(1, std::memory_order_relaxed);
}
}  // namespace

LedgerAudit ledgerAudit() { return {gRuns.load(), gViolations.load(), gMoves.load(), gBudget.load()}; }

AugmentedMatcher::AugmentedMatcher(AugmentedCsa& csa) : csa_(&csa) { reset(); }

AugmentedMatcher::~AugmentedMatcher() { audit(stats_); }

void AugmentedMatcher::reset() {
    audit(stats_);
    pool_.reset();
    stats_ = {};
    state_ = csa_->initial();
    slots_.clear();
    // the initial {0} is set up before any byte and is not counted
    for (size_t i = 0; i < csa_->state(state_).ac.size(); ++i) slots_.push_back(pool_.restore({0}));
}

bool AugmentedMatcher::evalAtom(const SharedAtom& a) const {
    int h = slots_[static_cast<size_t>(a.slot)];
    if (h < 0) return false;
    const OffsetList& l = pool_[h];
    const int64_t k = a.k;
    switch (a.shift) {
        case SharedAtom::Shift::None: return a.op == CmpOp::Lt ? l.anyLt(k) : l.anyGe(k);
        case SharedAtom::Shift::Filtered:
            return a.op == CmpOp::Lt ? l.shiftedAnyLt(k, a.bound) : l.shiftedAnyGe(k, a.bound);
        case SharedAtom::Shift::Saturated:
            return a.op == CmpOp::Lt ? l.saturatedAnyLt(k, a.bound) : l.saturatedAnyGe(k, a.bound);
    }
    return false;
}

void AugmentedMatcher::step(unsigned char b) {
    ++stats_.bytes;
    const int cls = csa_->ca().byteClassOf[b];
    const AugBlock* blk = csa_->builtBlock(state_, cls);
    if (!blk) blk = &csa_->block(state_, cls);

    uint64_t mask = 0;
    for (size_t i = 0; i < blk->atoms.size(); ++i) {
        for (const SharedAtom& a : blk->atoms[i]) {
            ++stats_.guardEvals;
            if (evalAtom(a)) {
                mask |= uint64_t{1} << i;
                break;
            }
        }
    }
    const int ti = blk->basic->lookup(mask);
    if (ti < 0) throw std::logic_error("augmented CSA: memory satisfies no minterm");
    const AugTransition& tr = blk->trans[static_cast<size_t>(ti)];
    if (tr.pruned) throw std::logic_error("augmented CSA: took a transition with an unsatisfiable guard");

    const size_t width = csa_->state(tr.target).ac.size();
    scratch_.assign(width, kEmpty);
    for (const SlotAssign& sa : tr.update) {
        int acc = kEmpty;
        for (const SlotTerm& t : sa.terms) {
            int h;
            if (t.kind == RTerm::Kind::Const) {
                h = pool_.singleton(t.value, stats_.lists);
            } else {
                int& src = slots_[static_cast<size_t>(t.srcSlot)];
                if (src == kConsumed) throw std::logic_error("register " + csa_->regName(t.srcReg) + " read twice");
                h = src;
                src = kConsumed;
                if (h < 0) continue;
                OffsetList& l = pool_[h];
                if (t.inc) {
                    if (t.filterLt) {
                        l.filterLt(t.filterLt, stats_.lists);
                        l.incrementAll(stats_.lists);
                    } else {
                        l.incrementSaturating(t.satCap, stats_.lists);
                    }
                }
                if (l.empty()) {
                    pool_.release(h);
                    continue;
                }
            }
            acc = acc < 0 ? h : pool_.merge(acc, h, stats_.lists);
        }
        scratch_[static_cast<size_t>(sa.dstSlot)] = acc;
    }
    for (int h : slots_)
        if (h >= 0) {
            stats_.lists.drops += pool_[h].size();
            pool_.release(h);
        }
    slots_.swap(scratch_);
    state_ = tr.target;
}

bool AugmentedMatcher::accepted() const {
    for (const auto& conj : csa_->state(state_).final) {
        bool all = std::all_of(conj.begin(), conj.end(), [&](const SharedDisj& d) {
            return std::any_of(d.begin(), d.end(), [&](const SharedAtom& a) { return evalAtom(a); });
        });
        if (all) return true;
    }
    return false;
}

AugmentedMatcher::Snapshot AugmentedMatcher::snapshot() const {
    Snapshot s{state_, {}, stats_};
    for (int h : slots_) s.slots.push_back(h >= 0 ? pool_[h].values() : std::vector<int64_t>{});
    return s;
}

void AugmentedMatcher::restore(const Snapshot& s) {
    pool_.reset();
    state_ = s.state;
    stats_ = s.stats;
    slots_.clear();
    for (const auto& v : s.slots) slots_.push_back(v.empty() ? kEmpty : pool_.restore(v));
}

std::map<int, std::vector<int64_t>> AugmentedMatcher::registerValues() const {
    std::map<int, std::vector<int64_t>> out;
    const auto& ac = csa_->state(state_).ac;
    for (size_t i = 0; i < slots_.size(); ++i)
        if (slots_[i] >= 0) out[ac[i]] = pool_[slots_[i]].values();
    return out;
}

SetMemory AugmentedMatcher::decodeBasic() const {
    SetMemory mem;
    const BasicCsa& basic = csa_->basic();
    for (const auto& [reg, vals] : registerValues()) {
        const SharedReg& sr = csa_->registers().at(reg);
        const CounterInfo& ci = csa_->ca().counters[static_cast<size_t>(sr.counter)];
        for (int e : sr.carrier) {
            auto& dst = mem[basic.reg(sr.counter, e / 2)];
            for (int64_t v : vals) {
                if (!(e & 1)) {
                    dst.insert(static_cast<uint32_t>(v));
                } else if (ci.infinite()) {
                    dst.insert(std::min<uint32_t>(static_cast<uint32_t>(v) + 1, ci.cap()));
                } else if (v < ci.max) {
                    dst.insert(static_cast<uint32_t>(v) + 1);
                }
            }
        }
    }
    for (auto it = mem.begin(); it != mem.end();) it = it->second.empty() ? mem.erase(it) : std::next(it);
    return mem;
}

MatchOutcome matchWord(AugmentedCsa& csa, std::string_view text) {
    AugmentedMatcher m(csa);
    m.feed(text);
    return {m.accepted(), m.state()};
}

const char* engineName(Engine e) {
    switch (e) {
        case Engine::Augmented: return "augmented";
        case Engine::Basic: return "basic";
        case Engine::Oracle: return "oracle";
    }
    return "?";
}

Program::Program(std::string_view pattern, const ProgramOptions& opts) : opts_(opts) {
    RegexAst parsed = parse(pattern, ParseOptions{opts.dotAll});
    if (opts.unanchored) parsed = unanchored(parsed);
    ast_ = normalize(parsed);
    if (opts.engine != Engine::Oracle && !crex::stats(ast_).isFlat)
        throw NotFlatError("nested counting is not supported by the " + std::string(engineName(opts.engine)) + " engine");
    ca_ = buildCa(ast_);
    switch (opts.engine) {
        case Engine::Augmented:
            aug_ = std::make_unique<AugmentedCsa>(ca_, opts.stateCap);
            if (opts.eager) aug_->buildAll();
            augSim_ = std::make_unique<AugmentedMatcher>(*aug_);
            break;
        case Engine::Basic:
            basic_ = std::make_unique<BasicCsa>(ca_, opts.stateCap);
            if (opts.eager) basic_->buildAll();
            basicSim_ = std::make_unique<BasicSim>(*basic_);
            break;
        case Engine::Oracle: oracleSim_ = std::make_unique<OracleSim>(ca_, opts.stateCap); break;
    }
}

void Program::reset() {
    bytes_ = 0;
    if (augSim_) augSim_->reset();
    if (basicSim_) basicSim_->reset();
    if (oracleSim_) oracleSim_->reset();
}

void Program::feed(std::string_view bytes) {
    bytes_ += bytes.size();
    if (augSim_) augSim_->feed(bytes);
    if (basicSim_)
        for (char c : bytes) basicSim_->step(static_cast<unsigned char>(c));
    if (oracleSim_)
        for (char c : bytes) {
            if (oracleSim_->frontier().empty()) break;
            oracleSim_->step(static_cast<unsigned char>(c));
        }
}

bool Program::accepted() const {
    if (augSim_) return augSim_->accepted();
    if (basicSim_) return basicSim_->accepted();
    return oracleSim_->accepted();
}

MatchStats Program::stats() const {
    if (augSim_) return augSim_->stats();
    MatchStats s;
    s.bytes = bytes_;
    return s;
}

size_t Program::statesBuilt() const {
    if (aug_) return aug_->numStates();
    if (basic_) return basic_->numStates();
    return 0;
}

}  // namespace crex
