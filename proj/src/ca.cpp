#include "crex/ca.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace crex {

bool CounterInfo::contains(int q) const { return std::binary_search(states.begin(), states.end(), q); }

std::string counterName(size_t i) {
    static const char* names[] = {"x", "y", "z"};
    if (i < 3) return names[i];
    return "x" + std::to_string(i);
}

namespace {

std::vector<int> unite(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

struct Glushkov {
    const RegexAst& ast;
    std::vector<std::vector<int>> first, last;
    std::vector<char> null;

    explicit Glushkov(const RegexAst& a) : ast(a) {
        first.resize(a.nodes.size());
        last.resize(a.nodes.size());
        null.resize(a.nodes.size());
        compute(a.root);
    }

    void compute(int id) {
        const Node& n = ast.at(id);
        auto ix = static_cast<size_t>(id);
        for (int k : n.kids) compute(k);
        switch (n.kind) {
            case NodeKind::Epsilon: null[ix] = 1; break;
            case NodeKind::Symbol:
                first[ix] = last[ix] = {n.pos};
                null[ix] = 0;
                break;
            case NodeKind::Union:
                null[ix] = 0;
                for (int k : n.kids) {
                    auto kx = static_cast<size_t>(k);
                    first[ix] = unite(first[ix], first[kx]);
                    last[ix] = unite(last[ix], last[kx]);
                    null[ix] = null[ix] || null[kx];
                }
                break;
            case NodeKind::Concat: {
                null[ix] = 1;
                for (int k : n.kids) {
                    auto kx = static_cast<size_t>(k);
                    if (null[ix]) first[ix] = unite(first[ix], first[kx]);
                    null[ix] = null[ix] && null[kx];
                }
                bool tailNull = true;
                for (auto it = n.kids.rbegin(); it != n.kids.rend() && tailNull; ++it) {
                    auto kx = static_cast<size_t>(*it);
                    last[ix] = unite(last[ix], last[kx]);
                    tailNull = null[kx];
                }
                break;
            }
            case NodeKind::Counted:
            case NodeKind::Star: {
                auto kx = static_cast<size_t>(n.kids[0]);
                first[ix] = first[kx];
                last[ix] = last[kx];
                null[ix] = n.kind == NodeKind::Star || n.min == 0 || null[kx];
                break;
            }
        }
    }

    std::vector<FollowTriple> follow() const {
        std::set<FollowTriple> out;
        for (size_t id = 0; id < ast.nodes.size(); ++id) {
            const Node& n = ast.nodes[id];
            if (n.kind == NodeKind::Concat) {
                // last of the prefix seen so far, respecting nullable kids
                std::vector<int> prefLast;
                for (int k : n.kids) {
                    auto kx = static_cast<size_t>(k);
                    for (int a : prefLast)
                        for (int b : first[kx]) out.insert({a, b, -1});
                    if (null[kx]) prefLast = unite(prefLast, last[kx]);
                    else prefLast = last[kx];
                }
            } else if ((n.kind == NodeKind::Counted && n.max > 1) || n.kind == NodeKind::Star) {
                for (int a : last[id])
                    for (int b : first[id]) out.insert({a, b, static_cast<int>(id)});
            }
        }
        return {out.begin(), out.end()};
    }
};

bool reachable(const RegexAst& ast, int node) { return node >= 0 && static_cast<size_t>(node) < ast.nodes.size(); }

}  // namespace

std::vector<int> firstSet(const RegexAst& ast, int node) {
    Glushkov g(ast);
    return reachable(ast, node) ? g.first[static_cast<size_t>(node)] : std::vector<int>{};
}
std::vector<int> lastSet(const RegexAst& ast, int node) {
    Glushkov g(ast);
    return reachable(ast, node) ? g.last[static_cast<size_t>(node)] : std::vector<int>{};
}
std::vector<int> firstSet(const RegexAst& ast) { return firstSet(ast, ast.root); }
std::vector<int> lastSet(const RegexAst& ast) { return lastSet(ast, ast.root); }
std::vector<FollowTriple> followSet(const RegexAst& ast) { return Glushkov(ast).follow(); }

void CountingAutomaton::buildIndex() {
    index_.assign(static_cast<size_t>(numStates) * 256, {});
    for (size_t t = 0; t < trans.size(); ++t) {
        const CaTransition& tr = trans[t];
        for (int b = 0; b < 256; ++b)
            if (tr.cls.test(static_cast<size_t>(b)))
                index_[static_cast<size_t>(tr.src) * 256 + static_cast<size_t>(b)].push_back(static_cast<int>(t));
    }
}

void CountingAutomaton::buildByteClasses() {
    // signature of a byte: which transition labels contain it
    std::vector<ByteSet> labels;
    for (const auto& t : trans) labels.push_back(t.cls);
    std::sort(labels.begin(), labels.end(), [](const ByteSet& a, const ByteSet& b) { return a.to_string() < b.to_string(); });
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    std::map<std::vector<bool>, int> sigToClass;
    byteClassOf.assign(256, 0);
    byteClasses.clear();
    for (int b = 0; b < 256; ++b) {
        std::vector<bool> sig(labels.size());
        for (size_t i = 0; i < labels.size(); ++i) sig[i] = labels[i].test(static_cast<size_t>(b));
        auto it = sigToClass.find(sig);
        int c;
        if (it == sigToClass.end()) {
            c = static_cast<int>(byteClasses.size());
            sigToClass.emplace(sig, c);
            byteClasses.emplace_back();
        } else {
            c = it->second;
        }
        byteClassOf[static_cast<size_t>(b)] = c;
        byteClasses[static_cast<size_t>(c)].set(static_cast<size_t>(b));
    }
}

CountingAutomaton buildCa(const RegexAst& ast) {
    Glushkov g(ast);
    CountingAutomaton ca;
    ca.numStates = ast.positions + 1;
    auto posNode = positionNodes(ast);
    auto ranges = positionRanges(ast);

    ca.stateClass.assign(static_cast<size_t>(ca.numStates), ByteSet{});
    ca.stateNames.assign(static_cast<size_t>(ca.numStates), "q0");
    std::map<std::string, int> occ;
    for (int p = 1; p <= ast.positions; ++p) {
        const Node& n = ast.at(posNode[static_cast<size_t>(p)]);
        ca.stateClass[static_cast<size_t>(p)] = n.cls;
        std::string base = classToString(n.cls);
        ca.stateNames[static_cast<size_t>(p)] = base + std::to_string(++occ[base]);
    }

    // counters, in node pre-order so numbering follows the pattern text
    std::vector<int> counterOfNode(ast.nodes.size(), -1);
    std::function<void(int)> collect = [&](int id) {
        const Node& n = ast.at(id);
        if (hasCounter(n)) {
            CounterInfo ci;
            ci.node = id;
            ci.min = n.min;
            ci.max = n.max;
            PosRange r = ranges[static_cast<size_t>(id)];
            for (int p = r.lo; p <= r.hi; ++p) ci.states.push_back(p);
            ci.entry = g.first[static_cast<size_t>(id)];
            ci.exit = g.last[static_cast<size_t>(id)];
            counterOfNode[static_cast<size_t>(id)] = static_cast<int>(ca.counters.size());
            ca.counters.push_back(std::move(ci));
        }
        for (int k : n.kids) collect(k);
    };
    collect(ast.root);
    const size_t nc = ca.counters.size();

    std::vector<int> parent(ast.nodes.size(), -1);
    for (size_t id = 0; id < ast.nodes.size(); ++id)
        for (int k : ast.nodes[id].kids) parent[static_cast<size_t>(k)] = static_cast<int>(id);
    // strict: a node whose positions equal its ancestor's is still not above it
    auto strictlyBelow = [&](int node, int anc) {
        for (int p = parent[static_cast<size_t>(node)]; p >= 0; p = parent[static_cast<size_t>(p)])
            if (p == anc) return true;
        return false;
    };

    auto inFirst = [&](const CounterInfo& c, int q) { return std::binary_search(c.entry.begin(), c.entry.end(), q); };
    auto inLast = [&](const CounterInfo& c, int q) { return std::binary_search(c.exit.begin(), c.exit.end(), q); };
    auto geAtom = [&](size_t i, CaGuard& guard) {
        if (ca.counters[i].min > 0) guard.push_back({static_cast<int>(i), CmpOp::Ge, ca.counters[i].min});
    };

    std::set<std::tuple<int, int, CaGuard, std::vector<Assign>>> seen;
    auto emit = [&](int src, int dst, CaGuard guard, std::vector<Assign> upd) {
        std::sort(guard.begin(), guard.end());
        if (!seen.insert({src, dst, guard, upd}).second) return;
        CaTransition t;
        t.src = src;
        t.dst = dst;
        t.cls = ca.stateClass[static_cast<size_t>(dst)];
        t.guard = std::move(guard);
        t.update = std::move(upd);
        ca.trans.push_back(std::move(t));
    };

    // from the initial state
    for (int a : g.first[static_cast<size_t>(ast.root)]) {
        std::vector<Assign> u(nc, Assign::Zero);
        for (size_t i = 0; i < nc; ++i)
            if (ca.counters[i].contains(a)) u[i] = Assign::One;
        emit(0, a, {}, std::move(u));
    }

    for (const FollowTriple& f : g.follow()) {
        const int a = f.from, b = f.to;
        CaGuard guard;
        std::vector<Assign> u(nc, Assign::Zero);
        if (f.loopNode < 0) {
            for (size_t i = 0; i < nc; ++i) {
                const CounterInfo& c = ca.counters[i];
                bool ina = c.contains(a), inb = c.contains(b);
                // leaving the loop body needs the lower bound
                if (inLast(c, a) && !inb) geAtom(i, guard);
                if (ina && inb) u[i] = Assign::Keep;
                else if (inb && inFirst(c, b)) u[i] = Assign::One;
            }
        } else {
            const int s = counterOfNode[static_cast<size_t>(f.loopNode)];
            for (size_t i = 0; i < nc; ++i) {
                const CounterInfo& c = ca.counters[i];
                if (static_cast<int>(i) == s) {
                    if (!c.infinite()) guard.push_back({s, CmpOp::Lt, c.max});
                    u[i] = Assign::Inc;
                    continue;
                }
                if (strictlyBelow(c.node, f.loopNode)) {
                    if (inLast(c, a)) geAtom(i, guard);
                    if (inFirst(c, b)) u[i] = Assign::One;
                } else if (c.contains(a) && c.contains(b)) {
                    u[i] = Assign::Keep;
                }
            }
        }
        emit(a, b, std::move(guard), std::move(u));
    }

    ca.finals.assign(static_cast<size_t>(ca.numStates), std::nullopt);
    if (g.null[static_cast<size_t>(ast.root)]) ca.finals[0] = CaGuard{};
    for (int q : g.last[static_cast<size_t>(ast.root)]) {
        CaGuard fg;
        for (size_t i = 0; i < nc; ++i)
            if (inLast(ca.counters[i], q)) geAtom(i, fg);
        ca.finals[static_cast<size_t>(q)] = fg;
    }

    ca.buildIndex();
    ca.buildByteClasses();
    return ca;
}

CaConfiguration initialConfig(const CountingAutomaton& ca) {
    return {0, std::vector<uint32_t>(ca.counters.size(), 0)};
}

bool holds(const CaGuard& g, const std::vector<uint32_t>& mem) {
    for (const CaAtom& a : g) {
        uint32_t v = mem[static_cast<size_t>(a.counter)];
        if (a.op == CmpOp::Lt ? !(v < a.k) : !(v >= a.k)) return false;
    }
    return true;
}

bool isFinal(const CountingAutomaton& ca, const CaConfiguration& c) {
    const FinalCond& f = ca.finals[static_cast<size_t>(c.state)];
    return f && holds(*f, c.mem);
}

std::vector<CaConfiguration> caStep(const CountingAutomaton& ca, const CaConfiguration& c, unsigned char b) {
    std::vector<CaConfiguration> out;
    for (int t : ca.candidates(c.state, b)) {
        const CaTransition& tr = ca.trans[static_cast<size_t>(t)];
        if (!holds(tr.guard, c.mem)) continue;
        CaConfiguration n;
        n.state = tr.dst;
        n.mem.resize(c.mem.size());
        for (size_t i = 0; i < c.mem.size(); ++i) {
            switch (tr.update[i]) {
                case Assign::Zero: n.mem[i] = 0; break;
                case Assign::One: n.mem[i] = 1; break;
                case Assign::Keep: n.mem[i] = c.mem[i]; break;
                case Assign::Inc: n.mem[i] = std::min(c.mem[i] + 1, ca.counters[i].cap()); break;
            }
        }
        out.push_back(std::move(n));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string guardToString(const CountingAutomaton&, const CaGuard& g) {
    std::string s;
    for (const CaAtom& a : g) {
        if (!s.empty()) s += " & ";
        s += counterName(static_cast<size_t>(a.counter)) + (a.op == CmpOp::Lt ? "<" : ">=") + std::to_string(a.k);
    }
    return s;
}

std::vector<std::string> validateCaProperties(const CountingAutomaton& ca) {
    std::vector<std::string> report;
    auto where = [&](size_t t) {
        const CaTransition& tr = ca.trans[t];
        return "transition " + std::to_string(t) + " (" + ca.stateNames.at(static_cast<size_t>(tr.src)) + "->" +
               ca.stateNames.at(static_cast<size_t>(tr.dst)) + ")";
    };
    const size_t nc = ca.counters.size();
    for (size_t t = 0; t < ca.trans.size(); ++t) {
        const CaTransition& tr = ca.trans[t];
        if (tr.update.size() != nc) {
            report.push_back(where(t) + ": update does not cover every counter");
            continue;
        }
        std::vector<int> lt(nc, 0), ge(nc, 0);
        for (const CaAtom& a : tr.guard) {
            if (a.counter < 0 || static_cast<size_t>(a.counter) >= nc) {
                report.push_back(where(t) + ": guard names an unknown counter");
                continue;
            }
            auto i = static_cast<size_t>(a.counter);
            (a.op == CmpOp::Lt ? lt[i] : ge[i])++;
            if (lt[i] + ge[i] > 1) report.push_back(where(t) + ": more than one atom on counter " + counterName(i));
            if (a.op == CmpOp::Lt && a.k != ca.counters[i].max)
                report.push_back(where(t) + ": upper-bound atom does not use the counter maximum");
            if (a.op == CmpOp::Ge && a.k != ca.counters[i].min)
                report.push_back(where(t) + ": lower-bound atom does not use the counter minimum");
        }
        for (size_t i = 0; i < nc; ++i) {
            const CounterInfo& c = ca.counters[i];
            const std::string xn = counterName(i);
            bool srcIn = c.contains(tr.src), dstIn = c.contains(tr.dst);
            bool srcExit = std::binary_search(c.exit.begin(), c.exit.end(), tr.src);
            bool dstEntry = std::binary_search(c.entry.begin(), c.entry.end(), tr.dst);
            Assign u = tr.update[i];
            bool needLt = !c.infinite();
            bool needGe = c.min > 0;
            if (u == Assign::Inc && needLt && !lt[i]) report.push_back(where(t) + ": increment without " + xn + " < max guard");
            if (lt[i] && u != Assign::Inc) report.push_back(where(t) + ": " + xn + " < max guard without increment");
            if (ge[i] && u == Assign::Inc) report.push_back(where(t) + ": " + xn + " >= min guard on an increment");
            if (ge[i] && u == Assign::Keep) report.push_back(where(t) + ": " + xn + " >= min guard on a copy");
            if (!srcIn && !dstIn) {
                if (u != Assign::Zero) report.push_back(where(t) + ": transition outside the loop of " + xn + " does not reset it");
                if (lt[i] || ge[i]) report.push_back(where(t) + ": transition outside the loop of " + xn + " tests it");
                continue;
            }
            if (srcIn && dstIn) {
                if (u == Assign::Keep) {
                    if (lt[i] || ge[i]) report.push_back(where(t) + ": inner transition of " + xn + " carries a guard on it");
                } else if (u == Assign::Inc || u == Assign::One) {
                    if (!srcExit || !dstEntry)
                        report.push_back(where(t) + ": loop-back transition of " + xn + " not from exit to entry");
                    if (u == Assign::One && needGe && !ge[i])
                        report.push_back(where(t) + ": re-entry of " + xn + " without " + xn + " >= min guard");
                } else {
                    report.push_back(where(t) + ": inner transition of " + xn + " resets it to 0");
                }
            } else if (dstIn) {
                if (u != Assign::One) report.push_back(where(t) + ": entry into the loop of " + xn + " does not set it to 1");
                if (!dstEntry) report.push_back(where(t) + ": entry into the loop of " + xn + " at a non-entry state");
                if (lt[i] || ge[i]) report.push_back(where(t) + ": entry into the loop of " + xn + " tests it");
            } else {
                if (u != Assign::Zero) report.push_back(where(t) + ": exit from the loop of " + xn + " does not reset it");
                if (!srcExit) report.push_back(where(t) + ": exit from the loop of " + xn + " at a non-exit state");
                if (needGe && !ge[i]) report.push_back(where(t) + ": exit from the loop of " + xn + " without " + xn + " >= min guard");
            }
        }
    }
    // Delta+ targets must be exactly the entry states.
    for (size_t i = 0; i < nc; ++i) {
        const CounterInfo& c = ca.counters[i];
        std::set<int> targets;
        bool any = false;
        for (const auto& tr : ca.trans)
            if (tr.update.size() == nc && tr.update[i] == Assign::Inc) {
                targets.insert(tr.dst);
                any = true;
            }
        if (any && std::vector<int>(targets.begin(), targets.end()) != c.entry)
            report.push_back("counter " + counterName(i) + ": increment targets differ from the entry states");
        for (size_t j = 0; j < nc; ++j) {
            if (j == i) continue;
            for (int q : c.states)
                if (ca.counters[j].contains(q))
                    report.push_back("counters " + counterName(i) + " and " + counterName(j) + " share state " +
                                     ca.stateNames.at(static_cast<size_t>(q)));
        }
    }
    // final conditions
    for (int q = 0; q < ca.numStates; ++q) {
        const FinalCond& f = ca.finals[static_cast<size_t>(q)];
        if (!f) continue;
        std::vector<int> seenCounter(nc, 0);
        for (const CaAtom& a : *f) {
            auto i = static_cast<size_t>(a.counter);
            if (i >= nc) continue;
            if (++seenCounter[i] > 1) report.push_back("final condition of " + ca.stateNames.at(static_cast<size_t>(q)) + " tests a counter twice");
            const CounterInfo& c = ca.counters[i];
            if (!std::binary_search(c.exit.begin(), c.exit.end(), q))
                report.push_back("final condition of " + ca.stateNames.at(static_cast<size_t>(q)) + " tests " + counterName(i) + " outside its exit states");
            if (a.op != CmpOp::Ge) report.push_back("final condition of " + ca.stateNames.at(static_cast<size_t>(q)) + " uses an upper-bound atom");
        }
    }
    if (ca.numStates > 0 && ca.finals[0])
        for (const CaAtom& a : *ca.finals[0]) report.push_back("initial state final condition tests " + counterName(static_cast<size_t>(a.counter)));
    return report;
}

}  // namespace crex
