#include "crex/export.hpp"

#include <map>
#include <sstream>
#include <tuple>

namespace crex {

namespace {

std::string finalToString(const CountingAutomaton& ca, const FinalCond& f) {
    if (!f) return "";
    return f->empty() ? "T" : guardToString(ca, *f);
}

// Edges sharing endpoints and label text get their classes merged.
struct EdgeKey {
    int src, dst;
    std::string guard, update;
    bool operator<(const EdgeKey& o) const {
        return std::tie(src, dst, guard, update) < std::tie(o.src, o.dst, o.guard, o.update);
    }
};

void writeEdges(std::ostringstream& os, const std::map<EdgeKey, ByteSet>& edges) {
    for (const auto& [k, cls] : edges) {
        std::string label = classToString(cls) + "; " + (k.guard.empty() ? "T" : k.guard) + " / " +
                            (k.update.empty() ? "-" : k.update);
        os << "  s" << k.src << " -> s" << k.dst << " [label=" << dotEscape(label) << "];\n";
    }
}

std::string disjToString(const AugmentedCsa& csa, const SharedDisj& d) {
    std::string s;
    for (const SharedAtom& a : d) s += (s.empty() ? "" : " | ") + csa.atomToString(a);
    return d.size() > 1 ? "(" + s + ")" : s;
}

std::string augFinal(const AugmentedCsa& csa, const AugState& st) {
    std::string fin;
    for (const auto& conj : st.final) {
        std::string c;
        for (const auto& d : conj) c += (c.empty() ? "" : " & ") + disjToString(csa, d);
        fin += (fin.empty() ? "" : " | ") + (c.empty() ? std::string("T") : c);
    }
    return fin;
}

std::string augGuard(const AugmentedCsa& csa, const AugBlock& blk, const CsaTransition& tr) {
    std::string g;
    for (size_t i = 0; i < tr.guard.size(); ++i) {
        const SharedDisj& d = blk.atoms[i];
        if (!tr.guard[i].positive && d.empty()) continue;  // negation of false
        std::string lit = tr.guard[i].positive ? disjToString(csa, d) : "!" + (d.size() > 1 ? disjToString(csa, d) : "(" + disjToString(csa, d) + ")");
        g += (g.empty() ? "" : " & ") + lit;
    }
    return g;
}

std::string augUpdate(const AugmentedCsa& csa, const AugTransition& tr) {
    std::string u;
    for (const SlotAssign& sa : tr.update) {
        u += (u.empty() ? "" : ", ") + csa.regName(sa.reg) + ":=";
        for (size_t i = 0; i < sa.terms.size(); ++i) u += (i ? " U " : "") + csa.termToString(sa.terms[i]);
    }
    return u;
}

std::string basicFinal(BasicCsa& csa, int s) {
    std::string fin;
    for (const auto& conj : csa.finalCond(s)) {
        std::string c;
        for (const auto& a : conj) c += (c.empty() ? "" : " & ") + atomToString(csa, a);
        fin += (fin.empty() ? "" : " | ") + (c.empty() ? std::string("T") : c);
    }
    return fin;
}

std::string basicGuard(const BasicCsa& csa, const CsaTransition& tr) {
    std::string g;
    for (const Literal& l : tr.guard)
        g += (g.empty() ? "" : " & ") + (l.positive ? atomToString(csa, l.atom) : "!(" + atomToString(csa, l.atom) + ")");
    return g;
}

std::string basicUpdate(const BasicCsa& csa, const CsaTransition& tr) {
    std::string u;
    for (const RegAssign& ra : tr.update) {
        u += (u.empty() ? "" : ", ") + csa.regName(ra.reg) + ":=";
        for (size_t i = 0; i < ra.term.size(); ++i) u += (i ? " U " : "") + termToString(csa, ra.term[i]);
    }
    return u;
}

}  // namespace

std::string updateToString(const CountingAutomaton& ca, const CaTransition& t) {
    std::string u;
    for (size_t x = 0; x < ca.counters.size(); ++x) {
        const std::string n = counterName(x);
        std::string a;
        switch (t.update[x]) {
            case Assign::Zero:
                if (ca.counters[x].contains(t.src)) a = n + ":=0";
                break;
            case Assign::One: a = n + ":=1"; break;
            case Assign::Keep: a = n + ":=" + n; break;
            case Assign::Inc: a = n + ":=" + n + "+1"; break;
        }
        if (!a.empty()) u += (u.empty() ? "" : ", ") + a;
    }
    return u;
}

std::string exportCaDot(const CountingAutomaton& ca) {
    std::ostringstream os;
    os << "digraph ca {\n  rankdir=LR;\n";
    for (int q = 0; q < ca.numStates; ++q) {
        const FinalCond& f = ca.finals[static_cast<size_t>(q)];
        std::string label = ca.stateNames[static_cast<size_t>(q)];
        if (f) label += "\nF: " + finalToString(ca, f);
        os << "  s" << q << " [label=" << dotEscape(label) << ", shape=" << (f ? "doublecircle" : "circle") << "];\n";
    }
    os << "  init [shape=point];\n  init -> s0;\n";
    std::map<EdgeKey, ByteSet> edges;
    for (const CaTransition& t : ca.trans) edges[{t.src, t.dst, guardToString(ca, t.guard), updateToString(ca, t)}] |= t.cls;
    writeEdges(os, edges);
    os << "}\n";
    return os.str();
}

nlohmann::json exportCaJson(const CountingAutomaton& ca) {
    nlohmann::json j;
    j["schema"] = "crex.ca/1";
    nlohmann::json states = nlohmann::json::array();
    for (int q = 0; q < ca.numStates; ++q) {
        const FinalCond& f = ca.finals[static_cast<size_t>(q)];
        states.push_back({{"id", q},
                          {"name", ca.stateNames[static_cast<size_t>(q)]},
                          {"final", f ? nlohmann::json(finalToString(ca, f)) : nlohmann::json(nullptr)}});
    }
    j["states"] = states;
    nlohmann::json counters = nlohmann::json::array();
    for (size_t x = 0; x < ca.counters.size(); ++x) {
        const CounterInfo& c = ca.counters[x];
        nlohmann::json st = nlohmann::json::array();
        for (int q : c.states) st.push_back(ca.stateNames[static_cast<size_t>(q)]);
        counters.push_back({{"name", counterName(x)},
                            {"min", c.min},
                            {"max", c.infinite() ? nlohmann::json(nullptr) : nlohmann::json(c.max)},
                            {"states", st}});
    }
    j["counters"] = counters;
    nlohmann::json trans = nlohmann::json::array();
    for (const CaTransition& t : ca.trans)
        trans.push_back({{"from", t.src},
                         {"to", t.dst},
                         {"class", classToString(t.cls)},
                         {"guard", guardToString(ca, t.guard)},
                         {"update", updateToString(ca, t)}});
    j["transitions"] = trans;
    return j;
}

std::string exportBasicDot(BasicCsa& csa) {
    csa.buildAll();
    std::ostringstream os;
    os << "digraph basic_csa {\n  rankdir=LR;\n";
    for (size_t s = 0; s < csa.numStates(); ++s) {
        std::string label = csa.stateName(static_cast<int>(s));
        std::string fin = basicFinal(csa, static_cast<int>(s));
        if (!fin.empty()) label += "\nF: " + fin;
        os << "  s" << s << " [label=" << dotEscape(label) << ", shape=" << (fin.empty() ? "box" : "doubleoctagon")
           << "];\n";
    }
    os << "  init [shape=point];\n  init -> s0;\n";
    std::map<EdgeKey, ByteSet> edges;
    for (size_t s = 0; s < csa.numStates(); ++s)
        for (int c = 0; c < csa.numClasses(); ++c)
            for (const CsaTransition& tr : csa.builtBlock(static_cast<int>(s), c)->trans)
                edges[{static_cast<int>(s), tr.target, basicGuard(csa, tr), basicUpdate(csa, tr)}] |=
                    csa.ca().byteClasses[static_cast<size_t>(c)];
    writeEdges(os, edges);
    os << "}\n";
    return os.str();
}

nlohmann::json exportBasicJson(BasicCsa& csa) {
    csa.buildAll();
    const CountingAutomaton& ca = csa.ca();
    nlohmann::json j;
    j["schema"] = "crex.csa-basic/1";
    nlohmann::json states = nlohmann::json::array();
    for (size_t s = 0; s < csa.numStates(); ++s) {
        nlohmann::json caStates = nlohmann::json::array();
        for (int q : csa.stateSet(static_cast<int>(s))) caStates.push_back(ca.stateNames[static_cast<size_t>(q)]);
        std::string fin = basicFinal(csa, static_cast<int>(s));
        states.push_back({{"id", s},
                          {"caStates", caStates},
                          {"final", fin.empty() ? nlohmann::json(nullptr) : nlohmann::json(fin)}});
    }
    j["states"] = states;
    j["initial"] = csa.initial();
    j["dead"] = csa.dead();
    nlohmann::json trans = nlohmann::json::array();
    for (size_t s = 0; s < csa.numStates(); ++s)
        for (int c = 0; c < csa.numClasses(); ++c)
            for (const CsaTransition& tr : csa.builtBlock(static_cast<int>(s), c)->trans)
                trans.push_back({{"from", s},
                                 {"to", tr.target},
                                 {"class", classToString(ca.byteClasses[static_cast<size_t>(c)])},
                                 {"guard", basicGuard(csa, tr)},
                                 {"update", basicUpdate(csa, tr)}});
    j["transitions"] = trans;
    return j;
}

std::string exportAugmentedDot(AugmentedCsa& csa) {
    csa.buildAll();
    std::ostringstream os;
    os << "digraph augmented_csa {\n  rankdir=LR;\n";
    for (size_t s = 0; s < csa.numStates(); ++s) {
        const AugState& st = csa.state(static_cast<int>(s));
        std::string label = csa.stateName(static_cast<int>(s));
        std::string fin = augFinal(csa, st);
        if (!fin.empty()) label += "\nF: " + fin;
        os << "  s" << s << " [label=" << dotEscape(label) << ", shape=" << (fin.empty() ? "box" : "doubleoctagon")
           << "];\n";
    }
    os << "  init [shape=point];\n  init -> s0;\n";
    std::map<EdgeKey, ByteSet> edges;
    for (size_t s = 0; s < csa.numStates(); ++s) {
        for (int c = 0; c < csa.numClasses(); ++c) {
            const AugBlock* blk = csa.builtBlock(static_cast<int>(s), c);
            for (size_t i = 0; i < blk->trans.size(); ++i) {
                const AugTransition& tr = blk->trans[i];
                if (tr.pruned) continue;
                EdgeKey k{static_cast<int>(s), tr.target, augGuard(csa, *blk, blk->basic->trans[i]), augUpdate(csa, tr)};
                edges[k] |= csa.ca().byteClasses[static_cast<size_t>(c)];
            }
        }
    }
    writeEdges(os, edges);
    os << "}\n";
    return os.str();
}

nlohmann::json exportAugmentedJson(AugmentedCsa& csa) {
    csa.buildAll();
    const CountingAutomaton& ca = csa.ca();
    nlohmann::json j;
    j["schema"] = "crex.augmented/1";
    nlohmann::json regs = nlohmann::json::array();
    for (size_t r = 0; r < csa.registers().size(); ++r) {
        const SharedReg& sr = csa.registers().at(static_cast<int>(r));
        nlohmann::json carrier = nlohmann::json::array();
        for (int e : sr.carrier)
            carrier.push_back({{"state", ca.stateNames[static_cast<size_t>(e / 2)]}, {"marked", (e & 1) != 0}});
        regs.push_back({{"id", r}, {"name", csa.regName(static_cast<int>(r))}, {"counter", counterName(static_cast<size_t>(sr.counter))}, {"carrier", carrier}});
    }
    j["registers"] = regs;
    nlohmann::json states = nlohmann::json::array();
    for (size_t s = 0; s < csa.numStates(); ++s) {
        const AugState& st = csa.state(static_cast<int>(s));
        nlohmann::json caStates = nlohmann::json::array();
        for (int q : csa.basic().stateSet(st.basic)) caStates.push_back(ca.stateNames[static_cast<size_t>(q)]);
        std::string fin = augFinal(csa, st);
        states.push_back({{"id", s},
                          {"caStates", caStates},
                          {"active", st.ac},
                          {"final", fin.empty() ? nlohmann::json(nullptr) : nlohmann::json(fin)}});
    }
    j["states"] = states;
    j["initial"] = csa.initial();
    nlohmann::json trans = nlohmann::json::array();
    for (size_t s = 0; s < csa.numStates(); ++s) {
        for (int c = 0; c < csa.numClasses(); ++c) {
            const AugBlock* blk = csa.builtBlock(static_cast<int>(s), c);
            for (size_t i = 0; i < blk->trans.size(); ++i) {
                const AugTransition& tr = blk->trans[i];
                if (tr.pruned) continue;
                trans.push_back({{"from", s},
                                 {"to", tr.target},
                                 {"class", classToString(ca.byteClasses[static_cast<size_t>(c)])},
                                 {"guard", augGuard(csa, *blk, blk->basic->trans[i])},
                                 {"update", augUpdate(csa, tr)}});
            }
        }
    }
    j["transitions"] = trans;
    return j;
}

}  // namespace crex
