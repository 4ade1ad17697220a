#include "crex/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace crex {

void OracleSim::reset() { frontier_ = {initialConfig(*ca_)}; }

void OracleSim::step(unsigned char b) {
    std::set<CaConfiguration> next;
    for (const CaConfiguration& c : frontier_)
        for (CaConfiguration& n : caStep(*ca_, c, b)) next.insert(std::move(n));
    if (next.size() > cap_) throw ResourceLimitError("oracle frontier exceeds " + std::to_string(cap_) + " configurations");
    frontier_ = std::move(next);
}

bool OracleSim::accepted() const {
    return std::any_of(frontier_.begin(), frontier_.end(), [&](const CaConfiguration& c) { return isFinal(*ca_, c); });
}

bool oracleMatch(const CountingAutomaton& ca, std::string_view word) {
    OracleSim sim(ca);
    for (char c : word) {
        sim.step(static_cast<unsigned char>(c));
        if (sim.frontier().empty()) return false;
    }
    return sim.accepted();
}

namespace {

// rel[i][j]: word[i..j) is in the language
using Rel = std::vector<std::vector<char>>;

Rel compose(const Rel& a, const Rel& b) {
    const size_t n = a.size();
    Rel r(n, std::vector<char>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j)
            if (a[i][j])
                for (size_t k = j; k < n; ++k)
                    if (b[j][k]) r[i][k] = 1;
    return r;
}

void unite(Rel& a, const Rel& b) {
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j) a[i][j] |= b[i][j];
}

Rel identity(size_t n) {
    Rel r(n, std::vector<char>(n, 0));
    for (size_t i = 0; i < n; ++i) r[i][i] = 1;
    return r;
}

Rel lang(const RegexAst& ast, int id, std::string_view w) {
    const Node& node = ast.at(id);
    const size_t n = w.size() + 1;
    switch (node.kind) {
        case NodeKind::Epsilon: return identity(n);
        case NodeKind::Symbol: {
            Rel r(n, std::vector<char>(n, 0));
            for (size_t i = 0; i < w.size(); ++i)
                if (node.cls.test(static_cast<unsigned char>(w[i]))) r[i][i + 1] = 1;
            return r;
        }
        case NodeKind::Concat: {
            Rel r = identity(n);
            for (int k : node.kids) r = compose(r, lang(ast, k, w));
            return r;
        }
        case NodeKind::Union: {
            Rel r(n, std::vector<char>(n, 0));
            for (int k : node.kids) unite(r, lang(ast, k, w));
            return r;
        }
        case NodeKind::Star:
        case NodeKind::Counted: {
            const uint32_t lo = node.kind == NodeKind::Star ? 0 : node.min;
            const uint32_t hi = node.kind == NodeKind::Star ? kInf : node.max;
            Rel body = lang(ast, node.kids[0], w);
            Rel cur = identity(n), acc(n, std::vector<char>(n, 0));
            for (uint64_t k = 0;; ++k) {
                if (k >= lo) unite(acc, cur);
                if (k >= hi) break;
                Rel nxt = compose(cur, body);
                bool empty = std::all_of(nxt.begin(), nxt.end(), [](const auto& row) {
                    return std::none_of(row.begin(), row.end(), [](char c) { return c != 0; });
                });
                if (empty) break;
                if (nxt == cur) {
                    // fixpoint: every later power is the same relation
                    if (k < lo) unite(acc, cur);
                    break;
                }
                cur = std::move(nxt);
            }
            return acc;
        }
    }
    return {};
}

}  // namespace

bool astMatch(const RegexAst& ast, std::string_view word) { return lang(ast, ast.root, word)[0][word.size()] != 0; }

bool ExplicitDfa::run(std::string_view word) const {
    int s = 0;
    for (char c : word) s = next[static_cast<size_t>(s)][static_cast<size_t>(byteClassOf[static_cast<unsigned char>(c)])];
    return accepting[static_cast<size_t>(s)];
}

ExplicitDfa explicitDeterminize(const CountingAutomaton& ca, size_t stateCap) {
    ExplicitDfa dfa;
    dfa.byteClassOf = ca.byteClassOf;
    std::map<std::vector<CaConfiguration>, int> ids;
    auto intern = [&](std::vector<CaConfiguration> set) {
        auto it = ids.find(set);
        if (it != ids.end()) return it->second;
        if (dfa.sets.size() >= stateCap)
            throw ResourceLimitError("explicit DFA exceeds " + std::to_string(stateCap) + " states");
        int id = static_cast<int>(dfa.sets.size());
        bool acc = std::any_of(set.begin(), set.end(), [&](const CaConfiguration& c) { return isFinal(ca, c); });
        ids.emplace(set, id);
        dfa.sets.push_back(std::move(set));
        dfa.accepting.push_back(acc);
        dfa.next.emplace_back();
        return id;
    };
    intern({initialConfig(ca)});
    for (size_t s = 0; s < dfa.sets.size(); ++s) {
        for (size_t cls = 0; cls < ca.byteClasses.size(); ++cls) {
            unsigned char rep = 0;
            while (!ca.byteClasses[cls].test(rep)) ++rep;
            std::set<CaConfiguration> next;
            for (const CaConfiguration& c : dfa.sets[s])
                for (CaConfiguration& n : caStep(ca, c, rep)) next.insert(std::move(n));
            int t = intern(std::vector<CaConfiguration>(next.begin(), next.end()));
            dfa.next[s].push_back(t);
        }
    }
    return dfa;
}

bool inPower(const RegexAst& body, std::string_view word, int k) {
    Rel r = lang(body, body.root, word);
    const size_t n = word.size() + 1;
    std::vector<char> reach(n, 0);
    reach[0] = 1;
    for (int i = 0; i < k; ++i) {
        std::vector<char> nxt(n, 0);
        for (size_t a = 0; a < n; ++a)
            if (reach[a])
                for (size_t b = a; b < n; ++b)
                    if (r[a][b]) nxt[b] = 1;
        reach = std::move(nxt);
    }
    return reach[word.size()] != 0;
}

bool checkSyncWitness(const RegexAst& body, const SyncWitness& w) {
    return w.k >= 1 && w.v.size() <= w.u.size() && w.u.compare(0, w.v.size(), w.v) == 0 && inPower(body, w.u, w.k) &&
           inPower(body, w.v, w.k + 1);
}

namespace {

// Words of L(body) up to maxLen, one representative byte per class.
std::vector<std::string> boundedLanguage(const RegexAst& body, size_t maxLen, size_t cap) {
    RegexAst norm = normalize(body);
    CountingAutomaton ca = buildCa(norm);
    std::vector<unsigned char> reps;
    for (const ByteSet& cls : ca.byteClasses) {
        unsigned char rep = 0;
        while (!cls.test(rep)) ++rep;
        reps.push_back(rep);
    }
    std::vector<std::string> out;
    struct Item {
        std::string word;
        std::set<CaConfiguration> frontier;
    };
    std::deque<Item> work;
    work.push_back({"", {initialConfig(ca)}});
    while (!work.empty() && out.size() < cap) {
        Item it = std::move(work.front());
        work.pop_front();
        if (std::any_of(it.frontier.begin(), it.frontier.end(), [&](const CaConfiguration& c) { return isFinal(ca, c); }))
            out.push_back(it.word);
        if (it.word.size() >= maxLen) continue;
        for (unsigned char b : reps) {
            std::set<CaConfiguration> next;
            for (const CaConfiguration& c : it.frontier)
                for (CaConfiguration& n : caStep(ca, c, b)) next.insert(std::move(n));
            if (!next.empty()) work.push_back({it.word + static_cast<char>(b), std::move(next)});
        }
    }
    return out;
}

}  // namespace

std::optional<SyncWitness> synchronizingWitness(const RegexAst& body, int maxK, size_t maxLen) {
    const size_t cap = 200000;
    std::vector<std::string> base = boundedLanguage(body, maxLen, cap);
    // powers[k] = L^k restricted to length <= maxLen
    std::vector<std::set<std::string>> powers(1);
    powers[0] = {""};
    for (int k = 1; k <= maxK + 1; ++k) {
        std::set<std::string> nxt;
        for (const std::string& p : powers.back())
            for (const std::string& w : base)
                if (p.size() + w.size() <= maxLen) {
                    nxt.insert(p + w);
                    if (nxt.size() > cap) break;
                }
        powers.push_back(std::move(nxt));
    }
    for (bool proper : {true, false}) {
        for (int k = 1; k <= maxK; ++k) {
            const auto& lk = powers[static_cast<size_t>(k)];
            for (const std::string& v : powers[static_cast<size_t>(k) + 1]) {
                for (auto it = lk.lower_bound(v); it != lk.end() && it->compare(0, v.size(), v) == 0; ++it) {
                    if (proper && it->size() == v.size()) continue;
                    return SyncWitness{k, *it, v};
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace crex
