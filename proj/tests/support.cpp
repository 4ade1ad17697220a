#include "support.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "crex/matcher.hpp"

namespace crex::testing {

const std::vector<std::string>& namedFixtures() {
    static const std::vector<std::string> f = {
        "((a|b)b){3,8}",
        ".*.(ab){3}",
        "(\\d+\\.){3}",
        "(ac*){1,4}",
        "(ab|ba){3,5}",
        "(ac*){1,4}(ab|ba){3,5}",
        ".*a.{3}",
        ".*a{5}",
        "(ab){5}",
        ".*(aa){5}",
        ".*(ab){5}",
        "a*(ba|ab){5}",
        "a{2,4}",
        "(a?b){2}",
        "(ab){2,}",
        "a{3}b{2}",
        ".*a.{5}b",
        "[ab]{2,5}c",
        "(abc){1,3}|c{2}",
        "x{0,3}y",
        "(a|b){2}c{1,3}",
        "(ca*){2,3}",
        "([^a]*a){3}",
        "(a[bc]){2,4}d?",
        ".*(ab){2,3}.*",
        "(ba*){3}",
        "\\d{3}-\\d{4}",
        "[a-c]{4}",
        "(a|bc){2,3}",
        "(ab?c){2}",
        "(a+b){2,4}",
        ".*b.{2}a",
        "(aa|b){1,4}",
        "(ab|ac){3}",
        "[^b]{2,3}b",
        "c(ab){0,3}c",
        "(a|b)*a(a|b){4}",
        "a{1,5}b{1,5}",
        "(b*a){2,4}",
        "(abc|bca){2}",
        ".{2,4}",
        "((ab)*c){2,3}",
        "a{5}",
        "(a|b|c){3,5}",
        "(x_?y){2,4}",
        "(de?f){1,3}g",
        "(a.){3}",
        "(\\.[0-9]){3}",
        "(ab){1,2}(ba){1,2}",
        "a.{2}b.{2}c",
        "(ab){0,1}",
        "(a|b){3,}c",
    };
    return f;
}

namespace {

struct Gen {
    std::mt19937_64 rng;
    bool counted = false;

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    std::string leaf() {
        static const char* leaves[] = {"a", "b", "c", "a", "b", "c", "[ab]", "[bc]", "."};
        return leaves[pick(9)];
    }

    std::string group(const std::string& s) {
        bool bare = s.size() == 1 || (s.front() == '[' && s.back() == ']' && s.find(']') == s.size() - 1);
        return bare ? s : "(" + s + ")";
    }

    std::string node(int depth, bool inCount) {
        if (depth >= 3) return leaf();
        int r = pick(100);
        if (r < 30) return leaf();
        if (r < 55) {
            std::string s;
            int k = 2 + pick(2);
            for (int i = 0; i < k; ++i) {
                std::string part = node(depth + 1, inCount);
                s += part.find('|') != std::string::npos && part.front() != '(' ? "(" + part + ")" : part;
            }
            return s;
        }
        if (r < 68) return node(depth + 1, inCount) + "|" + node(depth + 1, inCount);
        if (r < 74) return group(node(depth + 1, inCount)) + "*";
        if (r < 79) return group(node(depth + 1, inCount)) + "?";
        if (r < 84) return group(node(depth + 1, inCount)) + "+";
        if (inCount) return leaf();
        counted = true;
        std::string body = group(node(depth + 1, true));
        int m = pick(6);
        int form = pick(4);
        if (form == 0) return body + "{" + std::to_string(std::max(m, 1)) + "}";
        if (form == 1) return body + "{" + std::to_string(m) + ",}";
        int n = std::max(m, 1) + pick(6 - std::max(m, 1));
        return body + "{" + std::to_string(m) + "," + std::to_string(n) + "}";
    }
};

}  // namespace

std::vector<std::string> randomFlatRegexes(uint64_t seed, size_t n) {
    Gen g{std::mt19937_64(seed)};
    std::vector<std::string> out;
    while (out.size() < n) {
        g.counted = false;
        std::string s = g.node(0, false);
        if (g.counted) out.push_back(s);
    }
    return out;
}

CountingAutomaton handBuiltCa() {
    CountingAutomaton ca;
    ca.numStates = 5;
    ca.stateNames = {"q0", "p", "q", "r", "s"};
    ByteSet a, c;
    a.set('a');
    c.set('c');
    ca.stateClass = {ByteSet{}, c, c, a, a};
    CounterInfo x;
    x.min = 2;
    x.max = 5;
    x.states = {1, 2, 3, 4};
    x.entry = {1, 2, 3};
    x.exit = {1, 2, 3, 4};
    ca.counters = {x};
    auto add = [&](int src, int dst, CaGuard g, Assign u) {
        ca.trans.push_back({src, ca.stateClass[static_cast<size_t>(dst)], std::move(g), {u}, dst});
    };
    add(0, 1, {}, Assign::One);
    add(0, 2, {}, Assign::One);
    add(2, 4, {}, Assign::Keep);
    add(1, 3, {{0, CmpOp::Lt, 5}}, Assign::Inc);
    add(1, 4, {{0, CmpOp::Ge, 2}}, Assign::One);
    ca.finals.assign(5, std::nullopt);
    ca.finals[3] = CaGuard{};
    ca.finals[4] = CaGuard{};
    ca.buildIndex();
    ca.buildByteClasses();
    return ca;
}

std::string probeAlphabet(const CountingAutomaton& ca) {
    std::string s;
    for (const ByteSet& cls : ca.byteClasses) s.push_back(static_cast<char>(representativeByte(cls)));
    return s;
}

namespace {

struct Walker {
    RegexAst ast;
    CountingAutomaton ca;
    std::unique_ptr<AugmentedCsa> aug;
    std::unique_ptr<BasicCsa> basic;
    std::unique_ptr<AugmentedMatcher> am;
    std::unique_ptr<BasicSim> bm;
    std::unique_ptr<OracleSim> om;
    std::string alphabet, word;
    std::unordered_map<std::string, size_t> memo;
    CrossCheck res;

    std::string key() const {
        std::string k;
        auto put = [&](int64_t v) { k.append(reinterpret_cast<const char*>(&v), sizeof v); };
        for (const CaConfiguration& c : om->frontier()) {
            put(c.state);
            for (uint32_t v : c.mem) put(v);
        }
        put(-1);
        put(bm->state());
        for (const auto& [r, vals] : bm->memory()) {
            put(r);
            for (uint32_t v : vals) put(v);
            put(-2);
        }
        put(-1);
        AugmentedMatcher::Snapshot s = am->snapshot();
        put(s.state);
        for (const auto& sl : s.slots) {
            for (int64_t v : sl) put(v);
            put(-2);
        }
        return k;
    }

    void visit(size_t remaining) {
        ++res.nodes;
        const bool o = om->accepted();
        const bool a = am->accepted();
        const bool b = bm->accepted();
        const bool t = astMatch(ast, word);
        if (o != a || o != b || o != t) {
            if (!res.mismatches) {
                res.firstMismatch = word;
                res.detail = std::string("oracle=") + (o ? "1" : "0") + " augmented=" + (a ? "1" : "0") +
                             " basic=" + (b ? "1" : "0") + " ast=" + (t ? "1" : "0");
            }
            ++res.mismatches;
        }
        if (!am->stats().lists.ledgerHolds()) ++res.ledgerViolations;
        if (remaining == 0 || res.mismatches > 3) return;
        std::string k = key();
        auto it = memo.find(k);
        if (it != memo.end() && it->second >= remaining) {
            ++res.memoHits;
            return;
        }
        memo[k] = remaining;

        AugmentedMatcher::Snapshot as = am->snapshot();
        BasicSim bs = *bm;
        OracleSim os = *om;
        for (char c : alphabet) {
            const auto byte = static_cast<unsigned char>(c);
            am->step(byte);
            bm->step(byte);
            om->step(byte);
            word.push_back(c);
            visit(remaining - 1);
            word.pop_back();
            am->restore(as);
            *bm = bs;
            *om = os;
        }
    }
};

}  // namespace

CrossCheck crossCheck(const std::string& pattern, size_t maxLen) {
    Walker w;
    w.ast = compileRegex(pattern);
    w.ca = buildCa(w.ast);
    w.aug = std::make_unique<AugmentedCsa>(w.ca);
    w.basic = std::make_unique<BasicCsa>(w.ca);
    w.am = std::make_unique<AugmentedMatcher>(*w.aug);
    w.bm = std::make_unique<BasicSim>(*w.basic);
    w.om = std::make_unique<OracleSim>(w.ca);
    w.alphabet = probeAlphabet(w.ca);
    w.visit(maxLen);
    return w.res;
}

std::string dataFile(const std::string& name) { return std::string(CREX_TEST_DATA) + "/" + name; }
std::string goldenFile(const std::string& name) { return std::string(CREX_TEST_GOLDEN) + "/" + name; }

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> readLines(const std::string& path) {
    std::vector<std::string> out;
    std::istringstream in(readFile(path));
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string show(const std::string& w) {
    std::string s = "\"";
    for (unsigned char c : w) s += byteLiteral(c);
    return s + "\"";
}

}  // namespace crex::testing
