#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "crex/classifier.hpp"
#include "crex/oracle.hpp"
#include "support.hpp"

using namespace crex;
using crex::testing::dataFile;
using crex::testing::readLines;

namespace {

ByteSet bytes(const std::string& s) {
    ByteSet b;
    for (unsigned char c : s) b.set(c);
    return b;
}

std::vector<ByteSet> family(const char* pattern) {
    RegexAst r = compileRegex(pattern);
    std::vector<ByteSet> sets = markerSets(r).sets;
    std::sort(sets.begin(), sets.end(), [](const ByteSet& a, const ByteSet& b) { return a.to_string() < b.to_string(); });
    return sets;
}

std::vector<ByteSet> sorted(std::vector<ByteSet> v) {
    std::sort(v.begin(), v.end(), [](const ByteSet& a, const ByteSet& b) { return a.to_string() < b.to_string(); });
    return v;
}

// Random member of L(node); star and open repetitions are cut at 3 extra
// iterations.
struct Sampler {
    const RegexAst& ast;
    std::mt19937_64& rng;

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    void gen(int node, std::string& out) {
        const Node& n = ast.at(node);
        switch (n.kind) {
            case NodeKind::Epsilon: break;
            case NodeKind::Symbol: {
                std::vector<int> members;
                for (int b = 0; b < 256; ++b)
                    if (n.cls.test(static_cast<size_t>(b))) members.push_back(b);
                out += static_cast<char>(members[static_cast<size_t>(pick(0, static_cast<int>(members.size()) - 1))]);
                break;
            }
            case NodeKind::Concat:
                for (int k : n.kids) gen(k, out);
                break;
            case NodeKind::Union: gen(n.kids[static_cast<size_t>(pick(0, static_cast<int>(n.kids.size()) - 1))], out); break;
            case NodeKind::Star:
                for (int i = pick(0, 3); i > 0; --i) gen(n.kids[0], out);
                break;
            case NodeKind::Counted: {
                const int hi = n.max == kInf ? static_cast<int>(n.min) + 3 : static_cast<int>(std::min(n.max, n.min + 3));
                for (int i = pick(static_cast<int>(n.min), hi); i > 0; --i) gen(n.kids[0], out);
                break;
            }
        }
    }
};

}  // namespace

TEST_CASE("marker sets") {
    CHECK(family("a") == std::vector<ByteSet>{bytes("a")});
    CHECK(family("ab|ba") == sorted({bytes("a"), bytes("b")}));
    CHECK(family("a*").empty());
    CHECK(family("a|aa").empty());
    CHECK(family("\\d+\\.") == std::vector<ByteSet>{bytes(".")});
    CHECK(family("ac*") == std::vector<ByteSet>{bytes("a")});
    CHECK(family("(a|b)b").empty());
    CHECK(family("a(ab)*").empty());
    CHECK(family(".").size() == 1);
    CHECK(family("ab") == sorted({bytes("a"), bytes("b")}));
    CHECK(family("a|b") == std::vector<ByteSet>{bytes("ab")});
}

TEST_CASE("marker family cap") {
    // 70 distinct letters, each a marker on its own
    std::string p;
    const char* hex = "0123456789abcdef";
    for (int i = 0; i < 70; ++i) p += std::string("\\x") + hex[(0xa0 + i) >> 4] + hex[(0xa0 + i) & 15];
    MarkerFamily f = markerSets(compileRegex(p));
    CHECK(f.capped);
    CHECK(f.sets.size() <= kMarkerFamilyCap);
    CHECK_FALSE(f.empty());
}

TEST_CASE("marker sets are sound on sampled words") {
    std::mt19937_64 rng(5);
    std::vector<std::string> bodies = {"ab|ba", "ac*", "\\d+\\.", "a[bc]", "xy|yx", "(a|c)b", "[^,]*,", "<td>[^<]*"};
    for (const std::string& p : crex::testing::randomFlatRegexes(3, 200)) bodies.push_back(p);
    size_t checkedFamilies = 0, bad = 0;
    for (const std::string& p : bodies) {
        RegexAst r = compileRegex(p);
        MarkerFamily f = markerSets(r);
        if (f.empty()) continue;
        ++checkedFamilies;
        Sampler s{r, rng};
        int sampled = 0;
        for (int attempt = 0; sampled < 1000 && attempt < 20000; ++attempt) {
            std::string w;
            s.gen(r.root, w);
            if (w.size() > 12) continue;
            ++sampled;
            for (const ByteSet& t : f.sets) {
                int hits = 0;
                for (unsigned char c : w) hits += t.test(c);
                if (hits != 1) {
                    ++bad;
                    UNSCOPED_INFO(p << " on " << crex::testing::show(w));
                }
            }
        }
        CHECK(sampled == 1000);
    }
    CHECK(checkedFamilies >= 8);
    CHECK(bad == 0);
}

TEST_CASE("letter-marked") {
    CHECK(isLetterMarked(compileRegex("(ab|ba){3,5}")));
    CHECK_FALSE(isLetterMarked(compileRegex("(a|aa){2,5}")));
    CHECK(isLetterMarked(compileRegex(".*a.{100}")));
    CHECK(isLetterMarked(compileRegex("(\\d+\\.){3}")));
    CHECK_FALSE(isLetterMarked(compileRegex("((a|b)b){3,8}")));
    CHECK(isLetterMarked(compileRegex("abc")));
}

TEST_CASE("synchronizing verdicts") {
    auto verdict = [](const char* p, bool shortcut = true) {
        SyncOptions o;
        o.letterMarkedShortcut = shortcut;
        return isSynchronizing(compileRegex(p), o);
    };
    CHECK(verdict("(a|aa){2,5}").verdict == SyncVerdict::No);
    CHECK(verdict("(a|aa){2,5}").reason == "replication");
    CHECK(verdict("(\\d+\\.){3}").verdict == SyncVerdict::Yes);
    CHECK(verdict("(\\d+\\.){3}").reason == "letter-marked");
    CHECK(verdict("(\\d+\\.){3}", false).reason == "determinized");
    CHECK(verdict("ICE_Dims.{92}((_?(X|\\d+)){13})").verdict == SyncVerdict::No);
    CHECK(verdict("((a|b)b){3,8}").verdict == SyncVerdict::Yes);
    CHECK(verdict("((a|b)b){3,8}").reason == "determinized");
    CHECK(verdict("(ac*){1,4}(ab|ba){3,5}").verdict == SyncVerdict::Yes);
    CHECK(verdict("abc").reason == "no-counting");
    // a(ab)* admits u = aab in L(S) with prefix aa in L(S)^2
    SyncResult r = verdict("(ac*){1,4}(ab|ba){3,5}(a(ab)*){2,8}");
    CHECK(r.verdict == SyncVerdict::No);
    CHECK(r.witness == "aabaaa");

    SyncOptions tiny;
    tiny.stateCap = 2;
    tiny.letterMarkedShortcut = false;
    CHECK(isSynchronizing(compileRegex("((a|b)b){3,8}"), tiny).verdict == SyncVerdict::Unknown);
    CHECK_THROWS_AS(isSynchronizing(compileRegex("((ab){2}c){3}")), NotFlatError);
}

TEST_CASE("letter-marked implies synchronizing") {
    SyncOptions full;
    full.letterMarkedShortcut = false;
    for (const std::string& p : readLines(dataFile("letter_marked.txt"))) {
        if (p.empty() || p[0] == '#') continue;
        RegexAst r = compileRegex(p);
        INFO(p);
        REQUIRE(isLetterMarked(r));
        CHECK(isSynchronizing(r, full).verdict == SyncVerdict::Yes);
    }
}

TEST_CASE("aborts come with a definition-level witness") {
    for (const char* p : {"(a|aa){2,5}", "(a+){2,3}", "(a|ab|b){2,4}", "(a(ab)*){2,4}", "(aa|aaa){2,4}"}) {
        RegexAst r = compileRegex(p);
        INFO(p);
        REQUIRE(isSynchronizing(r).verdict == SyncVerdict::No);
        const Node& counted = r.rootNode();
        REQUIRE(counted.kind == NodeKind::Counted);
        RegexAst body = subtree(r, counted.kids[0]);
        auto w = synchronizingWitness(body, 4, 10);
        REQUIRE(w);
        CHECK(w->k <= 4);
        CHECK(checkSyncWitness(body, *w));
    }
}

TEST_CASE("sum of upper bounds") {
    CHECK(sumOfUpperBounds(compileRegex("a{3,8}b{2}")) == 10);
    CHECK(sumOfUpperBounds(compileRegex("a{30,}")) == 30);
    CHECK(sumOfUpperBounds(compileRegex("a*b+")) == 0);
}

TEST_CASE("corpus report") {
    auto j = classifyCorpus({"(ab){50,100}", "a*"}, 20);
    CHECK(j["schema"] == "crex.classify/1");
    const auto& agg = j["aggregate"];
    CHECK(agg["total"] == 2);
    CHECK(agg["parsed"] == 2);
    CHECK(agg["counting"] == 1);
    CHECK(agg["aboveThreshold"]["count"] == 1);
    CHECK(agg["aboveThreshold"]["letterMarked"] == 1);
    CHECK(agg["aboveThreshold"]["synchronizing"]["yes"] == 1);
    CHECK(j["patterns"][0]["letterMarked"] == true);
    CHECK(j["patterns"][1]["usesCounting"] == false);

    auto empty = classifyCorpus({}, 20);
    CHECK(empty["aggregate"]["total"] == 0);
    CHECK(empty["aggregate"]["parsed"] == 0);
    CHECK(empty["aggregate"]["aboveThreshold"]["count"] == 0);
    CHECK(empty["aggregate"]["aboveThreshold"]["percentLetterMarked"] == 0.0);
    CHECK(empty["patterns"].empty());

    auto skipped = classifyCorpus({"# comment", "", "a{2"}, 20);
    CHECK(skipped["aggregate"]["total"] == 1);

    auto bad = classifyCorpus({"(a"}, 20);
    CHECK(bad["aggregate"]["unparseable"] == 1);
    CHECK(bad["patterns"][0]["error"]["code"] == "SYNTAX");
}

TEST_CASE("bundled non-synchronizing list") {
    std::vector<std::string> lines = readLines(dataFile("non_synchronizing.txt"));
    REQUIRE(lines.size() == 24);
    auto j = classifyCorpus(lines, 20);
    CHECK(j["aggregate"]["parsed"] == 16);
    CHECK(j["aggregate"]["flatCounting"]["letterMarked"] == 0);
    std::vector<int> determinized;
    for (const auto& e : j["patterns"]) {
        if (!e["parsed"].get<bool>()) continue;
        CHECK(e["letterMarked"] == false);
        if (e["synchronizing"] == "yes") determinized.push_back(e["line"].get<int>());
    }
    // nullable counted bodies (12, 14) and (\S+\s+){4} (23) determinize
    CHECK(determinized == std::vector<int>{12, 14, 23});
}
