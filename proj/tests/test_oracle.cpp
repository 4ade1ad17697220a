#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "crex/oracle.hpp"
#include "support.hpp"

using namespace crex;

namespace {

std::string repeat(const std::string& s, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) out += s;
    return out;
}

// every word over `alpha` of length <= maxLen
template <class F>
void forAllWords(const std::string& alpha, size_t maxLen, F f) {
    std::string w;
    std::function<void()> rec = [&] {
        f(w);
        if (w.size() == maxLen) return;
        for (char c : alpha) {
            w.push_back(c);
            rec();
            w.pop_back();
        }
    };
    rec();
}

}  // namespace

TEST_CASE("configuration simulation") {
    CountingAutomaton ca = buildCa(compileRegex("((a|b)b){3,8}"));
    CHECK(oracleMatch(ca, "ababbb"));
    CHECK(oracleMatch(ca, repeat("bb", 8)));
    CHECK_FALSE(oracleMatch(ca, repeat("ab", 9)));
    CHECK_FALSE(oracleMatch(ca, "abab"));
    CHECK_FALSE(oracleMatch(ca, "ababa"));

    OracleSim sim(ca);
    CHECK(sim.frontier() == std::set<CaConfiguration>{{0, {0}}});
    sim.step('a');
    CHECK(sim.frontier() == std::set<CaConfiguration>{{1, {1}}});
    sim.step('b');
    CHECK(sim.frontier() == std::set<CaConfiguration>{{3, {1}}});
    sim.step('z');
    CHECK(sim.frontier().empty());
}

TEST_CASE("frontier cap") {
    CountingAutomaton ca = buildCa(compileRegex(".*a.{20}"));
    OracleSim sim(ca, 8);
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 30; ++i) sim.step('a');
        }(),
        ResourceLimitError);
}

TEST_CASE("membership from the language definition") {
    RegexAst r = compileRegex("((a|b)b){3,8}");
    CHECK(astMatch(r, "ababbb"));
    CHECK_FALSE(astMatch(r, "abab"));
    CHECK(astMatch(compileRegex("(a|aa){2,5}"), "aaaaaaaaaa"));
    CHECK_FALSE(astMatch(compileRegex("(a|aa){2,5}"), "aaaaaaaaaaa"));
    CHECK(astMatch(compileRegex("a*"), ""));
    CHECK_FALSE(astMatch(compileRegex("a+"), ""));
    CHECK(astMatch(compileRegex("((ab){2}c){3}"), "ababcababcababc"));
}

TEST_CASE("oracle and the language definition agree") {
    for (const std::string& p : crex::testing::randomFlatRegexes(99, 60)) {
        RegexAst r = compileRegex(p);
        CountingAutomaton ca = buildCa(r);
        size_t bad = 0;
        forAllWords("abc", 5, [&](const std::string& w) {
            if (oracleMatch(ca, w) != astMatch(r, w)) ++bad;
        });
        INFO(p);
        CHECK(bad == 0);
    }
}

TEST_CASE("explicit determinization") {
    CountingAutomaton small = buildCa(compileRegex("a{2,3}"));
    ExplicitDfa d = explicitDeterminize(small);
    CHECK(d.run("aa"));
    CHECK(d.run("aaa"));
    CHECK_FALSE(d.run("a"));
    CHECK_FALSE(d.run("aaaa"));

    CountingAutomaton pairs = buildCa(compileRegex("((a|b)b){3,8}"));
    ExplicitDfa f = explicitDeterminize(pairs);
    size_t bad = 0;
    forAllWords("abc", 10, [&](const std::string& w) {
        if (f.run(w) != oracleMatch(pairs, w)) ++bad;
    });
    CHECK(bad == 0);

    CountingAutomaton blowup = buildCa(compileRegex(".*a.{12}"));
    CHECK(explicitDeterminize(blowup).numStates() > 4096);
    CHECK_THROWS_AS(explicitDeterminize(blowup, 1000), ResourceLimitError);
}

TEST_CASE("synchronizing witnesses") {
    auto aa = synchronizingWitness(compileRegex("a|aa"), 4, 8);
    REQUIRE(aa);
    CHECK(aa->k == 2);
    CHECK(aa->u == "aaaa");
    CHECK(aa->v == "aaa");
    CHECK(checkSyncWitness(compileRegex("a|aa"), *aa));

    auto loop = synchronizingWitness(compileRegex("a(ab)*"), 4, 8);
    REQUIRE(loop);
    CHECK(loop->k == 1);
    CHECK(loop->u == "aab");
    CHECK(loop->v == "aa");

    for (const char* body : {"ab", "(a|b)b", "ab|ba", "ac*", "a", "."})
        CHECK_FALSE(synchronizingWitness(compileRegex(body), 4, 10));

    CHECK_FALSE(checkSyncWitness(compileRegex("ab"), {1, "ab", "ab"}));
    CHECK(inPower(compileRegex("a|aa"), "aaa", 2));
    CHECK_FALSE(inPower(compileRegex("a|aa"), "aaaaa", 2));
    CHECK(inPower(compileRegex("ab"), "", 0));
}
