// Acceptance run: one PASS/FAIL line per criterion. Exits non-zero only if
// the run itself breaks; failed criteria are reported, not fatal.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "crex/classifier.hpp"
#include "crex/matcher.hpp"
#include "crex/oracle.hpp"
#include "support.hpp"

using namespace crex;
namespace ct = crex::testing;

namespace {

int failed = 0;

void report(int n, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", n, name, detail.c_str());
    std::fflush(stdout);
    failed += !ok;
}

double secondsSince(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> nonComment(const std::vector<std::string>& lines) {
    std::vector<std::string> out;
    for (const std::string& l : lines)
        if (!l.empty() && l[0] != '#') out.push_back(l);
    return out;
}

bool replicates(const std::string& p) {
    CountingAutomaton ca = buildCa(compileRegex(p));
    try {
        determinizeAugmented(ca);
        return false;
    } catch (const ReplicationError&) {
        return true;
    }
}

// Counted bodies of a flat regex with a (k <= 4, |u| <= 10) witness.
bool hasSmallWitness(const std::string& p) {
    RegexAst r = compileRegex(p);
    for (size_t i = 0; i < r.nodes.size(); ++i) {
        const Node& n = r.nodes[i];
        if (!hasCounter(n)) continue;
        RegexAst body = subtree(r, n.kids[0]);
        auto w = synchronizingWitness(body, 4, 10);
        if (w && w->k <= 4 && checkSyncWitness(body, *w)) return true;
    }
    return false;
}

// Random flat regexes that determinize, and the ones that abort.
struct RandomSplit {
    std::vector<std::string> synchronizing;
    std::vector<std::string> aborting;
};

RandomSplit randomSplit(size_t want) {
    RandomSplit s;
    for (uint64_t seed = 1; s.synchronizing.size() < want; ++seed)
        for (const std::string& p : ct::randomFlatRegexes(seed, 100)) {
            if (s.synchronizing.size() >= want) break;
            (replicates(p) ? s.aborting : s.synchronizing).push_back(p);
        }
    return s;
}

void criterion1(const RandomSplit& rnd) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> fixtures = ct::namedFixtures();
    const size_t named = fixtures.size();
    fixtures.insert(fixtures.end(), rnd.synchronizing.begin(), rnd.synchronizing.end());
    uint64_t nodes = 0, mismatches = 0, errors = 0;
    std::string first;
    for (const std::string& p : fixtures) {
        try {
            ct::CrossCheck r = ct::crossCheck(p, 10);
            nodes += r.nodes;
            mismatches += r.mismatches;
            if (r.mismatches && first.empty()) first = p + " on " + ct::show(r.firstMismatch) + " " + r.detail;
        } catch (const std::exception& e) {
            ++errors;
            if (first.empty()) first = p + ": " + e.what();
        }
    }
    const bool has = [&] {
        for (const char* must : {"((a|b)b){3,8}", ".*.(ab){3}", "(\\d+\\.){3}", "(ac*){1,4}(ab|ba){3,5}"})
            if (std::find(fixtures.begin(), fixtures.end(), must) == fixtures.end()) return false;
        return true;
    }();
    std::ostringstream d;
    d << named << " named + " << rnd.synchronizing.size() << " random flat regexes, words up to length 10, " << nodes
      << " joint states, " << mismatches << " mismatches, " << errors << " errors, " << secondsSince(t0) << " s";
    if (!first.empty()) d << "; first: " << first;
    report(1, "oracle equivalence", has && named >= 40 && rnd.synchronizing.size() >= 300 && !mismatches && !errors,
           d.str());
}

void criterion2(const RandomSplit& rnd) {
    std::vector<std::string> marked = nonComment(ct::readLines(ct::dataFile("letter_marked.txt")));
    for (const std::string& p : ct::namedFixtures())
        if (isLetterMarked(compileRegex(p))) marked.push_back(p);
    size_t markedFail = 0;
    for (const std::string& p : marked) markedFail += replicates(p);

    size_t namedAbort = 0;
    for (const char* p : {"(a|aa){2,5}", "ICE_Dims.{92}((_?(X|\\d+)){13})"}) namedAbort += replicates(p);

    size_t gParsed = 0, gAbort = 0;
    std::string gKept;
    std::vector<std::string> g = ct::readLines(ct::dataFile("non_synchronizing.txt"));
    for (size_t i = 0; i < g.size(); ++i) {
        try {
            compileRegex(g[i]);
        } catch (const RegexError&) {
            continue;
        }
        ++gParsed;
        if (replicates(g[i]))
            ++gAbort;
        else
            gKept += (gKept.empty() ? "" : ",") + std::to_string(i + 1);
    }

    std::vector<std::string> small = rnd.aborting;
    small.push_back("(a|aa){2,5}");
    size_t witnessed = 0;
    for (const std::string& p : small) witnessed += hasSmallWitness(p);

    std::ostringstream d;
    d << marked.size() - markedFail << "/" << marked.size() << " letter-marked determinize; " << namedAbort
      << "/2 named aborts; non-synchronizing list " << gAbort << "/" << gParsed << " parseable entries abort";
    if (!gKept.empty()) d << " (lines " << gKept << " determinize)";
    d << "; " << witnessed << "/" << small.size() << " small-bound aborts have a k<=4 witness";
    report(2, "determinization criterion", !markedFail && namedAbort == 2 && gAbort == gParsed &&
                                              witnessed == small.size(),
           d.str());
}

void criterion3() {
    CountingAutomaton ca = buildCa(compileRegex(".*.(ab){3}"));
    auto aug = determinizeAugmented(ca);
    const bool rejects = !matchWord(*aug, "aaaa").accepted, accepts = matchWord(*aug, "xababab").accepted;
    const bool oracle = !oracleMatch(ca, "aaaa") && oracleMatch(ca, "xababab");
    report(3, "counterexample regression", rejects && accepts && oracle,
           std::string("\"aaaa\" ") + (rejects ? "rejected" : "accepted") + ", \"xababab\" " +
               (accepts ? "accepted" : "rejected") + ", oracle " + (oracle ? "agrees" : "disagrees"));
}

void criterion4() {
    std::mt19937_64 rng(20240611);
    std::string text(1 << 20, 'a');
    for (char& c : text) c = "ab"[rng() & 1];

    // an 'a' whose previous 'a' is k or more bytes back finds the list empty
    // and needs no merge
    auto drained = [&](size_t k) {
        uint64_t n = 0;
        size_t prev = SIZE_MAX;
        for (size_t i = 0; i < text.size(); ++i)
            if (text[i] == 'a') {
                n += prev == SIZE_MAX || i - prev >= k;
                prev = i;
            }
        return n;
    };

    std::vector<uint64_t> touches, adjusted;
    std::vector<double> medians;
    std::ostringstream d;
    for (int k : {10, 100, 1000}) {
        Program p(".*a.{" + std::to_string(k) + "}", {});
        std::vector<double> times;
        uint64_t t = 0;
        for (int run = 0; run < 5; ++run) {
            auto t0 = std::chrono::steady_clock::now();
            p.match(text);
            times.push_back(secondsSince(t0));
            t = p.stats().lists.touches();
        }
        std::sort(times.begin(), times.end());
        touches.push_back(t);
        adjusted.push_back(t + drained(static_cast<size_t>(k)));
        medians.push_back(times[2]);
        d << "k=" << k << ": " << t << " touches, " << times[2] * 1000 << " ms; ";
    }
    const double ratio = medians[2] / medians[0];
    d << "time ratio k=1000/k=10 " << ratio << "; touches + empty-list merges "
      << (adjusted[0] == adjusted[1] && adjusted[1] == adjusted[2] ? "equal" : "differ") << " across k";
    report(4, "counter-bound independence", touches[0] == touches[1] && touches[1] == touches[2] && ratio <= 1.5,
           d.str());
}

void criterion5() {
    LedgerAudit a = ledgerAudit();
    std::ostringstream d;
    d << a.runs << " runs in this process, " << a.violations << " violations, moves " << a.moves << " <= budget "
      << a.budget << " (each unit test binary enforces the same audit)";
    report(5, "amortization ledger", a.runs > 0 && a.violations == 0, d.str());
}

void criterion6(const RandomSplit& rnd) {
    std::vector<std::string> fixtures = ct::namedFixtures();
    fixtures.insert(fixtures.end(), rnd.synchronizing.begin(), rnd.synchronizing.end());
    fixtures.insert(fixtures.end(), rnd.aborting.begin(), rnd.aborting.end());
    for (const std::string& p : nonComment(ct::readLines(ct::dataFile("letter_marked.txt")))) fixtures.push_back(p);
    size_t stateBad = 0, flat = 0, transBad = 0, innerBad = 0;
    std::string example;
    for (const std::string& p : fixtures) {
        RegexAst r = compileRegex(p);
        CountingAutomaton ca = buildCa(r);
        const auto m = static_cast<size_t>(r.positions);
        stateBad += static_cast<size_t>(ca.numStates) != m + 1;
        if (!stats(r).isFlat) continue;
        ++flat;
        size_t inner = 0;
        for (const CaTransition& t : ca.trans) inner += t.src != 0;
        if (ca.trans.size() > m * m) {
            ++transBad;
            if (example.empty())
                example = p + " has " + std::to_string(ca.trans.size()) + " transitions for " + std::to_string(m) +
                          " positions";
        }
        innerBad += inner > m * m;
    }
    const size_t dfa = explicitDeterminize(buildCa(compileRegex(".*a.{12}"))).numStates();
    std::ostringstream d;
    d << stateBad << "/" << fixtures.size() << " with states != #R+1; " << transBad << "/" << flat
      << " flat fixtures exceed #R^2 transitions (" << innerBad
      << " even without the initial state's edges)";
    if (!example.empty()) d << ", e.g. " << example;
    d << "; explicit DFA of .*a.{12} has " << dfa << " states";
    report(6, "structural bounds", !stateBad && !transBad && dfa > 4096, d.str());
}

void criterion7() {
    std::vector<std::string> g = ct::readLines(ct::dataFile("non_synchronizing.txt"));
    std::vector<std::string> marked = nonComment(ct::readLines(ct::dataFile("letter_marked.txt")));
    auto gj = classifyCorpus(g, 20);
    size_t gParsed = 0, gMarked = 0;
    for (const auto& e : gj["patterns"])
        if (e["parsed"].get<bool>()) {
            ++gParsed;
            gMarked += e["letterMarked"].get<bool>();
        }
    auto mj = classifyCorpus(marked, 20);
    size_t sync = 0, lm = 0;
    for (const auto& e : mj["patterns"]) {
        sync += e["synchronizing"] == "yes";
        lm += e["letterMarked"] == true;
    }
    std::ostringstream d;
    d << "non-synchronizing list: " << gMarked << "/" << gParsed << " parseable entries letter-marked; bundled corpus: " << lm << "/"
      << marked.size() << " letter-marked, " << sync << "/" << marked.size() << " synchronizing";
    report(7, "classifier on the bundled corpus",
           gMarked == 0 && marked.size() >= 100 && lm == marked.size() && sync == marked.size(), d.str());
}

}  // namespace

int main() {
    try {
        RandomSplit rnd = randomSplit(300);
        criterion1(rnd);
        criterion2(rnd);
        criterion3();
        criterion4();
        criterion6(rnd);
        criterion7();
        criterion5();
    } catch (const std::exception& e) {
        std::printf("acceptance run aborted: %s\n", e.what());
        return 2;
    }
    std::printf("%d of 7 criteria failed\n", failed);
    return 0;
}
