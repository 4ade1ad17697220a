#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crex/classifier.hpp"
#include "crex/export.hpp"
#include "crex/matcher.hpp"

using nlohmann::json;

namespace {

constexpr int kExitMatch = 0;
constexpr int kExitNoMatch = 1;
constexpr int kExitError = 2;

struct IoError : crex::Error {
    using Error::Error;
    const char* code() const noexcept override { return "IO"; }
};

json errorJson(const crex::Error& e) {
    json j = {{"code", e.code()}, {"message", e.what()}};
    if (auto* r = dynamic_cast<const crex::ReplicationError*>(&e)) {
        j["witness"] = r->witness;
        j["state"] = r->stateDesc;
        j["term"] = r->termDesc;
    }
    return j;
}

int reportError(const crex::Error& e) {
    std::cerr << json{{"error", errorJson(e)}}.dump() << "\n";
    return kExitError;
}

// Calls fn on successive chunks of a file, or of stdin for "-" / empty.
template <class Fn>
void forEachChunk(const std::string& path, Fn fn) {
    std::FILE* f = stdin;
    if (!path.empty() && path != "-") {
        f = std::fopen(path.c_str(), "rb");
        if (!f) throw IoError("cannot open " + path);
    }
    std::vector<char> buf(1 << 16);
    size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0) fn(std::string_view(buf.data(), n));
    bool bad = std::ferror(f);
    if (f != stdin) std::fclose(f);
    if (bad) throw IoError("read error on " + (path.empty() ? std::string("stdin") : path));
}

std::string readAll(const std::string& path) {
    std::string s;
    forEachChunk(path, [&](std::string_view c) { s.append(c); });
    return s;
}

std::vector<std::string> splitLines(const std::string& s) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start < s.size()) {
        size_t nl = s.find('\n', start);
        if (nl == std::string::npos) nl = s.size();
        out.push_back(s.substr(start, nl - start));
        start = nl + 1;
    }
    return out;
}

const std::map<std::string, crex::Engine> kEngines = {
    {"augmented", crex::Engine::Augmented}, {"basic", crex::Engine::Basic}, {"oracle", crex::Engine::Oracle}};

json statsJson(const crex::Program& p) {
    crex::MatchStats s = p.stats();
    return {{"bytes", s.bytes},
            {"guardEvals", s.guardEvals},
            {"increments", s.lists.increments},
            {"inserts", s.lists.inserts},
            {"elementMoves", s.lists.moves},
            {"drops", s.lists.drops},
            {"scans", s.lists.scans},
            {"touches", s.lists.touches()},
            {"statesBuilt", p.statesBuilt()}};
}

struct CommonFlags {
    std::string engine = "augmented";
    bool unanchored = false;
    bool dotAll = false;
    size_t stateCap = crex::defaultStateCap();

    void attach(CLI::App* app, bool withEngine) {
        if (withEngine)
            app->add_option("--engine", engine, "augmented | basic | oracle")
                ->check(CLI::IsMember({"augmented", "basic", "oracle"}));
        app->add_flag("--unanchored", unanchored, "match anywhere in the input");
        app->add_flag("--dot-all", dotAll, "'.' also matches newline");
        app->add_option("--state-cap", stateCap, "construction cap (default from CREX_STATE_CAP)");
    }
    crex::ProgramOptions options(bool eager) const {
        crex::ProgramOptions o;
        o.engine = kEngines.at(engine);
        o.unanchored = unanchored;
        o.dotAll = dotAll;
        o.eager = eager;
        o.stateCap = stateCap;
        return o;
    }
};

// ---- match

struct MatchArgs {
    std::string pattern, input;
    bool stats = false, lazy = false;
    CommonFlags common;
};

int runMatch(const MatchArgs& a) {
    crex::Program prog(a.pattern, a.common.options(!a.lazy));
    forEachChunk(a.input, [&](std::string_view c) { prog.feed(c); });
    bool ok = prog.accepted();
    if (a.stats) {
        json j = {{"schema", "crex.match/1"}, {"matched", ok}, {"engine", a.common.engine}, {"stats", statsJson(prog)}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (ok ? "match" : "no match") << "\n";
    }
    return ok ? kExitMatch : kExitNoMatch;
}

// ---- classify

struct ClassifyArgs {
    std::string pattern, corpus;
    uint64_t threshold = 20;
    size_t stateCap = 20000;
    bool compact = false;
};

int runClassify(const ClassifyArgs& a) {
    std::vector<std::string> lines;
    if (!a.corpus.empty())
        lines = splitLines(readAll(a.corpus));
    else
        lines.push_back(a.pattern);
    crex::SyncOptions opts;
    opts.stateCap = a.stateCap;
    json report = crex::classifyCorpus(lines, a.threshold, opts);
    std::cout << (a.compact ? report.dump() : report.dump(2)) << "\n";
    return 0;
}

// ---- export

struct ExportArgs {
    std::string pattern, stage = "ca", format = "dot";
    CommonFlags common;
};

int runExport(const ExportArgs& a) {
    crex::RegexAst ast = crex::parse(a.pattern, crex::ParseOptions{a.common.dotAll});
    if (a.common.unanchored) ast = crex::unanchored(ast);
    ast = crex::normalize(ast);
    if (a.stage != "ca" && !crex::stats(ast).isFlat) throw crex::NotFlatError("nested counting");
    crex::CountingAutomaton ca = crex::buildCa(ast);
    const bool dot = a.format == "dot";
    if (a.stage == "ca") {
        std::cout << (dot ? crex::exportCaDot(ca) : crex::exportCaJson(ca).dump(2) + "\n");
    } else if (a.stage == "csa-basic") {
        crex::BasicCsa csa(ca, a.common.stateCap);
        std::cout << (dot ? crex::exportBasicDot(csa) : crex::exportBasicJson(csa).dump(2) + "\n");
    } else {
        crex::AugmentedCsa csa(ca, a.common.stateCap);
        std::cout << (dot ? crex::exportAugmentedDot(csa) : crex::exportAugmentedJson(csa).dump(2) + "\n");
    }
    return 0;
}

// ---- bench

struct BenchArgs {
    std::vector<std::string> patterns;
    std::string patternFile, textFile, alphabet = "ab";
    size_t randomBytes = 1 << 20;
    uint64_t seed = 1;
    int runs = 5;
    bool asJson = false;
    CommonFlags common;
};

std::string randomText(size_t n, const std::string& alphabet, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
    std::string s(n, '\0');
    for (char& c : s) c = alphabet[pick(rng)];
    return s;
}

json benchOne(const std::string& pattern, const std::string& text, const BenchArgs& a) {
    json row = {{"pattern", pattern}, {"engine", a.common.engine}};
    try {
        crex::Program prog(pattern, a.common.options(false));
        std::vector<double> secs;
        for (int r = 0; r < a.runs; ++r) {
            auto t0 = std::chrono::steady_clock::now();
            prog.reset();
            prog.feed(text);
            auto t1 = std::chrono::steady_clock::now();
            secs.push_back(std::chrono::duration<double>(t1 - t0).count());
        }
        std::sort(secs.begin(), secs.end());
        double med = secs[secs.size() / 2];
        row["status"] = "ok";
        row["matched"] = prog.accepted();
        row["medianSeconds"] = med;
        row["bytesPerSecond"] = med > 0 ? static_cast<double>(text.size()) / med : 0.0;
        row["stats"] = statsJson(prog);
    } catch (const crex::Error& e) {
        row["status"] = "error";
        row["error"] = errorJson(e);
    }
    return row;
}

int runBench(BenchArgs a) {
    if (!a.patternFile.empty())
        for (auto& l : splitLines(readAll(a.patternFile)))
            if (!l.empty() && l[0] != '#') a.patterns.push_back(l);
    if (a.runs < 1) a.runs = 1;
    if (a.alphabet.empty()) throw IoError("empty alphabet");
    std::string text = a.textFile.empty() ? randomText(a.randomBytes, a.alphabet, a.seed) : readAll(a.textFile);

    json rows = json::array();
    for (const std::string& p : a.patterns) rows.push_back(benchOne(p, text, a));
    if (a.asJson) {
        std::cout << json{{"schema", "crex.bench/1"}, {"textBytes", text.size()}, {"runs", a.runs}, {"rows", rows}}.dump(2)
                  << "\n";
        return 0;
    }
    std::printf("%-32s %-9s %-6s %10s %10s %12s %12s %12s %8s\n", "pattern", "engine", "status", "median_ms", "MB/s",
                "increments", "moves", "touches", "states");
    for (const json& r : rows) {
        std::string pat = r["pattern"];
        if (pat.size() > 32) pat = pat.substr(0, 29) + "...";
        if (r["status"] == "ok") {
            const json& s = r["stats"];
            std::printf("%-32s %-9s %-6s %10.2f %10.2f %12llu %12llu %12llu %8zu\n", pat.c_str(),
                        r["engine"].get<std::string>().c_str(), "ok", r["medianSeconds"].get<double>() * 1e3,
                        r["bytesPerSecond"].get<double>() / 1e6,
                        static_cast<unsigned long long>(s["increments"].get<uint64_t>()),
                        static_cast<unsigned long long>(s["elementMoves"].get<uint64_t>()),
                        static_cast<unsigned long long>(s["touches"].get<uint64_t>()), s["statesBuilt"].get<size_t>());
        } else {
            std::printf("%-32s %-9s %-6s %s\n", pat.c_str(), r["engine"].get<std::string>().c_str(),
                        r["error"]["code"].get<std::string>().c_str(), r["error"]["message"].get<std::string>().c_str());
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crex: regex matching with counting-set automata"};
    app.require_subcommand(1);

    MatchArgs ma;
    auto* match = app.add_subcommand("match", "full-match a pattern against input (exit 0 match, 1 no match, 2 error)");
    match->add_option("pattern", ma.pattern, "regex")->required();
    match->add_option("input", ma.input, "input file (default stdin)");
    match->add_flag("--stats", ma.stats, "print JSON instrumentation");
    match->add_flag("--lazy", ma.lazy, "build automaton states on demand");
    ma.common.attach(match, true);

    ClassifyArgs ca;
    auto* classify = app.add_subcommand("classify", "classify a pattern or a corpus file (one pattern per line)");
    auto* patOpt = classify->add_option("pattern", ca.pattern, "single regex (default: corpus on stdin)");
    auto* corpusOpt = classify->add_option("--corpus", ca.corpus, "corpus file, '-' for stdin");
    patOpt->excludes(corpusOpt);
    classify->add_option("--threshold", ca.threshold, "sum-of-bounds threshold")->capture_default_str();
    classify->add_option("--state-cap", ca.stateCap, "construction cap per pattern")->capture_default_str();
    classify->add_flag("--compact", ca.compact, "single-line JSON");

    ExportArgs ea;
    auto* exp = app.add_subcommand("export", "print an automaton as DOT or JSON");
    exp->add_option("pattern", ea.pattern, "regex")->required();
    exp->add_option("--stage", ea.stage, "automaton to print")
        ->capture_default_str()
        ->check(CLI::IsMember({"ca", "csa-basic", "csa-augmented"}));
    exp->add_option("--format", ea.format, "output format")->capture_default_str()->check(CLI::IsMember({"dot", "json"}));
    ea.common.attach(exp, false);

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "time patterns over a text");
    bench->add_option("-p,--pattern", ba.patterns, "pattern (repeatable)");
    bench->add_option("--patterns", ba.patternFile, "file with one pattern per line");
    bench->add_option("--text", ba.textFile, "text file (default: random text)");
    bench->add_option("--random", ba.randomBytes, "random text size in bytes")->capture_default_str();
    bench->add_option("--alphabet", ba.alphabet, "random text alphabet")->capture_default_str();
    bench->add_option("--seed", ba.seed, "random text seed")->capture_default_str();
    bench->add_option("--runs", ba.runs, "timed runs per pattern (median reported)")->capture_default_str();
    bench->add_flag("--json", ba.asJson, "JSON instead of a table");
    ba.common.attach(bench, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitError;
    }

    try {
        if (*match) return runMatch(ma);
        if (*classify) {
            if (ca.pattern.empty() && ca.corpus.empty()) ca.corpus = "-";
            return runClassify(ca);
        }
        if (*exp) return runExport(ea);
        if (*bench) return runBench(ba);
    } catch (const crex::Error& e) {
        return reportError(e);
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"code", "INTERNAL"}, {"message", e.what()}}}}.dump() << "\n";
        return kExitError;
    }
    return kExitError;
}
