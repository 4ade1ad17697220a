#include "crex/classifier.hpp"

#include <algorithm>
#include <functional>

#include "crex/augmented.hpp"

namespace crex {

namespace {

ByteSet alphabetOf(const RegexAst& ast, int id) {
    const Node& n = ast.at(id);
    if (n.kind == NodeKind::Symbol) return n.cls;
    ByteSet s;
    for (int k : n.kids) s |= alphabetOf(ast, k);
    return s;
}

void addSet(MarkerFamily& f, const ByteSet& s, size_t cap) {
    if (std::find(f.sets.begin(), f.sets.end(), s) != f.sets.end()) return;
    if (f.sets.size() >= cap) {
        f.capped = true;
        return;
    }
    f.sets.push_back(s);
}

MarkerFamily unionRule(const MarkerFamily& a, const ByteSet& sa, const MarkerFamily& b, const ByteSet& sb, size_t cap) {
    MarkerFamily out;
    out.capped = a.capped || b.capped;
    for (const ByteSet& t1 : a.sets)
        for (const ByteSet& t2 : b.sets)
            if ((t1 & (sb & ~t2)).none() && (t2 & (sa & ~t1)).none()) addSet(out, t1 | t2, cap);
    return out;
}

MarkerFamily concatRule(const MarkerFamily& a, const ByteSet& sa, const MarkerFamily& b, const ByteSet& sb, size_t cap) {
    MarkerFamily out;
    out.capped = a.capped || b.capped;
    for (const ByteSet& t : a.sets)
        if ((t & sb).none()) addSet(out, t, cap);
    for (const ByteSet& t : b.sets)
        if ((t & sa).none()) addSet(out, t, cap);
    return out;
}

}  // namespace

MarkerFamily markerSets(const RegexAst& ast, int node, size_t cap) {
    const Node& n = ast.at(node);
    switch (n.kind) {
        case NodeKind::Epsilon: return {};
        case NodeKind::Symbol: return {{n.cls}, false};
        case NodeKind::Union:
        case NodeKind::Concat: {
            MarkerFamily acc = markerSets(ast, n.kids[0], cap);
            ByteSet sigma = alphabetOf(ast, n.kids[0]);
            for (size_t i = 1; i < n.kids.size(); ++i) {
                MarkerFamily next = markerSets(ast, n.kids[i], cap);
                ByteSet s = alphabetOf(ast, n.kids[i]);
                acc = n.kind == NodeKind::Union ? unionRule(acc, sigma, next, s, cap) : concatRule(acc, sigma, next, s, cap);
                sigma |= s;
            }
            return acc;
        }
        case NodeKind::Counted:
            if (n.min == 1 && n.max == 1) return markerSets(ast, n.kids[0], cap);
            return {};
        case NodeKind::Star: return {};
    }
    return {};
}

bool isLetterMarked(const RegexAst& ast) {
    for (const Node& n : ast.nodes)
        if (hasCounter(n) && markerSets(ast, n.kids[0]).empty()) return false;
    return true;
}

const char* verdictName(SyncVerdict v) {
    switch (v) {
        case SyncVerdict::Yes: return "yes";
        case SyncVerdict::No: return "no";
        case SyncVerdict::Unknown: return "unknown";
    }
    return "?";
}

SyncResult isSynchronizing(const RegexAst& ast, const SyncOptions& opts) {
    RegexStats st = stats(ast);
    if (!st.isFlat) throw NotFlatError("nested counting");
    if (!st.usesCounting) return {SyncVerdict::Yes, "no-counting", "", ""};
    if (opts.letterMarkedShortcut && isLetterMarked(ast)) return {SyncVerdict::Yes, "letter-marked", "", ""};
    CountingAutomaton ca = buildCa(ast);
    try {
        auto csa = determinizeAugmented(ca, opts.stateCap);
        return {SyncVerdict::Yes, "determinized", "", std::to_string(csa->numStates()) + " states"};
    } catch (const ReplicationError& e) {
        return {SyncVerdict::No, "replication", e.witness, e.what()};
    } catch (const ResourceLimitError& e) {
        return {SyncVerdict::Unknown, "resource-limit", "", e.what()};
    }
}

uint64_t sumOfUpperBounds(const RegexAst& ast) {
    uint64_t sum = 0;
    for (const Node& n : ast.nodes)
        if (hasCounter(n)) sum += n.max == kInf ? n.min : n.max;
    return sum;
}

Classification classify(const std::string& pattern, uint64_t threshold, const SyncOptions& opts) {
    Classification c;
    c.pattern = pattern;
    RegexAst ast;
    try {
        ast = compileRegex(pattern);
    } catch (const Error& e) {
        c.errorCode = e.code();
        c.errorMessage = e.what();
        return c;
    }
    c.parsed = true;
    RegexStats st = stats(ast);
    c.usesCounting = st.usesCounting;
    c.isFlat = st.isFlat;
    c.sumOfUpperBounds = sumOfUpperBounds(ast);
    c.aboveThreshold = c.sumOfUpperBounds > threshold;
    c.letterMarked = true;
    for (const Node& n : ast.nodes) {
        if (!hasCounter(n)) continue;
        MarkerFamily f = markerSets(ast, n.kids[0]);
        c.familyCapped = c.familyCapped || f.capped;
        c.counters.push_back({toPattern(ast, n.kids[0]), n.min, n.max, !f.empty()});
        if (f.empty()) c.letterMarked = false;
    }
    if (c.usesCounting && c.isFlat) c.sync = isSynchronizing(ast, opts);
    return c;
}

nlohmann::json toJson(const Classification& c) {
    nlohmann::json j;
    j["pattern"] = c.pattern;
    j["parsed"] = c.parsed;
    if (!c.parsed) {
        j["error"] = {{"code", c.errorCode}, {"message", c.errorMessage}};
        return j;
    }
    j["usesCounting"] = c.usesCounting;
    j["isFlat"] = c.isFlat;
    j["sumOfUpperBounds"] = c.sumOfUpperBounds;
    j["aboveThreshold"] = c.aboveThreshold;
    j["letterMarked"] = c.letterMarked;
    j["familyCapped"] = c.familyCapped;
    nlohmann::json counters = nlohmann::json::array();
    for (const auto& d : c.counters) {
        counters.push_back({{"body", d.body},
                            {"min", d.min},
                            {"max", d.max == kInf ? nlohmann::json(nullptr) : nlohmann::json(d.max)},
                            {"letterMarked", d.letterMarked}});
    }
    j["counters"] = counters;
    if (c.sync) {
        j["synchronizing"] = verdictName(c.sync->verdict);
        j["syncReason"] = c.sync->reason;
        if (!c.sync->witness.empty()) j["witness"] = c.sync->witness;
    } else {
        j["synchronizing"] = nullptr;
    }
    return j;
}

nlohmann::json classifyCorpus(const std::vector<std::string>& lines, uint64_t threshold, const SyncOptions& opts) {
    struct Tally {
        uint64_t n = 0, letterMarked = 0, yes = 0, no = 0, unknown = 0;
        nlohmann::json toJson() const {
            auto pct = [&](uint64_t k) { return n ? 100.0 * static_cast<double>(k) / static_cast<double>(n) : 0.0; };
            return {{"count", n},
                    {"letterMarked", letterMarked},
                    {"synchronizing", {{"yes", yes}, {"no", no}, {"unknown", unknown}}},
                    {"percentLetterMarked", pct(letterMarked)},
                    {"percentSynchronizing", pct(yes)}};
        }
        void add(const Classification& c) {
            ++n;
            if (c.letterMarked) ++letterMarked;
            if (!c.sync) return;
            switch (c.sync->verdict) {
                case SyncVerdict::Yes: ++yes; break;
                case SyncVerdict::No: ++no; break;
                case SyncVerdict::Unknown: ++unknown; break;
            }
        }
    };
    uint64_t total = 0, parsed = 0, unparseable = 0, counting = 0, flat = 0;
    Tally flatCounting, above;
    nlohmann::json entries = nlohmann::json::array();
    for (size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        ++total;
        Classification c = classify(line, threshold, opts);
        nlohmann::json e = toJson(c);
        e["line"] = i + 1;
        entries.push_back(std::move(e));
        if (!c.parsed) {
            ++unparseable;
            continue;
        }
        ++parsed;
        if (!c.usesCounting) continue;
        ++counting;
        if (!c.isFlat) continue;
        ++flat;
        flatCounting.add(c);
        if (c.aboveThreshold) above.add(c);
    }
    nlohmann::json agg = {{"total", total},       {"parsed", parsed}, {"unparseable", unparseable},
                          {"counting", counting}, {"flat", flat},     {"threshold", threshold},
                          {"flatCounting", flatCounting.toJson()},    {"aboveThreshold", above.toJson()}};
    return {{"schema", "crex.classify/1"}, {"aggregate", agg}, {"patterns", entries}};
}

}  // namespace crex
