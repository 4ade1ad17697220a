#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "crex/common.hpp"

namespace crex {

enum class NodeKind : uint8_t { Epsilon, Symbol, Concat, Union, Counted, Star };

struct Span {
    uint32_t begin = 0;
    uint32_t end = 0;
};

struct Node {
    NodeKind kind = NodeKind::Epsilon;
    std::vector<int> kids;
    ByteSet cls;        // Symbol
    uint32_t min = 0;   // Counted
    uint32_t max = 0;   // Counted, kInf for unbounded
    int pos = 0;        // Symbol: position id, 1-based, left to right
    Span span;
};

// Arena-backed parse tree. Concat/Union are n-ary and never directly nest in
// themselves. Positions of a subtree form a contiguous id range.
struct RegexAst {
    std::vector<Node> nodes;
    int root = -1;
    int positions = 0;
    bool anchoredStart = false;  // pattern began with '^'
    bool anchoredEnd = false;    // pattern ended with '$'

    const Node& at(int i) const { return nodes[static_cast<size_t>(i)]; }
    const Node& rootNode() const { return at(root); }
};

struct ParseOptions {
    bool dotAll = false;  // '.' also matches '\n'
};

RegexAst parse(std::string_view pattern, ParseOptions opts = {});

RegexAst normalize(const RegexAst& ast);

// parse + normalize
RegexAst compileRegex(std::string_view pattern, ParseOptions opts = {});

struct RegexStats {
    uint32_t sharp = 0;
    uint32_t bound = 0;
    uint32_t counterCount = 0;
    bool isFlat = true;
    bool usesCounting = false;
};

RegexStats stats(const RegexAst& ast);

bool nullable(const RegexAst& ast, int node);
inline bool nullable(const RegexAst& ast) { return nullable(ast, ast.root); }

// A counted node gets a counter unless its bounds are {0,inf}, {1,inf} or
// have max <= 1 (the loop is never taken).
inline bool hasCounter(const Node& n) {
    return n.kind == NodeKind::Counted && n.max > 1 && !(n.max == kInf && n.min <= 1);
}

// Pattern text that reparses to a structurally identical tree.
std::string toPattern(const RegexAst& ast);
std::string toPattern(const RegexAst& ast, int node);

// Compares kinds, classes, bounds and positions; ignores spans.
bool structurallyEqual(const RegexAst& a, const RegexAst& b);

// Debug form such as counted(concat(union(a,b),b),3,8).
std::string dumpTree(const RegexAst& ast);

// First/last position range of a subtree (inclusive); lo > hi when empty.
struct PosRange {
    int lo = 1;
    int hi = 0;
    bool contains(int p) const { return lo <= p && p <= hi; }
};
std::vector<PosRange> positionRanges(const RegexAst& ast);

// Node id of the symbol carrying each position (index 0 unused).
std::vector<int> positionNodes(const RegexAst& ast);

// Wraps the tree as [\x00-\xff]*(R)[\x00-\xff]*, leaving out the side(s)
// the pattern anchored; positions are renumbered.
RegexAst unanchored(const RegexAst& ast);

// Subtree rooted at `node` as its own AST, positions renumbered from 1.
RegexAst subtree(const RegexAst& ast, int node);

}  // namespace crex
