#include <algorithm>
#include <functional>

#include "crex/regex.hpp"

namespace crex {

bool nullable(const RegexAst& ast, int node) {
    const Node& n = ast.at(node);
    switch (n.kind) {
        case NodeKind::Epsilon: return true;
        case NodeKind::Symbol: return false;
        case NodeKind::Star: return true;
        case NodeKind::Counted: return n.min == 0 || nullable(ast, n.kids[0]);
        case NodeKind::Concat:
            return std::all_of(n.kids.begin(), n.kids.end(), [&](int k) { return nullable(ast, k); });
        case NodeKind::Union:
            return std::any_of(n.kids.begin(), n.kids.end(), [&](int k) { return nullable(ast, k); });
    }
    return false;
}

namespace {

// Rebuilds a tree bottom-up into a fresh arena, applying `fix` to each node
// after its children are copied.
class Rebuilder {
public:
    explicit Rebuilder(const RegexAst& src) : src_(src) {}

    RegexAst normalized() {
        out_.root = copy(src_.root);
        out_.positions = src_.positions;
        out_.anchoredStart = src_.anchoredStart;
        out_.anchoredEnd = src_.anchoredEnd;
        return std::move(out_);
    }

private:
    const RegexAst& src_;
    RegexAst out_;

    int add(Node n) {
        out_.nodes.push_back(std::move(n));
        return static_cast<int>(out_.nodes.size()) - 1;
    }

    bool hasPositions(int node) const {
        const Node& n = out_.at(node);
        if (n.kind == NodeKind::Symbol) return true;
        return std::any_of(n.kids.begin(), n.kids.end(), [&](int k) { return hasPositions(k); });
    }

    int copy(int id) {
        const Node& s = src_.at(id);
        Node n;
        n.kind = s.kind;
        n.cls = s.cls;
        n.min = s.min;
        n.max = s.max;
        n.pos = s.pos;
        n.span = s.span;
        for (int k : s.kids) {
            int c = copy(k);
            const Node& cn = out_.at(c);
            if ((s.kind == NodeKind::Concat || s.kind == NodeKind::Union) && cn.kind == s.kind)
                n.kids.insert(n.kids.end(), cn.kids.begin(), cn.kids.end());
            else
                n.kids.push_back(c);
        }
        if (n.kind == NodeKind::Star) {
            n.kind = NodeKind::Counted;
            n.min = 0;
            n.max = kInf;
        }
        if (n.kind == NodeKind::Counted) {
            if (!hasPositions(n.kids[0])) {
                Node e;
                e.kind = NodeKind::Epsilon;
                e.span = n.span;
                return add(std::move(e));
            }
            if (nullable(out_, n.kids[0])) n.min = 0;
        }
        return add(std::move(n));
    }
};

}  // namespace

RegexAst normalize(const RegexAst& ast) { return Rebuilder(ast).normalized(); }

RegexStats stats(const RegexAst& ast) {
    RegexStats st;
    std::function<void(int, int)> walk = [&](int id, int counterDepth) {
        const Node& n = ast.at(id);
        if (n.kind == NodeKind::Symbol) ++st.sharp;
        if (n.kind == NodeKind::Counted) {
            st.bound = std::max(st.bound, n.min);
            if (n.max != kInf) st.bound = std::max(st.bound, n.max);
        }
        int d = counterDepth;
        if (hasCounter(n)) {
            ++st.counterCount;
            if (counterDepth > 0) st.isFlat = false;
            ++d;
        }
        for (int k : n.kids) walk(k, d);
    };
    walk(ast.root, 0);
    st.usesCounting = st.counterCount > 0;
    return st;
}

namespace {

std::string quant(const Node& n) {
    if (n.kind == NodeKind::Star) return "*";
    if (n.min == 1 && n.max == kInf) return "+";
    if (n.min == 0 && n.max == 1) return "?";
    if (n.max == kInf) return "{" + std::to_string(n.min) + ",}";
    if (n.min == n.max) return "{" + std::to_string(n.min) + "}";
    return "{" + std::to_string(n.min) + "," + std::to_string(n.max) + "}";
}

void print(const RegexAst& ast, int id, std::string& out) {
    const Node& n = ast.at(id);
    switch (n.kind) {
        case NodeKind::Epsilon: break;
        case NodeKind::Symbol: out += classToString(n.cls); break;
        case NodeKind::Union:
            for (size_t i = 0; i < n.kids.size(); ++i) {
                if (i) out += "|";
                print(ast, n.kids[i], out);
            }
            break;
        case NodeKind::Concat:
            for (int k : n.kids) {
                bool paren = ast.at(k).kind == NodeKind::Union || ast.at(k).kind == NodeKind::Epsilon;
                if (paren) out += "(";
                print(ast, k, out);
                if (paren) out += ")";
            }
            break;
        case NodeKind::Counted:
        case NodeKind::Star: {
            int k = n.kids[0];
            bool paren = ast.at(k).kind != NodeKind::Symbol;
            if (paren) out += "(";
            print(ast, k, out);
            if (paren) out += ")";
            out += quant(n);
            break;
        }
    }
}

}  // namespace

std::string toPattern(const RegexAst& ast, int node) {
    std::string out;
    print(ast, node, out);
    return out;
}

std::string toPattern(const RegexAst& ast) { return toPattern(ast, ast.root); }

namespace {

bool eqRec(const RegexAst& a, int x, const RegexAst& b, int y) {
    const Node& n = a.at(x);
    const Node& m = b.at(y);
    if (n.kind != m.kind || n.kids.size() != m.kids.size()) return false;
    if (n.kind == NodeKind::Symbol && (n.cls != m.cls || n.pos != m.pos)) return false;
    if ((n.kind == NodeKind::Counted) && (n.min != m.min || n.max != m.max)) return false;
    for (size_t i = 0; i < n.kids.size(); ++i)
        if (!eqRec(a, n.kids[i], b, m.kids[i])) return false;
    return true;
}

void dumpRec(const RegexAst& ast, int id, std::string& out) {
    const Node& n = ast.at(id);
    auto kids = [&](const char* name) {
        out += name;
        out += "(";
        for (size_t i = 0; i < n.kids.size(); ++i) {
            if (i) out += ",";
            dumpRec(ast, n.kids[i], out);
        }
    };
    switch (n.kind) {
        case NodeKind::Epsilon: out += "eps"; return;
        case NodeKind::Symbol: out += classToString(n.cls); return;
        case NodeKind::Concat: kids("concat"); out += ")"; return;
        case NodeKind::Union: kids("union"); out += ")"; return;
        case NodeKind::Star: kids("star"); out += ")"; return;
        case NodeKind::Counted:
            kids("counted");
            out += "," + std::to_string(n.min) + "," + (n.max == kInf ? std::string("inf") : std::to_string(n.max)) + ")";
            return;
    }
}

}  // namespace

bool structurallyEqual(const RegexAst& a, const RegexAst& b) {
    return a.positions == b.positions && eqRec(a, a.root, b, b.root);
}

std::string dumpTree(const RegexAst& ast) {
    std::string out;
    dumpRec(ast, ast.root, out);
    return out;
}

std::vector<PosRange> positionRanges(const RegexAst& ast) {
    std::vector<PosRange> r(ast.nodes.size());
    std::function<void(int)> walk = [&](int id) {
        const Node& n = ast.at(id);
        PosRange pr;
        if (n.kind == NodeKind::Symbol) {
            pr = {n.pos, n.pos};
        } else {
            for (int k : n.kids) {
                walk(k);
                const PosRange& c = r[static_cast<size_t>(k)];
                if (c.lo > c.hi) continue;
                if (pr.lo > pr.hi) pr = c;
                else {
                    pr.lo = std::min(pr.lo, c.lo);
                    pr.hi = std::max(pr.hi, c.hi);
                }
            }
        }
        r[static_cast<size_t>(id)] = pr;
    };
    walk(ast.root);
    return r;
}

std::vector<int> positionNodes(const RegexAst& ast) {
    std::vector<int> out(static_cast<size_t>(ast.positions) + 1, -1);
    for (size_t i = 0; i < ast.nodes.size(); ++i)
        if (ast.nodes[i].kind == NodeKind::Symbol) out[static_cast<size_t>(ast.nodes[i].pos)] = static_cast<int>(i);
    return out;
}

RegexAst unanchored(const RegexAst& ast) {
    RegexAst out;
    int next = 1;
    auto anyStar = [&]() {
        Node sym;
        sym.kind = NodeKind::Symbol;
        sym.cls.set();
        sym.pos = next++;
        out.nodes.push_back(sym);
        Node st;
        st.kind = NodeKind::Star;
        st.kids = {static_cast<int>(out.nodes.size()) - 1};
        out.nodes.push_back(st);
        return static_cast<int>(out.nodes.size()) - 1;
    };
    std::function<int(int)> copy = [&](int id) {
        Node n = ast.at(id);
        n.kids.clear();
        if (n.kind == NodeKind::Symbol) n.pos = next++;
        for (int k : ast.at(id).kids) n.kids.push_back(copy(k));
        out.nodes.push_back(std::move(n));
        return static_cast<int>(out.nodes.size()) - 1;
    };
    Node cat;
    cat.kind = NodeKind::Concat;
    if (!ast.anchoredStart) cat.kids.push_back(anyStar());
    int body = copy(ast.root);
    if (ast.at(ast.root).kind == NodeKind::Concat) {
        const auto& inner = out.nodes[static_cast<size_t>(body)].kids;
        cat.kids.insert(cat.kids.end(), inner.begin(), inner.end());
    } else {
        cat.kids.push_back(body);
    }
    if (!ast.anchoredEnd) cat.kids.push_back(anyStar());
    out.nodes.push_back(std::move(cat));
    out.root = static_cast<int>(out.nodes.size()) - 1;
    out.positions = next - 1;
    return out;
}

RegexAst subtree(const RegexAst& ast, int node) {
    RegexAst out;
    int next = 1;
    std::function<int(int)> copy = [&](int id) {
        const Node& s = ast.at(id);
        Node n = s;
        n.kids.clear();
        for (int k : s.kids) n.kids.push_back(copy(k));
        if (n.kind == NodeKind::Symbol) n.pos = next++;
        out.nodes.push_back(std::move(n));
        return static_cast<int>(out.nodes.size()) - 1;
    };
    out.root = copy(node);
    out.positions = next - 1;
    return out;
}

}  // namespace crex
