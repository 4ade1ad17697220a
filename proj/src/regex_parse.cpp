#include <cctype>

#include "crex/regex.hpp"

namespace crex {

namespace {

constexpr uint32_t kMaxBound = 1000000;

ByteSet range(int lo, int hi) {
    ByteSet s;
    for (int c = lo; c <= hi; ++c) s.set(static_cast<size_t>(c));
    return s;
}

ByteSet digitSet() { return range('0', '9'); }
ByteSet wordSet() {
    ByteSet s = range('0', '9') | range('a', 'z') | range('A', 'Z');
    s.set('_');
    return s;
}
ByteSet spaceSet() {
    ByteSet s;
    for (char c : std::string(" \t\n\r\f\v")) s.set(static_cast<unsigned char>(c));
    return s;
}

int hexVal(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

class Parser {
public:
    Parser(std::string_view p, ParseOptions o) : src_(p), opts_(o) {}

    RegexAst run() {
        size_t end = src_.size();
        // Leading '^' and trailing '$' are no-ops under whole-input matching.
        if (!src_.empty() && src_[0] == '^') {
            i_ = 1;
            ast_.anchoredStart = true;
        }
        if (end > i_ && src_[end - 1] == '$' && !escapedAt(end - 1)) {
            end_ = end - 1;
            ast_.anchoredEnd = true;
        } else {
            end_ = end;
        }
        int root = parseAlt(0);
        if (i_ < end_) {
            if (src_[i_] == ')') throw SyntaxError("unmatched ')'", i_);
            throw SyntaxError("unexpected character", i_);
        }
        ast_.root = root;
        ast_.positions = nextPos_ - 1;
        return std::move(ast_);
    }

private:
    std::string_view src_;
    ParseOptions opts_;
    size_t i_ = 0;
    size_t end_ = 0;
    int nextPos_ = 1;
    RegexAst ast_;

    bool escapedAt(size_t k) const {
        size_t n = 0;
        while (k > n && src_[k - 1 - n] == '\\') ++n;
        return n % 2 == 1;
    }

    bool eof() const { return i_ >= end_; }
    char peek() const { return src_[i_]; }

    int add(Node n) {
        ast_.nodes.push_back(std::move(n));
        return static_cast<int>(ast_.nodes.size()) - 1;
    }

    int makeEpsilon(size_t at) {
        Node n;
        n.kind = NodeKind::Epsilon;
        n.span = {static_cast<uint32_t>(at), static_cast<uint32_t>(at)};
        return add(std::move(n));
    }

    int makeSymbol(const ByteSet& s, size_t b, size_t e) {
        if (s.none()) throw SyntaxError("empty character class", b);
        Node n;
        n.kind = NodeKind::Symbol;
        n.cls = s;
        n.pos = nextPos_++;
        n.span = {static_cast<uint32_t>(b), static_cast<uint32_t>(e)};
        return add(std::move(n));
    }

    int makeNary(NodeKind k, std::vector<int> parts, size_t b) {
        if (parts.size() == 1) return parts[0];
        Node n;
        n.kind = k;
        for (int p : parts) {
            const Node& c = ast_.at(p);
            if (c.kind == k) n.kids.insert(n.kids.end(), c.kids.begin(), c.kids.end());
            else n.kids.push_back(p);
        }
        n.span = {static_cast<uint32_t>(b), static_cast<uint32_t>(i_)};
        return add(std::move(n));
    }

    int parseAlt(int depth) {
        size_t b = i_;
        std::vector<int> alts;
        alts.push_back(parseConcat(depth));
        while (!eof() && peek() == '|') {
            ++i_;
            alts.push_back(parseConcat(depth));
        }
        return makeNary(NodeKind::Union, std::move(alts), b);
    }

    int parseConcat(int depth) {
        size_t b = i_;
        std::vector<int> items;
        while (!eof() && peek() != '|' && peek() != ')') items.push_back(parseRepeat(depth));
        if (items.empty()) return makeEpsilon(b);
        return makeNary(NodeKind::Concat, std::move(items), b);
    }

    bool readNumber(size_t& k, uint32_t& out) const {
        size_t s = k;
        uint64_t v = 0;
        while (k < end_ && std::isdigit(static_cast<unsigned char>(src_[k]))) {
            v = v * 10 + static_cast<uint64_t>(src_[k] - '0');
            if (v > kMaxBound) v = kMaxBound + 1;
            ++k;
        }
        out = static_cast<uint32_t>(v);
        return k > s;
    }

    // Tries to read {m}, {m,}, {m,n} at i_. Returns false (i_ untouched) if
    // the brace does not start a quantifier; it is then a literal.
    bool readBraces(uint32_t& mn, uint32_t& mx) {
        size_t k = i_ + 1;
        uint32_t a = 0, b = 0;
        if (!readNumber(k, a)) return false;
        if (k < end_ && src_[k] == '}') {
            b = a;
        } else if (k < end_ && src_[k] == ',') {
            ++k;
            if (k < end_ && src_[k] == '}') {
                b = kInf;
            } else {
                if (!readNumber(k, b)) return false;
                if (k >= end_ || src_[k] != '}') return false;
            }
        } else {
            return false;
        }
        if (a > kMaxBound || (b != kInf && b > kMaxBound)) throw SyntaxError("repetition bound too large", i_);
        if (b != kInf && a > b) throw SyntaxError("repetition minimum exceeds maximum", i_);
        if (b == 0) throw SyntaxError("repetition maximum must be positive", i_);
        i_ = k + 1;
        mn = a;
        mx = b;
        return true;
    }

    int parseRepeat(int depth) {
        size_t b = i_;
        int atom = parseAtom(depth);
        while (!eof()) {
            char c = peek();
            Node n;
            if (c == '*') {
                n.kind = NodeKind::Star;
                ++i_;
            } else if (c == '+') {
                n.kind = NodeKind::Counted;
                n.min = 1;
                n.max = kInf;
                ++i_;
            } else if (c == '?') {
                n.kind = NodeKind::Counted;
                n.min = 0;
                n.max = 1;
                ++i_;
            } else if (c == '{') {
                uint32_t mn = 0, mx = 0;
                if (!readBraces(mn, mx)) break;
                n.kind = NodeKind::Counted;
                n.min = mn;
                n.max = mx;
            } else {
                break;
            }
            if (!eof() && (peek() == '?' || peek() == '+'))
                throw UnsupportedError(peek() == '?' ? "lazy quantifier" : "possessive quantifier", i_);
            n.kids.push_back(atom);
            n.span = {static_cast<uint32_t>(b), static_cast<uint32_t>(i_)};
            atom = add(std::move(n));
        }
        return atom;
    }

    int parseAtom(int depth) {
        size_t b = i_;
        char c = peek();
        switch (c) {
            case '(': {
                ++i_;
                if (!eof() && peek() == '?') {
                    if (i_ + 1 < end_ && src_[i_ + 1] == ':') {
                        i_ += 2;
                    } else if (i_ + 1 < end_ && (src_[i_ + 1] == '=' || src_[i_ + 1] == '!' || src_[i_ + 1] == '<')) {
                        throw UnsupportedError("look-around", b);
                    } else {
                        throw UnsupportedError("group modifier", b);
                    }
                }
                if (depth > 500) throw SyntaxError("nesting too deep", b);
                int inner = parseAlt(depth + 1);
                if (eof() || peek() != ')') throw SyntaxError("missing ')'", b);
                ++i_;
                return inner;
            }
            case ')':
                throw SyntaxError("unmatched ')'", i_);
            case '*':
            case '+':
            case '?':
                throw SyntaxError("quantifier without operand", i_);
            case '{': {
                uint32_t mn, mx;
                size_t save = i_;
                if (readBraces(mn, mx)) {
                    i_ = save;
                    throw SyntaxError("quantifier without operand", i_);
                }
                ++i_;
                ByteSet s;
                s.set('{');
                return makeSymbol(s, b, i_);
            }
            case '[':
                return parseClass();
            case '.': {
                ++i_;
                ByteSet s = ~ByteSet{};
                if (!opts_.dotAll) s.reset('\n');
                return makeSymbol(s, b, i_);
            }
            case '^':
            case '$':
                throw UnsupportedError("anchor inside pattern", i_);
            case '\\': {
                ByteSet s = parseEscape();
                return makeSymbol(s, b, i_);
            }
            default: {
                ++i_;
                ByteSet s;
                s.set(static_cast<unsigned char>(c));
                return makeSymbol(s, b, i_);
            }
        }
    }

    // Consumes an escape starting at the backslash.
    ByteSet parseEscape() {
        size_t b = i_;
        ++i_;
        if (eof()) throw SyntaxError("trailing backslash", b);
        char c = peek();
        ++i_;
        ByteSet s;
        auto single = [&](unsigned char v) {
            s.set(v);
            return s;
        };
        switch (c) {
            case 'n': return single('\n');
            case 't': return single('\t');
            case 'r': return single('\r');
            case 'f': return single('\f');
            case 'v': return single('\v');
            case '0': return single('\0');
            case 'd': return digitSet();
            case 'D': return ~digitSet();
            case 'w': return wordSet();
            case 'W': return ~wordSet();
            case 's': return spaceSet();
            case 'S': return ~spaceSet();
            case 'x': {
                if (i_ + 2 > end_) throw SyntaxError("bad hex escape", b);
                int h = hexVal(src_[i_]), l = hexVal(src_[i_ + 1]);
                if (h < 0 || l < 0) throw SyntaxError("bad hex escape", b);
                i_ += 2;
                return single(static_cast<unsigned char>(h * 16 + l));
            }
            case 'b':
            case 'B':
            case 'A':
            case 'z':
            case 'Z':
            case 'G':
                throw UnsupportedError("assertion escape", b);
            case 'k':
                throw UnsupportedError("back-reference", b);
            case 'p':
            case 'P':
                throw UnsupportedError("unicode property", b);
            default:
                break;
        }
        if (c >= '1' && c <= '9') throw UnsupportedError("back-reference", b);
        if (std::isalnum(static_cast<unsigned char>(c))) throw SyntaxError("unknown escape", b);
        return single(static_cast<unsigned char>(c));
    }

    int parseClass() {
        size_t b = i_;
        ++i_;
        bool neg = false;
        if (!eof() && peek() == '^') {
            neg = true;
            ++i_;
        }
        ByteSet s;
        bool first = true;
        while (true) {
            if (eof()) throw SyntaxError("unterminated character class", b);
            char c = peek();
            if (c == ']' && !first) {
                ++i_;
                break;
            }
            first = false;
            // one item: escape or literal, maybe a range
            size_t itemPos = i_;
            ByteSet item;
            int lo = -1;
            if (c == '\\') {
                item = parseEscape();
                if (item.count() == 1) lo = firstByte(item);
            } else {
                ++i_;
                lo = static_cast<unsigned char>(c);
                item.set(static_cast<size_t>(lo));
            }
            if (lo >= 0 && !eof() && peek() == '-' && i_ + 1 < end_ && src_[i_ + 1] != ']') {
                ++i_;
                int hi;
                if (peek() == '\\') {
                    ByteSet h = parseEscape();
                    if (h.count() != 1) throw SyntaxError("bad class range", itemPos);
                    hi = firstByte(h);
                } else {
                    hi = static_cast<unsigned char>(peek());
                    ++i_;
                }
                if (hi < lo) throw SyntaxError("bad class range", itemPos);
                item = range(lo, hi);
            }
            s |= item;
        }
        if (neg) s = ~s;
        return makeSymbol(s, b, i_);
    }

    static int firstByte(const ByteSet& s) {
        for (int c = 0; c < 256; ++c)
            if (s.test(static_cast<size_t>(c))) return c;
        return -1;
    }
};

}  // namespace

RegexAst parse(std::string_view pattern, ParseOptions opts) { return Parser(pattern, opts).run(); }

RegexAst compileRegex(std::string_view pattern, ParseOptions opts) { return normalize(parse(pattern, opts)); }

}  // namespace crex
