#include "crex/common.hpp"

#include <cstdio>
#include <cstdlib>

namespace crex {

std::string byteLiteral(unsigned char c) {
    switch (c) {
        case '\n': return "\\n";
        case '\t': return "\\t";
        case '\r': return "\\r";
        case '\f': return "\\f";
        case '\v': return "\\v";
        default: break;
    }
    if (c < 0x20 || c >= 0x7f) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\x%02x", c);
        return buf;
    }
    static const std::string special = "\\.^$|?*+()[]{}-/\"";
    if (special.find(static_cast<char>(c)) != std::string::npos) return std::string("\\") + static_cast<char>(c);
    return std::string(1, static_cast<char>(c));
}

namespace {

ByteSet rangeSet(int lo, int hi) {
    ByteSet s;
    for (int c = lo; c <= hi; ++c) s.set(static_cast<size_t>(c));
    return s;
}

}  // namespace

std::string classToString(const ByteSet& s) {
    if (s.count() == 1) {
        for (int c = 0; c < 256; ++c)
            if (s.test(static_cast<size_t>(c))) return byteLiteral(static_cast<unsigned char>(c));
    }
    ByteSet digits = rangeSet('0', '9');
    ByteSet word = digits | rangeSet('a', 'z') | rangeSet('A', 'Z');
    word.set('_');
    ByteSet space;
    for (char c : std::string(" \t\n\r\f\v")) space.set(static_cast<unsigned char>(c));
    ByteSet dot = ~ByteSet{};
    dot.reset('\n');
    if (s.all()) return "[\\x00-\\xff]";
    if (s == dot) return ".";
    if (s == digits) return "\\d";
    if (s == ~digits) return "\\D";
    if (s == word) return "\\w";
    if (s == ~word) return "\\W";
    if (s == space) return "\\s";
    if (s == ~space) return "\\S";

    std::string out = "[";
    int c = 0;
    while (c < 256) {
        if (!s.test(static_cast<size_t>(c))) { ++c; continue; }
        int e = c;
        while (e + 1 < 256 && s.test(static_cast<size_t>(e + 1))) ++e;
        out += byteLiteral(static_cast<unsigned char>(c));
        if (e > c + 1) out += "-";
        if (e > c) out += byteLiteral(static_cast<unsigned char>(e));
        c = e + 1;
    }
    return out + "]";
}

size_t defaultStateCap() {
    if (const char* env = std::getenv("CREX_STATE_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) return static_cast<size_t>(v);
    }
    return 200000;
}

std::string dotEscape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

}  // namespace crex
