#include "crex/offset_list.hpp"

#include <algorithm>
#include <cassert>

namespace crex {

OlStats& OlStats::operator+=(const OlStats& o) {
    increments += o.increments;
    inserts += o.inserts;
    moves += o.moves;
    drops += o.drops;
    scans += o.scans;
    return *this;
}

std::vector<int64_t> OffsetList::values() const {
    std::vector<int64_t> out;
    out.reserve(vals_.size());
    for (int64_t v : vals_) out.push_back(v + off_);
    return out;
}

std::string OffsetList::toString() const {
    std::string s = "{";
    bool first = true;
    for (int64_t v : vals_) {
        if (!first) s += ",";
        first = false;
        s += std::to_string(v + off_);
    }
    return s + "}";
}

void OffsetList::assignSingleton(int64_t v, OlStats& st) {
    vals_.clear();
    off_ = 0;
    vals_.push_back(v);
    ++st.inserts;
}

void OffsetList::incrementAll(OlStats& st) {
    ++off_;
    ++st.increments;
}

void OffsetList::incrementSaturating(int64_t cap, OlStats& st) {
    incrementAll(st);
    if (vals_.empty() || max() <= cap) return;
    vals_.pop_back();
    ++st.drops;
    if (vals_.empty() || max() != cap) {
        vals_.push_back(cap - off_);
        ++st.inserts;
    }
}

void OffsetList::filterGe(int64_t n, OlStats& st) {
    while (!vals_.empty() && vals_.front() + off_ < n) {
        vals_.pop_front();
        ++st.drops;
    }
}

void OffsetList::filterLt(int64_t n, OlStats& st) {
    while (!vals_.empty() && vals_.back() + off_ >= n) {
        vals_.pop_back();
        ++st.drops;
    }
}

bool OffsetList::shiftedAnyGe(int64_t n, int64_t bound) const {
    // need some v with n - 1 <= v < bound; values never exceed bound, so
    // only the tail can be cut off by the filter
    if (vals_.empty()) return false;
    int64_t top = max();
    if (top >= bound) {
        if (vals_.size() < 2) return false;
        top = vals_[vals_.size() - 2] + off_;
        if (top >= bound) return false;
    }
    return top + 1 >= n;
}

bool OffsetList::shiftedAnyLt(int64_t n, int64_t bound) const {
    return !vals_.empty() && min() < std::min(bound, n - 1);
}

bool OffsetList::saturatedAnyGe(int64_t n, int64_t cap) const {
    return !vals_.empty() && std::min(max() + 1, cap) >= n;
}

bool OffsetList::saturatedAnyLt(int64_t n, int64_t cap) const {
    return !vals_.empty() && std::min(min() + 1, cap) < n;
}

bool OffsetList::merge(OffsetList& a, OffsetList& b, OlStats& st) {
    if (b.empty()) return true;
    if (a.empty()) return false;
    bool keepA;
    if (a.max() != b.max()) keepA = a.max() > b.max();
    else keepA = a.size() >= b.size();
    OffsetList& big = keepA ? a : b;
    OffsetList& small = keepA ? b : a;

    // Only the prefix of `big` up to max(small) can interleave; it has at
    // most max(small) + 1 elements since values are distinct naturals.
    const int64_t top = small.max();
    std::vector<int64_t> prefix;
    while (!big.vals_.empty() && big.vals_.front() + big.off_ <= top) {
        prefix.push_back(big.vals_.front() + big.off_);
        big.vals_.pop_front();
        ++st.scans;
    }
    std::vector<int64_t> merged;
    merged.reserve(prefix.size() + small.size());
    size_t i = 0;
    auto it = small.vals_.begin();
    while (i < prefix.size() || it != small.vals_.end()) {
        int64_t v;
        if (it == small.vals_.end() || (i < prefix.size() && prefix[i] <= *it + small.off_)) {
            v = prefix[i++];
        } else {
            v = *it + small.off_;
            ++it;
        }
        if (merged.empty() || merged.back() != v) merged.push_back(v);
    }
    st.moves += small.size();
    for (auto r = merged.rbegin(); r != merged.rend(); ++r) big.vals_.push_front(*r - big.off_);
    small.clear();
    return keepA;
}

int OffsetListPool::acquire() {
    if (!free_.empty()) {
        int h = free_.back();
        free_.pop_back();
        return h;
    }
    lists_.emplace_back();
    return static_cast<int>(lists_.size()) - 1;
}

int OffsetListPool::restore(const std::vector<int64_t>& sorted) {
    int h = acquire();
    OffsetList& l = lists_[static_cast<size_t>(h)];
    l.off_ = 0;
    l.vals_.assign(sorted.begin(), sorted.end());
    return h;
}

int OffsetListPool::singleton(int64_t v, OlStats& st) {
    int h = acquire();
    lists_[static_cast<size_t>(h)].assignSingleton(v, st);
    return h;
}

void OffsetListPool::release(int h) {
    lists_[static_cast<size_t>(h)].clear();
    free_.push_back(h);
}

int OffsetListPool::merge(int a, int b, OlStats& st) {
    bool keepA = OffsetList::merge(lists_[static_cast<size_t>(a)], lists_[static_cast<size_t>(b)], st);
    int keep = keepA ? a : b;
    release(keepA ? b : a);
    return keep;
}

}  // namespace crex
