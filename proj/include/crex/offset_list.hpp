#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

namespace crex {

// Work counters shared by every list of one simulation.
struct OlStats {
    uint64_t increments = 0;  // incrementAll calls
    uint64_t inserts = 0;     // elements created (singletons, saturation)
    uint64_t moves = 0;       // elements carried over from a consumed list
    uint64_t drops = 0;       // elements removed by filters or saturation
    uint64_t scans = 0;       // elements of the absorbing list visited by merges

    // element writes: every element placed into a list
    uint64_t touches() const { return inserts + moves; }
    bool ledgerHolds() const { return moves <= increments + inserts; }
    OlStats& operator+=(const OlStats& o);
};

// A set of naturals as offset + strictly increasing list of (value - offset).
class OffsetList {
public:
    OffsetList() = default;

    bool empty() const { return vals_.empty(); }
    size_t size() const { return vals_.size(); }
    int64_t offset() const { return off_; }
    int64_t min() const { return vals_.front() + off_; }
    int64_t max() const { return vals_.back() + off_; }
    std::vector<int64_t> values() const;
    std::string toString() const;

    void clear() {
        vals_.clear();
        off_ = 0;
    }
    void assignSingleton(int64_t v, OlStats& st);

    void incrementAll(OlStats& st);
    // increment, then clamp to cap (values above cap collapse onto cap)
    void incrementSaturating(int64_t cap, OlStats& st);
    void filterGe(int64_t n, OlStats& st);
    void filterLt(int64_t n, OlStats& st);

    // existential tests; an empty list satisfies nothing
    bool anyGe(int64_t n) const { return !empty() && max() >= n; }
    bool anyLt(int64_t n) const { return !empty() && min() < n; }

    // Tests on the set {v + 1 | v in list, v < bound}.
    bool shiftedAnyGe(int64_t n, int64_t bound) const;
    bool shiftedAnyLt(int64_t n, int64_t bound) const;
    // Tests on {min(v + 1, cap) | v in list}.
    bool saturatedAnyGe(int64_t n, int64_t cap) const;
    bool saturatedAnyLt(int64_t n, int64_t cap) const;

    // Unites `a` and `b`; the one with the larger maximum absorbs the other
    // (tie: the shorter one is consumed, equal lengths consume b). Returns
    // true when a survived. The consumed list is left empty.
    static bool merge(OffsetList& a, OffsetList& b, OlStats& st);

private:
    int64_t off_ = 0;
    std::deque<int64_t> vals_;
    friend class OffsetListPool;
};

// Owns lists referenced by integer handles; consumed lists are recycled.
class OffsetListPool {
public:
    int acquire();
    int singleton(int64_t v, OlStats& st);
    // Rebuilds a list from sorted values without touching any stats.
    int restore(const std::vector<int64_t>& sorted);
    void release(int h);
    OffsetList& operator[](int h) { return lists_[static_cast<size_t>(h)]; }
    const OffsetList& operator[](int h) const { return lists_[static_cast<size_t>(h)]; }
    // merge two handles; the consumed handle is released, survivor returned
    int merge(int a, int b, OlStats& st);
    size_t live() const { return lists_.size() - free_.size(); }
    void reset() {
        lists_.clear();
        free_.clear();
    }

private:
    std::vector<OffsetList> lists_;
    std::vector<int> free_;
};

}  // namespace crex
