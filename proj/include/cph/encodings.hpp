#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cph {

using Character = std::uint32_t;
using Sequence = std::vector<Character>;

/**
 * Parent-distance encoding, 1-indexed: at(i) is the distance from position i
 * to the nearest position j < i whose value is <= the value at i, or 0 when
 * no such position exists.  Two equal-length sequences have equal Cartesian
 * trees iff their PD encodings are equal.
 */
struct PdSequence {
    std::vector<std::uint32_t> values;  // values[k] is position k+1

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    std::uint32_t at(std::size_t pos) const {
        assert(pos >= 1 && pos <= values.size());
        return values[pos - 1];
    }
    friend bool operator==(const PdSequence&, const PdSequence&) = default;
};

/**
 * Front-pointer-count encoding, 1-indexed: at(i) is the number of front
 * pointers of the PD encoding of the suffix starting at i.  Unlike PD, this
 * encoding is suffix-consistent, which is what makes it usable on tries.
 */
struct FpSequence {
    std::vector<std::uint32_t> values;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    std::uint32_t at(std::size_t pos) const {
        assert(pos >= 1 && pos <= values.size());
        return values[pos - 1];
    }
    friend bool operator==(const FpSequence&, const FpSequence&) = default;
};

// Binary tree on positions 1..n, rooted at the leftmost minimum; in-order
// traversal yields 1..n.  left/right are 1-indexed, 0 = no child.
struct CartesianTree {
    std::uint32_t root = 0;
    std::vector<std::uint32_t> left;   // [0] unused
    std::vector<std::uint32_t> right;

    std::size_t size() const { return left.empty() ? 0 : left.size() - 1; }
    friend bool operator==(const CartesianTree&, const CartesianTree&) = default;
};

// Pointer DAG of a PD sequence: one pair (j, i) per position i with PD[i] > 0,
// where j = i - PD[i] is the position i points back to.  Positions with
// PD[i] = 0 contribute no pair, so the in-degree of j (the number of pairs
// (j, *)) equals the FP value at j.
struct PdDag {
    std::size_t node_count = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // sorted

    friend bool operator==(const PdDag&, const PdDag&) = default;
};

inline PdSequence pd_encode(const Sequence& s) {
    PdSequence pd;
    pd.values.resize(s.size());
    std::vector<std::uint32_t> stack;  // positions with non-decreasing values
    for (std::uint32_t i = 1; i <= s.size(); ++i) {
        const Character c = s[i - 1];
        while (!stack.empty() && s[stack.back() - 1] > c) stack.pop_back();
        pd.values[i - 1] = stack.empty() ? 0 : i - stack.back();
        stack.push_back(i);
    }
    return pd;
}

// Ascending positions i >= 2 with i - pd[i] = 1 (pointers to the first
// position of the sequence).
inline std::vector<std::uint32_t> front_pointers(const PdSequence& pd) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= pd.size(); ++i)
        if (i - pd.at(i) == 1) out.push_back(i);
    return out;
}

inline std::vector<std::uint32_t> zero_positions(const PdSequence& pd) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 1; i <= pd.size(); ++i)
        if (pd.at(i) == 0) out.push_back(i);
    return out;
}

/**
 * State for maintaining PD encodings of a right-to-left growing window.
 * Pending entries are the zero positions of the current window's PD, stored
 * back-to-front (back = window head).  Keys identify where a character lives
 * (text position for strings, node id for trie paths); only the push order
 * matters to the algorithm, keys are reported back untouched.
 *
 * prepend() resolves the pending entries whose stored value is >= the new
 * character; the resolved entries are exactly the front pointers of the
 * grown window's PD.  Each entry is resolved at most once, so a full
 * right-to-left scan costs O(n) overall, and the pending list never holds
 * more entries than the window has distinct values.
 */
struct SlidingPdState {
    struct Entry {
        std::uint64_t key;
        Character value;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    std::vector<Entry> pending;        // back = leftmost (window head)
    std::vector<Entry> resolved_last;  // resolved by the latest prepend, head-first

    void prepend(std::uint64_t key, Character value) {
        resolved_last.clear();
        while (!pending.empty() && value <= pending.back().value) {
            resolved_last.push_back(pending.back());
            pending.pop_back();
        }
        pending.push_back({key, value});
    }

    // Reverts one prepend given the entries it resolved (single-owner undo
    // used by depth-first trie traversals).
    void undo(const std::vector<Entry>& resolved) {
        assert(!pending.empty());
        pending.pop_back();
        for (auto it = resolved.rbegin(); it != resolved.rend(); ++it)
            pending.push_back(*it);
    }
};

inline void pd_prepend(SlidingPdState& state, std::uint64_t key, Character value) {
    state.prepend(key, value);
}

// FP(s)[i] = number of front pointers of PD(s[i..]); one right-to-left scan.
inline FpSequence fp_encode(const Sequence& s) {
    FpSequence fp;
    fp.values.resize(s.size());
    SlidingPdState state;
    for (std::uint32_t i = s.size(); i >= 1; --i) {
        state.prepend(i, s[i - 1]);
        fp.values[i - 1] = static_cast<std::uint32_t>(state.resolved_last.size());
    }
    return fp;
}

// PD(S[i..])[j] from the global PD of S, in constant time: the global value
// survives the window cut iff its target does not fall left of i.
// Out-of-range indices are a caller contract violation.
inline std::uint32_t pd_window_access(const PdSequence& pd_global, std::uint32_t i,
                                      std::uint32_t j) {
    assert(i >= 1 && j >= 1 && i + j - 1 <= pd_global.size());
    const std::uint32_t g = i + j - 1;
    const std::uint32_t v = pd_global.at(g);
    return (v > 0 && g - v >= i) ? v : 0;
}

inline CartesianTree build_cartesian_tree(const Sequence& s) {
    CartesianTree t;
    if (s.empty()) return t;
    t.left.assign(s.size() + 1, 0);
    t.right.assign(s.size() + 1, 0);
    std::vector<std::uint32_t> stack;  // rightmost spine
    for (std::uint32_t i = 1; i <= s.size(); ++i) {
        // pop strictly greater values so equal values attach rightward,
        // realizing the left-most-minimum root rule
        std::uint32_t last = 0;
        while (!stack.empty() && s[stack.back() - 1] > s[i - 1]) {
            last = stack.back();
            stack.pop_back();
        }
        t.left[i] = last;
        if (!stack.empty()) t.right[stack.back()] = i;
        stack.push_back(i);
    }
    t.root = stack.front();
    return t;
}

inline bool ct_match(const Sequence& s1, const Sequence& s2) {
    return s1.size() == s2.size() && pd_encode(s1) == pd_encode(s2);
}

inline PdDag dag_from_pd(const PdSequence& pd) {
    PdDag dag;
    dag.node_count = pd.size();
    for (std::uint32_t i = 1; i <= pd.size(); ++i)
        if (pd.at(i) > 0) dag.edges.emplace_back(i - pd.at(i), i);
    std::sort(dag.edges.begin(), dag.edges.end());
    return dag;
}

// Rebuilds the pointer DAG from an FP encoding: scanning targets right to
// left, position i grabs the FP[i] leftmost still-unmarked positions to its
// right.  Throws if the encoding cannot have come from any sequence.
inline PdDag dag_from_fp(const FpSequence& fp) {
    PdDag dag;
    dag.node_count = fp.size();
    std::set<std::uint32_t> unmarked;
    for (std::uint32_t i = 1; i <= fp.size(); ++i) unmarked.insert(i);
    for (std::uint32_t i = fp.size(); i >= 1; --i) {
        std::uint32_t need = fp.at(i);
        auto it = unmarked.upper_bound(i);
        while (need > 0) {
            if (it == unmarked.end())
                throw std::invalid_argument("dag_from_fp: malformed FP encoding");
            dag.edges.emplace_back(i, *it);
            it = unmarked.erase(it);
            --need;
        }
        if (i == 1) break;
    }
    std::sort(dag.edges.begin(), dag.edges.end());
    return dag;
}

}  // namespace cph
