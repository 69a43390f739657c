#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cph_string.hpp"
#include "encodings.hpp"
#include "heap.hpp"
#include "trie_core.hpp"

namespace cph {

struct TrieCphStats {
    std::uint64_t nma_steps = 0;
    std::uint32_t rsl_overwrites = 0;    // must stay 0
    std::uint32_t child_collisions = 0;  // must stay 0
    std::uint32_t descent_steps = 0;     // parent search undershoots recovered
    std::uint32_t missing_vhat = 0;      // suffix-link sources that did not exist
    std::uint32_t max_loop_iters = 0;    // per-insert label decrements, <= sigma+1
};

/**
 * Cartesian-tree position heap over the FP-trie representatives.  Nodes are
 * CphNode with position = FP-trie node id.  Marking state realizes one
 * conceptual heap copy per label: a node is marked for label a iff rsl(., a)
 * is defined on it, and nearest-marked-ancestor queries drive the parent
 * search during construction.  Compressed up-pointers are only trusted while
 * the label's mark set is unchanged (the epoch), since a mark landing inside
 * a compressed hop would otherwise be skipped.
 */
struct TrieCph {
    std::vector<CphNode> nodes;              // insertion order, 0 = root
    std::vector<std::uint32_t> node_of_fp;   // FP node index -> heap node
    std::uint32_t height = 0;
    std::uint32_t sigma = 0;                 // sigma of the input trie
    TrieCphStats stats;
    bool has_mrp = false;
    bool finalized = false;

    // per-label NMA state, label in [0..sigma]
    std::vector<std::vector<std::uint8_t>> marked;
    std::vector<std::vector<std::uint32_t>> nma_ptr;
    std::vector<std::vector<std::uint32_t>> nma_stamp;
    std::vector<std::uint32_t> epoch;

    std::vector<std::vector<std::uint32_t>> up;  // level-ancestor lifting

    std::uint32_t anc(std::uint32_t v, std::uint32_t j) const {
        assert(j <= nodes[v].depth);
        for (std::uint32_t k = 0; j != 0; ++k, j >>= 1)
            if (j & 1u) v = up[k][v];
        return v;
    }

    void mark(std::uint32_t v, std::uint32_t a) {
        if (a >= marked.size()) {  // labels beyond sigma are an invariant breach,
            const std::size_t n = marked.empty() ? 0 : marked[0].size();
            marked.resize(a + 1, std::vector<std::uint8_t>(n, 0));      // but stay
            nma_ptr.resize(a + 1, std::vector<std::uint32_t>(n, kNoNode));  // memory-safe
            nma_stamp.resize(a + 1, std::vector<std::uint32_t>(n, 0xFFFFFFFFu));
            epoch.resize(a + 1, 0);
        }
        marked[a][v] = 1;
        ++epoch[a];
    }

    // nearest marked ancestor-or-self, kNoNode if none on the root path
    std::uint32_t nma_try(std::uint32_t v, std::uint32_t a, TrieCphStats* stats_out) {
        if (a >= marked.size()) return kNoNode;
        std::vector<std::uint32_t> path;
        std::uint32_t cur = v;
        while (cur != kNoNode && !marked[a][cur]) {
            path.push_back(cur);
            if (stats_out) ++stats_out->nma_steps;
            cur = (nma_stamp[a][cur] == epoch[a]) ? nma_ptr[a][cur] : nodes[cur].parent;
        }
        if (cur != kNoNode) {
            for (std::uint32_t x : path) {
                nma_ptr[a][x] = cur;
                nma_stamp[a][x] = epoch[a];
            }
        }
        return cur;
    }
};

// nearest marked ancestor-or-self of v for label a; the root is marked for 0
// from the base case, so construction-time preconditions always hold
inline std::uint32_t nma_query(TrieCph& h, std::uint32_t v, std::uint32_t a) {
    const std::uint32_t r = h.nma_try(v, a, nullptr);
    if (r == kNoNode) throw std::logic_error("nma_query: no marked ancestor");
    return r;
}

namespace detail {

inline std::uint32_t count_leq(const std::vector<std::uint32_t>& sorted, std::uint32_t x) {
    return static_cast<std::uint32_t>(
        std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

}  // namespace detail

/**
 * Builds the heap by inserting FP-trie nodes in decreasing id order (shallow
 * classes first).  For node w with parent class q and u the heap node of q,
 * the parent search walks label segments: for the current label a, nodes
 * whose prefix of their depth+1 holds exactly a of w's front pointers form a
 * contiguous run of ancestors of u; the nearest node marked for a inside the
 * run carries the suffix link whose target is the deepest present prefix of
 * PD(T[w..]).  A descent over pd_access_trie symbols then recovers any
 * deeper present prefix before attaching, so the inserted node is always the
 * shortest absent prefix.
 */
inline TrieCph build_cph_trie(const ReversedTrie& t, const FpTrie& f) {
    assert(t.prepared);
    const std::uint32_t nprime = f.size();
    TrieCph h;
    h.sigma = t.sigma();
    h.nodes.reserve(nprime + 1);
    h.nodes.emplace_back();  // root
    h.node_of_fp.assign(nprime + 1, 0);

    const std::uint32_t nlabels = h.sigma + 1;
    h.marked.assign(nlabels, std::vector<std::uint8_t>(nprime + 1, 0));
    h.nma_ptr.assign(nlabels, std::vector<std::uint32_t>(nprime + 1, kNoNode));
    h.nma_stamp.assign(nlabels, std::vector<std::uint32_t>(nprime + 1, 0xFFFFFFFFu));
    h.epoch.assign(nlabels, 0);

    std::uint32_t levels = 1;
    while ((1u << levels) <= std::max<std::uint32_t>(nprime, 1)) ++levels;
    h.up.assign(levels, std::vector<std::uint32_t>(nprime + 1, 0));

    if (nprime == 0) {
        finalize_heap(h.nodes);
        h.finalized = true;
        h.has_mrp = true;
        return h;
    }

    std::vector<std::uint32_t> order;  // FP indices by id descending
    for (std::uint32_t v = 1; v <= nprime; ++v) order.push_back(v);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return f.nodes[a].id > f.nodes[b].id; });

    auto add_node = [&](std::uint32_t fp_idx, std::uint32_t parent, std::uint32_t label) {
        const std::uint32_t idx = static_cast<std::uint32_t>(h.nodes.size());
        CphNode nd;
        nd.position = f.nodes[fp_idx].id;
        nd.parent = parent;
        nd.edge_label = label;
        nd.depth = h.nodes[parent].depth + 1;
        h.nodes.push_back(nd);
        if (!h.nodes[parent].children.insert(label, idx)) ++h.stats.child_collisions;
        h.node_of_fp[fp_idx] = idx;
        h.height = std::max(h.height, nd.depth);
        h.up[0][idx] = parent;
        for (std::uint32_t k = 1; k < levels; ++k)
            h.up[k][idx] = h.up[k - 1][h.up[k - 1][idx]];
        return idx;
    };

    bool first = true;
    for (const std::uint32_t w : order) {
        const std::uint32_t rep = f.nodes[w].id;
        const std::uint32_t fp_depth = f.nodes[w].depth;
        const auto& I = f.nodes[w].I;

        if (first) {
            assert(f.nodes[w].parent == 0 && fp_depth == 1);
            assert(pd_access_trie(t, rep, 1) == 0);
            const std::uint32_t idx = add_node(w, 0, 0);
            if (!h.nodes[0].rsl.insert(0, idx)) ++h.stats.rsl_overwrites;
            h.mark(0, 0);
            first = false;
            continue;
        }

        const std::uint32_t q = f.nodes[w].parent;
        const std::uint32_t u = h.node_of_fp[q];
        const std::uint32_t depth_u = h.nodes[u].depth;

        // label segment walk, deepest label first
        std::uint32_t found = kNoNode;
        std::uint32_t a = detail::count_leq(I, depth_u + 1);
        std::uint32_t iters = 0;
        for (;; --a) {
            ++iters;
            const std::uint32_t hi =
                (a < I.size()) ? std::min<std::uint32_t>(I[a] - 2, depth_u) : depth_u;
            const std::uint32_t lo = (a >= 1) ? I[a - 1] - 1 : 0;
            const std::uint32_t deep = h.anc(u, depth_u - hi);
            const std::uint32_t y = h.nma_try(deep, a, &h.stats);
            if (y != kNoNode && h.nodes[y].depth >= lo) {
                found = y;
                break;
            }
            if (a == 0) break;
        }
        h.stats.max_loop_iters = std::max(h.stats.max_loop_iters, iters);
        assert(found != kNoNode && "root carries rsl(root, 0)");

        std::uint32_t p = h.nodes[found].rsl.find(a);
        assert(p != kNoNode);

        // extend to the true longest present prefix (no-op in the common case)
        while (h.nodes[p].depth + 1 <= fp_depth) {
            const std::uint32_t next =
                h.nodes[p].children.find(pd_access_trie(t, rep, h.nodes[p].depth + 1));
            if (next == kNoNode) break;
            p = next;
            ++h.stats.descent_steps;
        }
        assert(h.nodes[p].depth < fp_depth && "full PD already present");

        const std::uint32_t depth_new = h.nodes[p].depth + 1;
        const std::uint32_t label = pd_access_trie(t, rep, depth_new);
        const std::uint32_t idx = add_node(w, p, label);

        // hook the reversed suffix link at the node spelling the new string
        // minus its head, i.e. the depth depth_new-1 prefix of the parent
        // class's PD
        const std::uint32_t d_vhat = depth_new - 1;
        std::uint32_t vhat;
        if (d_vhat <= depth_u) {
            vhat = h.anc(u, depth_u - d_vhat);
        } else {
            const std::uint32_t rep_q = f.nodes[q].id;
            vhat = u;
            for (std::uint32_t j = depth_u + 1; j <= d_vhat && vhat != kNoNode; ++j) {
                vhat = h.nodes[vhat].children.find(pd_access_trie(t, rep_q, j));
            }
        }
        if (vhat == kNoNode) {
            ++h.stats.missing_vhat;
        } else {
            const std::uint32_t b = detail::count_leq(I, depth_new);
            if (!h.nodes[vhat].rsl.insert(b, idx)) ++h.stats.rsl_overwrites;
            h.mark(vhat, b);
        }
    }
    return h;
}

// root walk per FP node over pd_access_trie symbols
inline void compute_mrp_trie(TrieCph& h, const ReversedTrie& t, const FpTrie& f) {
    h.nodes[0].mrp = 0;
    for (std::uint32_t w = 1; w <= f.size(); ++w) {
        std::uint32_t cur = 0;
        for (std::uint32_t j = 1; j <= f.nodes[w].depth; ++j) {
            const std::uint32_t next =
                h.nodes[cur].children.find(pd_access_trie(t, f.nodes[w].id, j));
            if (next == kNoNode) break;
            cur = next;
        }
        h.nodes[h.node_of_fp[w]].mrp = cur;
    }
    h.has_mrp = true;
}

inline void finalize(TrieCph& h) {
    finalize_heap(h.nodes);
    h.finalized = true;
}

struct TrieIndex {
    ReversedTrie trie;
    FpTrie fp;
    TrieCph heap;
};

inline TrieIndex make_trie_index(ReversedTrie trie) {
    TrieIndex idx;
    idx.trie = std::move(trie);
    if (!idx.trie.prepared) prepare(idx.trie);
    idx.fp = build_fp_trie(idx.trie);
    idx.heap = build_cph_trie(idx.trie, idx.fp);
    compute_mrp_trie(idx.heap, idx.trie, idx.fp);
    finalize(idx.heap);
    return idx;
}

inline bool structural_check(const TrieCph& h, const FpTrie& f,
                             std::vector<std::string>* errors = nullptr) {
    CphBuildStats compat;
    compat.rsl_overwrites = h.stats.rsl_overwrites;
    compat.child_collisions = h.stats.child_collisions;
    bool ok = structural_check(h.nodes, f.size() + 1, h.sigma, compat, h.finalized, errors);
    for (std::uint32_t w = 1; w <= f.size(); ++w) {
        const std::uint32_t v = h.node_of_fp[w];
        if (v == 0 || v >= h.nodes.size() || h.nodes[v].position != f.nodes[w].id) {
            ok = false;
            if (errors) errors->push_back("node_of_fp broken at index " + std::to_string(w));
        }
    }
    if (h.stats.max_loop_iters > h.sigma + 1) {
        ok = false;
        if (errors)
            errors->push_back("label loop ran " + std::to_string(h.stats.max_loop_iters) +
                              " times, expected <= sigma+1");
    }
    // stats.missing_vhat and stats.descent_steps are informational: on branchy
    // tries the sl-image of a new node need not be present, so some nodes
    // legitimately carry no incoming suffix link and later searches recover
    // through the descent.
    return ok;
}

}  // namespace cph
