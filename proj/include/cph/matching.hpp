#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cph_string.hpp"
#include "cph_trie.hpp"
#include "encodings.hpp"
#include "heap.hpp"
#include "trie_core.hpp"

namespace cph {

struct FactorBlock {
    std::uint32_t node = 0;   // heap node spelling the block's PD
    std::uint32_t length = 0;
};

// Greedy factorization f(P): each block is the longest prefix of the rest of
// the pattern whose windowed PD is represented by the heap.
struct Factorization {
    std::vector<FactorBlock> blocks;
    std::vector<std::uint32_t> lsum;  // lsum[l] = |P_1| + ... + |P_l|, lsum[0] = 0
};

// Every block starts with windowed PD symbol 0 and the root has a 0-child in
// any heap built from non-empty input, so the factorization always exists and
// every block is non-empty.
inline Factorization factorize(const std::vector<CphNode>& nodes, const PdSequence& pd_p) {
    const std::uint32_t m = static_cast<std::uint32_t>(pd_p.size());
    assert(m >= 1);
    assert(nodes[0].children.find(0) != kNoNode);
    Factorization f;
    f.lsum.push_back(0);
    std::uint32_t start = 1;
    while (start <= m) {
        std::uint32_t cur = 0;
        std::uint32_t len = 0;
        while (start + len <= m) {
            const std::uint32_t next =
                nodes[cur].children.find(pd_window_access(pd_p, start, len + 1));
            if (next == kNoNode) break;
            cur = next;
            ++len;
        }
        assert(len >= 1);
        f.blocks.push_back({cur, len});
        f.lsum.push_back(f.lsum.back() + len);
        start += len;
    }
    return f;
}

struct QueryStats {
    std::uint32_t block_count = 0;
    std::uint32_t candidates = 0;
    std::uint32_t survivors = 0;
    std::uint32_t verify_checks = 0;
};

namespace detail {

// block-local positions y with windowed PD 0; at most sigma_P per block
inline std::vector<std::uint32_t> block_zero_positions(const PdSequence& pd_p,
                                                       std::uint32_t start,
                                                       std::uint32_t len) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t y = 1; y <= len; ++y)
        if (pd_window_access(pd_p, start, y) == 0) out.push_back(y);
    return out;
}

}  // namespace detail

/**
 * All text positions i with S[i..i+m-1] ct-matching P, ascending.
 *
 * One block: every descendant-or-self of the block node matches, plus every
 * proper ancestor whose maximal reach pointer lands at or below it.  More
 * blocks: candidates are the ancestors-or-self of the first block node whose
 * mrp is exactly that node; survival of candidate i against block l tests the
 * descendant condition at the node of position i + lsum(l-1); survivors are
 * verified at the pattern's block-local PD-zero positions, where re-anchored
 * block encodings may disagree with the full-window encoding.
 */
inline std::vector<std::uint32_t> query_string(const Cph& cph, const Sequence& p,
                                               QueryStats* stats = nullptr) {
    if (p.empty()) throw std::invalid_argument("query_string: empty pattern");
    if (!cph.finalized || !cph.has_mrp)
        throw std::logic_error("query_string: index not finalized");
    const std::uint32_t n = static_cast<std::uint32_t>(cph.n());
    const std::uint32_t m = static_cast<std::uint32_t>(p.size());
    std::vector<std::uint32_t> result;
    if (m > n) return result;

    const PdSequence pd_p = pd_encode(p);
    const Factorization f = factorize(cph.nodes, pd_p);
    const std::uint32_t k = static_cast<std::uint32_t>(f.blocks.size());
    if (stats) stats->block_count = k;

    if (k == 1) {
        const std::uint32_t u = f.blocks[0].node;
        for (const std::uint32_t v : subtree_nodes(cph.nodes, u))
            result.push_back(cph.nodes[v].position);
        for (std::uint32_t v = cph.nodes[u].parent; v != 0; v = cph.nodes[v].parent)
            if (is_descendant_node(cph.nodes, cph.nodes[v].mrp, u))
                result.push_back(cph.nodes[v].position);
        std::sort(result.begin(), result.end());
        return result;
    }

    const std::uint32_t u1 = f.blocks[0].node;
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t v = u1; v != 0; v = cph.nodes[v].parent)
        if (cph.nodes[v].mrp == u1) candidates.push_back(cph.nodes[v].position);
    if (stats) stats->candidates = static_cast<std::uint32_t>(candidates.size());

    std::vector<std::vector<std::uint32_t>> zeros(k);
    for (std::uint32_t l = 1; l <= k; ++l)
        zeros[l - 1] =
            detail::block_zero_positions(pd_p, f.lsum[l - 1] + 1, f.blocks[l - 1].length);

    for (const std::uint32_t i : candidates) {
        if (i + m - 1 > n) continue;
        bool alive = true;
        for (std::uint32_t l = 2; l <= k && alive; ++l) {
            const std::uint32_t x = cph.pos_to_node[i + f.lsum[l - 1]];
            const std::uint32_t ul = f.blocks[l - 1].node;
            alive = is_descendant_node(cph.nodes, x, ul) ||
                    is_descendant_node(cph.nodes, cph.nodes[x].mrp, ul);
        }
        if (!alive) continue;
        if (stats) ++stats->survivors;
        for (std::uint32_t l = 1; l <= k && alive; ++l) {
            for (const std::uint32_t y : zeros[l - 1]) {
                if (stats) ++stats->verify_checks;
                if (pd_window_access(cph.pd, i, f.lsum[l - 1] + y) !=
                    pd_p.at(f.lsum[l - 1] + y)) {
                    alive = false;
                    break;
                }
            }
        }
        if (alive) result.push_back(i);
    }
    std::sort(result.begin(), result.end());
    return result;
}

/**
 * All trie nodes i (canonical ids) whose path string starts with an
 * m-length ct-match of P.  Same control flow as the string query; position
 * arithmetic becomes level-ancestor steps in the FP-trie, verification reads
 * text symbols through pd_access_trie on class representatives, and a found
 * FP node contributes its whole equivalence class (all members ct-match).
 */
inline std::vector<std::uint32_t> query_trie(const TrieCph& h, const ReversedTrie& t,
                                             const FpTrie& f, const Sequence& p,
                                             QueryStats* stats = nullptr) {
    if (p.empty()) throw std::invalid_argument("query_trie: empty pattern");
    if (!h.finalized || !h.has_mrp)
        throw std::logic_error("query_trie: index not finalized");
    const std::uint32_t m = static_cast<std::uint32_t>(p.size());
    std::vector<std::uint32_t> result;
    if (f.size() == 0 || h.nodes[0].children.find(0) == kNoNode) return result;

    const PdSequence pd_p = pd_encode(p);
    const Factorization fac = factorize(h.nodes, pd_p);
    const std::uint32_t k = static_cast<std::uint32_t>(fac.blocks.size());
    if (stats) stats->block_count = k;

    auto fp_index_of_heap_node = [&](std::uint32_t v) {
        return f.index_of_id(h.nodes[v].position);
    };
    auto report_class = [&](std::uint32_t fp_idx) {
        for (const std::uint32_t member : f.nodes[fp_idx].members)
            result.push_back(member);
    };

    if (k == 1) {
        const std::uint32_t u = fac.blocks[0].node;
        for (const std::uint32_t v : subtree_nodes(h.nodes, u))
            report_class(fp_index_of_heap_node(v));
        for (std::uint32_t v = h.nodes[u].parent; v != 0; v = h.nodes[v].parent)
            if (is_descendant_node(h.nodes, h.nodes[v].mrp, u))
                report_class(fp_index_of_heap_node(v));
        std::sort(result.begin(), result.end());
        return result;
    }

    const std::uint32_t u1 = fac.blocks[0].node;
    std::vector<std::uint32_t> candidates;  // FP node indices
    for (std::uint32_t v = u1; v != 0; v = h.nodes[v].parent)
        if (h.nodes[v].mrp == u1) candidates.push_back(fp_index_of_heap_node(v));
    if (stats) stats->candidates = static_cast<std::uint32_t>(candidates.size());

    std::vector<std::vector<std::uint32_t>> zeros(k);
    for (std::uint32_t l = 1; l <= k; ++l)
        zeros[l - 1] = detail::block_zero_positions(pd_p, fac.lsum[l - 1] + 1,
                                                    fac.blocks[l - 1].length);

    for (const std::uint32_t w : candidates) {
        if (f.nodes[w].depth < m) continue;
        bool alive = true;
        for (std::uint32_t l = 2; l <= k && alive; ++l) {
            const std::uint32_t wl = f.level_anc_fp(w, fac.lsum[l - 1]);
            const std::uint32_t x = h.node_of_fp[wl];
            const std::uint32_t ul = fac.blocks[l - 1].node;
            alive = is_descendant_node(h.nodes, x, ul) ||
                    is_descendant_node(h.nodes, h.nodes[x].mrp, ul);
        }
        if (!alive) continue;
        if (stats) ++stats->survivors;
        const std::uint32_t rep = f.nodes[w].id;
        for (std::uint32_t l = 1; l <= k && alive; ++l) {
            for (const std::uint32_t y : zeros[l - 1]) {
                if (stats) ++stats->verify_checks;
                if (pd_access_trie(t, rep, fac.lsum[l - 1] + y) !=
                    pd_p.at(fac.lsum[l - 1] + y)) {
                    alive = false;
                    break;
                }
            }
        }
        if (alive) report_class(w);
    }
    std::sort(result.begin(), result.end());
    return result;
}

inline std::vector<std::uint32_t> query_trie(const TrieIndex& idx, const Sequence& p,
                                             QueryStats* stats = nullptr) {
    return query_trie(idx.heap, idx.trie, idx.fp, p, stats);
}

}  // namespace cph
