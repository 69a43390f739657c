#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "encodings.hpp"
#include "heap.hpp"

namespace cph {

struct CphBuildStats {
    std::uint64_t climb_steps = 0;    // total ancestor hops; bounded by 3n
    std::uint32_t rsl_overwrites = 0; // must stay 0
    std::uint32_t child_collisions = 0; // must stay 0
};

/**
 * Cartesian-tree position heap of a string: the sequence hash tree of the PD
 * encodings of all non-empty suffixes, inserted shortest first.  Node k is
 * the node created at step k (0 = root), so the heap has exactly n+1 nodes
 * and pos_to_node is a bijection from positions to non-root nodes.
 */
struct Cph {
    Sequence text;
    PdSequence pd;                       // PD(text), kept for windowed access
    std::vector<CphNode> nodes;          // insertion order, 0 = root
    std::vector<std::uint32_t> pos_to_node;  // [1..n] -> node index
    std::uint32_t height = 0;
    std::uint32_t sigma = 0;             // distinct characters in text
    CphBuildStats stats;
    bool has_mrp = false;
    bool finalized = false;

    std::size_t n() const { return text.size(); }
};

namespace detail {
inline std::uint32_t count_distinct(const Sequence& s) {
    Sequence tmp(s);
    std::sort(tmp.begin(), tmp.end());
    return static_cast<std::uint32_t>(std::unique(tmp.begin(), tmp.end()) - tmp.begin());
}
}  // namespace detail

/**
 * Right-to-left online construction.  Processing position i, the front
 * pointers of PD(S[i..]) fall out of the sliding-window prepend; the climb
 * from the previous node u(i+1) looks for the deepest ancestor v carrying a
 * reversed suffix link labelled with the number of front pointers that fit
 * inside the prefix of length depth(v)+1.  That link's target is the parent
 * of the new node.  Total climb work telescopes to at most 3n hops.
 */
inline Cph build_cph_string(const Sequence& s) {
    if (s.empty()) throw std::invalid_argument("build_cph_string: empty text");
    const std::uint32_t n = static_cast<std::uint32_t>(s.size());

    Cph cph;
    cph.text = s;
    cph.pd = pd_encode(s);
    cph.sigma = detail::count_distinct(s);
    cph.nodes.reserve(n + 1);
    cph.pos_to_node.assign(n + 1, kNoNode);

    cph.nodes.emplace_back();  // root

    // base case: u(n) hangs off the root via edge 0
    {
        CphNode un;
        un.position = n;
        un.parent = 0;
        un.edge_label = 0;
        un.depth = 1;
        cph.nodes.push_back(un);
        cph.nodes[0].children.insert(0, 1);
        cph.nodes[0].rsl.insert(0, 1);
        cph.pos_to_node[n] = 1;
        cph.height = 1;
    }

    SlidingPdState state;
    state.prepend(n, s[n - 1]);

    std::vector<std::uint32_t> fronts;  // front pointers of PD(S[i..]), local positions
    for (std::uint32_t i = n - 1; i >= 1; --i) {
        state.prepend(i, s[i - 1]);
        fronts.clear();
        for (const auto& e : state.resolved_last)
            fronts.push_back(static_cast<std::uint32_t>(e.key) - i + 1);

        const std::uint32_t prev = cph.pos_to_node[i + 1];
        std::uint32_t a = static_cast<std::uint32_t>(fronts.size());
        std::uint32_t vhat = kNoNode;
        std::uint32_t parent = kNoNode;
        std::uint32_t v = prev;
        while (true) {
            const std::uint32_t below = v;
            v = cph.nodes[v].parent;
            ++cph.stats.climb_steps;
            const std::uint32_t dv = cph.nodes[v].depth;
            while (a > 0 && fronts[a - 1] > dv + 1) --a;
            const std::uint32_t hit = cph.nodes[v].rsl.find(a);
            if (hit != kNoNode) {
                parent = hit;
                vhat = below;
                break;
            }
            assert(v != 0 && "root always carries rsl(root, 0)");
        }

        const std::uint32_t depth_new = cph.nodes[parent].depth + 1;
        const std::uint32_t label = pd_window_access(cph.pd, i, depth_new);
        const std::uint32_t idx = static_cast<std::uint32_t>(cph.nodes.size());
        CphNode node;
        node.position = i;
        node.parent = parent;
        node.edge_label = label;
        node.depth = depth_new;
        cph.nodes.push_back(node);
        if (!cph.nodes[parent].children.insert(label, idx)) ++cph.stats.child_collisions;
        cph.pos_to_node[i] = idx;
        cph.height = std::max(cph.height, depth_new);

        const bool extends = std::binary_search(fronts.begin(), fronts.end(), depth_new);
        const std::uint32_t b = a + (extends ? 1 : 0);
        if (!cph.nodes[vhat].rsl.insert(b, idx)) ++cph.stats.rsl_overwrites;
    }
    return cph;
}

// mrp(u(i)) = deepest node whose path string prefixes PD(S[i..]); found by a
// root walk over windowed PD symbols, never materializing suffix encodings.
inline void compute_mrp(Cph& cph) {
    const std::uint32_t n = static_cast<std::uint32_t>(cph.n());
    cph.nodes[0].mrp = 0;
    for (std::uint32_t i = 1; i <= n; ++i) {
        std::uint32_t cur = 0;
        const std::uint32_t len = n - i + 1;
        for (std::uint32_t j = 1; j <= len; ++j) {
            const std::uint32_t next =
                cph.nodes[cur].children.find(pd_window_access(cph.pd, i, j));
            if (next == kNoNode) break;
            cur = next;
        }
        const std::uint32_t self = cph.pos_to_node[i];
        assert(cph.nodes[cur].depth >= cph.nodes[self].depth);
        cph.nodes[self].mrp = cur;
    }
    cph.has_mrp = true;
}

inline void finalize(Cph& cph) {
    finalize_heap(cph.nodes);
    cph.finalized = true;
}

// build + mrp + finalize
inline Cph make_string_index(const Sequence& s) {
    Cph cph = build_cph_string(s);
    compute_mrp(cph);
    finalize(cph);
    return cph;
}

inline bool is_descendant(const Cph& cph, std::uint32_t x, std::uint32_t u) {
    assert(cph.finalized);
    return is_descendant_node(cph.nodes, x, u);
}

inline std::uint32_t node_at_position(const Cph& cph, std::uint32_t i) {
    if (i < 1 || i > cph.n()) throw std::out_of_range("node_at_position: bad position");
    return cph.pos_to_node[i];
}

// Structural invariants shared by tests, the acceptance suite and `cph
// verify`.  Returns true when all hold; otherwise appends one message per
// violation.
inline bool structural_check(const std::vector<CphNode>& nodes, std::size_t expect_nodes,
                             std::uint32_t sigma, const CphBuildStats& stats,
                             bool finalized, std::vector<std::string>* errors) {
    auto fail = [&](const std::string& msg) {
        if (errors) errors->push_back(msg);
    };
    bool ok = true;
    if (nodes.size() != expect_nodes) {
        ok = false;
        fail("node count " + std::to_string(nodes.size()) + " != " +
             std::to_string(expect_nodes));
    }
    if (stats.rsl_overwrites != 0) {
        ok = false;
        fail("rsl entries overwritten: " + std::to_string(stats.rsl_overwrites));
    }
    if (stats.child_collisions != 0) {
        ok = false;
        fail("duplicate child edges: " + std::to_string(stats.child_collisions));
    }
    for (std::uint32_t v = 0; v < nodes.size(); ++v) {
        const CphNode& nd = nodes[v];
        if (v != 0) {
            if (nd.parent == kNoNode || nodes[nd.parent].depth + 1 != nd.depth) {
                ok = false;
                fail("node " + std::to_string(v) + ": depth/parent mismatch");
            }
            if (nd.depth >= 1 && nd.edge_label > nd.depth - 1) {
                ok = false;
                fail("node " + std::to_string(v) + ": edge label out of range");
            }
        }
        if (nd.children.size() > nd.depth + 1) {
            ok = false;
            fail("node " + std::to_string(v) + ": more than depth+1 children");
        }
        for (const auto& [label, child] : nd.children.entries) {
            if (label > nd.depth) {
                ok = false;
                fail("node " + std::to_string(v) + ": child label exceeds depth");
            }
        }
        for (const auto& [a, u] : nd.rsl.entries) {
            if (a > sigma) {
                ok = false;
                fail("node " + std::to_string(v) + ": rsl label " + std::to_string(a) +
                     " exceeds sigma " + std::to_string(sigma));
            }
            // monotonicity: parent-linked rsl pairs differ by 0 or 1
            if (v != 0 && nodes[u].parent != kNoNode) {
                const std::uint32_t pv = nodes[v].parent;
                const std::uint32_t pu = nodes[u].parent;
                for (const auto& [a2, u2] : nodes[pv].rsl.entries) {
                    if (u2 == pu && !(a2 <= a && a - a2 <= 1)) {
                        ok = false;
                        fail("rsl monotonicity violated at node " + std::to_string(v));
                    }
                }
            }
        }
        if (finalized && v != 0) {
            const CphNode& p = nodes[nd.parent];
            if (!(p.pre_in < nd.pre_in && nd.pre_out < p.pre_out)) {
                ok = false;
                fail("node " + std::to_string(v) + ": preorder interval not nested");
            }
        }
    }
    return ok;
}

inline bool structural_check(const Cph& cph, std::vector<std::string>* errors = nullptr) {
    bool ok = structural_check(cph.nodes, cph.n() + 1, cph.sigma, cph.stats,
                               cph.finalized, errors);
    for (std::uint32_t i = 1; i <= cph.n(); ++i) {
        const std::uint32_t v = cph.pos_to_node[i];
        if (v == kNoNode || v >= cph.nodes.size() || cph.nodes[v].position != i) {
            ok = false;
            if (errors) errors->push_back("pos_to_node broken at " + std::to_string(i));
        }
    }
    if (cph.stats.climb_steps > 3 * static_cast<std::uint64_t>(cph.n())) {
        ok = false;
        if (errors)
            errors->push_back("climb steps " + std::to_string(cph.stats.climb_steps) +
                              " exceed 3n");
    }
    return ok;
}

}  // namespace cph
