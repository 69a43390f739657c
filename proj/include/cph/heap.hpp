#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <utility>
#include <vector>

namespace cph {

inline constexpr std::uint32_t kNoNode = 0xFFFFFFFFu;

// Small ordered label->node map.  Degrees stay modest (a node of depth d has
// at most d+1 children and at most sigma+1 suffix links), so a sorted vector
// beats tree maps on both memory and lookup cost.
struct LabelMap {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;

    std::uint32_t find(std::uint32_t label) const {
        auto it = std::lower_bound(entries.begin(), entries.end(),
                                   std::make_pair(label, std::uint32_t{0}));
        if (it != entries.end() && it->first == label) return it->second;
        return kNoNode;
    }

    // false if the label is already present (entry left untouched)
    bool insert(std::uint32_t label, std::uint32_t node) {
        auto it = std::lower_bound(entries.begin(), entries.end(),
                                   std::make_pair(label, std::uint32_t{0}));
        if (it != entries.end() && it->first == label) return false;
        entries.insert(it, {label, node});
        return true;
    }

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

/**
 * One node of a position heap (string or trie flavour).  The root is node 0;
 * non-root nodes are stored in insertion order.  position is the text
 * position (string case) or FP-trie node id (trie case) whose suffix created
 * the node.  rsl maps the label a to the node u with sl(u) = this and
 * |F_u| = a.  pre_in/pre_out are preorder interval bounds assigned by
 * finalize_heap, making descendant tests interval containment.
 */
struct CphNode {
    std::uint32_t position = 0;
    std::uint32_t parent = kNoNode;
    std::uint32_t edge_label = 0;
    std::uint32_t depth = 0;
    std::uint32_t mrp = kNoNode;
    std::uint32_t pre_in = 0;
    std::uint32_t pre_out = 0;
    LabelMap children;
    LabelMap rsl;
};

// Assigns preorder intervals (children visited in ascending label order,
// which LabelMap maintains).  Root gets [1, 2 * node_count].
inline void finalize_heap(std::vector<CphNode>& nodes) {
    std::uint32_t counter = 1;
    // frame: (node, next child index)
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;
    stack.emplace_back(0, 0);
    nodes[0].pre_in = counter++;
    while (!stack.empty()) {
        auto& [v, ci] = stack.back();
        if (ci < nodes[v].children.entries.size()) {
            const std::uint32_t c = nodes[v].children.entries[ci].second;
            ++ci;
            nodes[c].pre_in = counter++;
            stack.emplace_back(c, 0);
        } else {
            nodes[v].pre_out = counter++;
            stack.pop_back();
        }
    }
}

// descendant-or-self
inline bool is_descendant_node(const std::vector<CphNode>& nodes, std::uint32_t x,
                               std::uint32_t u) {
    return nodes[u].pre_in <= nodes[x].pre_in && nodes[x].pre_out <= nodes[u].pre_out;
}

// All nodes of the subtree rooted at u, u included.
inline std::vector<std::uint32_t> subtree_nodes(const std::vector<CphNode>& nodes,
                                                std::uint32_t u) {
    std::vector<std::uint32_t> out;
    std::vector<std::uint32_t> stack{u};
    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (const auto& [label, child] : nodes[v].children.entries) stack.push_back(child);
    }
    return out;
}

}  // namespace cph
