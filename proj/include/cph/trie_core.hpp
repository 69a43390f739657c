#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "encodings.hpp"
#include "heap.hpp"

namespace cph {

/**
 * Reversed trie: path strings are read leaf-to-root, so the path string of a
 * node's parent is a suffix of the node's own.  Canonical ids are bottom-up
 * level-order ranks (deepest level first), which makes the root's id N and
 * gives every node an id smaller than its parent's.
 *
 * prepare() builds the query tables: binary-lifting level ancestors, per-label
 * nearest-ancestor (na) and occurrence-count (cnt) tables over the dense label
 * alphabet, and binary lifting over each node's same-label predecessor chain.
 * Together these answer PD random access on path strings.
 */
struct ReversedTrie {
    struct Node {
        std::uint32_t parent = 0;  // 0 = none (root)
        Character label = 0;       // label of the edge to the parent
        std::uint32_t depth = 0;
    };

    std::vector<Node> nodes;  // 1-based; nodes[0] unused
    std::uint32_t root = 0;   // always == size()

    std::vector<Character> alphabet;  // sorted distinct edge labels
    std::vector<std::uint32_t> na;    // (N+1) x sigma, value = node id or root (= none)
    std::vector<std::uint32_t> cnt;   // (N+1) x sigma
    std::vector<std::vector<std::uint32_t>> up;        // level-ancestor lifting
    std::vector<std::vector<std::uint32_t>> chain_up;  // same-label chain lifting
    std::vector<std::uint32_t> label_rank_of;          // node id -> rank of its label
    bool prepared = false;

    std::uint32_t size() const { return static_cast<std::uint32_t>(nodes.size()) - 1; }
    std::uint32_t sigma() const { return static_cast<std::uint32_t>(alphabet.size()); }
    std::uint32_t depth(std::uint32_t x) const { return nodes[x].depth; }
    std::uint32_t height() const {
        std::uint32_t h = 0;
        for (std::uint32_t x = 1; x <= size(); ++x) h = std::max(h, nodes[x].depth);
        return h;
    }

    std::uint32_t rank_of(Character label) const {
        auto it = std::lower_bound(alphabet.begin(), alphabet.end(), label);
        assert(it != alphabet.end() && *it == label);
        return static_cast<std::uint32_t>(it - alphabet.begin());
    }

    std::uint32_t na_at(std::uint32_t x, std::uint32_t rank) const {
        return na[static_cast<std::size_t>(x) * sigma() + rank];
    }
    std::uint32_t cnt_at(std::uint32_t x, std::uint32_t rank) const {
        return cnt[static_cast<std::size_t>(x) * sigma() + rank];
    }

    // leaf-to-root path string of node x
    Sequence path_string(std::uint32_t x) const {
        Sequence out;
        while (x != root) {
            out.push_back(nodes[x].label);
            x = nodes[x].parent;
        }
        return out;
    }
};

namespace detail {

// Bottom-up level-order renumbering: orders (depth desc, tie asc) and returns
// old-id -> canonical-id.  `tie` carries the within-level tiebreak rank.
inline std::vector<std::uint32_t> canonical_order(const std::vector<std::uint32_t>& depths,
                                                  const std::vector<std::uint64_t>& tie) {
    const std::uint32_t n = static_cast<std::uint32_t>(depths.size());
    std::vector<std::uint32_t> order(n);
    for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (depths[a] != depths[b]) return depths[a] > depths[b];
        return tie[a] < tie[b];
    });
    std::vector<std::uint32_t> canon(n);
    for (std::uint32_t k = 0; k < n; ++k) canon[order[k]] = k + 1;
    return canon;
}

}  // namespace detail

// Builds a ReversedTrie from parallel parent/label arrays (0-based working
// ids, parent == self marks the root) and any within-level tiebreak ranks.
inline ReversedTrie assemble_trie(const std::vector<std::uint32_t>& parent,
                                  const std::vector<Character>& label,
                                  const std::vector<std::uint64_t>& tie) {
    const std::uint32_t n = static_cast<std::uint32_t>(parent.size());
    // depths via repeated resolution (parents may appear in any order)
    std::vector<std::uint32_t> depths(n, std::numeric_limits<std::uint32_t>::max());
    for (std::uint32_t i = 0; i < n; ++i) {
        if (depths[i] != std::numeric_limits<std::uint32_t>::max()) continue;
        std::vector<std::uint32_t> chain;
        std::uint32_t x = i;
        while (depths[x] == std::numeric_limits<std::uint32_t>::max() && parent[x] != x) {
            chain.push_back(x);
            x = parent[x];
        }
        std::uint32_t d = (parent[x] == x) ? 0 : depths[x];
        while (!chain.empty()) {
            depths[chain.back()] = ++d;
            chain.pop_back();
        }
        if (parent[i] == i) depths[i] = 0;
    }
    const auto canon = detail::canonical_order(depths, tie);
    ReversedTrie t;
    t.nodes.resize(n + 1);
    for (std::uint32_t i = 0; i < n; ++i) {
        ReversedTrie::Node& nd = t.nodes[canon[i]];
        nd.depth = depths[i];
        if (parent[i] == i) {
            nd.parent = 0;
            t.root = canon[i];
        } else {
            nd.parent = canon[parent[i]];
            nd.label = label[i];
        }
    }
    assert(t.root == n);
    return t;
}

struct TrieParseResult {
    ReversedTrie trie;
    std::vector<std::pair<std::string, std::uint32_t>> id_map;  // external -> canonical
};

/**
 * Parses the trie text format: one node per line, `<id> <parent_id> <label>`
 * for ordinary nodes and `<id> -` for the root.  External ids are arbitrary
 * unique tokens; within a level, canonical ids follow ascending external id
 * (numeric when every id parses as a decimal integer, lexicographic
 * otherwise).  Rejects multiple roots, unknown parents, cycles, and duplicate
 * child labels in the forward (root-to-leaf) orientation.
 */
inline TrieParseResult parse_trie(const std::string& text) {
    struct Raw {
        std::string id, parent;
        Character label = 0;
        bool is_root = false;
    };
    std::vector<Raw> raws;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty()) continue;
        Raw r;
        r.id = tok[0];
        if (tok.size() == 2 && tok[1] == "-") {
            r.is_root = true;
        } else if (tok.size() == 3) {
            r.parent = tok[1];
            try {
                std::size_t used = 0;
                unsigned long long v = std::stoull(tok[2], &used);
                if (used != tok[2].size() || v > std::numeric_limits<Character>::max())
                    throw std::invalid_argument("");
                r.label = static_cast<Character>(v);
            } catch (...) {
                throw std::invalid_argument("parse_trie: bad label at line " +
                                            std::to_string(lineno));
            }
        } else {
            throw std::invalid_argument("parse_trie: malformed line " +
                                        std::to_string(lineno));
        }
        raws.push_back(std::move(r));
    }
    if (raws.empty()) throw std::invalid_argument("parse_trie: empty document");

    std::unordered_map<std::string, std::uint32_t> by_ext;
    for (std::uint32_t i = 0; i < raws.size(); ++i)
        if (!by_ext.emplace(raws[i].id, i).second)
            throw std::invalid_argument("parse_trie: duplicate id " + raws[i].id);

    std::uint32_t roots = 0;
    std::vector<std::uint32_t> parent(raws.size());
    std::vector<Character> label(raws.size());
    for (std::uint32_t i = 0; i < raws.size(); ++i) {
        if (raws[i].is_root) {
            ++roots;
            parent[i] = i;
        } else {
            auto it = by_ext.find(raws[i].parent);
            if (it == by_ext.end())
                throw std::invalid_argument("parse_trie: unknown parent " + raws[i].parent);
            parent[i] = it->second;
            label[i] = raws[i].label;
        }
    }
    if (roots != 1) throw std::invalid_argument("parse_trie: need exactly one root");

    // reachability from the root doubles as the cycle check; depths fall out
    std::vector<std::uint32_t> depths(raws.size(), 0);
    {
        std::vector<std::vector<std::uint32_t>> kids(raws.size());
        std::uint32_t root = 0;
        for (std::uint32_t i = 0; i < raws.size(); ++i) {
            if (parent[i] == i) root = i;
            else kids[parent[i]].push_back(i);
        }
        std::vector<char> seen(raws.size(), 0);
        std::vector<std::uint32_t> stack{root};
        std::size_t reached = 0;
        while (!stack.empty()) {
            const std::uint32_t x = stack.back();
            stack.pop_back();
            if (seen[x]) continue;
            seen[x] = 1;
            ++reached;
            for (std::uint32_t c : kids[x]) {
                depths[c] = depths[x] + 1;
                stack.push_back(c);
            }
        }
        if (reached != raws.size())
            throw std::invalid_argument("parse_trie: cycle or disconnected node");
        // trie property: forward children of one node carry distinct labels
        for (std::uint32_t i = 0; i < raws.size(); ++i) {
            std::vector<Character> ls;
            for (std::uint32_t c : kids[i]) ls.push_back(label[c]);
            std::sort(ls.begin(), ls.end());
            if (std::adjacent_find(ls.begin(), ls.end()) != ls.end())
                throw std::invalid_argument("parse_trie: duplicate child label under " +
                                            raws[i].id);
        }
    }

    // tiebreak: numeric when all ids are plain decimal integers
    bool all_numeric = true;
    std::vector<std::uint64_t> numval(raws.size(), 0);
    for (std::uint32_t i = 0; i < raws.size() && all_numeric; ++i) {
        const std::string& id = raws[i].id;
        try {
            std::size_t used = 0;
            numval[i] = std::stoull(id, &used);
            if (used != id.size()) all_numeric = false;
        } catch (...) {
            all_numeric = false;
        }
    }
    std::vector<std::uint64_t> tie(raws.size());
    if (all_numeric) {
        tie = numval;
    } else {
        std::vector<std::uint32_t> lex(raws.size());
        for (std::uint32_t i = 0; i < raws.size(); ++i) lex[i] = i;
        std::sort(lex.begin(), lex.end(), [&](std::uint32_t a, std::uint32_t b) {
            return raws[a].id < raws[b].id;
        });
        for (std::uint32_t k = 0; k < lex.size(); ++k) tie[lex[k]] = k;
    }

    const auto canon = detail::canonical_order(depths, tie);
    TrieParseResult result;
    result.trie.nodes.resize(raws.size() + 1);
    for (std::uint32_t i = 0; i < raws.size(); ++i) {
        ReversedTrie::Node& nd = result.trie.nodes[canon[i]];
        nd.depth = depths[i];
        if (parent[i] == i) {
            nd.parent = 0;
            result.trie.root = canon[i];
        } else {
            nd.parent = canon[parent[i]];
            nd.label = label[i];
        }
        result.id_map.emplace_back(raws[i].id, canon[i]);
    }
    std::sort(result.id_map.begin(), result.id_map.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return result;
}

// na/cnt rows follow from the parent's row, so one pass in depth order (ids
// descending) fills everything; chain lifting goes over na links of each
// node's own label.
inline void prepare(ReversedTrie& t) {
    const std::uint32_t n = t.size();
    std::vector<Character> labels;
    for (std::uint32_t x = 1; x <= n; ++x)
        if (x != t.root) labels.push_back(t.nodes[x].label);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    t.alphabet = std::move(labels);
    const std::uint32_t sig = t.sigma();

    t.label_rank_of.assign(n + 1, 0);
    for (std::uint32_t x = 1; x <= n; ++x)
        if (x != t.root) t.label_rank_of[x] = t.rank_of(t.nodes[x].label);

    t.na.assign(static_cast<std::size_t>(n + 1) * sig, t.root);
    t.cnt.assign(static_cast<std::size_t>(n + 1) * sig, 0);
    for (std::uint32_t x = n; x >= 1; --x) {  // descending id = ascending depth
        if (x == t.root) continue;
        const std::uint32_t p = t.nodes[x].parent;
        for (std::uint32_t r = 0; r < sig; ++r) {
            std::uint32_t v = (p == t.root) ? t.root
                              : (t.label_rank_of[p] == r ? p : t.na_at(p, r));
            t.na[static_cast<std::size_t>(x) * sig + r] = v;
            t.cnt[static_cast<std::size_t>(x) * sig + r] =
                (p == t.root ? 0 : t.cnt_at(p, r)) ;
        }
        // cnt counts a-edges on the root path of x, x's own edge included
        t.cnt[static_cast<std::size_t>(x) * sig + t.label_rank_of[x]] += 1;
        if (x == 1) break;
    }
    // cnt recurrence above used parent's final row, which is only valid if
    // parents were processed first -- ids descend with depth, so they were.

    std::uint32_t maxd = t.height();
    std::uint32_t levels = 1;
    while ((1u << levels) <= std::max<std::uint32_t>(maxd, 1)) ++levels;
    t.up.assign(levels, std::vector<std::uint32_t>(n + 1, t.root));
    for (std::uint32_t x = 1; x <= n; ++x)
        t.up[0][x] = (x == t.root) ? t.root : t.nodes[x].parent;
    for (std::uint32_t k = 1; k < levels; ++k)
        for (std::uint32_t x = 1; x <= n; ++x) t.up[k][x] = t.up[k - 1][t.up[k - 1][x]];

    t.chain_up.assign(levels, std::vector<std::uint32_t>(n + 1, t.root));
    for (std::uint32_t x = 1; x <= n; ++x)
        t.chain_up[0][x] = (x == t.root) ? t.root : t.na_at(x, t.label_rank_of[x]);
    for (std::uint32_t k = 1; k < levels; ++k)
        for (std::uint32_t x = 1; x <= n; ++x)
            t.chain_up[k][x] = t.chain_up[k - 1][t.chain_up[k - 1][x]];

    t.prepared = true;
}

inline std::uint32_t level_anc(const ReversedTrie& t, std::uint32_t x, std::uint32_t j) {
    if (j > t.depth(x)) throw std::out_of_range("level_anc: j exceeds depth");
    for (std::uint32_t k = 0; j != 0; ++k, j >>= 1)
        if (j & 1u) x = t.up[k][x];
    return x;
}

namespace detail {
inline std::uint32_t chain_jump(const ReversedTrie& t, std::uint32_t x, std::uint32_t k) {
    for (std::uint32_t b = 0; k != 0; ++b, k >>= 1)
        if (k & 1u) x = t.chain_up[b][x];
    return x;
}
}  // namespace detail

/**
 * PD(str(node i))[l] in O(sigma log N): with z' the (l-1)-th ancestor and b
 * the label of the edge above it, the answer is the smallest depth gap to a
 * <=-b labelled edge strictly below z'.  Per label, the shallowest such edge
 * is reached by jumping along the same-label predecessor chain; counts tell
 * how many occurrences lie below z'.
 */
inline std::uint32_t pd_access_trie(const ReversedTrie& t, std::uint32_t i,
                                    std::uint32_t l) {
    assert(t.prepared);
    if (l < 1 || l > t.depth(i)) throw std::out_of_range("pd_access_trie: bad position");
    const std::uint32_t x = i;
    const std::uint32_t zp = level_anc(t, x, l - 1);
    const Character b = t.nodes[zp].label;  // zp is non-root since depth(zp) >= 1
    std::uint32_t best = 0;
    for (std::uint32_t r = 0; r < t.sigma() && t.alphabet[r] <= b; ++r) {
        const std::uint32_t below = t.cnt_at(x, r) - t.cnt_at(zp, r);
        if (below == 0) continue;
        std::uint32_t start = (t.label_rank_of[x] == r && x != t.root) ? x : t.na_at(x, r);
        const std::uint32_t y = detail::chain_jump(t, start, below - 1);
        const std::uint32_t d = t.depth(y) - t.depth(zp);
        if (best == 0 || d < best) best = d;
    }
    return best;
}

/**
 * FP-trie: quotient of the reversed trie identifying nodes whose path strings
 * share one FP encoding.  Node 0 is a synthetic root; every other node keeps
 * its member class (sorted T ids), its id (= min member, the representative),
 * and the representative's front-pointer index array I.
 */
struct FpTrie {
    struct Node {
        std::uint32_t id = 0;      // representative = min member
        std::uint32_t parent = 0;  // index of the FP parent (0 = root)
        std::uint32_t fp_label = 0;
        std::uint32_t depth = 0;
        std::vector<std::uint32_t> members;  // ascending T ids
        std::vector<std::uint32_t> I;        // ascending front pointers, local positions
    };

    std::vector<Node> nodes;                 // [0] = root
    std::vector<std::uint32_t> t_to_fp;      // T id -> node index
    std::unordered_map<std::uint32_t, std::uint32_t> id_to_index;
    std::vector<std::vector<std::uint32_t>> up;  // level-ancestor lifting over indices

    std::uint32_t size() const { return static_cast<std::uint32_t>(nodes.size()) - 1; }
    std::uint32_t depth(std::uint32_t idx) const { return nodes[idx].depth; }

    std::uint32_t index_of_id(std::uint32_t id) const {
        auto it = id_to_index.find(id);
        assert(it != id_to_index.end());
        return it->second;
    }

    std::uint32_t level_anc_fp(std::uint32_t idx, std::uint32_t j) const {
        assert(j <= nodes[idx].depth);
        for (std::uint32_t k = 0; j != 0; ++k, j >>= 1)
            if (j & 1u) idx = up[k][idx];
        return idx;
    }
};

/**
 * One depth-first traversal with a sliding PD window per path: descending to
 * x prepends x's edge label, and the number of entries that resolves is the
 * FP value of x.  Children of an FP node merge iff their FP values agree.
 * The resolved entries double as the I array of the class created at x.
 */
inline FpTrie build_fp_trie(const ReversedTrie& t) {
    const std::uint32_t n = t.size();
    FpTrie f;
    f.nodes.emplace_back();  // root
    f.t_to_fp.assign(n + 1, 0);

    std::vector<std::vector<std::uint32_t>> kids(n + 1);
    for (std::uint32_t x = 1; x <= n; ++x)
        if (x != t.root) kids[t.nodes[x].parent].push_back(x);
    for (auto& k : kids) std::sort(k.begin(), k.end());

    struct Frame {
        std::uint32_t node;
        std::uint32_t next_child = 0;
        std::vector<SlidingPdState::Entry> resolved;  // for undo
    };
    SlidingPdState state;
    std::vector<Frame> stack;
    stack.push_back({t.root});
    // fp child lookup per FP node
    std::vector<LabelMap> fp_children(1);

    while (!stack.empty()) {
        Frame& fr = stack.back();
        if (fr.next_child < kids[fr.node].size()) {
            const std::uint32_t c = kids[fr.node][fr.next_child++];
            state.prepend(c, t.nodes[c].label);
            Frame child_frame{c};
            child_frame.resolved = state.resolved_last;

            const std::uint32_t fp_value =
                static_cast<std::uint32_t>(child_frame.resolved.size());
            const std::uint32_t fp_parent = f.t_to_fp[fr.node];
            std::uint32_t fp_idx = fp_children[fp_parent].find(fp_value);
            if (fp_idx == kNoNode) {
                fp_idx = static_cast<std::uint32_t>(f.nodes.size());
                FpTrie::Node nd;
                nd.parent = fp_parent;
                nd.fp_label = fp_value;
                nd.depth = f.nodes[fp_parent].depth + 1;
                for (const auto& e : child_frame.resolved)
                    nd.I.push_back(t.depth(c) - t.depth(static_cast<std::uint32_t>(e.key)) + 1);
                f.nodes.push_back(std::move(nd));
                fp_children.emplace_back();
                fp_children[fp_parent].insert(fp_value, fp_idx);
            }
            f.nodes[fp_idx].members.push_back(c);
            f.t_to_fp[c] = fp_idx;
            stack.push_back(std::move(child_frame));
        } else {
            if (fr.node != t.root) state.undo(fr.resolved);
            stack.pop_back();
        }
    }

    for (std::uint32_t v = 1; v < f.nodes.size(); ++v) {
        auto& m = f.nodes[v].members;
        std::sort(m.begin(), m.end());
        f.nodes[v].id = m.front();
        f.id_to_index.emplace(f.nodes[v].id, v);
    }

    // level-ancestor lifting over FP nodes
    std::uint32_t maxd = 0;
    for (const auto& nd : f.nodes) maxd = std::max(maxd, nd.depth);
    std::uint32_t levels = 1;
    while ((1u << levels) <= std::max<std::uint32_t>(maxd, 1)) ++levels;
    f.up.assign(levels, std::vector<std::uint32_t>(f.nodes.size(), 0));
    for (std::uint32_t v = 1; v < f.nodes.size(); ++v) f.up[0][v] = f.nodes[v].parent;
    for (std::uint32_t k = 1; k < levels; ++k)
        for (std::uint32_t v = 0; v < f.nodes.size(); ++v)
            f.up[k][v] = f.up[k - 1][f.up[k - 1][v]];
    return f;
}

}  // namespace cph
