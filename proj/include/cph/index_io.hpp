#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cph_string.hpp"
#include "cph_trie.hpp"
#include "encodings.hpp"
#include "trie_core.hpp"

namespace cph {

// Versioned text format, canonical field order and separators so that
// load + re-serialize is byte-identical.  Children maps, preorder intervals,
// na/cnt and all jump tables are derived data and are rebuilt on load.
//
//   cph-index v1
//   kind string-cph            | kind trie-cph
//   text <n>                   | trie <N>
//   <chars...>                 |   <id> <parent|0> <label|->   (ascending id)
//   heap <count>               | fptrie <N'>
//   <pos> <parent> <edge> <mrp>|   <id> <fp_parent_id|0> <fp_label> <|C|> <members> <|I|> <I>
//   end                        | heap <N'>, then nodes as left, then end

namespace detail {

inline void write_heap(std::ostringstream& out, const std::vector<CphNode>& nodes) {
    out << "heap " << nodes.size() - 1 << "\n";
    for (std::size_t v = 1; v < nodes.size(); ++v)
        out << nodes[v].position << ' ' << nodes[v].parent << ' ' << nodes[v].edge_label
            << ' ' << nodes[v].mrp << "\n";
}

struct Reader {
    std::istringstream in;
    std::string tok;

    explicit Reader(const std::string& text) : in(text) {}

    std::string next() {
        if (!(in >> tok)) throw std::invalid_argument("index file: unexpected end");
        return tok;
    }
    std::uint64_t next_u64() {
        const std::string t = next();
        try {
            std::size_t used = 0;
            const std::uint64_t v = std::stoull(t, &used);
            if (used != t.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw std::invalid_argument("index file: expected integer, got '" + t + "'");
        }
    }
    std::uint32_t next_u32() {
        const std::uint64_t v = next_u64();
        if (v > 0xFFFFFFFFull) throw std::invalid_argument("index file: value out of range");
        return static_cast<std::uint32_t>(v);
    }
    void expect(const std::string& want) {
        if (next() != want)
            throw std::invalid_argument("index file: expected '" + want + "', got '" + tok +
                                        "'");
    }
};

inline void read_heap(Reader& r, std::vector<CphNode>& nodes, std::size_t count) {
    nodes.clear();
    nodes.reserve(count + 1);
    nodes.emplace_back();
    for (std::size_t k = 0; k < count; ++k) {
        CphNode nd;
        nd.position = r.next_u32();
        nd.parent = r.next_u32();
        nd.edge_label = r.next_u32();
        nd.mrp = r.next_u32();
        nodes.push_back(nd);
    }
    for (std::uint32_t v = 1; v < nodes.size(); ++v) {
        if (nodes[v].parent >= v)
            throw std::invalid_argument("index file: heap parents must precede children");
        if (nodes[v].mrp >= nodes.size())
            throw std::invalid_argument("index file: mrp out of range");
        nodes[v].depth = nodes[nodes[v].parent].depth + 1;
        if (!nodes[nodes[v].parent].children.insert(nodes[v].edge_label, v))
            throw std::invalid_argument("index file: duplicate heap edge");
    }
}

}  // namespace detail

inline std::string serialize_string_index(const Cph& cph) {
    std::ostringstream out;
    out << "cph-index v1\n";
    out << "kind string-cph\n";
    out << "text " << cph.text.size() << "\n";
    for (std::size_t i = 0; i < cph.text.size(); ++i)
        out << cph.text[i] << (i + 1 == cph.text.size() ? "" : " ");
    out << "\n";
    detail::write_heap(out, cph.nodes);
    out << "end\n";
    return out.str();
}

inline std::string serialize_trie_index(const TrieIndex& idx) {
    std::ostringstream out;
    out << "cph-index v1\n";
    out << "kind trie-cph\n";
    out << "trie " << idx.trie.size() << "\n";
    for (std::uint32_t x = 1; x <= idx.trie.size(); ++x) {
        out << x << ' ' << idx.trie.nodes[x].parent << ' ';
        if (x == idx.trie.root) out << "-";
        else out << idx.trie.nodes[x].label;
        out << "\n";
    }
    out << "fptrie " << idx.fp.size() << "\n";
    // ascending id
    {
        std::vector<std::uint32_t> order;
        for (std::uint32_t v = 1; v <= idx.fp.size(); ++v) order.push_back(v);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return idx.fp.nodes[a].id < idx.fp.nodes[b].id;
        });
        for (const std::uint32_t v : order) {
            const auto& nd = idx.fp.nodes[v];
            out << nd.id << ' ' << (nd.parent == 0 ? 0 : idx.fp.nodes[nd.parent].id) << ' '
                << nd.fp_label << ' ' << nd.members.size();
            for (const std::uint32_t m : nd.members) out << ' ' << m;
            out << ' ' << nd.I.size();
            for (const std::uint32_t i : nd.I) out << ' ' << i;
            out << "\n";
        }
    }
    detail::write_heap(out, idx.heap.nodes);
    out << "end\n";
    return out.str();
}

inline Cph load_string_index_body(detail::Reader& r) {
    Cph cph;
    r.expect("text");
    const std::uint32_t n = r.next_u32();
    if (n == 0) throw std::invalid_argument("index file: empty text");
    cph.text.resize(n);
    for (auto& c : cph.text) c = r.next_u32();
    cph.pd = pd_encode(cph.text);
    cph.sigma = detail::count_distinct(cph.text);
    r.expect("heap");
    const std::uint32_t count = r.next_u32();
    if (count != n) throw std::invalid_argument("index file: heap size must equal text size");
    detail::read_heap(r, cph.nodes, count);
    r.expect("end");
    cph.pos_to_node.assign(n + 1, kNoNode);
    for (std::uint32_t v = 1; v < cph.nodes.size(); ++v) {
        const std::uint32_t pos = cph.nodes[v].position;
        if (pos < 1 || pos > n || cph.pos_to_node[pos] != kNoNode)
            throw std::invalid_argument("index file: positions must be a bijection");
        cph.pos_to_node[pos] = v;
        cph.height = std::max(cph.height, cph.nodes[v].depth);
    }
    cph.has_mrp = true;
    finalize(cph);
    return cph;
}

inline TrieIndex load_trie_index_body(detail::Reader& r) {
    TrieIndex idx;
    r.expect("trie");
    const std::uint32_t n = r.next_u32();
    if (n == 0) throw std::invalid_argument("index file: empty trie");
    idx.trie.nodes.resize(n + 1);
    idx.trie.root = n;
    for (std::uint32_t k = 1; k <= n; ++k) {
        const std::uint32_t id = r.next_u32();
        if (id != k) throw std::invalid_argument("index file: trie ids must be 1..N in order");
        const std::uint32_t parent = r.next_u32();
        const std::string lab = r.next();
        if (lab == "-") {
            if (id != n || parent != 0)
                throw std::invalid_argument("index file: root must be node N with parent 0");
        } else {
            idx.trie.nodes[id].parent = parent;
            try {
                std::size_t used = 0;
                const unsigned long long v = std::stoull(lab, &used);
                if (used != lab.size()) throw std::invalid_argument("");
                idx.trie.nodes[id].label = static_cast<Character>(v);
            } catch (...) {
                throw std::invalid_argument("index file: bad trie label '" + lab + "'");
            }
            if (parent <= id || parent > n)
                throw std::invalid_argument("index file: trie parents must have larger ids");
            idx.trie.nodes[id].depth = 0;  // set below
        }
    }
    for (std::uint32_t id = n; id >= 1; --id) {  // parents first
        if (id != idx.trie.root)
            idx.trie.nodes[id].depth = idx.trie.nodes[idx.trie.nodes[id].parent].depth + 1;
        if (id == 1) break;
    }
    prepare(idx.trie);

    r.expect("fptrie");
    const std::uint32_t nprime = r.next_u32();
    idx.fp.nodes.clear();
    idx.fp.nodes.emplace_back();
    idx.fp.t_to_fp.assign(n + 1, 0);
    struct Pending {
        std::uint32_t parent_id;
        std::uint32_t index;
    };
    std::vector<Pending> pend;
    for (std::uint32_t k = 1; k <= nprime; ++k) {
        FpTrie::Node nd;
        nd.id = r.next_u32();
        const std::uint32_t parent_id = r.next_u32();
        nd.fp_label = r.next_u32();
        const std::uint32_t mcount = r.next_u32();
        for (std::uint32_t j = 0; j < mcount; ++j) nd.members.push_back(r.next_u32());
        const std::uint32_t icount = r.next_u32();
        for (std::uint32_t j = 0; j < icount; ++j) nd.I.push_back(r.next_u32());
        if (nd.members.empty() || nd.members.front() != nd.id)
            throw std::invalid_argument("index file: FP node id must be its least member");
        const std::uint32_t index = static_cast<std::uint32_t>(idx.fp.nodes.size());
        idx.fp.nodes.push_back(std::move(nd));
        idx.fp.id_to_index.emplace(idx.fp.nodes.back().id, index);
        pend.push_back({parent_id, index});
    }
    for (const auto& pe : pend) {
        auto& nd = idx.fp.nodes[pe.index];
        if (pe.parent_id == 0) {
            nd.parent = 0;
        } else {
            auto it = idx.fp.id_to_index.find(pe.parent_id);
            if (it == idx.fp.id_to_index.end())
                throw std::invalid_argument("index file: unknown FP parent id");
            nd.parent = it->second;
        }
        for (const std::uint32_t m : nd.members) {
            if (m < 1 || m > n) throw std::invalid_argument("index file: FP member out of range");
            idx.fp.t_to_fp[m] = pe.index;
        }
    }
    // parents carry larger ids (bottom-up level order), so depths follow in
    // descending id order
    {
        std::vector<std::uint32_t> by_id;
        for (std::uint32_t v = 1; v < idx.fp.nodes.size(); ++v) by_id.push_back(v);
        std::sort(by_id.begin(), by_id.end(), [&](std::uint32_t a, std::uint32_t b) {
            return idx.fp.nodes[a].id > idx.fp.nodes[b].id;
        });
        for (const std::uint32_t v : by_id) {
            const std::uint32_t p = idx.fp.nodes[v].parent;
            if (p != 0 && idx.fp.nodes[p].id <= idx.fp.nodes[v].id)
                throw std::invalid_argument("index file: FP parent id must exceed child id");
            idx.fp.nodes[v].depth = idx.fp.nodes[p].depth + 1;
        }
    }
    {
        std::uint32_t maxd = 0;
        for (const auto& nd : idx.fp.nodes) maxd = std::max(maxd, nd.depth);
        std::uint32_t levels = 1;
        while ((1u << levels) <= std::max<std::uint32_t>(maxd, 1)) ++levels;
        idx.fp.up.assign(levels, std::vector<std::uint32_t>(idx.fp.nodes.size(), 0));
        for (std::uint32_t v = 1; v < idx.fp.nodes.size(); ++v)
            idx.fp.up[0][v] = idx.fp.nodes[v].parent;
        for (std::uint32_t k = 1; k < levels; ++k)
            for (std::uint32_t v = 0; v < idx.fp.nodes.size(); ++v)
                idx.fp.up[k][v] = idx.fp.up[k - 1][idx.fp.up[k - 1][v]];
    }

    r.expect("heap");
    const std::uint32_t count = r.next_u32();
    if (count != nprime)
        throw std::invalid_argument("index file: heap size must equal FP node count");
    detail::read_heap(r, idx.heap.nodes, count);
    r.expect("end");
    idx.heap.sigma = idx.trie.sigma();
    idx.heap.node_of_fp.assign(nprime + 1, 0);
    for (std::uint32_t v = 1; v < idx.heap.nodes.size(); ++v) {
        const std::uint32_t fp_idx = idx.fp.index_of_id(idx.heap.nodes[v].position);
        if (idx.heap.node_of_fp[fp_idx] != 0)
            throw std::invalid_argument("index file: duplicate heap position");
        idx.heap.node_of_fp[fp_idx] = v;
        idx.heap.height = std::max(idx.heap.height, idx.heap.nodes[v].depth);
    }
    idx.heap.has_mrp = true;
    finalize(idx.heap);
    return idx;
}

using LoadedIndex = std::variant<Cph, TrieIndex>;

inline LoadedIndex load_index(const std::string& text) {
    detail::Reader r(text);
    r.expect("cph-index");
    r.expect("v1");
    r.expect("kind");
    const std::string kind = r.next();
    if (kind == "string-cph") return load_string_index_body(r);
    if (kind == "trie-cph") return load_trie_index_body(r);
    throw std::invalid_argument("index file: unknown kind '" + kind + "'");
}

}  // namespace cph
