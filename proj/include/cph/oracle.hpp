#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "encodings.hpp"
#include "trie_core.hpp"

namespace cph {

// Reference implementations: every window/path is re-encoded from raw
// characters, independently of the windowed-access shortcuts the indexes use.

inline std::vector<std::uint32_t> brute_match_string(const Sequence& s, const Sequence& p) {
    std::vector<std::uint32_t> out;
    if (p.empty() || p.size() > s.size()) return out;
    const PdSequence pd_p = pd_encode(p);
    for (std::uint32_t i = 1; i + p.size() - 1 <= s.size(); ++i) {
        const Sequence window(s.begin() + (i - 1), s.begin() + (i - 1) + p.size());
        if (pd_encode(window) == pd_p) out.push_back(i);
    }
    return out;
}

inline std::vector<std::uint32_t> brute_match_trie(const ReversedTrie& t, const Sequence& p) {
    std::vector<std::uint32_t> out;
    if (p.empty()) return out;
    const PdSequence pd_p = pd_encode(p);
    for (std::uint32_t i = 1; i <= t.size(); ++i) {
        if (t.depth(i) < p.size()) continue;
        Sequence prefix;
        std::uint32_t x = i;
        while (prefix.size() < p.size()) {
            prefix.push_back(t.nodes[x].label);
            x = t.nodes[x].parent;
        }
        if (pd_encode(prefix) == pd_p) out.push_back(i);
    }
    return out;
}

enum class GenFamily {
    UniformRandom,
    Increasing,
    AllEqual,
    Lemma8,      // size is interpreted as k; binary alphabet
    RandomTrie,
    ChainTrie,   // size nodes = chain over a uniform random string
};

// Identical specs generate identical instances.
struct GenSpec {
    std::uint64_t seed = 0;
    std::uint32_t size = 0;   // n (strings) / N (tries) / k (lemma8)
    std::uint32_t sigma = 2;
    GenFamily family = GenFamily::UniformRandom;
};

inline Sequence lemma8_string(std::uint32_t k) {
    Sequence s;
    for (std::uint32_t j = 0; j <= k; ++j) {
        s.push_back(1);
        for (std::uint32_t r = 0; r < j; ++r) s.push_back(2);
    }
    s.push_back(1);
    return s;
}

inline Sequence generate_sequence(const GenSpec& spec) {
    if (spec.family == GenFamily::Lemma8) return lemma8_string(spec.size);
    if (spec.sigma == 0) throw std::invalid_argument("generate_sequence: sigma must be > 0");
    Sequence s(spec.size);
    switch (spec.family) {
        case GenFamily::UniformRandom: {
            std::mt19937_64 rng(spec.seed);
            std::uniform_int_distribution<std::uint32_t> dist(1, spec.sigma);
            for (auto& c : s) c = dist(rng);
            break;
        }
        case GenFamily::Increasing:
            for (std::uint32_t i = 0; i < spec.size; ++i)
                s[i] = std::min(i + 1, spec.sigma);
            break;
        case GenFamily::AllEqual:
            std::fill(s.begin(), s.end(), 1u);
            break;
        default:
            throw std::invalid_argument("generate_sequence: not a string family");
    }
    return s;
}

// Chain whose leaf-to-root path string is s: canonical ids coincide with
// string positions (leaf = 1), the root is |s|+1.
inline ReversedTrie chain_trie(const Sequence& s) {
    const std::uint32_t n = static_cast<std::uint32_t>(s.size());
    ReversedTrie t;
    t.nodes.resize(n + 2);
    t.root = n + 1;
    for (std::uint32_t i = 1; i <= n; ++i) {
        t.nodes[i].parent = i + 1;
        t.nodes[i].label = s[i - 1];
        t.nodes[i].depth = n - i + 1;
    }
    prepare(t);
    return t;
}

// Each new node attaches to a uniformly drawn existing node with a label
// from [1..sigma]; draws violating the forward trie property (duplicate
// child labels) are rejected and retried.
inline ReversedTrie generate_trie(const GenSpec& spec) {
    if (spec.family == GenFamily::ChainTrie) {
        GenSpec inner = spec;
        inner.family = GenFamily::UniformRandom;
        inner.size = spec.size == 0 ? 0 : spec.size - 1;
        return chain_trie(generate_sequence(inner));
    }
    if (spec.family != GenFamily::RandomTrie)
        throw std::invalid_argument("generate_trie: not a trie family");
    if (spec.sigma == 0) throw std::invalid_argument("generate_trie: sigma must be > 0");
    if (spec.size == 0) throw std::invalid_argument("generate_trie: need at least the root");

    std::mt19937_64 rng(spec.seed);
    const std::uint32_t n = spec.size;
    std::vector<std::uint32_t> parent(n);
    std::vector<Character> label(n);
    std::vector<std::vector<Character>> used(n);
    parent[0] = 0;
    for (std::uint32_t i = 1; i < n; ++i) {
        while (true) {
            std::uniform_int_distribution<std::uint32_t> pick_parent(0, i - 1);
            std::uniform_int_distribution<std::uint32_t> pick_label(1, spec.sigma);
            const std::uint32_t p = pick_parent(rng);
            const Character c = pick_label(rng);
            if (std::find(used[p].begin(), used[p].end(), c) != used[p].end()) continue;
            parent[i] = p;
            label[i] = c;
            used[p].push_back(c);
            break;
        }
    }
    std::vector<std::uint64_t> tie(n);
    for (std::uint32_t i = 0; i < n; ++i) tie[i] = i;
    ReversedTrie t = assemble_trie(parent, label, tie);
    prepare(t);
    return t;
}

}  // namespace cph
