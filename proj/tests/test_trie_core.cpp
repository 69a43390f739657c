#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "cph/oracle.hpp"
#include "cph/trie_core.hpp"
#include "test_util.hpp"

using namespace cph;

namespace {

const char* kChainDoc =
    "n1 n2 5\n"
    "n2 n3 3\n"
    "n3 n4 4\n"
    "n4 n5 3\n"
    "n5 -\n";

std::uint32_t parent_walk(const ReversedTrie& t, std::uint32_t x, std::uint32_t j) {
    while (j--) x = t.nodes[x].parent;
    return x;
}

}  // namespace

TEST_CASE("parse_trie canonical ids") {
    SECTION("two-node document") {
        const TrieParseResult r = parse_trie("r -\nc r 5\n");
        CHECK(r.trie.size() == 2);
        CHECK(r.trie.root == 2);
        CHECK(r.trie.nodes[1].label == 5);
        CHECK(r.trie.nodes[1].parent == 2);
    }
    SECTION("five-node chain spelling 5343") {
        const TrieParseResult r = parse_trie(kChainDoc);
        REQUIRE(r.trie.size() == 5);
        CHECK(r.trie.root == 5);
        CHECK(r.trie.path_string(1) == seq("5343"));
        // leaf-to-root external order n1..n5 maps to 1..5
        for (std::uint32_t i = 0; i < 5; ++i) {
            CHECK(r.id_map[i].first == "n" + std::to_string(i + 1));
            CHECK(r.id_map[i].second == i + 1);
        }
    }
    SECTION("numeric external ids order numerically") {
        const TrieParseResult r = parse_trie("10 3 1\n2 3 2\n3 -\n");
        // both children at depth 1: 2 before 10
        for (const auto& [ext, canon] : r.id_map) {
            if (ext == "2") CHECK(canon == 1);
            if (ext == "10") CHECK(canon == 2);
        }
    }
    SECTION("rejections") {
        CHECK_THROWS_AS(parse_trie(""), std::invalid_argument);
        CHECK_THROWS_AS(parse_trie("a -\nb -\n"), std::invalid_argument);           // two roots
        CHECK_THROWS_AS(parse_trie("a b 1\nb a 1\nr -\n"), std::invalid_argument);  // cycle
        CHECK_THROWS_AS(parse_trie("r -\nx r 1\ny r 1\n"), std::invalid_argument);  // dup labels
        CHECK_THROWS_AS(parse_trie("r -\nx q 1\n"), std::invalid_argument);  // unknown parent
        CHECK_THROWS_AS(parse_trie("r -\nx r\n"), std::invalid_argument);    // malformed
        CHECK_THROWS_AS(parse_trie("r -\nr r 1\n"), std::invalid_argument);  // duplicate id
    }
}

TEST_CASE("level_anc") {
    TrieParseResult r = parse_trie(kChainDoc);
    prepare(r.trie);
    const ReversedTrie& t = r.trie;
    CHECK(level_anc(t, 1, 0) == 1);
    CHECK(level_anc(t, 1, t.depth(1)) == t.root);
    CHECK(level_anc(t, 1, 2) == parent_walk(t, 1, 2));
    CHECK_THROWS_AS(level_anc(t, 3, 5), std::out_of_range);

    GenSpec spec{77, 120, 5, GenFamily::RandomTrie};
    const ReversedTrie rt = generate_trie(spec);
    for (std::uint32_t x = 1; x <= rt.size(); ++x)
        for (std::uint32_t j = 0; j <= rt.depth(x); ++j)
            REQUIRE(level_anc(rt, x, j) == parent_walk(rt, x, j));
}

TEST_CASE("na and cnt tables") {
    TrieParseResult r = parse_trie(kChainDoc);
    prepare(r.trie);
    const ReversedTrie& t = r.trie;
    CHECK(t.cnt_at(1, t.rank_of(3)) == 2);
    CHECK(t.cnt_at(1, t.rank_of(5)) == 1);
    // na of a root child is the root sentinel
    CHECK(t.na_at(4, t.rank_of(3)) == t.root);

    std::mt19937_64 rng(31);
    for (int c = 0; c < 40; ++c) {
        GenSpec spec{rng(), 2 + (std::uint32_t)(rng() % 100), 1 + (std::uint32_t)(rng() % 6),
                     GenFamily::RandomTrie};
        const ReversedTrie rt = generate_trie(spec);
        for (std::uint32_t x = 1; x <= rt.size(); ++x) {
            if (x == rt.root) continue;
            for (std::uint32_t rk = 0; rk < rt.sigma(); ++rk) {
                // oracle: walk proper ancestors
                std::uint32_t want = rt.root;
                for (std::uint32_t y = rt.nodes[x].parent; y != rt.root && y != 0;
                     y = rt.nodes[y].parent) {
                    if (rt.label_rank_of[y] == rk) {
                        want = y;
                        break;
                    }
                }
                REQUIRE(rt.na_at(x, rk) == want);
                std::uint32_t count = 0;
                for (std::uint32_t y = x; y != rt.root; y = rt.nodes[y].parent)
                    if (rt.label_rank_of[y] == rk) ++count;
                REQUIRE(rt.cnt_at(x, rk) == count);
            }
        }
    }
}

TEST_CASE("pd_access_trie on the 5343 chain") {
    TrieParseResult r = parse_trie(kChainDoc);
    prepare(r.trie);
    CHECK(pd_access_trie(r.trie, 1, 4) == 2);
    CHECK(pd_access_trie(r.trie, 1, 1) == 0);
    CHECK(pd_access_trie(r.trie, 1, 3) == 1);
    CHECK_THROWS_AS(pd_access_trie(r.trie, 1, 5), std::out_of_range);
}

TEST_CASE("pd_access_trie equals re-encoding, exhaustive on random tries") {
    std::mt19937_64 rng(32);
    for (int c = 0; c < 40; ++c) {
        GenSpec spec{rng(), 2 + (std::uint32_t)(rng() % 199), 1 + (std::uint32_t)(rng() % 8),
                     GenFamily::RandomTrie};
        const ReversedTrie t = generate_trie(spec);
        for (std::uint32_t x = 1; x <= t.size(); ++x) {
            if (t.depth(x) == 0) continue;
            const PdSequence expect = pd_naive(t.path_string(x));
            for (std::uint32_t l = 1; l <= t.depth(x); ++l)
                REQUIRE(pd_access_trie(t, x, l) == expect.at(l));
        }
    }
}

TEST_CASE("build_fp_trie merges 5343 and 4253") {
    std::string doc = "r -\n";
    const char* a = "3435";  // chain A root-to-leaf edge labels (leaf string 5343)
    const char* b = "3524";  // chain B (leaf string 4253)
    std::string prev = "r";
    for (int i = 0; i < 4; ++i) {
        doc += "a" + std::to_string(i) + " " + prev + " " + a[i] + "\n";
        prev = "a" + std::to_string(i);
    }
    prev = "r";
    for (int i = 0; i < 4; ++i) {
        doc += "b" + std::to_string(i) + " " + prev + " " + b[i] + "\n";
        prev = "b" + std::to_string(i);
    }
    TrieParseResult r = parse_trie(doc);
    prepare(r.trie);
    REQUIRE(r.trie.size() == 9);
    // the two leaves carry ids 1 and 2 and their path strings are the targets
    const Sequence s1 = r.trie.path_string(1);
    const Sequence s2 = r.trie.path_string(2);
    CHECK(((s1 == seq("5343") && s2 == seq("4253")) ||
           (s1 == seq("4253") && s2 == seq("5343"))));

    const FpTrie f = build_fp_trie(r.trie);
    CHECK(f.size() == 4);  // every level merges into one class
    const std::uint32_t leaf_class = f.t_to_fp[1];
    CHECK(f.t_to_fp[2] == leaf_class);
    CHECK(f.nodes[leaf_class].members == std::vector<std::uint32_t>{1, 2});
    CHECK(f.nodes[leaf_class].id == 1);
    // FP path spells 0200 from the leaf class up
    std::vector<std::uint32_t> fp_path;
    for (std::uint32_t v = leaf_class; v != 0; v = f.nodes[v].parent)
        fp_path.push_back(f.nodes[v].fp_label);
    CHECK(fp_path == std::vector<std::uint32_t>{0, 2, 0, 0});
}

TEST_CASE("single chain FP-trie is the chain itself") {
    const ReversedTrie t = chain_trie(seq("53417"));
    const FpTrie f = build_fp_trie(t);
    CHECK(f.size() == t.size() - 1);
    for (std::uint32_t v = 1; v <= f.size(); ++v) CHECK(f.nodes[v].members.size() == 1);
}

TEST_CASE("FP values match fp_encode of path strings") {
    std::mt19937_64 rng(33);
    for (int c = 0; c < 40; ++c) {
        GenSpec spec{rng(), 2 + (std::uint32_t)(rng() % 120), 1 + (std::uint32_t)(rng() % 6),
                     GenFamily::RandomTrie};
        const ReversedTrie t = generate_trie(spec);
        const FpTrie f = build_fp_trie(t);
        CHECK(f.size() <= t.size());
        std::size_t member_total = 0;
        for (std::uint32_t v = 1; v <= f.size(); ++v) {
            member_total += f.nodes[v].members.size();
            const std::uint32_t rep = f.nodes[v].id;
            CHECK(f.nodes[v].members.front() == rep);
            const FpSequence fp_rep = fp_naive(t.path_string(rep));
            CHECK(f.nodes[v].fp_label == fp_rep.at(1));
            // I = front pointers of PD(str(rep))
            CHECK(f.nodes[v].I == fronts_naive(pd_naive(t.path_string(rep))));
            for (const std::uint32_t m : f.nodes[v].members) {
                CHECK(t.depth(m) == f.nodes[v].depth);
                CHECK(fp_naive(t.path_string(m)) == fp_rep);
            }
            // FP path labels spell the FP encoding for every member
            for (const std::uint32_t m : f.nodes[v].members) {
                const FpSequence want = fp_naive(t.path_string(m));
                std::uint32_t w = v;
                for (std::uint32_t j = 1; j <= want.size(); ++j, w = f.nodes[w].parent)
                    REQUIRE(f.nodes[w].fp_label == want.at(j));
            }
        }
        CHECK(member_total == t.size() - 1);  // classes partition non-root nodes
    }
}
