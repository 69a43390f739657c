#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cph/encodings.hpp"
#include "test_util.hpp"

using namespace cph;

namespace {

std::vector<std::uint32_t> u32s(std::initializer_list<std::uint32_t> v) { return v; }

PdSequence pd_of(const std::string& digits) {
    PdSequence pd;
    for (const char c : digits) pd.values.push_back(static_cast<std::uint32_t>(c - '0'));
    return pd;
}

FpSequence fp_of(const std::string& digits) {
    FpSequence fp;
    for (const char c : digits) fp.values.push_back(static_cast<std::uint32_t>(c - '0'));
    return fp;
}

}  // namespace

TEST_CASE("pd_encode on fixed inputs") {
    CHECK(pd_encode(seq("316486759")) == pd_of("001212141"));
    CHECK(pd_encode(seq("713286945")) == pd_of("001212141"));
    CHECK(pd_encode({}) == PdSequence{});
    CHECK(pd_encode(seq("123")) == pd_of("011"));
}

TEST_CASE("pd_encode matches the definition scan") {
    std::mt19937_64 rng(7);
    for (int c = 0; c < 200; ++c) {
        const Sequence s = random_seq(rng, 1 + rng() % 80, 1 + rng() % 8);
        CHECK(pd_encode(s) == pd_naive(s));
    }
}

TEST_CASE("pd prefix consistency") {
    std::mt19937_64 rng(8);
    for (int c = 0; c < 100; ++c) {
        const Sequence s = random_seq(rng, 2 + rng() % 60, 1 + rng() % 6);
        const PdSequence pd = pd_encode(s);
        const std::size_t l = 1 + rng() % s.size();
        const Sequence prefix(s.begin(), s.begin() + l);
        const PdSequence pdp = pd_encode(prefix);
        for (std::size_t i = 1; i <= l; ++i) CHECK(pd.at(i) == pdp.at(i));
    }
}

TEST_CASE("front_pointers") {
    CHECK(front_pointers(pd_of("01214501")) == u32s({2, 3, 5, 6}));
    CHECK(front_pointers(pd_of("0")) == u32s({}));
    CHECK(front_pointers(pd_of("011")) == u32s({2}));
}

TEST_CASE("pd_prepend resolves front pointers of the grown window") {
    SlidingPdState st;
    // window "64" of 164
    st.prepend(3, 4);
    st.prepend(2, 6);
    st.prepend(1, 1);
    REQUIRE(st.resolved_last.size() == 2);
    CHECK(st.resolved_last[0].key == 2);
    CHECK(st.resolved_last[1].key == 3);

    SlidingPdState st2;  // window "4" of 64, prepending 6 resolves nothing
    st2.prepend(2, 4);
    st2.prepend(1, 6);
    CHECK(st2.resolved_last.empty());

    SlidingPdState st3;  // empty window
    st3.prepend(5, 9);
    CHECK(st3.resolved_last.empty());
    REQUIRE(st3.pending.size() == 1);
    CHECK(st3.pending[0].key == 5);
}

TEST_CASE("pd_prepend undo restores the pending list") {
    std::mt19937_64 rng(404);
    const Sequence s = random_seq(rng, 40, 4);
    SlidingPdState st;
    for (std::uint32_t i = static_cast<std::uint32_t>(s.size()); i >= 21; --i)
        st.prepend(i, s[i - 1]);
    const auto saved = st.pending;
    st.prepend(20, s[19]);
    const auto resolved = st.resolved_last;
    st.undo(resolved);
    CHECK(st.pending == saved);
}

TEST_CASE("fp_encode on fixed inputs") {
    CHECK(fp_encode(seq("3164")) == fp_of("0200"));
    CHECK(fp_encode(seq("5343")) == fp_of("0200"));
    CHECK(fp_encode({}) == FpSequence{});
}

TEST_CASE("fp_encode matches per-suffix recomputation") {
    std::mt19937_64 rng(9);
    for (int c = 0; c < 120; ++c) {
        const Sequence s = random_seq(rng, 1 + rng() % 50, 1 + rng() % 6);
        CHECK(fp_encode(s) == fp_naive(s));
    }
}

TEST_CASE("build_cartesian_tree") {
    SECTION("root is the leftmost minimum") {
        const CartesianTree t = build_cartesian_tree(seq("316486759"));
        CHECK(t.root == 2);
    }
    SECTION("single character") {
        const CartesianTree t = build_cartesian_tree(seq("7"));
        CHECK(t.root == 1);
        CHECK(t.left[1] == 0);
        CHECK(t.right[1] == 0);
    }
    SECTION("213") {
        const CartesianTree t = build_cartesian_tree(seq("213"));
        CHECK(t.root == 2);
        CHECK(t.left[2] == 1);
        CHECK(t.right[2] == 3);
    }
    SECTION("equal values attach rightward") {
        const CartesianTree t = build_cartesian_tree(seq("11"));
        CHECK(t.root == 1);
        CHECK(t.right[1] == 2);
    }
}

TEST_CASE("cartesian tree heap order and in-order positions") {
    std::mt19937_64 rng(11);
    for (int c = 0; c < 60; ++c) {
        const Sequence s = random_seq(rng, 1 + rng() % 40, 1 + rng() % 5);
        const CartesianTree t = build_cartesian_tree(s);
        // parent value <= children; left subtree strictly greater
        for (std::uint32_t i = 1; i <= s.size(); ++i) {
            if (t.left[i]) CHECK(s[i - 1] < s[t.left[i] - 1]);
            if (t.right[i]) CHECK(s[i - 1] <= s[t.right[i] - 1]);
        }
        // in-order yields 1..n
        std::vector<std::uint32_t> inorder;
        std::vector<std::pair<std::uint32_t, bool>> stack{{t.root, false}};
        while (!stack.empty()) {
            auto [v, expanded] = stack.back();
            stack.pop_back();
            if (v == 0) continue;
            if (expanded) {
                inorder.push_back(v);
            } else {
                stack.push_back({t.right[v], false});
                stack.push_back({v, true});
                stack.push_back({t.left[v], false});
            }
        }
        for (std::uint32_t i = 0; i < inorder.size(); ++i) CHECK(inorder[i] == i + 1);
    }
}

TEST_CASE("ct_match") {
    CHECK(ct_match(seq("316486759"), seq("713286945")));
    CHECK(ct_match(seq("12"), seq("12")));
    CHECK_FALSE(ct_match(seq("12"), seq("21")));
    CHECK_FALSE(ct_match(seq("12"), seq("123")));
}

TEST_CASE("equivalences: ct shape, pd, fp") {
    std::mt19937_64 rng(12);
    for (int c = 0; c < 300; ++c) {
        const std::uint32_t n = 1 + rng() % 16;
        const Sequence s1 = random_seq(rng, n, 3);
        const Sequence s2 = random_seq(rng, n, 3);
        const bool pd_eq = pd_encode(s1) == pd_encode(s2);
        CHECK(ct_match(s1, s2) == pd_eq);
        CHECK((fp_encode(s1) == fp_encode(s2)) == pd_eq);
        CHECK((build_cartesian_tree(s1) == build_cartesian_tree(s2)) == pd_eq);
    }
}

TEST_CASE("zero count bounded by distinct values") {
    std::mt19937_64 rng(13);
    for (int c = 0; c < 100; ++c) {
        const Sequence s = random_seq(rng, 1 + rng() % 60, 1 + rng() % 6);
        Sequence d(s);
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        CHECK(zero_positions(pd_encode(s)).size() <= d.size());
    }
}

TEST_CASE("pd_window_access") {
    const PdSequence pd = pd_encode(seq("316486759"));
    SECTION("window starting at 3 equals re-encoding") {
        const PdSequence expect = pd_encode(seq("6486759"));
        for (std::uint32_t j = 1; j <= 7; ++j)
            CHECK(pd_window_access(pd, 3, j) == expect.at(j));
    }
    SECTION("whole-string window") {
        for (std::uint32_t j = 1; j <= 9; ++j) CHECK(pd_window_access(pd, 1, j) == pd.at(j));
    }
    SECTION("first window position is zero") { CHECK(pd_window_access(pd, 4, 1) == 0); }
}

TEST_CASE("pd_window_access equals suffix re-encoding") {
    std::mt19937_64 rng(14);
    for (int c = 0; c < 80; ++c) {
        const Sequence s = random_seq(rng, 1 + rng() % 48, 1 + rng() % 6);
        const PdSequence pd = pd_encode(s);
        for (std::uint32_t i = 1; i <= s.size(); ++i) {
            const Sequence suffix(s.begin() + (i - 1), s.end());
            const PdSequence expect = pd_naive(suffix);
            for (std::uint32_t j = 1; j <= suffix.size(); ++j)
                REQUIRE(pd_window_access(pd, i, j) == expect.at(j));
        }
    }
}

TEST_CASE("dag_from_pd") {
    using E = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
    CHECK(dag_from_pd(pd_of("001212141")).edges ==
          E({{2, 3}, {2, 4}, {4, 5}, {4, 6}, {4, 8}, {6, 7}, {8, 9}}));
    CHECK(dag_from_pd(pd_of("0012")).edges == E({{2, 3}, {2, 4}}));
    CHECK(dag_from_pd(pd_of("0")).edges.empty());
}

TEST_CASE("dag_from_fp") {
    using E = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
    CHECK(dag_from_fp(fp_of("0200")).edges == E({{2, 3}, {2, 4}}));
    CHECK(dag_from_fp(fp_of("0000")).edges.empty());
    CHECK(dag_from_fp(fp_encode(seq("316486759"))) == dag_from_pd(pd_encode(seq("316486759"))));
    FpSequence bad;
    bad.values = {3, 0, 0};  // only two nodes right of position 1
    CHECK_THROWS_AS(dag_from_fp(bad), std::invalid_argument);
}

TEST_CASE("dag equivalence and in-degree properties") {
    std::mt19937_64 rng(15);
    for (int c = 0; c < 150; ++c) {
        const Sequence s = random_seq(rng, 1 + rng() % 40, 1 + rng() % 6);
        const PdSequence pd = pd_encode(s);
        const FpSequence fp = fp_encode(s);
        const PdDag dag = dag_from_pd(pd);
        CHECK(dag_from_fp(fp) == dag);
        std::vector<std::uint32_t> indeg(s.size() + 1, 0);
        for (const auto& [j, i] : dag.edges) ++indeg[j];
        for (std::uint32_t i = 1; i <= s.size(); ++i) CHECK(indeg[i] == fp.at(i));
    }
}
