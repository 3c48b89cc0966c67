#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <thetadyn/projdyn.hpp>
#include <thetadyn/report.hpp>

using namespace thetadyn;

TEST_CASE("theta_apply") {
    auto F53 = FieldCtx::build(53, 1);
    ThetaMap t15(F53, 15);
    CHECK(theta_apply(t15, ProjPoint::finite(F53.zero())) == ProjPoint::infinity());
    CHECK(theta_apply(t15, ProjPoint::infinity()) == ProjPoint::infinity());
    CHECK(theta_apply(t15, ProjPoint::finite(F53.one())) == ProjPoint::finite(F53.from_int(30)));

    auto F29 = FieldCtx::build(29, 1);
    ThetaMap tm(F29, 14);  // 14 = -1/2 mod 29
    CHECK(theta_apply(tm, ProjPoint::finite(F29.one())) == ProjPoint::finite(F29.from_int(28)));

    CHECK_THROWS_AS(ThetaMap(F29, 29), Error);
}

TEST_CASE("psi is an involution with the stated special values") {
    auto F29 = FieldCtx::build(29, 1);
    CHECK(psi_apply(F29, ProjPoint::infinity()) == ProjPoint::finite(F29.one()));
    CHECK(psi_apply(F29, ProjPoint::finite(F29.one())) == ProjPoint::infinity());
    CHECK(psi_apply(F29, ProjPoint::finite(F29.zero())) == ProjPoint::finite(F29.from_int(28)));

    std::mt19937 rng(11);
    std::uniform_int_distribution<i64> dist(0, F29.q);
    for (int i = 0; i < 20; ++i) {
        auto x = node_point(F29, dist(rng));
        CHECK(psi_apply(F29, psi_apply(F29, x)) == x);
    }
}

TEST_CASE("square maps") {
    auto F29 = FieldCtx::build(29, 1);
    CHECK(square_map_apply(F29, ProjPoint::infinity(), SquareSign::plus) == ProjPoint::infinity());
    CHECK(square_map_apply(F29, ProjPoint::finite(F29.zero()), SquareSign::minus) ==
          ProjPoint::infinity());
    CHECK(square_map_apply(F29, ProjPoint::infinity(), SquareSign::minus) ==
          ProjPoint::finite(F29.zero()));
    CHECK(square_map_apply(F29, ProjPoint::finite(F29.from_int(2)), SquareSign::minus) ==
          ProjPoint::finite(F29.from_int(22)));
}

TEST_CASE("conjugation identities theta_{+-1/2} = psi . s_{+-2} . psi") {
    for (auto [p, n] : {std::pair<i64, i64>{29, 1}, {7, 2}, {3, 3}, {13, 1}}) {
        auto F = FieldCtx::build(p, n);
        ThetaMap plus(F, mod_inverse(2, p));
        ThetaMap minus(F, p - mod_inverse(2, p));
        for (i64 i = 0; i <= F.q; ++i) {
            auto x = node_point(F, i);
            CHECK(theta_apply(plus, x) ==
                  psi_apply(F, square_map_apply(F, psi_apply(F, x), SquareSign::plus)));
            CHECK(theta_apply(minus, x) ==
                  psi_apply(F, square_map_apply(F, psi_apply(F, x), SquareSign::minus)));
        }
    }
}

TEST_CASE("preimages") {
    auto F53 = FieldCtx::build(53, 1);
    ThetaMap t15(F53, 15);
    auto single = preimages(t15, ProjPoint::finite(F53.from_int(30)));  // y = 2k
    REQUIRE(single.size() == 1);
    CHECK(single[0] == ProjPoint::finite(F53.one()));

    auto at_inf = preimages(t15, ProjPoint::infinity());
    REQUIRE(at_inf.size() == 2);
    CHECK(at_inf[0] == ProjPoint::finite(F53.zero()));
    CHECK(at_inf[1] == ProjPoint::infinity());

    // y = 2^8 over F_29, k = -1/2: the two preimages carry labels 11 and 18
    auto F29 = FieldCtx::build(29, 1);
    ThetaMap tm(F29, 14);
    auto pre = preimages(tm, ProjPoint::finite(F29.power_of_generator(8)));
    REQUIRE(pre.size() == 2);
    std::vector<i64> labels{F29.dlog(pre[0].v), F29.dlog(pre[1].v)};
    std::sort(labels.begin(), labels.end());
    CHECK(labels == std::vector<i64>{11, 17});
}

TEST_CASE("preimage count equals indegree everywhere") {
    auto F = FieldCtx::build(7, 2);
    ThetaMap m(F, 4);  // 1/2 mod 7
    auto g = build_graph(m);
    std::vector<int> indeg(g.domain_size, 0);
    for (i64 i = 0; i < g.domain_size; ++i) ++indeg[g.successor[i]];
    for (i64 i = 0; i < g.domain_size; ++i) {
        auto pre = preimages(m, node_point(F, i));
        CHECK((i64)pre.size() == indeg[i]);
        for (auto& x : pre) CHECK(node_index(F, theta_apply(m, x)) == i);
        // indegree one exactly at y = +-2k
        bool is_pm2k = !node_point(F, i).infinite &&
                       (node_point(F, i).v == F.from_int(2 * m.k) ||
                        node_point(F, i).v == F.from_int(-2 * m.k));
        CHECK((indeg[i] == 1) == is_pm2k);
    }
}

TEST_CASE("build_graph respects the domain limit") {
    auto F = FieldCtx::build(29, 1);
    ThetaMap m(F, 14);
    CHECK_THROWS_AS(build_graph(m, 10), Error);
}

TEST_CASE("summarize on the q=29 example graph") {
    auto F = FieldCtx::build(29, 1);
    auto g = build_graph(ThetaMap(F, 14));
    auto s = summarize(g);
    CHECK(s.cycle_spectrum ==
          std::vector<std::pair<i64, i64>>{{1, 1}, {2, 1}, {6, 1}});
    CHECK(s.indegree_histogram == std::map<int, i64>{{0, 14}, {1, 2}, {2, 14}});

    // every cyclic vertex outside {1, -1} roots the depth-2 tree with a
    // single-child root; 1 and -1 root nothing
    std::string depth2 = encode_tree(generic_root_tree(2));
    for (const auto& cyc : s.cycles) {
        for (size_t i = 0; i < cyc.nodes.size(); ++i) {
            auto pt = g.label(cyc.nodes[i]);
            bool is_pm1 = !pt.infinite && (pt.v == F.one() || pt.v == F.from_int(28));
            CHECK(cyc.tree_encodings[i] == (is_pm1 ? bare_root_encoding() : depth2));
        }
    }

    // mass conservation
    i64 mass = 0;
    for (const auto& cyc : s.cycles)
        for (const auto& enc : cyc.tree_encodings) mass += tree_encoding_size(enc);
    CHECK(mass == F.q + 1);
}

TEST_CASE("summarize on the q=49 example graph") {
    auto F = FieldCtx::build(7, 2, std::vector<i64>{3, -2, 1});
    auto g = build_graph(ThetaMap(F, 24));  // 24 = 3 = -1/2 mod 7
    auto s = summarize(g);
    CHECK(s.cycle_spectrum == std::vector<std::pair<i64, i64>>{{1, 3}, {2, 1}});

    // the 2-cycle is {1, -1}, labels 0 and 24 under the Conway generator
    for (const auto& cyc : s.cycles) {
        if (cyc.length() != 2) continue;
        std::vector<i64> labels;
        for (auto node : cyc.nodes) labels.push_back(F.dlog(g.label(node).v));
        std::sort(labels.begin(), labels.end());
        CHECK(labels == std::vector<i64>{0, 24});
    }
}

TEST_CASE("summarize small special graphs") {
    auto F3 = FieldCtx::build(3, 1);
    auto g = build_graph(ThetaMap(F3, 2));  // 2 = 1/2 mod 3
    auto s = summarize(g);
    CHECK(g.domain_size == 4);
    CHECK(s.cycle_spectrum == std::vector<std::pair<i64, i64>>{{1, 3}});

    // identity map: every node is a bare fixed point
    auto ident = build_graph(F3, [](const ProjPoint& x) { return x; });
    auto si = summarize(ident);
    CHECK(si.cycle_spectrum == std::vector<std::pair<i64, i64>>{{1, 4}});

    // s_2 on F_5: successor of 2 is 4
    auto F5 = FieldCtx::build(5, 1);
    auto gs = build_graph(
        F5, [&](const ProjPoint& x) { return square_map_apply(F5, x, SquareSign::plus); });
    CHECK(gs.successor[2] == 4);
}

TEST_CASE("every node reaches a cycle and mass is conserved") {
    for (i64 k : {1, 5, 11, 14}) {
        auto F = FieldCtx::build(29, 1);
        ThetaMap m(F, k);
        auto g = build_graph(m);
        auto s = summarize(g);
        i64 mass = 0;
        for (const auto& cyc : s.cycles)
            for (const auto& enc : cyc.tree_encodings) mass += tree_encoding_size(enc);
        CHECK(mass == g.domain_size);
        for (const auto& [deg, cnt] : s.indegree_histogram) CHECK(deg <= 2);

        // forward orbit of every point hits a cycle within q + 1 steps
        std::vector<char> cyclic(g.domain_size, 0);
        for (const auto& cyc : s.cycles)
            for (auto node : cyc.nodes) cyclic[node] = 1;
        for (i64 start = 0; start < g.domain_size; ++start) {
            i64 v = start, steps = 0;
            while (!cyclic[v] && steps <= g.domain_size) v = g.successor[v], ++steps;
            CHECK(steps <= g.domain_size);
        }
    }
}

TEST_CASE("tree shape builders") {
    CHECK(encode_tree(TreeShape{}) == "()");
    CHECK(encode_tree(generic_root_tree(1)) == "(())");
    CHECK(encode_tree(generic_root_tree(2)) == "((()()))");
    CHECK(encode_tree(pinched_level1_tree(1)) == "(())");
    CHECK(encode_tree(pinched_level1_tree(2)) == "((()))");
    CHECK(encode_tree(pinched_level1_tree(4)) == "((((()())(()()))))");
    CHECK(encode_tree(pinched_level2_tree(3)) == "(((())(())))");
}
