#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

#include "arbre/free_group.hpp"
#include "arbre/tree_subst.hpp"

using namespace arbre;

namespace {

ColoredTree edge(int color) { return ColoredTree({0, 1}, {{0, 1, color}}, VertexId{0}); }

std::set<ColoredEdge> edge_set(const ColoredTree& t) { return {t.edges().begin(), t.edges().end()}; }

// Discernment by brute force: no path word between two vertices contains x followed by its inverse.
bool discerned_by_paths(const ColoredTree& t) {
    for (VertexId a : t.vertices())
        for (VertexId b : t.vertices()) {
            const PathWord w = t.path_word(a, b);
            for (std::size_t i = 1; i < w.size(); ++i)
                if (w[i].letter == w[i - 1].letter && w[i].sign == -w[i - 1].sign) return false;
        }
    return true;
}

TreeSubstitution subex() {
    return TreeSubstitution(4, {{1, {{0, 1, 3}}},
                                {2, {{0, 2, 1}, {2, 1, 3}, {2, 3, 4}}},
                                {3, {{0, 1, 2}}},
                                {4, {{0, 1, 1}}}});
}

}  // namespace

TEST_CASE("colored tree validation") {
    CHECK_THROWS_AS(ColoredTree({0, 1, 2}, {{0, 1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(ColoredTree({0, 1}, {{0, 0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(ColoredTree({0, 1, 2}, {{0, 1, 1}, {1, 0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(ColoredTree({0, 0}, {{0, 1, 1}}), std::invalid_argument);
    const ColoredTree t({0, 1, 2, 3}, {{0, 1, 1}, {2, 1, 2}, {2, 3, 1}}, VertexId{0});
    CHECK(t.path_word(0, 3) == PathWord{{1, 1}, {2, -1}, {1, 1}});
    CHECK(t.path_word(3, 3).empty());
    CHECK(t.distance(0, 3) == 3);
    CHECK(t.path(3, 0) == std::vector<VertexId>{3, 2, 1, 0});
}

TEST_CASE("discernment examples") {
    CHECK_FALSE(ColoredTree({0, 1, 2}, {{0, 1, 1}, {0, 2, 1}}).is_discerned());
    CHECK(ColoredTree({0, 1, 2}, {{0, 1, 1}, {1, 2, 1}}).is_discerned());
    CHECK_FALSE(ColoredTree({0, 1, 2}, {{1, 0, 1}, {2, 0, 1}}).is_discerned());
    CHECK(ColoredTree({0, 1, 2}, {{0, 1, 1}, {0, 2, 2}}).is_discerned());
}

TEST_CASE("family rules") {
    const TreeSubstitution t3 = TreeSubstitution::family(3);
    CHECK(t3.alphabet_size() == 4);
    CHECK(t3.rule(2).edges.size() == 3);
    CHECK(t3.validate().ok());
    const TreeSubstitution t4 = TreeSubstitution::family(4);
    CHECK(t4.alphabet_size() == 6);
    CHECK(t4.rule(2).edges.size() == 4);
    const TreeSubstitution t5 = TreeSubstitution::family(5);
    CHECK(t5.rule(7).edges == std::vector<PatternEdge>{{0, 1, 6}});
    for (int d = 3; d <= 6; ++d) CHECK(TreeSubstitution::family(d).validate().ok());
}

TEST_CASE("single-edge images") {
    const TreeSubstitution t3 = TreeSubstitution::family(3);
    const ColoredTree star = t3(edge(2));
    CHECK(edge_set(star) == std::set<ColoredEdge>{{2, 0, 3}, {2, 1, 1}, {2, 3, 4}});
    CHECK(edge_set(t3(edge(3))) == std::set<ColoredEdge>{{0, 1, 2}});
    CHECK(edge_set(t3(edge(4))) == std::set<ColoredEdge>{{0, 1, 1}});
    CHECK(edge_set(t3(edge(1))) == std::set<ColoredEdge>{{0, 1, 3}});
}

TEST_CASE("validation conditions") {
    const ValidationReport missing =
        TreeSubstitution(4, {{1, {{0, 2, 1}, {2, 1, 2}}}, {2, {{0, 2, 3}}}, {3, {{0, 1, 3}}}, {4, {{0, 1, 1}}}})
            .validate();
    REQUIRE_FALSE(missing.ok());
    CHECK(missing.violations.front().condition == 1);
    CHECK(missing.summary().find("condition 1") != std::string::npos);

    CHECK(subex().validate().ok());
    const ValidationReport cyc = TreeSubstitution(2, {{1, {{0, 1, 2}}}, {2, {{0, 1, 1}, {0, 2, 2}}}}).validate();
    REQUIRE_FALSE(cyc.ok());
    bool four = false;
    for (const auto& v : cyc.violations) four |= v.condition == 4;
    CHECK(four);
}

TEST_CASE("trunk matrices") {
    IntMatrix want = IntMatrix::Zero(4, 4);
    want(2, 0) = want(2, 1) = want(0, 3) = want(0, 1) = want(1, 2) = 1;
    const TreeSubstitution t3 = TreeSubstitution::family(3);
    CHECK(t3.trunk_matrix() == want);
    for (int d = 3; d <= 6; ++d) {
        const TreeSubstitution ts = TreeSubstitution::family(d);
        IntMatrix diff = ts.incidence_matrix() - ts.trunk_matrix();
        CHECK(diff.sum() == d - 2);
        CHECK(diff.col(1).sum() == d - 2);
        for (int h = 1; h <= d - 2; ++h) CHECK(diff(d + h - 1, 1) == 1);
    }
    IntMatrix sub(4, 4);
    sub << 0, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0;
    CHECK(subex().trunk_matrix() == sub);
}

TEST_CASE("trunk words give the inverse substitution") {
    for (int d = 3; d <= 6; ++d) {
        const TreeSubstitution ts = TreeSubstitution::family(d);
        const Automorphism inv = Automorphism::family_inverse(d);
        for (int i = 1; i <= d; ++i) CHECK(p_star(d, ts.trunk_word(i)) == inv.image(i));
    }
}

TEST_CASE("initial trees") {
    for (int d = 3; d <= 6; ++d) {
        const ColoredTree t0 = initial_tree(d);
        CHECK(t0.edge_count() == static_cast<std::size_t>(d));
        CHECK(t0.degree(0) == static_cast<std::size_t>(d));
        for (int j = 1; j <= d; ++j) CHECK(edge_set(t0).contains({0, static_cast<VertexId>(j), j}));
        CHECK(t0.branch_points(d) == std::vector<VertexId>{0});
    }
    const TreeSubstitution t3 = TreeSubstitution::family(3);
    const ColoredTree t1 = t3(initial_tree(3));
    CHECK(edge_set(t1) == std::set<ColoredEdge>{{0, 1, 3}, {4, 0, 3}, {4, 2, 1}, {4, 5, 4}, {0, 3, 2}});
    CHECK(t1.branch_points(3) == std::vector<VertexId>{0, 4});
    CHECK(iterate(t3, initial_tree(3), 2).edge_count() == 7);
}

TEST_CASE("iterates: degrees, nesting, discernment, injectivity") {
    for (int d = 3; d <= 5; ++d) {
        const TreeSubstitution ts = TreeSubstitution::family(d);
        ColoredTree t = initial_tree(d);
        const int top = d == 3 ? 12 : 10;
        for (int n = 0; n <= top; ++n) {
            CHECK(t.is_discerned());
            if (t.vertex_count() < 120) CHECK(discerned_by_paths(t));
            for (VertexId v : t.vertices()) {
                const std::size_t deg = t.degree(v);
                CHECK((deg == 1 || deg == static_cast<std::size_t>(d)));
            }
            if (n <= 8) {
                std::set<GroupWord> seen;
                for (VertexId v : t.vertices()) seen.insert(p_star(d, t.path_word(0, v)));
                CHECK(seen.size() == t.vertex_count());
            }
            const ColoredTree next = ts(t);
            const auto& a = t.vertices();
            const auto& b = next.vertices();
            CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
            t = next;
        }
    }
}

TEST_CASE("substitution commutes with subtree inclusion") {
    const TreeSubstitution ts = TreeSubstitution::family(3);
    const ColoredTree t = iterate(ts, initial_tree(3), 6);
    const SubstitutionResult full = ts.apply(t);
    for (std::size_t r = 1; r <= 4; ++r) {
        const ColoredTree sub = t.ball(r);
        const ColoredTree img = ts(sub);
        std::set<std::size_t> kept;
        for (std::size_t e = 0; e < t.edges().size(); ++e)
            if (sub.has_vertex(t.edges()[e].src) && sub.has_vertex(t.edges()[e].dst)) kept.insert(e);
        std::vector<ColoredEdge> edges;
        std::set<VertexId> verts;
        for (std::size_t e = 0; e < full.tree.edges().size(); ++e)
            if (kept.contains(full.edge_parent[e])) {
                edges.push_back(full.tree.edges()[e]);
                verts.insert(edges.back().src);
                verts.insert(edges.back().dst);
            }
        const ColoredTree piece({verts.begin(), verts.end()}, edges, VertexId{0});
        CHECK(canonical_form(piece, 0) == canonical_form(img, 0));
    }
}

TEST_CASE("spectra of the rule matrices") {
    for (int d = 3; d <= 6; ++d) {
        const TreeSubstitution ts = TreeSubstitution::family(d);
        Eigen::EigenSolver<Eigen::MatrixXd> es(ts.trunk_matrix().cast<double>(), false);
        double top = 0.0;
        for (int i = 0; i < es.eigenvalues().size(); ++i) top = std::max(top, std::abs(es.eigenvalues()(i)));
        double eta = 1.3;
        for (int i = 0; i < 100; ++i) eta -= (std::pow(eta, d) - eta - 1) / (d * std::pow(eta, d - 1) - 1);
        CHECK(std::abs(top - eta) < 1e-9);
    }
}

TEST_CASE("json round trips and canonical forms") {
    const TreeSubstitution ts = TreeSubstitution::family(4);
    CHECK(TreeSubstitution::from_json(ts.to_json()) == ts);
    CHECK(TreeSubstitution::from_json(subex().to_json()) == subex());
    const ColoredTree t = iterate(TreeSubstitution::family(3), initial_tree(3), 4);
    CHECK(ColoredTree::from_json(t.to_json(3)) == t);

    // relabel every vertex; canonical forms agree
    std::vector<VertexId> verts;
    std::vector<ColoredEdge> edges;
    for (VertexId v : t.vertices()) verts.push_back(1000 - v);
    for (const auto& e : t.edges()) edges.push_back({1000 - e.src, 1000 - e.dst, e.color});
    const ColoredTree moved(verts, edges, VertexId{1000});
    CHECK(canonical_form(moved, 1000) == canonical_form(t, 0));
    std::vector<ColoredEdge> recolored = edges;
    recolored.front().color = recolored.front().color % 4 + 1;
    CHECK(canonical_form(ColoredTree(verts, recolored, VertexId{1000}), 1000) != canonical_form(t, 0));
    CHECK(t.to_dot().find("->") != std::string::npos);
    CHECK_THROWS(TreeSubstitution::from_json(nlohmann::json::parse(
        R"({"alphabet_size":1,"rules":[{"color":1,"edges":[["X","Q",1]]}]})")));
}
