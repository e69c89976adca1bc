#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "arbre/core_map.hpp"
#include "arbre/realization.hpp"

using namespace arbre;

namespace {

AlgLength random_length(std::mt19937& rng, int d) {
    std::uniform_int_distribution<int> c(-3, 3);
    std::uniform_int_distribution<int> sc(-4, 4);
    std::vector<std::int64_t> co(d);
    for (auto& x : co) x = c(rng);
    return AlgLength(d, co, sc(rng));
}

FreePoint random_point(std::mt19937& rng, int d) {
    std::uniform_int_distribution<int> copy(0, d - 1);
    std::uniform_int_distribution<int> len(1, 4);
    FreePoint p = FreePoint::origin(d);
    const int n = len(rng);
    for (int i = 0; i < n; ++i) p = p.times(copy(rng), random_length(rng, d));
    return p;
}

}  // namespace

TEST_CASE("eta and exact lengths") {
    for (int d = 3; d <= 6; ++d) {
        const double eta = eta_value(d);
        CHECK(std::abs(std::pow(eta, d) - eta - 1) < 1e-12);
        CHECK(AlgLength::eta_power(d, d) == AlgLength::eta_power(d, 1) + AlgLength::integer(d, 1));
        CHECK(AlgLength::eta_power(d, -1).value() == doctest::Approx(1 / eta));
        CHECK((AlgLength::eta_power(d, 5) - AlgLength::eta_power(d, 5)).is_zero());
    }
    std::mt19937 rng(5);
    for (int i = 0; i < 500; ++i) {
        const AlgLength a = random_length(rng, 3);
        const AlgLength b = random_length(rng, 3);
        CHECK((a + b).value() == doctest::Approx(a.value() + b.value()).epsilon(1e-9));
        CHECK(a.times_eta_power(3).value() == doctest::Approx(a.value() * std::pow(eta_value(3), 3)).epsilon(1e-9));
        CHECK(a.canonical() == a);
        CHECK(a.times_integer(3) == a + a + a);
        if (std::abs(a.value() - b.value()) > 1e-9) CHECK((a < b) == (a.value() < b.value()));
    }
}

TEST_CASE("edge weights") {
    CHECK(vt_length(3, 1) == AlgLength::integer(3, 1));
    CHECK(vt_length(3, 2) == AlgLength::eta_power(3, 2));
    CHECK(vt_length(3, 3) == AlgLength::eta_power(3, 1));
    CHECK(vt_length(3, 4) == AlgLength::eta_power(3, -1));
    CHECK_THROWS(vt_length(3, 5));
}

TEST_CASE("free product points") {
    const int d = 3;
    const AlgLength one = AlgLength::integer(d, 1);
    const FreePoint a = FreePoint::syllable(d, 0, one);
    const FreePoint b = FreePoint::syllable(d, 1, one);
    CHECK((a * a.inverse()).is_origin());
    CHECK(point_distance(a, b) == AlgLength::integer(d, 2));
    CHECK(point_distance(a, a.times(0, one)) == one);
    CHECK(point_distance(a.times(0, -one), FreePoint::origin(d)).is_zero());
    CHECK((a * b).norm() == AlgLength::integer(d, 2));
    CHECK(segment_overlap(a, b, FreePoint::origin(d), a) == one);
    CHECK(distance_to_segment(a.times(2, one), FreePoint::origin(d), b) == AlgLength::integer(d, 2));

    std::mt19937 rng(9);
    for (int i = 0; i < 300; ++i) {
        const FreePoint r = random_point(rng, d);
        const FreePoint p = random_point(rng, d);
        const FreePoint q = random_point(rng, d);
        CHECK(point_distance(r * p, r * q) == point_distance(p, q));
        CHECK(std::abs(point_distance(r * p, r * q).value() - point_distance(p, q).value()) < 1e-12);
        CHECK((point_distance(p, q).value() <= point_distance(p, r).value() + point_distance(r, q).value() + 1e-12));
        CHECK(point_distance(p, q) == point_distance(q, p));
        CHECK(((p == q) == (p.key() == q.key())));
    }
}

TEST_CASE("first extension step") {
    const Construction c(3, 1);
    const ColoredTree& t1 = c.tree(1);
    // the new center is the vertex created at stage 1 with degree 3
    VertexId w = 0;
    for (VertexId v : t1.branch_points(3))
        if (c.record(v).stage == 1) w = v;
    REQUIRE(w != 0);
    VertexId y1 = 0;
    for (const Incidence& i : t1.incident(w))
        if (i.outgoing && i.color == 1) y1 = i.other;
    CHECK(point_distance(c.point(w), c.point(y1)) == AlgLength::eta_power(3, -1));
    CHECK(distance_to_segment(c.point(w), c.point(0), c.point(2)).is_zero());
}

TEST_CASE("edge length law and nesting") {
    for (int d = 3; d <= 4; ++d) {
        const Construction c(d, 10);
        for (int n = 0; n <= 10; ++n) {
            const ColoredTree& t = c.tree(n);
            for (const ColoredEdge& e : t.edges()) {
                const AlgLength got = point_distance(c.point(e.src), c.point(e.dst));
                CHECK(got == vt_length(d, e.color).times_eta_power(-n));
                double want = e.color == 1 ? 1.0
                              : e.color <= d ? std::pow(eta_value(d), d - e.color + 1)
                                             : std::pow(eta_value(d), d - e.color);
                CHECK(got.value() == doctest::Approx(want * std::pow(eta_value(d), -n)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("hausdorff gaps") {
    const Construction c(3, 11);
    std::vector<double> gaps;
    for (int n = 0; n <= 10; ++n) {
        const GapReport g = hausdorff_gap(c.embedding(), c.tree(n), c.tree(n + 1), n);
        CHECK(g.bound == doctest::Approx(std::pow(eta_value(3), -1 - n)));
        CHECK(g.value <= g.bound + 1e-12);
        gaps.push_back(g.value);
    }
    CHECK(gaps[1] <= std::pow(eta_value(3), -2) + 1e-12);
    CHECK(gaps[5] <= std::pow(eta_value(3), -6) + 1e-12);
    for (int n = 3; n < 10; ++n) CHECK(std::abs(gaps[n + 1] / gaps[n] - 1 / eta_value(3)) < 0.01);
}

TEST_CASE("realized edges meet only at shared endpoints") {
    for (int d = 3; d <= 4; ++d) {
        const Construction c(d, 6);
        const ColoredTree& t = c.tree(6);
        std::set<std::string> keys;
        for (VertexId v : t.vertices()) keys.insert(c.point(v).key());
        CHECK(keys.size() == t.vertex_count());
        const auto& es = t.edges();
        for (std::size_t i = 0; i < es.size(); ++i)
            for (std::size_t j = i + 1; j < es.size(); ++j) {
                const AlgLength o = segment_overlap(c.point(es[i].src), c.point(es[i].dst), c.point(es[j].src),
                                                    c.point(es[j].dst));
                CHECK(o.is_zero());
            }
        // branch points of degree d are realized with d distinct directions
        for (VertexId v : t.branch_points(d)) {
            std::set<std::string> dirs;
            for (const Incidence& i : t.incident(v)) {
                const FreePoint step = c.point(v).inverse() * c.point(i.other);
                dirs.insert(std::to_string(step.syllables().front().copy) + (step.syllables().front().length.sign() > 0 ? "+" : "-"));
            }
            CHECK(dirs.size() == static_cast<std::size_t>(d));
        }
    }
}

TEST_CASE("embedding output") {
    const Construction c(3, 2);
    const std::string csv = embedding_csv(c.embedding(), c.tree(2));
    CHECK(csv.rfind("id,x,y,degree,norm,point\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
    CHECK(extend(nu0(3, c.tree(0)), c.tree(0), c.tree(1)).points.size() > c.tree(0).max_id());
}
