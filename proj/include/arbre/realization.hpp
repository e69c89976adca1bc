#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "arbre/tree_subst.hpp"

namespace arbre {

// Real root > 1 of x^d = x + 1.
double eta_value(int d);

// Exact element eta^-scale * sum_i coeffs[i] eta^i of Z[eta, 1/eta], with deg < d.
class AlgLength {
public:
    AlgLength() = default;
    explicit AlgLength(int d);
    AlgLength(int d, std::vector<std::int64_t> coeffs, int scale = 0);
    static AlgLength integer(int d, std::int64_t v);
    static AlgLength eta_power(int d, int k);

    int degree() const { return d_; }
    const std::vector<std::int64_t>& coeffs() const { return c_; }
    int scale() const { return scale_; }

    AlgLength operator+(const AlgLength& o) const;
    AlgLength operator-(const AlgLength& o) const;
    AlgLength operator-() const;
    AlgLength& operator+=(const AlgLength& o) { return *this = *this + o; }
    AlgLength times_eta_power(int k) const;
    AlgLength times_integer(std::int64_t k) const;

    bool is_zero() const;
    double value() const;
    int sign() const;  // exact for zero, numeric otherwise
    AlgLength abs() const { return sign() < 0 ? -*this : *this; }

    // Same element written with scale 0.
    AlgLength canonical() const;
    bool operator==(const AlgLength& o) const;
    bool operator!=(const AlgLength& o) const { return !(*this == o); }
    bool operator<(const AlgLength& o) const { return (o - *this).sign() > 0; }
    bool operator<=(const AlgLength& o) const { return (o - *this).sign() >= 0; }

    std::string to_string() const;
    nlohmann::json to_json() const;  // [coeffs..., scale]

private:
    AlgLength raised_to(int scale) const;
    void check_same(const AlgLength& o) const;

    int d_ = 0;
    std::vector<std::int64_t> c_;
    int scale_ = 0;
};

// Edge length weights: V_t(k) for colors 1..2d-2, as exact lengths.
AlgLength vt_length(int d, int color);

struct Syllable {
    int copy = 0;
    AlgLength length;
    bool operator==(const Syllable& o) const { return copy == o.copy && length == o.length; }
};

class FreePoint {
public:
    FreePoint() = default;
    explicit FreePoint(int d) : d_(d) {}
    static FreePoint origin(int d) { return FreePoint(d); }
    static FreePoint syllable(int d, int copy, const AlgLength& t);

    int degree() const { return d_; }
    const std::vector<Syllable>& syllables() const { return s_; }
    bool is_origin() const { return s_.empty(); }

    FreePoint inverse() const;
    FreePoint operator*(const FreePoint& o) const;
    FreePoint times(int copy, const AlgLength& t) const;

    // Sum of |t_i|, the distance to the origin.
    AlgLength norm() const;
    bool operator==(const FreePoint& o) const;
    bool operator!=(const FreePoint& o) const { return !(*this == o); }

    std::string key() const;  // canonical text, equal iff points equal
    std::string to_string() const;
    nlohmann::json to_json() const;
    // Planar drawing coordinates: copy j moves along angle 2 pi j / d.
    std::pair<double, double> planar() const;

private:
    void push(int copy, const AlgLength& t);

    int d_ = 0;
    std::vector<Syllable> s_;
};

AlgLength point_distance(const FreePoint& p, const FreePoint& q);

// Overlap length of segments [a,b] and [c,e] in the tree.
AlgLength segment_overlap(const FreePoint& a, const FreePoint& b, const FreePoint& c, const FreePoint& e);

// Distance from z to the segment [a,b].
AlgLength distance_to_segment(const FreePoint& z, const FreePoint& a, const FreePoint& b);

struct Embedding {
    int stage = 0;
    std::vector<FreePoint> points;  // indexed by vertex id
    const FreePoint& at(VertexId v) const;
};

Embedding nu0(int d, const ColoredTree& t0);
Embedding extend(const Embedding& prev, const ColoredTree& prev_tree, const ColoredTree& tree);
// In-place variant used by the stage builder; returns ids of the new vertices.
std::vector<VertexId> extend_in_place(Embedding& emb, const ColoredTree& prev_tree, const ColoredTree& tree);

struct GapReport {
    AlgLength gap;        // max over new vertices of their distance to the realized previous tree
    VertexId witness = 0;
    double value = 0.0;
    double bound = 0.0;   // eta^(-1-n)
};

GapReport hausdorff_gap(const Embedding& emb, const ColoredTree& prev_tree, const ColoredTree& tree, int n);

std::string embedding_csv(const Embedding& emb, const ColoredTree& tree);

}  // namespace arbre
