#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arbre/free_group.hpp"
#include "arbre/symbolic.hpp"

namespace arbre {

using VertexId = std::uint32_t;

struct ColoredEdge {
    VertexId src = 0;
    VertexId dst = 0;
    int color = 0;
    auto operator<=>(const ColoredEdge&) const = default;
    bool operator==(const ColoredEdge&) const = default;
};

struct Incidence {
    VertexId other = 0;
    int color = 0;
    bool outgoing = false;
    std::size_t edge = 0;
};

class ColoredTree {
public:
    ColoredTree() = default;
    // Throws std::invalid_argument unless the data describe a finite tree.
    ColoredTree(std::vector<VertexId> vertices, std::vector<ColoredEdge> edges,
                std::optional<VertexId> root = std::nullopt);

    const std::vector<VertexId>& vertices() const { return vertices_; }
    const std::vector<ColoredEdge>& edges() const { return edges_; }  // sorted by (src,dst,color)
    std::optional<VertexId> root() const { return root_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    VertexId max_id() const;

    bool has_vertex(VertexId v) const;
    std::size_t degree(VertexId v) const;
    const std::vector<Incidence>& incident(VertexId v) const;

    PathWord path_word(VertexId x, VertexId y) const;
    std::vector<VertexId> path(VertexId x, VertexId y) const;
    std::vector<std::size_t> path_edges(VertexId x, VertexId y) const;
    std::size_t distance(VertexId x, VertexId y) const;

    bool is_discerned() const;
    std::vector<VertexId> branch_points(std::size_t degree) const;
    ColoredTree ball(std::size_t radius) const;

    nlohmann::json to_json(int d) const;
    static ColoredTree from_json(const nlohmann::json& j);
    std::string to_dot(const std::string& name = "T") const;

    bool operator==(const ColoredTree& o) const {
        return vertices_ == o.vertices_ && edges_ == o.edges_ && root_ == o.root_;
    }

private:
    std::size_t index(VertexId v) const;
    struct Step {
        std::size_t at;
        std::size_t edge;
    };
    void climb(std::size_t x, std::size_t y, std::vector<Step>& up_x, std::vector<Step>& up_y) const;

    std::vector<VertexId> vertices_;
    std::vector<ColoredEdge> edges_;
    std::optional<VertexId> root_;
    std::vector<std::vector<Incidence>> adj_;
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> parent_edge_;
    std::vector<std::size_t> depth_;
};

// Canonical encoding of the tree rooted at `root`; equal strings iff isomorphic as rooted colored trees.
std::string canonical_form(const ColoredTree& t, VertexId root);

// Pattern vertex symbols: 0 = X, 1 = Y, k >= 2 = placeholder P_{k-1}.
struct PatternEdge {
    int src = 0;
    int dst = 0;
    int color = 0;
    bool operator==(const PatternEdge&) const = default;
};

struct RulePattern {
    int color = 0;
    std::vector<PatternEdge> edges;
    bool operator==(const RulePattern&) const = default;
};

struct Violation {
    int condition = 0;  // 0: pattern is not a tree; 1..4: definition conditions
    std::string witness;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

struct SubstitutionResult {
    ColoredTree tree;
    std::vector<std::size_t> edge_parent;  // per output edge: index of the input edge it came from
    VertexId first_fresh = 0;
};

class TreeSubstitution {
public:
    TreeSubstitution(int alphabet_size, std::vector<RulePattern> rules);
    static TreeSubstitution family(int d);

    int alphabet_size() const { return colors_; }
    const std::vector<RulePattern>& rules() const { return rules_; }
    const RulePattern& rule(int color) const;

    ValidationReport validate() const;
    SubstitutionResult apply(const ColoredTree& t) const;
    ColoredTree operator()(const ColoredTree& t) const { return apply(t).tree; }

    PathWord trunk_word(int color) const;
    IntMatrix trunk_matrix() const;
    IntMatrix incidence_matrix() const;

    nlohmann::json to_json() const;
    static TreeSubstitution from_json(const nlohmann::json& j);

    bool operator==(const TreeSubstitution&) const = default;

private:
    int colors_;
    std::vector<RulePattern> rules_;
};

TreeSubstitution family_rules(int d);

// tau^(d-1)(X_2) relabelled so that the root is 0 and its neighbour along color j is j.
ColoredTree initial_tree(int d);
ColoredTree iterate(const TreeSubstitution& ts, const ColoredTree& t0, int n);

}  // namespace arbre
