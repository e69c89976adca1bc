#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arbre/free_group.hpp"
#include "arbre/prefix_suffix.hpp"
#include "arbre/realization.hpp"
#include "arbre/symbolic.hpp"
#include "arbre/tree_subst.hpp"

namespace arbre {

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct VertexRecord {
    int stage = 0;                  // stage at which the vertex first appears
    std::size_t parent_edge = kNone;  // index of the edge of T_{stage-1} it was created from
    bool branch = false;
    std::size_t label = kNone;      // branch vertices: f0 = (prefix of omega of this length)^-1
};

// The stages T_0 .. T_N of the family, their ancestry, branch labels and (optionally) realizations.
class Construction {
public:
    struct Options {
        bool realize = true;
    };

    Construction(int d, int max_stage);
    Construction(int d, int max_stage, Options opt);
    void grow_to(int stage);
    // Grow until every prefix label up to `label` is present.
    void grow_to_label(std::size_t label);

    int d() const { return d_; }
    int max_stage() const { return static_cast<int>(trees_.size()) - 1; }
    const Substitution& sigma() const { return sigma_; }
    const TreeSubstitution& rules() const { return rules_; }
    const ColoredTree& tree(int n) const;
    const std::vector<std::size_t>& edge_parent(int n) const;
    const VertexRecord& record(VertexId v) const;

    bool realized() const { return emb_.has_value(); }
    const Embedding& embedding() const;
    const FreePoint& point(VertexId v) const { return embedding().at(v); }

    std::size_t max_label(int n) const;
    std::optional<VertexId> vertex_of_label(std::size_t label) const;
    std::vector<VertexId> branch_vertices(int n) const;
    std::size_t label_collisions() const { return collisions_; }

    std::size_t ancestor_edge(VertexId v, int n) const;
    std::size_t ancestor_edge_of(int stage, std::size_t edge, int n) const;

    // Prefix of the fixed point, grown on demand.
    const Word& omega(std::size_t length) const;
    std::size_t sigma_one_length(int k) const;

private:
    void build_next();

    int d_;
    Options opt_;
    Substitution sigma_;
    TreeSubstitution rules_;
    std::vector<ColoredTree> trees_;
    std::vector<std::vector<std::size_t>> edge_parent_;
    std::vector<VertexRecord> records_;
    std::vector<VertexId> label_vertex_;
    std::vector<std::size_t> max_label_;
    std::size_t collisions_ = 0;
    std::optional<Embedding> emb_;
    mutable Word omega_;
};

// f0(x) = sigma^k(p_*(path word from the root to x in T_k)); checks one increment when stage k+1 exists.
GroupWord f0(const Construction& c, int k, VertexId x);

// alpha_0 = (m-1) mod (d-1), step d-1, up to m-1; empty for m = 0.
std::vector<int> l_exponents(int d, int m);
GroupWord l_word(int d, int m);
std::size_t l_length(int d, int m);

// Prefix length of u for a label u^-1; throws unless the word is the inverse of a prefix of omega.
std::size_t label_length(const Construction& c, const GroupWord& label);
GroupWord label_word(const Construction& c, std::size_t length);

// -(d-2) for the empty label by convention.
int apparition_step(const Construction& c, const GroupWord& label);

std::set<GroupWord> branch_inventory(const Construction& c, int m);

const FreePoint& fq_branch(const Construction& c, const GroupWord& label);
const FreePoint& fq_branch(const Construction& c, std::size_t label);
// Point of sigma^{a_0}(1^-1) ... sigma^{a_{depth-1}}(1^-1).
const FreePoint& fq_approx(const Construction& c, const std::vector<int>& exponents, std::size_t depth);

struct Arc {
    int stage = 0;
    std::size_t edge = 0;
    VertexId s = 0;
    VertexId t = 0;
    int color = 0;
    int steps = 0;              // k with exactly one branch point inside [s,t] in T_{n+k}
    VertexId center = 0;
    std::size_t label = 0;      // |u(s,t)|
};

std::vector<Arc> simple_arcs(Construction& c, int n);
Word arc_label(const Construction& c, const Arc& arc);

int determined_partition(int d, int n);

struct PartitionReport {
    int m = 0;
    std::vector<std::pair<Word, double>> cylinders;
    int class_count = 0;
    std::optional<int> determined_by;
};

PartitionReport partition_report(const Substitution& sub, int m, std::span<const Letter> omega);
nlohmann::json to_json(const PartitionReport& r);

struct AuditResult {
    AuditResult() = default;
    AuditResult(std::string p, int s) : property(std::move(p)), stage(s) {}
    std::string property;
    int stage = 0;
    bool passed = true;
    std::size_t checked = 0;
    std::vector<std::string> witnesses;
    void fail(std::string w) {
        passed = false;
        if (witnesses.size() < 8) witnesses.push_back(std::move(w));
    }
};

std::vector<AuditResult> arc_cylinder_correspondence(Construction& c, int n);

struct PartialIsometry {
    Letter a = 0;
    int stage = 0;
    std::vector<std::pair<std::size_t, std::size_t>> labels;  // u^-1 -> (ua)^-1 as prefix lengths
};

PartialIsometry phi(const Construction& c, Letter a, int n);
std::vector<AuditResult> isometry_audit(Construction& c, Letter a, int n);
AuditResult cylinder_image_overlap(Construction& c, int n);

AlgLength legal_path_distance(int d, const GroupWord& w);
AuditResult bijiso_check(const Construction& c, int n);

AuditResult apparition_chain_audit(const Construction& c, int up_to);
AuditResult automatic_writing_audit(const Construction& c, int up_to);
AuditResult color_one_neighbour_audit(const Construction& c, int up_to);
AuditResult f0_bijection_audit(const Construction& c, int direct_up_to);
AuditResult l_word_bispecial_audit(int d, int up_to);
AuditResult root_arc_audit(Construction& c, int n);

}  // namespace arbre
