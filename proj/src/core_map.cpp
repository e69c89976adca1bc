#include "arbre/core_map.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace arbre {

Construction::Construction(int d, int max_stage) : Construction(d, max_stage, Options{}) {}

Construction::Construction(int d, int max_stage, Options opt)
    : d_(d), opt_(opt), sigma_(Substitution::family(d)), rules_(TreeSubstitution::family(d)) {
    if (max_stage < 0) throw std::invalid_argument("negative stage");
    trees_.push_back(initial_tree(d));
    edge_parent_.emplace_back();
    records_.assign(d + 1, VertexRecord{});
    records_[0].branch = true;
    records_[0].label = 0;
    label_vertex_.push_back(0);
    max_label_.push_back(0);
    if (opt_.realize) emb_ = nu0(d, trees_[0]);
    grow_to(max_stage);
}

void Construction::grow_to(int stage) {
    while (max_stage() < stage) build_next();
}

void Construction::grow_to_label(std::size_t label) {
    while (max_label_.back() < label) build_next();
}

std::size_t Construction::sigma_one_length(int k) const {
    static thread_local std::vector<std::vector<std::size_t>> cache(16);
    auto& v = cache[d_];
    while (static_cast<int>(v.size()) <= k) {
        const int j = static_cast<int>(v.size());
        // |sigma^j(1)| = |sigma^{j-1}(1)| + |sigma^{j-1}(2)|, and sigma^{j-1}(2) = sigma^{j-d}(1) once j >= d
        if (j == 0)
            v.push_back(1);
        else if (j < d_)
            v.push_back(v[j - 1] + 1);
        else
            v.push_back(v[j - 1] + v[j - d_]);
    }
    return v[k];
}

void Construction::build_next() {
    const int n = max_stage() + 1;
    const ColoredTree& prev = trees_.back();
    SubstitutionResult res = rules_.apply(prev);
    const VertexId first_new = res.first_fresh;
    records_.resize(res.tree.max_id() + 1);
    for (std::size_t e = 0; e < res.tree.edges().size(); ++e) {
        const ColoredEdge& ed = res.tree.edges()[e];
        for (VertexId v : {ed.src, ed.dst}) {
            if (v < first_new) continue;
            VertexRecord& r = records_[v];
            r.stage = n;
            r.parent_edge = res.edge_parent[e];
        }
    }
    std::size_t top = max_label_.back();
    const std::size_t step = sigma_one_length(n - 1);
    for (VertexId v = first_new; v <= res.tree.max_id(); ++v) {
        VertexRecord& r = records_[v];
        if (res.tree.degree(v) != static_cast<std::size_t>(d_)) continue;
        r.branch = true;
        const ColoredEdge& pe = prev.edges()[r.parent_edge];
        const VertexRecord& src = records_[pe.src];
        if (pe.color != 2 || !src.branch) throw std::logic_error("branch vertex not created from a color-2 edge");
        r.label = src.label + step;
        if (r.label < label_vertex_.size() && label_vertex_[r.label] != std::numeric_limits<VertexId>::max()) {
            ++collisions_;
        } else {
            if (r.label >= label_vertex_.size()) label_vertex_.resize(r.label + 1, std::numeric_limits<VertexId>::max());
            label_vertex_[r.label] = v;
        }
        top = std::max(top, r.label);
    }
    if (emb_) extend_in_place(*emb_, prev, res.tree);
    edge_parent_.push_back(std::move(res.edge_parent));
    trees_.push_back(std::move(res.tree));
    max_label_.push_back(top);
}

const ColoredTree& Construction::tree(int n) const {
    if (n < 0 || n > max_stage()) throw std::out_of_range("stage " + std::to_string(n) + " not built");
    return trees_[n];
}

const std::vector<std::size_t>& Construction::edge_parent(int n) const {
    if (n < 1 || n > max_stage()) throw std::out_of_range("no ancestry for stage " + std::to_string(n));
    return edge_parent_[n];
}

const VertexRecord& Construction::record(VertexId v) const {
    if (v >= records_.size()) throw std::out_of_range("unknown vertex " + std::to_string(v));
    return records_[v];
}

const Embedding& Construction::embedding() const {
    if (!emb_) throw std::logic_error("construction built without realization");
    return *emb_;
}

std::size_t Construction::max_label(int n) const {
    if (n < 0 || n > max_stage()) throw std::out_of_range("stage not built");
    return max_label_[n];
}

std::optional<VertexId> Construction::vertex_of_label(std::size_t label) const {
    if (label >= label_vertex_.size() || label_vertex_[label] == std::numeric_limits<VertexId>::max())
        return std::nullopt;
    return label_vertex_[label];
}

std::vector<VertexId> Construction::branch_vertices(int n) const {
    return tree(n).branch_points(static_cast<std::size_t>(d_));
}

std::size_t Construction::ancestor_edge_of(int stage, std::size_t edge, int n) const {
    while (stage > n) {
        edge = edge_parent(stage)[edge];
        --stage;
    }
    return edge;
}

std::size_t Construction::ancestor_edge(VertexId v, int n) const {
    const VertexRecord& r = record(v);
    if (r.stage <= n) throw std::invalid_argument("vertex already present at that stage");
    return ancestor_edge_of(r.stage - 1, r.parent_edge, n);
}

const Word& Construction::omega(std::size_t length) const {
    if (omega_.size() < length) omega_ = fixed_point_prefix(sigma_, std::max(length, 2 * omega_.size()));
    return omega_;
}

GroupWord f0(const Construction& c, int k, VertexId x) {
    const int d = c.d();
    const ColoredTree& t = c.tree(k);
    if (!t.has_vertex(x) || t.degree(x) != static_cast<std::size_t>(d))
        throw std::invalid_argument("vertex " + std::to_string(x) + " is not a branch point of stage " +
                                    std::to_string(k));
    const Automorphism s = Automorphism::from_substitution(c.sigma());
    const GroupWord g = p_star(d, t.path_word(0, x));
    if (k + 1 <= c.max_stage()) {
        const GroupWord g1 = p_star(d, c.tree(k + 1).path_word(0, x));
        if (s(g1) != g) throw std::logic_error("f0 depends on the stage");
    }
    return s.power(g, k);
}

std::vector<int> l_exponents(int d, int m) {
    if (m < 0) throw std::invalid_argument("negative index");
    std::vector<int> e;
    if (m == 0) return e;
    for (int a = (m - 1) % (d - 1); a <= m - 1; a += d - 1) e.push_back(a);
    return e;
}

GroupWord l_word(int d, int m) {
    const Substitution s = Substitution::family(d);
    Word u;
    const auto e = l_exponents(d, m);
    for (auto it = e.rbegin(); it != e.rend(); ++it) {
        Word piece = s.power_image(1, *it);
        u.insert(u.end(), piece.begin(), piece.end());
    }
    return GroupWord::positive(u).inverse();
}

std::size_t l_length(int d, int m) {
    const Substitution s = Substitution::family(d);
    std::size_t n = 0;
    for (int a : l_exponents(d, m)) n += s.power_length(1, a);
    return n;
}

std::size_t label_length(const Construction& c, const GroupWord& label) {
    const auto& ls = label.letters();
    const Word& om = c.omega(ls.size());
    for (std::size_t i = 0; i < ls.size(); ++i) {
        const SignedLetter& x = ls[ls.size() - 1 - i];
        if (x.sign != -1 || x.letter != om[i])
            throw std::invalid_argument(label.to_string() + " is not the inverse of a prefix of the fixed point");
    }
    return ls.size();
}

GroupWord label_word(const Construction& c, std::size_t length) {
    const Word& om = c.omega(length);
    return GroupWord::positive(Word(om.begin(), om.begin() + length)).inverse();
}

int apparition_step(const Construction& c, const GroupWord& label) {
    const std::size_t len = label_length(c, label);
    if (len == 0) return -(c.d() - 2);
    auto v = c.vertex_of_label(len);
    if (!v) throw std::runtime_error("label " + label.to_string() + " does not appear up to stage " +
                                     std::to_string(c.max_stage()));
    return c.record(*v).stage;
}

std::set<GroupWord> branch_inventory(const Construction& c, int m) {
    std::set<GroupWord> out;
    for (VertexId v : c.branch_vertices(m)) out.insert(f0(c, m, v));
    return out;
}

const FreePoint& fq_branch(const Construction& c, std::size_t label) {
    auto v = c.vertex_of_label(label);
    if (!v) throw std::invalid_argument("unknown label of length " + std::to_string(label));
    return c.point(*v);
}

const FreePoint& fq_branch(const Construction& c, const GroupWord& label) {
    return fq_branch(c, label_length(c, label));
}

const FreePoint& fq_approx(const Construction& c, const std::vector<int>& exponents, std::size_t depth) {
    std::size_t len = 0;
    for (std::size_t i = 0; i < exponents.size() && i < depth; ++i) {
        if (exponents[i] < 0 || (i > 0 && exponents[i] - exponents[i - 1] < c.d()))
            throw std::invalid_argument("exponent gaps must be at least d");
        len += c.sigma_one_length(exponents[i]);
    }
    return fq_branch(c, len);
}

std::vector<Arc> simple_arcs(Construction& c, int n) {
    const int d = c.d();
    c.grow_to(n + 2 * d - 2);
    std::vector<Arc> arcs;
    const ColoredTree& tn = c.tree(n);
    for (std::size_t e = 0; e < tn.edges().size(); ++e) {
        const ColoredEdge& ed = tn.edges()[e];
        Arc a;
        a.stage = n;
        a.edge = e;
        a.s = ed.src;
        a.t = ed.dst;
        a.color = ed.color;
        for (int k = 1; k <= 2 * d - 2 && a.steps == 0; ++k) {
            const ColoredTree& tk = c.tree(n + k);
            const auto p = tk.path(ed.src, ed.dst);
            std::vector<VertexId> inner;
            for (std::size_t i = 1; i + 1 < p.size(); ++i)
                if (tk.degree(p[i]) == static_cast<std::size_t>(d)) inner.push_back(p[i]);
            if (inner.size() == 1) {
                a.steps = k;
                a.center = inner[0];
                a.label = c.record(inner[0]).label;
            } else if (inner.size() > 1) {
                throw std::logic_error("several branch points appear at once inside an arc");
            }
        }
        if (a.steps == 0) throw std::logic_error("no branch point inside an arc within 2d-2 steps");
        arcs.push_back(a);
    }
    return arcs;
}

Word arc_label(const Construction& c, const Arc& arc) {
    const Word& om = c.omega(arc.label);
    return Word(om.begin(), om.begin() + arc.label);
}

int determined_partition(int d, int n) {
    if (n < 0) throw std::invalid_argument("negative stage");
    if (n == 0) return 1;
    return static_cast<int>(l_length(d, n)) + 1;
}

PartitionReport partition_report(const Substitution& sub, int m, std::span<const Letter> omega) {
    PartitionReport r;
    r.m = m;
    for (const auto& [u, f] : window_frequencies(omega, m)) r.cylinders.emplace_back(u, f);
    r.class_count = measure_spectrum(sub, m, omega).class_count;
    for (int n = 0; n < 64; ++n) {
        const int mn = determined_partition(sub.alphabet_size(), n);
        if (mn == m) r.determined_by = n;
        if (mn >= m) break;
    }
    return r;
}

nlohmann::json to_json(const PartitionReport& r) {
    nlohmann::json cyl = nlohmann::json::array();
    for (const auto& [u, f] : r.cylinders) cyl.push_back({{"u", to_string(u)}, {"measure", f}});
    nlohmann::json j{{"m", r.m}, {"cylinders", cyl}, {"class_count", r.class_count}};
    j["determined_by"] = r.determined_by ? nlohmann::json(*r.determined_by) : nlohmann::json(nullptr);
    return j;
}

namespace {

bool is_suffix_of_prefix(const Word& om, std::size_t whole, std::size_t part) {
    // prefix(part) is a suffix of prefix(whole)
    if (part > whole) return false;
    return std::equal(om.begin(), om.begin() + part, om.begin() + (whole - part));
}

}  // namespace

std::vector<AuditResult> arc_cylinder_correspondence(Construction& c, int n) {
    const int d = c.d();
    const int m = determined_partition(d, n);
    std::vector<Arc> arcs = simple_arcs(c, n);
    const int deep = n + 2 * d - 2;
    c.grow_to(deep);

    AuditResult bij{"arc-cylinder-bijection", n};
    std::set<Word> suffixes;
    for (const Arc& a : arcs) {
        ++bij.checked;
        if (a.label < static_cast<std::size_t>(m)) {
            bij.fail("arc " + std::to_string(a.s) + "->" + std::to_string(a.t) + " label shorter than m");
            continue;
        }
        const Word u = arc_label(c, a);
        suffixes.insert(Word(u.end() - m, u.end()));
    }
    const std::set<Word> factors = factor_set(c.sigma(), m);
    if (suffixes.size() != arcs.size()) bij.fail("two arcs share a length-" + std::to_string(m) + " suffix");
    if (suffixes != factors) bij.fail("arc suffixes differ from the length-" + std::to_string(m) + " factors");
    if (arcs.size() != static_cast<std::size_t>((d - 1) * m + 1))
        bij.fail("arc count " + std::to_string(arcs.size()) + " != (d-1)m+1");

    AuditResult later{"later-labels-extend-one-arc", n};
    std::size_t longest = 0;
    for (const Arc& a : arcs) longest = std::max(longest, a.label);
    c.omega(c.max_label(c.max_stage()) + 1);
    const Word& om = c.omega(0);
    for (VertexId v : c.branch_vertices(c.max_stage())) {
        const VertexRecord& r = c.record(v);
        if (r.stage <= n) continue;
        ++later.checked;
        const std::size_t anc = c.ancestor_edge(v, n);
        const Arc& a = arcs[anc];
        if (!is_suffix_of_prefix(om, r.label, a.label))
            later.fail("label of vertex " + std::to_string(v) + " does not extend its arc label");
        int hits = 0;
        for (const Arc& b : arcs) hits += is_suffix_of_prefix(om, r.label, b.label);
        if (hits != 1) later.fail("vertex " + std::to_string(v) + " extends " + std::to_string(hits) + " arc labels");
    }

    AuditResult overlap{"arc-subtrees-meet-in-at-most-a-point", n};
    if (c.realized()) {
        const ColoredTree& td = c.tree(deep);
        std::vector<std::vector<std::size_t>> groups(arcs.size());
        for (std::size_t e = 0; e < td.edges().size(); ++e) groups[c.ancestor_edge_of(deep, e, n)].push_back(e);
        for (std::size_t g1 = 0; g1 < groups.size(); ++g1)
            for (std::size_t g2 = g1 + 1; g2 < groups.size(); ++g2)
                for (std::size_t e1 : groups[g1])
                    for (std::size_t e2 : groups[g2]) {
                        const auto& a = td.edges()[e1];
                        const auto& b = td.edges()[e2];
                        ++overlap.checked;
                        if (!segment_overlap(c.point(a.src), c.point(a.dst), c.point(b.src), c.point(b.dst)).is_zero())
                            overlap.fail("descendants of arcs " + std::to_string(g1) + " and " + std::to_string(g2) +
                                         " overlap");
                    }
    } else {
        overlap.fail("construction not realized");
    }
    return {bij, later, overlap};
}

PartialIsometry phi(const Construction& c, Letter a, int n) {
    if (n + 1 > c.max_stage()) throw std::runtime_error("phi needs stage n+1 (increase stage)");
    PartialIsometry p;
    p.a = a;
    p.stage = n;
    std::vector<std::size_t> labels;
    for (VertexId v : c.branch_vertices(n)) labels.push_back(c.record(v).label);
    std::sort(labels.begin(), labels.end());
    const Word& om = c.omega(c.max_label(n) + 2);
    for (std::size_t k : labels) {
        if (om[k] != a) continue;
        auto img = c.vertex_of_label(k + 1);
        if (!img || c.record(*img).stage > n + 1)
            throw std::runtime_error("image label of length " + std::to_string(k + 1) +
                                     " is not a branch point at the scanned stage (increase stage)");
        p.labels.emplace_back(k, k + 1);
    }
    return p;
}

std::vector<AuditResult> isometry_audit(Construction& c, Letter a, int n) {
    c.grow_to(n + 1);
    const PartialIsometry p = phi(c, a, n);
    const ColoredTree& t = c.tree(n + 1);
    AuditResult iso{"phi-" + std::to_string(a) + "-isometry", n};
    AuditResult words{"phi-" + std::to_string(a) + "-path-words", n};
    AuditResult square{"phi-" + std::to_string(a) + "-conjugacy", n};
    const Automorphism none = Automorphism::from_substitution(c.sigma());
    (void)none;
    std::unordered_set<std::string> keys;
    for (const auto& [k, k1] : p.labels) {
        ++square.checked;
        const GroupWord shifted = GroupWord::reduce({{a, -1}}) * label_word(c, k);
        std::size_t len = 0;
        try {
            len = label_length(c, shifted);
        } catch (const std::invalid_argument&) {
            square.fail("a^-1 u^-1 is not a prefix inverse for |u| = " + std::to_string(k));
            continue;
        }
        if (len != k1 || fq_branch(c, len) != fq_branch(c, k1))
            square.fail("shift image mismatch at |u| = " + std::to_string(k));
        if (!keys.insert(fq_branch(c, k).key()).second) square.fail("two domain labels share a point");
    }
    for (std::size_t i = 0; i < p.labels.size(); ++i) {
        for (std::size_t j = i + 1; j < p.labels.size(); ++j) {
            const VertexId x = *c.vertex_of_label(p.labels[i].first);
            const VertexId y = *c.vertex_of_label(p.labels[j].first);
            const VertexId xa = *c.vertex_of_label(p.labels[i].second);
            const VertexId ya = *c.vertex_of_label(p.labels[j].second);
            ++iso.checked;
            ++words.checked;
            if (c.realized() && point_distance(c.point(x), c.point(y)) != point_distance(c.point(xa), c.point(ya)))
                iso.fail("distance changes for |u| = " + std::to_string(p.labels[i].first) + ", " +
                         std::to_string(p.labels[j].first));
            const PathWord w = t.path_word(x, y);
            const PathWord wa = t.path_word(xa, ya);
            bool legal = true;
            for (const auto& s : w) legal &= s.letter <= c.d();
            if (w != wa || !legal)
                words.fail("path words differ for |u| = " + std::to_string(p.labels[i].first) + ", " +
                           std::to_string(p.labels[j].first));
        }
    }
    if (!c.realized()) iso.fail("construction not realized");
    return {iso, words, square};
}

AuditResult cylinder_image_overlap(Construction& c, int n) {
    AuditResult r{"cylinder-images-meet-in-at-most-a-point", n};
    if (!c.realized()) {
        r.fail("construction not realized");
        return r;
    }
    const int d = c.d();
    const Word& om = c.omega(c.max_label(n) + 1);
    std::vector<std::vector<VertexId>> groups(d + 1);
    for (VertexId v : c.branch_vertices(n)) groups[om[c.record(v).label]].push_back(v);
    for (int a = 1; a <= d; ++a) {
        for (int b = a + 1; b <= d; ++b) {
            const auto& ga = groups[a];
            const auto& gb = groups[b];
            if (ga.size() < 2 || gb.size() < 2) continue;
            for (std::size_t i = 1; i < ga.size(); ++i)
                for (std::size_t j = 1; j < gb.size(); ++j) {
                    ++r.checked;
                    const AlgLength o =
                        segment_overlap(c.point(ga[0]), c.point(ga[i]), c.point(gb[0]), c.point(gb[j]));
                    if (!o.is_zero())
                        r.fail("hulls of letters " + std::to_string(a) + " and " + std::to_string(b) + " overlap by " +
                               std::to_string(o.value()));
                }
        }
    }
    return r;
}

AlgLength legal_path_distance(int d, const GroupWord& w) {
    AlgLength sum(d);
    for (const SignedLetter& x : w.letters()) {
        if (x.letter < 1 || x.letter > d) throw std::invalid_argument("legal path letters must lie in 1..d");
        sum += vt_length(d, x.letter);
    }
    return sum;
}

AuditResult bijiso_check(const Construction& c, int n) {
    AuditResult r{"branch-distance-equals-legal-path-length", n};
    const int d = c.d();
    const auto bv = c.branch_vertices(n);
    const ColoredTree& t = c.tree(n);
    for (std::size_t i = 0; i < bv.size(); ++i)
        for (std::size_t j = i + 1; j < bv.size(); ++j) {
            ++r.checked;
            const AlgLength expected = legal_path_distance(d, p_star(d, t.path_word(bv[i], bv[j]))).times_eta_power(-n);
            if (point_distance(c.point(bv[i]), c.point(bv[j])) != expected)
                r.fail("vertices " + std::to_string(bv[i]) + ", " + std::to_string(bv[j]));
        }
    return r;
}

AuditResult apparition_chain_audit(const Construction& c, int up_to) {
    AuditResult r{"apparition-chain", up_to};
    const int d = c.d();
    const Word& om = c.omega(c.max_label(up_to) + 1);
    for (int n = 1; n <= up_to; ++n) {
        const Word head = c.sigma().power_image(static_cast<Letter>(d), n);
        for (VertexId v : c.branch_vertices(n)) {
            const VertexRecord& rec = c.record(v);
            if (rec.stage != n) continue;
            ++r.checked;
            if (rec.label < head.size() || !std::equal(head.begin(), head.end(), om.begin())) {
                r.fail("label of length " + std::to_string(rec.label) + " does not start with sigma^n(d)");
                continue;
            }
            const std::size_t vl = rec.label - head.size();
            int step = -(d - 2);
            if (vl > 0) {
                auto w = c.vertex_of_label(vl);
                if (!w) {
                    r.fail("predecessor label of length " + std::to_string(vl) + " missing");
                    continue;
                }
                step = c.record(*w).stage;
            }
            // u = sigma^n(d) v with v a prefix of omega
            if (!std::equal(om.begin(), om.begin() + vl, om.begin() + head.size()))
                r.fail("remainder of label " + std::to_string(rec.label) + " is not a prefix");
            if (step < n - (2 * d - 2) || step > n - (d - 1))
                r.fail("predecessor of label " + std::to_string(rec.label) + " appears at step " +
                       std::to_string(step));
        }
    }
    return r;
}

AuditResult automatic_writing_audit(const Construction& c, int up_to) {
    AuditResult r{"max-exponent-of-step-n-label", up_to};
    const Word& om = c.omega(c.max_label(up_to) + 1);
    for (int n = 1; n <= up_to; ++n)
        for (VertexId v : c.branch_vertices(n)) {
            const VertexRecord& rec = c.record(v);
            if (rec.stage != n) continue;
            ++r.checked;
            const auto e = automatic_writing(c.sigma(), Word(om.begin(), om.begin() + rec.label));
            if (e.empty() || (e.back() != n && e.back() != n - 1))
                r.fail("label of length " + std::to_string(rec.label) + " at step " + std::to_string(n) +
                       " has max exponent " + (e.empty() ? std::string("none") : std::to_string(e.back())));
        }
    return r;
}

AuditResult color_one_neighbour_audit(const Construction& c, int up_to) {
    AuditResult r{"color-1-neighbour-is-branch", up_to};
    const int d = c.d();
    const Word& om = c.omega(c.max_label(up_to) + 1);
    for (int n = 1; n <= up_to; ++n) {
        const ColoredTree& t = c.tree(n);
        for (VertexId v : c.branch_vertices(n)) {
            const VertexRecord& rec = c.record(v);
            if (rec.stage != n) continue;
            const auto e = automatic_writing(c.sigma(), Word(om.begin(), om.begin() + rec.label));
            if (e.empty() || e.back() != n) continue;
            ++r.checked;
            bool ok = false;
            for (const Incidence& i : t.incident(v))
                if (i.outgoing && i.color == 1) ok = t.degree(i.other) == static_cast<std::size_t>(d);
            if (!ok) r.fail("vertex " + std::to_string(v) + " at step " + std::to_string(n));
        }
    }
    return r;
}

AuditResult f0_bijection_audit(const Construction& c, int direct_up_to) {
    AuditResult r{"f0-bijection-onto-prefix-inverses", c.max_stage()};
    if (c.label_collisions() != 0) r.fail(std::to_string(c.label_collisions()) + " label collisions");
    for (int n = 0; n <= c.max_stage(); ++n) {
        std::vector<std::size_t> labels;
        for (VertexId v : c.branch_vertices(n)) labels.push_back(c.record(v).label);
        std::sort(labels.begin(), labels.end());
        ++r.checked;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] != i) {
                r.fail("stage " + std::to_string(n) + " labels are not 0..|l_n|");
                break;
            }
        if (labels.empty() || labels.back() != l_length(c.d(), n))
            r.fail("stage " + std::to_string(n) + " longest label is not |l_n|");
        if (n > direct_up_to) continue;
        for (VertexId v : c.branch_vertices(n)) {
            ++r.checked;
            if (f0(c, n, v) != label_word(c, c.record(v).label))
                r.fail("direct f0 disagrees at vertex " + std::to_string(v));
        }
    }
    return r;
}

AuditResult l_word_bispecial_audit(int d, int up_to) {
    AuditResult r{"l-words-are-bispecial", up_to};
    const Substitution s = Substitution::family(d);
    const auto gen = bispecial_by_generation(s, l_length(d, up_to));
    for (int m = 1; m <= up_to; ++m) {
        ++r.checked;
        const GroupWord lm = l_word(d, m);
        const GroupWord u = lm.inverse();
        if (static_cast<std::size_t>(m) > gen.size() || GroupWord::positive(gen[m - 1]) != u)
            r.fail("l_" + std::to_string(m) + " is not the " + std::to_string(m) + "-th generated bispecial");
        if (u.size() <= 24 && !language(s, static_cast<int>(u.size())).bispecial.contains(gen[m - 1]))
            r.fail("l_" + std::to_string(m) + " is not bispecial by enumeration");
        if (m < up_to) {
            const GroupWord next = l_word(d, m + 1);
            // l_m is a proper suffix of l_{m+1}
            const auto& a = lm.letters();
            const auto& b = next.letters();
            if (a.size() >= b.size() || !std::equal(a.begin(), a.end(), b.end() - a.size()))
                r.fail("l_" + std::to_string(m) + " is not a proper suffix of l_" + std::to_string(m + 1));
        }
    }
    return r;
}

AuditResult root_arc_audit(Construction& c, int n) {
    AuditResult r{"root-arcs-carry-sigma-k-of-1", n};
    std::set<std::size_t> lengths;
    for (int k = 0; k < 64; ++k) lengths.insert(c.sigma_one_length(k));
    std::size_t at_root = 0;
    for (const Arc& a : simple_arcs(c, n)) {
        if (a.s != 0 && a.t != 0) continue;
        ++at_root;
        ++r.checked;
        if (!lengths.contains(a.label)) r.fail("root arc with label length " + std::to_string(a.label));
    }
    if (at_root != static_cast<std::size_t>(c.d())) r.fail("root has " + std::to_string(at_root) + " arcs");
    return r;
}

}  // namespace arbre
