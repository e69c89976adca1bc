#include "arbre/tree_subst.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace arbre {

ColoredTree::ColoredTree(std::vector<VertexId> vertices, std::vector<ColoredEdge> edges,
                         std::optional<VertexId> root)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), root_(root) {
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
        throw std::invalid_argument("duplicate vertex id");
    std::sort(edges_.begin(), edges_.end());
    if (vertices_.empty()) {
        if (!edges_.empty() || root_) throw std::invalid_argument("edges on an empty vertex set");
        return;
    }
    if (edges_.size() + 1 != vertices_.size()) throw std::invalid_argument("edge count is not |V|-1");
    adj_.assign(vertices_.size(), {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const ColoredEdge& ed = edges_[e];
        if (ed.src == ed.dst) throw std::invalid_argument("loop edge");
        if (ed.color < 1) throw std::invalid_argument("colors start at 1");
        if (!has_vertex(ed.src) || !has_vertex(ed.dst)) throw std::invalid_argument("edge endpoint not a vertex");
        adj_[index(ed.src)].push_back({ed.dst, ed.color, true, e});
        adj_[index(ed.dst)].push_back({ed.src, ed.color, false, e});
    }
    if (root_ && !has_vertex(*root_)) throw std::invalid_argument("root is not a vertex");
    const std::size_t n = vertices_.size();
    const std::size_t none = n;
    parent_.assign(n, none);
    parent_edge_.assign(n, edges_.size());
    depth_.assign(n, 0);
    const std::size_t start = root_ ? index(*root_) : 0;
    std::vector<std::size_t> stack{start};
    parent_[start] = start;
    std::size_t seen = 1;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (const Incidence& inc : adj_[v]) {
            std::size_t w = index(inc.other);
            if (parent_[w] != none) continue;
            parent_[w] = v;
            parent_edge_[w] = inc.edge;
            depth_[w] = depth_[v] + 1;
            ++seen;
            stack.push_back(w);
        }
    }
    if (seen != n) throw std::invalid_argument("tree is not connected");
}

VertexId ColoredTree::max_id() const {
    if (vertices_.empty()) throw std::logic_error("empty tree");
    return vertices_.back();
}

bool ColoredTree::has_vertex(VertexId v) const { return std::binary_search(vertices_.begin(), vertices_.end(), v); }

std::size_t ColoredTree::index(VertexId v) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end() || *it != v) throw std::out_of_range("vertex " + std::to_string(v) + " absent");
    return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t ColoredTree::degree(VertexId v) const { return adj_[index(v)].size(); }

const std::vector<Incidence>& ColoredTree::incident(VertexId v) const { return adj_[index(v)]; }

void ColoredTree::climb(std::size_t x, std::size_t y, std::vector<Step>& up_x, std::vector<Step>& up_y) const {
    while (depth_[x] > depth_[y]) {
        up_x.push_back({x, parent_edge_[x]});
        x = parent_[x];
    }
    while (depth_[y] > depth_[x]) {
        up_y.push_back({y, parent_edge_[y]});
        y = parent_[y];
    }
    while (x != y) {
        up_x.push_back({x, parent_edge_[x]});
        up_y.push_back({y, parent_edge_[y]});
        x = parent_[x];
        y = parent_[y];
    }
}

PathWord ColoredTree::path_word(VertexId x, VertexId y) const {
    std::vector<Step> ux, uy;
    climb(index(x), index(y), ux, uy);
    PathWord w;
    w.reserve(ux.size() + uy.size());
    for (const Step& s : ux) {
        const ColoredEdge& e = edges_[s.edge];
        w.push_back({e.color, e.src == vertices_[s.at] ? 1 : -1});
    }
    for (auto it = uy.rbegin(); it != uy.rend(); ++it) {
        const ColoredEdge& e = edges_[it->edge];
        w.push_back({e.color, e.dst == vertices_[it->at] ? 1 : -1});
    }
    return w;
}

std::vector<VertexId> ColoredTree::path(VertexId x, VertexId y) const {
    std::vector<Step> ux, uy;
    climb(index(x), index(y), ux, uy);
    std::vector<VertexId> p;
    for (const Step& s : ux) p.push_back(vertices_[s.at]);
    p.push_back(ux.empty() ? x : vertices_[parent_[ux.back().at]]);
    if (uy.empty() && ux.empty()) return {x};
    for (auto it = uy.rbegin(); it != uy.rend(); ++it) p.push_back(vertices_[it->at]);
    return p;
}

std::vector<std::size_t> ColoredTree::path_edges(VertexId x, VertexId y) const {
    std::vector<Step> ux, uy;
    climb(index(x), index(y), ux, uy);
    std::vector<std::size_t> out;
    for (const Step& s : ux) out.push_back(s.edge);
    for (auto it = uy.rbegin(); it != uy.rend(); ++it) out.push_back(it->edge);
    return out;
}

std::size_t ColoredTree::distance(VertexId x, VertexId y) const { return path_edges(x, y).size(); }

bool ColoredTree::is_discerned() const {
    // A word containing a-bar a or a a-bar would need two outgoing, or two incoming, edges of color a.
    for (const auto& inc : adj_) {
        std::set<int> out_colors, in_colors;
        for (const Incidence& i : inc) {
            auto& s = i.outgoing ? out_colors : in_colors;
            if (!s.insert(i.color).second) return false;
        }
    }
    return true;
}

std::vector<VertexId> ColoredTree::branch_points(std::size_t degree) const {
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (adj_[i].size() == degree) out.push_back(vertices_[i]);
    return out;
}

ColoredTree ColoredTree::ball(std::size_t radius) const {
    if (!root_) throw std::logic_error("ball requires a rooted tree");
    std::vector<VertexId> keep;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (depth_[i] <= radius) keep.push_back(vertices_[i]);
    std::vector<ColoredEdge> edges;
    for (const ColoredEdge& e : edges_)
        if (depth_[index(e.src)] <= radius && depth_[index(e.dst)] <= radius) edges.push_back(e);
    return ColoredTree(std::move(keep), std::move(edges), root_);
}

nlohmann::json ColoredTree::to_json(int d) const {
    nlohmann::json j;
    j["d"] = d;
    j["root"] = root_ ? nlohmann::json(*root_) : nlohmann::json(nullptr);
    j["vertices"] = vertices_;
    nlohmann::json e = nlohmann::json::array();
    for (const ColoredEdge& ed : edges_) e.push_back({ed.src, ed.dst, ed.color});
    j["edges"] = e;
    return j;
}

ColoredTree ColoredTree::from_json(const nlohmann::json& j) {
    std::vector<VertexId> vs = j.at("vertices").get<std::vector<VertexId>>();
    std::vector<ColoredEdge> es;
    for (const auto& e : j.at("edges")) es.push_back({e.at(0).get<VertexId>(), e.at(1).get<VertexId>(), e.at(2).get<int>()});
    std::optional<VertexId> root;
    if (j.contains("root") && !j["root"].is_null()) root = j["root"].get<VertexId>();
    return ColoredTree(std::move(vs), std::move(es), root);
}

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

const char* palette(int color) { return kPalette[(color - 1) % 10]; }

}  // namespace

std::string ColoredTree::to_dot(const std::string& name) const {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        os << "  " << vertices_[i] << " [shape=" << (adj_[i].size() > 1 ? "circle" : "point");
        if (root_ && *root_ == vertices_[i]) os << ",style=bold";
        os << "];\n";
    }
    for (const ColoredEdge& e : edges_)
        os << "  " << e.src << " -> " << e.dst << " [label=\"" << e.color << "\",color=\"" << palette(e.color)
           << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string canonical_form(const ColoredTree& t, VertexId root) {
    // Iterative post-order so deep trees do not exhaust the stack.
    struct Frame {
        VertexId v;
        VertexId parent;
        bool has_parent;
        std::size_t next;
        std::vector<std::string> parts;
    };
    std::vector<Frame> stack;
    stack.push_back({root, 0, false, 0, {}});
    std::string result;
    while (!stack.empty()) {
        Frame& f = stack.back();
        const auto& inc = t.incident(f.v);
        if (f.next < inc.size()) {
            const Incidence& i = inc[f.next++];
            if (f.has_parent && i.other == f.parent) continue;
            stack.push_back({i.other, f.v, true, 0, {}});
            continue;
        }
        std::sort(f.parts.begin(), f.parts.end());
        std::string code = "(";
        for (const auto& p : f.parts) code += p;
        code += ")";
        const VertexId v = f.v;
        const VertexId parent = f.parent;
        const bool has_parent = f.has_parent;
        stack.pop_back();
        if (!has_parent) {
            result = std::move(code);
            break;
        }
        // find the edge between parent and v
        for (const Incidence& i : t.incident(parent)) {
            if (i.other != v) continue;
            stack.back().parts.push_back((i.outgoing ? ">" : "<") + std::to_string(i.color) + code);
            break;
        }
    }
    return result;
}

std::string ValidationReport::summary() const {
    if (ok()) return "valid";
    std::string s;
    for (const auto& v : violations) {
        if (!s.empty()) s += "; ";
        s += "condition " + std::to_string(v.condition) + ": " + v.witness;
    }
    return s;
}

TreeSubstitution::TreeSubstitution(int alphabet_size, std::vector<RulePattern> rules)
    : colors_(alphabet_size), rules_(std::move(rules)) {
    if (alphabet_size < 1) throw std::invalid_argument("alphabet must be nonempty");
    std::stable_sort(rules_.begin(), rules_.end(),
                     [](const RulePattern& a, const RulePattern& b) { return a.color < b.color; });
}

TreeSubstitution TreeSubstitution::family(int d) {
    if (d < 3) throw std::invalid_argument("family requires d >= 3");
    std::vector<RulePattern> rules;
    rules.push_back({1, {{0, 1, d}}});
    RulePattern star{2, {{2, 0, d}, {2, 1, 1}}};
    for (int h = 1; h <= d - 2; ++h) star.edges.push_back({2, 2 + h, d + h});
    rules.push_back(star);
    for (int i = 3; i <= d; ++i) rules.push_back({i, {{0, 1, i - 1}}});
    rules.push_back({d + 1, {{0, 1, 1}}});
    for (int i = d + 2; i <= 2 * d - 2; ++i) rules.push_back({i, {{0, 1, i - 1}}});
    return TreeSubstitution(2 * d - 2, std::move(rules));
}

TreeSubstitution family_rules(int d) { return TreeSubstitution::family(d); }

const RulePattern& TreeSubstitution::rule(int color) const {
    for (const auto& r : rules_)
        if (r.color == color) return r;
    throw std::out_of_range("no rule for color " + std::to_string(color));
}

namespace {

std::optional<ColoredTree> pattern_tree(const RulePattern& r, std::string* why) {
    std::set<VertexId> vs;
    std::vector<ColoredEdge> es;
    for (const auto& e : r.edges) {
        if (e.src < 0 || e.dst < 0) {
            if (why) *why = "negative vertex symbol";
            return std::nullopt;
        }
        vs.insert(static_cast<VertexId>(e.src));
        vs.insert(static_cast<VertexId>(e.dst));
        es.push_back({static_cast<VertexId>(e.src), static_cast<VertexId>(e.dst), e.color});
    }
    try {
        return ColoredTree(std::vector<VertexId>(vs.begin(), vs.end()), es);
    } catch (const std::invalid_argument& ex) {
        if (why) *why = ex.what();
        return std::nullopt;
    }
}

std::string symbol(int s) {
    if (s == 0) return "X";
    if (s == 1) return "Y";
    return "P" + std::to_string(s - 1);
}

}  // namespace

ValidationReport TreeSubstitution::validate() const {
    ValidationReport rep;
    std::map<int, int> count;
    for (const auto& r : rules_) ++count[r.color];
    for (int c = 1; c <= colors_; ++c) {
        if (count[c] == 0) rep.violations.push_back({2, "no image for color " + std::to_string(c)});
        if (count[c] > 1) rep.violations.push_back({2, "several images for color " + std::to_string(c)});
    }
    for (const auto& r : rules_) {
        const std::string tag = "image of color " + std::to_string(r.color);
        if (r.color < 1 || r.color > colors_) rep.violations.push_back({2, tag + " is outside the alphabet"});
        bool has_x = false, has_y = false;
        for (const auto& e : r.edges) {
            has_x |= (e.src == 0 || e.dst == 0);
            has_y |= (e.src == 1 || e.dst == 1);
            if (e.color < 1 || e.color > colors_)
                rep.violations.push_back({0, tag + " uses color " + std::to_string(e.color)});
        }
        if (!has_x) rep.violations.push_back({1, tag + " does not contain anchor X"});
        if (!has_y) rep.violations.push_back({1, tag + " does not contain anchor Y"});
        std::string why;
        if (!pattern_tree(r, &why)) rep.violations.push_back({0, tag + " is not a tree (" + why + ")"});
    }
    if (!rep.ok()) return rep;

    // Condition 3: instantiate on a path of two edges per color pair; fresh vertices must be disjoint.
    for (const auto& r1 : rules_) {
        for (const auto& r2 : rules_) {
            ColoredTree two({0, 1, 2}, {{0, 1, r1.color}, {1, 2, r2.color}});
            SubstitutionResult res = apply(two);
            std::map<std::size_t, std::set<VertexId>> fresh;
            for (std::size_t e = 0; e < res.tree.edges().size(); ++e) {
                const auto& ed = res.tree.edges()[e];
                for (VertexId v : {ed.src, ed.dst})
                    if (v > 2) fresh[res.edge_parent[e]].insert(v);
            }
            std::vector<VertexId> both;
            std::set_intersection(fresh[0].begin(), fresh[0].end(), fresh[1].begin(), fresh[1].end(),
                                  std::back_inserter(both));
            if (!both.empty())
                rep.violations.push_back({3, "images of colors " + std::to_string(r1.color) + " and " +
                                                 std::to_string(r2.color) + " share fresh vertices"});
        }
    }

    // Condition 4: colors lying on a cycle of "direct anchor edge" links need anchors of degree 1.
    std::vector<std::vector<int>> next(colors_ + 1);
    for (const auto& r : rules_) {
        std::map<int, int> forward, backward;
        for (const auto& e : r.edges) {
            if (e.src == 0 && e.dst == 1) ++forward[e.color];
            if (e.src == 1 && e.dst == 0) ++backward[e.color];
        }
        for (int c = 1; c <= colors_; ++c)
            if ((forward[c] > 0) != (backward[c] > 0)) next[r.color].push_back(c);
    }
    for (const auto& r : rules_) {
        // r.color lies on a cycle iff it is reachable from one of its successors
        std::vector<char> seen(colors_ + 1, 0);
        std::vector<int> stack(next[r.color].begin(), next[r.color].end());
        bool cyclic = false;
        while (!stack.empty() && !cyclic) {
            int c = stack.back();
            stack.pop_back();
            if (c == r.color) cyclic = true;
            if (seen[c]) continue;
            seen[c] = 1;
            for (int n : next[c]) stack.push_back(n);
        }
        if (!cyclic) continue;
        int deg_x = 0, deg_y = 0;
        for (const auto& e : r.edges) {
            deg_x += (e.src == 0) + (e.dst == 0);
            deg_y += (e.src == 1) + (e.dst == 1);
        }
        if (deg_x != 1 || deg_y != 1)
            rep.violations.push_back({4, "color " + std::to_string(r.color) +
                                             " lies on a direct-edge color cycle but its anchors have degrees " +
                                             std::to_string(deg_x) + "," + std::to_string(deg_y)});
    }
    return rep;
}

SubstitutionResult TreeSubstitution::apply(const ColoredTree& t) const {
    SubstitutionResult res;
    if (t.vertex_count() == 0) return res;
    VertexId next = t.max_id() + 1;
    res.first_fresh = next;
    std::vector<std::pair<ColoredEdge, std::size_t>> out;
    std::vector<VertexId> vertices = t.vertices();
    for (std::size_t ei = 0; ei < t.edges().size(); ++ei) {
        const ColoredEdge& e = t.edges()[ei];
        const RulePattern& r = rule(e.color);
        int max_symbol = 1;
        for (const auto& pe : r.edges) max_symbol = std::max({max_symbol, pe.src, pe.dst});
        std::vector<VertexId> map(max_symbol + 1);
        map[0] = e.src;
        map[1] = e.dst;
        for (int s = 2; s <= max_symbol; ++s) {
            map[s] = next++;
            vertices.push_back(map[s]);
        }
        for (const auto& pe : r.edges) out.push_back({{map[pe.src], map[pe.dst], pe.color}, ei});
    }
    std::sort(out.begin(), out.end());
    std::vector<ColoredEdge> edges;
    edges.reserve(out.size());
    res.edge_parent.reserve(out.size());
    for (const auto& [e, p] : out) {
        edges.push_back(e);
        res.edge_parent.push_back(p);
    }
    res.tree = ColoredTree(std::move(vertices), std::move(edges), t.root());
    return res;
}

PathWord TreeSubstitution::trunk_word(int color) const {
    std::string why;
    auto t = pattern_tree(rule(color), &why);
    if (!t) throw std::invalid_argument("image of color " + std::to_string(color) + " is not a tree: " + why);
    return t->path_word(0, 1);
}

IntMatrix TreeSubstitution::trunk_matrix() const {
    IntMatrix m = IntMatrix::Zero(colors_, colors_);
    for (int j = 1; j <= colors_; ++j)
        for (const SignedLetter& x : trunk_word(j)) m(x.letter - 1, j - 1) += 1;
    return m;
}

IntMatrix TreeSubstitution::incidence_matrix() const {
    IntMatrix m = IntMatrix::Zero(colors_, colors_);
    for (int j = 1; j <= colors_; ++j)
        for (const auto& e : rule(j).edges) m(e.color - 1, j - 1) += 1;
    return m;
}

nlohmann::json TreeSubstitution::to_json() const {
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& r : rules_) {
        nlohmann::json edges = nlohmann::json::array();
        for (const auto& e : r.edges) edges.push_back({symbol(e.src), symbol(e.dst), e.color});
        rules.push_back({{"color", r.color}, {"edges", edges}});
    }
    return {{"alphabet_size", colors_}, {"rules", rules}};
}

TreeSubstitution TreeSubstitution::from_json(const nlohmann::json& j) {
    auto parse_symbol = [](const std::string& s) -> int {
        if (s == "X") return 0;
        if (s == "Y") return 1;
        if (s.size() >= 2 && s[0] == 'P') {
            int k = std::stoi(s.substr(1));
            if (k >= 1) return k + 1;
        }
        throw std::invalid_argument("unknown pattern vertex symbol: " + s);
    };
    int colors = 0;
    if (j.contains("alphabet_size"))
        colors = j["alphabet_size"].get<int>();
    else if (j.contains("d"))
        colors = 2 * j["d"].get<int>() - 2;
    else
        throw std::invalid_argument("rules file needs \"alphabet_size\" or \"d\"");
    std::vector<RulePattern> rules;
    for (const auto& r : j.at("rules")) {
        RulePattern p;
        p.color = r.at("color").get<int>();
        for (const auto& e : r.at("edges"))
            p.edges.push_back({parse_symbol(e.at(0).get<std::string>()), parse_symbol(e.at(1).get<std::string>()),
                               e.at(2).get<int>()});
        rules.push_back(std::move(p));
    }
    return TreeSubstitution(colors, std::move(rules));
}

ColoredTree initial_tree(int d) {
    const TreeSubstitution ts = TreeSubstitution::family(d);
    ColoredTree t({0, 1}, {{0, 1, 2}});
    for (int i = 0; i < d - 1; ++i) t = ts(t);
    const VertexId center = 2;  // the first fresh vertex: center of the first star
    if (t.degree(center) != static_cast<std::size_t>(d) || t.edge_count() != static_cast<std::size_t>(d))
        throw std::logic_error("iterated image of X_2 is not a star");
    std::map<VertexId, VertexId> relabel{{center, 0}};
    for (const Incidence& i : t.incident(center)) {
        if (!i.outgoing) throw std::logic_error("star edge not oriented away from its center");
        relabel[i.other] = static_cast<VertexId>(i.color);
    }
    std::vector<VertexId> vs;
    std::vector<ColoredEdge> es;
    for (const auto& [from, to] : relabel) vs.push_back(to);
    for (const ColoredEdge& e : t.edges()) es.push_back({relabel.at(e.src), relabel.at(e.dst), e.color});
    return ColoredTree(std::move(vs), std::move(es), VertexId{0});
}

ColoredTree iterate(const TreeSubstitution& ts, const ColoredTree& t0, int n) {
    if (n < 0) throw std::invalid_argument("negative stage");
    ColoredTree t = t0;
    for (int i = 0; i < n; ++i) t = ts(t);
    return t;
}

}  // namespace arbre
