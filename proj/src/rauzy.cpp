#include "arbre/rauzy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace arbre {

namespace {

constexpr std::array<const char*, 12> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
                                                  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string fmt_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::pair<double, double> project_prefix(const RauzyBasis& b, const Eigen::Vector3d& ab) {
    const Eigen::Vector2d p = -(b.coords * ab);
    return {p(0), p(1)};
}

const RauzyBasis& family_basis() {
    static const RauzyBasis b = contracting_basis(Substitution::family(3).incidence_matrix());
    return b;
}

}  // namespace

RauzyBasis contracting_basis(const IntMatrix& m) {
    const Eigen::MatrixXd md = m.cast<double>();
    Eigen::EigenSolver<Eigen::MatrixXd> es(md);
    const auto& ev = es.eigenvalues();
    int dominant = -1;
    int inside = 0;
    for (int i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i).imag()) < 1e-12 && ev(i).real() > 1.0)
            dominant = dominant < 0 ? i : -2;
        else if (std::abs(ev(i)) < 1.0 - 1e-9)
            ++inside;
    }
    if (dominant < 0 || inside != ev.size() - 1) throw std::invalid_argument("non-Pisot spectrum");
    if (m.rows() != 3)
        throw std::invalid_argument("Rauzy projection requires d=3 (contracting space has dimension " +
                                    std::to_string(m.rows() - 1) + ")");
    int pair = -1;
    for (int i = 0; i < 3; ++i)
        if (i != dominant && ev(i).imag() > 0) pair = i;
    if (pair < 0) throw std::invalid_argument("contracting eigenvalues are not a complex pair");

    RauzyBasis b;
    b.expanding = ev(dominant).real();
    b.contracting_modulus = std::abs(ev(pair));
    b.expanding_vector = es.eigenvectors().col(dominant).real();
    const Eigen::Vector3cd w = es.eigenvectors().col(pair);
    Eigen::Matrix3d p;
    p.col(0) = b.expanding_vector;
    p.col(1) = w.real();
    p.col(2) = w.imag();
    const Eigen::Matrix3d inv = p.inverse();
    b.coords = inv.bottomRows<2>();
    return b;
}

std::pair<double, double> project(const RauzyBasis& b, const std::vector<std::int64_t>& v) {
    if (v.size() != 3) throw std::invalid_argument("projection needs a vector of length 3");
    const Eigen::Vector3d x(static_cast<double>(v[0]), static_cast<double>(v[1]), static_cast<double>(v[2]));
    const Eigen::Vector2d p = b.coords * x;
    return {p(0), p(1)};
}

Coloring Coloring::parse(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("coloring must look like cylinder:M or arc:N");
    Coloring c;
    const std::string kind = s.substr(0, colon);
    if (kind == "cylinder")
        c.kind = Kind::cylinder;
    else if (kind == "arc")
        c.kind = Kind::arc;
    else
        throw std::invalid_argument("unknown coloring " + kind);
    std::size_t used = 0;
    c.value = std::stoi(s.substr(colon + 1), &used);
    if (used != s.size() - colon - 1 || c.value < 0) throw std::invalid_argument("bad coloring parameter");
    if (c.kind == Kind::cylinder && c.value < 1) throw std::invalid_argument("cylinder length must be positive");
    return c;
}

PointCloud fractal_cloud(std::size_t depth, const Coloring& coloring) {
    const RauzyBasis& b = family_basis();
    const Word om = fixed_point_prefix(Substitution::family(3), depth + 1);
    std::vector<std::string> tags(depth + 1, "boundary");
    if (coloring.kind == Coloring::Kind::cylinder) {
        const std::size_t m = static_cast<std::size_t>(coloring.value);
        for (std::size_t k = m; k <= depth; ++k) tags[k] = to_string(Word(om.begin() + (k - m), om.begin() + k));
    } else {
        const int n = coloring.value;
        Construction c(3, n, Construction::Options{false});
        c.grow_to_label(depth);
        c.grow_to(n + 1);
        for (std::size_t k = 0; k <= depth; ++k) {
            const VertexId v = *c.vertex_of_label(k);
            if (c.record(v).stage > n) tags[k] = "arc" + std::to_string(c.ancestor_edge(v, n));
        }
    }
    PointCloud cloud;
    cloud.reserve(depth + 1);
    Eigen::Vector3d ab = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k <= depth; ++k) {
        const auto [x, y] = project_prefix(b, ab);
        cloud.push_back({x, y, tags[k], k});
        if (k < depth) ab(om[k] - 1) += 1.0;
    }
    return cloud;
}

PointCloud zeta_cloud(int n, std::size_t depth) {
    const RauzyBasis& b = family_basis();
    Construction c(3, n, Construction::Options{false});
    c.grow_to_label(depth);
    const int top = c.max_stage();
    const ColoredTree& tn = c.tree(n);
    const ColoredTree& tt = c.tree(top);
    std::map<std::size_t, std::string> tagged;
    for (std::size_t e = 0; e < tn.edges().size(); ++e) {
        const ColoredEdge& ed = tn.edges()[e];
        for (VertexId v : tt.path(ed.src, ed.dst)) {
            const VertexRecord& r = c.record(v);
            if (!r.branch || r.label > depth) continue;
            tagged.emplace(r.label, r.stage <= n ? std::string("vertex") : "arc" + std::to_string(e));
        }
    }
    const Word om = fixed_point_prefix(Substitution::family(3), depth + 1);
    PointCloud cloud;
    Eigen::Vector3d ab = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k <= depth; ++k) {
        auto it = tagged.find(k);
        if (it != tagged.end()) {
            const auto [x, y] = project_prefix(b, ab);
            cloud.push_back({x, y, it->second, k});
        }
        if (k < depth) ab(om[k] - 1) += 1.0;
    }
    return cloud;
}

double orbit_sup_norm(std::size_t depth) {
    const RauzyBasis& b = family_basis();
    const Word om = fixed_point_prefix(Substitution::family(3), depth);
    Eigen::Vector3d ab = Eigen::Vector3d::Zero();
    double best = 0.0;
    for (std::size_t k = 0; k <= depth; ++k) {
        best = std::max(best, (b.coords * ab).norm());
        if (k < depth) ab(om[k] - 1) += 1.0;
    }
    return best;
}

std::vector<double> sigma_power_norms(int kmax) {
    const RauzyBasis& b = family_basis();
    const IntMatrix m = Substitution::family(3).incidence_matrix();
    Eigen::Matrix<std::int64_t, 3, 1> v(1, 0, 0);
    std::vector<double> out;
    for (int k = 0; k <= kmax; ++k) {
        out.push_back((b.coords * v.cast<double>()).norm());
        v = m * v;
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> collisions(const PointCloud& cloud, double eps) {
    std::vector<std::size_t> idx(cloud.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return cloud[a].x < cloud[b].x; });
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size() && cloud[idx[j]].x - cloud[idx[i]].x <= eps; ++j) {
            const CloudPoint& p = cloud[idx[i]];
            const CloudPoint& q = cloud[idx[j]];
            if (std::abs(p.y - q.y) <= eps && p.label != q.label)
                out.emplace_back(std::min(p.label, q.label), std::max(p.label, q.label));
        }
    std::sort(out.begin(), out.end());
    return out;
}

bool same_partition(const PointCloud& a, const PointCloud& b) {
    if (a.size() != b.size()) return false;
    std::map<std::string, std::string> ab;
    std::map<std::string, std::string> ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].label != b[i].label || a[i].x != b[i].x || a[i].y != b[i].y) return false;
        auto [it1, new1] = ab.emplace(a[i].tag, b[i].tag);
        auto [it2, new2] = ba.emplace(b[i].tag, a[i].tag);
        if (it1->second != b[i].tag || it2->second != a[i].tag) return false;
    }
    return true;
}

namespace {

using Pts = std::vector<std::pair<double, double>>;

Pts centred(const Pts& p) {
    double cx = 0.0, cy = 0.0;
    for (const auto& [x, y] : p) cx += x, cy += y;
    cx /= static_cast<double>(p.size());
    cy /= static_cast<double>(p.size());
    Pts out;
    out.reserve(p.size());
    for (const auto& [x, y] : p) out.emplace_back(x - cx, y - cy);
    std::sort(out.begin(), out.end());
    return out;
}

// Mean squared distance from each point of a to its nearest point of sorted b.
double mean_sq_nn(const Pts& a, const Pts& b) {
    double sum = 0.0;
    for (const auto& [x, y] : a) {
        const auto start = std::lower_bound(b.begin(), b.end(), std::make_pair(x, -std::numeric_limits<double>::infinity()));
        double best = std::numeric_limits<double>::infinity();
        for (auto it = start; it != b.end(); ++it) {
            const double dx = it->first - x;
            if (dx * dx >= best) break;
            best = std::min(best, dx * dx + (it->second - y) * (it->second - y));
        }
        for (auto it = start; it != b.begin();) {
            --it;
            const double dx = x - it->first;
            if (dx * dx >= best) break;
            best = std::min(best, dx * dx + (it->second - y) * (it->second - y));
        }
        sum += best;
    }
    return sum / static_cast<double>(a.size());
}

}  // namespace

double congruence_discrepancy(const Pts& a, const Pts& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty point set");
    const Pts ca = centred(a);
    const Pts cb = centred(b);
    double diam2 = 0.0;
    double minx = ca.front().first, maxx = ca.back().first, miny = ca.front().second, maxy = miny;
    for (const auto& p : ca) miny = std::min(miny, p.second), maxy = std::max(maxy, p.second);
    diam2 = (maxx - minx) * (maxx - minx) + (maxy - miny) * (maxy - miny);
    if (diam2 == 0.0) return 0.0;
    const double rms = std::sqrt(0.5 * (mean_sq_nn(ca, cb) + mean_sq_nn(cb, ca)));
    return rms / std::sqrt(diam2);
}

std::string render_svg(const PointCloud& cloud) {
    constexpr double size = 800.0;
    constexpr double margin = 20.0;
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n"
        "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\" stroke=\"black\"/>\n";
    if (!cloud.empty()) {
        double minx = cloud[0].x, maxx = minx, miny = cloud[0].y, maxy = miny;
        for (const auto& p : cloud) {
            minx = std::min(minx, p.x), maxx = std::max(maxx, p.x);
            miny = std::min(miny, p.y), maxy = std::max(maxy, p.y);
        }
        const double span = std::max({maxx - minx, maxy - miny, 1e-12});
        const double scale = (size - 2 * margin) / span;
        std::map<std::string, std::vector<const CloudPoint*>> groups;
        for (const auto& p : cloud) groups[p.tag].push_back(&p);
        std::size_t color = 0;
        for (const auto& [tag, pts] : groups) {
            out += "<g fill=\"" + std::string(kPalette[color++ % kPalette.size()]) + "\" data-tag=\"" + tag + "\">\n";
            for (const CloudPoint* p : pts)
                out += "<circle cx=\"" + fmt(margin + (p->x - minx) * scale) + "\" cy=\"" +
                       fmt(size - margin - (p->y - miny) * scale) + "\" r=\"1.2\"/>\n";
            out += "</g>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

std::string cloud_csv(const PointCloud& cloud) {
    std::string out = "x,y,tag\n";
    for (const auto& p : cloud) out += fmt_full(p.x) + "," + fmt_full(p.y) + "," + p.tag + "\n";
    return out;
}

}  // namespace arbre
