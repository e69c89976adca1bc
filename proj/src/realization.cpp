#include "arbre/realization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace arbre {

double eta_value(int d) {
    if (d < 2) throw std::invalid_argument("eta needs d >= 2");
    static double cache[64] = {};
    if (d < 64 && cache[d] != 0.0) return cache[d];
    long double x = 1.5L;
    for (int i = 0; i < 200; ++i) {
        long double f = std::pow(x, d) - x - 1.0L;
        long double fp = d * std::pow(x, d - 1) - 1.0L;
        long double step = f / fp;
        x -= step;
        if (std::fabs(step) < 1e-19L) break;
    }
    if (d < 64) cache[d] = static_cast<double>(x);
    return static_cast<double>(x);
}

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Z[eta] coefficient overflow");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Z[eta] coefficient overflow");
    return r;
}

// c <- c * eta, using eta^d = eta + 1
void mul_eta(std::vector<std::int64_t>& c) {
    const std::size_t d = c.size();
    const std::int64_t top = c[d - 1];
    for (std::size_t i = d - 1; i > 0; --i) c[i] = c[i - 1];
    c[0] = top;
    c[1] = checked_add(c[1], top);
}

// c <- c / eta, using 1/eta = eta^(d-1) - 1
void div_eta(std::vector<std::int64_t>& c) {
    const std::size_t d = c.size();
    const std::int64_t low = c[0];
    for (std::size_t i = 0; i + 1 < d; ++i) c[i] = c[i + 1];
    c[d - 1] = low;
    c[0] = checked_add(c[0], -low);
}

}  // namespace

AlgLength::AlgLength(int d) : d_(d), c_(d, 0), scale_(0) {
    if (d < 2) throw std::invalid_argument("AlgLength needs d >= 2");
}

AlgLength::AlgLength(int d, std::vector<std::int64_t> coeffs, int scale) : d_(d), c_(std::move(coeffs)), scale_(scale) {
    if (d < 2) throw std::invalid_argument("AlgLength needs d >= 2");
    if (static_cast<int>(c_.size()) > d) {
        // fold higher powers down with eta^d = eta + 1
        for (std::size_t i = c_.size() - 1; i >= static_cast<std::size_t>(d); --i) {
            const std::int64_t v = c_[i];
            c_[i - d] = checked_add(c_[i - d], v);
            c_[i - d + 1] = checked_add(c_[i - d + 1], v);
        }
        c_.resize(d);
    }
    c_.resize(d, 0);
}

AlgLength AlgLength::integer(int d, std::int64_t v) {
    AlgLength a(d);
    a.c_[0] = v;
    return a;
}

AlgLength AlgLength::eta_power(int d, int k) {
    AlgLength a(d);
    if (k >= 0 && k < d) {
        a.c_[k] = 1;
        return a;
    }
    if (k < 0) {
        a.c_[0] = 1;
        a.scale_ = -k;
        return a;
    }
    a.c_[0] = 1;
    return a.times_eta_power(k);
}

void AlgLength::check_same(const AlgLength& o) const {
    if (d_ != o.d_ || d_ == 0) throw std::invalid_argument("AlgLength degree mismatch");
}

AlgLength AlgLength::raised_to(int scale) const {
    AlgLength r = *this;
    while (r.scale_ < scale) {
        mul_eta(r.c_);
        ++r.scale_;
    }
    while (r.scale_ > scale) {
        div_eta(r.c_);
        --r.scale_;
    }
    return r;
}

AlgLength AlgLength::operator+(const AlgLength& o) const {
    check_same(o);
    const int s = std::max(scale_, o.scale_);
    AlgLength a = raised_to(s);
    AlgLength b = o.raised_to(s);
    for (int i = 0; i < d_; ++i) a.c_[i] = checked_add(a.c_[i], b.c_[i]);
    return a;
}

AlgLength AlgLength::operator-() const {
    AlgLength a = *this;
    for (auto& x : a.c_) x = checked_mul(x, -1);
    return a;
}

AlgLength AlgLength::operator-(const AlgLength& o) const { return *this + (-o); }

AlgLength AlgLength::times_eta_power(int k) const {
    // multiplying by eta^k is a scale shift
    AlgLength a = *this;
    a.scale_ -= k;
    return a;
}

AlgLength AlgLength::times_integer(std::int64_t k) const {
    AlgLength a = *this;
    for (auto& x : a.c_) x = checked_mul(x, k);
    return a;
}

bool AlgLength::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](std::int64_t x) { return x == 0; });
}

double AlgLength::value() const {
    if (d_ == 0) return 0.0;
    const long double eta = eta_value(d_);
    long double v = 0.0L, p = 1.0L;
    for (int i = 0; i < d_; ++i) {
        v += static_cast<long double>(c_[i]) * p;
        p *= eta;
    }
    return static_cast<double>(v * std::pow(eta, -static_cast<long double>(scale_)));
}

int AlgLength::sign() const {
    if (is_zero()) return 0;
    const long double eta = eta_value(d_);
    long double v = 0.0L, mag = 0.0L, p = 1.0L;
    for (int i = 0; i < d_; ++i) {
        v += static_cast<long double>(c_[i]) * p;
        mag += std::fabs(static_cast<long double>(c_[i])) * p;
        p *= eta;
    }
    if (std::fabs(v) <= mag * 1e-13L) throw std::runtime_error("sign of " + to_string() + " is not certified");
    return v > 0 ? 1 : -1;
}

AlgLength AlgLength::canonical() const { return raised_to(0); }

bool AlgLength::operator==(const AlgLength& o) const {
    if (d_ != o.d_) return false;
    const int s = std::max(scale_, o.scale_);
    return raised_to(s).c_ == o.raised_to(s).c_;
}

std::string AlgLength::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < d_; ++i) os << (i ? "," : "") << c_[i];
    os << "]/eta^" << scale_;
    return os.str();
}

nlohmann::json AlgLength::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (auto x : c_) j.push_back(x);
    j.push_back(scale_);
    return j;
}

AlgLength vt_length(int d, int color) {
    if (color < 1 || color > 2 * d - 2) throw std::invalid_argument("color out of range");
    if (color == 1) return AlgLength::integer(d, 1);
    if (color <= d) return AlgLength::eta_power(d, d - color + 1);
    return AlgLength::eta_power(d, -(color - d));
}

FreePoint FreePoint::syllable(int d, int copy, const AlgLength& t) {
    FreePoint p(d);
    p.push(copy, t);
    return p;
}

void FreePoint::push(int copy, const AlgLength& t) {
    if (copy < 0 || copy >= d_) throw std::invalid_argument("copy index out of range");
    if (t.is_zero()) return;
    if (!s_.empty() && s_.back().copy == copy) {
        AlgLength sum = s_.back().length + t;
        if (sum.is_zero())
            s_.pop_back();
        else
            s_.back().length = sum;
        return;
    }
    s_.push_back({copy, t});
}

FreePoint FreePoint::inverse() const {
    FreePoint p(d_);
    for (auto it = s_.rbegin(); it != s_.rend(); ++it) p.s_.push_back({it->copy, -it->length});
    return p;
}

FreePoint FreePoint::operator*(const FreePoint& o) const {
    if (d_ != o.d_) throw std::invalid_argument("FreePoint degree mismatch");
    FreePoint p = *this;
    for (const Syllable& s : o.s_) p.push(s.copy, s.length);
    return p;
}

FreePoint FreePoint::times(int copy, const AlgLength& t) const {
    FreePoint p = *this;
    p.push(copy, t);
    return p;
}

AlgLength FreePoint::norm() const {
    AlgLength sum(d_ < 2 ? 2 : d_);
    for (const Syllable& s : s_) sum += s.length.abs();
    return sum;
}

bool FreePoint::operator==(const FreePoint& o) const { return d_ == o.d_ && s_ == o.s_; }

std::string FreePoint::key() const {
    std::string k;
    for (const Syllable& s : s_) {
        k += std::to_string(s.copy) + ":";
        const AlgLength canon = s.length.canonical();
        for (auto c : canon.coeffs()) k += std::to_string(c) + ",";
        k += "|";
    }
    return k;
}

std::string FreePoint::to_string() const {
    if (s_.empty()) return "O";
    std::string out;
    for (std::size_t i = 0; i < s_.size(); ++i) {
        if (i) out += ".";
        out += std::to_string(s_[i].copy) + "^" + s_[i].length.to_string();
    }
    return out;
}

nlohmann::json FreePoint::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const Syllable& s : s_) {
        nlohmann::json e = nlohmann::json::array({s.copy});
        for (auto c : s.length.coeffs()) e.push_back(c);
        e.push_back(s.length.scale());
        j.push_back(e);
    }
    return j;
}

std::pair<double, double> FreePoint::planar() const {
    double x = 0.0, y = 0.0;
    for (const Syllable& s : s_) {
        const double a = 2.0 * std::numbers::pi * s.copy / d_;
        const double t = s.length.value();
        x += t * std::cos(a);
        y += t * std::sin(a);
    }
    return {x, y};
}

AlgLength point_distance(const FreePoint& p, const FreePoint& q) { return (p.inverse() * q).norm(); }

namespace {

// Gromov product (x|y) at the origin: length of the common initial segment of the geodesics O->x, O->y.
AlgLength common_prefix(const FreePoint& x, const FreePoint& y) {
    AlgLength acc(x.degree());
    const auto& a = x.syllables();
    const auto& b = y.syllables();
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i].copy != b[i].copy) break;
        const int sa = a[i].length.sign();
        const int sb = b[i].length.sign();
        if (sa != sb) break;
        if (a[i].length == b[i].length) {
            acc += a[i].length.abs();
            continue;
        }
        acc += std::min(a[i].length.abs(), b[i].length.abs());
        break;
    }
    return acc;
}

}  // namespace

AlgLength distance_to_segment(const FreePoint& z, const FreePoint& a, const FreePoint& b) {
    const FreePoint ai = a.inverse();
    const FreePoint zr = ai * z;
    return zr.norm() - common_prefix(ai * b, zr);
}

AlgLength segment_overlap(const FreePoint& a, const FreePoint& b, const FreePoint& c, const FreePoint& e) {
    const FreePoint ai = a.inverse();
    const FreePoint p = ai * b;
    const AlgLength sc = common_prefix(p, ai * c);
    const AlgLength se = common_prefix(p, ai * e);
    return (sc - se).abs();
}

const FreePoint& Embedding::at(VertexId v) const {
    if (v >= points.size()) throw std::out_of_range("vertex " + std::to_string(v) + " not realized");
    return points[v];
}

Embedding nu0(int d, const ColoredTree& t0) {
    if (t0.vertex_count() != static_cast<std::size_t>(d + 1) || t0.max_id() != static_cast<VertexId>(d))
        throw std::invalid_argument("nu0 expects the relabelled initial star");
    Embedding e;
    e.stage = 0;
    e.points.assign(d + 1, FreePoint::origin(d));
    e.points[1] = FreePoint::syllable(d, 0, AlgLength::integer(d, 1));
    for (int j = 2; j <= d; ++j) e.points[j] = FreePoint::syllable(d, j - 1, AlgLength::eta_power(d, d - j + 1));
    return e;
}

std::vector<VertexId> extend_in_place(Embedding& emb, const ColoredTree& prev_tree, const ColoredTree& tree) {
    const int d = emb.points.empty() ? 0 : emb.points.front().degree();
    const int n = emb.stage + 1;
    const VertexId first_new = prev_tree.max_id() + 1;
    emb.points.resize(tree.max_id() + 1, FreePoint::origin(d));
    std::vector<VertexId> fresh;
    for (VertexId v : tree.vertices())
        if (v >= first_new) fresh.push_back(v);
    for (VertexId y : fresh) {
        if (tree.degree(y) != static_cast<std::size_t>(d)) continue;
        std::optional<VertexId> y1, y2;
        for (const Incidence& i : tree.incident(y)) {
            if (!i.outgoing) throw std::logic_error("new center has an incoming edge");
            if (i.color == 1) y1 = i.other;
            if (i.color == d) y2 = i.other;
        }
        if (!y1 || !y2 || *y1 >= first_new || *y2 >= first_new)
            throw std::logic_error("new center is not attached to two old vertices");
        const FreePoint diff = emb.points[*y1].inverse() * emb.points[*y2];
        if (diff.syllables().size() != 1)
            throw std::logic_error("replaced edge is not realized by a single syllable");
        const int j = diff.syllables()[0].copy;
        const int alpha = diff.syllables()[0].length.sign();
        const FreePoint center = emb.points[*y1].times(j, AlgLength::eta_power(d, -n).times_integer(alpha));
        emb.points[y] = center;
        for (const Incidence& i : tree.incident(y)) {
            if (i.color <= d) continue;
            const int h = i.color - d;
            const int k = (j + h) % d;
            emb.points[i.other] = center.times(k, AlgLength::eta_power(d, -n - h));
        }
    }
    emb.stage = n;
    return fresh;
}

Embedding extend(const Embedding& prev, const ColoredTree& prev_tree, const ColoredTree& tree) {
    Embedding e = prev;
    extend_in_place(e, prev_tree, tree);
    return e;
}

GapReport hausdorff_gap(const Embedding& emb, const ColoredTree& prev_tree, const ColoredTree& tree, int n) {
    const int d = emb.points.front().degree();
    GapReport r;
    r.gap = AlgLength(d);
    const VertexId first_new = prev_tree.max_id() + 1;
    for (VertexId v : tree.vertices()) {
        if (v < first_new) continue;
        std::optional<AlgLength> best;
        for (const ColoredEdge& e : prev_tree.edges()) {
            AlgLength dist = distance_to_segment(emb.at(v), emb.at(e.src), emb.at(e.dst));
            if (!best || dist < *best) best = dist;
            if (best->is_zero()) break;
        }
        if (best && r.gap < *best) {
            r.gap = *best;
            r.witness = v;
        }
    }
    r.value = r.gap.value();
    r.bound = std::pow(eta_value(d), -1.0 - n);
    return r;
}

std::string embedding_csv(const Embedding& emb, const ColoredTree& tree) {
    std::ostringstream os;
    os << "id,x,y,degree,norm,point\n";
    char buf[64];
    for (VertexId v : tree.vertices()) {
        const FreePoint& p = emb.at(v);
        auto [x, y] = p.planar();
        os << v << ',';
        std::snprintf(buf, sizeof buf, "%.9f,%.9f", x, y);
        os << buf << ',' << tree.degree(v) << ',';
        std::snprintf(buf, sizeof buf, "%.9f", p.norm().value());
        os << buf << ",\"" << p.to_string() << "\"\n";
    }
    return os.str();
}

}  // namespace arbre
