#include "arbre/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Eigenvalues>

namespace arbre {

std::string to_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (Letter a : w) s.push_back(static_cast<char>('0' + a));
    return s;
}

Word parse_word(std::string_view s) {
    Word w;
    w.reserve(s.size());
    for (char c : s) {
        if (c < '1' || c > '9') throw std::invalid_argument("bad letter in word: " + std::string(s));
        w.push_back(static_cast<Letter>(c - '0'));
    }
    return w;
}

Substitution::Substitution(int d, std::vector<Word> images) : d_(d), images_(std::move(images)) {
    if (d < 1 || d > 9) throw std::invalid_argument("alphabet size must be in 1..9");
    if (static_cast<int>(images_.size()) != d) throw std::invalid_argument("one image per letter required");
    for (const Word& w : images_) {
        if (w.empty()) throw std::invalid_argument("substitution images must be nonempty");
        for (Letter a : w)
            if (a < 1 || a > d) throw std::invalid_argument("image letter out of alphabet");
    }
}

Substitution Substitution::family(int d) {
    if (d < 3) throw std::invalid_argument("family requires d >= 3");
    std::vector<Word> images(d);
    images[0] = {1, 2};
    for (int k = 2; k < d; ++k) images[k - 1] = {static_cast<Letter>(k + 1)};
    images[d - 1] = {1};
    return Substitution(d, std::move(images));
}

const Word& Substitution::image(Letter a) const {
    if (a < 1 || a > d_) throw std::out_of_range("letter out of alphabet");
    return images_[a - 1];
}

Word Substitution::apply(const Word& w) const {
    Word out;
    out.reserve(w.size() * 2);
    for (Letter a : w) {
        const Word& im = image(a);
        out.insert(out.end(), im.begin(), im.end());
    }
    return out;
}

Word Substitution::power_image(Letter a, int n) const {
    if (n < 0) throw std::invalid_argument("negative power");
    Word w{a};
    for (int i = 0; i < n; ++i) w = apply(w);
    return w;
}

std::size_t Substitution::power_length(Letter a, int n) const {
    if (n < 0) throw std::invalid_argument("negative power");
    IntMatrix m = incidence_matrix();
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> v = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(d_);
    v(a - 1) = 1;
    for (int i = 0; i < n; ++i) v = m * v;
    return static_cast<std::size_t>(v.sum());
}

IntMatrix Substitution::incidence_matrix() const {
    IntMatrix m = IntMatrix::Zero(d_, d_);
    for (int j = 0; j < d_; ++j)
        for (Letter a : images_[j]) m(a - 1, j) += 1;
    return m;
}

Word fixed_point_prefix(const Substitution& sub, std::size_t length) {
    Word w{1};
    if (sub.image(1).front() != 1) throw std::domain_error("letter 1 does not start its own image");
    if (length == 0) return {};
    while (w.size() < length) {
        Word next = sub.apply(w);
        if (next.size() <= w.size()) throw std::domain_error("fixed point prefix does not grow");
        w = std::move(next);
    }
    w.resize(length);
    return w;
}

namespace {

std::set<Word> windows(const Word& w, std::size_t n) {
    std::set<Word> out;
    if (w.size() < n) return out;
    for (std::size_t i = 0; i + n <= w.size(); ++i) out.emplace(w.begin() + i, w.begin() + i + n);
    return out;
}

}  // namespace

std::set<Word> factor_set(const Substitution& sub, int n) {
    if (n < 0) throw std::invalid_argument("negative factor length");
    if (n == 0) return {Word{}};
    Word w{1};
    std::set<Word> prev;
    bool have_prev = false;
    for (int iter = 0; iter < 200; ++iter) {
        if (w.size() >= static_cast<std::size_t>(n)) {
            std::set<Word> cur = windows(w, n);
            if (have_prev && cur == prev) return cur;
            prev = std::move(cur);
            have_prev = true;
        }
        w = sub.apply(w);
    }
    throw std::runtime_error("factor set did not stabilize");
}

LanguageTable language(const Substitution& sub, int n) {
    if (n < 1) throw std::invalid_argument("language requires n >= 1");
    LanguageTable t;
    t.n = n;
    t.factors = factor_set(sub, n);
    std::set<Word> longer = factor_set(sub, n + 1);
    std::map<Word, std::set<Letter>> left, right;
    for (const Word& v : longer) {
        left[Word(v.begin() + 1, v.end())].insert(v.front());
        right[Word(v.begin(), v.end() - 1)].insert(v.back());
    }
    for (const Word& u : t.factors) {
        if (left[u].size() >= 2) t.left_special.insert(u);
        if (right[u].size() >= 2) t.right_special.insert(u);
    }
    std::set_intersection(t.left_special.begin(), t.left_special.end(), t.right_special.begin(),
                          t.right_special.end(), std::inserter(t.bispecial, t.bispecial.end()));
    return t;
}

nlohmann::json to_json(const LanguageTable& table) {
    auto list = [](const std::set<Word>& s) {
        nlohmann::json a = nlohmann::json::array();
        for (const Word& w : s) a.push_back(to_string(w));
        return a;
    };
    return {{"n", table.n},
            {"factors", list(table.factors)},
            {"left_special", list(table.left_special)},
            {"right_special", list(table.right_special)},
            {"bispecial", list(table.bispecial)}};
}

std::vector<Word> bispecial_by_generation(const Substitution& sub, std::size_t max_len) {
    std::vector<Word> out;
    const Letter penultimate = static_cast<Letter>(sub.alphabet_size() - 1);
    Word u{1};
    while (u.size() <= max_len) {
        out.push_back(u);
        Word next = sub.apply(u);
        if (u.back() == penultimate) next.push_back(1);
        u = std::move(next);
    }
    return out;
}

bool is_primitive(const IntMatrix& m) {
    const auto n = m.rows();
    if (n == 0 || m.cols() != n) return false;
    if ((m.array() < 0).any()) return false;
    using B = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
    B base = (m.array() > 0).cast<std::int64_t>();
    B p = base;
    const auto bound = (n - 1) * (n - 1) + 1;
    for (Eigen::Index k = 1; k <= bound; ++k) {
        if ((p.array() > 0).all()) return true;
        p = ((p * base).array() > 0).cast<std::int64_t>();
    }
    return false;
}

PerronData perron(const IntMatrix& m) {
    if (!is_primitive(m)) throw std::domain_error("matrix is not primitive");
    const Eigen::MatrixXd a = m.cast<double>();
    auto dominant = [](const Eigen::MatrixXd& x, double& value) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(x);
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()(i).real() > es.eigenvalues()(best).real()) best = i;
        value = es.eigenvalues()(best).real();
        Eigen::VectorXd v = es.eigenvectors().col(best).real();
        if (v.sum() < 0) v = -v;
        return v;
    };
    PerronData out;
    double lt = 0.0;
    out.right = dominant(a, out.eigenvalue);
    out.left = dominant(a.transpose(), lt);
    // polish with a few power steps; the dominant eigenvalue is simple
    for (int i = 0; i < 8; ++i) {
        out.right = a * out.right;
        out.right /= out.right.sum();
        out.left = a.transpose() * out.left;
        out.left /= out.left.sum();
    }
    out.eigenvalue = (a * out.right).sum() / out.right.sum();
    out.right /= out.right.sum();
    out.left /= out.left.dot(out.right);
    if ((out.right.array() <= 0).any() || (out.left.array() <= 0).any())
        throw std::runtime_error("Perron eigenvectors not positive");
    return out;
}

double lambda_value(int d) {
    long double x = 2.0L;
    for (int i = 0; i < 100; ++i) {
        long double f = std::pow(x, d) - std::pow(x, d - 1) - 1.0L;
        long double fp = d * std::pow(x, d - 1) - (d - 1) * std::pow(x, d - 2);
        long double step = f / fp;
        x -= step;
        if (std::fabs(step) < 1e-19L) break;
    }
    return static_cast<double>(x);
}

FrequencyEstimate cylinder_measure(std::span<const Letter> omega, const Word& u) {
    if (u.empty()) return {1.0, true};
    if (omega.size() < u.size()) return {0.0, false};
    std::size_t count = 0;
    const std::boyer_moore_horspool_searcher searcher(u.begin(), u.end());
    auto it = omega.begin();
    while (true) {
        auto hit = std::search(it, omega.end(), searcher);
        if (hit == omega.end()) break;
        ++count;
        it = hit + 1;
    }
    if (count == 0) return {0.0, false};
    return {static_cast<double>(count) / static_cast<double>(omega.size() - u.size() + 1), true};
}

FrequencyEstimate cylinder_measure(const Substitution& sub, const Word& u, std::size_t prefix_len) {
    for (Letter a : u)
        if (a < 1 || a > sub.alphabet_size()) throw std::invalid_argument("letter out of alphabet");
    Word omega = fixed_point_prefix(sub, prefix_len);
    return cylinder_measure(omega, u);
}

std::map<Word, double> window_frequencies(std::span<const Letter> omega, int m) {
    std::map<Word, double> out;
    if (m <= 0 || omega.size() < static_cast<std::size_t>(m)) return out;
    const std::size_t total = omega.size() - m + 1;
    if (m <= 16) {
        // 4 bits per letter; rolling key
        std::unordered_map<std::uint64_t, std::size_t> counts;
        const std::uint64_t mask = (m == 16) ? ~0ULL : ((1ULL << (4 * m)) - 1);
        std::uint64_t key = 0;
        for (std::size_t i = 0; i < omega.size(); ++i) {
            key = ((key << 4) | omega[i]) & mask;
            if (i + 1 >= static_cast<std::size_t>(m)) ++counts[key];
        }
        for (const auto& [k, c] : counts) {
            Word w(m);
            for (int j = m - 1; j >= 0; --j) w[m - 1 - j] = static_cast<Letter>((k >> (4 * j)) & 0xF);
            out[w] = static_cast<double>(c) / static_cast<double>(total);
        }
        return out;
    }
    std::map<Word, std::size_t> counts;
    for (std::size_t i = 0; i < total; ++i) ++counts[Word(omega.begin() + i, omega.begin() + i + m)];
    for (const auto& [w, c] : counts) out[w] = static_cast<double>(c) / static_cast<double>(total);
    return out;
}

MeasureSpectrum measure_spectrum(const Substitution& sub, int m, std::span<const Letter> omega, double tol) {
    if (m < 1) throw std::invalid_argument("measure_spectrum requires m >= 1");
    const double lambda = perron(sub.incidence_matrix()).eigenvalue;
    MeasureSpectrum out;
    out.m = m;
    std::set<int> distinct;
    for (const auto& [u, freq] : window_frequencies(omega, m)) {
        int best = 0;
        double best_err = std::numeric_limits<double>::infinity();
        for (int j = 0; j <= 40; ++j) {
            double err = std::fabs(freq - std::pow(lambda, -j));
            if (err < best_err) {
                best_err = err;
                best = j;
            }
        }
        if (best_err > tol)
            throw std::runtime_error("measure of " + to_string(u) + " (" + std::to_string(freq) +
                                     ") does not snap to a power of 1/lambda");
        out.exponent[u] = best;
        out.estimate[u] = freq;
        distinct.insert(best);
    }
    out.exponents.assign(distinct.begin(), distinct.end());
    out.class_count = static_cast<int>(out.exponents.size());
    return out;
}

int expected_class_count(const Substitution& sub, int m) {
    const int d = sub.alphabet_size();
    if (m <= 1) return d;
    return language(sub, m - 1).bispecial.empty() ? 2 * d - 1 : 2 * d - 2;
}

}  // namespace arbre
