#include "arbre/free_group.hpp"

#include <stdexcept>

namespace arbre {

namespace {

const char* const kInverseMark = "⁻";

std::string render(const std::vector<SignedLetter>& letters) {
    if (letters.empty()) return "ε";
    std::string s;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(letters[i].letter);
        if (letters[i].sign < 0) s += kInverseMark;
    }
    return s;
}

}  // namespace

std::string to_string(const PathWord& w) { return render(w); }

GroupWord GroupWord::reduce(const std::vector<SignedLetter>& raw) {
    GroupWord g;
    g.letters_.reserve(raw.size());
    for (const SignedLetter& x : raw) {
        if (x.sign != 1 && x.sign != -1) throw std::invalid_argument("sign must be +1 or -1");
        if (!g.letters_.empty() && g.letters_.back() == x.inverse())
            g.letters_.pop_back();
        else
            g.letters_.push_back(x);
    }
    return g;
}

GroupWord GroupWord::positive(const Word& w) {
    GroupWord g;
    g.letters_.reserve(w.size());
    for (Letter a : w) g.letters_.push_back({a, 1});
    return g;
}

GroupWord GroupWord::parse(std::string_view s) {
    std::vector<SignedLetter> raw;
    if (s.empty() || s == "ε" || s == "e") return {};
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t dot = s.find('.', pos);
        std::string_view tok = s.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
        int sign = 1;
        if (tok.size() >= 3 && tok.substr(tok.size() - 3) == kInverseMark) {
            sign = -1;
            tok.remove_suffix(3);
        } else if (!tok.empty() && tok.back() == '-') {
            sign = -1;
            tok.remove_suffix(1);
        }
        if (tok.empty()) throw std::invalid_argument("empty token in group word");
        int letter = 0;
        for (char c : tok) {
            if (c < '0' || c > '9') throw std::invalid_argument("bad token in group word: " + std::string(tok));
            letter = letter * 10 + (c - '0');
        }
        if (letter < 1) throw std::invalid_argument("letters start at 1");
        raw.push_back({letter, sign});
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    return reduce(raw);
}

GroupWord GroupWord::inverse() const {
    GroupWord g;
    g.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) g.letters_.push_back(it->inverse());
    return g;
}

GroupWord GroupWord::operator*(const GroupWord& rhs) const {
    GroupWord g = *this;
    for (const SignedLetter& x : rhs.letters_) {
        if (!g.letters_.empty() && g.letters_.back() == x.inverse())
            g.letters_.pop_back();
        else
            g.letters_.push_back(x);
    }
    return g;
}

std::string GroupWord::to_string() const { return render(letters_); }

std::size_t GroupWordHash::operator()(const GroupWord& w) const {
    std::size_t h = 1469598103934665603ULL;
    for (const SignedLetter& x : w.letters()) {
        h ^= static_cast<std::size_t>(x.letter * 2 + (x.sign < 0));
        h *= 1099511628211ULL;
    }
    return h;
}

Automorphism::Automorphism(int d, std::vector<GroupWord> images) : d_(d), images_(std::move(images)) {
    if (d < 1 || static_cast<int>(images_.size()) != d) throw std::invalid_argument("one image per generator required");
    for (const GroupWord& g : images_) {
        if (g.empty()) throw std::invalid_argument("automorphism images must be nontrivial");
        for (const SignedLetter& x : g.letters())
            if (x.letter < 1 || x.letter > d) throw std::invalid_argument("image letter out of range");
    }
}

Automorphism Automorphism::from_substitution(const Substitution& sub) {
    std::vector<GroupWord> images;
    for (int a = 1; a <= sub.alphabet_size(); ++a) images.push_back(GroupWord::positive(sub.image(a)));
    return Automorphism(sub.alphabet_size(), std::move(images));
}

Automorphism Automorphism::family_inverse(int d) {
    if (d < 3) throw std::invalid_argument("family requires d >= 3");
    std::vector<GroupWord> images(d);
    images[0] = GroupWord::reduce({{d, 1}});
    images[1] = GroupWord::reduce({{d, -1}, {1, 1}});
    for (int k = 3; k <= d; ++k) images[k - 1] = GroupWord::reduce({{k - 1, 1}});
    return Automorphism(d, std::move(images));
}

const GroupWord& Automorphism::image(int letter) const {
    if (letter < 1 || letter > d_) throw std::out_of_range("generator out of range");
    return images_[letter - 1];
}

Automorphism::Image Automorphism::apply(const GroupWord& w) const {
    std::vector<SignedLetter> raw;
    for (const SignedLetter& x : w.letters()) {
        const GroupWord& im = image(x.letter);
        if (x.sign > 0) {
            raw.insert(raw.end(), im.letters().begin(), im.letters().end());
        } else {
            for (auto it = im.letters().rbegin(); it != im.letters().rend(); ++it) raw.push_back(it->inverse());
        }
    }
    Image out;
    out.word = GroupWord::reduce(raw);
    out.cancelled = out.word.size() < raw.size();
    return out;
}

GroupWord Automorphism::power(const GroupWord& w, int n) const {
    GroupWord g = w;
    for (int i = 0; i < n; ++i) g = apply(g).word;
    return g;
}

IntMatrix Automorphism::incidence_matrix() const {
    IntMatrix m = IntMatrix::Zero(d_, d_);
    for (int j = 0; j < d_; ++j)
        for (const SignedLetter& x : images_[j].letters()) m(x.letter - 1, j) += 1;
    return m;
}

GroupWord p_star(int d, const PathWord& w) {
    const Substitution sigma = Substitution::family(d);
    std::vector<SignedLetter> raw;
    for (const SignedLetter& x : w) {
        if (x.letter < 1 || x.letter > 2 * d - 2) throw std::invalid_argument("color out of range for p_*");
        Word piece = x.letter <= d ? Word{static_cast<Letter>(x.letter)} : sigma.power_image(1, x.letter - d);
        if (x.sign > 0) {
            for (Letter a : piece) raw.push_back({a, 1});
        } else {
            for (auto it = piece.rbegin(); it != piece.rend(); ++it) raw.push_back({*it, -1});
        }
    }
    return GroupWord::reduce(raw);
}

std::vector<std::int64_t> abelianize(const GroupWord& w, int d) {
    std::vector<std::int64_t> v(d, 0);
    for (const SignedLetter& x : w.letters()) {
        if (x.letter < 1 || x.letter > d) throw std::invalid_argument("letter out of range for abelianization");
        v[x.letter - 1] += x.sign;
    }
    return v;
}

int CancellationTrace::first_cancellation() const {
    for (const auto& s : steps)
        if (s.cancelled) return s.step;
    return -1;
}

bool CancellationTrace::cancels_every_step() const {
    if (steps.empty()) return false;
    for (const auto& s : steps)
        if (!s.cancelled) return false;
    return true;
}

std::vector<CancellationTrace> cancellation_report(const Automorphism& phi, const std::vector<GroupWord>& seeds,
                                                   int depth) {
    if (depth < 1) throw std::invalid_argument("depth must be positive");
    std::vector<CancellationTrace> out;
    for (const GroupWord& seed : seeds) {
        CancellationTrace t;
        t.seed = seed;
        GroupWord cur = seed;
        for (int n = 1; n <= depth; ++n) {
            auto im = phi.apply(cur);
            t.steps.push_back({n, im.word, im.cancelled});
            cur = im.word;
        }
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace arbre
