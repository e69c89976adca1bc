#include "arbre/prefix_suffix.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace arbre {

namespace {

std::string part(const Word& w) { return w.empty() ? "ε" : to_string(w); }

}  // namespace

std::string to_string(const PSLabel& label) {
    return "(" + part(label.prefix) + "," + std::to_string(label.letter) + "," + part(label.suffix) + ")";
}

PrefixSuffixAutomaton::PrefixSuffixAutomaton(const Substitution& sub) : d_(sub.alphabet_size()) {
    for (int b = 1; b <= d_; ++b) {
        const Word& im = sub.image(static_cast<Letter>(b));
        for (std::size_t i = 0; i < im.size(); ++i) {
            PSTransition t;
            t.from = im[i];
            t.to = static_cast<Letter>(b);
            t.label.prefix.assign(im.begin(), im.begin() + i);
            t.label.letter = im[i];
            t.label.suffix.assign(im.begin() + i + 1, im.end());
            Word check = t.label.prefix;
            check.push_back(t.label.letter);
            check.insert(check.end(), t.label.suffix.begin(), t.label.suffix.end());
            if (check != im) throw std::logic_error("transition label does not rebuild its image");
            transitions_.push_back(std::move(t));
        }
    }
}

Letter PrefixSuffixAutomaton::target_of(const PSLabel& label) const {
    for (const auto& t : transitions_)
        if (t.label == label) return t.to;
    throw std::invalid_argument("label " + to_string(label) + " is not a transition");
}

std::string PrefixSuffixAutomaton::to_dot() const {
    std::ostringstream os;
    os << "digraph prefix_suffix {\n  rankdir=LR;\n";
    for (int a = 1; a <= d_; ++a) os << "  " << a << " [shape=circle];\n";
    for (const auto& t : transitions_)
        os << "  " << int(t.from) << " -> " << int(t.to) << " [label=\"" << to_string(t.label) << "\"];\n";
    os << "}\n";
    return os.str();
}

bool is_admissible(const PrefixSuffixAutomaton& aut, const Development& dev) {
    try {
        for (std::size_t i = 0; i < dev.size(); ++i) {
            Letter to = aut.target_of(dev[i]);
            if (i + 1 < dev.size() && dev[i + 1].letter != to) return false;
        }
    } catch (const std::invalid_argument&) {
        return false;
    }
    return true;
}

Reconstruction reconstruct(const Substitution& sub, const Development& dev) {
    PrefixSuffixAutomaton aut(sub);
    if (dev.empty()) throw std::invalid_argument("empty development");
    if (!is_admissible(aut, dev)) throw std::invalid_argument("development is not admissible");
    Reconstruction r;
    r.letter = dev[0].letter;
    r.top = aut.target_of(dev.back());
    for (std::size_t i = 0; i < dev.size(); ++i) {
        Word p = dev[i].prefix;
        Word s = dev[i].suffix;
        for (std::size_t j = 0; j < i; ++j) {
            p = sub.apply(p);
            s = sub.apply(s);
        }
        r.prefix_part.insert(r.prefix_part.begin(), p.begin(), p.end());
        r.suffix_part.insert(r.suffix_part.end(), s.begin(), s.end());
    }
    r.word = r.prefix_part;
    r.word.push_back(r.letter);
    r.word.insert(r.word.end(), r.suffix_part.begin(), r.suffix_part.end());
    if (r.word != sub.power_image(r.top, static_cast<int>(dev.size())))
        throw std::logic_error("reconstruction identity failed");
    return r;
}

std::vector<int> automatic_writing(const Substitution& sub, const Word& u) {
    Word omega = fixed_point_prefix(sub, u.size());
    if (omega != u) throw std::invalid_argument("word is not a prefix of the fixed point");
    std::vector<std::size_t> lengths{1};
    while (lengths.back() <= u.size()) lengths.push_back(sub.power_length(1, static_cast<int>(lengths.size())));
    // Peel sigma^alpha(1) blocks from the left, longest first; each remainder is again a prefix.
    std::vector<int> exps;
    std::size_t pos = 0;
    while (pos < u.size()) {
        const std::size_t rest = u.size() - pos;
        int alpha = static_cast<int>(std::upper_bound(lengths.begin(), lengths.end(), rest) - lengths.begin()) - 1;
        if (!std::equal(u.begin() + pos, u.begin() + pos + lengths[alpha], omega.begin()))
            throw std::logic_error("remainder is not a prefix of the fixed point");
        exps.push_back(alpha);
        pos += lengths[alpha];
    }
    std::reverse(exps.begin(), exps.end());
    return exps;
}

Development shift_development(const Substitution& sub, std::size_t k, std::size_t depth) {
    if (depth == 0) throw std::invalid_argument("depth must be positive");
    const std::vector<int> exps = automatic_writing(sub, fixed_point_prefix(sub, k));
    const std::size_t top = std::max(depth, exps.empty() ? std::size_t{0} : static_cast<std::size_t>(exps.back()) + 1);
    Development dev(top);
    Letter above = 1;  // fixed-point tail: a_i = 1 beyond the last exponent
    for (std::size_t i = top; i-- > 0;) {
        PSLabel label;
        if (std::binary_search(exps.begin(), exps.end(), static_cast<int>(i))) {
            const Word& im = sub.image(above);
            if (im.size() < 2 || im[0] != 1) throw std::logic_error("prefix 1 not available at this level");
            label.prefix = {im[0]};
            label.letter = im[1];
            label.suffix.assign(im.begin() + 2, im.end());
        } else {
            const Word& im = sub.image(above);
            label.letter = im[0];
            label.suffix.assign(im.begin() + 1, im.end());
        }
        above = label.letter;
        dev[i] = std::move(label);
    }
    dev.resize(depth);
    return dev;
}

}  // namespace arbre
