#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "arbre/symbolic.hpp"

namespace arbre {

struct PSLabel {
    Word prefix;
    Letter letter = 0;
    Word suffix;
    bool operator==(const PSLabel&) const = default;
};

// Transition from -> to labelled (p, a, s) with sigma(to) = p a s and a = from.
struct PSTransition {
    Letter from = 0;
    Letter to = 0;
    PSLabel label;
};

class PrefixSuffixAutomaton {
public:
    explicit PrefixSuffixAutomaton(const Substitution& sub);

    const std::vector<PSTransition>& transitions() const { return transitions_; }
    int state_count() const { return d_; }
    // Target state of the transition carrying this label; throws if none.
    Letter target_of(const PSLabel& label) const;
    std::string to_dot() const;

private:
    int d_;
    std::vector<PSTransition> transitions_;
};

using Development = std::vector<PSLabel>;

bool is_admissible(const PrefixSuffixAutomaton& aut, const Development& dev);

struct Reconstruction {
    Word prefix_part;   // sigma^{k-1}(p_{k-1}) ... sigma(p_1) p_0
    Letter letter = 0;  // a_0
    Word suffix_part;   // s_0 sigma(s_1) ... sigma^{k-1}(s_{k-1})
    Letter top = 0;     // a_k, the state reached by the last label
    Word word;          // prefix_part a_0 suffix_part = sigma^k(a_k)
};

// k = dev.size(); throws on inadmissible input or if the identity fails.
Reconstruction reconstruct(const Substitution& sub, const Development& dev);

// Exponents alpha_0 < ... < alpha_p with u = sigma^{alpha_p}(1) ... sigma^{alpha_0}(1).
std::vector<int> automatic_writing(const Substitution& sub, const Word& u);

Development shift_development(const Substitution& sub, std::size_t k, std::size_t depth);

std::string to_string(const PSLabel& label);

}  // namespace arbre
