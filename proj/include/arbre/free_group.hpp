#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arbre/symbolic.hpp"

namespace arbre {

struct SignedLetter {
    int letter = 0;
    int sign = 1;  // +1 or -1
    bool operator==(const SignedLetter&) const = default;
    auto operator<=>(const SignedLetter&) const = default;
    SignedLetter inverse() const { return {letter, -sign}; }
};

// Tree path words over colors with orientation bars; not reduced.
using PathWord = std::vector<SignedLetter>;

std::string to_string(const PathWord& w);

class GroupWord {
public:
    GroupWord() = default;
    static GroupWord reduce(const std::vector<SignedLetter>& raw);
    static GroupWord positive(const Word& w);
    // Grammar: "ε" or tokens joined by '.', each a letter number optionally followed by "⁻" or "-".
    static GroupWord parse(std::string_view s);

    const std::vector<SignedLetter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    GroupWord inverse() const;
    GroupWord operator*(const GroupWord& rhs) const;
    std::string to_string() const;

    bool operator==(const GroupWord&) const = default;
    auto operator<=>(const GroupWord&) const = default;

private:
    std::vector<SignedLetter> letters_;
};

struct GroupWordHash {
    std::size_t operator()(const GroupWord& w) const;
};

class Automorphism {
public:
    Automorphism(int d, std::vector<GroupWord> images);
    static Automorphism from_substitution(const Substitution& sub);
    static Automorphism family_inverse(int d);

    int rank() const { return d_; }
    const GroupWord& image(int letter) const;

    struct Image {
        GroupWord word;
        bool cancelled = false;
    };
    Image apply(const GroupWord& w) const;
    GroupWord operator()(const GroupWord& w) const { return apply(w).word; }
    GroupWord power(const GroupWord& w, int n) const;

    // Entry (i,j): occurrences of i and i^-1 in the image of j.
    IntMatrix incidence_matrix() const;

private:
    int d_;
    std::vector<GroupWord> images_;
};

// k -> k for k <= d, (d+k) -> sigma^k(1), bars -> inverses.
GroupWord p_star(int d, const PathWord& w);

std::vector<std::int64_t> abelianize(const GroupWord& w, int d);

struct CancellationStep {
    int step = 0;
    GroupWord image;
    bool cancelled = false;
};

struct CancellationTrace {
    GroupWord seed;
    std::vector<CancellationStep> steps;
    int first_cancellation() const;  // -1 when none
    bool cancels_every_step() const;
};

std::vector<CancellationTrace> cancellation_report(const Automorphism& phi, const std::vector<GroupWord>& seeds,
                                                   int depth);

}  // namespace arbre
