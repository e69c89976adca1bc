#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace arbre {

using Letter = std::uint8_t;
using Word = std::vector<Letter>;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Letters print as decimal digits; the empty word prints as "".
std::string to_string(const Word& w);
Word parse_word(std::string_view s);

class Substitution {
public:
    Substitution(int d, std::vector<Word> images);

    // 1 -> 12, k -> k+1 (2 <= k < d), d -> 1.
    static Substitution family(int d);

    int alphabet_size() const { return d_; }
    const Word& image(Letter a) const;
    Word apply(const Word& w) const;
    Word power_image(Letter a, int n) const;
    std::size_t power_length(Letter a, int n) const;
    IntMatrix incidence_matrix() const;

    bool operator==(const Substitution&) const = default;

private:
    int d_;
    std::vector<Word> images_;
};

Word fixed_point_prefix(const Substitution& sub, std::size_t length);

struct LanguageTable {
    int n = 0;
    std::set<Word> factors;
    std::set<Word> left_special;
    std::set<Word> right_special;
    std::set<Word> bispecial;
};

LanguageTable language(const Substitution& sub, int n);
nlohmann::json to_json(const LanguageTable& table);

// Length-n factors of the fixed point, with the prefix grown until the set is stable.
std::set<Word> factor_set(const Substitution& sub, int n);

std::vector<Word> bispecial_by_generation(const Substitution& sub, std::size_t max_len);

struct PerronData {
    double eigenvalue = 0.0;
    Eigen::VectorXd left;
    Eigen::VectorXd right;
};

bool is_primitive(const IntMatrix& m);
PerronData perron(const IntMatrix& m);

// Real root > 1 of x^d = x^(d-1) + 1.
double lambda_value(int d);

struct FrequencyEstimate {
    double value = 0.0;
    bool is_factor = false;
};

FrequencyEstimate cylinder_measure(std::span<const Letter> omega, const Word& u);
FrequencyEstimate cylinder_measure(const Substitution& sub, const Word& u, std::size_t prefix_len);

// Sliding-window frequencies of every length-m window of omega.
std::map<Word, double> window_frequencies(std::span<const Letter> omega, int m);

struct MeasureSpectrum {
    int m = 0;
    std::map<Word, int> exponent;  // u -> j with mu(P_u) ~ lambda^-j
    std::map<Word, double> estimate;
    std::vector<int> exponents;    // distinct, sorted
    int class_count = 0;
};

MeasureSpectrum measure_spectrum(const Substitution& sub, int m, std::span<const Letter> omega,
                                 double tol = 1e-3);

int expected_class_count(const Substitution& sub, int m);

}  // namespace arbre
