#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <string>

#include "arbre/symbolic.hpp"

using namespace arbre;

namespace {

// Independent oracle: the family as string rewriting on digits.
std::string rewrite(int d, const std::string& w) {
    std::string out;
    for (char c : w) {
        const int k = c - '0';
        if (k == 1)
            out += "12";
        else if (k < d)
            out += static_cast<char>('0' + k + 1);
        else
            out += '1';
    }
    return out;
}

std::string omega_string(int d, std::size_t len) {
    std::string w = "1";
    while (w.size() < len) w = rewrite(d, w);
    return w.substr(0, len);
}

std::set<std::string> substrings(const std::string& s, std::size_t n) {
    std::set<std::string> out;
    for (std::size_t i = 0; i + n <= s.size(); ++i) out.insert(s.substr(i, n));
    return out;
}

std::set<std::string> as_strings(const std::set<Word>& ws) {
    std::set<std::string> out;
    for (const Word& w : ws) out.insert(to_string(w));
    return out;
}

}  // namespace

TEST_CASE("family images") {
    CHECK(to_string(Substitution::family(3).image(1)) == "12");
    CHECK(to_string(Substitution::family(3).image(2)) == "3");
    CHECK(to_string(Substitution::family(3).image(3)) == "1");
    const Substitution s4 = Substitution::family(4);
    CHECK(to_string(s4.image(3)) == "4");
    CHECK(to_string(s4.image(4)) == "1");
    CHECK_THROWS_AS(Substitution::family(2), std::invalid_argument);
}

TEST_CASE("apply and powers") {
    const Substitution s = Substitution::family(3);
    CHECK(to_string(s.apply(parse_word("123"))) == "1231");
    CHECK(s.apply(Word{}).empty());
    CHECK(to_string(s.power_image(1, 4)) == "123112");
    CHECK(to_string(s.power_image(1, 5)) == "123112123");
    for (int n = 0; n <= 20; ++n) {
        const Word a = s.power_image(1, n);
        const Word b = s.power_image(1, n + 1);
        REQUIRE(a.size() <= b.size());
        CHECK(std::equal(a.begin(), a.end(), b.begin()));
        CHECK(s.power_length(1, n) == a.size());
    }
}

TEST_CASE("fixed point prefix") {
    const Substitution s = Substitution::family(3);
    CHECK(to_string(fixed_point_prefix(s, 6)) == "123112");
    CHECK(fixed_point_prefix(s, 0).empty());
    CHECK(to_string(fixed_point_prefix(s, 9)) == "123112123");
    for (int d = 3; d <= 6; ++d) CHECK(to_string(fixed_point_prefix(Substitution::family(d), 500)) == omega_string(d, 500));
}

TEST_CASE("language tables") {
    const Substitution s = Substitution::family(3);
    const LanguageTable t1 = language(s, 1);
    CHECK(as_strings(t1.factors) == std::set<std::string>{"1", "2", "3"});
    CHECK(as_strings(t1.left_special) == std::set<std::string>{"1"});
    CHECK(as_strings(t1.bispecial) == std::set<std::string>{"1"});
    const LanguageTable t2 = language(s, 2);
    CHECK(as_strings(t2.factors) == std::set<std::string>{"11", "12", "21", "23", "31"});
    CHECK(as_strings(language(s, 4).bispecial) == std::set<std::string>{"1231"});
    CHECK(as_strings(language(s, 3).bispecial).empty());
}

TEST_CASE("factor complexity against a substring oracle") {
    for (int d = 3; d <= 5; ++d) {
        const std::string om = omega_string(d, 200000);
        for (int n = 1; n <= 30; ++n) {
            const auto oracle = substrings(om, n);
            const auto got = as_strings(factor_set(Substitution::family(d), n));
            CHECK(got == oracle);
            CHECK(got.size() == static_cast<std::size_t>((d - 1) * n + 1));
        }
    }
}

TEST_CASE("left specials are prefixes of the fixed point") {
    for (int d = 3; d <= 4; ++d) {
        const Substitution s = Substitution::family(d);
        const std::string om = omega_string(d, 100);
        for (int n = 1; n <= 20; ++n) {
            const auto ls = as_strings(language(s, n).left_special);
            CHECK(ls == std::set<std::string>{om.substr(0, n)});
        }
    }
}

TEST_CASE("bispecial generation") {
    const Substitution s3 = Substitution::family(3);
    std::vector<std::size_t> lengths;
    for (const Word& w : bispecial_by_generation(s3, 10)) lengths.push_back(w.size());
    CHECK(lengths == std::vector<std::size_t>{1, 2, 4, 6, 10});
    const auto g4 = bispecial_by_generation(Substitution::family(4), 3);
    REQUIRE(g4.size() == 3);
    CHECK(to_string(g4[0]) == "1");
    CHECK(to_string(g4[1]) == "12");
    CHECK(to_string(g4[2]) == "123");
    CHECK(bispecial_by_generation(s3, 0).empty());

    // oracle: extensions counted directly on a long prefix
    for (int d = 3; d <= 4; ++d) {
        const std::string om = omega_string(d, 300000);
        std::set<std::string> brute;
        for (std::size_t n = 1; n <= 60; ++n) {
            std::map<std::string, std::pair<std::set<char>, std::set<char>>> ext;
            for (std::size_t i = 1; i + n + 1 <= om.size(); ++i) {
                auto& e = ext[om.substr(i, n)];
                e.first.insert(om[i - 1]);
                e.second.insert(om[i + n]);
            }
            for (const auto& [w, e] : ext)
                if (e.first.size() >= 2 && e.second.size() >= 2) brute.insert(w);
        }
        std::set<std::string> gen;
        for (const Word& w : bispecial_by_generation(Substitution::family(d), 60)) gen.insert(to_string(w));
        CHECK(gen == brute);
    }
}

TEST_CASE("perron data and lambda") {
    const double l3 = lambda_value(3);
    CHECK(l3 == doctest::Approx(1.465571).epsilon(1e-6));
    CHECK(std::abs(l3 * l3 * l3 - l3 * l3 - 1) < 1e-12);
    const double l4 = lambda_value(4);
    CHECK(l4 == doctest::Approx(1.380278).epsilon(1e-6));
    CHECK(std::abs(std::pow(l4, 4) - std::pow(l4, 3) - 1) < 1e-12);
    for (int d = 3; d <= 6; ++d) {
        const IntMatrix m = Substitution::family(d).incidence_matrix();
        CHECK(is_primitive(m));
        const PerronData p = perron(m);
        CHECK(p.eigenvalue == doctest::Approx(lambda_value(d)).epsilon(1e-12));
        const Eigen::VectorXd r = m.cast<double>() * p.right - p.eigenvalue * p.right;
        CHECK(r.norm() < 1e-10);
    }
    IntMatrix one(1, 1);
    one(0, 0) = 1;
    CHECK(perron(one).eigenvalue == doctest::Approx(1.0));
    IntMatrix perm = IntMatrix::Zero(2, 2);
    perm(0, 1) = perm(1, 0) = 1;
    CHECK_FALSE(is_primitive(perm));
}

TEST_CASE("cylinder measures and spectrum") {
    const Substitution s = Substitution::family(3);
    const double l = lambda_value(3);
    const Word om = fixed_point_prefix(s, 1000000);
    CHECK(cylinder_measure(om, parse_word("1")).value == doctest::Approx(std::pow(l, -2)).epsilon(1e-3));
    CHECK(std::abs(cylinder_measure(om, parse_word("2")).value - std::pow(l, -3)) < 1e-3);
    const FrequencyEstimate none = cylinder_measure(om, parse_word("22"));
    CHECK(none.value == 0.0);
    CHECK_FALSE(none.is_factor);

    const MeasureSpectrum m1 = measure_spectrum(s, 1, om);
    CHECK(m1.exponents == std::vector<int>{2, 3, 4});
    CHECK(m1.class_count == 3);
    CHECK(measure_spectrum(s, 3, om).class_count == 4);
    CHECK(measure_spectrum(s, 4, om).class_count == 5);
    for (int m = 1; m <= 10; ++m) CHECK(measure_spectrum(s, m, om).class_count == expected_class_count(s, m));

    // frequency oracle: counts on the string oracle
    const std::string os = omega_string(3, 1000000);
    const auto wf = window_frequencies(om, 3);
    for (const auto& [u, f] : wf) {
        const std::string us = to_string(u);
        std::size_t c = 0;
        for (std::size_t i = 0; i + 3 <= os.size(); ++i) c += os.compare(i, 3, us) == 0;
        CHECK(f == doctest::Approx(static_cast<double>(c) / static_cast<double>(os.size() - 2)));
    }
}

TEST_CASE("measure recursion") {
    for (int d = 3; d <= 4; ++d) {
        const Substitution s = Substitution::family(d);
        const Word om = fixed_point_prefix(s, 1000000);
        const double l = lambda_value(d);
        for (int m = 1; m <= 4; ++m)
            for (const Word& u : factor_set(s, m)) {
                if (u.back() == d) continue;
                const double a = cylinder_measure(om, u).value;
                const double b = cylinder_measure(om, s.apply(u)).value;
                CHECK(std::abs(a - l * b) < 2e-3);
            }
    }
}
