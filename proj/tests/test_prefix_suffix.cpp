#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "arbre/prefix_suffix.hpp"

using namespace arbre;

namespace {

PSLabel lab(const char* p, Letter a, const char* s) { return {parse_word(p), a, parse_word(s)}; }

// All exponent lists with gaps >= d whose product of sigma^a(1) spells u.
// Reading u left to right the exponents decrease by at least d.
void search(const Substitution& s, const Word& u, std::size_t pos, int ceiling, std::vector<int>& cur,
            std::vector<std::vector<int>>& found) {
    if (pos == u.size()) {
        found.push_back(cur);
        return;
    }
    for (int a = 0; a <= ceiling; ++a) {
        const std::size_t len = s.power_length(1, a);
        if (pos + len > u.size()) break;
        const Word w = s.power_image(1, a);
        if (!std::equal(w.begin(), w.end(), u.begin() + pos)) continue;
        cur.push_back(a);
        search(s, u, pos + len, a - s.alphabet_size(), cur, found);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> decompositions(const Substitution& s, const Word& u) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    search(s, u, 0, 40, cur, out);
    for (auto& e : out) std::reverse(e.begin(), e.end());
    return out;
}

}  // namespace

TEST_CASE("automaton transitions") {
    const PrefixSuffixAutomaton a(Substitution::family(3));
    REQUIRE(a.transitions().size() == 4);
    std::set<std::tuple<int, int, std::string>> got;
    for (const auto& t : a.transitions()) got.insert({t.from, t.to, to_string(t.label)});
    CHECK(got.contains({1, 1, "(ε,1,2)"}));
    CHECK(got.contains({2, 1, "(1,2,ε)"}));
    CHECK(got.contains({3, 2, "(ε,3,ε)"}));
    CHECK(got.contains({1, 3, "(ε,1,ε)"}));
    CHECK(PrefixSuffixAutomaton(Substitution::family(4)).transitions().size() == 5);
    CHECK_THROWS(a.target_of(lab("", 2, "2")));
    CHECK(a.to_dot().find("digraph") != std::string::npos);
}

TEST_CASE("reconstruct examples") {
    const Substitution s = Substitution::family(3);
    const Reconstruction r1 = reconstruct(s, {lab("", 1, "2"), lab("", 1, "2")});
    CHECK(to_string(r1.word) == "123");
    CHECK(r1.prefix_part.empty());
    const Reconstruction r2 = reconstruct(s, {lab("", 1, "")});
    CHECK(to_string(r2.word) == "1");
    const Reconstruction r3 = reconstruct(s, {lab("1", 2, ""), lab("", 1, "2")});
    CHECK(to_string(r3.word) == "123");
    CHECK(to_string(r3.prefix_part) == "1");
    CHECK(r3.letter == 2);
    CHECK(to_string(r3.suffix_part) == "3");
    CHECK_THROWS(reconstruct(s, {lab("", 3, ""), lab("", 3, "")}));
}

TEST_CASE("every admissible path satisfies the identity") {
    for (int d = 3; d <= 4; ++d) {
        const Substitution s = Substitution::family(d);
        const PrefixSuffixAutomaton aut(s);
        std::size_t paths = 0;
        std::function<void(Development&)> walk = [&](Development& dev) {
            if (!dev.empty()) {
                REQUIRE(is_admissible(aut, dev));
                const Reconstruction r = reconstruct(s, dev);
                Word w = r.prefix_part;
                w.push_back(r.letter);
                w.insert(w.end(), r.suffix_part.begin(), r.suffix_part.end());
                CHECK(w == s.power_image(r.top, static_cast<int>(dev.size())));
                ++paths;
            }
            if (dev.size() == 6) return;
            for (const auto& t : aut.transitions()) {
                if (!dev.empty() && t.label.letter != aut.target_of(dev.back())) continue;
                dev.push_back(t.label);
                walk(dev);
                dev.pop_back();
            }
        };
        Development dev;
        walk(dev);
        CHECK(paths > 0);
    }
}

TEST_CASE("automatic writing examples") {
    const Substitution s = Substitution::family(3);
    CHECK(automatic_writing(s, parse_word("1")) == std::vector<int>{0});
    CHECK(automatic_writing(s, parse_word("1231")) == std::vector<int>{3});
    CHECK(automatic_writing(s, parse_word("12311")) == std::vector<int>{0, 3});
    CHECK(automatic_writing(s, parse_word("1231121231")) == std::vector<int>{0, 5});
    CHECK(automatic_writing(s, Word{}).empty());
    CHECK_THROWS(automatic_writing(s, parse_word("2")));
}

TEST_CASE("automatic writing matches exhaustive search") {
    for (int d = 3; d <= 4; ++d) {
        const Substitution s = Substitution::family(d);
        const Word om = fixed_point_prefix(s, 200);
        for (std::size_t k = 1; k <= 200; ++k) {
            const Word u(om.begin(), om.begin() + k);
            const auto all = decompositions(s, u);
            REQUIRE(all.size() == 1);
            CHECK(all.front() == automatic_writing(s, u));
        }
    }
}

TEST_CASE("automatic writing is injective and bounded") {
    const Substitution s = Substitution::family(3);
    const Word om = fixed_point_prefix(s, 500);
    std::set<std::vector<int>> seen;
    for (std::size_t k = 0; k <= 500; ++k) {
        const auto e = automatic_writing(s, Word(om.begin(), om.begin() + k));
        CHECK(seen.insert(e).second);
        if (e.empty() || e.back() > 15) continue;
        std::size_t len = 0;
        for (int a : e) len += s.power_length(1, a);
        CHECK(len < s.power_length(1, e.back() + 1));
    }
}

TEST_CASE("shift developments") {
    const Substitution s = Substitution::family(3);
    for (const auto& l : shift_development(s, 0, 3)) CHECK(l.prefix.empty());
    const Development d1 = shift_development(s, 1, 3);
    CHECK(to_string(d1[0].prefix) == "1");
    CHECK(d1[1].prefix.empty());
    CHECK(d1[2].prefix.empty());
    const Development d4 = shift_development(s, 4, 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(to_string(d4[i].prefix) == (i == 3 ? "1" : ""));
    const PrefixSuffixAutomaton aut(s);
    const Word om = fixed_point_prefix(s, 300);
    for (std::size_t k = 0; k <= 300; ++k) {
        const auto e = automatic_writing(s, Word(om.begin(), om.begin() + k));
        const Development dv = shift_development(s, k, e.empty() ? 1 : e.back() + 1);
        CHECK(is_admissible(aut, dv));
        CHECK(reconstruct(s, dv).prefix_part == Word(om.begin(), om.begin() + k));
    }
}
