#include "arbre/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "arbre/core_map.hpp"
#include "arbre/free_group.hpp"
#include "arbre/prefix_suffix.hpp"
#include "arbre/realization.hpp"
#include "arbre/symbolic.hpp"

namespace arbre {

namespace {

struct Check {
    CheckResult r;
    Check(std::string suite, std::string property) {
        r.suite = std::move(suite);
        r.property = std::move(property);
    }
    void ok(bool cond, const std::string& witness) {
        ++r.checked;
        if (!cond) fail(witness);
    }
    void fail(const std::string& witness) {
        r.passed = false;
        if (r.witnesses.size() < 8) r.witnesses.push_back(witness);
    }
};

CheckResult from_audit(const std::string& suite, const AuditResult& a) {
    CheckResult r;
    r.suite = suite;
    r.property = a.property + "@" + std::to_string(a.stage);
    r.passed = a.passed;
    r.checked = a.checked;
    r.witnesses = a.witnesses;
    return r;
}

std::vector<std::complex<double>> eigenvalues(const IntMatrix& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.cast<double>(), false);
    std::vector<std::complex<double>> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    return v;
}

// Removes from pool one value within tol of each target; false if some target is unmatched.
bool take_all(std::vector<std::complex<double>>& pool, const std::vector<std::complex<double>>& targets, double tol) {
    for (const auto& t : targets) {
        auto it = std::min_element(pool.begin(), pool.end(),
                                   [&](const auto& a, const auto& b) { return std::abs(a - t) < std::abs(b - t); });
        if (it == pool.end() || std::abs(*it - t) > tol) return false;
        pool.erase(it);
    }
    return true;
}

std::vector<Word> all_words(int d, int max_len) {
    std::vector<Word> out{{}};
    std::vector<Word> layer{{}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const Word& w : layer)
            for (int a = 1; a <= d; ++a) {
                Word x = w;
                x.push_back(static_cast<Letter>(a));
                next.push_back(std::move(x));
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

std::vector<CheckResult> words_suite(const VerifyConfig& cfg) {
    const int d = cfg.d;
    const Substitution s = Substitution::family(d);
    std::vector<CheckResult> out;

    Check cx("words", "factor-complexity");
    for (int n = 1; n <= 30; ++n) {
        const std::size_t got = factor_set(s, n).size();
        cx.ok(got == static_cast<std::size_t>((d - 1) * n + 1),
              "n=" + std::to_string(n) + " has " + std::to_string(got) + " factors");
    }
    out.push_back(cx.r);

    Check bs("words", "bispecial-generation-matches-enumeration");
    const std::size_t bl = 40;
    const auto gen = bispecial_by_generation(s, bl);
    std::set<Word> enumerated;
    for (std::size_t n = 1; n <= bl; ++n)
        for (const Word& w : language(s, static_cast<int>(n)).bispecial) enumerated.insert(w);
    const std::set<Word> generated(gen.begin(), gen.end());
    bs.ok(generated == enumerated, "generated and enumerated bispecials differ up to length " + std::to_string(bl));
    out.push_back(bs.r);

    Check inv("words", "sigma-inverse-identity");
    const Automorphism fwd = Automorphism::from_substitution(s);
    const Automorphism back = Automorphism::family_inverse(d);
    for (const Word& w : all_words(d, d == 3 ? 6 : 5)) {
        const GroupWord g = GroupWord::positive(w);
        inv.ok(fwd(back(g)) == g && back(fwd(g)) == g, to_string(w));
    }
    out.push_back(inv.r);

    Check tt("words", "family-inverse-has-no-cancellation");
    std::vector<GroupWord> seeds;
    for (int a = 1; a <= d; ++a) seeds.push_back(GroupWord::positive(Word{static_cast<Letter>(a)}));
    for (const auto& trace : cancellation_report(back, seeds, 12))
        tt.ok(trace.first_cancellation() < 0,
              "seed " + trace.seed.to_string() + " cancels at step " + std::to_string(trace.first_cancellation()));
    out.push_back(tt.r);

    Check dev("words", "shift-development-reconstructs-prefix");
    const Word om = fixed_point_prefix(s, 200);
    for (std::size_t k = 0; k <= 200; ++k) {
        try {
            const auto exps = automatic_writing(s, Word(om.begin(), om.begin() + k));
            const Development dv = shift_development(s, k, exps.empty() ? 1 : exps.back() + 1);
            const Reconstruction rc = reconstruct(s, dv);
            dev.ok(rc.prefix_part == Word(om.begin(), om.begin() + k) && rc.top == 1, "k=" + std::to_string(k));
        } catch (const std::exception& e) {
            dev.fail("k=" + std::to_string(k) + ": " + e.what());
        }
    }
    out.push_back(dev.r);

    Check ms("words", "measure-classes");
    const Word big = fixed_point_prefix(s, cfg.prefix_len);
    for (int m = 1; m <= 12; ++m) {
        try {
            const MeasureSpectrum sp = measure_spectrum(s, m, big, cfg.tol);
            ms.ok(sp.class_count == expected_class_count(s, m),
                  "m=" + std::to_string(m) + " has " + std::to_string(sp.class_count) + " classes");
        } catch (const std::exception& e) {
            ms.fail("m=" + std::to_string(m) + ": " + e.what());
        }
    }
    out.push_back(ms.r);

    Check rec("words", "measure-recursion");
    const double lam = lambda_value(d);
    for (int m = 1; m <= 4; ++m)
        for (const Word& u : factor_set(s, m)) {
            if (u.back() == d) continue;
            const double a = cylinder_measure(std::span<const Letter>(big), u).value;
            const double b = cylinder_measure(std::span<const Letter>(big), s.apply(u)).value;
            rec.ok(std::abs(a - lam * b) <= 2 * cfg.tol, "u=" + to_string(u));
        }
    out.push_back(rec.r);
    return out;
}

std::vector<CheckResult> trees_suite(const VerifyConfig& cfg) {
    const int d = cfg.d;
    std::vector<CheckResult> out;
    const TreeSubstitution ts = TreeSubstitution::family(d);

    Check val("trees", "rule-conditions");
    const ValidationReport vr = ts.validate();
    val.ok(vr.ok(), vr.summary());
    out.push_back(val.r);

    Check trunk("trees", "trunk-is-sigma-inverse");
    const Automorphism back = Automorphism::family_inverse(d);
    for (int i = 1; i <= d; ++i) {
        const GroupWord got = p_star(d, ts.trunk_word(i));
        trunk.ok(got == back.image(i), "rule " + std::to_string(i) + " trunk gives " + got.to_string());
    }
    out.push_back(trunk.r);

    Check spec("trees", "spectra");
    const auto lam = eigenvalues(ts.trunk_matrix());
    const double eta = eta_value(d);
    double top = 0.0;
    for (const auto& z : lam) top = std::max(top, std::abs(z));
    spec.ok(std::abs(top - eta) < 1e-9, "trunk matrix dominant eigenvalue " + std::to_string(top));
    spec.ok(std::abs(std::pow(eta, d) - eta - 1) < 1e-12, "eta is not a root of x^d - x - 1");
    const double l = lambda_value(d);
    spec.ok(std::abs(std::pow(l, d) - std::pow(l, d - 1) - 1) < 1e-12, "lambda is not a root of x^d - x^(d-1) - 1");
    spec.ok(spectrum_contains(ts.trunk_matrix(), back.incidence_matrix(), d - 2, 1e-6),
            "trunk spectrum does not contain the sigma-inverse spectrum plus zeros");
    spec.ok(spectrum_extends(ts.incidence_matrix(), Substitution::family(d).incidence_matrix(), d - 2, 1e-6),
            "rule incidence spectrum is not the sigma spectrum plus unimodular values");
    out.push_back(spec.r);

    Check disc("trees", "discernment");
    Check cnt("trees", "edge-count");
    ColoredTree t = initial_tree(d);
    for (int n = 0; n <= cfg.max_stage; ++n) {
        if (n > 0) t = ts(t);
        disc.ok(t.is_discerned(), "T_" + std::to_string(n));
        const std::size_t m = l_length(d, n) + 1;
        cnt.ok(t.edge_count() == (d - 1) * m + 1 && t.branch_points(d).size() == m, "T_" + std::to_string(n));
    }
    out.push_back(disc.r);
    out.push_back(cnt.r);
    return out;
}

std::vector<CheckResult> realization_suite(const VerifyConfig& cfg) {
    const int d = cfg.d;
    std::vector<CheckResult> out;
    const Construction c(d, cfg.max_stage);
    Check len("realization", "edge-length-law");
    Check gap("realization", "hausdorff-gap");
    Check inj("realization", "embedding-injective");
    for (int n = 0; n <= cfg.max_stage; ++n) {
        const ColoredTree& t = c.tree(n);
        for (const ColoredEdge& e : t.edges()) {
            const AlgLength want = vt_length(d, e.color).times_eta_power(-n);
            len.ok(point_distance(c.point(e.src), c.point(e.dst)) == want,
                   "stage " + std::to_string(n) + " edge " + std::to_string(e.src) + "->" + std::to_string(e.dst));
        }
        std::set<std::string> keys;
        for (VertexId v : t.vertices()) keys.insert(c.point(v).key());
        inj.ok(keys.size() == t.vertex_count(), "stage " + std::to_string(n));
        if (n < cfg.max_stage) {
            const GapReport g = hausdorff_gap(c.embedding(), t, c.tree(n + 1), n);
            gap.ok(g.value <= g.bound + 1e-12, "stage " + std::to_string(n) + " gap " + std::to_string(g.value) +
                                                   " at vertex " + std::to_string(g.witness));
        }
    }
    out.push_back(len.r);
    out.push_back(gap.r);
    out.push_back(inj.r);
    return out;
}

std::vector<CheckResult> core_suite(const VerifyConfig& cfg) {
    const int d = cfg.d;
    const int n = cfg.max_stage;
    std::vector<CheckResult> out;
    Construction c(d, n);
    const int direct = std::min(n, 8);
    out.push_back(from_audit("core", f0_bijection_audit(c, direct)));

    Check inv("core", "branch-inventory");
    for (int m = 0; m <= direct; ++m) {
        const GroupWord l = l_word(d, m);
        std::set<GroupWord> suffixes;
        const auto& ls = l.letters();
        for (std::size_t i = 0; i <= ls.size(); ++i)
            suffixes.insert(GroupWord::reduce(std::vector<SignedLetter>(ls.begin() + i, ls.end())));
        const auto got = branch_inventory(c, m);
        inv.ok(got == suffixes && got.size() == ls.size() + 1, "m=" + std::to_string(m));
        if (m >= 1 && m <= d - 1) {
            std::size_t fresh = 0;
            for (VertexId v : c.branch_vertices(m)) fresh += c.record(v).stage == m;
            inv.ok(fresh == 1, "m=" + std::to_string(m) + " has " + std::to_string(fresh) + " new labels");
        }
    }
    out.push_back(inv.r);

    out.push_back(from_audit("core", apparition_chain_audit(c, n)));
    out.push_back(from_audit("core", automatic_writing_audit(c, n)));
    out.push_back(from_audit("core", color_one_neighbour_audit(c, n)));
    out.push_back(from_audit("core", l_word_bispecial_audit(d, n)));
    const int arc_top = std::min(n, d == 3 ? 6 : 4);
    out.push_back(from_audit("core", root_arc_audit(c, arc_top)));
    for (int k = 0; k <= arc_top; ++k)
        for (const auto& a : arc_cylinder_correspondence(c, k)) out.push_back(from_audit("core", a));
    const int iso = std::min(n, 8);
    for (int a = 1; a <= d; ++a)
        for (const auto& r : isometry_audit(c, static_cast<Letter>(a), iso)) out.push_back(from_audit("core", r));
    out.push_back(from_audit("core", cylinder_image_overlap(c, iso)));
    out.push_back(from_audit("core", bijiso_check(c, std::min(n, 8))));

    Check part("core", "partition-determination");
    const Substitution s = Substitution::family(d);
    const Word big = fixed_point_prefix(s, cfg.prefix_len);
    std::set<int> determined;
    for (int k = 0; k <= n; ++k) determined.insert(determined_partition(d, k));
    for (int m = 1; m <= std::min(12, *determined.rbegin()); ++m) {
        try {
            const PartitionReport pr = partition_report(s, m, big);
            const int want = m == 1 ? d : determined.contains(m) ? 2 * d - 2 : 2 * d - 1;
            part.ok(pr.class_count == want && pr.determined_by.has_value() == determined.contains(m),
                    "m=" + std::to_string(m) + " has " + std::to_string(pr.class_count) + " classes");
        } catch (const std::exception& e) {
            part.fail("m=" + std::to_string(m) + ": " + e.what());
        }
    }
    out.push_back(part.r);
    return out;
}

}  // namespace

bool spectrum_contains(const IntMatrix& big, const IntMatrix& small, int zeros, double tol) {
    auto pool = eigenvalues(big);
    auto want = eigenvalues(small);
    for (int i = 0; i < zeros; ++i) want.emplace_back(0.0, 0.0);
    return take_all(pool, want, tol);
}

bool spectrum_extends(const IntMatrix& big, const IntMatrix& small, int unimodular, double tol) {
    auto pool = eigenvalues(big);
    if (!take_all(pool, eigenvalues(small), tol)) return false;
    if (static_cast<int>(pool.size()) != unimodular) return false;
    return std::all_of(pool.begin(), pool.end(), [&](const auto& z) { return std::abs(std::abs(z) - 1.0) <= tol; });
}

std::vector<CheckResult> run_suite(const std::string& suite, const VerifyConfig& cfg) {
    if (cfg.d < 3 || cfg.d > 9) throw std::invalid_argument("d must lie in 3..9");
    if (cfg.max_stage < 1) throw std::invalid_argument("max stage must be positive");
    if (suite == "all") {
        std::vector<CheckResult> out;
        for (const auto& s : kSuites) {
            auto part = run_suite(s, cfg);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    if (suite == "words") return words_suite(cfg);
    if (suite == "trees") return trees_suite(cfg);
    if (suite == "realization") return realization_suite(cfg);
    if (suite == "core") return core_suite(cfg);
    throw std::invalid_argument("unknown suite " + suite);
}

std::vector<CheckResult> run_rules(const TreeSubstitution& ts, int max_stage) {
    Check val("rules", "rule-conditions");
    const ValidationReport vr = ts.validate();
    val.ok(vr.ok(), vr.summary());
    std::vector<CheckResult> out{val.r};
    if (!vr.ok()) return out;
    Check disc("rules", "discernment");
    for (int c = 1; c <= ts.alphabet_size(); ++c) {
        ColoredTree t({0, 1}, {{0, 1, c}}, VertexId{0});
        for (int n = 0; n <= max_stage && t.edge_count() < 200000; ++n) {
            disc.ok(t.is_discerned(), "iterate " + std::to_string(n) + " of color " + std::to_string(c));
            t = ts(t);
        }
    }
    out.push_back(disc.r);
    return out;
}

nlohmann::json report_json(const std::string& suite, const VerifyConfig& cfg, const std::vector<CheckResult>& checks) {
    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (const auto& c : checks) {
        all &= c.passed;
        arr.push_back({{"suite", c.suite},
                       {"property", c.property},
                       {"passed", c.passed},
                       {"checked", c.checked},
                       {"witnesses", c.witnesses}});
    }
    return {{"report_version", 1}, {"suite", suite},   {"d", cfg.d},     {"max_stage", cfg.max_stage},
            {"prefix_len", cfg.prefix_len}, {"passed", all}, {"checks", arr}};
}

}  // namespace arbre
