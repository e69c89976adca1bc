#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "arbre/core_map.hpp"
#include "arbre/free_group.hpp"
#include "arbre/prefix_suffix.hpp"
#include "arbre/rauzy.hpp"
#include "arbre/realization.hpp"
#include "arbre/symbolic.hpp"
#include "arbre/tree_subst.hpp"
#include "arbre/verify.hpp"

using namespace arbre;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInvalid = 2;

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct GenArgs {
    int d = 3;
    int n = 0;
    std::string format = "json";
    std::string out;
};

int cmd_gen(const GenArgs& a) {
    const bool realize = a.format == "csv";
    const Construction c(a.d, a.n, Construction::Options{realize});
    const ColoredTree& t = c.tree(a.n);
    if (a.format == "json")
        emit(t.to_json(a.d).dump(2) + "\n", a.out);
    else if (a.format == "dot")
        emit(t.to_dot("T" + std::to_string(a.n)), a.out);
    else
        emit(embedding_csv(c.embedding(), t), a.out);
    return kOk;
}

struct VerifyArgs {
    VerifyConfig cfg;
    std::string suite = "all";
    std::string rules;
    std::string out;
};

int cmd_verify(const VerifyArgs& a) {
    std::vector<CheckResult> checks;
    std::string suite = a.suite;
    if (!a.rules.empty()) {
        const TreeSubstitution ts = TreeSubstitution::from_json(nlohmann::json::parse(read_file(a.rules)));
        const ValidationReport vr = ts.validate();
        if (!vr.ok()) {
            std::cerr << "invalid rules: " << vr.summary() << "\n";
            return kInvalid;
        }
        suite = "rules";
        checks = run_rules(ts, a.cfg.max_stage);
    } else {
        checks = run_suite(a.suite, a.cfg);
    }
    const nlohmann::json report = report_json(suite, a.cfg, checks);
    emit(report.dump(2) + "\n", a.out);
    bool all = true;
    for (const auto& c : checks) {
        if (c.passed) continue;
        all = false;
        std::cerr << "FAIL " << c.suite << "/" << c.property;
        if (!c.witnesses.empty()) std::cerr << ": " << c.witnesses.front();
        std::cerr << "\n";
    }
    return all ? kOk : kFailed;
}

struct ReportArgs {
    int d = 3;
    int m = 3;
    std::string kind = "partition";
    std::size_t prefix_len = 1000000;
    int depth = 8;
    std::string out;
};

int cmd_report(const ReportArgs& a) {
    const Substitution s = Substitution::family(a.d);
    nlohmann::json j;
    if (a.kind == "partition") {
        const Word om = fixed_point_prefix(s, a.prefix_len);
        j = to_json(partition_report(s, a.m, om));
    } else if (a.kind == "language") {
        j = to_json(language(s, a.m));
    } else if (a.kind == "bispecial") {
        j = nlohmann::json::array();
        for (int m = 1; m <= a.m; ++m)
            j.push_back({{"m", m}, {"l", l_word(a.d, m).to_string()}, {"length", l_length(a.d, m)}});
    } else if (a.kind == "automaton") {
        emit(PrefixSuffixAutomaton(s).to_dot(), a.out);
        return kOk;
    } else {
        j = nlohmann::json::array();
        std::vector<GroupWord> seeds;
        for (int x = 1; x <= a.d; ++x) seeds.push_back(GroupWord::positive(Word{static_cast<Letter>(x)}));
        for (const auto& tr : cancellation_report(Automorphism::family_inverse(a.d), seeds, a.depth))
            j.push_back({{"seed", tr.seed.to_string()},
                         {"first_cancellation", tr.first_cancellation()},
                         {"final", tr.steps.empty() ? std::string() : tr.steps.back().image.to_string()}});
    }
    emit(j.dump(2) + "\n", a.out);
    return kOk;
}

struct PlotArgs {
    std::string kind = "rauzy";
    int d = 3;
    int n = 4;
    std::size_t depth = 20000;
    std::string color = "cylinder:7";
    std::string format = "svg";
    std::string out;
};

int cmd_plot(const PlotArgs& a) {
    if (a.d != 3) {
        contracting_basis(Substitution::family(a.d).incidence_matrix());
        throw std::invalid_argument("plot requires d=3");
    }
    const PointCloud cloud = a.kind == "rauzy" ? fractal_cloud(a.depth, Coloring::parse(a.color)) : zeta_cloud(a.n, a.depth);
    const auto hits = collisions(cloud);
    if (!hits.empty()) std::cerr << hits.size() << " projection collisions\n";
    emit(a.format == "svg" ? render_svg(cloud) : cloud_csv(cloud), a.out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tree substitutions for the family 1->12, k->k+1, d->1"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Write the stage-n tree (json, dot) or its realization (csv)");
    g->add_option("--d", gen.d, "Alphabet size")->check(CLI::Range(3, 9));
    g->add_option("--n", gen.n, "Stage")->check(CLI::Range(0, 40));
    g->add_option("--format", gen.format)->check(CLI::IsMember({"json", "dot", "csv"}));
    g->add_option("--out", gen.out, "Output path, stdout if omitted");

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Run audit suites and print a JSON report");
    v->add_option("--suite", ver.suite)->check(CLI::IsMember({"words", "trees", "realization", "core", "all"}));
    v->add_option("--d", ver.cfg.d)->check(CLI::Range(3, 9));
    v->add_option("--max-stage,--n", ver.cfg.max_stage)->check(CLI::Range(1, 30));
    v->add_option("--prefix-len", ver.cfg.prefix_len)->check(CLI::Range(std::size_t{1000}, std::size_t{100000000}));
    v->add_option("--tol", ver.cfg.tol)->check(CLI::PositiveNumber);
    v->add_option("--rules", ver.rules, "JSON rule file validated instead of the family rules");
    v->add_option("--out", ver.out);

    ReportArgs rep;
    auto* r = app.add_subcommand("report", "Partition, language, bispecial, automaton or cancellation reports");
    r->add_option("--kind", rep.kind)
        ->check(CLI::IsMember({"partition", "language", "bispecial", "automaton", "cancellation"}));
    r->add_option("--d", rep.d)->check(CLI::Range(3, 9));
    r->add_option("--m", rep.m, "Cylinder or factor length")->check(CLI::Range(1, 200));
    r->add_option("--prefix-len", rep.prefix_len)->check(CLI::Range(std::size_t{1000}, std::size_t{100000000}));
    r->add_option("--depth", rep.depth)->check(CLI::Range(1, 40));
    r->add_option("--out", rep.out);

    PlotArgs plot;
    auto* p = app.add_subcommand("plot", "Rauzy fractal clouds and zeta images of the trees (d=3)");
    p->add_option("--kind", plot.kind)->check(CLI::IsMember({"rauzy", "zeta"}));
    p->add_option("--d", plot.d)->check(CLI::Range(3, 9));
    p->add_option("--n", plot.n)->check(CLI::Range(0, 30));
    p->add_option("--depth", plot.depth)->check(CLI::Range(std::size_t{0}, std::size_t{10000000}));
    p->add_option("--color", plot.color, "cylinder:M or arc:N");
    p->add_option("--format", plot.format)->check(CLI::IsMember({"svg", "csv"}));
    p->add_option("--out", plot.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        if (*g) return cmd_gen(gen);
        if (*v) return cmd_verify(ver);
        if (*r) return cmd_report(rep);
        return cmd_plot(plot);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
}
