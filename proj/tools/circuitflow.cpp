#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "circuitflow/circuitflow.hpp"

namespace cf = circuitflow;
using Ring = cf::Int;

namespace {

// JSON lines go to stdout by default, or to --report if given; the human
// summary always goes to stderr.
struct Emitter {
    std::ostream* out = &std::cout;
    std::ofstream file;
    void open(const std::string& path) {
        file.open(path);
        if (!file) throw cf::ConfigError("cannot open report file " + path);
        out = &file;
    }
    void line(const cf::Json& j) { (*out) << j.dump() << "\n"; }
};

cf::Circuit<Ring> read_circuit(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cf::ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return cf::parse_circuit<Ring>(ss.str());
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw cf::ConfigError("cannot open " + path);
    out << text;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("CF_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw cf::ConfigError("CF_SEED is not a valid unsigned integer");
        }
    }
    return 0;
}

struct CommonOpts {
    std::uint64_t prime = cf::kDefaultPrime;
    int trials = cf::kDefaultTrials;
    std::optional<std::uint64_t> seed;
    std::size_t term_budget = cf::kDefaultTermBudget;
    std::string report_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--prime", prime, "modulus for randomized equivalence");
        cmd->add_option("--trials", trials, "random evaluation trials");
        cmd->add_option("--seed", seed, "PRNG seed (falls back to CF_SEED, then 0)");
        cmd->add_option("--term-budget", term_budget, "max terms per expanded polynomial");
        cmd->add_option("--report", report_path, "write JSON lines here instead of stdout");
    }

    cf::PassOptions pass_options() const {
        cf::PassOptions o;
        o.prime = prime;
        o.trials = trials;
        o.seed = resolve_seed(seed);
        o.term_budget = term_budget;
        return o;
    }
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int cmd_stats(const std::string& path, CommonOpts& common) {
    cf::Circuit<Ring> c = read_circuit(path);
    Emitter em;
    if (!common.report_path.empty()) em.open(common.report_path);

    cf::Json j;
    j["kind"] = "stats";
    cf::CircuitStats st = c.stats();
    j.update(cf::json_of(st));
    j["validation"] = cf::json_of(c.validate());
    cf::Int trees = cf::count_parse_trees(c);
    j["parse_trees"] =
        trees <= 1'000'000'000 ? cf::Json(trees.convert_to<std::uint64_t>()) : cf::Json(nullptr);
    em.line(j);

    std::cerr << "size=" << st.size << " degree=" << st.degree.to_string()
              << " vars=" << st.num_vars << " depth=" << st.depth
              << " homogeneous=" << (st.homogeneous ? "yes" : "no") << "\n";
    return 0;
}

int cmd_gen(const std::string& family, std::uint32_t n, const cf::GeneratorSpec& spec,
            const std::string& out_path) {
    cf::Circuit<Ring> c;
    if (family == "perm")
        c = cf::gen_perm<Ring>(n);
    else if (family == "det")
        c = cf::gen_det<Ring>(n);
    else if (family == "comb")
        c = cf::gen_comb<Ring>(n);
    else if (family == "random")
        c = cf::gen_random<Ring>(spec);
    else
        throw cf::ConfigError("unknown family: " + family);

    std::string text = cf::print_circuit(c);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    cf::CircuitStats st = c.stats();
    std::cerr << "generated " << family << " size=" << st.size
              << " degree=" << st.degree.to_string() << " vars=" << st.num_vars << "\n";
    return 0;
}

int cmd_transform(const std::string& path, const std::string& pass_list,
                  const std::optional<std::uint64_t>& a_flag, const std::string& out_path,
                  CommonOpts& common) {
    if (a_flag && *a_flag == 0)
        throw cf::ConfigError("--a must be a positive cut parameter");
    std::vector<std::string> passes = split_list(pass_list);
    if (passes.empty()) throw cf::ConfigError("--pass needs at least one stage");
    cf::PassOptions opts = common.pass_options();

    cf::Circuit<Ring> c = read_circuit(path);
    Emitter em;
    if (!common.report_path.empty()) em.open(common.report_path);

    bool ok = true;
    for (const std::string& name : passes) {
        if (name == "reduce") {
            cf::PipelineResult<Ring> r = cf::reduce_to_depth4(c, opts);
            for (const cf::PassReport& rep : r.reports) {
                em.line(cf::json_of(rep));
                std::cerr << "pass=" << rep.pass
                          << (rep.params.count("part") ? " part=" + rep.params.at("part") : "")
                          << " size " << rep.input.size << " -> " << rep.output.size
                          << (rep.all_satisfied() ? " ok" : " FAILED") << "\n";
            }
            ok = ok && r.all_satisfied();
            c = std::move(r.circuit);
        } else {
            cf::PassResult<Ring> r =
                cf::run_pass(name, c, opts, a_flag ? *a_flag : 0);
            em.line(cf::json_of(r.report));
            std::cerr << "pass=" << r.report.pass << " size " << r.report.input.size
                      << " -> " << r.report.output.size
                      << (r.report.all_satisfied() ? " ok" : " FAILED") << "\n";
            ok = ok && r.report.all_satisfied();
            c = std::move(r.circuit);
        }
    }
    if (!out_path.empty()) write_file(out_path, cf::print_circuit(c));
    return ok ? 0 : 1;
}

// Pairwise-by-index randomized comparison that also covers multi-output
// circuits; single-output pairs take the library check directly.
cf::EquivalenceVerdict field_check(const cf::Circuit<Ring>& a, const cf::Circuit<Ring>& b,
                                   const cf::PassOptions& opts) {
    cf::PrimeField F(opts.prime);
    if (a.outputs().size() == 1 && b.outputs().size() == 1)
        return cf::equivalent(a, b, opts.trials, F, opts.seed);
    std::set<cf::VarIndex> vars;
    for (cf::VarIndex v : a.variables()) vars.insert(v);
    for (cf::VarIndex v : b.variables()) vars.insert(v);
    cf::EquivalenceVerdict verdict;
    verdict.trials = opts.trials;
    verdict.prime = F.p;
    verdict.seed = opts.seed;
    std::mt19937_64 rng(opts.seed);
    for (int t = 0; t < opts.trials; ++t) {
        std::map<cf::VarIndex, std::uint64_t> point;
        for (cf::VarIndex v : vars) point[v] = cf::uniform_u64(rng, F.p);
        auto va = cf::evaluate_all(a, point, F);
        auto vb = cf::evaluate_all(b, point, F);
        for (std::size_t i = 0; i < a.outputs().size(); ++i) {
            if (va[a.outputs()[i]] != vb[b.outputs()[i]]) {
                verdict.equal = false;
                verdict.failure_point = std::move(point);
                return verdict;
            }
        }
    }
    return verdict;
}

int cmd_verify(const std::string& path_a, const std::string& path_b, CommonOpts& common) {
    cf::Circuit<Ring> a = read_circuit(path_a);
    cf::Circuit<Ring> b = read_circuit(path_b);
    if (a.outputs().size() != b.outputs().size())
        throw cf::ContractError("verify: output counts differ");
    cf::PassOptions opts = common.pass_options();

    Emitter em;
    if (!common.report_path.empty()) em.open(common.report_path);

    std::string method;
    bool equal = false;
    std::optional<cf::EquivalenceVerdict> verdict;
    try {
        auto pa = cf::expand_all(a, opts.term_budget);
        auto pb = cf::expand_all(b, opts.term_budget);
        method = "oracle";
        equal = true;
        for (std::size_t i = 0; i < a.outputs().size(); ++i)
            if (!(pa[a.outputs()[i]] == pb[b.outputs()[i]])) equal = false;
        if (!equal)  // hunt for a concrete separating point
            verdict = field_check(a, b, opts);
    } catch (const cf::BudgetError&) {
        method = "field";
        verdict = field_check(a, b, opts);
        equal = verdict->equal;
    }

    cf::Json j;
    j["kind"] = "verify";
    j["method"] = method;
    j["equal"] = equal;
    j["trials"] = verdict ? verdict->trials : 0;
    j["prime"] = opts.prime;
    j["seed"] = opts.seed;
    if (verdict && verdict->failure_point) {
        cf::Json p;
        for (const auto& [var, val] : *verdict->failure_point)
            p["x" + std::to_string(var)] = val;
        j["failure_point"] = std::move(p);
    } else {
        j["failure_point"] = cf::Json(nullptr);
    }
    em.line(j);
    std::cerr << "method=" << method << " equal=" << (equal ? "yes" : "no") << "\n";
    return equal ? 0 : 1;
}

int cmd_bounds(const std::string& path, const std::string& target_path, CommonOpts& common) {
    cf::Circuit<Ring> c = read_circuit(path);
    cf::Circuit<Ring> target = read_circuit(target_path);
    cf::PassOptions opts = common.pass_options();

    Emitter em;
    if (!common.report_path.empty()) em.open(common.report_path);

    cf::LevelProfile prof = cf::extract_level_profile(c);
    {
        cf::Json j;
        j["kind"] = "level-profile";
        j.update(cf::json_of(prof));
        em.line(j);
    }

    bool ok = true;
    auto emit = [&](const cf::BoundCertificate& cert) {
        cf::Json j;
        j["kind"] = "certificate";
        j.update(cf::json_of(cert));
        em.line(j);
        std::cerr << "certificate " << cert.claim << " "
                  << (cert.satisfied ? "ok" : "FAILED") << "\n";
        ok = ok && cert.satisfied;
    };
    for (const cf::BoundCertificate& cert :
         cf::check_lower_bound(c, target, opts.term_budget, opts.trials, opts.prime,
                               opts.seed))
        emit(cert);

    cf::GateDegree dt = target.degree();
    if (c.is_homogeneous() && dt.is_finite() && dt.value() >= 1 && c.degree() == dt &&
        prof.bottom_min_fanin >= 1) {
        for (const cf::BoundCertificate& cert : cf::homogeneous_bottom_fanin_bound(
                 c, static_cast<std::uint64_t>(dt.value())))
            emit(cert);
    } else {
        std::cerr << "bottom fan-in chain skipped: preconditions not met\n";
    }
    return ok ? 0 : 1;
}

int cmd_parse_trees(const std::string& path, std::size_t limit, CommonOpts& common) {
    cf::Circuit<Ring> c = read_circuit(path);
    Emitter em;
    if (!common.report_path.empty()) em.open(common.report_path);

    cf::Int count = cf::count_parse_trees(c);
    cf::Json j;
    j["kind"] = "parse-trees";
    j["count"] = cf::decimal(count);
    if (count <= cf::Int(limit)) {
        j["sum"] = cf::parse_tree_sum(c, limit).to_string();
        em.line(j);
        std::size_t idx = 0;
        for (const cf::ParseTree& t : cf::enumerate_parse_trees(c, limit)) {
            cf::Json tj;
            tj["kind"] = "parse-tree";
            tj["index"] = idx++;
            tj["term"] = cf::parse_tree_term(c, t).to_string();
            tj["leaves"] = cf::parse_tree_leaf_count(t.root);
            em.line(tj);
        }
    } else {
        j["sum"] = cf::Json(nullptr);
        em.line(j);
    }
    std::cerr << "parse trees: " << cf::decimal(count) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"arithmetic circuit toolkit: passes, verification, bounds"};
    app.require_subcommand(1);

    CommonOpts c_stats, c_transform, c_verify, c_bounds, c_trees;

    std::string stats_file;
    CLI::App* stats = app.add_subcommand("stats", "shape and validation of a circuit file");
    stats->add_option("file", stats_file, "circuit file")->required();
    c_stats.attach(stats);

    std::string gen_family, gen_out;
    std::uint32_t gen_n = 2;
    cf::GeneratorSpec gen_spec;
    std::optional<std::uint64_t> gen_seed;
    CLI::App* gen = app.add_subcommand("gen", "write a reference circuit");
    gen->add_option("--family", gen_family, "perm|det|comb|random")->required();
    gen->add_option("--n", gen_n, "size parameter / variable count");
    gen->add_option("--gates", gen_spec.target_gates, "random: gate target");
    gen->add_option("--degree-cap", gen_spec.degree_cap, "random: degree cap");
    gen->add_option("--fanin-cap", gen_spec.fanin_cap, "random: fan-in cap");
    gen->add_flag("--homogeneous", gen_spec.homogeneous, "random: force homogeneity");
    gen->add_option("--seed", gen_seed, "random: PRNG seed");
    gen->add_option("--out", gen_out, "output file (stdout when absent)");

    std::string tr_file, tr_passes, tr_out;
    std::optional<std::uint64_t> tr_a;
    CLI::App* transform = app.add_subcommand("transform", "run a pass list over a circuit");
    transform->add_option("file", tr_file, "circuit file")->required();
    transform->add_option("--pass", tr_passes,
                          "comma list: binarize,homogenize,normalize,balance,depth4,reduce")
        ->required();
    transform->add_option("--a", tr_a, "cut parameter for depth4 (omit to auto-pick)");
    transform->add_option("--out", tr_out, "write the transformed circuit here");
    c_transform.attach(transform);

    std::string ver_a, ver_b;
    CLI::App* verify = app.add_subcommand("verify", "equivalence of two circuit files");
    verify->add_option("first", ver_a, "circuit file")->required();
    verify->add_option("second", ver_b, "circuit file")->required();
    c_verify.attach(verify);

    std::string bd_file, bd_target;
    CLI::App* bounds = app.add_subcommand("bounds", "counting certificates for a layered circuit");
    bounds->add_option("file", bd_file, "layered circuit file")->required();
    bounds->add_option("target", bd_target, "target circuit file")->required();
    c_bounds.attach(bounds);

    std::string pt_file;
    std::size_t pt_limit = 10000;
    CLI::App* trees = app.add_subcommand("parse-trees", "parse tree census of a circuit");
    trees->add_option("file", pt_file, "circuit file")->required();
    trees->add_option("--limit", pt_limit, "max trees to enumerate");
    c_trees.attach(trees);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (stats->parsed()) return cmd_stats(stats_file, c_stats);
        if (gen->parsed()) {
            gen_spec.num_vars = gen_n;
            gen_spec.seed = resolve_seed(gen_seed);
            return cmd_gen(gen_family, gen_n, gen_spec, gen_out);
        }
        if (transform->parsed())
            return cmd_transform(tr_file, tr_passes, tr_a, tr_out, c_transform);
        if (verify->parsed()) return cmd_verify(ver_a, ver_b, c_verify);
        if (bounds->parsed()) return cmd_bounds(bd_file, bd_target, c_bounds);
        if (trees->parsed()) return cmd_parse_trees(pt_file, pt_limit, c_trees);
    } catch (const cf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
