#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "circuitflow/circuitflow.hpp"

namespace cf = circuitflow;
using R = cf::Int;
using Poly = cf::SparsePolynomial<R>;

namespace {

struct Criterion {
    bool pass = true;
    double seconds = 0;
    std::string report;
};

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void print_line(int index, const std::string& name, const Criterion& c) {
    std::cout << "criterion " << index << " " << name << ": "
              << (c.pass ? "PASS" : "FAIL") << " (" << cf::fixed6(c.seconds) << "s)"
              << std::endl;
    if (!c.pass) std::cerr << c.report << "\n";
}

// ---- criterion 1: parse-tree ground truth --------------------------------

const char* kSharedExample =
    "input x 0\ninput y 1\ninput z 2\n"
    "add g x y\nadd h g z\nmul out g h\noutput out\n";

Criterion criterion1() {
    Timer t;
    Criterion c;
    cf::Circuit<R> ex = cf::parse_circuit<R>(kSharedExample);
    bool six = (cf::count_parse_trees(ex) == 6) &&
               (cf::enumerate_parse_trees(ex, 10).size() == 6);

    Poly x = Poly::variable(0), y = Poly::variable(1), z = Poly::variable(2);
    Poly expected = x * x + Poly::constant(R(2)) * x * y + y * y + x * z + y * z;
    Poly sum = cf::parse_tree_sum(ex, 10);
    c.pass = six && (sum == expected) && (cf::expand(ex) == expected);
    c.report = "count six: " + std::string(six ? "yes" : "no") +
               "\nsum: " + sum.to_string() + "\nexpected: " + expected.to_string();
    c.seconds = t.seconds();
    return c;
}

// ---- criterion 2: parse-tree sums match the expansion oracle -------------

Criterion criterion2() {
    Timer t;
    Criterion c;
    std::ostringstream rep;
    const std::size_t kEnumCap = 100000;
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; checked < 500; ++seed) {
        cf::GeneratorSpec spec;
        spec.num_vars = 4;
        spec.target_gates = 12;
        spec.degree_cap = 6;
        spec.seed = seed;
        cf::Circuit<R> circ = cf::gen_random<R>(spec);
        cf::Int trees = cf::count_parse_trees(circ);
        cf::Json j;
        j["seed"] = seed;
        j["trees"] = cf::decimal(trees);
        if (trees > cf::Int(kEnumCap)) {
            j["checked"] = false;  // enumeration infeasible by count, skipped
            rep << j.dump() << "\n";
            continue;
        }
        bool equal = (cf::parse_tree_sum(circ, kEnumCap) == cf::expand(circ));
        j["checked"] = true;
        j["equal"] = equal;
        rep << j.dump() << "\n";
        c.pass = c.pass && equal;
        ++checked;
    }
    c.report = rep.str();
    c.seconds = t.seconds();
    return c;
}

// ---- criterion 3: homogenization suite ------------------------------------

Criterion criterion3() {
    Timer t;
    Criterion c;
    std::ostringstream rep;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        cf::GeneratorSpec spec;
        spec.num_vars = 4;
        spec.target_gates = 15;
        spec.degree_cap = 5;
        spec.seed = seed;
        cf::Circuit<R> bin = cf::binarize(cf::gen_random<R>(spec)).circuit;

        cf::PassResult<R> hom = cf::homogenize(bin);
        std::size_t s = bin.size();
        std::size_t d = static_cast<std::size_t>(bin.degree().value_or(0));
        bool ok = hom.report.all_satisfied();
        ok = ok && hom.circuit.size() <= s * (d + 1) * (d + 1);
        ok = ok && hom.circuit.is_homogeneous();

        Poly whole = cf::expand(bin);
        for (std::size_t i = 0; i < hom.circuit.outputs().size(); ++i) {
            cf::GateId o = hom.circuit.outputs()[i];
            Poly part = cf::expand(hom.circuit, o);
            ok = ok && (part == whole.homogeneous_part(static_cast<std::int64_t>(i)));
            cf::GateDegree dg = hom.circuit.degree(o);
            ok = ok && (dg.is_neg_infinity() ||
                        dg == cf::GateDegree(static_cast<std::int64_t>(i)));
        }

        cf::Json j;
        j["seed"] = seed;
        j["s"] = s;
        j["hom_size"] = hom.circuit.size();
        j["ok"] = ok;
        rep << j.dump() << "\n";
        c.pass = c.pass && ok;
    }
    c.report = rep.str();
    c.seconds = t.seconds();
    return c;
}

// ---- criterion 4: balancing suite ------------------------------------------

bool balance_bullets(const cf::Circuit<R>& c) {
    for (cf::GateId g = 0; g < c.size(); ++g) {
        const cf::Gate<R>& gate = c.gate(g);
        if (gate.kind == cf::GateKind::Mul) {
            if (gate.children.size() > 5) return false;
            cf::GateDegree dg = c.degree(g);
            for (cf::GateId ch : gate.children) {
                cf::GateDegree dc = c.degree(ch);
                if (dc.is_neg_infinity()) continue;
                if (dg.is_neg_infinity() || 2 * dc.value() > dg.value()) return false;
            }
        } else if (gate.kind == cf::GateKind::Scal) {
            if (gate.children.size() != 2) return false;
            if (!(c.degree(gate.children[0]) == cf::GateDegree(0) ||
                  c.degree(gate.children[1]) == cf::GateDegree(0)))
                return false;
        }
    }
    return true;
}

Criterion criterion4() {
    Timer t;
    Criterion c;
    std::ostringstream rep;

    cf::Circuit<R> comb = cf::gen_comb<R>(6);
    bool comb_before = cf::is_x_balanced(comb);
    cf::PassResult<R> comb_bal = cf::balance(comb);
    bool comb_after = cf::is_x_balanced(comb_bal.circuit);
    c.pass = !comb_before && comb_after && comb_bal.report.all_satisfied();
    {
        cf::Json j;
        j["comb6_before"] = comb_before;
        j["comb6_after"] = comb_after;
        rep << j.dump() << "\n";
    }

    std::size_t checked = 0;
    for (std::uint64_t seed = 0; checked < 200; ++seed) {
        cf::GeneratorSpec spec;
        spec.num_vars = 4;
        spec.target_gates = 20;
        spec.degree_cap = 8;
        spec.homogeneous = true;
        spec.seed = seed;
        cf::Circuit<R> raw = cf::gen_random<R>(spec);
        if (raw.degree().value_or(0) < 1) continue;
        cf::Circuit<R> norm =
            cf::normalize(cf::binarize(raw).circuit).circuit;
        if (norm.degree().value_or(0) < 1) continue;

        cf::PassResult<R> bal = cf::balance(norm);
        std::size_t s = norm.size();
        cf::Int cap = cf::Int(s) * s * s * s * s * s + cf::Int(s) * s * s * s + 1;
        bool ok = bal.report.all_satisfied();
        ok = ok && cf::is_x_balanced(bal.circuit);
        ok = ok && balance_bullets(bal.circuit);
        ok = ok && cf::Int(bal.circuit.size()) <= cap;
        ok = ok && (cf::expand(bal.circuit) == cf::expand(norm));

        cf::Json j;
        j["seed"] = seed;
        j["s"] = s;
        j["bal_size"] = bal.circuit.size();
        j["ok"] = ok;
        rep << j.dump() << "\n";
        c.pass = c.pass && ok;
        ++checked;
    }
    c.report = rep.str();
    c.seconds = t.seconds();
    return c;
}

// ---- criteria 5 and 6: depth-4 reduction and its counting certificates ----

struct FlatFamily {
    std::uint32_t n;
    bool is_perm;
    cf::Circuit<R> flat;
};

bool check_reduction(const cf::Circuit<R>& input, const cf::PipelineResult<R>& r,
                     bool field_equivalence, cf::Json& j) {
    bool ok = r.all_satisfied();
    ok = ok && (r.circuit.depth() == 4);
    ok = ok && r.circuit.is_homogeneous();

    // Fan-in caps of the merged circuit against the worst part parameters.
    std::uint64_t a_max = 0, da_max = 0;
    for (const cf::PassReport& rep : r.reports) {
        if (rep.pass != "depth4") continue;
        std::uint64_t a = std::stoull(rep.params.at("a"));
        std::uint64_t d = std::stoull(rep.params.at("degree"));
        a_max = std::max(a_max, a);
        da_max = std::max(da_max, d == 0 ? 0 : (d + a - 1) / a);
    }
    cf::LevelProfile prof = cf::extract_level_profile(r.circuit);
    if (a_max > 0) {
        ok = ok && prof.t3_pos <= 15 * a_max;
        ok = ok && prof.t1_vars <= da_max;
    }

    std::size_t s_bin = r.reports.at(0).output.size;
    std::uint64_t d_in = static_cast<std::uint64_t>(input.degree().value_or(0));
    std::size_t n_in = std::max<std::size_t>(input.num_vars(), 1);
    cf::BoundCertificate ceiling = cf::predict_theorem1_size(s_bin, d_in, n_in);
    ok = ok && cf::Int(r.circuit.size()) <= ceiling.lhs;

    if (field_equivalence) {
        ok = ok && cf::equivalent(input, r.circuit).equal;
        j["equivalence"] = "field";
    } else {
        ok = ok && (cf::expand(r.circuit) == cf::expand(input));
        j["equivalence"] = "oracle";
    }

    j["size"] = r.circuit.size();
    j["depth"] = r.circuit.depth();
    j["t3_pos"] = prof.t3_pos;
    j["t1_vars"] = prof.t1_vars;
    j["a_max"] = a_max;
    j["ok"] = ok;
    return ok;
}

void criteria5and6(Criterion& c5, Criterion& c6) {
    Timer t5;
    std::ostringstream rep5;
    std::vector<FlatFamily> flats;

    for (std::uint32_t n = 2; n <= 4; ++n) {
        for (bool is_perm : {true, false}) {
            cf::Circuit<R> input =
                is_perm ? cf::gen_perm<R>(n) : cf::gen_det<R>(n);
            cf::PipelineResult<R> r = cf::reduce_to_depth4(input);
            cf::Json j;
            j["family"] = is_perm ? "perm" : "det";
            j["n"] = n;
            bool ok = check_reduction(input, r, n > 3, j);
            rep5 << j.dump() << "\n";
            c5.pass = c5.pass && ok;
            flats.push_back({n, is_perm, std::move(r.circuit)});
        }
    }

    std::size_t checked = 0;
    for (std::uint64_t seed = 0; checked < 100; ++seed) {
        cf::GeneratorSpec spec;
        spec.num_vars = 4;
        spec.target_gates = 12;
        spec.degree_cap = 4;
        spec.homogeneous = true;
        spec.seed = seed;
        cf::Circuit<R> input = cf::gen_random<R>(spec);
        if (input.degree().value_or(0) < 1) continue;
        cf::PipelineResult<R> r = cf::reduce_to_depth4(input);
        cf::Json j;
        j["seed"] = seed;
        bool ok = check_reduction(input, r, false, j);
        rep5 << j.dump() << "\n";
        c5.pass = c5.pass && ok;
        ++checked;
    }
    c5.report = rep5.str();
    c5.seconds = t5.seconds();

    Timer t6;
    std::ostringstream rep6;
    for (const FlatFamily& f : flats) {
        cf::Circuit<R> target =
            f.is_perm ? cf::gen_perm<R>(f.n) : cf::gen_det<R>(f.n);
        cf::LevelProfile prof = cf::extract_level_profile(f.flat);
        std::uint64_t v = std::max<std::size_t>(prof.t3_pos, 1);

        for (const cf::BoundCertificate& cert : cf::check_lower_bound(f.flat, target)) {
            c6.pass = c6.pass && cert.satisfied;
            if (cert.claim == "level1-count") {
                // s1 >= (n!)^(1/t3) - 1, exact integer comparison.
                cf::Int threshold =
                    cf::detail::min_base_for_power(cf::factorial(f.n), v);
                c6.pass = c6.pass && (cert.rhs == threshold) &&
                          (cf::Int(prof.s1) >= threshold);
            }
            cf::Json j;
            j["family"] = f.is_perm ? "perm" : "det";
            j["n"] = f.n;
            j.update(cf::json_of(cert));
            rep6 << j.dump() << "\n";
        }
        for (const cf::BoundCertificate& cert :
             cf::homogeneous_bottom_fanin_bound(f.flat, f.n)) {
            c6.pass = c6.pass && cert.satisfied;
            cf::Json j;
            j["family"] = f.is_perm ? "perm" : "det";
            j["n"] = f.n;
            j.update(cf::json_of(cert));
            rep6 << j.dump() << "\n";
        }
    }
    c6.report = rep6.str();
    c6.seconds = t6.seconds();
}

// ---- criterion 7: monomial calculus properties -----------------------------

Criterion criterion7() {
    Timer t;
    Criterion c;
    std::ostringstream rep;
    std::mt19937_64 rng(777);
    for (int round = 0; round < 1000; ++round) {
        std::uint32_t nv = 1 + static_cast<std::uint32_t>(cf::uniform_u64(rng, 3));
        std::size_t want = 1 + static_cast<std::size_t>(cf::uniform_u64(rng, 5));
        cf::MonomialSet e;
        for (int tries = 0; tries < 64 && e.size() < want; ++tries) {
            cf::Monomial m;
            std::uint32_t deg = static_cast<std::uint32_t>(cf::uniform_u64(rng, 4));
            for (std::uint32_t i = 0; i < deg; ++i)
                m = m * cf::Monomial::variable(
                            static_cast<cf::VarIndex>(cf::uniform_u64(rng, nv)));
            e.insert(m);
        }

        // Summing polynomials never enlarges the reachable monomial set.
        std::vector<cf::MonomialSet> split(1 + cf::uniform_u64(rng, 3));
        for (const cf::Monomial& m : e)
            split[static_cast<std::size_t>(cf::uniform_u64(rng, split.size()))].insert(m);
        bool ok = (cf::closure_sum(split) == e);

        std::vector<std::size_t> sizes;
        cf::MonomialSet prev{cf::Monomial{}};
        for (std::uint64_t k = 1; k <= 4; ++k) {
            cf::MonomialSet p = cf::closure_prod(e, k);
            cf::Int cap = 1;
            for (std::uint64_t i = 0; i < k; ++i) cap *= cf::Int(e.size()) + 1;
            ok = ok && cf::Int(p.size()) <= cap;
            ok = ok && p.count(cf::Monomial{}) == 1;
            for (const cf::Monomial& m : e) ok = ok && p.count(m) == 1;
            ok = ok && std::includes(p.begin(), p.end(), prev.begin(), prev.end());
            sizes.push_back(p.size());
            prev = std::move(p);
        }
        // Every pairwise product must be reachable with two factors.
        cf::MonomialSet two = cf::closure_prod(e, 2);
        for (const cf::Monomial& m1 : e)
            for (const cf::Monomial& m2 : e) ok = ok && two.count(m1 * m2) == 1;

        cf::Json j;
        j["round"] = round;
        j["set_size"] = e.size();
        j["closure_sizes"] = sizes;
        j["ok"] = ok;
        rep << j.dump() << "\n";
        c.pass = c.pass && ok;
    }
    c.report = rep.str();
    c.seconds = t.seconds();
    return c;
}

// ---- battery shared across criteria 2-8 ------------------------------------

struct Battery {
    Criterion c2, c3, c4, c5, c6, c7;
};

Battery run_battery() {
    Battery b;
    auto mark = [](const char* what, const Criterion& c) {
        std::cerr << "[battery] " << what << " done in " << cf::fixed6(c.seconds)
                  << "s\n";
    };
    b.c2 = criterion2();
    mark("criterion 2", b.c2);
    b.c3 = criterion3();
    mark("criterion 3", b.c3);
    b.c4 = criterion4();
    mark("criterion 4", b.c4);
    criteria5and6(b.c5, b.c6);
    mark("criterion 5", b.c5);
    mark("criterion 6", b.c6);
    b.c7 = criterion7();
    mark("criterion 7", b.c7);
    return b;
}

Battery& first_run() {
    static Battery b = run_battery();
    return b;
}

} // namespace

TEST_CASE("criterion 1: parse-tree ground truth") {
    Criterion c = criterion1();
    print_line(1, "parse-tree ground truth", c);
    REQUIRE(c.pass);
    REQUIRE(c.seconds < 1.0);
}

TEST_CASE("criterion 2: parse-tree sums equal the expansion oracle") {
    const Criterion& c = first_run().c2;
    print_line(2, "parse-tree sum oracle", c);
    REQUIRE(c.pass);
    REQUIRE(c.seconds < 30.0);
}

TEST_CASE("criterion 3: homogenization suite") {
    const Criterion& c = first_run().c3;
    print_line(3, "homogenization", c);
    REQUIRE(c.pass);
    REQUIRE(c.seconds < 60.0);
}

TEST_CASE("criterion 4: balancing suite") {
    const Criterion& c = first_run().c4;
    print_line(4, "balancing", c);
    REQUIRE(c.pass);
    REQUIRE(c.seconds < 300.0);
}

TEST_CASE("criterion 5: depth-4 reduction suite") {
    const Criterion& c = first_run().c5;
    print_line(5, "depth-4 reduction", c);
    REQUIRE(c.pass);
    REQUIRE(c.seconds < 600.0);
}

TEST_CASE("criterion 6: lower-bound certificates on reduced circuits") {
    const Criterion& c = first_run().c6;
    print_line(6, "lower-bound certificates", c);
    REQUIRE(c.pass);
    REQUIRE(c.seconds < 10.0);
}

TEST_CASE("criterion 7: monomial calculus properties") {
    const Criterion& c = first_run().c7;
    print_line(7, "monomial calculus", c);
    REQUIRE(c.pass);
    REQUIRE(c.seconds < 30.0);
}

TEST_CASE("criterion 8: determinism of every report") {
    Battery& one = first_run();
    Battery two = run_battery();
    bool same = one.c2.report == two.c2.report && one.c3.report == two.c3.report &&
                one.c4.report == two.c4.report && one.c5.report == two.c5.report &&
                one.c6.report == two.c6.report && one.c7.report == two.c7.report;
    Criterion c;
    c.pass = same && two.c2.pass && two.c3.pass && two.c4.pass && two.c5.pass &&
             two.c6.pass && two.c7.pass;
    print_line(8, "determinism", c);
    REQUIRE(c.pass);
}
