#include <catch2/catch_amalgamated.hpp>

#include "circuitflow/binarize.hpp"
#include "circuitflow/generators.hpp"
#include "circuitflow/homogenize.hpp"
#include "circuitflow/normalize.hpp"
#include "circuitflow/text_format.hpp"

namespace cf = circuitflow;
using R = cf::Int;
using Poly = cf::SparsePolynomial<R>;

static bool all_bounds_hold(const cf::PassReport& rep) {
    for (const cf::BoundCheck& bc : rep.bounds)
        if (!bc.satisfied) return false;
    return true;
}

TEST_CASE("binarize rewrites wide products into binary chains") {
    cf::CircuitBuilder<R> b;
    cf::GateId x = b.add_input(0);
    cf::GateId y = b.add_input(1);
    cf::GateId z = b.add_input(2);
    cf::GateId w = b.add_input(3);
    cf::GateId m = b.add_mul({x, y, z, w});
    cf::GateId s = b.add_add({m, x, y});  // adds keep their fan-in
    b.mark_output(s);
    cf::Circuit<R> c = std::move(b).build();

    cf::PassResult<R> r = cf::binarize(c);
    REQUIRE(r.circuit.stats().max_fanin_mul == 2);
    REQUIRE(r.circuit.stats().max_fanin_add == 3);
    REQUIRE(r.circuit.size() == c.size() + 2);
    REQUIRE(cf::expand(r.circuit) == cf::expand(c));
    REQUIRE(r.report.pass == "binarize");
    REQUIRE(r.report.equivalence.has_value());
    REQUIRE(r.report.equivalence->equal);
    REQUIRE(r.report.equivalence->method == "oracle");
    REQUIRE(all_bounds_hold(r.report));
    REQUIRE(r.report.all_satisfied());

    cf::PassResult<R> again = cf::binarize(r.circuit);
    REQUIRE(again.circuit == r.circuit);
}

TEST_CASE("homogenize splits a cube into binomial parts") {
    // (x + 1)^3
    cf::Circuit<R> c = cf::parse_circuit<R>(
        "input x 0\n"
        "const one 1\n"
        "add s x one\n"
        "mul s2 s s\n"
        "mul s3 s2 s\n"
        "output s3\n");
    cf::PassResult<R> r = cf::homogenize(c);
    REQUIRE(r.circuit.outputs().size() == 4);
    REQUIRE(r.circuit.is_homogeneous());

    Poly whole = cf::expand(c);
    auto parts = cf::expand_all(r.circuit);
    for (std::int64_t k = 0; k <= 3; ++k) {
        Poly part = parts[r.circuit.outputs()[static_cast<std::size_t>(k)]];
        REQUIRE(part == whole.homogeneous_part(k));
    }
    REQUIRE(r.circuit.size() <= c.size() * 16);
    REQUIRE(r.report.all_satisfied());
    REQUIRE(r.report.equivalence->method == "oracle-sum");
}

TEST_CASE("homogenize shares one zero gate across vanished parts") {
    cf::Circuit<R> c = cf::parse_circuit<R>(
        "input x 0\ninput y 1\nmul m x y\noutput m\n");
    cf::PassResult<R> r = cf::homogenize(c);
    REQUIRE(r.circuit.outputs().size() == 3);
    REQUIRE(r.circuit.outputs()[0] == r.circuit.outputs()[1]);  // both zero
    REQUIRE(r.circuit.degree(r.circuit.outputs()[0]).is_neg_infinity());
    REQUIRE(cf::expand(r.circuit, r.circuit.outputs()[2]) ==
            Poly::variable(0) * Poly::variable(1));
}

TEST_CASE("homogenize enforces its contract") {
    cf::CircuitBuilder<R> b;
    cf::GateId x = b.add_input(0);
    cf::GateId y = b.add_input(1);
    b.mark_output(x);
    b.mark_output(y);
    cf::Circuit<R> two_out = std::move(b).build();
    REQUIRE_THROWS_AS(cf::homogenize(two_out), cf::ContractError);

    cf::CircuitBuilder<R> b2;
    cf::GateId x2 = b2.add_input(0);
    cf::GateId y2 = b2.add_input(1);
    cf::GateId z2 = b2.add_input(2);
    cf::GateId m = b2.add_mul({x2, y2, z2});
    b2.mark_output(m);
    cf::Circuit<R> wide = std::move(b2).build();
    REQUIRE_THROWS_AS(cf::homogenize(wide), cf::ContractError);
}

TEST_CASE("homogenize stays within its size budget on random circuits") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        cf::GeneratorSpec spec;
        spec.num_vars = 3;
        spec.target_gates = 14;
        spec.degree_cap = 5;
        spec.seed = seed;
        cf::Circuit<R> c = cf::gen_random<R>(spec);
        cf::Circuit<R> bin = cf::binarize(c).circuit;
        cf::PassResult<R> r = cf::homogenize(bin);
        std::int64_t d = bin.degree().value_or(0);
        REQUIRE(cf::Int(r.circuit.size()) <=
                cf::Int(bin.size()) * cf::Int(d + 1) * cf::Int(d + 1));
        REQUIRE(r.circuit.is_homogeneous());
        REQUIRE(r.report.all_satisfied());

        Poly whole = cf::expand(bin);
        auto parts = cf::expand_all(r.circuit);
        Poly sum;
        for (cf::GateId o : r.circuit.outputs()) sum = sum + parts[o];
        REQUIRE(sum == whole);
    }
}

TEST_CASE("normalize eliminates gates that cancel to zero") {
    // (x - x) * y + x * y computes x*y through a semantically zero branch.
    cf::Circuit<R> c = cf::parse_circuit<R>(
        "input x 0\n"
        "input y 1\n"
        "const neg -1\n"
        "smul nx neg x\n"
        "add g x nx\n"
        "mul dead g y\n"
        "mul live x y\n"
        "add out dead live\n"
        "output out\n");
    cf::PassResult<R> r = cf::normalize(c);
    REQUIRE(cf::expand(r.circuit) == Poly::variable(0) * Poly::variable(1));
    REQUIRE(r.circuit.size() < c.size());
    REQUIRE(r.circuit.size() == 3);  // x, y, x*y
    REQUIRE(r.report.params.at("zero_detection") == "oracle");
    REQUIRE(r.report.all_satisfied());
}

TEST_CASE("normalize folds constant subcircuits and forms scalar gates") {
    cf::Circuit<R> c = cf::parse_circuit<R>(
        "input x 0\n"
        "const two 2\n"
        "const three 3\n"
        "add five two three\n"
        "mul out five x\n"
        "output out\n");
    cf::PassResult<R> r = cf::normalize(c);
    REQUIRE(r.circuit.size() == 3);
    cf::CircuitStats st = r.circuit.stats();
    REQUIRE(st.count_scal == 1);
    REQUIRE(st.count_add == 0);
    REQUIRE(cf::expand(r.circuit) == Poly::term(R(5), cf::Monomial::variable(0)));
    for (cf::GateId i = 0; i < r.circuit.size(); ++i)
        if (r.circuit.degree(i) <= cf::GateDegree(0))
            REQUIRE(r.circuit.gate(i).kind == cf::GateKind::Const);
}

TEST_CASE("normalize rotates the heaviest factor to the end") {
    cf::Circuit<R> c = cf::parse_circuit<R>(
        "input x 0\n"
        "input y 1\n"
        "mul xy x y\n"
        "mul out x xy y\n"
        "output out\n");
    cf::PassResult<R> r = cf::normalize(c);
    for (cf::GateId i = 0; i < r.circuit.size(); ++i) {
        const cf::Gate<R>& g = r.circuit.gate(i);
        if (g.kind != cf::GateKind::Mul && g.kind != cf::GateKind::Scal) continue;
        for (cf::GateId ch : g.children)
            REQUIRE(r.circuit.degree(ch) <= r.circuit.degree(g.children.back()));
    }
    REQUIRE(cf::expand(r.circuit) == cf::expand(c));
}

TEST_CASE("normalize maps a vanishing output to a constant zero") {
    cf::Circuit<R> c = cf::parse_circuit<R>(
        "input x 0\n"
        "const zero 0\n"
        "mul out x zero\n"
        "output out\n");
    cf::PassResult<R> r = cf::normalize(c);
    REQUIRE(r.circuit.size() == 1);
    REQUIRE(r.circuit.gate(0).kind == cf::GateKind::Const);
    REQUIRE(cf::expand(r.circuit).is_zero());
}

TEST_CASE("normalize falls back to randomized zero detection under a tiny budget") {
    cf::Circuit<R> c = cf::parse_circuit<R>(
        "input x 0\n"
        "input y 1\n"
        "const neg -1\n"
        "smul nx neg x\n"
        "add g x nx\n"
        "add w x y\n"
        "mul dead g y\n"
        "mul live w y\n"
        "add out dead live\n"
        "output out\n");
    cf::PassOptions opts;
    opts.term_budget = 1;
    cf::PassResult<R> r = cf::normalize(c, opts);
    REQUIRE(r.report.params.at("zero_detection") == "field");
    REQUIRE(r.circuit.size() == 4);
    REQUIRE(cf::expand(r.circuit) == cf::expand(c));
    REQUIRE(r.report.equivalence->method == "field");
    REQUIRE(r.report.equivalence->equal);
}

TEST_CASE("normalize requires homogeneous input and binarized constant products") {
    cf::Circuit<R> mixed = cf::parse_circuit<R>(
        "input x 0\nmul xx x x\nadd out x xx\noutput out\n");
    REQUIRE_THROWS_AS(cf::normalize(mixed), cf::ContractError);

    cf::Circuit<R> wide = cf::parse_circuit<R>(
        "input x 0\ninput y 1\nconst two 2\nmul out two x y\noutput out\n");
    REQUIRE_THROWS_AS(cf::normalize(wide), cf::ContractError);
}

TEST_CASE("normalize is idempotent and never grows") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        cf::GeneratorSpec spec;
        spec.num_vars = 3;
        spec.target_gates = 16;
        spec.degree_cap = 4;
        spec.homogeneous = true;
        spec.seed = seed;
        cf::Circuit<R> c = cf::binarize(cf::gen_random<R>(spec)).circuit;
        cf::PassResult<R> r1 = cf::normalize(c);
        REQUIRE(r1.circuit.size() <= c.size());
        REQUIRE(r1.report.all_satisfied());
        cf::PassResult<R> r2 = cf::normalize(r1.circuit);
        REQUIRE(r2.circuit == r1.circuit);
    }
}
