#include <catch2/catch_amalgamated.hpp>

#include "circuitflow/generators.hpp"
#include "circuitflow/parse_trees.hpp"
#include "circuitflow/text_format.hpp"

namespace cf = circuitflow;
using R = cf::Int;
using Poly = cf::SparsePolynomial<R>;

// (x+y) * ((x+y)+z) with the inner sum shared between both uses.
static cf::Circuit<R> shared_sum_circuit() {
    return cf::parse_circuit<R>(
        "input x 0\n"
        "input y 1\n"
        "input z 2\n"
        "add g x y\n"
        "add h g z\n"
        "mul out g h\n"
        "output out\n");
}

TEST_CASE("shared sum circuit has exactly six parse trees") {
    cf::Circuit<R> c = shared_sum_circuit();
    REQUIRE(cf::count_parse_trees(c) == 6);
    auto trees = cf::enumerate_parse_trees(c, 10);
    REQUIRE(trees.size() == 6);
    for (const cf::ParseTree& t : trees)
        REQUIRE(cf::parse_tree_leaf_count(t.root) == 2);
}

TEST_CASE("parse tree terms sum to the expansion") {
    cf::Circuit<R> c = shared_sum_circuit();
    Poly sum = cf::parse_tree_sum(c, 10);
    Poly x = Poly::variable(0), y = Poly::variable(1), z = Poly::variable(2);
    REQUIRE(sum == x * x + Poly::constant(R(2)) * x * y + y * y + x * z + y * z);
    REQUIRE(sum == cf::expand(c));
}

TEST_CASE("enumeration limit trips with the exact count attached") {
    cf::Circuit<R> c = shared_sum_circuit();
    try {
        cf::enumerate_parse_trees(c, 5);
        FAIL("expected a budget error");
    } catch (const cf::BudgetError& e) {
        REQUIRE(e.count == 6);
    }
}

TEST_CASE("counting matches enumeration and expansion on random circuits") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        cf::GeneratorSpec spec;
        spec.num_vars = 3;
        spec.target_gates = 10;
        spec.degree_cap = 4;
        spec.seed = seed;
        cf::Circuit<R> c = cf::gen_random<R>(spec);
        cf::Int count = cf::count_parse_trees(c);
        if (count > 2000) continue;
        auto trees = cf::enumerate_parse_trees(c, 2000);
        REQUIRE(cf::Int(trees.size()) == count);
        Poly sum = cf::parse_tree_sum(c, 2000);
        Poly direct;
        auto all = cf::expand_all(c);
        for (cf::GateId o : c.outputs()) direct = direct + all[o];
        REQUIRE(sum == direct);
    }
}

TEST_CASE("outputs contribute disjoint tree sets") {
    cf::CircuitBuilder<R> b;
    cf::GateId x = b.add_input(0);
    cf::GateId y = b.add_input(1);
    cf::GateId s = b.add_add({x, y});
    cf::GateId p = b.add_mul({s, s});
    b.mark_output(s);
    b.mark_output(p);
    cf::Circuit<R> c = std::move(b).build();
    REQUIRE(cf::count_parse_trees(c) == 6);  // 2 for the sum, 4 for the square
    auto trees = cf::enumerate_parse_trees(c, 10);
    REQUIRE(trees.size() == 6);
    REQUIRE(trees[0].root_gate == s);
    REQUIRE(trees[5].root_gate == p);
}

TEST_CASE("constant leaves fold into coefficients and zeros kill the term") {
    cf::Circuit<R> c = cf::parse_circuit<R>(
        "input x 0\n"
        "const two 2\n"
        "const zero 0\n"
        "add pick x zero\n"
        "mul out two pick\n"
        "output out\n");
    REQUIRE(cf::count_parse_trees(c) == 2);
    Poly sum = cf::parse_tree_sum(c, 10);
    REQUIRE(sum == Poly::term(R(2), cf::Monomial::variable(0)));
    REQUIRE(sum == cf::expand(c));
}

TEST_CASE("enumeration is deterministic") {
    cf::Circuit<R> c = shared_sum_circuit();
    auto a = cf::enumerate_parse_trees(c, 10);
    auto b = cf::enumerate_parse_trees(c, 10);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        REQUIRE(cf::parse_tree_term(c, a[i]) == cf::parse_tree_term(c, b[i]));
}
