#include <catch2/catch_amalgamated.hpp>

#include "circuitflow/field_eval.hpp"
#include "circuitflow/generators.hpp"
#include "circuitflow/text_format.hpp"

namespace cf = circuitflow;
using R = cf::Int;

TEST_CASE("primality screen accepts known primes and rejects composites") {
    REQUIRE(cf::is_prime_u64(2));
    REQUIRE(cf::is_prime_u64(61));
    REQUIRE(cf::is_prime_u64(cf::kDefaultPrime));
    REQUIRE_FALSE(cf::is_prime_u64(1));
    REQUIRE_FALSE(cf::is_prime_u64(561));        // Carmichael
    REQUIRE_FALSE(cf::is_prime_u64(1ULL << 40));
    REQUIRE_THROWS_AS(cf::PrimeField(91), cf::ConfigError);
}

TEST_CASE("field arithmetic wraps correctly near the modulus") {
    cf::PrimeField F(cf::kDefaultPrime);
    std::uint64_t big = F.p - 1;
    REQUIRE(F.add(big, 1) == 0);
    REQUIRE(F.sub(0, 1) == big);
    REQUIRE(F.mul(big, big) == 1);  // (-1)^2
}

TEST_CASE("evaluation agrees with direct substitution") {
    cf::Circuit<R> c = cf::parse_circuit<R>(
        "input x 0\n"
        "input y 1\n"
        "const neg -3\n"
        "add s x y\n"
        "smul t neg s\n"
        "mul out t s\n"
        "output out\n");
    cf::PrimeField F(101);
    std::map<cf::VarIndex, std::uint64_t> point{{0, 5}, {1, 7}};
    // -3 * (5+7)^2 = -432 = -432 + 5*101 = 73 (mod 101)
    REQUIRE(cf::evaluate(c, c.outputs()[0], point, F) == 73);
    REQUIRE_THROWS_AS(cf::evaluate(c, c.outputs()[0], {{0, 5}}, F), cf::ContractError);
}

TEST_CASE("equivalent circuits pass randomized comparison") {
    // (x+y)^2 written two ways.
    cf::Circuit<R> a = cf::parse_circuit<R>(
        "input x 0\ninput y 1\nadd s x y\nmul p s s\noutput p\n");
    cf::Circuit<R> b = cf::parse_circuit<R>(
        "input x 0\ninput y 1\nconst two 2\n"
        "mul xx x x\nmul yy y y\nmul xy x y\nsmul dxy two xy\n"
        "add p xx dxy yy\noutput p\n");
    cf::EquivalenceVerdict v = cf::equivalent(a, b);
    REQUIRE(v.equal);
    REQUIRE(v.trials == cf::kDefaultTrials);
    REQUIRE_FALSE(v.failure_point.has_value());
}

TEST_CASE("inequivalent circuits yield a checkable failure point") {
    cf::Circuit<R> a = cf::parse_circuit<R>(
        "input x 0\ninput y 1\nmul p x y\noutput p\n");
    cf::Circuit<R> b = cf::parse_circuit<R>(
        "input x 0\ninput y 1\nadd p x y\noutput p\n");
    cf::EquivalenceVerdict v = cf::equivalent(a, b, 20, cf::PrimeField(), 42);
    REQUIRE_FALSE(v.equal);
    REQUIRE(v.failure_point.has_value());
    cf::PrimeField F(v.prime);
    std::uint64_t va = cf::evaluate(a, a.outputs()[0], *v.failure_point, F);
    std::uint64_t vb = cf::evaluate(b, b.outputs()[0], *v.failure_point, F);
    REQUIRE(va != vb);
}

TEST_CASE("verdicts are reproducible for a fixed seed") {
    cf::Circuit<R> a = cf::parse_circuit<R>(
        "input x 0\ninput y 1\nmul p x y\noutput p\n");
    cf::Circuit<R> b = cf::parse_circuit<R>(
        "input x 0\ninput y 1\nadd p x y\noutput p\n");
    cf::EquivalenceVerdict v1 = cf::equivalent(a, b, 20, cf::PrimeField(), 7);
    cf::EquivalenceVerdict v2 = cf::equivalent(a, b, 20, cf::PrimeField(), 7);
    REQUIRE(v1.equal == v2.equal);
    REQUIRE(*v1.failure_point == *v2.failure_point);
}

TEST_CASE("modulus must exceed the degree for the error bound to hold") {
    cf::CircuitBuilder<R> b;
    cf::GateId x = b.add_input(0);
    cf::GateId m = b.add_mul({x, x, x});
    b.mark_output(m);
    cf::Circuit<R> c = std::move(b).build();
    REQUIRE_THROWS_AS(cf::equivalent(c, c, 5, cf::PrimeField(3), 0), cf::ConfigError);
    REQUIRE(cf::equivalent(c, c, 5, cf::PrimeField(5), 0).equal);
}

TEST_CASE("uniform draws stay in range and hit both halves") {
    std::mt19937_64 rng(1);
    bool low = false, high = false;
    for (int i = 0; i < 200; ++i) {
        std::uint64_t v = cf::uniform_u64(rng, 10);
        REQUIRE(v < 10);
        if (v < 5) low = true;
        else high = true;
    }
    REQUIRE(low);
    REQUIRE(high);
}
