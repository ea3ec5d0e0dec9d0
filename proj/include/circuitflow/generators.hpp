#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "circuitflow/circuit.hpp"
#include "circuitflow/errors.hpp"
#include "circuitflow/field_eval.hpp"

namespace circuitflow {

// Variable layout for the matrix families: entry (i, j) of an n x n matrix,
// 0-based, is variable i*n + j.

namespace detail {

inline int permutation_sign(const std::vector<std::uint32_t>& perm) {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) ++inversions;
    return (inversions % 2 == 0) ? 1 : -1;
}

template <CommutativeRing R>
Circuit<R> gen_matrix_family(std::uint32_t n, bool signed_terms) {
    if (n < 1 || n > 5)
        throw GenerationError("matrix family: n must be between 1 and 5");
    CircuitBuilder<R> b;
    std::vector<GateId> entry(n * n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) entry[i * n + j] = b.add_input(i * n + j);

    GateId minus_one = 0;
    bool have_minus_one = false;

    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<GateId> terms;
    do {
        std::vector<GateId> factors;
        for (std::uint32_t i = 0; i < n; ++i) factors.push_back(entry[i * n + perm[i]]);
        GateId prod = (n == 1) ? factors[0] : b.add_mul(factors);
        if (signed_terms && permutation_sign(perm) < 0) {
            if (!have_minus_one) {
                minus_one = b.add_const(R{-1});
                have_minus_one = true;
            }
            prod = b.add_scal(minus_one, prod);
        }
        terms.push_back(prod);
    } while (std::next_permutation(perm.begin(), perm.end()));

    GateId out = (terms.size() == 1) ? terms[0] : b.add_add(terms);
    b.mark_output(out);
    return std::move(b).build();
}

} // namespace detail

// Sum over all permutations of the n x n variable matrix, all signs +1.
template <CommutativeRing R>
Circuit<R> gen_perm(std::uint32_t n) {
    return detail::gen_matrix_family<R>(n, false);
}

// Same sum with the permutation sign attached via a scalar gate.
template <CommutativeRing R>
Circuit<R> gen_det(std::uint32_t n) {
    return detail::gen_matrix_family<R>(n, true);
}

// Right comb x0*(x1*(x2*...*(x_{n-2}*x_{n-1}))): the canonical circuit that
// is as unbalanced as a product can get.
template <CommutativeRing R>
Circuit<R> gen_comb(std::uint32_t n) {
    if (n < 2) throw GenerationError("comb: n must be at least 2");
    CircuitBuilder<R> b;
    std::vector<GateId> x(n);
    for (std::uint32_t i = 0; i < n; ++i) x[i] = b.add_input(i);
    GateId t = b.add_mul({x[n - 2], x[n - 1]});
    for (std::uint32_t i = n - 2; i-- > 0;) t = b.add_mul({x[i], t});
    b.mark_output(t);
    return std::move(b).build();
}

struct GeneratorSpec {
    std::uint32_t num_vars = 3;
    std::uint32_t target_gates = 12;  // hard cap on total gate count
    std::int64_t degree_cap = 6;
    std::uint32_t fanin_cap = 3;
    bool homogeneous = false;
    std::uint64_t seed = 0;
};

// Seeded random circuit within the caps. In homogeneous mode Add children
// are drawn from one degree class when possible and otherwise padded up to a
// common degree with variable products.
template <CommutativeRing R>
Circuit<R> gen_random(const GeneratorSpec& spec) {
    if (spec.num_vars < 1) throw GenerationError("random: need at least one variable");
    if (spec.degree_cap < 1) throw GenerationError("random: degree cap below 1");
    if (spec.fanin_cap < 2) throw GenerationError("random: fan-in cap below 2");
    if (spec.target_gates < spec.num_vars + 2)
        throw GenerationError("random: gate cap too small for the variable count");

    std::mt19937_64 rng(spec.seed);
    CircuitBuilder<R> b;
    std::vector<GateDegree> deg;  // degrees of gates built so far

    auto record = [&](GateId id, GateDegree d) {
        (void)id;
        deg.push_back(d);
        return id;
    };

    for (std::uint32_t v = 0; v < spec.num_vars; ++v)
        record(b.add_input(v), GateDegree(1));

    // A couple of small nonzero constants make scalar gates and
    // cancellation reachable.
    std::vector<GateId> consts;
    std::uint32_t n_consts = 1 + static_cast<std::uint32_t>(uniform_u64(rng, 2));
    for (std::uint32_t k = 0; k < n_consts && b.size() < spec.target_gates; ++k) {
        std::int64_t v = static_cast<std::int64_t>(uniform_u64(rng, 6)) - 3;
        if (v >= 0) ++v;  // skip zero
        consts.push_back(record(b.add_const(R{v}), GateDegree(0)));
    }

    auto pick = [&](const std::vector<GateId>& pool) {
        return pool[static_cast<std::size_t>(uniform_u64(rng, pool.size()))];
    };

    // Multiply `g` by `extra` fresh random variables, one binary Mul each.
    auto pad_with_variables = [&](GateId g, std::int64_t extra) {
        for (std::int64_t k = 0; k < extra; ++k) {
            GateId v = static_cast<GateId>(uniform_u64(rng, spec.num_vars));
            GateDegree d = deg[g] + GateDegree(1);
            g = record(b.add_mul({g, v}), d);
        }
        return g;
    };

    int stuck = 0;
    while (b.size() < spec.target_gates && stuck < 200) {
        std::uint64_t roll = uniform_u64(rng, 100);
        if (roll < 45) {
            // Add
            std::uint32_t k = 2 + static_cast<std::uint32_t>(
                                      uniform_u64(rng, std::min<std::uint32_t>(spec.fanin_cap, 4) - 1));
            if (spec.homogeneous) {
                // group candidates by degree
                std::vector<std::vector<GateId>> by_deg(spec.degree_cap + 1);
                for (GateId g = 0; g < deg.size(); ++g)
                    if (deg[g].is_finite() && deg[g].value() >= 1 &&
                        deg[g].value() <= spec.degree_cap)
                        by_deg[deg[g].value()].push_back(g);
                std::vector<std::int64_t> classes;
                for (std::int64_t d = 1; d <= spec.degree_cap; ++d)
                    if (!by_deg[d].empty()) classes.push_back(d);
                if (classes.empty()) {
                    ++stuck;
                    continue;
                }
                std::int64_t d =
                    classes[static_cast<std::size_t>(uniform_u64(rng, classes.size()))];
                bool pad = uniform_u64(rng, 100) < 20 && d >= 2;
                std::vector<GateId> ch;
                if (pad) {
                    // draw lower-degree children, then raise them to degree d
                    std::vector<GateId> raw;
                    std::int64_t pad_gates = 0;
                    for (std::uint32_t i = 0; i < k; ++i) {
                        std::int64_t dlow =
                            1 + static_cast<std::int64_t>(uniform_u64(rng, d));
                        while (by_deg[dlow].empty()) --dlow;  // degree 1 never empty
                        GateId g = pick(by_deg[dlow]);
                        raw.push_back(g);
                        pad_gates += d - deg[g].value();
                    }
                    if (b.size() + pad_gates + 1 <= spec.target_gates) {
                        for (GateId g : raw)
                            ch.push_back(pad_with_variables(g, d - deg[g].value()));
                    } else {
                        for (std::uint32_t i = 0; i < k; ++i) ch.push_back(pick(by_deg[d]));
                    }
                } else {
                    for (std::uint32_t i = 0; i < k; ++i) ch.push_back(pick(by_deg[d]));
                }
                record(b.add_add(ch), GateDegree(d));
            } else {
                std::vector<GateId> pool;
                for (GateId g = 0; g < deg.size(); ++g)
                    if (deg[g].is_finite()) pool.push_back(g);
                std::vector<GateId> ch;
                for (std::uint32_t i = 0; i < k; ++i) ch.push_back(pick(pool));
                GateDegree d = GateDegree::neg_infinity();
                for (GateId g : ch) d = max(d, deg[g]);
                record(b.add_add(ch), d);
            }
        } else if (roll < 85) {
            // Mul, children drawn under the remaining degree budget
            std::uint32_t k = 2 + static_cast<std::uint32_t>(uniform_u64(
                                      rng, std::min<std::uint32_t>(spec.fanin_cap, 4) - 1));
            std::vector<GateId> ch;
            std::int64_t budget = spec.degree_cap;
            bool ok = true;
            for (std::uint32_t i = 0; i < k; ++i) {
                std::vector<GateId> pool;
                for (GateId g = 0; g < deg.size(); ++g)
                    if (deg[g].is_finite() && deg[g].value() <= budget) pool.push_back(g);
                if (pool.empty()) {
                    ok = false;
                    break;
                }
                GateId g = pick(pool);
                ch.push_back(g);
                budget -= deg[g].value();
            }
            if (!ok) {
                ++stuck;
                continue;
            }
            GateDegree d(0);
            for (GateId g : ch) d = d + deg[g];
            record(b.add_mul(ch), d);
        } else {
            // Scal: one degree-0 gate, one arbitrary finite-degree gate
            std::vector<GateId> zeros, others;
            for (GateId g = 0; g < deg.size(); ++g) {
                if (deg[g] == GateDegree(0)) zeros.push_back(g);
                if (deg[g].is_finite() && deg[g].value() >= 1) others.push_back(g);
            }
            if (zeros.empty() || others.empty()) {
                ++stuck;
                continue;
            }
            GateId z = pick(zeros), g = pick(others);
            record(b.add_scal(z, g), deg[z] + deg[g]);
        }
    }
    if (b.size() < spec.num_vars + 1)
        throw GenerationError("random: could not build a circuit within the caps");

    b.mark_output(static_cast<GateId>(b.size() - 1));
    return std::move(b).build();
}

} // namespace circuitflow
