#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "circuitflow/circuit.hpp"
#include "circuitflow/errors.hpp"

namespace circuitflow {

inline constexpr int kDefaultTrials = 20;

// Prime field with runtime modulus, used for randomized identity testing.
struct PrimeField {
    std::uint64_t p;

    explicit PrimeField(std::uint64_t prime = kDefaultPrime) : p(prime) {
        if (!is_prime_u64(p))
            throw ConfigError("prime field: " + std::to_string(p) + " is not prime");
    }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        if (s >= p || s < a) s -= p;
        return s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        return a >= b ? a - b : a + p - b;
    }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return detail::mulmod_u64(a, b, p);
    }
};

// Uniform draw from [0, bound) by rejection, so the stream depends only on
// the (fully specified) mt19937_64 sequence, not on library internals.
inline std::uint64_t uniform_u64(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    for (;;) {
        std::uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

// Values of every gate under `assignment` (variable index -> residue).
template <CommutativeRing R>
std::vector<std::uint64_t> evaluate_all(const Circuit<R>& c,
                                        const std::map<VarIndex, std::uint64_t>& assignment,
                                        const PrimeField& F) {
    std::vector<std::uint64_t> val(c.size(), 0);
    for (GateId i = 0; i < c.size(); ++i) {
        const Gate<R>& g = c.gate(i);
        switch (g.kind) {
            case GateKind::Input: {
                auto it = assignment.find(g.var);
                if (it == assignment.end())
                    throw ContractError("evaluate: no value for variable x" +
                                        std::to_string(g.var));
                val[i] = it->second % F.p;
                break;
            }
            case GateKind::Const:
                val[i] = ring_traits<R>::to_residue(g.value, F.p);
                break;
            case GateKind::Add: {
                std::uint64_t s = 0;
                for (GateId ch : g.children) s = F.add(s, val[ch]);
                val[i] = s;
                break;
            }
            case GateKind::Mul:
            case GateKind::Scal: {
                std::uint64_t s = 1 % F.p;
                for (GateId ch : g.children) s = F.mul(s, val[ch]);
                val[i] = s;
                break;
            }
        }
    }
    return val;
}

template <CommutativeRing R>
std::uint64_t evaluate(const Circuit<R>& c, GateId gate,
                       const std::map<VarIndex, std::uint64_t>& assignment,
                       const PrimeField& F) {
    if (gate >= c.size()) throw ContractError("evaluate: gate id out of range");
    return evaluate_all(c, assignment, F)[gate];
}

struct EquivalenceVerdict {
    bool equal = true;
    int trials = 0;
    std::uint64_t prime = 0;
    std::uint64_t seed = 0;
    // Assignment separating the two circuits; present iff !equal, and then
    // it is a proof of inequivalence.
    std::optional<std::map<VarIndex, std::uint64_t>> failure_point;
};

// Randomized equivalence of two single-output circuits over the union of
// their variable sets. The modulus must exceed both degrees, otherwise the
// one-sided error argument does not apply.
template <CommutativeRing R1, CommutativeRing R2>
EquivalenceVerdict equivalent(const Circuit<R1>& a, const Circuit<R2>& b,
                              int trials = kDefaultTrials,
                              const PrimeField& F = PrimeField(),
                              std::uint64_t seed = 0) {
    if (a.outputs().size() != 1 || b.outputs().size() != 1)
        throw ContractError("equivalent: both circuits must have a single output");
    if (trials < 1) throw ConfigError("equivalent: trials must be positive");
    std::int64_t dmax = std::max(a.degree().value_or(0), b.degree().value_or(0));
    if (dmax >= 0 && static_cast<std::uint64_t>(dmax) >= F.p)
        throw ConfigError("equivalent: modulus " + std::to_string(F.p) +
                          " does not exceed circuit degree " + std::to_string(dmax));

    std::set<VarIndex> vars;
    for (VarIndex v : a.variables()) vars.insert(v);
    for (VarIndex v : b.variables()) vars.insert(v);

    EquivalenceVerdict verdict;
    verdict.trials = trials;
    verdict.prime = F.p;
    verdict.seed = seed;
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        std::map<VarIndex, std::uint64_t> point;
        for (VarIndex v : vars) point[v] = uniform_u64(rng, F.p);
        std::uint64_t va = evaluate(a, a.outputs()[0], point, F);
        std::uint64_t vb = evaluate(b, b.outputs()[0], point, F);
        if (va != vb) {
            verdict.equal = false;
            verdict.failure_point = std::move(point);
            return verdict;
        }
    }
    return verdict;
}

} // namespace circuitflow
