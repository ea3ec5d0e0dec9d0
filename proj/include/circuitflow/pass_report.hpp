#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "circuitflow/circuit.hpp"
#include "circuitflow/errors.hpp"
#include "circuitflow/field_eval.hpp"
#include "circuitflow/polynomial.hpp"

namespace circuitflow {

struct PassOptions {
    std::uint64_t prime = kDefaultPrime;
    int trials = kDefaultTrials;
    std::uint64_t seed = 0;
    std::size_t term_budget = kDefaultTermBudget;
};

// One checked inequality: measured <= predicted unless noted otherwise.
struct BoundCheck {
    std::string name;
    Int predicted{0};
    Int measured{0};
    bool satisfied = false;
    std::string note;
};

struct EquivalenceCheck {
    std::string method;  // "oracle", "field", "oracle-sum", "field-sum"
    bool equal = false;
    int trials = 0;
    std::uint64_t prime = 0;
    std::uint64_t seed = 0;
};

struct PassReport {
    std::string pass;
    CircuitStats input;
    CircuitStats output;
    std::vector<BoundCheck> bounds;
    std::optional<EquivalenceCheck> equivalence;
    std::map<std::string, std::string> params;
    PassOptions options;

    bool all_satisfied() const {
        for (const auto& b : bounds)
            if (!b.satisfied) return false;
        if (equivalence && !equivalence->equal) return false;
        return true;
    }
};

template <CommutativeRing R>
struct PassResult {
    Circuit<R> circuit;
    PassReport report;
};

namespace detail {

// Output-by-output comparison: exact expansion when it fits the term
// budget, otherwise random evaluation over the prime field.
template <CommutativeRing R>
EquivalenceCheck check_equivalence_outputs(const Circuit<R>& a, const Circuit<R>& b,
                                           const PassOptions& opts) {
    if (a.outputs().size() != b.outputs().size())
        throw ContractError("equivalence: output counts differ");
    EquivalenceCheck ec;
    try {
        auto pa = expand_all(a, opts.term_budget);
        auto pb = expand_all(b, opts.term_budget);
        ec.method = "oracle";
        ec.equal = true;
        for (std::size_t i = 0; i < a.outputs().size(); ++i)
            if (!(pa[a.outputs()[i]] == pb[b.outputs()[i]])) ec.equal = false;
        return ec;
    } catch (const BudgetError&) {
        // fall through to randomized testing
    }
    PrimeField F(opts.prime);
    std::int64_t dmax = std::max(a.degree().value_or(0), b.degree().value_or(0));
    if (dmax >= 0 && static_cast<std::uint64_t>(dmax) >= F.p)
        throw ConfigError("equivalence: modulus does not exceed circuit degree");
    std::set<VarIndex> vars;
    for (VarIndex v : a.variables()) vars.insert(v);
    for (VarIndex v : b.variables()) vars.insert(v);
    ec.method = "field";
    ec.equal = true;
    ec.trials = opts.trials;
    ec.prime = F.p;
    ec.seed = opts.seed;
    std::mt19937_64 rng(opts.seed);
    for (int t = 0; t < opts.trials && ec.equal; ++t) {
        std::map<VarIndex, std::uint64_t> point;
        for (VarIndex v : vars) point[v] = uniform_u64(rng, F.p);
        auto va = evaluate_all(a, point, F);
        auto vb = evaluate_all(b, point, F);
        for (std::size_t i = 0; i < a.outputs().size(); ++i)
            if (va[a.outputs()[i]] != vb[b.outputs()[i]]) ec.equal = false;
    }
    return ec;
}

// Compares a single-output circuit against the sum of the outputs of a
// multi-output circuit.
template <CommutativeRing R>
EquivalenceCheck check_equivalence_sum(const Circuit<R>& single, const Circuit<R>& multi,
                                       const PassOptions& opts) {
    if (single.outputs().size() != 1)
        throw ContractError("equivalence: reference circuit must have a single output");
    EquivalenceCheck ec;
    try {
        auto ps = expand(single, opts.term_budget);
        auto pm = expand_all(multi, opts.term_budget);
        SparsePolynomial<R> sum;
        for (GateId o : multi.outputs()) sum = sum + pm[o];
        ec.method = "oracle-sum";
        ec.equal = (ps == sum);
        return ec;
    } catch (const BudgetError&) {
        // fall through to randomized testing
    }
    PrimeField F(opts.prime);
    std::int64_t dmax = std::max(single.degree().value_or(0), multi.degree().value_or(0));
    if (dmax >= 0 && static_cast<std::uint64_t>(dmax) >= F.p)
        throw ConfigError("equivalence: modulus does not exceed circuit degree");
    std::set<VarIndex> vars;
    for (VarIndex v : single.variables()) vars.insert(v);
    for (VarIndex v : multi.variables()) vars.insert(v);
    ec.method = "field-sum";
    ec.equal = true;
    ec.trials = opts.trials;
    ec.prime = F.p;
    ec.seed = opts.seed;
    std::mt19937_64 rng(opts.seed);
    for (int t = 0; t < opts.trials && ec.equal; ++t) {
        std::map<VarIndex, std::uint64_t> point;
        for (VarIndex v : vars) point[v] = uniform_u64(rng, F.p);
        std::uint64_t vs = evaluate(single, single.outputs()[0], point, F);
        auto vm = evaluate_all(multi, point, F);
        std::uint64_t sum = 0;
        for (GateId o : multi.outputs()) sum = F.add(sum, vm[o]);
        if (vs != sum) ec.equal = false;
    }
    return ec;
}

inline BoundCheck make_bound(std::string name, Int predicted, Int measured,
                             std::string note = "") {
    BoundCheck b;
    b.name = std::move(name);
    b.predicted = std::move(predicted);
    b.measured = std::move(measured);
    b.satisfied = (b.measured <= b.predicted);
    b.note = std::move(note);
    return b;
}

// A pure yes/no structural fact reported through the same channel.
inline BoundCheck make_flag(std::string name, bool satisfied, std::string note = "") {
    BoundCheck b;
    b.name = std::move(name);
    b.predicted = 1;
    b.measured = satisfied ? 1 : 0;
    b.satisfied = satisfied;
    b.note = std::move(note);
    return b;
}

} // namespace detail

} // namespace circuitflow
