#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "circuitflow/circuit.hpp"
#include "circuitflow/pass_report.hpp"

namespace circuitflow {

namespace detail {

// Marks gates computing the zero polynomial: exactly via expansion when the
// circuit is small enough, otherwise by repeated random evaluation.
template <CommutativeRing R>
std::vector<char> zero_gates(const Circuit<R>& c, const PassOptions& opts,
                             std::string* method) {
    std::vector<char> zero(c.size(), 1);
    std::size_t budget = std::min<std::size_t>(opts.term_budget, 50'000);
    try {
        auto polys = expand_all(c, budget);
        for (GateId i = 0; i < c.size(); ++i) zero[i] = polys[i].is_zero() ? 1 : 0;
        if (method) *method = "oracle";
        return zero;
    } catch (const BudgetError&) {
        // fall through to randomized detection
    }
    PrimeField F(opts.prime);
    std::int64_t dmax = 0;
    for (GateId i = 0; i < c.size(); ++i) dmax = std::max(dmax, c.degree(i).value_or(0));
    if (static_cast<std::uint64_t>(dmax) >= F.p)
        throw ConfigError("zero detection: modulus does not exceed gate degree");
    std::mt19937_64 rng(opts.seed);
    for (int t = 0; t < opts.trials; ++t) {
        std::map<VarIndex, std::uint64_t> point;
        for (VarIndex v : c.variables()) point[v] = uniform_u64(rng, F.p);
        auto vals = evaluate_all(c, point, F);
        for (GateId i = 0; i < c.size(); ++i)
            if (vals[i] != 0) zero[i] = 0;
    }
    if (method) *method = "field";
    return zero;
}

} // namespace detail

// Canonical form for homogeneous circuits:
//  - gates computing the zero polynomial are eliminated (a zero output
//    becomes a constant-zero gate),
//  - gates with all-constant children are folded to constants, so every
//    gate of degree 0 in the result is a Const,
//  - a binary Mul with a constant side becomes a scalar gate,
//  - children of every Mul/Scal are ordered so the rightmost child has
//    maximal degree.
// Size never increases. A Mul of fan-in above 2 with a degree-0 child has
// no same-size rewrite, so that shape is rejected (run binarize first).
template <CommutativeRing R>
PassResult<R> normalize(const Circuit<R>& c0, const PassOptions& opts = {}) {
    if (!c0.is_homogeneous())
        throw ContractError("normalize: circuit must be homogeneous");

    PassReport rep;
    rep.pass = "normalize";
    rep.input = c0.stats();
    rep.options = opts;

    Circuit<R> c = prune_unreachable(c0);
    std::string zero_method;
    std::vector<char> zero = detail::zero_gates(c, opts, &zero_method);
    rep.params["zero_detection"] = zero_method;

    CircuitBuilder<R> b;
    std::vector<GateDegree> ndeg;
    std::map<VarIndex, GateId> input_pool;
    std::map<std::string, GateId> const_pool;

    auto nd_input = [&](VarIndex v) {
        auto it = input_pool.find(v);
        if (it != input_pool.end()) return it->second;
        GateId id = b.add_input(v);
        ndeg.push_back(GateDegree(1));
        input_pool.emplace(v, id);
        return id;
    };
    auto nd_const = [&](const R& v) {
        std::string key = ring_traits<R>::to_string(v);
        auto it = const_pool.find(key);
        if (it != const_pool.end()) return it->second;
        GateId id = b.add_const(v);
        ndeg.push_back(v == R{0} ? GateDegree::neg_infinity() : GateDegree(0));
        const_pool.emplace(key, id);
        return id;
    };
    auto is_const = [&](GateId id) { return b.gate(id).kind == GateKind::Const; };
    auto order_max_last = [&](std::vector<GateId>& ch) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < ch.size(); ++k)
            if (ndeg[ch[k]] >= ndeg[ch[best]]) best = k;
        std::rotate(ch.begin() + best, ch.begin() + best + 1, ch.end());
    };

    // nullopt: the gate is semantically zero and was eliminated.
    std::vector<std::optional<GateId>> remap(c.size());
    for (GateId i = 0; i < c.size(); ++i) {
        if (zero[i]) continue;
        const Gate<R>& g = c.gate(i);
        switch (g.kind) {
            case GateKind::Input:
                remap[i] = nd_input(g.var);
                break;
            case GateKind::Const:
                remap[i] = nd_const(g.value);
                break;
            case GateKind::Add: {
                std::vector<GateId> ch;
                for (GateId x : g.children)
                    if (remap[x]) ch.push_back(*remap[x]);
                if (ch.empty()) break;  // all children zero, gate stays eliminated
                bool all_const = std::all_of(ch.begin(), ch.end(), is_const);
                if (all_const) {
                    R v{0};
                    for (GateId x : ch) v = v + b.gate(x).value;
                    remap[i] = nd_const(v);
                } else if (ch.size() == 1) {
                    remap[i] = ch[0];
                } else {
                    GateDegree d = GateDegree::neg_infinity();
                    for (GateId x : ch) d = max(d, ndeg[x]);
                    remap[i] = b.add_add(ch);
                    ndeg.push_back(d);
                }
                break;
            }
            case GateKind::Mul: {
                std::vector<GateId> ch;
                for (GateId x : g.children) {
                    if (!remap[x]) { ch.clear(); break; }
                    ch.push_back(*remap[x]);
                }
                if (ch.empty()) break;
                if (ch.size() == 1) {
                    remap[i] = ch[0];
                    break;
                }
                bool all_const = std::all_of(ch.begin(), ch.end(), is_const);
                if (all_const) {
                    R v{1};
                    for (GateId x : ch) v = v * b.gate(x).value;
                    remap[i] = nd_const(v);
                    break;
                }
                std::size_t n_const = std::count_if(ch.begin(), ch.end(), is_const);
                if (ch.size() == 2 && n_const == 1) {
                    GateId cst = is_const(ch[0]) ? ch[0] : ch[1];
                    GateId other = is_const(ch[0]) ? ch[1] : ch[0];
                    remap[i] = b.add_scal(cst, other);
                    ndeg.push_back(ndeg[cst] + ndeg[other]);
                    break;
                }
                if (n_const > 0)
                    throw ContractError(
                        "normalize: multiplication of fan-in above 2 with a degree-0 "
                        "child has no same-size rewrite, binarize first");
                order_max_last(ch);
                GateDegree d(0);
                for (GateId x : ch) d = d + ndeg[x];
                remap[i] = b.add_mul(ch);
                ndeg.push_back(d);
                break;
            }
            case GateKind::Scal: {
                if (!remap[g.children[0]] || !remap[g.children[1]]) break;
                GateId a = *remap[g.children[0]], x = *remap[g.children[1]];
                if (is_const(a) && is_const(x)) {
                    remap[i] = nd_const(b.gate(a).value * b.gate(x).value);
                    break;
                }
                GateId cst = is_const(a) ? a : x;
                GateId other = is_const(a) ? x : a;
                if (!is_const(cst))
                    throw ContractError("normalize: scalar gate without a constant side");
                remap[i] = b.add_scal(cst, other);
                ndeg.push_back(ndeg[cst] + ndeg[other]);
                break;
            }
        }
    }

    for (GateId o : c.outputs()) b.mark_output(remap[o] ? *remap[o] : nd_const(R{0}));
    Circuit<R> result = prune_unreachable(std::move(b).build());

    rep.output = result.stats();
    rep.bounds.push_back(
        detail::make_bound("size", Int(c0.size()), Int(result.size()), "never grows"));
    rep.bounds.push_back(detail::make_flag("homogeneous", result.is_homogeneous()));
    bool deg0_const = true, ordered = true, positive_children = true;
    for (GateId i = 0; i < result.size(); ++i) {
        const Gate<R>& g = result.gate(i);
        if (result.degree(i) <= GateDegree(0) && g.kind != GateKind::Const)
            deg0_const = false;
        if (g.kind == GateKind::Mul || g.kind == GateKind::Scal) {
            for (GateId x : g.children)
                if (result.degree(x) > result.degree(g.children.back())) ordered = false;
        }
        if (g.kind == GateKind::Mul) {
            for (GateId x : g.children)
                if (result.degree(x) <= GateDegree(0)) positive_children = false;
        }
    }
    rep.bounds.push_back(detail::make_flag("degree-zero-gates-const", deg0_const));
    rep.bounds.push_back(detail::make_flag("mul-rightmost-max-degree", ordered));
    rep.bounds.push_back(detail::make_flag("mul-children-positive-degree", positive_children));
    rep.bounds.push_back(detail::make_flag(
        "degree-not-increased", result.degree() <= c0.degree() ||
                                    c0.degree().is_neg_infinity()));
    rep.equivalence = detail::check_equivalence_outputs(c0, result, opts);
    return {std::move(result), std::move(rep)};
}

} // namespace circuitflow
