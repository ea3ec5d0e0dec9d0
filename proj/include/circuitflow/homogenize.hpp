#pragma once

#include <map>
#include <optional>
#include <vector>

#include "circuitflow/circuit.hpp"
#include "circuitflow/pass_report.hpp"

namespace circuitflow {

// Splits a single-output circuit of degree d into d+1 outputs, where output
// k computes the degree-k homogeneous part of the original polynomial.
// Structural zeros are tracked so parts that vanish syntactically cost no
// gates; a vanished part is emitted as a shared constant-zero gate.
// Requires multiplication fan-in at most 2 (run binarize first).
template <CommutativeRing R>
PassResult<R> homogenize(const Circuit<R>& c0, const PassOptions& opts = {}) {
    if (c0.outputs().size() != 1)
        throw ContractError("homogenize: circuit must have a single output");
    for (const auto& g : c0.gates())
        if (g.kind == GateKind::Mul && g.children.size() > 2)
            throw ContractError("homogenize: multiplication fan-in exceeds 2, binarize first");

    PassReport rep;
    rep.pass = "homogenize";
    rep.input = c0.stats();
    rep.options = opts;
    const std::size_t s_in = c0.size();

    Circuit<R> c = prune_unreachable(c0);
    const std::int64_t d = c.degree().value_or(0);
    rep.params["degree"] = std::to_string(d);

    CircuitBuilder<R> b;
    std::map<VarIndex, GateId> input_pool;
    std::map<std::string, GateId> const_pool;
    auto pool_input = [&](VarIndex v) {
        auto it = input_pool.find(v);
        if (it != input_pool.end()) return it->second;
        GateId id = b.add_input(v);
        input_pool.emplace(v, id);
        return id;
    };
    auto pool_const = [&](const R& v) {
        std::string key = ring_traits<R>::to_string(v);
        auto it = const_pool.find(key);
        if (it != const_pool.end()) return it->second;
        GateId id = b.add_const(v);
        const_pool.emplace(key, id);
        return id;
    };

    // parts[g][k]: gate computing the degree-k part of gate g, or nullopt
    // when that part is structurally zero.
    std::vector<std::vector<std::optional<GateId>>> parts(
        c.size(), std::vector<std::optional<GateId>>(static_cast<std::size_t>(d) + 1));

    for (GateId i = 0; i < c.size(); ++i) {
        const Gate<R>& g = c.gate(i);
        switch (g.kind) {
            case GateKind::Input:
                if (d >= 1) parts[i][1] = pool_input(g.var);
                break;
            case GateKind::Const:
                if (!(g.value == R{0})) parts[i][0] = pool_const(g.value);
                break;
            case GateKind::Add:
                for (std::int64_t k = 0; k <= d; ++k) {
                    std::vector<GateId> ch;
                    for (GateId x : g.children)
                        if (parts[x][k]) ch.push_back(*parts[x][k]);
                    if (ch.empty()) continue;
                    parts[i][k] = (ch.size() == 1) ? ch[0] : b.add_add(ch);
                }
                break;
            case GateKind::Mul:
            case GateKind::Scal: {
                if (g.children.size() == 1) {
                    parts[i] = parts[g.children[0]];
                    break;
                }
                GateId a = g.children[0], x = g.children[1];
                for (std::int64_t k = 0; k <= d; ++k) {
                    std::vector<GateId> terms;
                    for (std::int64_t j = 0; j <= k; ++j) {
                        if (!parts[a][j] || !parts[x][k - j]) continue;
                        terms.push_back(b.add_mul({*parts[a][j], *parts[x][k - j]}));
                    }
                    if (terms.empty()) continue;
                    parts[i][k] = (terms.size() == 1) ? terms[0] : b.add_add(terms);
                }
                break;
            }
        }
    }

    const GateId out = c.outputs()[0];
    std::optional<GateId> zero_gate;
    for (std::int64_t k = 0; k <= d; ++k) {
        if (parts[out][k]) {
            b.mark_output(*parts[out][k]);
        } else {
            if (!zero_gate) zero_gate = b.add_const(R{0});
            b.mark_output(*zero_gate);
        }
    }
    Circuit<R> result = prune_unreachable(std::move(b).build());

    rep.output = result.stats();
    rep.bounds.push_back(detail::make_bound(
        "size", Int(s_in) * Int(d + 1) * Int(d + 1), Int(result.size()),
        "s*(d+1)^2"));
    rep.bounds.push_back(detail::make_flag("homogeneous", result.is_homogeneous()));
    bool parts_ok = result.outputs().size() == static_cast<std::size_t>(d) + 1;
    for (std::int64_t k = 0; k <= d && parts_ok; ++k) {
        GateDegree dk = result.degree(result.outputs()[static_cast<std::size_t>(k)]);
        if (dk.is_finite() && dk.value() != k) parts_ok = false;
    }
    rep.bounds.push_back(detail::make_flag("part-degrees", parts_ok,
                                           "output k has degree k or is zero"));
    rep.equivalence = detail::check_equivalence_sum(c0, result, opts);
    return {std::move(result), std::move(rep)};
}

} // namespace circuitflow
