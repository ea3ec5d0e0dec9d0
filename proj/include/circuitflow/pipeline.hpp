#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "circuitflow/balance.hpp"
#include "circuitflow/binarize.hpp"
#include "circuitflow/bounds.hpp"
#include "circuitflow/circuit.hpp"
#include "circuitflow/depth4.hpp"
#include "circuitflow/errors.hpp"
#include "circuitflow/homogenize.hpp"
#include "circuitflow/normalize.hpp"
#include "circuitflow/pass_report.hpp"

namespace circuitflow {

// Degree cut parameter sqrt(d * log2(n) / log2(sigma)), rounded and clamped
// to the admissible range [1, d-1] (degenerate degrees pin it to 1).
inline std::uint64_t pick_split_parameter(std::size_t sigma, std::int64_t d,
                                          std::size_t n) {
    if (d <= 1 || n < 2 || sigma < 2) return 1;
    double raw = std::sqrt(static_cast<double>(d) *
                           std::log2(static_cast<double>(n)) /
                           std::log2(static_cast<double>(sigma)));
    std::int64_t a = static_cast<std::int64_t>(std::llround(raw));
    a = std::max<std::int64_t>(a, 1);
    a = std::min<std::int64_t>(a, d - 1);
    return static_cast<std::uint64_t>(a);
}

// Copy keeping a single output of a multi-output circuit, pruned to its cone.
template <CommutativeRing R>
Circuit<R> restrict_to_output(const Circuit<R>& c, std::size_t index) {
    if (index >= c.outputs().size())
        throw ConfigError("restrict: output index out of range");
    return prune_unreachable(detail::with_outputs(c, {c.outputs()[index]}));
}

// Drops outputs whose polynomial is structurally zero; the remaining output
// must be unique for the single-output passes.
template <CommutativeRing R>
Circuit<R> narrow_to_single_output(const Circuit<R>& c) {
    std::vector<GateId> alive;
    for (GateId o : c.outputs())
        if (c.degree(o).is_finite()) alive.push_back(o);
    if (alive.size() != 1)
        throw ContractError("narrow: expected exactly one nonzero output, found " +
                            std::to_string(alive.size()));
    return prune_unreachable(detail::with_outputs(c, alive));
}

template <CommutativeRing R>
struct PipelineResult {
    Circuit<R> circuit;
    std::vector<PassReport> reports;
    bool all_satisfied() const {
        for (const PassReport& r : reports)
            if (!r.all_satisfied()) return false;
        return true;
    }
};

// Full reduction: binarize, homogenize, then per homogeneous part
// normalize, product-balance and flatten to four levels, finally merge the
// parts under one output sum. Reports accumulate in stage order and close
// with a summary entry comparing the merged size against the end-to-end
// ceiling.
template <CommutativeRing R>
PipelineResult<R> reduce_to_depth4(const Circuit<R>& c0, const PassOptions& opts = {}) {
    Circuit<R> input = prune_unreachable(c0);
    if (input.outputs().size() != 1)
        throw ContractError("reduce: circuit must have a single output");

    PipelineResult<R> out;
    const std::int64_t d_in = input.degree().value_or(0);
    const std::size_t n_in = input.num_vars();

    PassResult<R> bin = binarize(input, opts);
    // The end-to-end ceiling is stated for binary products, so its s is the
    // size after binarization.
    const std::size_t s_in = bin.circuit.size();
    out.reports.push_back(bin.report);
    PassResult<R> hom = homogenize(bin.circuit, opts);
    out.reports.push_back(hom.report);

    std::vector<Circuit<R>> parts;
    for (std::size_t i = 0; i < hom.circuit.outputs().size(); ++i) {
        Circuit<R> part = restrict_to_output(hom.circuit, i);
        if (part.degree().is_neg_infinity()) continue;  // structurally zero part

        PassResult<R> nrm = normalize(part, opts);
        nrm.report.params["part"] = std::to_string(i);
        out.reports.push_back(nrm.report);
        if (nrm.circuit.degree().is_neg_infinity()) continue;  // folded to zero

        PassResult<R> bal = balance(nrm.circuit, opts);
        bal.report.params["part"] = std::to_string(i);
        out.reports.push_back(bal.report);

        std::uint64_t a = pick_split_parameter(bal.circuit.size(),
                                               static_cast<std::int64_t>(i), n_in);
        PassResult<R> flat = depth4(bal.circuit, a, opts);
        flat.report.params["part"] = std::to_string(i);
        out.reports.push_back(flat.report);
        parts.push_back(std::move(flat.circuit));
    }

    if (parts.empty()) {
        out.circuit = detail::constant_tower(R{0});
    } else {
        CircuitBuilder<R> b;
        std::map<VarIndex, GateId> input_pool;
        std::map<std::string, GateId> const_pool;
        std::vector<GateId> summands;
        for (const Circuit<R>& part : parts) {
            std::vector<GateId> remap(part.size(), 0);
            const GateId pout = part.outputs()[0];
            for (GateId g = 0; g < part.size(); ++g) {
                if (g == pout) continue;
                const Gate<R>& gate = part.gate(g);
                switch (gate.kind) {
                    case GateKind::Input: {
                        auto it = input_pool.find(gate.var);
                        remap[g] = it != input_pool.end() ? it->second
                                                          : (input_pool[gate.var] =
                                                                 b.add_input(gate.var));
                        break;
                    }
                    case GateKind::Const: {
                        std::string key = ring_traits<R>::to_string(gate.value);
                        auto it = const_pool.find(key);
                        remap[g] = it != const_pool.end()
                                       ? it->second
                                       : (const_pool[key] = b.add_const(gate.value));
                        break;
                    }
                    case GateKind::Add:
                    case GateKind::Mul: {
                        std::vector<GateId> kids;
                        kids.reserve(gate.children.size());
                        for (GateId ch : gate.children) kids.push_back(remap[ch]);
                        remap[g] = gate.kind == GateKind::Add ? b.add_add(std::move(kids))
                                                              : b.add_mul(std::move(kids));
                        break;
                    }
                    case GateKind::Scal:
                        remap[g] = b.add_scal(remap[gate.children[0]],
                                              remap[gate.children[1]]);
                        break;
                }
            }
            for (GateId ch : part.gate(pout).children) summands.push_back(remap[ch]);
        }
        b.mark_output(b.add_add(std::move(summands)));
        out.circuit = std::move(b).build();
    }

    PassReport summary;
    summary.pass = "reduce";
    summary.options = opts;
    summary.input = input.stats();
    summary.output = out.circuit.stats();
    summary.params["parts"] = std::to_string(parts.size());
    summary.bounds.push_back(detail::make_bound(
        "size",
        theorem1_size_ceiling(s_in, static_cast<std::uint64_t>(d_in), std::max<std::size_t>(n_in, 1)),
        Int(out.circuit.size()), "end-to-end ceiling over all admissible cuts"));
    summary.bounds.push_back(detail::make_flag("depth-4", out.circuit.depth() == 4));
    summary.equivalence = detail::check_equivalence_outputs(input, out.circuit, opts);
    out.reports.push_back(std::move(summary));
    return out;
}

// Single named stage, as exposed on the command line. Multi-output inputs
// are narrowed to their one nonzero output for the single-output stages;
// a = 0 lets the degree cut pick its own parameter.
template <CommutativeRing R>
PassResult<R> run_pass(const std::string& name, const Circuit<R>& c,
                       const PassOptions& opts = {}, std::uint64_t a = 0) {
    if (name == "binarize") return binarize(c, opts);
    if (name == "homogenize") return homogenize(c, opts);
    if (name == "normalize")
        return normalize(c.outputs().size() > 1 ? narrow_to_single_output(c) : c, opts);
    if (name == "balance")
        return balance(c.outputs().size() > 1 ? narrow_to_single_output(c) : c, opts);
    if (name == "depth4") {
        Circuit<R> in = c.outputs().size() > 1 ? narrow_to_single_output(c) : c;
        if (a == 0)
            a = pick_split_parameter(in.size(), in.degree().value_or(0), in.num_vars());
        return depth4(in, a, opts);
    }
    throw ConfigError("unknown pass: " + name);
}

} // namespace circuitflow
