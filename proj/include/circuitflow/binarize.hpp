#pragma once

#include "circuitflow/circuit.hpp"
#include "circuitflow/pass_report.hpp"

namespace circuitflow {

// Rewrites every Mul of fan-in k > 2 into a left-associated chain of binary
// Muls. Add gates keep their fan-in; Scal gates are already binary.
template <CommutativeRing R>
PassResult<R> binarize(const Circuit<R>& c, const PassOptions& opts = {}) {
    PassReport rep;
    rep.pass = "binarize";
    rep.input = c.stats();
    rep.options = opts;

    CircuitBuilder<R> b;
    std::vector<GateId> remap(c.size(), 0);
    std::size_t extra = 0;
    for (GateId i = 0; i < c.size(); ++i) {
        const Gate<R>& g = c.gate(i);
        std::vector<GateId> ch;
        ch.reserve(g.children.size());
        for (GateId x : g.children) ch.push_back(remap[x]);
        switch (g.kind) {
            case GateKind::Input: remap[i] = b.add_input(g.var); break;
            case GateKind::Const: remap[i] = b.add_const(g.value); break;
            case GateKind::Add: remap[i] = b.add_add(ch); break;
            case GateKind::Scal: remap[i] = b.add_scal(ch[0], ch[1]); break;
            case GateKind::Mul: {
                if (ch.size() <= 2) {
                    remap[i] = b.add_mul(ch);
                } else {
                    GateId acc = b.add_mul({ch[0], ch[1]});
                    for (std::size_t k = 2; k < ch.size(); ++k)
                        acc = b.add_mul({acc, ch[k]});
                    extra += ch.size() - 2;
                    remap[i] = acc;
                }
                break;
            }
        }
    }
    for (GateId o : c.outputs()) b.mark_output(remap[o]);
    Circuit<R> out = std::move(b).build();

    rep.output = out.stats();
    rep.bounds.push_back(detail::make_bound("size", Int(c.size()) + Int(extra),
                                            Int(out.size()),
                                            "input size plus one gate per extra link"));
    rep.bounds.push_back(detail::make_flag("mul-fanin-at-most-2",
                                           out.stats().max_fanin_mul <= 2));
    rep.equivalence = detail::check_equivalence_outputs(c, out, opts);
    return {std::move(out), std::move(rep)};
}

} // namespace circuitflow
