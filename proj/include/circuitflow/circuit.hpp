#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "circuitflow/degree.hpp"
#include "circuitflow/errors.hpp"
#include "circuitflow/ring.hpp"

namespace circuitflow {

using GateId = std::uint32_t;
using VarIndex = std::uint32_t;

enum class GateKind { Input, Const, Add, Mul, Scal };

inline const char* gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::Input: return "input";
        case GateKind::Const: return "const";
        case GateKind::Add: return "add";
        case GateKind::Mul: return "mul";
        case GateKind::Scal: return "smul";
    }
    return "?";
}

template <CommutativeRing R>
struct Gate {
    GateKind kind = GateKind::Const;
    VarIndex var = 0;              // Input only
    R value{0};                    // Const only
    std::vector<GateId> children;  // Add/Mul/Scal; ids of earlier gates

    friend bool operator==(const Gate& a, const Gate& b) {
        return a.kind == b.kind && a.var == b.var && a.value == b.value &&
               a.children == b.children;
    }
};

struct Violation {
    std::string code;  // e.g. "acyclicity", "arity", "scal-child-degree"
    GateId gate = 0;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const {
        std::string s;
        for (const auto& v : violations) {
            if (!s.empty()) s += "; ";
            s += v.code + " at gate " + std::to_string(v.gate);
            if (!v.detail.empty()) s += " (" + v.detail + ")";
        }
        return s;
    }
};

// Shape summary used by reports and by the CLI stats command.
struct CircuitStats {
    std::size_t size = 0;
    GateDegree degree;
    std::size_t num_vars = 0;
    std::size_t depth = 0;
    std::size_t count_input = 0, count_const = 0, count_add = 0, count_mul = 0,
                count_scal = 0;
    std::size_t max_fanin_add = 0, max_fanin_mul = 0, max_fanin_scal = 0;
    bool homogeneous = false;
};

namespace detail {

// Degrees in declaration order. Assumes children precede their gate.
template <CommutativeRing R>
std::vector<GateDegree> gate_degrees(const std::vector<Gate<R>>& gates) {
    std::vector<GateDegree> deg(gates.size());
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate<R>& g = gates[i];
        switch (g.kind) {
            case GateKind::Input:
                deg[i] = GateDegree(1);
                break;
            case GateKind::Const:
                deg[i] = (g.value == R{0}) ? GateDegree::neg_infinity() : GateDegree(0);
                break;
            case GateKind::Add: {
                GateDegree d = GateDegree::neg_infinity();
                for (GateId c : g.children) d = max(d, deg[c]);
                deg[i] = d;
                break;
            }
            case GateKind::Mul:
            case GateKind::Scal: {
                GateDegree d(0);
                for (GateId c : g.children) d = d + deg[c];
                deg[i] = d;
                break;
            }
        }
    }
    return deg;
}

// Structural checks on a raw gate list. Exposed so tests can probe invalid
// shapes that the builder refuses to produce.
template <CommutativeRing R>
ValidationReport validate_parts(const std::vector<Gate<R>>& gates,
                                const std::vector<GateId>& outputs) {
    ValidationReport rep;
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate<R>& g = gates[i];
        bool refs_ok = true;
        for (GateId c : g.children) {
            if (c >= i) {
                // A forward or self reference is exactly a cycle in the
                // id-ordered representation.
                rep.violations.push_back(
                    {"acyclicity", static_cast<GateId>(i),
                     "child " + std::to_string(c) + " not declared earlier"});
                refs_ok = false;
            }
        }
        switch (g.kind) {
            case GateKind::Input:
            case GateKind::Const:
                if (!g.children.empty())
                    rep.violations.push_back({"arity", static_cast<GateId>(i), "leaf with children"});
                break;
            case GateKind::Add:
            case GateKind::Mul:
                if (g.children.empty())
                    rep.violations.push_back({"arity", static_cast<GateId>(i), "no children"});
                break;
            case GateKind::Scal:
                if (g.children.size() != 2)
                    rep.violations.push_back({"arity", static_cast<GateId>(i), "smul needs exactly 2 children"});
                break;
        }
        (void)refs_ok;
    }
    // Scalar gates need a degree-0 side; degrees only make sense once the
    // reference structure is sound.
    if (rep.ok()) {
        std::vector<GateDegree> deg = gate_degrees(gates);
        for (std::size_t i = 0; i < gates.size(); ++i) {
            const Gate<R>& g = gates[i];
            if (g.kind != GateKind::Scal) continue;
            bool has_deg0 = false;
            for (GateId c : g.children)
                if (deg[c] == GateDegree(0)) has_deg0 = true;
            if (!has_deg0)
                rep.violations.push_back(
                    {"scal-child-degree", static_cast<GateId>(i), "no child of degree 0"});
        }
    }
    if (outputs.empty()) {
        rep.violations.push_back({"outputs", 0, "no output gate"});
    }
    for (GateId o : outputs) {
        if (o >= gates.size())
            rep.violations.push_back({"outputs", o, "output id out of range"});
    }
    return rep;
}

} // namespace detail

template <CommutativeRing R>
class CircuitBuilder;

// Immutable arithmetic circuit: a DAG of gates in topological order with
// dense ids (children strictly precede their gate) and explicit outputs.
template <CommutativeRing R>
class Circuit {
public:
    using Ring = R;

    // Empty placeholder; usable circuits come from CircuitBuilder::build().
    Circuit() = default;

    std::size_t size() const { return gates_.size(); }
    const Gate<R>& gate(GateId id) const { return gates_.at(id); }
    const std::vector<Gate<R>>& gates() const { return gates_; }
    const std::vector<GateId>& outputs() const { return outputs_; }

    GateDegree degree(GateId id) const { return degrees_.at(id); }

    // Degree of the circuit: max over outputs.
    GateDegree degree() const {
        GateDegree d = GateDegree::neg_infinity();
        for (GateId o : outputs_) d = max(d, degrees_[o]);
        return d;
    }

    // Distinct variable indices, sorted.
    std::vector<VarIndex> variables() const {
        std::set<VarIndex> vs;
        for (const auto& g : gates_)
            if (g.kind == GateKind::Input) vs.insert(g.var);
        return {vs.begin(), vs.end()};
    }
    std::size_t num_vars() const { return variables().size(); }

    // Max number of edges on a path from a leaf to an output.
    std::size_t depth() const {
        std::vector<std::size_t> h(gates_.size(), 0);
        for (std::size_t i = 0; i < gates_.size(); ++i)
            for (GateId c : gates_[i].children) h[i] = std::max(h[i], h[c] + 1);
        std::size_t d = 0;
        for (GateId o : outputs_) d = std::max(d, h[o]);
        return d;
    }

    // Every Add gate's children agree on one degree; zero children
    // (degree -inf) are ignored.
    bool is_homogeneous() const {
        for (const auto& g : gates_) {
            if (g.kind != GateKind::Add) continue;
            GateDegree seen = GateDegree::neg_infinity();
            for (GateId c : g.children) {
                GateDegree d = degrees_[c];
                if (d.is_neg_infinity()) continue;
                if (seen.is_neg_infinity())
                    seen = d;
                else if (seen != d)
                    return false;
            }
        }
        return true;
    }

    ValidationReport validate() const { return detail::validate_parts(gates_, outputs_); }

    CircuitStats stats() const {
        CircuitStats st;
        st.size = gates_.size();
        st.degree = degree();
        st.num_vars = num_vars();
        st.depth = depth();
        st.homogeneous = is_homogeneous();
        for (const auto& g : gates_) {
            switch (g.kind) {
                case GateKind::Input: ++st.count_input; break;
                case GateKind::Const: ++st.count_const; break;
                case GateKind::Add:
                    ++st.count_add;
                    st.max_fanin_add = std::max(st.max_fanin_add, g.children.size());
                    break;
                case GateKind::Mul:
                    ++st.count_mul;
                    st.max_fanin_mul = std::max(st.max_fanin_mul, g.children.size());
                    break;
                case GateKind::Scal:
                    ++st.count_scal;
                    st.max_fanin_scal = std::max(st.max_fanin_scal, g.children.size());
                    break;
            }
        }
        return st;
    }

    friend bool operator==(const Circuit& a, const Circuit& b) {
        return a.gates_ == b.gates_ && a.outputs_ == b.outputs_;
    }

private:
    friend class CircuitBuilder<R>;
    Circuit(std::vector<Gate<R>> gates, std::vector<GateId> outputs)
        : gates_(std::move(gates)),
          outputs_(std::move(outputs)),
          degrees_(detail::gate_degrees(gates_)) {}

    std::vector<Gate<R>> gates_;
    std::vector<GateId> outputs_;
    std::vector<GateDegree> degrees_;
};

// Appends gates in topological order; build() validates and freezes.
template <CommutativeRing R>
class CircuitBuilder {
public:
    GateId add_input(VarIndex var) {
        Gate<R> g;
        g.kind = GateKind::Input;
        g.var = var;
        return push(std::move(g));
    }

    GateId add_const(R value) {
        Gate<R> g;
        g.kind = GateKind::Const;
        g.value = std::move(value);
        return push(std::move(g));
    }

    GateId add_add(std::vector<GateId> children) {
        Gate<R> g;
        g.kind = GateKind::Add;
        g.children = std::move(children);
        return push(std::move(g));
    }

    GateId add_mul(std::vector<GateId> children) {
        Gate<R> g;
        g.kind = GateKind::Mul;
        g.children = std::move(children);
        return push(std::move(g));
    }

    GateId add_scal(GateId a, GateId b) {
        Gate<R> g;
        g.kind = GateKind::Scal;
        g.children = {a, b};
        return push(std::move(g));
    }

    void mark_output(GateId id) { outputs_.push_back(id); }

    std::size_t size() const { return gates_.size(); }
    const Gate<R>& gate(GateId id) const { return gates_.at(id); }

    Circuit<R> build() && {
        ValidationReport rep = detail::validate_parts(gates_, outputs_);
        if (!rep.ok()) throw StructuralError("invalid circuit: " + rep.summary());
        return Circuit<R>(std::move(gates_), std::move(outputs_));
    }

private:
    GateId push(Gate<R> g) {
        for (GateId c : g.children)
            if (c >= gates_.size())
                throw StructuralError("builder: child " + std::to_string(c) +
                                      " does not exist yet");
        gates_.push_back(std::move(g));
        return static_cast<GateId>(gates_.size() - 1);
    }

    std::vector<Gate<R>> gates_;
    std::vector<GateId> outputs_;
};

// Copy of c restricted to gates reachable from its outputs, ids renumbered.
template <CommutativeRing R>
Circuit<R> prune_unreachable(const Circuit<R>& c) {
    std::vector<bool> keep(c.size(), false);
    std::vector<GateId> stack(c.outputs().begin(), c.outputs().end());
    while (!stack.empty()) {
        GateId g = stack.back();
        stack.pop_back();
        if (keep[g]) continue;
        keep[g] = true;
        for (GateId ch : c.gate(g).children) stack.push_back(ch);
    }
    CircuitBuilder<R> b;
    std::vector<GateId> remap(c.size(), 0);
    for (GateId i = 0; i < c.size(); ++i) {
        if (!keep[i]) continue;
        Gate<R> g = c.gate(i);
        for (GateId& ch : g.children) ch = remap[ch];
        switch (g.kind) {
            case GateKind::Input: remap[i] = b.add_input(g.var); break;
            case GateKind::Const: remap[i] = b.add_const(g.value); break;
            case GateKind::Add: remap[i] = b.add_add(g.children); break;
            case GateKind::Mul: remap[i] = b.add_mul(g.children); break;
            case GateKind::Scal: remap[i] = b.add_scal(g.children[0], g.children[1]); break;
        }
    }
    for (GateId o : c.outputs()) b.mark_output(remap[o]);
    return std::move(b).build();
}

} // namespace circuitflow
