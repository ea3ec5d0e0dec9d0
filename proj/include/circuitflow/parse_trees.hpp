#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "circuitflow/circuit.hpp"
#include "circuitflow/errors.hpp"
#include "circuitflow/polynomial.hpp"

namespace circuitflow {

// One parse tree: at an Add node exactly one child was chosen; at a Mul or
// Scal node every child was copied. `origin` links back to the gate id.
struct ParseTreeNode {
    GateId origin = 0;
    std::vector<ParseTreeNode> children;
};

struct ParseTree {
    GateId root_gate = 0;
    ParseTreeNode root;
};

// Number of parse trees per gate: 1 at leaves, sum over children at Add,
// product over children at Mul/Scal.
template <CommutativeRing R>
std::vector<Int> parse_tree_counts(const Circuit<R>& c) {
    std::vector<Int> n(c.size());
    for (GateId i = 0; i < c.size(); ++i) {
        const Gate<R>& g = c.gate(i);
        switch (g.kind) {
            case GateKind::Input:
            case GateKind::Const:
                n[i] = 1;
                break;
            case GateKind::Add: {
                Int s = 0;
                for (GateId ch : g.children) s += n[ch];
                n[i] = s;
                break;
            }
            case GateKind::Mul:
            case GateKind::Scal: {
                Int p = 1;
                for (GateId ch : g.children) p *= n[ch];
                n[i] = p;
                break;
            }
        }
    }
    return n;
}

// Total over the circuit's outputs (their tree sets are disjoint).
template <CommutativeRing R>
Int count_parse_trees(const Circuit<R>& c) {
    std::vector<Int> n = parse_tree_counts(c);
    Int total = 0;
    for (GateId o : c.outputs()) total += n[o];
    return total;
}

namespace detail {

// Tree number `index` (0-based) rooted at `gate`, under the mixed-radix
// numbering induced by the counting recurrence: an Add picks the child whose
// cumulative range contains the index; a Mul/Scal splits the index into one
// digit per child.
template <CommutativeRing R>
ParseTreeNode build_parse_tree(const Circuit<R>& c, const std::vector<Int>& n,
                               GateId gate, Int index) {
    ParseTreeNode node;
    node.origin = gate;
    const Gate<R>& g = c.gate(gate);
    switch (g.kind) {
        case GateKind::Input:
        case GateKind::Const:
            break;
        case GateKind::Add: {
            for (GateId ch : g.children) {
                if (index < n[ch]) {
                    node.children.push_back(build_parse_tree(c, n, ch, index));
                    break;
                }
                index -= n[ch];
            }
            break;
        }
        case GateKind::Mul:
        case GateKind::Scal: {
            for (GateId ch : g.children) {
                Int digit = index % n[ch];
                index /= n[ch];
                node.children.push_back(build_parse_tree(c, n, ch, digit));
            }
            break;
        }
    }
    return node;
}

} // namespace detail

// All parse trees over all outputs, generated lazily one index at a time.
// Refuses to materialize more than `limit` trees; the error carries the
// exact total.
template <CommutativeRing R>
std::vector<ParseTree> enumerate_parse_trees(const Circuit<R>& c, std::size_t limit) {
    std::vector<Int> n = parse_tree_counts(c);
    Int total = 0;
    for (GateId o : c.outputs()) total += n[o];
    if (total > limit)
        throw BudgetError("parse tree enumeration limit exceeded: " + total.str() +
                              " trees > limit " + std::to_string(limit),
                          total);
    std::vector<ParseTree> trees;
    trees.reserve(static_cast<std::size_t>(total));
    for (GateId o : c.outputs()) {
        for (Int i = 0; i < n[o]; ++i) {
            ParseTree t;
            t.root_gate = o;
            t.root = detail::build_parse_tree(c, n, o, i);
            trees.push_back(std::move(t));
        }
    }
    return trees;
}

// Product of the leaves of T: constants multiply into the coefficient,
// inputs into the monomial. A Const(0) leaf zeroes the whole term.
template <CommutativeRing R>
SparsePolynomial<R> parse_tree_term(const Circuit<R>& c, const ParseTree& t) {
    R coef{1};
    Monomial mono;
    bool zero = false;
    auto walk = [&](auto&& self, const ParseTreeNode& node) -> void {
        const Gate<R>& g = c.gate(node.origin);
        if (g.kind == GateKind::Input) {
            mono = mono * Monomial::variable(g.var);
        } else if (g.kind == GateKind::Const) {
            if (g.value == R{0}) zero = true;
            coef = coef * g.value;
        }
        for (const ParseTreeNode& ch : node.children) self(self, ch);
    };
    walk(walk, t.root);
    if (zero) return SparsePolynomial<R>::zero();
    return SparsePolynomial<R>::term(std::move(coef), std::move(mono));
}

// Sum of parse-tree terms; by the expansion identity this equals the
// polynomial the circuit computes.
template <CommutativeRing R>
SparsePolynomial<R> parse_tree_sum(const Circuit<R>& c, std::size_t limit) {
    SparsePolynomial<R> sum;
    for (const ParseTree& t : enumerate_parse_trees(c, limit))
        sum = sum + parse_tree_term(c, t);
    return sum;
}

inline std::size_t parse_tree_leaf_count(const ParseTreeNode& node) {
    if (node.children.empty()) return 1;
    std::size_t n = 0;
    for (const ParseTreeNode& ch : node.children) n += parse_tree_leaf_count(ch);
    return n;
}

} // namespace circuitflow
