#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "circuitflow/balance.hpp"
#include "circuitflow/bounds.hpp"
#include "circuitflow/circuit.hpp"
#include "circuitflow/errors.hpp"
#include "circuitflow/parse_trees.hpp"
#include "circuitflow/pass_report.hpp"
#include "circuitflow/polynomial.hpp"

namespace circuitflow {

namespace detail {

// Same gates, different output list.
template <CommutativeRing R>
Circuit<R> with_outputs(const Circuit<R>& c, const std::vector<GateId>& outs) {
    CircuitBuilder<R> b;
    for (GateId g = 0; g < c.size(); ++g) {
        const Gate<R>& gate = c.gate(g);
        switch (gate.kind) {
            case GateKind::Input: b.add_input(gate.var); break;
            case GateKind::Const: b.add_const(gate.value); break;
            case GateKind::Add: b.add_add(gate.children); break;
            case GateKind::Mul: b.add_mul(gate.children); break;
            case GateKind::Scal: b.add_scal(gate.children[0], gate.children[1]); break;
        }
    }
    for (GateId o : outs) b.mark_output(o);
    return std::move(b).build();
}

// Four-level tower computing a single constant; keeps the layer shape even
// for degenerate results.
template <CommutativeRing R>
Circuit<R> constant_tower(const R& v) {
    CircuitBuilder<R> b;
    GateId k = b.add_const(v);
    GateId m1 = b.add_mul({k});
    GateId s2 = b.add_add({m1});
    GateId m3 = b.add_mul({s2});
    GateId s4 = b.add_add({m3});
    b.mark_output(s4);
    return std::move(b).build();
}

} // namespace detail

// Cut of a circuit at the degree threshold d/a. Gates with deg*a >= d form
// the upper part; lower gates feeding it are replaced by fresh variables
// y_0, y_1, ... (one per boundary gate, in ascending gate order), constant
// feeds are inlined.
template <CommutativeRing R>
struct DegreeSplit {
    std::uint64_t a = 1;
    std::int64_t degree = 0;
    std::vector<bool> in_upper;    // indexed by gate id of the analyzed circuit
    std::vector<GateId> boundary;  // variable-carrying feeds; y_i stands for boundary[i]
    Circuit<R> upper;              // upper part over the fresh variables
};

template <CommutativeRing R>
DegreeSplit<R> split_by_degree(const Circuit<R>& c, std::uint64_t a) {
    if (c.outputs().size() != 1)
        throw ContractError("split: circuit must have a single output");
    if (a < 1) throw ConfigError("split: parameter must be positive");

    DegreeSplit<R> sp;
    sp.a = a;
    sp.degree = c.degree().value_or(0);
    const GateId out = c.outputs()[0];

    sp.in_upper.assign(c.size(), false);
    for (GateId g = 0; g < c.size(); ++g) {
        GateDegree dg = c.degree(g);
        sp.in_upper[g] =
            (dg.is_finite() &&
             dg.value() * static_cast<std::int64_t>(a) >= sp.degree) ||
            g == out;
    }

    std::vector<bool> is_boundary(c.size(), false);
    for (GateId g = 0; g < c.size(); ++g) {
        if (!sp.in_upper[g]) continue;
        if (c.gate(g).kind == GateKind::Input) {
            is_boundary[g] = true;
            continue;
        }
        for (GateId ch : c.gate(g).children)
            if (!sp.in_upper[ch] && c.gate(ch).kind != GateKind::Const)
                is_boundary[ch] = true;
    }
    for (GateId g = 0; g < c.size(); ++g)
        if (is_boundary[g]) sp.boundary.push_back(g);

    std::vector<VarIndex> y_of(c.size(), 0);
    for (std::size_t i = 0; i < sp.boundary.size(); ++i)
        y_of[sp.boundary[i]] = static_cast<VarIndex>(i);

    CircuitBuilder<R> b;
    std::vector<GateId> remap(c.size(), 0);
    std::vector<GateId> y_gate(sp.boundary.size(), 0);
    for (std::size_t i = 0; i < sp.boundary.size(); ++i)
        y_gate[i] = b.add_input(static_cast<VarIndex>(i));
    std::map<std::string, GateId> const_pool;
    auto const_of = [&](const R& v) {
        std::string key = ring_traits<R>::to_string(v);
        auto it = const_pool.find(key);
        if (it != const_pool.end()) return it->second;
        GateId g = b.add_const(v);
        const_pool[key] = g;
        return g;
    };
    auto feed_of = [&](GateId ch) {
        if (sp.in_upper[ch]) return remap[ch];
        if (c.gate(ch).kind == GateKind::Const) return const_of(c.gate(ch).value);
        return y_gate[y_of[ch]];
    };
    for (GateId g = 0; g < c.size(); ++g) {
        if (!sp.in_upper[g]) continue;
        const Gate<R>& gate = c.gate(g);
        switch (gate.kind) {
            case GateKind::Input:
                remap[g] = y_gate[y_of[g]];
                break;
            case GateKind::Const:
                remap[g] = const_of(gate.value);
                break;
            case GateKind::Add:
            case GateKind::Mul: {
                std::vector<GateId> kids;
                kids.reserve(gate.children.size());
                for (GateId ch : gate.children) kids.push_back(feed_of(ch));
                remap[g] = gate.kind == GateKind::Add ? b.add_add(std::move(kids))
                                                      : b.add_mul(std::move(kids));
                break;
            }
            case GateKind::Scal:
                remap[g] = b.add_scal(feed_of(gate.children[0]), feed_of(gate.children[1]));
                break;
        }
    }
    b.mark_output(remap[out]);
    sp.upper = std::move(b).build();
    return sp;
}

// Role census of the product nodes of one parse tree: each multiplication
// node is classified by how many of its children continue into the tree
// instead of stopping at a leaf.
struct ParseTreeRoles {
    std::size_t leaf_products = 0;       // every child is a leaf
    std::size_t chain_products = 0;      // exactly one child continues
    std::size_t branching_products = 0;  // two or more children continue
    std::size_t variable_leaves = 0;
};

template <CommutativeRing R>
ParseTreeRoles classify_parse_tree(const Circuit<R>& c, const ParseTree& t) {
    ParseTreeRoles roles;
    auto walk = [&](auto&& self, const ParseTreeNode& n) -> void {
        GateKind k = c.gate(n.origin).kind;
        if (k == GateKind::Input) {
            ++roles.variable_leaves;
            return;
        }
        if (k == GateKind::Const) return;
        if (k == GateKind::Mul) {
            std::size_t continuing = 0;
            for (const ParseTreeNode& ch : n.children) {
                GateKind ck = c.gate(ch.origin).kind;
                if (ck != GateKind::Input && ck != GateKind::Const) ++continuing;
            }
            if (continuing == 0)
                ++roles.leaf_products;
            else if (continuing == 1)
                ++roles.chain_products;
            else
                ++roles.branching_products;
        }
        for (const ParseTreeNode& ch : n.children) self(self, ch);
    };
    walk(walk, t.root);
    return roles;
}

// Flattens a homogeneous product-balanced circuit into four strict levels:
// products of inputs, one sum per cross-cut feed, one product per monomial
// of the upper part, and a single final sum. The parameter a picks the
// degree cut at d/a; coefficients ride along as constant children (level 1)
// or single-entry carrier sums (level 3).
template <CommutativeRing R>
PassResult<R> depth4(const Circuit<R>& c0, std::uint64_t a,
                     const PassOptions& opts = {}) {
    Circuit<R> c = prune_unreachable(c0);
    if (c.outputs().size() != 1)
        throw ContractError("depth4: circuit must have a single output");
    if (!c.is_homogeneous()) throw ContractError("depth4: circuit must be homogeneous");
    if (!is_x_balanced(c))
        throw ContractError("depth4: circuit must be product-balanced; balance first");

    const std::int64_t d = c.degree().value_or(0);
    if (a < 1 || (d >= 2 && static_cast<std::int64_t>(a) >= d))
        throw ConfigError("depth4: split parameter must satisfy 1 <= a < degree");

    Circuit<R> result = detail::constant_tower(R{0});
    std::size_t cut_feeds = 0;
    std::size_t upper_terms = 0;

    if (d == 0) {
        result = detail::constant_tower(expand(c, opts.term_budget).coefficient(Monomial{}));
    } else {
        DegreeSplit<R> sp = split_by_degree(c, a);
        cut_feeds = sp.boundary.size();

        std::vector<SparsePolynomial<R>> feed(sp.boundary.size());
        if (!sp.boundary.empty()) {
            Circuit<R> lower = detail::with_outputs(c, sp.boundary);
            auto polys = expand_all(lower, opts.term_budget);
            for (std::size_t i = 0; i < sp.boundary.size(); ++i)
                feed[i] = polys[sp.boundary[i]];
        }
        std::vector<bool> feed_zero(feed.size(), false);
        for (std::size_t i = 0; i < feed.size(); ++i) feed_zero[i] = feed[i].is_zero();

        SparsePolynomial<R> up = expand(sp.upper, opts.term_budget);
        upper_terms = up.term_count();

        CircuitBuilder<R> b;
        std::map<VarIndex, GateId> input_pool;
        std::map<std::string, GateId> const_pool;
        auto input_of = [&](VarIndex v) {
            auto it = input_pool.find(v);
            if (it != input_pool.end()) return it->second;
            GateId g = b.add_input(v);
            input_pool[v] = g;
            return g;
        };
        auto const_of = [&](const R& v) {
            std::string key = ring_traits<R>::to_string(v);
            auto it = const_pool.find(key);
            if (it != const_pool.end()) return it->second;
            GateId g = b.add_const(v);
            const_pool[key] = g;
            return g;
        };

        std::vector<GateId> feed_sum(feed.size(), 0);
        for (std::size_t i = 0; i < feed.size(); ++i) {
            if (feed_zero[i]) continue;
            std::vector<GateId> prods;
            prods.reserve(feed[i].term_count());
            for (const auto& [mono, coef] : feed[i].terms()) {
                std::vector<GateId> kids;
                if (!(coef == R{1})) kids.push_back(const_of(coef));
                for (const auto& [v, e] : mono.factors())
                    for (std::uint32_t j = 0; j < e; ++j) kids.push_back(input_of(v));
                if (kids.empty()) kids.push_back(const_of(R{1}));
                prods.push_back(b.add_mul(std::move(kids)));
            }
            feed_sum[i] = b.add_add(std::move(prods));
        }

        auto carrier_of = [&](const R& v) {
            GateId m = b.add_mul({const_of(v)});
            return b.add_add({m});
        };

        std::vector<GateId> top_prods;
        for (const auto& [mono, coef] : up.terms()) {
            bool dead = false;
            for (const auto& [y, e] : mono.factors())
                if (feed_zero[y]) dead = true;
            if (dead) continue;
            std::vector<GateId> kids;
            if (!(coef == R{1})) kids.push_back(carrier_of(coef));
            for (const auto& [y, e] : mono.factors())
                for (std::uint32_t j = 0; j < e; ++j) kids.push_back(feed_sum[y]);
            if (kids.empty()) kids.push_back(carrier_of(coef));
            top_prods.push_back(b.add_mul(std::move(kids)));
        }

        if (!top_prods.empty()) {
            b.mark_output(b.add_add(std::move(top_prods)));
            result = prune_unreachable(std::move(b).build());
        }
    }

    PassReport rep;
    rep.pass = "depth4";
    rep.options = opts;
    rep.input = c.stats();
    rep.output = result.stats();
    rep.params["a"] = std::to_string(a);
    rep.params["degree"] = std::to_string(d);
    rep.params["cut_feeds"] = std::to_string(cut_feeds);
    rep.params["upper_terms"] = std::to_string(upper_terms);

    LevelProfile prof = extract_level_profile(result);
    const std::uint64_t da =
        d == 0 ? 0 : (static_cast<std::uint64_t>(d) + a - 1) / a;
    rep.bounds.push_back(detail::make_bound(
        "size",
        lemma_depth4_size(Int(c.size()), c.num_vars(), static_cast<std::uint64_t>(d), a),
        Int(result.size()), "four-level ceiling at the chosen cut"));
    rep.bounds.push_back(detail::make_bound("top-product-fanin", Int(15 * a),
                                            Int(prof.t3_pos), "15a"));
    rep.bounds.push_back(detail::make_bound("bottom-product-fanin", Int(da),
                                            Int(prof.t1_vars), "ceil(d/a)"));
    rep.bounds.push_back(detail::make_flag("depth-4", result.depth() == 4));
    rep.bounds.push_back(detail::make_flag("homogeneous", result.is_homogeneous()));
    rep.equivalence = detail::check_equivalence_outputs(c, result, opts);
    return {std::move(result), std::move(rep)};
}

} // namespace circuitflow
