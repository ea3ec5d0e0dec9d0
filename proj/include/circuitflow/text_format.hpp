#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "circuitflow/circuit.hpp"
#include "circuitflow/errors.hpp"

namespace circuitflow {

// Line format, one gate per line, children declared before use:
//   input <id> <var-index>
//   const <id> <integer>
//   add <id> <child>...
//   mul <id> <child>...
//   smul <id> <child> <child>
//   output <id>
// '#' starts a comment; ids are alphanumeric tokens.

namespace detail {

inline bool is_id_token(const std::string& t) {
    if (t.empty()) return false;
    for (char ch : t)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
    return true;
}

inline bool is_integer_token(const std::string& t) {
    std::size_t i = (t.size() > 1 && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
}

} // namespace detail

template <CommutativeRing R>
Circuit<R> parse_circuit(const std::string& text) {
    CircuitBuilder<R> b;
    std::map<std::string, GateId> ids;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool any_output = false;

    auto lookup = [&](const std::string& tok) -> GateId {
        auto it = ids.find(tok);
        if (it == ids.end())
            throw ParseError("unknown gate id '" + tok + "'", lineno);
        return it->second;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;

        const std::string& op = tok[0];
        if (op == "output") {
            if (tok.size() != 2) throw ParseError("output takes one id", lineno);
            b.mark_output(lookup(tok[1]));
            any_output = true;
            continue;
        }

        if (tok.size() < 2) throw ParseError("missing gate id", lineno);
        const std::string& id = tok[1];
        if (!detail::is_id_token(id))
            throw ParseError("bad gate id '" + id + "'", lineno);
        if (ids.count(id))
            throw ParseError("duplicate gate id '" + id + "'", lineno);

        if (op == "input") {
            if (tok.size() != 3 || !detail::is_integer_token(tok[2]) || tok[2][0] == '-')
                throw ParseError("input takes a non-negative variable index", lineno);
            ids[id] = b.add_input(static_cast<VarIndex>(std::stoul(tok[2])));
        } else if (op == "const") {
            if (tok.size() != 3 || !detail::is_integer_token(tok[2]))
                throw ParseError("const takes one integer", lineno);
            ids[id] = b.add_const(ring_traits<R>::from_string(tok[2]));
        } else if (op == "add" || op == "mul") {
            if (tok.size() < 3) throw ParseError(op + " needs at least one child", lineno);
            std::vector<GateId> ch;
            for (std::size_t i = 2; i < tok.size(); ++i) ch.push_back(lookup(tok[i]));
            ids[id] = (op == "add") ? b.add_add(std::move(ch)) : b.add_mul(std::move(ch));
        } else if (op == "smul") {
            if (tok.size() != 4) throw ParseError("smul takes exactly two children", lineno);
            ids[id] = b.add_scal(lookup(tok[2]), lookup(tok[3]));
        } else {
            throw ParseError("unknown directive '" + op + "'", lineno);
        }
    }
    if (!any_output) throw ParseError("no output declared", lineno);
    return std::move(b).build();
}

// Canonical form: dense ids as plain decimals, gates first, outputs last.
// Reprinting a parsed print is byte-identical.
template <CommutativeRing R>
std::string print_circuit(const Circuit<R>& c) {
    std::ostringstream out;
    for (GateId i = 0; i < c.size(); ++i) {
        const Gate<R>& g = c.gate(i);
        switch (g.kind) {
            case GateKind::Input:
                out << "input " << i << ' ' << g.var << '\n';
                break;
            case GateKind::Const:
                out << "const " << i << ' ' << ring_traits<R>::to_string(g.value) << '\n';
                break;
            case GateKind::Add:
            case GateKind::Mul:
            case GateKind::Scal:
                out << gate_kind_name(g.kind) << ' ' << i;
                for (GateId ch : g.children) out << ' ' << ch;
                out << '\n';
                break;
        }
    }
    for (GateId o : c.outputs()) out << "output " << o << '\n';
    return out.str();
}

} // namespace circuitflow
