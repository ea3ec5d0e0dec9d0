#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "circuitflow/circuit.hpp"
#include "circuitflow/degree.hpp"
#include "circuitflow/errors.hpp"

namespace circuitflow {

inline constexpr std::size_t kDefaultTermBudget = 1'000'000;

// Power product of variables, stored sparse and sorted by variable index.
class Monomial {
public:
    Monomial() = default;

    static Monomial variable(VarIndex v, std::uint32_t e = 1) {
        Monomial m;
        if (e > 0) m.factors_.push_back({v, e});
        return m;
    }

    bool is_one() const { return factors_.empty(); }

    std::int64_t total_degree() const {
        std::int64_t d = 0;
        for (const auto& [v, e] : factors_) d += e;
        return d;
    }

    std::uint32_t exponent(VarIndex v) const {
        for (const auto& [var, e] : factors_)
            if (var == v) return e;
        return 0;
    }

    const std::vector<std::pair<VarIndex, std::uint32_t>>& factors() const {
        return factors_;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r;
        std::size_t i = 0, j = 0;
        while (i < a.factors_.size() || j < b.factors_.size()) {
            if (j == b.factors_.size() ||
                (i < a.factors_.size() && a.factors_[i].first < b.factors_[j].first)) {
                r.factors_.push_back(a.factors_[i++]);
            } else if (i == a.factors_.size() ||
                       b.factors_[j].first < a.factors_[i].first) {
                r.factors_.push_back(b.factors_[j++]);
            } else {
                r.factors_.push_back(
                    {a.factors_[i].first, a.factors_[i].second + b.factors_[j].second});
                ++i;
                ++j;
            }
        }
        return r;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.factors_ == b.factors_;
    }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

    // Graded lexicographic: total degree first, then lexicographic with
    // lower variable indices weighing more (x0 > x1 > ...).
    friend bool grlex_less(const Monomial& a, const Monomial& b) {
        std::int64_t da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db;
        std::size_t i = 0, j = 0;
        while (i < a.factors_.size() && j < b.factors_.size()) {
            if (a.factors_[i].first != b.factors_[j].first)
                return a.factors_[i].first > b.factors_[j].first;
            if (a.factors_[i].second != b.factors_[j].second)
                return a.factors_[i].second < b.factors_[j].second;
            ++i;
            ++j;
        }
        return a.factors_.size() < b.factors_.size();
    }

    friend bool operator<(const Monomial& a, const Monomial& b) { return grlex_less(a, b); }

    std::string to_string() const {
        if (factors_.empty()) return "1";
        std::string s;
        for (const auto& [v, e] : factors_) {
            if (!s.empty()) s += ' ';
            s += "x" + std::to_string(v);
            if (e != 1) s += "^" + std::to_string(e);
        }
        return s;
    }

private:
    std::vector<std::pair<VarIndex, std::uint32_t>> factors_;
};

using MonomialSet = std::set<Monomial>;

// Exact multivariate polynomial: monomial -> nonzero coefficient, kept in
// graded-lex order for deterministic traversal and printing.
template <CommutativeRing R>
class SparsePolynomial {
public:
    using TermMap = std::map<Monomial, R>;

    SparsePolynomial() = default;

    static SparsePolynomial zero() { return {}; }
    static SparsePolynomial constant(R c) {
        SparsePolynomial p;
        if (!(c == R{0})) p.terms_[Monomial()] = std::move(c);
        return p;
    }
    static SparsePolynomial variable(VarIndex v) {
        SparsePolynomial p;
        p.terms_[Monomial::variable(v)] = R{1};
        return p;
    }
    static SparsePolynomial term(R c, Monomial m) {
        SparsePolynomial p;
        if (!(c == R{0})) p.terms_[std::move(m)] = std::move(c);
        return p;
    }

    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    R coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? R{0} : it->second;
    }

    GateDegree degree() const {
        if (terms_.empty()) return GateDegree::neg_infinity();
        // grlex order puts the largest total degree last
        return GateDegree(terms_.rbegin()->first.total_degree());
    }

    MonomialSet support() const {
        MonomialSet s;
        for (const auto& [m, c] : terms_) s.insert(m);
        return s;
    }

    void add_term(const Monomial& m, const R& c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!(c == R{0})) terms_.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (it->second == R{0}) terms_.erase(it);
        }
    }

    friend SparsePolynomial operator+(const SparsePolynomial& a, const SparsePolynomial& b) {
        SparsePolynomial r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }

    friend SparsePolynomial operator-(const SparsePolynomial& a) {
        SparsePolynomial r;
        for (const auto& [m, c] : a.terms_) r.terms_[m] = -c;
        return r;
    }

    friend SparsePolynomial operator-(const SparsePolynomial& a, const SparsePolynomial& b) {
        return a + (-b);
    }

    friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b) {
        SparsePolynomial r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }

    friend bool operator==(const SparsePolynomial& a, const SparsePolynomial& b) {
        return a.terms_ == b.terms_;
    }

    SparsePolynomial homogeneous_part(std::int64_t d) const {
        SparsePolynomial r;
        for (const auto& [m, c] : terms_)
            if (m.total_degree() == d) r.terms_[m] = c;
        return r;
    }

    // Terms joined by " + ", leading term first: "coef * x<i>^<e> ...".
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!first) out << " + ";
            first = false;
            out << ring_traits<R>::to_string(it->second);
            if (!it->first.is_one()) out << " * " << it->first.to_string();
        }
        return out.str();
    }

private:
    TermMap terms_;
};

// Expansion of every gate reachable from an output, in gate order. Work and
// intermediate sizes are capped by term_budget: each stored polynomial must
// stay within the budget, and a product is refused if the pairwise term
// count |p|*|q| already exceeds it.
template <CommutativeRing R>
std::vector<SparsePolynomial<R>> expand_all(const Circuit<R>& c,
                                            std::size_t term_budget = kDefaultTermBudget) {
    std::vector<bool> needed(c.size(), false);
    {
        std::vector<GateId> stack(c.outputs().begin(), c.outputs().end());
        while (!stack.empty()) {
            GateId g = stack.back();
            stack.pop_back();
            if (needed[g]) continue;
            needed[g] = true;
            for (GateId ch : c.gate(g).children) stack.push_back(ch);
        }
    }
    std::vector<SparsePolynomial<R>> poly(c.size());
    auto check_budget = [&](GateId id, std::size_t count) {
        if (count > term_budget)
            throw BudgetError("term budget exceeded at gate " + std::to_string(id) +
                                  ": " + std::to_string(count) + " > " +
                                  std::to_string(term_budget),
                              Int(count));
    };
    for (GateId i = 0; i < c.size(); ++i) {
        if (!needed[i]) continue;
        const Gate<R>& g = c.gate(i);
        switch (g.kind) {
            case GateKind::Input:
                poly[i] = SparsePolynomial<R>::variable(g.var);
                break;
            case GateKind::Const:
                poly[i] = SparsePolynomial<R>::constant(g.value);
                break;
            case GateKind::Add: {
                SparsePolynomial<R> acc;
                for (GateId ch : g.children) acc = acc + poly[ch];
                poly[i] = std::move(acc);
                break;
            }
            case GateKind::Mul:
            case GateKind::Scal: {
                SparsePolynomial<R> acc = SparsePolynomial<R>::constant(R{1});
                for (GateId ch : g.children) {
                    std::size_t work = acc.term_count() * poly[ch].term_count();
                    check_budget(i, work);
                    acc = acc * poly[ch];
                }
                poly[i] = std::move(acc);
                break;
            }
        }
        check_budget(i, poly[i].term_count());
    }
    return poly;
}

template <CommutativeRing R>
SparsePolynomial<R> expand(const Circuit<R>& c, GateId output,
                           std::size_t term_budget = kDefaultTermBudget) {
    if (output >= c.size()) throw ContractError("expand: output id out of range");
    return expand_all(c, term_budget)[output];
}

// Expansion of the (single) output; multi-output circuits must name a gate.
template <CommutativeRing R>
SparsePolynomial<R> expand(const Circuit<R>& c,
                           std::size_t term_budget = kDefaultTermBudget) {
    if (c.outputs().size() != 1)
        throw ContractError("expand: circuit has " +
                            std::to_string(c.outputs().size()) +
                            " outputs; name the gate");
    return expand(c, c.outputs()[0], term_budget);
}

} // namespace circuitflow
