#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "circuitflow/bounds.hpp"
#include "circuitflow/circuit.hpp"
#include "circuitflow/field_eval.hpp"
#include "circuitflow/pass_report.hpp"

namespace circuitflow {

// Insertion-ordered JSON keeps report layouts byte-stable across runs.
using Json = nlohmann::ordered_json;

inline std::string decimal(const Int& v) { return v.str(); }

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline Json json_of(GateDegree d) {
    if (d.is_neg_infinity()) return Json("-inf");
    return Json(d.value());
}

inline Json json_of(const CircuitStats& st) {
    Json j;
    j["size"] = st.size;
    j["degree"] = json_of(st.degree);
    j["num_vars"] = st.num_vars;
    j["depth"] = st.depth;
    j["count_input"] = st.count_input;
    j["count_const"] = st.count_const;
    j["count_add"] = st.count_add;
    j["count_mul"] = st.count_mul;
    j["count_scal"] = st.count_scal;
    j["max_fanin_add"] = st.max_fanin_add;
    j["max_fanin_mul"] = st.max_fanin_mul;
    j["max_fanin_scal"] = st.max_fanin_scal;
    j["homogeneous"] = st.homogeneous;
    return j;
}

inline Json json_of(const ValidationReport& rep) {
    Json j;
    j["ok"] = rep.ok();
    Json vs = Json::array();
    for (const Violation& v : rep.violations) {
        Json e;
        e["code"] = v.code;
        e["gate"] = v.gate;
        e["detail"] = v.detail;
        vs.push_back(std::move(e));
    }
    j["violations"] = std::move(vs);
    return j;
}

inline Json json_of(const BoundCheck& b) {
    Json j;
    j["name"] = b.name;
    j["predicted"] = decimal(b.predicted);
    j["measured"] = decimal(b.measured);
    j["satisfied"] = b.satisfied;
    j["note"] = b.note;
    return j;
}

inline Json json_of(const EquivalenceCheck& e) {
    Json j;
    j["method"] = e.method;
    j["equal"] = e.equal;
    j["trials"] = e.trials;
    j["prime"] = e.prime;
    j["seed"] = e.seed;
    return j;
}

inline Json json_of(const PassOptions& o) {
    Json j;
    j["prime"] = o.prime;
    j["trials"] = o.trials;
    j["seed"] = o.seed;
    j["term_budget"] = o.term_budget;
    return j;
}

inline Json json_of(const PassReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["input"] = json_of(r.input);
    j["output"] = json_of(r.output);
    Json bs = Json::array();
    for (const BoundCheck& b : r.bounds) bs.push_back(json_of(b));
    j["bounds"] = std::move(bs);
    j["equivalence"] = r.equivalence ? json_of(*r.equivalence) : Json(nullptr);
    Json ps;
    for (const auto& [k, v] : r.params) ps[k] = v;
    j["params"] = std::move(ps);
    j["options"] = json_of(r.options);
    j["all_satisfied"] = r.all_satisfied();
    return j;
}

inline Json json_of(const EquivalenceVerdict& v) {
    Json j;
    j["equal"] = v.equal;
    j["trials"] = v.trials;
    j["prime"] = v.prime;
    j["seed"] = v.seed;
    if (v.failure_point) {
        Json p;
        for (const auto& [var, val] : *v.failure_point)
            p["x" + std::to_string(var)] = val;
        j["failure_point"] = std::move(p);
    } else {
        j["failure_point"] = Json(nullptr);
    }
    return j;
}

inline Json json_of(const BoundCertificate& c) {
    Json j;
    j["claim"] = c.claim;
    j["lhs"] = decimal(c.lhs);
    j["rhs"] = decimal(c.rhs);
    j["direction"] = c.geq ? "ge" : "le";
    j["satisfied"] = c.satisfied;
    j["note"] = c.note;
    return j;
}

inline Json json_of(const LevelProfile& p) {
    Json j;
    j["s1"] = p.s1;
    j["s2"] = p.s2;
    j["s3"] = p.s3;
    j["s4"] = p.s4;
    j["t1"] = p.t1;
    j["t2"] = p.t2;
    j["t3"] = p.t3;
    j["t4"] = p.t4;
    j["t1_vars"] = p.t1_vars;
    j["t3_pos"] = p.t3_pos;
    j["bottom_min_fanin"] = p.bottom_min_fanin;
    j["bottom_const_gates"] = p.bottom_const_gates;
    j["bare_wires"] = p.bare_wires;
    return j;
}

} // namespace circuitflow
