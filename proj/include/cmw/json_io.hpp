// JSON (de)serialization for polynomials, normal forms, and reports.
// Uses alphabetically-ordered keys and canonical rational strings so that
// emitted files are byte-stable across runs and platforms.
#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypersurfaces.hpp"
#include "normalform.hpp"
#include "tensor.hpp"

namespace cmw {

using Json = nlohmann::json; // alphabetical key order by default

/// Thrown on malformed input files; maps to the schema-error exit code.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace json_detail {

inline Json exponents(const std::vector<int>& e) {
    return Json(e);
}

inline std::vector<int> exponents_from(const Json& j, const char* key, int n) {
    if (!j.is_array()) throw SchemaError(std::string("term key '") + key + "' must be an array");
    std::vector<int> e;
    for (const auto& x : j) {
        if (!x.is_number_integer() || x.get<long>() < 0)
            throw SchemaError(std::string("term key '") + key + "' must hold nonnegative integers");
        e.push_back(x.get<int>());
    }
    if (n >= 0 && (int)e.size() != n)
        throw SchemaError(std::string("term key '") + key + "' has wrong length");
    return e;
}

inline Rat rat_field(const Json& term, const char* key) {
    if (!term.contains(key) || !term.at(key).is_string())
        throw SchemaError(std::string("term key '") + key + "' must be a rational string");
    try {
        return rat_from_string(term.at(key).get<std::string>());
    } catch (const std::invalid_argument&) {
        throw SchemaError(std::string("term key '") + key + "' is not a valid rational");
    }
}

} // namespace json_detail

// ---- real-coordinate polynomials -----------------------------------------

inline Json poly_to_json(const Poly& p) {
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) { // deterministic map order
        Json t;
        t["alpha"] = json_detail::exponents(m.a);
        t["beta"] = json_detail::exponents(m.b);
        t["k"] = m.k;
        t["re"] = rat_to_string(c.re);
        t["im"] = rat_to_string(c.im);
        terms.push_back(t);
    }
    return terms;
}

/// Parse a term list; n < 0 infers the variable count from the first term.
/// Reality of the whole polynomial is validated.
inline Poly poly_from_json(const Json& terms, int n, bool require_real = true) {
    if (!terms.is_array()) throw SchemaError("term list must be an array");
    Poly p(0);
    bool first = true;
    for (const auto& t : terms) {
        if (!t.is_object()) throw SchemaError("each term must be an object");
        for (const char* key : {"alpha", "beta", "k", "re", "im"})
            if (!t.contains(key)) throw SchemaError(std::string("term missing key '") + key + "'");
        Mono m;
        m.a = json_detail::exponents_from(t.at("alpha"), "alpha", n);
        m.b = json_detail::exponents_from(t.at("beta"), "beta", n);
        if (m.a.size() != m.b.size()) throw SchemaError("term keys 'alpha'/'beta' differ in length");
        if (!t.at("k").is_number_integer() || t.at("k").get<long>() < 0)
            throw SchemaError("term key 'k' must be a nonnegative integer");
        m.k = t.at("k").get<int>();
        CRational c{json_detail::rat_field(t, "re"), json_detail::rat_field(t, "im")};
        if (first) {
            p = Poly((int)m.a.size());
            first = false;
        }
        if ((int)m.a.size() != p.nvars()) throw SchemaError("inconsistent variable count across terms");
        if (!p.coeff(m).is_zero()) throw SchemaError("duplicate term");
        p.add_term(m, c);
    }
    if (first && n >= 0) p = Poly(n);
    if (require_real && !p.is_real())
        throw SchemaError("polynomial is not real: conjugate-symmetry fails");
    return p;
}

// ---- holomorphic polynomials (jet components) -----------------------------

inline Json holo_to_json(const HoloPoly& h) {
    Json terms = Json::array();
    for (const auto& [m, c] : h.terms()) {
        Json t;
        t["alpha"] = json_detail::exponents(m.a);
        t["w"] = m.m;
        t["re"] = rat_to_string(c.re);
        t["im"] = rat_to_string(c.im);
        terms.push_back(t);
    }
    return terms;
}

// ---- structured reports ----------------------------------------------------

inline Json signature_to_json(const Signature& sig) {
    Json j;
    j["l"] = sig.ell;
    j["n"] = sig.n;
    return j;
}

inline Json normal_form_to_json(const NormalForm4& nf) {
    Json jet;
    Json fs = Json::array();
    for (const auto& f : nf.jet.f) fs.push_back(holo_to_json(f));
    jet["f"] = fs;
    jet["g"] = holo_to_json(nf.jet.g);
    Json j;
    j["jet"] = jet;
    j["residual"] = poly_to_json(nf.residual);
    j["s"] = poly_to_json(nf.s);
    j["signature"] = signature_to_json(nf.sig);
    return j;
}

inline Json obstruction_to_json(const ObstructionReport& rep) {
    Json j;
    j["samples"] = rep.samples;
    j["seed"] = rep.seed;
    j["verdict"] = rep.verdict;
    Json ws = Json::array();
    for (const auto& w : rep.witnesses) {
        Json e;
        Json v = Json::array();
        for (const auto& c : w.v) {
            Json comp;
            comp["im"] = rat_to_string(c.im);
            comp["re"] = rat_to_string(c.re);
            v.push_back(comp);
        }
        e["v"] = v;
        e["value"] = rat_to_string(w.value);
        ws.push_back(e);
    }
    j["witnesses"] = ws;
    return j;
}

inline Json segre_witness_to_json(const SegreWitness& w) {
    Json j;
    j["found"] = w.found;
    if (!w.found) {
        j["message"] = w.message;
        j["eps_tilde"] = rat_to_string(w.eps_tilde);
        j["lambda_prime_sq"] = rat_to_string(w.lambda_prime_sq);
        return j;
    }
    j["eps_tilde"] = rat_to_string(w.eps_tilde);
    j["lambda_prime_sq"] = rat_to_string(w.lambda_prime_sq);
    j["phi_value"] = rat_to_string(w.phi_value);
    j["rho_at_witness"] = rat_to_string(w.rho_at_witness);
    j["segre_membership"] = rat_to_string(w.segre_membership);
    Json p0 = Json::array();
    for (const auto& c : w.p0) {
        Json comp;
        comp["im"] = rat_to_string(c.im);
        comp["re"] = rat_to_string(c.re);
        p0.push_back(comp);
    }
    j["p0"] = p0;
    return j;
}

// ---- files ------------------------------------------------------------------

/// Input file: {"n": int, "l": int, "terms": [...]} describing a graph tail
/// H(z, z-bar, u) (pre-normal defining function r = v - |z|^2_l + H).
struct PolyFile {
    Signature sig;
    Poly tail;
};

inline PolyFile read_poly_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open input file: " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SchemaError(std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("l") || !j.contains("terms"))
        throw SchemaError("input must be an object with keys 'n', 'l', 'terms'");
    if (!j.at("n").is_number_integer() || !j.at("l").is_number_integer())
        throw SchemaError("keys 'n' and 'l' must be integers");
    int n = j.at("n").get<int>(), l = j.at("l").get<int>();
    Signature sig{n, l}; // may throw domain errors upstream
    Poly tail = poly_from_json(j.at("terms"), n);
    return {sig, tail};
}

inline void write_report(const Json& j, const std::string& out) {
    std::string text = j.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream os(out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + out);
    os << text;
}

} // namespace cmw
