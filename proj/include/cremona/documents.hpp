#pragma once

// Self-describing JSON documents: run inputs and chain certificates.
// Polynomials travel as grammar strings ("3*x0^2*x1 - x2^3"), field
// elements as balanced decimal strings, so certificates stay readable and
// re-checkable by other implementations. Emission is canonical (sorted
// keys, fixed indentation): equal certificates serialize byte-identically.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cremona/chain.hpp"
#include "cremona/errors.hpp"
#include "cremona/fields.hpp"
#include "cremona/linear_system.hpp"
#include "cremona/multipoly.hpp"

namespace cremona {

using json = nlohmann::json;

inline constexpr const char* kCertificateFormat = "cremona-chain-certificate";
inline constexpr int kCertificateVersion = 1;

/// Parsed but still field-agnostic run input.
struct InputDoc {
    FieldSpec field;
    bool field_specified = false;  // document carried an explicit field entry
    int r = 0;
    int n = 0;
    std::vector<std::string> L_text;
    std::vector<std::string> G_text;  // may be empty (linearize fills it)
};

namespace detail {

inline json field_to_json(const FieldSpec& f) {
    if (f.rationals) return json("rationals");
    return json{{"prime", f.prime}};
}

inline FieldSpec field_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "rationals") throw parse_error("unknown field kind '" + j.get<std::string>() + "'");
        return FieldSpec::make_rationals();
    }
    if (j.is_object() && j.contains("prime") && j["prime"].is_number_unsigned())
        return FieldSpec::make_prime(j["prime"].get<u64>());
    throw parse_error("field must be \"rationals\" or {\"prime\": p}");
}

template <class T>
T get_field(const json& j, const char* key) {
    if (!j.contains(key)) throw parse_error(std::string("missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw parse_error(std::string("bad value for key '") + key + "'");
    }
}

template <field_type F>
json tuple_to_json(const std::vector<F>& v) {
    json arr = json::array();
    for (const F& x : v) arr.push_back(x.to_string());
    return arr;
}

template <field_type F>
std::vector<F> tuple_from_json(const json& j) {
    if (!j.is_array()) throw parse_error("expected an array of field elements");
    std::vector<F> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(F::parse(e.get<std::string>()));
    return out;
}

template <field_type F>
json matrix_to_json(const Matrix<F>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).to_string());
        rows.push_back(std::move(row));
    }
    return rows;
}

template <field_type F>
Matrix<F> matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw parse_error("expected a matrix");
    Matrix<F> m(j.size(), j[0].size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (j[i].size() != m.cols()) throw parse_error("ragged matrix");
        for (std::size_t c = 0; c < m.cols(); ++c) m.at(i, c) = F::parse(j[i][c].get<std::string>());
    }
    return m;
}

template <field_type F>
json system_to_json(const LinearSystem<F>& sys, char prefix) {
    json arr = json::array();
    for (const auto& e : sys.entries) arr.push_back(e.to_string(prefix));
    return arr;
}

/// Two-pass system parse: nonzero entries fix the common degree, then
/// zero entries are annotated with it.
template <field_type F>
LinearSystem<F> system_from_texts(const std::vector<std::string>& texts, int num_vars, char prefix,
                                  const std::string& label) {
    if (texts.empty()) throw parse_error("system '" + label + "' is empty");
    std::vector<MultiPoly<F>> entries;
    entries.reserve(texts.size());
    int degree = -1;
    for (const auto& t : texts) {
        auto p = MultiPoly<F>::parse(t, num_vars, prefix, 0);
        if (!p.is_zero()) {
            if (degree >= 0 && p.degree() != degree)
                throw parse_error("system '" + label + "' mixes degrees " + std::to_string(degree) + " and " +
                                  std::to_string(p.degree()));
            degree = p.degree();
        }
        entries.push_back(std::move(p));
    }
    if (degree < 0) throw all_zero_error("system '" + label + "' has no nonzero entry");
    for (auto& p : entries)
        if (p.is_zero()) p = MultiPoly<F>::zero(num_vars, degree);
    return LinearSystem<F>(std::move(entries), label);
}

}  // namespace detail

inline InputDoc parse_input_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw parse_error(std::string("input is not valid JSON: ") + e.what());
    }
    InputDoc doc;
    doc.field_specified = j.contains("field");
    doc.field = detail::field_from_json(doc.field_specified ? j.at("field") : json{{"prime", kDefaultPrime}});
    doc.r = detail::get_field<int>(j, "r");
    doc.n = detail::get_field<int>(j, "n");
    if (doc.r < 0 || doc.n < 1) throw parse_error("need r >= 0 and n >= 1");
    if (j.contains("param_vars")) {
        auto vars = detail::get_field<std::vector<std::string>>(j, "param_vars");
        if (int(vars.size()) != doc.r + 1) throw parse_error("param_vars must list r+1 names");
        for (int i = 0; i <= doc.r; ++i)
            if (vars[std::size_t(i)] != "s" + std::to_string(i))
                throw parse_error("parameter variables must be named s0..s" + std::to_string(doc.r));
    }
    doc.L_text = detail::get_field<std::vector<std::string>>(j, "L");
    if (j.contains("G")) doc.G_text = detail::get_field<std::vector<std::string>>(j, "G");
    return doc;
}

inline json input_to_json(const InputDoc& doc) {
    json j;
    j["field"] = detail::field_to_json(doc.field);
    j["r"] = doc.r;
    j["n"] = doc.n;
    json vars = json::array();
    for (int i = 0; i <= doc.r; ++i) vars.push_back("s" + std::to_string(i));
    j["param_vars"] = vars;
    j["L"] = doc.L_text;
    if (!doc.G_text.empty()) j["G"] = doc.G_text;
    return j;
}

template <field_type F>
json certificate_to_json(const ChainCertificate<F>& cert) {
    json j;
    j["format"] = kCertificateFormat;
    j["version"] = kCertificateVersion;
    j["field"] = detail::field_to_json(cert.field);
    json input;
    input["r"] = cert.r;
    input["n"] = cert.n;
    json vars = json::array();
    for (int i = 0; i <= cert.r; ++i) vars.push_back("s" + std::to_string(i));
    input["param_vars"] = vars;
    input["L"] = detail::system_to_json(cert.L, 's');
    input["G"] = detail::system_to_json(cert.G, 's');
    j["input"] = std::move(input);
    j["perm_L"] = cert.perm_L;
    j["perm_G"] = cert.perm_G;
    j["seed"] = cert.seed;
    j["trials"] = cert.trials;
    j["k_max"] = cert.k_max;
    j["injectivity"] = json{{"L", cert.injectivity_L}, {"G", cert.injectivity_G}};
    j["early_termination"] = cert.early_termination_step ? json{{"at_step", *cert.early_termination_step}} : json();
    json steps = json::array();
    for (const auto& s : cert.steps) {
        json step;
        step["i"] = s.index;
        step["k"] = s.k;
        step["q2"] = detail::tuple_to_json(s.q2.coords);
        json surface;
        surface["a"] = s.S.a.to_string('x');
        surface["b"] = s.S.b.to_string('x');
        surface["c"] = s.S.c.to_string('x');
        surface["d"] = s.S.d.to_string('x');
        surface["adaptation"] = detail::matrix_to_json(s.S.adaptation);
        surface["w1_sample"] = detail::tuple_to_json(s.S.w1_sample);
        surface["w2_sample"] = detail::tuple_to_json(s.S.w2_sample);
        surface["w3_point"] = detail::tuple_to_json(s.S.w3_point);
        surface["holdout_checks"] = s.S.holdout_checks;
        step["S"] = std::move(surface);
        json fwd = json::array(), bwd = json::array();
        for (const auto& c : s.phi.forward.components) fwd.push_back(c.to_string('x'));
        for (const auto& c : s.phi.backward.components) bwd.push_back(c.to_string('x'));
        step["forward"] = std::move(fwd);
        step["backward"] = std::move(bwd);
        step["A_next"] = detail::system_to_json(s.A_next, 's');
        json tr;
        tr["seed"] = s.transcript.seed;
        tr["trials"] = s.transcript.trials;
        tr["failures"] = s.transcript.failures;
        tr["q2_attempts"] = s.transcript.q2_attempts;
        tr["resamples"] = s.transcript.resamples;
        tr["roundtrip"] = json{{"seed", s.transcript.roundtrip.seed},
                               {"trials", s.transcript.roundtrip.trials},
                               {"failures", s.transcript.roundtrip.failures},
                               {"resamples", s.transcript.roundtrip.resamples}};
        step["transcript"] = std::move(tr);
        steps.push_back(std::move(step));
    }
    j["steps"] = std::move(steps);
    j["end_to_end"] = json{{"seed_forward", cert.end_to_end.seed_forward},
                           {"seed_backward", cert.end_to_end.seed_backward},
                           {"trials", cert.end_to_end.trials},
                           {"failures_forward", cert.end_to_end.failures_forward},
                           {"failures_backward", cert.end_to_end.failures_backward}};
    return j;
}

template <field_type F>
std::string emit_certificate(const ChainCertificate<F>& cert) {
    return certificate_to_json(cert).dump(1) + "\n";
}

/// Field-agnostic peek, so the caller can select the field before the
/// templated parse.
inline FieldSpec certificate_field(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw parse_error(std::string("certificate is not valid JSON: ") + e.what());
    }
    if (!j.contains("field")) throw parse_error("certificate has no field entry");
    return detail::field_from_json(j.at("field"));
}

template <field_type F>
ChainCertificate<F> parse_certificate(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw parse_error(std::string("certificate is not valid JSON: ") + e.what());
    }
    try {
        if (detail::get_field<std::string>(j, "format") != kCertificateFormat)
            throw parse_error("not a chain certificate");
        if (detail::get_field<int>(j, "version") != kCertificateVersion) throw parse_error("unsupported version");

        ChainCertificate<F> cert;
        cert.field = detail::field_from_json(j.at("field"));
        const json& input = j.at("input");
        cert.r = detail::get_field<int>(input, "r");
        cert.n = detail::get_field<int>(input, "n");
        if (cert.r < 0 || cert.n < 1) throw parse_error("certificate has bad dimensions");
        cert.L = detail::system_from_texts<F>(detail::get_field<std::vector<std::string>>(input, "L"), cert.r + 1,
                                              's', "L");
        cert.G = detail::system_from_texts<F>(detail::get_field<std::vector<std::string>>(input, "G"), cert.r + 1,
                                              's', "G");
        cert.perm_L = detail::get_field<std::vector<int>>(j, "perm_L");
        cert.perm_G = detail::get_field<std::vector<int>>(j, "perm_G");
        cert.seed = detail::get_field<u64>(j, "seed");
        cert.trials = detail::get_field<int>(j, "trials");
        cert.k_max = detail::get_field<int>(j, "k_max");
        cert.injectivity_L = detail::get_field<std::string>(j.at("injectivity"), "L");
        cert.injectivity_G = detail::get_field<std::string>(j.at("injectivity"), "G");
        if (!j.at("early_termination").is_null())
            cert.early_termination_step = detail::get_field<int>(j.at("early_termination"), "at_step");

        const int n = cert.n;
        for (const auto& js : j.at("steps")) {
            ChainStep<F> s;
            s.index = detail::get_field<int>(js, "i");
            s.k = detail::get_field<int>(js, "k");
            s.q2 = ProjPoint<F>(detail::tuple_from_json<F>(js.at("q2")));
            const json& surf = js.at("S");
            s.S.n = n;
            s.S.k = s.k;
            s.S.a = MultiPoly<F>::parse(detail::get_field<std::string>(surf, "a"), n, 'x', s.k - 2);
            s.S.b = MultiPoly<F>::parse(detail::get_field<std::string>(surf, "b"), n, 'x', s.k - 1);
            s.S.c = MultiPoly<F>::parse(detail::get_field<std::string>(surf, "c"), n, 'x', s.k - 1);
            s.S.d = MultiPoly<F>::parse(detail::get_field<std::string>(surf, "d"), n, 'x', s.k);
            s.S.adaptation = detail::matrix_from_json<F>(surf.at("adaptation"));
            s.S.w1_sample = detail::tuple_from_json<F>(surf.at("w1_sample"));
            s.S.w2_sample = detail::tuple_from_json<F>(surf.at("w2_sample"));
            s.S.w3_point = detail::tuple_from_json<F>(surf.at("w3_point"));
            s.S.holdout_checks = detail::get_field<int>(surf, "holdout_checks");
            std::vector<MultiPoly<F>> fwd, bwd;
            for (const auto& cj : js.at("forward"))
                fwd.push_back(MultiPoly<F>::parse(cj.get<std::string>(), n + 1, 'x', s.k));
            for (const auto& cj : js.at("backward"))
                bwd.push_back(MultiPoly<F>::parse(cj.get<std::string>(), n + 1, 'x', s.k));
            s.phi.forward = RationalMap<F>(std::move(fwd));
            s.phi.backward = RationalMap<F>(std::move(bwd));
            s.phi.surface = s.S;
            s.A_next = detail::system_from_texts<F>(detail::get_field<std::vector<std::string>>(js, "A_next"),
                                                    cert.r + 1, 's', "A" + std::to_string(s.index + 1));
            const json& tr = js.at("transcript");
            s.transcript.seed = detail::get_field<u64>(tr, "seed");
            s.transcript.trials = detail::get_field<int>(tr, "trials");
            s.transcript.failures = detail::get_field<int>(tr, "failures");
            s.transcript.q2_attempts = detail::get_field<int>(tr, "q2_attempts");
            s.transcript.resamples = detail::get_field<long>(tr, "resamples");
            const json& rt = tr.at("roundtrip");
            s.transcript.roundtrip.seed = detail::get_field<u64>(rt, "seed");
            s.transcript.roundtrip.trials = detail::get_field<int>(rt, "trials");
            s.transcript.roundtrip.failures = detail::get_field<int>(rt, "failures");
            s.transcript.roundtrip.resamples = detail::get_field<long>(rt, "resamples");
            cert.steps.push_back(std::move(s));
        }
        const json& e2e = j.at("end_to_end");
        cert.end_to_end.seed_forward = detail::get_field<u64>(e2e, "seed_forward");
        cert.end_to_end.seed_backward = detail::get_field<u64>(e2e, "seed_backward");
        cert.end_to_end.trials = detail::get_field<int>(e2e, "trials");
        cert.end_to_end.failures_forward = detail::get_field<int>(e2e, "failures_forward");
        cert.end_to_end.failures_backward = detail::get_field<int>(e2e, "failures_backward");
        return cert;
    } catch (const json::exception& e) {
        throw parse_error(std::string("malformed certificate: ") + e.what());
    }
}

}  // namespace cremona
