#pragma once

// Sparse exact-coefficient homogeneous multivariate polynomials. The
// universal currency of the library: forms on parameter space, linear
// systems, hypersurfaces and map components are all MultiPoly values.
//
// Representation: exponent-vector -> nonzero coefficient, keyed by a
// std::map so term order (and therefore printing) is canonical. The zero
// polynomial keeps an explicit degree annotation.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cremona/errors.hpp"
#include "cremona/fields.hpp"
#include "cremona/linalg.hpp"

namespace cremona {

using Expo = std::vector<std::uint32_t>;

inline int expo_degree(const Expo& e) {
    int d = 0;
    for (auto x : e) d += int(x);
    return d;
}

/// All exponent vectors of total degree `degree` in `vars` variables, in
/// descending lexicographic order (highest x0-power first).
inline std::vector<Expo> monomials_of_degree(int vars, int degree) {
    if (vars <= 0 || degree < 0) throw error("monomials_of_degree: bad arguments");
    std::vector<Expo> out;
    Expo cur(std::size_t(vars), 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == vars - 1) {
            cur[std::size_t(pos)] = std::uint32_t(remaining);
            out.push_back(cur);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            cur[std::size_t(pos)] = std::uint32_t(e);
            self(self, pos + 1, remaining - e);
        }
    };
    rec(rec, 0, degree);
    return out;
}

template <field_type F>
class MultiPoly {
public:
    MultiPoly() = default;

    static MultiPoly zero(int num_vars, int degree) {
        MultiPoly p;
        p.num_vars_ = num_vars;
        p.degree_ = degree;
        return p;
    }

    static MultiPoly constant(int num_vars, F c) {
        MultiPoly p = zero(num_vars, 0);
        if (!c.is_zero()) p.terms_.emplace(Expo(std::size_t(num_vars), 0), std::move(c));
        return p;
    }

    static MultiPoly variable(int num_vars, int index) {
        if (index < 0 || index >= num_vars) throw error("variable index out of range");
        MultiPoly p = zero(num_vars, 1);
        Expo e(std::size_t(num_vars), 0);
        e[std::size_t(index)] = 1;
        p.terms_.emplace(std::move(e), F::one());
        return p;
    }

    static MultiPoly monomial(int num_vars, Expo e, F c) {
        if (int(e.size()) != num_vars) throw error("monomial exponent length mismatch");
        MultiPoly p = zero(num_vars, expo_degree(e));
        if (!c.is_zero()) p.terms_.emplace(std::move(e), std::move(c));
        return p;
    }

    /// Builds from a term map, dropping zero coefficients and checking
    /// homogeneity. `degree` may be -1 to infer from the terms (zero
    /// polynomial then gets degree 0).
    static MultiPoly from_terms(int num_vars, std::map<Expo, F> terms, int degree = -1) {
        MultiPoly p;
        p.num_vars_ = num_vars;
        for (auto it = terms.begin(); it != terms.end();) {
            if (int(it->first.size()) != num_vars) throw error("exponent vector length mismatch");
            if (it->second.is_zero())
                it = terms.erase(it);
            else
                ++it;
        }
        if (terms.empty()) {
            p.degree_ = degree < 0 ? 0 : degree;
            return p;
        }
        int d = expo_degree(terms.begin()->first);
        for (const auto& [e, c] : terms)
            if (expo_degree(e) != d) throw error("polynomial is not homogeneous");
        if (degree >= 0 && degree != d) throw error("degree annotation mismatch");
        p.degree_ = d;
        p.terms_ = std::move(terms);
        return p;
    }

    int num_vars() const { return num_vars_; }
    int degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Expo, F>& terms() const { return terms_; }

    /// Max exponent of one variable across all terms.
    int degree_in_var(int v) const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, int(e[std::size_t(v)]));
        return d;
    }

    MultiPoly operator+(const MultiPoly& o) const {
        require_same_vars(o);
        if (degree_ != o.degree_) throw error("degree mismatch in polynomial addition");
        MultiPoly r = *this;
        for (const auto& [e, c] : o.terms_) {
            auto it = r.terms_.find(e);
            if (it == r.terms_.end()) {
                r.terms_.emplace(e, c);
            } else {
                it->second += c;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
        return r;
    }

    MultiPoly operator-() const {
        MultiPoly r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    MultiPoly operator-(const MultiPoly& o) const { return *this + (-o); }

    MultiPoly operator*(const MultiPoly& o) const {
        require_same_vars(o);
        MultiPoly r = zero(num_vars_, degree_ + o.degree_);
        for (const auto& [e1, c1] : terms_)
            for (const auto& [e2, c2] : o.terms_) {
                Expo e(e1);
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
                F c = c1 * c2;
                auto it = r.terms_.find(e);
                if (it == r.terms_.end()) {
                    if (!c.is_zero()) r.terms_.emplace(std::move(e), std::move(c));
                } else {
                    it->second += c;
                    if (it->second.is_zero()) r.terms_.erase(it);
                }
            }
        return r;
    }

    MultiPoly scaled(const F& s) const {
        if (s.is_zero()) return zero(num_vars_, degree_);
        MultiPoly r = *this;
        for (auto& [e, c] : r.terms_) c = c * s;
        return r;
    }

    bool operator==(const MultiPoly& o) const {
        return num_vars_ == o.num_vars_ && degree_ == o.degree_ && terms_ == o.terms_;
    }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    F eval(std::span<const F> point) const {
        if (int(point.size()) != num_vars_) throw error("evaluation point length mismatch");
        // cache powers per variable up to the needed exponent
        std::vector<std::vector<F>> pows{std::size_t(num_vars_)};
        for (int v = 0; v < num_vars_; ++v) pows[std::size_t(v)] = {F::one()};
        F acc = F::zero();
        for (const auto& [e, c] : terms_) {
            F t = c;
            for (std::size_t v = 0; v < e.size(); ++v) {
                auto& pv = pows[v];
                while (pv.size() <= e[v]) pv.push_back(pv.back() * point[v]);
                if (e[v]) t *= pv[e[v]];
            }
            acc += t;
        }
        return acc;
    }

    /// Substitutes a homogeneous form of common degree for each variable.
    /// Result degree is degree() * argument degree.
    MultiPoly compose(const std::vector<MultiPoly>& args) const {
        if (int(args.size()) != num_vars_) throw error("compose: argument count mismatch");
        int target_vars = args.empty() ? 0 : args.front().num_vars();
        int arg_degree = args.empty() ? 1 : args.front().degree();
        for (const auto& a : args)
            if (a.num_vars() != target_vars || a.degree() != arg_degree)
                throw error("compose: arguments must share variable count and degree");
        MultiPoly acc = zero(target_vars, degree_ * arg_degree);
        std::vector<std::vector<MultiPoly>> pows{std::size_t(num_vars_)};
        for (int v = 0; v < num_vars_; ++v) pows[std::size_t(v)] = {constant(target_vars, F::one())};
        for (const auto& [e, c] : terms_) {
            MultiPoly t = constant(target_vars, c);
            for (std::size_t v = 0; v < e.size(); ++v) {
                auto& pv = pows[v];
                while (pv.size() <= e[v]) pv.push_back(pv.back() * args[v]);
                if (e[v]) t = t * pv[e[v]];
            }
            acc = acc + t;
        }
        return acc;
    }

    /// f(M x): each variable is replaced by the corresponding row of M.
    MultiPoly substitute_linear(const Matrix<F>& m) const {
        if (int(m.rows()) != num_vars_ || int(m.cols()) != num_vars_)
            throw error("substitute_linear: matrix dimension mismatch");
        std::vector<MultiPoly> rows;
        rows.reserve(std::size_t(num_vars_));
        for (int i = 0; i < num_vars_; ++i) {
            MultiPoly row = zero(num_vars_, 1);
            for (int j = 0; j < num_vars_; ++j) {
                if (m.at(std::size_t(i), std::size_t(j)).is_zero()) continue;
                row = row + variable(num_vars_, j).scaled(m.at(std::size_t(i), std::size_t(j)));
            }
            rows.push_back(std::move(row));
        }
        return compose(rows);
    }

    /// Re-embeds into a larger variable ring (new variables get exponent 0).
    MultiPoly extended(int new_num_vars) const {
        if (new_num_vars < num_vars_) throw error("extended: cannot shrink variable ring");
        MultiPoly r = zero(new_num_vars, degree_);
        for (const auto& [e, c] : terms_) {
            Expo ne(e);
            ne.resize(std::size_t(new_num_vars), 0);
            r.terms_.emplace(std::move(ne), c);
        }
        return r;
    }

    std::string to_string(char var_prefix = 'x') const;
    static MultiPoly parse(std::string_view text, int num_vars, char var_prefix = 'x', int zero_degree = 0);

private:
    void require_same_vars(const MultiPoly& o) const {
        if (num_vars_ != o.num_vars_) throw error("variable count mismatch");
    }

    int num_vars_ = 0;
    int degree_ = 0;
    std::map<Expo, F> terms_;
};

template <field_type F>
std::string MultiPoly<F>::to_string(char var_prefix) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    // reverse map order = descending lex, leading term first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        std::string cs = c.to_string();
        bool neg = !cs.empty() && cs[0] == '-';
        std::string mag = neg ? cs.substr(1) : cs;
        std::string mono;
        for (std::size_t v = 0; v < e.size(); ++v) {
            if (e[v] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += var_prefix + std::to_string(v);
            if (e[v] > 1) mono += "^" + std::to_string(e[v]);
        }
        std::string body;
        if (mono.empty())
            body = mag;
        else if (mag == "1")
            body = mono;
        else
            body = mag + "*" + mono;
        if (first) {
            out += (neg ? "-" : "") + body;
            first = false;
        } else {
            out += (neg ? " - " : " + ") + body;
        }
    }
    return out;
}

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

}  // namespace detail

template <field_type F>
MultiPoly<F> MultiPoly<F>::parse(std::string_view text, int num_vars, char var_prefix, int zero_degree) {
    if (num_vars <= 0) throw parse_error("polynomial needs a positive variable count");
    std::string s;
    s.reserve(text.size());
    for (char c : text)
        if (!detail::is_space(c)) s += c;
    if (s.empty()) throw parse_error("empty polynomial");

    std::map<Expo, F> terms;
    std::size_t pos = 0;
    auto parse_uint = [&](const char* what) {
        std::size_t start = pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
        if (pos == start) throw parse_error(std::string("expected ") + what + " in '" + std::string(text) + "'");
        return s.substr(start, pos - start);
    };

    bool first_term = true;
    while (pos < s.size()) {
        bool neg = false;
        if (s[pos] == '+' || s[pos] == '-') {
            neg = s[pos] == '-';
            ++pos;
        } else if (!first_term) {
            throw parse_error("expected '+' or '-' between terms in '" + std::string(text) + "'");
        }
        first_term = false;

        F coeff = F::one();
        Expo e(std::size_t(num_vars), 0);
        bool saw_factor = false;
        bool expect_factor = true;
        while (expect_factor) {
            if (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
                std::string numstr = parse_uint("coefficient");
                if (pos < s.size() && s[pos] == '/') {
                    ++pos;
                    numstr += "/" + parse_uint("denominator");
                }
                coeff = coeff * F::parse(numstr);
                saw_factor = true;
            } else if (pos < s.size() && s[pos] == var_prefix) {
                ++pos;
                std::string idxstr = parse_uint("variable index");
                std::size_t idx = std::size_t(std::stoul(idxstr));
                if (int(idx) >= num_vars)
                    throw parse_error("variable " + std::string(1, var_prefix) + idxstr + " out of range");
                std::uint32_t exp = 1;
                if (pos < s.size() && s[pos] == '^') {
                    ++pos;
                    exp = std::uint32_t(std::stoul(parse_uint("exponent")));
                }
                e[idx] += exp;
                saw_factor = true;
            } else {
                throw parse_error("unexpected character in '" + std::string(text) + "'");
            }
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                expect_factor = true;
            } else {
                expect_factor = false;
            }
        }
        if (!saw_factor) throw parse_error("empty term in '" + std::string(text) + "'");
        if (neg) coeff = -coeff;
        if (!coeff.is_zero()) {
            auto it = terms.find(e);
            if (it == terms.end()) {
                terms.emplace(std::move(e), std::move(coeff));
            } else {
                it->second += coeff;
                if (it->second.is_zero()) terms.erase(it);
            }
        }
    }
    const bool no_terms = terms.empty();
    return from_terms(num_vars, std::move(terms), no_terms ? zero_degree : -1);
}

}  // namespace cremona
