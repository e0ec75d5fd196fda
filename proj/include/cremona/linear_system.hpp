#pragma once

// The linear-system calculus: ordered tuples of forms of common degree on
// the parameter space, product systems, zero-padding, and equality of the
// induced maps up to a common divisor.

#include <string>
#include <vector>

#include "cremona/errors.hpp"
#include "cremona/multipoly.hpp"
#include "cremona/projective.hpp"
#include "cremona/rng.hpp"

namespace cremona {

/// Ordered tuple of forms of one common degree in r+1 parameter variables.
/// Zero entries are allowed and keep the common degree as annotation; the
/// entry order is significant, it fixes coordinates on the target space.
template <field_type F>
struct LinearSystem {
    int param_vars = 0;  // r+1
    int degree = 0;
    std::vector<MultiPoly<F>> entries;
    std::string label;

    LinearSystem() = default;
    LinearSystem(std::vector<MultiPoly<F>> e, std::string lbl = {}) : entries(std::move(e)), label(std::move(lbl)) {
        if (entries.empty()) throw error("linear system needs at least one entry");
        param_vars = entries.front().num_vars();
        degree = entries.front().degree();
        validate();
    }

    void validate() const {
        bool nonzero = false;
        for (const auto& f : entries) {
            if (f.num_vars() != param_vars || f.degree() != degree)
                throw error("linear system entries must share variables and degree");
            nonzero = nonzero || !f.is_zero();
        }
        if (!nonzero) throw all_zero_error("linear system cannot be identically zero");
    }

    std::size_t size() const { return entries.size(); }

    RationalMap<F> induced_map() const { return RationalMap<F>(entries); }

    std::vector<F> eval(std::span<const F> params) const {
        std::vector<F> out;
        out.reserve(entries.size());
        for (const auto& f : entries) out.push_back(f.eval(params));
        return out;
    }
};

/// All pairwise products L_i G_j in row-major order; duplicates are kept,
/// the tuple indexes coordinates of the ambient space.
template <field_type F>
LinearSystem<F> product_system(const LinearSystem<F>& l, const LinearSystem<F>& g) {
    if (l.param_vars != g.param_vars) throw error("product_system: parameter variable mismatch");
    std::vector<MultiPoly<F>> entries;
    entries.reserve(l.size() * g.size());
    for (const auto& li : l.entries)
        for (const auto& gj : g.entries) entries.push_back(li * gj);
    return LinearSystem<F>(std::move(entries), l.label + "+" + g.label);
}

/// Extends with explicit zero entries of the common degree up to index n.
template <field_type F>
LinearSystem<F> pad_zeros(const LinearSystem<F>& g, int n) {
    if (int(g.size()) > n + 1) throw error("pad_zeros: system longer than target length");
    LinearSystem<F> r = g;
    while (int(r.size()) < n + 1) r.entries.push_back(MultiPoly<F>::zero(g.param_vars, g.degree));
    return r;
}

/// The subsystem {L_j G_0}. When G_0 = 0 the first nonzero entry of G is
/// used instead; with no nonzero entry at all this is AllZero.
template <field_type F>
LinearSystem<F> sub_system_A0(const LinearSystem<F>& l, const LinearSystem<F>& g) {
    if (l.param_vars != g.param_vars) throw error("sub_system_A0: parameter variable mismatch");
    std::size_t j0 = 0;
    while (j0 < g.size() && g.entries[j0].is_zero()) ++j0;
    if (j0 == g.size()) throw all_zero_error("sub_system_A0: no nonzero entry to multiply by");
    std::vector<MultiPoly<F>> entries;
    entries.reserve(l.size());
    for (const auto& li : l.entries) entries.push_back(li * g.entries[j0]);
    return LinearSystem<F>(std::move(entries), l.label + "_G0");
}

/// Randomized test that two systems induce the same map of the parameter
/// space (equality up to a common divisor and scalar). Shorter input is
/// zero-padded first.
template <field_type F>
EqualityVerdict<F> systems_equal_as_maps(const LinearSystem<F>& a, const LinearSystem<F>& b, int trials, Rng& rng,
                                         int base_locus_cap = kDefaultBaseLocusCap) {
    int n = int(std::max(a.size(), b.size())) - 1;
    LinearSystem<F> ap = pad_zeros(a, n);
    LinearSystem<F> bp = pad_zeros(b, n);
    EqualityVerdict<F> verdict;
    verdict.trials = trials;
    verdict.degree_bound = ap.degree + bp.degree;
    verdict.sample_space = F::sample_space_size();
    for (int t = 0; t < trials; ++t) {
        std::vector<F> point, av, bv;
        int attempts = 0;
        for (;;) {
            point = random_tuple<F>(ap.param_vars, rng);
            av = ap.eval(point);
            bv = bp.eval(point);
            if (!all_zero<F>(av) && !all_zero<F>(bv)) break;
            ++verdict.resamples;
            if (++attempts >= base_locus_cap)
                throw retry_exhausted("systems_equal_as_maps: base-locus resample cap hit");
        }
        if (!proportional<F>(av, bv)) {
            verdict.equal = false;
            verdict.witness = point;
            return verdict;
        }
    }
    verdict.equal = true;
    return verdict;
}

/// A variety presented by a rational parametrization P^r -> X, together
/// with the systems to evaluate. Sampling retries until every attached
/// system gives a valid projective point.
template <field_type F>
struct ParametrizedVariety {
    int r = 0;
    std::vector<LinearSystem<F>> systems;
    int resample_cap = kDefaultBaseLocusCap;

    std::vector<F> sample_params(Rng& rng) const {
        for (int attempt = 0; attempt < resample_cap; ++attempt) {
            auto point = random_tuple<F>(r + 1, rng);
            bool ok = true;
            for (const auto& sys : systems) {
                auto vals = sys.eval(point);
                if (all_zero<F>(vals)) {
                    ok = false;
                    break;
                }
            }
            if (ok) return point;
        }
        throw retry_exhausted("parameter sampling: resample cap hit (malformed input?)");
    }
};

}  // namespace cremona
