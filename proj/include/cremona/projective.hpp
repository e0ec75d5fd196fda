#pragma once

// Projective points, rational maps as form-tuples, projections from points,
// composition, and probabilistic map equality.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cremona/errors.hpp"
#include "cremona/fields.hpp"
#include "cremona/multipoly.hpp"
#include "cremona/rng.hpp"

namespace cremona {

inline constexpr int kDefaultBaseLocusCap = 64;

template <field_type F>
bool all_zero(std::span<const F> v) {
    for (const F& x : v)
        if (!x.is_zero()) return false;
    return true;
}

/// True when a and b span the same line (are proportional), zero patterns
/// included. Both must be nonzero tuples of equal length.
template <field_type F>
bool proportional(std::span<const F> a, std::span<const F> b) {
    if (a.size() != b.size()) return false;
    std::size_t lead = a.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i].is_zero()) != (b[i].is_zero())) return false;
        if (lead == a.size() && !a[i].is_zero()) lead = i;
    }
    if (lead == a.size()) return false;  // both identically zero
    for (std::size_t j = 0; j < a.size(); ++j)
        if (!(a[lead] * b[j] == a[j] * b[lead])) return false;
    return true;
}

template <field_type F>
struct ProjPoint {
    std::vector<F> coords;

    ProjPoint() = default;
    explicit ProjPoint(std::vector<F> c) : coords(std::move(c)) {
        if (all_zero<F>(coords)) throw error("projective point cannot be the zero tuple");
    }

    int dim() const { return int(coords.size()) - 1; }

    /// Canonical representative: first nonzero coordinate scaled to one.
    ProjPoint normalized() const {
        std::size_t lead = 0;
        while (coords[lead].is_zero()) ++lead;
        F inv = coords[lead].inverse();
        std::vector<F> c(coords);
        for (F& x : c) x = x * inv;
        return ProjPoint(std::move(c));
    }

    bool operator==(const ProjPoint& o) const {
        return proportional<F>(coords, o.coords);
    }
};

template <field_type F>
ProjPoint<F> coordinate_vertex(int dim, int index) {
    std::vector<F> c(std::size_t(dim) + 1, F::zero());
    c[std::size_t(index)] = F::one();
    return ProjPoint<F>(std::move(c));
}

/// A rational map P^m -> P^m' given by m'+1 forms of one common degree in
/// m+1 variables. Zero components are allowed (and keep the common degree
/// as their annotation); at least one component must be nonzero.
template <field_type F>
struct RationalMap {
    std::vector<MultiPoly<F>> components;

    RationalMap() = default;
    explicit RationalMap(std::vector<MultiPoly<F>> comps) : components(std::move(comps)) { validate(); }

    void validate() const {
        if (components.empty()) throw error("rational map needs at least one component");
        int nv = components.front().num_vars();
        int d = components.front().degree();
        bool nonzero = false;
        for (const auto& c : components) {
            if (c.num_vars() != nv || c.degree() != d)
                throw error("rational map components must share variables and degree");
            nonzero = nonzero || !c.is_zero();
        }
        if (!nonzero) throw error("rational map cannot be identically zero");
    }

    int source_dim() const { return components.front().num_vars() - 1; }
    int target_dim() const { return int(components.size()) - 1; }
    int degree() const { return components.front().degree(); }

    static RationalMap identity(int dim) {
        std::vector<MultiPoly<F>> comps;
        for (int i = 0; i <= dim; ++i) comps.push_back(MultiPoly<F>::variable(dim + 1, i));
        return RationalMap(std::move(comps));
    }

    std::vector<F> eval(std::span<const F> point) const {
        std::vector<F> out;
        out.reserve(components.size());
        for (const auto& c : components) out.push_back(c.eval(point));
        return out;
    }
};

template <field_type F>
std::optional<ProjPoint<F>> try_apply(const RationalMap<F>& f, const ProjPoint<F>& p) {
    auto v = f.eval(std::span<const F>(p.coords));
    if (all_zero<F>(v)) return std::nullopt;
    return ProjPoint<F>(std::move(v));
}

template <field_type F>
ProjPoint<F> apply(const RationalMap<F>& f, const ProjPoint<F>& p) {
    auto r = try_apply(f, p);
    if (!r) throw base_locus_error("point lies in the base locus of the map");
    return *r;
}

/// Projection P^m -> P^{m-1} from a point q. The components are the m
/// linear forms x_j - (q_j/q_p) x_p for j != p in increasing j, where p is
/// the largest index with q_p != 0; this deterministic completion makes
/// certificates reproducible.
template <field_type F>
RationalMap<F> projection_from_point(const ProjPoint<F>& q) {
    const auto& c = q.coords;
    int m = q.dim();
    if (m < 1) throw error("projection needs ambient dimension >= 1");
    std::size_t p = c.size();
    for (std::size_t i = c.size(); i-- > 0;) {
        if (!c[i].is_zero()) {
            p = i;
            break;
        }
    }
    F inv = c[p].inverse();
    std::vector<MultiPoly<F>> comps;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (j == p) continue;
        MultiPoly<F> form = MultiPoly<F>::variable(m + 1, int(j));
        if (!c[j].is_zero())
            form = form - MultiPoly<F>::variable(m + 1, int(p)).scaled(c[j] * inv);
        comps.push_back(std::move(form));
    }
    return RationalMap<F>(std::move(comps));
}

/// g after f, by symbolic substitution of f's components into g.
template <field_type F>
RationalMap<F> compose(const RationalMap<F>& g, const RationalMap<F>& f) {
    if (f.target_dim() != g.source_dim()) throw error("compose: dimension mismatch");
    std::vector<MultiPoly<F>> comps;
    comps.reserve(g.components.size());
    bool nonzero = false;
    for (const auto& gc : g.components) {
        comps.push_back(gc.compose(f.components));
        nonzero = nonzero || !comps.back().is_zero();
    }
    if (!nonzero)
        throw identically_zero_error("composition is identically zero: the first map lands in the base locus of the second");
    return RationalMap<F>(std::move(comps));
}

/// f(M x): precompose with a linear change of source coordinates.
template <field_type F>
RationalMap<F> precompose_linear(const RationalMap<F>& f, const Matrix<F>& m) {
    std::vector<MultiPoly<F>> comps;
    comps.reserve(f.components.size());
    for (const auto& c : f.components) comps.push_back(c.substitute_linear(m));
    return RationalMap<F>(std::move(comps));
}

/// M applied to the component tuple: linear change of target coordinates.
template <field_type F>
RationalMap<F> postcompose_linear(const Matrix<F>& m, const RationalMap<F>& f) {
    if (m.cols() != f.components.size()) throw error("postcompose_linear: dimension mismatch");
    std::vector<MultiPoly<F>> comps;
    int nv = f.components.front().num_vars();
    int d = f.degree();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        MultiPoly<F> acc = MultiPoly<F>::zero(nv, d);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m.at(i, j).is_zero()) continue;
            acc = acc + f.components[j].scaled(m.at(i, j));
        }
        comps.push_back(std::move(acc));
    }
    return RationalMap<F>(std::move(comps));
}

template <field_type F>
std::vector<F> random_tuple(int len, Rng& rng, bool allow_zero = false) {
    std::vector<F> v;
    v.reserve(std::size_t(len));
    for (int i = 0; i < len; ++i) v.push_back(allow_zero ? F::random(rng) : F::random_nonzero(rng));
    return v;
}

template <field_type F>
ProjPoint<F> random_proj_point(int dim, Rng& rng) {
    return ProjPoint<F>(random_tuple<F>(dim + 1, rng));
}

/// Outcome of a randomized projective equality test. `equal` false comes
/// with a concrete witness point; `equal` true is probabilistic, with a
/// per-trial failure bound degree_bound / sample_space.
template <field_type F>
struct EqualityVerdict {
    bool equal = false;
    int trials = 0;
    long resamples = 0;
    int degree_bound = 0;
    u64 sample_space = 0;
    std::optional<std::vector<F>> witness;
};

template <field_type F>
EqualityVerdict<F> maps_equal_projective(const RationalMap<F>& f, const RationalMap<F>& g, int trials, Rng& rng,
                                         int base_locus_cap = kDefaultBaseLocusCap) {
    if (f.source_dim() != g.source_dim() || f.target_dim() != g.target_dim())
        throw error("maps_equal_projective: dimension mismatch");
    EqualityVerdict<F> verdict;
    verdict.trials = trials;
    verdict.degree_bound = f.degree() + g.degree();
    verdict.sample_space = F::sample_space_size();
    for (int t = 0; t < trials; ++t) {
        std::vector<F> point, fv, gv;
        int attempts = 0;
        for (;;) {
            point = random_tuple<F>(f.source_dim() + 1, rng);
            fv = f.eval(std::span<const F>(point));
            gv = g.eval(std::span<const F>(point));
            if (!all_zero<F>(fv) && !all_zero<F>(gv)) break;
            ++verdict.resamples;
            if (++attempts >= base_locus_cap)
                throw retry_exhausted("maps_equal_projective: base-locus resample cap hit");
        }
        if (!proportional<F>(fv, gv)) {
            verdict.equal = false;
            verdict.witness = point;
            return verdict;
        }
    }
    verdict.equal = true;
    return verdict;
}

template <field_type F>
struct InjectivityVerdict {
    bool collision_found = false;
    long pairs = 0;
    std::optional<std::pair<std::vector<F>, std::vector<F>>> witness;
};

/// Necessary-condition sampling for "birational onto the image": flags a
/// pair of projectively distinct sources with proportional images. Finding
/// no collision proves nothing; it is recorded, not relied upon.
template <field_type F>
InjectivityVerdict<F> generic_injectivity_heuristic(const RationalMap<F>& f, int pairs, Rng& rng,
                                                    int base_locus_cap = kDefaultBaseLocusCap) {
    InjectivityVerdict<F> verdict;
    verdict.pairs = pairs;
    for (int t = 0; t < pairs; ++t) {
        std::vector<F> p, q, fp, fq;
        int attempts = 0;
        for (;;) {
            p = random_tuple<F>(f.source_dim() + 1, rng);
            q = random_tuple<F>(f.source_dim() + 1, rng);
            fp = f.eval(std::span<const F>(p));
            fq = f.eval(std::span<const F>(q));
            if (!all_zero<F>(fp) && !all_zero<F>(fq)) break;
            if (++attempts >= base_locus_cap)
                throw retry_exhausted("generic_injectivity_heuristic: base-locus resample cap hit");
        }
        if (proportional<F>(fp, fq) && !proportional<F>(std::span<const F>(p), std::span<const F>(q))) {
            verdict.collision_found = true;
            verdict.witness = {p, q};
            return verdict;
        }
    }
    return verdict;
}

}  // namespace cremona
