#pragma once

// Degree-k hypersurfaces of P^{n+1} that contain a sampled variety Y and
// have multiplicity exactly k-1 at two prescribed points. In coordinates
// adapted so the points are the last two vertices, such a hypersurface is
//
//     S = a * x_n * x_{n+1} + b * x_{n+1} + c * x_n + d
//
// with a, b, c, d forms of degree k-2, k-1, k-1, k in x_0..x_{n-1}: every
// monomial is at most linear in each of x_n, x_{n+1}, so the multiplicity
// bound holds structurally and containment of Y becomes exact linear
// algebra on the coefficients. Exactness of the multiplicity and the
// non-degeneracy the downstream map construction needs are certified by
// the recorded witnesses:
//
//   W1:  u = a*x_n + b      nonzero at a recorded sample of Y,
//   W2:  w = a*x_{n+1} + c  nonzero at a recorded sample of Y,
//   W3:  b*c - a*d          nonzero at a recorded point.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cremona/errors.hpp"
#include "cremona/linalg.hpp"
#include "cremona/multipoly.hpp"
#include "cremona/projective.hpp"
#include "cremona/rng.hpp"

namespace cremona {

inline constexpr int kDefaultKMax = 12;
inline constexpr int kDefaultSolutionRetryCap = 16;
inline constexpr int kDefaultHoldoutCount = 100;

/// Number of free coefficients in the bi-monoid ansatz of degree k on
/// P^{n+1}: dim of forms of degree k-2, k-1, k-1, k in n variables.
inline std::size_t bimonoid_ansatz_dimension(int n, int k) {
    if (n < 1 || k < 2) throw error("bimonoid ansatz needs n >= 1, k >= 2");
    auto dim_forms = [n](int d) {
        // C(d + n - 1, n - 1)
        u64 num = 1, den = 1;
        for (int i = 1; i <= n - 1; ++i) {
            num *= u64(d + i);
            den *= u64(i);
        }
        return std::size_t(num / den);
    };
    return dim_forms(k - 2) + 2 * dim_forms(k - 1) + dim_forms(k);
}

template <field_type F>
struct BiMonoidSurface {
    int n = 0;  // the Cremona map will live on P^n; S sits in P^{n+1}
    int k = 0;  // degree of S, >= 2
    MultiPoly<F> a, b, c, d;  // forms in the first n adapted variables
    Matrix<F> adaptation;     // columns: chart basis of P^{n+1}; col n ~ q2, col n+1 ~ q1
    std::vector<F> w1_sample;  // adapted point of Y with u != 0
    std::vector<F> w2_sample;  // adapted point of Y with w != 0
    std::vector<F> w3_point;   // n-tuple with b*c - a*d != 0
    int holdout_checks = 0;

    /// u = a*x_n + b as a form in the n+1 variables x_0..x_n.
    MultiPoly<F> u_poly() const {
        return a.extended(n + 1) * MultiPoly<F>::variable(n + 1, n) + b.extended(n + 1);
    }

    /// w = a*y + c in the n+1 variables x_0..x_{n-1}, y.
    MultiPoly<F> w_poly() const {
        return a.extended(n + 1) * MultiPoly<F>::variable(n + 1, n) + c.extended(n + 1);
    }

    /// b*c - a*d, the degeneracy guard, in the first n variables.
    MultiPoly<F> degeneracy_poly() const { return b * c - a * d; }

    /// S itself, in the n+2 adapted variables.
    MultiPoly<F> expand() const {
        auto xn = MultiPoly<F>::variable(n + 2, n);
        auto xn1 = MultiPoly<F>::variable(n + 2, n + 1);
        return a.extended(n + 2) * xn * xn1 + b.extended(n + 2) * xn1 + c.extended(n + 2) * xn + d.extended(n + 2);
    }

    F eval_adapted(std::span<const F> z) const {
        if (int(z.size()) != n + 2) throw error("adapted sample has wrong length");
        std::span<const F> prefix = z.first(std::size_t(n));
        return a.eval(prefix) * z[std::size_t(n)] * z[std::size_t(n) + 1] + b.eval(prefix) * z[std::size_t(n) + 1] +
               c.eval(prefix) * z[std::size_t(n)] + d.eval(prefix);
    }

    void validate() const {
        if (k < 2) throw degenerate_surface_error("bi-monoid surface needs k >= 2");
        if (n < 1) throw degenerate_surface_error("bi-monoid surface needs n >= 1");
        if (a.num_vars() != n || b.num_vars() != n || c.num_vars() != n || d.num_vars() != n)
            throw degenerate_surface_error("coefficient forms must live in the first n variables");
        if (a.degree() != k - 2 || b.degree() != k - 1 || c.degree() != k - 1 || d.degree() != k)
            throw degenerate_surface_error("coefficient form degrees must be k-2, k-1, k-1, k");
        if (int(adaptation.rows()) != n + 2 || int(adaptation.cols()) != n + 2 || !is_invertible(adaptation))
            throw degenerate_surface_error("adaptation must be an invertible change of P^{n+1} coordinates");
        // stored witnesses must re-evaluate nonzero
        auto check_point = [&](const std::vector<F>& z, const MultiPoly<F>& poly, std::size_t take, const char* what) {
            if (z.size() < take) throw degenerate_surface_error(std::string(what) + " witness has wrong length");
            std::vector<F> args(z.begin(), z.begin() + long(take));
            if (poly.eval(args).is_zero()) throw degenerate_surface_error(std::string(what) + " witness re-evaluates to zero");
        };
        check_point(w1_sample, u_poly(), std::size_t(n) + 1, "W1");
        if (w2_sample.size() != std::size_t(n) + 2) throw degenerate_surface_error("W2 witness has wrong length");
        {
            std::vector<F> args(w2_sample.begin(), w2_sample.begin() + n);
            args.push_back(w2_sample[std::size_t(n) + 1]);
            if (w_poly().eval(args).is_zero()) throw degenerate_surface_error("W2 witness re-evaluates to zero");
        }
        check_point(w3_point, degeneracy_poly(), std::size_t(n), "W3");
    }
};

/// Invertible change of coordinates on P^{n+1} sending the last two
/// standard vertices to q2 and q1: column n is q2, column n+1 is q1, and
/// the remaining columns are the first standard basis vectors that keep
/// the matrix invertible (scanned in index order). When q1 is already the
/// last vertex the last coordinate is fixed.
template <field_type F>
Matrix<F> adapt_coordinates(const ProjPoint<F>& q1, const ProjPoint<F>& q2, int n) {
    if (q1.dim() != n + 1 || q2.dim() != n + 1) throw error("adapt_coordinates: points must live in P^{n+1}");
    if (q1 == q2) throw coincident_points_error("adapt_coordinates: q1 and q2 coincide");
    const std::size_t m = std::size_t(n) + 2;
    std::vector<std::vector<F>> cols;
    auto independent = [&](const std::vector<F>& cand) {
        Matrix<F> mat(cols.size() + 1, m);
        for (std::size_t i = 0; i < cols.size(); ++i)
            for (std::size_t j = 0; j < m; ++j) mat.at(i, j) = cols[i][j];
        for (std::size_t j = 0; j < m; ++j) mat.at(cols.size(), j) = cand[j];
        return rank(std::move(mat)) == cols.size() + 1;
    };
    cols.push_back(q2.normalized().coords);
    cols.push_back(q1.normalized().coords);
    std::vector<std::vector<F>> fill;
    for (std::size_t j = 0; j < m && fill.size() + 2 < m; ++j) {
        std::vector<F> e(m, F::zero());
        e[j] = F::one();
        if (independent(e)) {
            cols.push_back(e);
            fill.push_back(std::move(e));
        }
    }
    if (fill.size() + 2 != m) throw error("adapt_coordinates: basis completion failed");
    Matrix<F> result(m, m);
    for (std::size_t j = 0; j < fill.size(); ++j)
        for (std::size_t i = 0; i < m; ++i) result.at(i, j) = fill[j][i];
    for (std::size_t i = 0; i < m; ++i) result.at(i, m - 2) = cols[0][i];
    for (std::size_t i = 0; i < m; ++i) result.at(i, m - 1) = cols[1][i];
    return result;
}

enum class InterpolateStatus { ok, no_solution, witness_failure };

template <field_type F>
struct InterpolateResult {
    InterpolateStatus status = InterpolateStatus::no_solution;
    std::optional<BiMonoidSurface<F>> surface;
    std::size_t nullspace_dim = 0;
};

/// Exact interpolation inside the bi-monoid ansatz: assembles the matrix
/// of ansatz-monomial values at the samples (already in adapted
/// coordinates), picks a random nullspace element, and retries until the
/// witnesses W1-W3 hold. Hold-out samples guard against spurious kernel
/// vectors.
template <field_type F>
InterpolateResult<F> interpolate(const std::vector<std::vector<F>>& samples,
                                 const std::vector<std::vector<F>>& holdouts, int k, int n,
                                 const Matrix<F>& adaptation, Rng& rng,
                                 int retry_cap = kDefaultSolutionRetryCap) {
    if (k < 2) throw error("interpolate: k must be >= 2");
    const auto mon_a = monomials_of_degree(n, k - 2);
    const auto mon_b = monomials_of_degree(n, k - 1);
    const auto mon_d = monomials_of_degree(n, k);
    const std::size_t na = mon_a.size(), nb = mon_b.size(), nd = mon_d.size();
    const std::size_t cols = na + 2 * nb + nd;

    Matrix<F> mat(samples.size(), cols);
    for (std::size_t r = 0; r < samples.size(); ++r) {
        const auto& z = samples[r];
        if (int(z.size()) != n + 2) throw error("interpolate: sample has wrong length");
        const F& zn = z[std::size_t(n)];
        const F& zn1 = z[std::size_t(n) + 1];
        std::vector<std::vector<F>> pows{std::size_t(n)};
        for (int v = 0; v < n; ++v) {
            pows[std::size_t(v)] = {F::one()};
            while (int(pows[std::size_t(v)].size()) <= k)
                pows[std::size_t(v)].push_back(pows[std::size_t(v)].back() * z[std::size_t(v)]);
        }
        auto mono_val = [&](const Expo& e) {
            F t = F::one();
            for (std::size_t v = 0; v < e.size(); ++v)
                if (e[v]) t *= pows[v][e[v]];
            return t;
        };
        std::size_t c0 = 0;
        for (const auto& e : mon_a) mat.at(r, c0++) = mono_val(e) * zn * zn1;
        for (const auto& e : mon_b) mat.at(r, c0++) = mono_val(e) * zn1;
        for (const auto& e : mon_b) mat.at(r, c0++) = mono_val(e) * zn;
        for (const auto& e : mon_d) mat.at(r, c0++) = mono_val(e);
    }
    auto basis = nullspace(std::move(mat));

    InterpolateResult<F> result;
    result.nullspace_dim = basis.size();
    if (basis.empty()) {
        result.status = InterpolateStatus::no_solution;
        return result;
    }

    auto build_poly = [&](const std::vector<F>& v, std::size_t offset, const std::vector<Expo>& mons, int deg) {
        std::map<Expo, F> terms;
        for (std::size_t i = 0; i < mons.size(); ++i)
            if (!v[offset + i].is_zero()) terms.emplace(mons[i], v[offset + i]);
        const bool empty = terms.empty();
        return MultiPoly<F>::from_terms(n, std::move(terms), empty ? deg : -1);
    };

    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        // random combination of the kernel basis; generic picks pass the witnesses
        std::vector<F> v(cols, F::zero());
        bool nonzero = false;
        for (const auto& bvec : basis) {
            F coeff = F::random(rng);
            if (coeff.is_zero()) continue;
            nonzero = true;
            for (std::size_t i = 0; i < cols; ++i) v[i] += coeff * bvec[i];
        }
        if (!nonzero) continue;

        BiMonoidSurface<F> s;
        s.n = n;
        s.k = k;
        s.adaptation = adaptation;
        s.a = build_poly(v, 0, mon_a, k - 2);
        s.b = build_poly(v, na, mon_b, k - 1);
        s.c = build_poly(v, na + nb, mon_b, k - 1);
        s.d = build_poly(v, na + 2 * nb, mon_d, k);

        bool clean = true;
        for (const auto& z : holdouts)
            if (!s.eval_adapted(z).is_zero()) {
                clean = false;
                break;
            }
        if (!clean) continue;
        s.holdout_checks = int(holdouts.size());

        auto find_sample = [&](auto&& pred) -> std::optional<std::vector<F>> {
            for (const auto& z : samples)
                if (pred(z)) return z;
            for (const auto& z : holdouts)
                if (pred(z)) return z;
            return std::nullopt;
        };
        auto u = s.u_poly();
        auto w1 = find_sample([&](const std::vector<F>& z) {
            std::vector<F> args(z.begin(), z.begin() + (n + 1));
            return !u.eval(args).is_zero();
        });
        if (!w1) continue;
        auto w = s.w_poly();
        auto w2 = find_sample([&](const std::vector<F>& z) {
            std::vector<F> args(z.begin(), z.begin() + n);
            args.push_back(z[std::size_t(n) + 1]);
            return !w.eval(args).is_zero();
        });
        if (!w2) continue;
        auto guard = s.degeneracy_poly();
        std::optional<std::vector<F>> w3;
        if (!guard.is_zero()) {
            for (int t = 0; t < 32 && !w3; ++t) {
                auto pt = random_tuple<F>(n, rng);
                if (!guard.eval(pt).is_zero()) w3 = pt;
            }
        }
        if (!w3) continue;

        s.w1_sample = *w1;
        s.w2_sample = *w2;
        s.w3_point = *w3;
        result.status = InterpolateStatus::ok;
        result.surface = std::move(s);
        return result;
    }
    result.status = InterpolateStatus::witness_failure;
    return result;
}

/// Searches the smallest k in [2, k_max] whose ansatz admits a surface
/// through the sampled variety with valid witnesses. The sampler must
/// produce points of Y in the original P^{n+1} coordinates; adaptation is
/// applied here. Requires dim Y <= n-2 for the dimension count to win.
///
/// A witness failure also advances k: when Y lies in {x_{n+1} = 0} the
/// small-k kernels are exactly the reducible surfaces u * x_{n+1}, which
/// can never pass W2, while larger k admits honest solutions. Only if no
/// k in range passes at all is the failure reported (empty kernels
/// everywhere as KMaxExceeded, otherwise as a witness failure so the
/// caller can resample q2).
template <field_type F>
std::pair<int, BiMonoidSurface<F>> find_min_k(const std::function<std::vector<F>(Rng&)>& sample_y,
                                              const ProjPoint<F>& q1, const ProjPoint<F>& q2, int n, int k_max,
                                              Rng& rng, int retry_cap = kDefaultSolutionRetryCap,
                                              int holdout_count = kDefaultHoldoutCount) {
    Matrix<F> adaptation = adapt_coordinates(q1, q2, n);
    Matrix<F> inv = inverse(adaptation);
    auto sample_adapted = [&](Rng& r) { return inv.apply(sample_y(r)); };
    bool saw_witness_failure = false;
    for (int k = 2; k <= k_max; ++k) {
        const std::size_t want = 2 * bimonoid_ansatz_dimension(n, k);
        std::vector<std::vector<F>> samples, holdouts;
        samples.reserve(want);
        for (std::size_t i = 0; i < want; ++i) samples.push_back(sample_adapted(rng));
        for (int i = 0; i < holdout_count; ++i) holdouts.push_back(sample_adapted(rng));
        auto res = interpolate(samples, holdouts, k, n, adaptation, rng, retry_cap);
        if (res.status == InterpolateStatus::ok) return {k, std::move(*res.surface)};
        saw_witness_failure = saw_witness_failure || res.status == InterpolateStatus::witness_failure;
    }
    if (saw_witness_failure)
        throw witness_failure_error("no non-degenerate bi-monoid surface for k <= " + std::to_string(k_max) +
                                    "; configuration looks special");
    throw k_max_exceeded_error("no bi-monoid surface found for k <= " + std::to_string(k_max));
}

}  // namespace cremona
