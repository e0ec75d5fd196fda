#pragma once

// The divisorial obstruction: a hypersurface X in P^n of degree d > 1 that
// is Cremona equivalent to a hyperplane forces the pair (P^n, (n+1)/d X)
// to be non-canonical. Contrapositive, checkable exactly: if blowing up
// each listed ordinary singularity of multiplicity m gives discrepancy
// (n-1) - ((n+1)/d) m >= 0 everywhere, the embedding cannot be carried to
// a hyperplane by any Cremona transformation. Also ships the generator for
// the classical family of examples: rational plane curves with ordinary
// double points, obtained by projecting a curve of bidegree (1,a) on a
// smooth quadric.

#include <string>
#include <vector>

#include "cremona/errors.hpp"
#include "cremona/fields.hpp"
#include "cremona/linear_system.hpp"
#include "cremona/multipoly.hpp"
#include "cremona/projective.hpp"
#include "cremona/rng.hpp"

namespace cremona {

struct Singularity {
    int multiplicity = 2;
    bool ordinary = true;
};

struct DivisorialInput {
    int n = 2;                            // ambient P^n
    int d = 2;                            // degree of X, > 1
    std::vector<Singularity> singularities;  // user-supplied, m >= 2
};

struct ObstructionReport {
    std::vector<Rat> discrepancies;  // (n-1) - ((n+1)/d) m, exact
    bool obstructed = false;         // certified not Cremona equivalent to a hyperplane
    std::string explanation;
};

/// Exact-rational discrepancy check. Obstructed needs every listed
/// singularity ordinary and every discrepancy >= 0; anything else is
/// inconclusive (non-canonicity does not prove equivalence).
inline ObstructionReport check_obstruction(const DivisorialInput& input) {
    if (input.d <= 1) throw parse_error("divisorial obstruction needs degree d > 1");
    if (input.n < 2) throw parse_error("divisorial obstruction needs ambient dimension n >= 2");
    for (const auto& s : input.singularities)
        if (s.multiplicity < 2) throw parse_error("singularities need multiplicity >= 2");

    ObstructionReport report;
    const Rat coeff = Rat::from_int(input.n + 1) / Rat::from_int(input.d);
    const Rat base = Rat::from_int(input.n - 1);
    bool all_ordinary = true;
    bool all_nonnegative = true;
    const Rat zero = Rat::zero();
    for (const auto& s : input.singularities) {
        Rat a = base - coeff * Rat::from_int(s.multiplicity);
        bool neg = (a - zero).value() < 0;
        all_nonnegative = all_nonnegative && !neg;
        all_ordinary = all_ordinary && s.ordinary;
        report.discrepancies.push_back(std::move(a));
    }
    report.obstructed = all_ordinary && all_nonnegative;
    if (report.obstructed) {
        report.explanation =
            "all listed singularities are ordinary with discrepancy >= 0, so the pair (P^n, ((n+1)/d)X) is canonical "
            "there and the embedding is not Cremona equivalent to a hyperplane";
    } else if (!all_ordinary) {
        report.explanation = "a non-ordinary singularity was listed; first-level discrepancies cannot certify "
                             "canonicity, verdict inconclusive";
    } else {
        report.explanation = "some discrepancy is negative; the criterion does not apply, verdict inconclusive";
    }
    return report;
}

template <field_type F>
struct NodalCurve {
    LinearSystem<F> system;  // 3 forms of degree a+1 in s0, s1
    MultiPoly<F> p, q;       // the degree-a forms behind the (1,a) curve
    std::vector<F> center;   // projection center in P^3
    int expected_nodes = 0;  // (a+1 choose 2) - a = a(a-1)/2, commentary only
};

/// Random rational plane curve of degree a+1 whose generic model has only
/// ordinary double points: the (1,a) curve [s p : s q : t p : t q] on the
/// Segre quadric, projected from a random center off the curve. Degenerate
/// projections (zero or pairwise-proportional forms, collisions under the
/// injectivity heuristic) are resampled.
template <field_type F>
NodalCurve<F> gen_nodal_curve(int a, Rng& rng, int resample_cap = kDefaultBaseLocusCap) {
    if (a < 2) throw parse_error("gen_nodal_curve needs a >= 2");
    auto random_form = [&](int degree) {
        std::map<Expo, F> terms;
        for (auto& e : monomials_of_degree(2, degree)) terms.emplace(e, F::random(rng));
        const bool empty = terms.empty();
        return MultiPoly<F>::from_terms(2, std::move(terms), empty ? degree : -1);
    };
    for (int attempt = 0; attempt < resample_cap; ++attempt) {
        MultiPoly<F> p = random_form(a);
        MultiPoly<F> q = random_form(a);
        if (p.is_zero() || q.is_zero()) continue;
        auto s = MultiPoly<F>::variable(2, 0);
        auto t = MultiPoly<F>::variable(2, 1);
        std::vector<MultiPoly<F>> quadric_curve = {s * p, s * q, t * p, t * q};

        auto center = random_tuple<F>(4, rng);
        RationalMap<F> proj = projection_from_point(ProjPoint<F>(center));
        std::vector<MultiPoly<F>> projected;
        for (const auto& form : proj.components) projected.push_back(form.compose(quadric_curve));

        bool degenerate = false;
        for (const auto& f : projected) degenerate = degenerate || f.is_zero();
        if (!degenerate) {
            // collinearity: pairwise-proportional forms mean the image is a
            // point, compare dense coefficient vectors
            auto mons = monomials_of_degree(2, a + 1);
            auto coeff_vec = [&](const MultiPoly<F>& f) {
                std::vector<F> v;
                v.reserve(mons.size());
                for (const auto& e : mons) {
                    auto it = f.terms().find(e);
                    v.push_back(it == f.terms().end() ? F::zero() : it->second);
                }
                return v;
            };
            auto c0 = coeff_vec(projected[0]), c1 = coeff_vec(projected[1]), c2 = coeff_vec(projected[2]);
            degenerate = proportional<F>(c0, c1) && proportional<F>(c0, c2);
        }
        if (degenerate) continue;
        LinearSystem<F> sys(std::move(projected), "nodal-curve");
        auto inj = generic_injectivity_heuristic(sys.induced_map(), 32, rng);
        if (inj.collision_found) continue;

        NodalCurve<F> out;
        out.system = std::move(sys);
        out.p = std::move(p);
        out.q = std::move(q);
        out.center = std::move(center);
        out.expected_nodes = a * (a - 1) / 2;
        return out;
    }
    throw retry_exhausted("gen_nodal_curve: no non-degenerate projection found");
}

}  // namespace cremona
