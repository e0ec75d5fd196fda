#pragma once

// Turns a bi-monoid surface S in P^{n+1} into an explicit Cremona
// transformation of P^n with closed-form inverse: the self-map obtained by
// lifting through the projection from one multiplicity-(k-1) point and
// projecting from the other.
//
// Charts are the adapted coordinates of S. The projection target on the
// q1 side carries coordinates (z_0..z_n), on the q2 side (z_0..z_{n-1},
// z_{n+1}); the lift of (z_0:...:z_n) through S solves the one remaining
// linear equation u * z_{n+1} + (c z_n + d) = 0 with u = a z_n + b. That
// gives, after clearing denominators,
//
//   forward  = [x_0 u : ... : x_{n-1} u : -(c x_n + d)]
//   backward = [x_0 w : ... : x_{n-1} w : -(b y + d)],  w = a y + c
//
// and componentwise backward(forward(x)) = x_j * u^{k-1} (bc - ad), which
// is the identity wherever u and bc - ad do not vanish.

#include <string>
#include <vector>

#include "cremona/bimonoid.hpp"
#include "cremona/errors.hpp"
#include "cremona/multipoly.hpp"
#include "cremona/projective.hpp"
#include "cremona/rng.hpp"

namespace cremona {

struct RoundTripTranscript {
    u64 seed = 0;
    int trials = 0;
    int failures = 0;
    long resamples = 0;
};

template <field_type F>
struct CremonaMap {
    RationalMap<F> forward;   // P^n -> P^n, degree k
    RationalMap<F> backward;  // P^n -> P^n, degree k
    BiMonoidSurface<F> surface;
    // Nonvanishing of every listed form at x forces the corresponding
    // round trip to return x exactly.
    std::vector<MultiPoly<F>> forward_avoid;
    std::vector<MultiPoly<F>> backward_avoid;
    RoundTripTranscript inverse_witness{};
};

template <field_type F>
CremonaMap<F> build_cremona(const BiMonoidSurface<F>& s) {
    s.validate();
    const int n = s.n;
    const int nv = n + 1;

    auto last_var = MultiPoly<F>::variable(nv, n);
    auto u = s.a.extended(nv) * last_var + s.b.extended(nv);
    auto w = s.a.extended(nv) * last_var + s.c.extended(nv);
    auto guard = s.degeneracy_poly().extended(nv);

    std::vector<MultiPoly<F>> fwd, bwd;
    for (int j = 0; j < n; ++j) fwd.push_back(MultiPoly<F>::variable(nv, j) * u);
    fwd.push_back(-(s.c.extended(nv) * last_var + s.d.extended(nv)));
    for (int j = 0; j < n; ++j) bwd.push_back(MultiPoly<F>::variable(nv, j) * w);
    bwd.push_back(-(s.b.extended(nv) * last_var + s.d.extended(nv)));

    CremonaMap<F> m;
    m.forward = RationalMap<F>(std::move(fwd));
    m.backward = RationalMap<F>(std::move(bwd));
    m.surface = s;
    m.forward_avoid = {u, guard};
    m.backward_avoid = {w, guard};
    return m;
}

/// Randomized round-trip check of both directions at points avoiding the
/// degeneracy loci. A failure is fatal: for a valid surface the closed
/// form makes the round trip an exact identity.
template <field_type F>
RoundTripTranscript verify_roundtrip(const CremonaMap<F>& m, int trials, Rng& rng, u64 seed_label = 0,
                                     int resample_cap = kDefaultBaseLocusCap) {
    RoundTripTranscript t;
    t.seed = seed_label;
    t.trials = trials;
    auto one_direction = [&](const RationalMap<F>& there, const RationalMap<F>& back,
                             const std::vector<MultiPoly<F>>& avoid) {
        for (int i = 0; i < trials; ++i) {
            std::vector<F> x;
            int attempts = 0;
            for (;;) {
                x = random_tuple<F>(there.source_dim() + 1, rng);
                bool ok = true;
                for (const auto& g : avoid)
                    if (g.eval(x).is_zero()) {
                        ok = false;
                        break;
                    }
                if (ok) break;
                ++t.resamples;
                if (++attempts >= resample_cap) throw retry_exhausted("round-trip: resample cap hit");
            }
            ProjPoint<F> p{std::vector<F>(x)};
            auto mid = try_apply(there, p);
            std::optional<ProjPoint<F>> final_pt;
            if (mid) final_pt = try_apply(back, *mid);
            if (!final_pt || !(*final_pt == p)) {
                ++t.failures;
                std::string witness = "[";
                for (std::size_t j = 0; j < x.size(); ++j) witness += (j ? ":" : "") + x[j].to_string();
                witness += "]";
                throw roundtrip_failure_error("round trip failed at witness point " + witness);
            }
        }
    };
    one_direction(m.forward, m.backward, m.forward_avoid);
    one_direction(m.backward, m.forward, m.backward_avoid);
    return t;
}

template <field_type F>
struct SymbolicRoundTripProof {
    int n = 0, k = 0;
    MultiPoly<F> common_factor;  // u^{k-1} (bc - ad)
};

/// Expands backward∘forward symbolically and checks every component equals
/// the corresponding coordinate times u^{k-1}(bc - ad). Exact, so capped
/// at small degree and dimension.
template <field_type F>
SymbolicRoundTripProof<F> symbolic_roundtrip_smallcase(const CremonaMap<F>& m, int k_cap = 3, int n_cap = 3) {
    const auto& s = m.surface;
    if (s.k > k_cap || s.n > n_cap)
        throw error("symbolic_roundtrip_smallcase: size cap exceeded (k <= " + std::to_string(k_cap) + ", n <= " +
                    std::to_string(n_cap) + ")");
    const int nv = s.n + 1;
    auto u = s.a.extended(nv) * MultiPoly<F>::variable(nv, s.n) + s.b.extended(nv);
    MultiPoly<F> factor = s.degeneracy_poly().extended(nv);
    for (int i = 0; i < s.k - 1; ++i) factor = factor * u;
    auto round = compose(m.backward, m.forward);
    for (int j = 0; j <= s.n; ++j) {
        auto expected = MultiPoly<F>::variable(nv, j) * factor;
        if (!(round.components[std::size_t(j)] == expected))
            throw verification_error("symbolic round trip: component " + std::to_string(j) +
                                     " does not match x_j * u^{k-1}(bc-ad)");
    }
    SymbolicRoundTripProof<F> proof;
    proof.n = s.n;
    proof.k = s.k;
    proof.common_factor = factor;
    return proof;
}

}  // namespace cremona
