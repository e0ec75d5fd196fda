#pragma once

// The equivalence chain: given two embeddings L and G of a parametrized
// variety X in P^n with n >= r+2, builds Cremona transformations
// Phi_0..Phi_{m-1} of P^n carrying the map of L onto the map of G, one
// coordinate at a time, together with a re-checkable certificate.
//
// Invariant kept across steps, writing P for the product system {L_i G_j}:
// A_0 = {L_j G_0}; after step i the first i+2 entries of A_{i+1} are
// exactly L_0 G_0 .. L_0 G_{i+1} and the rest are recorded linear
// combinations of entries of P; A_n = {L_0 G_j}. Each step appends
// L_0 G_{i+1} as an extra coordinate, samples the lifted variety Y_i in
// P^{n+1}, interpolates a bi-monoid surface through it with vertices at
// q1 = e_{n+1} and a random q2 in {x_0 = ... = x_i = x_{n+1} = 0}, and
// conjugates the induced self-map into the chart of A_i and the chart of
// A_{i+1}.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cremona/bimonoid.hpp"
#include "cremona/errors.hpp"
#include "cremona/fields.hpp"
#include "cremona/linear_system.hpp"
#include "cremona/monoid_cremona.hpp"
#include "cremona/multipoly.hpp"
#include "cremona/projective.hpp"
#include "cremona/rng.hpp"

namespace cremona {

struct ChainOptions {
    int trials = 100;
    int k_max = kDefaultKMax;
    int q2_retry_cap = 8;
    int solution_retry_cap = kDefaultSolutionRetryCap;
    int base_locus_cap = kDefaultBaseLocusCap;
    int holdout_count = kDefaultHoldoutCount;
    bool require_injectivity = false;
    bool early_termination = true;
};

struct StepTranscript {
    u64 seed = 0;
    int trials = 0;
    int failures = 0;
    int q2_attempts = 0;
    long resamples = 0;
    int holdout_checks = 0;
    RoundTripTranscript roundtrip{};
};

template <field_type F>
struct ChainStep {
    int index = 0;
    LinearSystem<F> A;  // system entering the step (not serialized; implied)
    LinearSystem<F> H;  // A with L_0 G_{i+1} appended
    ProjPoint<F> q2;    // normalized; zero at slots 0..i and n+1
    int k = 0;
    BiMonoidSurface<F> S;
    CremonaMap<F> phi;  // forward/backward already in the chain charts
    LinearSystem<F> A_next;
    std::vector<std::vector<F>> product_coeffs_next;  // A_next entries over the product system
    StepTranscript transcript;
};

struct EndToEndTranscript {
    u64 seed_forward = 0;
    u64 seed_backward = 0;
    int trials = 0;
    int failures_forward = 0;
    int failures_backward = 0;
};

template <field_type F>
struct ChainCertificate {
    FieldSpec field;
    int r = 0, n = 0;
    LinearSystem<F> L;  // as given, zero-padded to length n+1
    LinearSystem<F> G;  // zero-padded to length n+1
    std::vector<int> perm_L, perm_G;  // applied so slot 0 is nonzero
    u64 seed = 0;
    int trials = 0;
    int k_max = 0;
    std::string injectivity_L, injectivity_G;
    std::optional<int> early_termination_step;
    std::vector<ChainStep<F>> steps;
    EndToEndTranscript end_to_end{};
};

namespace detail {

template <field_type F>
LinearSystem<F> permuted_system(const LinearSystem<F>& sys, const std::vector<int>& perm) {
    if (perm.size() != sys.size()) throw parse_error("permutation length mismatch");
    std::vector<MultiPoly<F>> entries;
    entries.reserve(sys.size());
    for (int idx : perm) {
        if (idx < 0 || idx >= int(sys.size())) throw parse_error("permutation index out of range");
        entries.push_back(sys.entries[std::size_t(idx)]);
    }
    return LinearSystem<F>(std::move(entries), sys.label);
}

/// Identity unless entry 0 is zero; then swaps slot 0 with the first
/// nonzero slot.
template <field_type F>
std::vector<int> nonzero_first_permutation(const LinearSystem<F>& sys) {
    std::vector<int> perm(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) perm[i] = int(i);
    if (!sys.entries[0].is_zero()) return perm;
    for (std::size_t j = 1; j < sys.size(); ++j)
        if (!sys.entries[j].is_zero()) {
            std::swap(perm[0], perm[j]);
            return perm;
        }
    throw all_zero_error("system has no nonzero entry");
}

template <field_type F>
std::vector<F> permute_tuple(const std::vector<F>& v, const std::vector<int>& perm) {
    std::vector<F> out;
    out.reserve(v.size());
    for (int idx : perm) out.push_back(v[std::size_t(idx)]);
    return out;
}

/// The n+1 linear forms on P^{n+1} defining the projection from q2,
/// ordered to give A_next its displayed shape: coordinates 0..i, then
/// coordinate n+1, then the combinations of slots i+1..n vanishing at q2
/// (pivot = largest nonzero coordinate of q2).
template <field_type F>
Matrix<F> projection_forms_for_step(int i, const ProjPoint<F>& q2, int n) {
    std::size_t pivot = std::size_t(n);
    while (pivot > std::size_t(i) && q2.coords[pivot].is_zero()) --pivot;
    if (q2.coords[pivot].is_zero()) throw error("q2 has no nonzero coordinate in its subspace");
    F pivot_inv = q2.coords[pivot].inverse();
    Matrix<F> lambda(std::size_t(n) + 1, std::size_t(n) + 2);
    std::size_t row = 0;
    for (int j = 0; j <= i; ++j) lambda.at(row++, std::size_t(j)) = F::one();
    lambda.at(row++, std::size_t(n) + 1) = F::one();
    for (int m = i + 1; m <= n; ++m) {
        if (std::size_t(m) == pivot) continue;
        lambda.at(row, std::size_t(m)) = F::one();
        lambda.at(row, pivot) = -(q2.coords[std::size_t(m)] * pivot_inv);
        ++row;
    }
    return lambda;
}

template <field_type F>
struct DerivedStep {
    LinearSystem<F> H;
    CremonaMap<F> phi;
    LinearSystem<F> A_next;
    std::vector<std::vector<F>> coeffs_next;  // empty when no tracking requested
};

/// Everything in a step that is a function of (A_i, q2, S): the appended
/// system H, the chain-chart maps, and A_next. Both the builder and the
/// verifier go through here, so a certificate is re-derivable bit for bit.
template <field_type F>
DerivedStep<F> derive_step(int i, const LinearSystem<F>& a, const std::vector<std::vector<F>>* product_coeffs,
                           const LinearSystem<F>& product, const ProjPoint<F>& q2, const BiMonoidSurface<F>& s,
                           int n) {
    const int npolys = n + 1;
    DerivedStep<F> out;

    const MultiPoly<F>& appended = product.entries[std::size_t(i) + 1];  // L_0 G_{i+1}
    {
        std::vector<MultiPoly<F>> h_entries = a.entries;
        h_entries.push_back(appended);
        out.H = LinearSystem<F>(std::move(h_entries), "H" + std::to_string(i));
    }

    auto cm = build_cremona(s);

    // T1: adapted q1-side chart -> coordinates of A_i. Since q1 = e_{n+1},
    // this is the principal (n+1)x(n+1) block of the adaptation.
    const Matrix<F>& m = s.adaptation;
    Matrix<F> t1{std::size_t(npolys), std::size_t(npolys)};
    for (int x = 0; x < npolys; ++x)
        for (int y = 0; y < npolys; ++y) t1.at(std::size_t(x), std::size_t(y)) = m.at(std::size_t(x), std::size_t(y));

    // T2: adapted q2-side chart -> coordinates of A_next. The projection
    // forms composed with the adaptation cannot involve the adapted slot n
    // (they vanish at q2), so restricting to slots (0..n-1, n+1) is exact.
    Matrix<F> lambda = projection_forms_for_step(i, q2, n);
    Matrix<F> lm = lambda * m;
    Matrix<F> t2{std::size_t(npolys), std::size_t(npolys)};
    for (int x = 0; x < npolys; ++x) {
        for (int y = 0; y < n; ++y) t2.at(std::size_t(x), std::size_t(y)) = lm.at(std::size_t(x), std::size_t(y));
        t2.at(std::size_t(x), std::size_t(n)) = lm.at(std::size_t(x), std::size_t(n) + 1);
    }

    Matrix<F> t1_inv = inverse(t1);
    Matrix<F> t2_inv = inverse(t2);
    out.phi = cm;
    out.phi.forward = postcompose_linear(t2, precompose_linear(cm.forward, t1_inv));
    out.phi.backward = postcompose_linear(t1, precompose_linear(cm.backward, t2_inv));
    for (auto& g : out.phi.forward_avoid) g = g.substitute_linear(t1_inv);
    for (auto& g : out.phi.backward_avoid) g = g.substitute_linear(t2_inv);

    // A_next = Lambda applied to the entries of H
    std::vector<F> appended_coeffs;
    if (product_coeffs) {
        appended_coeffs.assign(product.size(), F::zero());
        appended_coeffs[std::size_t(i) + 1] = F::one();
    }
    std::vector<MultiPoly<F>> next_entries;
    for (std::size_t lrow = 0; lrow < std::size_t(npolys); ++lrow) {
        MultiPoly<F> acc = MultiPoly<F>::zero(a.param_vars, a.degree);
        std::vector<F> coeffs;
        if (product_coeffs) coeffs.assign(product.size(), F::zero());
        for (std::size_t col = 0; col <= std::size_t(n) + 1; ++col) {
            const F& weight = lambda.at(lrow, col);
            if (weight.is_zero()) continue;
            acc = acc + out.H.entries[col].scaled(weight);
            if (product_coeffs) {
                const auto& src = col <= std::size_t(n) ? (*product_coeffs)[col] : appended_coeffs;
                for (std::size_t t = 0; t < coeffs.size(); ++t) coeffs[t] += weight * src[t];
            }
        }
        next_entries.push_back(std::move(acc));
        if (product_coeffs) out.coeffs_next.push_back(std::move(coeffs));
    }
    out.A_next = LinearSystem<F>(std::move(next_entries), "A" + std::to_string(i + 1));
    return out;
}

/// Applies the chain strictly point by point (maps are never composed
/// symbolically). Returns nullopt if some step is undefined at the orbit.
template <field_type F>
std::optional<std::vector<F>> push_through_chain(const std::vector<ChainStep<F>>& steps, std::vector<F> v,
                                                 bool forward) {
    auto run_one = [&](const RationalMap<F>& map, std::vector<F>& x) {
        auto img = map.eval(x);
        if (all_zero<F>(img)) return false;
        x = std::move(img);
        return true;
    };
    if (forward) {
        for (const auto& s : steps)
            if (!run_one(s.phi.forward, v)) return std::nullopt;
    } else {
        for (auto it = steps.rbegin(); it != steps.rend(); ++it)
            if (!run_one(it->phi.backward, v)) return std::nullopt;
    }
    return v;
}

}  // namespace detail

/// State threaded through the chain: the current system plus, for each
/// entry, its coefficients over the product system {L_i G_j}.
template <field_type F>
struct ChainState {
    LinearSystem<F> A;
    std::vector<std::vector<F>> product_coeffs;
};

/// One step of the recipe. On success A_next has L_0 G_0 .. L_0 G_{i+1}
/// in its first i+2 slots, and phi conjugates the map of A into the map
/// of A_next (randomized gate at opts.trials points).
template <field_type F>
ChainStep<F> chain_step(int i, const ChainState<F>& state, const LinearSystem<F>& product, int n, int r,
                        const ChainOptions& opts, Rng& rng) {
    if (int(state.A.size()) != n + 1) throw error("chain_step: system has wrong length");
    if (n < r + 2) throw hypothesis_violation("chain_step requires n >= r+2");

    ChainStep<F> step;
    step.index = i;
    step.A = state.A;
    step.transcript.trials = opts.trials;

    LinearSystem<F> h_probe;
    {
        std::vector<MultiPoly<F>> h_entries = state.A.entries;
        h_entries.push_back(product.entries[std::size_t(i) + 1]);
        h_probe = LinearSystem<F>(std::move(h_entries), "H" + std::to_string(i));
    }
    ParametrizedVariety<F> y_sampler{r, {h_probe}, opts.base_locus_cap};
    auto sample_y = [&](Rng& srng) { return h_probe.eval(y_sampler.sample_params(srng)); };

    ProjPoint<F> q1 = coordinate_vertex<F>(n + 1, n + 1);

    for (int attempt = 0; attempt < opts.q2_retry_cap; ++attempt) {
        step.transcript.q2_attempts = attempt + 1;
        // general point of {x_0 = ... = x_i = x_{n+1} = 0}
        std::vector<F> q2c(std::size_t(n) + 2, F::zero());
        for (int j = i + 1; j <= n; ++j) q2c[std::size_t(j)] = F::random_nonzero(rng);
        ProjPoint<F> q2 = ProjPoint<F>(std::move(q2c)).normalized();

        std::pair<int, BiMonoidSurface<F>> found;
        try {
            found = find_min_k<F>(sample_y, q1, q2, n, opts.k_max, rng, opts.solution_retry_cap, opts.holdout_count);
        } catch (const witness_failure_error&) {
            continue;  // degenerate configuration: resample q2
        }

        auto derived = detail::derive_step(i, state.A, &state.product_coeffs, product, q2, found.second, n);

        // Gate: phi must conjugate the map of A_i into the map of A_next.
        auto composed = compose(derived.phi.forward, state.A.induced_map());
        auto verdict =
            maps_equal_projective(composed, derived.A_next.induced_map(), opts.trials, rng, opts.base_locus_cap);
        step.transcript.resamples += verdict.resamples;
        if (!verdict.equal) {
            ++step.transcript.failures;
            continue;  // resample q2
        }

        u64 rt_seed = rng.next();
        Rng rt_rng(rt_seed);
        derived.phi.inverse_witness =
            verify_roundtrip(derived.phi, opts.trials, rt_rng, rt_seed, opts.base_locus_cap);

        step.q2 = q2;
        step.k = found.first;
        step.S = found.second;
        step.H = std::move(derived.H);
        step.phi = std::move(derived.phi);
        step.A_next = std::move(derived.A_next);
        step.product_coeffs_next = std::move(derived.coeffs_next);
        step.transcript.holdout_checks = step.S.holdout_checks;
        return step;
    }
    throw retry_exhausted("step " + std::to_string(i) + ": no admissible q2 after " +
                          std::to_string(opts.q2_retry_cap) + " attempts");
}

/// Runs the whole chain. L and G are zero-padded to n+1 entries first.
/// Requires n >= r+2; every verification gate along the way is fatal on
/// failure, so a returned certificate is already self-consistent.
template <field_type F>
ChainCertificate<F> run_chain(const LinearSystem<F>& l_in, const LinearSystem<F>& g_in, int r, int n,
                              const FieldSpec& field, u64 seed, const ChainOptions& opts = {}) {
    if (n < r + 2)
        throw hypothesis_violation("the construction requires n >= r+2 (got n = " + std::to_string(n) +
                                   ", r = " + std::to_string(r) + ")");
    if (l_in.param_vars != r + 1 || g_in.param_vars != r + 1)
        throw parse_error("systems must be forms in r+1 parameter variables");
    if (int(l_in.size()) > n + 1 || int(g_in.size()) > n + 1)
        throw parse_error("systems may have at most n+1 entries");

    ChainCertificate<F> cert;
    cert.field = field;
    cert.r = r;
    cert.n = n;
    cert.L = pad_zeros(l_in, n);
    cert.G = pad_zeros(g_in, n);
    cert.seed = seed;
    cert.trials = opts.trials;
    cert.k_max = opts.k_max;

    Rng rng(seed);

    cert.perm_L = detail::nonzero_first_permutation(cert.L);
    cert.perm_G = detail::nonzero_first_permutation(cert.G);
    LinearSystem<F> lp = detail::permuted_system(cert.L, cert.perm_L);
    LinearSystem<F> gp = detail::permuted_system(cert.G, cert.perm_G);

    // birationality of the inputs is an input contract; the heuristic
    // verdict is recorded either way
    auto inj_l = generic_injectivity_heuristic(lp.induced_map(), opts.trials, rng, opts.base_locus_cap);
    auto inj_g = generic_injectivity_heuristic(gp.induced_map(), opts.trials, rng, opts.base_locus_cap);
    cert.injectivity_L = inj_l.collision_found ? "collision" : "no-collision-found";
    cert.injectivity_G = inj_g.collision_found ? "collision" : "no-collision-found";
    if (opts.require_injectivity && (inj_l.collision_found || inj_g.collision_found))
        throw verification_error("injectivity heuristic found a collision and collisions are fatal");

    LinearSystem<F> product = product_system(lp, gp);

    ChainState<F> state;
    {
        std::vector<MultiPoly<F>> entries;
        std::vector<std::vector<F>> coeffs;
        for (int j = 0; j <= n; ++j) {
            entries.push_back(product.entries[std::size_t(j) * std::size_t(n + 1)]);
            std::vector<F> c(product.size(), F::zero());
            c[std::size_t(j) * std::size_t(n + 1)] = F::one();
            coeffs.push_back(std::move(c));
        }
        state.A = LinearSystem<F>(std::move(entries), "A0");
        state.product_coeffs = std::move(coeffs);
    }

    // target: G_{L_0} = {L_0 G_j} = row 0 of the product system
    LinearSystem<F> target;
    {
        std::vector<MultiPoly<F>> entries(product.entries.begin(), product.entries.begin() + (n + 1));
        target = LinearSystem<F>(std::move(entries), "G_L0");
    }

    for (int i = 0; i < n; ++i) {
        if (opts.early_termination) {
            auto eq = systems_equal_as_maps(state.A, target, opts.trials, rng, opts.base_locus_cap);
            if (eq.equal) {
                cert.early_termination_step = i;
                break;
            }
        }
        u64 step_seed = rng.next();
        Rng step_rng(step_seed);
        auto step = chain_step(i, state, product, n, r, opts, step_rng);
        step.transcript.seed = step_seed;
        state.A = step.A_next;
        state.product_coeffs = step.product_coeffs_next;
        cert.steps.push_back(std::move(step));
    }

    if (!cert.early_termination_step) {
        // the final system must be G_{L_0} on the nose
        for (int j = 0; j <= n; ++j)
            if (!(state.A.entries[std::size_t(j)] == target.entries[std::size_t(j)]))
                throw verification_error("final system is not syntactically {L_0 G_j} at slot " + std::to_string(j));
    }

    // End-to-end, pointwise, both directions, honoring the permutations:
    // chain(P_sigma phi_L(x)) must match P_tau phi_G(x) projectively.
    cert.end_to_end.trials = opts.trials;
    cert.end_to_end.seed_forward = rng.next();
    cert.end_to_end.seed_backward = rng.next();
    ParametrizedVariety<F> sampler{r, {cert.L, cert.G}, opts.base_locus_cap};
    auto run_direction = [&](u64 dir_seed, bool forward, int& failures) {
        Rng dir_rng(dir_seed);
        int done = 0, guard = 0;
        while (done < opts.trials) {
            if (++guard > opts.trials * opts.base_locus_cap)
                throw retry_exhausted("end-to-end verification: too many undefined orbits");
            auto params = sampler.sample_params(dir_rng);
            auto start = detail::permute_tuple(forward ? cert.L.eval(params) : cert.G.eval(params),
                                               forward ? cert.perm_L : cert.perm_G);
            auto expected = detail::permute_tuple(forward ? cert.G.eval(params) : cert.L.eval(params),
                                                  forward ? cert.perm_G : cert.perm_L);
            if (all_zero<F>(start) || all_zero<F>(expected)) continue;
            auto pushed = detail::push_through_chain(cert.steps, start, forward);
            if (!pushed) continue;
            if (!proportional<F>(*pushed, expected)) {
                ++failures;
                throw verification_error(std::string("end-to-end ") + (forward ? "forward" : "backward") +
                                         " check failed at a sampled parameter point");
            }
            ++done;
        }
    };
    run_direction(cert.end_to_end.seed_forward, true, cert.end_to_end.failures_forward);
    run_direction(cert.end_to_end.seed_backward, false, cert.end_to_end.failures_backward);
    return cert;
}

/// Result of an independent certificate re-check.
struct VerifyReport {
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// Re-checks a certificate with fresh randomness. Structural claims
/// (system shapes, maps re-derived from S and q2) are compared
/// syntactically; probabilistic claims are re-sampled at `trials` points.
template <field_type F>
VerifyReport verify_certificate(const ChainCertificate<F>& cert, int trials, Rng& rng) {
    VerifyReport report;
    auto fail = [&](std::string msg) { report.failures.push_back(std::move(msg)); };

    const int n = cert.n, r = cert.r;
    if (n < r + 2) {
        fail("hypothesis n >= r+2 violated");
        return report;
    }
    if (int(cert.L.size()) != n + 1 || int(cert.G.size()) != n + 1) {
        fail("systems do not have n+1 entries");
        return report;
    }

    LinearSystem<F> lp, gp, product, target;
    try {
        lp = detail::permuted_system(cert.L, cert.perm_L);
        gp = detail::permuted_system(cert.G, cert.perm_G);
        if (lp.entries[0].is_zero()) fail("perm_L does not put a nonzero entry first");
        if (gp.entries[0].is_zero()) fail("perm_G does not put a nonzero entry first");
        product = product_system(lp, gp);
        std::vector<MultiPoly<F>> entries(product.entries.begin(), product.entries.begin() + (n + 1));
        target = LinearSystem<F>(std::move(entries), "G_L0");
    } catch (const error& e) {
        fail(std::string("input reconstruction failed: ") + e.what());
        return report;
    }

    LinearSystem<F> current;
    {
        std::vector<MultiPoly<F>> entries;
        for (int j = 0; j <= n; ++j) entries.push_back(product.entries[std::size_t(j) * std::size_t(n + 1)]);
        current = LinearSystem<F>(std::move(entries), "A0");
    }

    for (std::size_t si = 0; si < cert.steps.size(); ++si) {
        const auto& step = cert.steps[si];
        const int i = step.index;
        std::string tag = "step " + std::to_string(i) + ": ";
        if (int(si) != i) {
            fail(tag + "steps are out of order");
            return report;
        }

        if (int(step.q2.coords.size()) != n + 2) {
            fail(tag + "q2 has wrong length");
            return report;
        }
        for (int j = 0; j <= i; ++j)
            if (!step.q2.coords[std::size_t(j)].is_zero()) fail(tag + "q2 is nonzero at slot " + std::to_string(j));
        if (!step.q2.coords[std::size_t(n) + 1].is_zero()) fail(tag + "q2 is nonzero at slot n+1");

        try {
            step.S.validate();
        } catch (const error& e) {
            fail(tag + std::string("surface invalid: ") + e.what());
            continue;
        }
        if (step.S.n != n || step.S.k != step.k) {
            fail(tag + "surface dimensions disagree with the step record");
            continue;
        }
        ProjPoint<F> q1 = coordinate_vertex<F>(n + 1, n + 1);
        try {
            auto expected_adaptation = adapt_coordinates(q1, step.q2, n);
            if (!(expected_adaptation == step.S.adaptation)) fail(tag + "adaptation matrix is not the canonical one");
        } catch (const error& e) {
            fail(tag + std::string("adaptation re-derivation failed: ") + e.what());
        }

        // everything derivable from (A_i, q2, S) must match the record
        LinearSystem<F> h_derived;
        CremonaMap<F> phi_checked;  // stored maps, re-derived degeneracy loci
        try {
            auto derived = detail::derive_step<F>(i, current, nullptr, product, step.q2, step.S, n);
            h_derived = derived.H;
            if (!(derived.phi.forward.components == step.phi.forward.components))
                fail(tag + "forward map differs from re-derivation");
            if (!(derived.phi.backward.components == step.phi.backward.components))
                fail(tag + "backward map differs from re-derivation");
            if (derived.A_next.size() != step.A_next.size()) {
                fail(tag + "A_next has wrong length");
            } else {
                for (std::size_t j = 0; j < derived.A_next.size(); ++j)
                    if (!(derived.A_next.entries[j] == step.A_next.entries[j]))
                        fail(tag + "A_next entry " + std::to_string(j) + " differs from re-derivation");
            }
            phi_checked = step.phi;
            phi_checked.forward_avoid = derived.phi.forward_avoid;
            phi_checked.backward_avoid = derived.phi.backward_avoid;
        } catch (const error& e) {
            fail(tag + std::string("re-derivation failed: ") + e.what());
            continue;
        }

        // prefix invariant: first i+2 entries of A_next are L_0 G_0 .. L_0 G_{i+1}
        for (int j = 0; j <= i + 1 && j < int(step.A_next.size()); ++j)
            if (!(step.A_next.entries[std::size_t(j)] == product.entries[std::size_t(j)]))
                fail(tag + "prefix invariant broken at slot " + std::to_string(j));

        // fresh probabilistic gates: vanishing on Y, conjugation, round trip
        try {
            Matrix<F> minv = inverse(step.S.adaptation);
            ParametrizedVariety<F> sampler{r, {h_derived}};
            int clean = 0;
            for (int t = 0; t < trials; ++t) {
                auto z = minv.apply(h_derived.eval(sampler.sample_params(rng)));
                if (step.S.eval_adapted(z).is_zero()) ++clean;
            }
            if (clean != trials)
                fail(tag + "surface does not vanish on fresh samples (" + std::to_string(clean) + "/" +
                     std::to_string(trials) + ")");
        } catch (const error& e) {
            fail(tag + std::string("vanishing check failed: ") + e.what());
        }
        try {
            auto composed = compose(step.phi.forward, current.induced_map());
            auto verdict = maps_equal_projective(composed, step.A_next.induced_map(), trials, rng);
            if (!verdict.equal) fail(tag + "conjugation gate failed on fresh samples");
        } catch (const error& e) {
            fail(tag + std::string("conjugation gate failed: ") + e.what());
        }
        try {
            Rng rt(rng.next());
            verify_roundtrip(phi_checked, trials, rt);
        } catch (const error& e) {
            fail(tag + std::string("round trip failed: ") + e.what());
        }

        current = step.A_next;
    }

    if (cert.early_termination_step) {
        try {
            auto eq = systems_equal_as_maps(current, target, trials, rng);
            if (!eq.equal) fail("early-termination claim fails: current system is not the target as a map");
        } catch (const error& e) {
            fail(std::string("early-termination check failed: ") + e.what());
        }
    } else {
        if (int(cert.steps.size()) != n)
            fail("certificate has " + std::to_string(cert.steps.size()) + " steps, expected " + std::to_string(n));
        for (int j = 0; j <= n; ++j)
            if (!(current.entries[std::size_t(j)] == target.entries[std::size_t(j)]))
                fail("final system is not syntactically {L_0 G_j} at slot " + std::to_string(j));
    }

    // end-to-end, both directions, fresh randomness
    auto end_to_end = [&](bool forward) {
        ParametrizedVariety<F> sampler{r, {cert.L, cert.G}};
        int done = 0, guard = 0, bad = 0;
        while (done < trials && guard < trials * kDefaultBaseLocusCap) {
            ++guard;
            auto params = sampler.sample_params(rng);
            auto start = detail::permute_tuple(forward ? cert.L.eval(params) : cert.G.eval(params),
                                               forward ? cert.perm_L : cert.perm_G);
            auto expected = detail::permute_tuple(forward ? cert.G.eval(params) : cert.L.eval(params),
                                                  forward ? cert.perm_G : cert.perm_L);
            if (all_zero<F>(start) || all_zero<F>(expected)) continue;
            auto pushed = detail::push_through_chain(cert.steps, start, forward);
            if (!pushed) continue;
            if (!proportional<F>(*pushed, expected)) ++bad;
            ++done;
        }
        if (done < trials)
            fail(std::string("end-to-end ") + (forward ? "forward" : "backward") + ": only " + std::to_string(done) +
                 " orbits completed");
        if (bad)
            fail(std::string("end-to-end ") + (forward ? "forward" : "backward") + ": " + std::to_string(bad) + "/" +
                 std::to_string(done) + " mismatches");
    };
    try {
        end_to_end(true);
        end_to_end(false);
    } catch (const error& e) {
        fail(std::string("end-to-end check failed: ") + e.what());
    }

    return report;
}

}  // namespace cremona
