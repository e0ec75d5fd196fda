#include <catch2/catch_amalgamated.hpp>

#include "cremona/chain.hpp"
#include "cremona/documents.hpp"
#include "cremona/fields.hpp"
#include "cremona/rng.hpp"

using namespace cremona;

namespace {

LinearSystem<Fp> twisted_cubic_L() {
    return detail::system_from_texts<Fp>({"s0^3", "s0^2*s1", "s0*s1^2", "s1^3"}, 2, 's', "L");
}

LinearSystem<Fp> line_G() { return detail::system_from_texts<Fp>({"s0", "s1"}, 2, 's', "G"); }

const FieldSpec kField = FieldSpec::make_prime(kDefaultPrime);

}  // namespace

TEST_CASE("hypothesis guard") {
    auto L = detail::system_from_texts<Fp>({"s0^2", "s0*s1", "s1^2"}, 2, 's', "L");
    CHECK_THROWS_AS(run_chain<Fp>(L, line_G(), 1, 2, kField, 1), hypothesis_violation);
}

TEST_CASE("flagship first step") {
    auto product = product_system(twisted_cubic_L(), pad_zeros(line_G(), 3));
    ChainState<Fp> state;
    {
        std::vector<MultiPoly<Fp>> entries;
        for (int j = 0; j <= 3; ++j) {
            entries.push_back(product.entries[std::size_t(j) * 4]);
            std::vector<Fp> c(product.size(), Fp::zero());
            c[std::size_t(j) * 4] = Fp::one();
            state.product_coeffs.push_back(std::move(c));
        }
        state.A = LinearSystem<Fp>(std::move(entries), "A0");
    }
    // A_0 = {s^4, s^3 t, s^2 t^2, s t^3}
    CHECK(state.A.entries[0] == MultiPoly<Fp>::parse("s0^4", 2, 's'));
    CHECK(state.A.entries[3] == MultiPoly<Fp>::parse("s0*s1^3", 2, 's'));

    Rng rng(42);
    ChainOptions opts;
    auto step = chain_step(0, state, product, 3, 1, opts, rng);

    // H appends L_0 G_1 = s^3 t
    CHECK(step.H.entries.back() == MultiPoly<Fp>::parse("s0^3*s1", 2, 's'));
    CHECK(step.k == 2);  // quartic curve data fits a quadric bi-monoid
    CHECK(step.transcript.q2_attempts == 1);

    // prefix invariant for A_1
    CHECK(step.A_next.entries[0] == product.entries[0]);
    CHECK(step.A_next.entries[1] == product.entries[1]);

    // recorded product-system coefficients reproduce the entries
    for (std::size_t j = 0; j < step.A_next.size(); ++j) {
        MultiPoly<Fp> acc = MultiPoly<Fp>::zero(2, product.degree);
        for (std::size_t t = 0; t < product.size(); ++t)
            acc = acc + product.entries[t].scaled(step.product_coeffs_next[j][t]);
        REQUIRE(acc == step.A_next.entries[j]);
    }

    // independent re-verification of the conjugation at fresh points
    Rng fresh(4242);
    auto composed = compose(step.phi.forward, state.A.induced_map());
    CHECK(maps_equal_projective(composed, step.A_next.induced_map(), 100, fresh).equal);
}

TEST_CASE("flagship chain") {
    auto cert = run_chain<Fp>(twisted_cubic_L(), line_G(), 1, 3, kField, 42);
    REQUIRE(cert.steps.size() == 3);
    CHECK_FALSE(cert.early_termination_step.has_value());
    CHECK(cert.end_to_end.failures_forward == 0);
    CHECK(cert.end_to_end.failures_backward == 0);
    CHECK(cert.injectivity_L == "no-collision-found");
    CHECK(cert.injectivity_G == "no-collision-found");

    const auto product = product_system(twisted_cubic_L(), pad_zeros(line_G(), 3));

    for (const auto& step : cert.steps) {
        const int i = step.index;
        // prefix invariant: slots 0..i+1 are L_0 G_0 .. L_0 G_{i+1}
        for (int j = 0; j <= i + 1; ++j)
            REQUIRE(step.A_next.entries[std::size_t(j)] == product.entries[std::size_t(j)]);
        // degree invariant
        for (const auto& e : step.A_next.entries) REQUIRE(e.degree() == 4);
        // appended zero entries survive padded steps (G_2 = G_3 = 0)
        if (i >= 1) REQUIRE(step.A_next.entries[std::size_t(i) + 1].is_zero());
    }

    // final system is {L_0 G_j} syntactically
    const auto& last = cert.steps.back().A_next;
    for (int j = 0; j <= 3; ++j) REQUIRE(last.entries[std::size_t(j)] == product.entries[std::size_t(j)]);

    // direction symmetry: backward chain carries G-samples to L-samples
    Rng rng(777);
    ParametrizedVariety<Fp> sampler{1, {cert.L, cert.G}};
    for (int t = 0; t < 100; ++t) {
        auto params = sampler.sample_params(rng);
        auto start = cert.G.eval(params);
        auto pushed = detail::push_through_chain(cert.steps, start, false);
        REQUIRE(pushed.has_value());
        REQUIRE(proportional<Fp>(*pushed, cert.L.eval(params)));
    }

    // endpoint identification: A_0 is L as a map
    LinearSystem<Fp> a0({product.entries[0], product.entries[4], product.entries[8], product.entries[12]});
    CHECK(systems_equal_as_maps(a0, cert.L, 100, rng).equal);
}

TEST_CASE("self equivalence short-circuits") {
    auto L = detail::system_from_texts<Fp>({"s0", "s1", "0", "0"}, 2, 's', "L");
    auto cert = run_chain<Fp>(L, L, 1, 3, kField, 7);
    REQUIRE(cert.early_termination_step.has_value());
    CHECK(*cert.early_termination_step == 0);
    CHECK(cert.steps.empty());
    Rng rng(8);
    CHECK(verify_certificate(cert, 100, rng).ok());
}

TEST_CASE("self equivalence with the shortcut disabled") {
    auto L = twisted_cubic_L();
    ChainOptions opts;
    opts.early_termination = false;
    auto cert = run_chain<Fp>(L, L, 1, 3, kField, 7, opts);
    REQUIRE(cert.steps.size() == 3);
    for (const auto& step : cert.steps) CHECK(step.transcript.failures == 0);
    Rng rng(9);
    CHECK(verify_certificate(cert, 50, rng).ok());
}

TEST_CASE("zero leading entries are permuted away and recorded") {
    auto L = detail::system_from_texts<Fp>({"0", "s0^2", "s0*s1", "s1^2"}, 2, 's', "L");
    auto G = detail::system_from_texts<Fp>({"0", "s0", "s1"}, 2, 's', "G");
    auto cert = run_chain<Fp>(L, G, 1, 3, kField, 11);
    CHECK(cert.perm_L[0] == 1);
    CHECK(cert.perm_G[0] == 1);
    Rng rng(12);
    CHECK(verify_certificate(cert, 50, rng).ok());
}

TEST_CASE("boundary surface case n = r + 2") {
    auto L = detail::system_from_texts<Fp>({"s0^2", "s1^2", "s2^2", "s0*s1", "s0*s2"}, 3, 's', "L");
    auto G = detail::system_from_texts<Fp>({"s0", "s1", "s2"}, 3, 's', "G");
    auto cert = run_chain<Fp>(L, G, 2, 4, kField, 42);
    REQUIRE(cert.steps.size() == 4);
    Rng rng(13);
    CHECK(verify_certificate(cert, 50, rng).ok());
}

TEST_CASE("verification flags corruption with a witness") {
    auto cert = run_chain<Fp>(twisted_cubic_L(), line_G(), 1, 3, kField, 42);
    {
        Rng rng(1001);
        REQUIRE(verify_certificate(cert, 100, rng).ok());
    }
    {
        // 10x trials still passes
        Rng rng(1002);
        REQUIRE(verify_certificate(cert, 1000, rng).ok());
    }
    {
        auto bad = cert;
        bad.steps[1].phi.forward.components[2] =
            bad.steps[1].phi.forward.components[2] + MultiPoly<Fp>::parse("x0^2", 4);
        Rng rng(1003);
        auto report = verify_certificate(bad, 50, rng);
        REQUIRE_FALSE(report.ok());
        bool step1_flagged = false;
        for (const auto& f : report.failures) step1_flagged = step1_flagged || f.find("step 1") == 0;
        CHECK(step1_flagged);
    }
}

TEST_CASE("rational field end to end") {
    auto L = detail::system_from_texts<Rat>({"s0^3", "s0^2*s1", "s0*s1^2", "s1^3"}, 2, 's', "L");
    auto G = detail::system_from_texts<Rat>({"s0", "s1"}, 2, 's', "G");
    ChainOptions opts;
    opts.trials = 20;
    auto cert = run_chain<Rat>(L, G, 1, 3, FieldSpec::make_rationals(), 11, opts);
    REQUIRE(cert.steps.size() == 3);
    Rng rng(14);
    CHECK(verify_certificate(cert, 20, rng).ok());
}
