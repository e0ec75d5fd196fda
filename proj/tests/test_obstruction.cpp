#include <catch2/catch_amalgamated.hpp>

#include "cremona/fields.hpp"
#include "cremona/obstruction.hpp"
#include "cremona/projective.hpp"
#include "cremona/rng.hpp"

using namespace cremona;

namespace {

DivisorialInput nodal(int n, int d, int count) {
    DivisorialInput in;
    in.n = n;
    in.d = d;
    for (int i = 0; i < count; ++i) in.singularities.push_back({2, true});
    return in;
}

}  // namespace

TEST_CASE("discrepancy arithmetic is exact") {
    auto sextic = check_obstruction(nodal(2, 6, 3));
    REQUIRE(sextic.discrepancies.size() == 3);
    CHECK(sextic.discrepancies[0] == Rat::zero());  // 1 - (3/6)*2
    CHECK(sextic.obstructed);

    auto quintic = check_obstruction(nodal(2, 5, 2));
    CHECK(quintic.discrepancies[0] == Rat::parse("-1/5"));
    CHECK_FALSE(quintic.obstructed);

    DivisorialInput triple{2, 6, {{3, true}}};
    auto rep = check_obstruction(triple);
    CHECK(rep.discrepancies[0] == Rat::parse("-1/2"));
    CHECK_FALSE(rep.obstructed);

    CHECK_THROWS_AS(check_obstruction(DivisorialInput{2, 1, {}}), parse_error);
}

TEST_CASE("non-ordinary singularities are never certified") {
    DivisorialInput in{2, 9, {{2, true}, {2, false}}};
    auto rep = check_obstruction(in);
    CHECK(rep.discrepancies[0] == Rat::parse("1/3"));  // 1 - (3/9)*2, would qualify
    CHECK_FALSE(rep.obstructed);
}

TEST_CASE("threshold for nodal plane curves sits at degree six") {
    for (int d = 2; d <= 20; ++d) {
        auto rep = check_obstruction(nodal(2, d, 4));
        CHECK(rep.obstructed == (d >= 6));
    }
}

TEST_CASE("obstruction is monotone in the degree") {
    for (int n = 2; n <= 5; ++n)
        for (int m = 2; m <= 4; ++m) {
            int first_obstructed = -1;
            for (int d = 2; d <= 30; ++d) {
                DivisorialInput in{n, d, {{m, true}}};
                if (check_obstruction(in).obstructed) {
                    first_obstructed = d;
                    break;
                }
            }
            if (first_obstructed < 0) continue;
            for (int d = first_obstructed; d <= 30; ++d) {
                DivisorialInput in{n, d, {{m, true}}};
                REQUIRE(check_obstruction(in).obstructed);
            }
        }
}

TEST_CASE("nodal curve generator") {
    Rng rng(7);
    auto curve = gen_nodal_curve<Fp>(5, rng);
    REQUIRE(curve.system.size() == 3);
    CHECK(curve.system.degree == 6);
    for (const auto& e : curve.system.entries) CHECK(e.degree() == 6);
    CHECK(curve.expected_nodes == 10);

    // degree-6 nodal data feeds the obstruction positively
    CHECK(check_obstruction(nodal(2, 6, curve.expected_nodes)).obstructed);

    // the projected curve is rational of the full degree: no collisions
    Rng fresh(71);
    CHECK_FALSE(generic_injectivity_heuristic(curve.system.induced_map(), 100, fresh).collision_found);

    // a = 2 gives the cubic with one node: not obstructed (and indeed such
    // curves are linearizable, though the tool does not claim that)
    auto cubic = gen_nodal_curve<Fp>(2, rng);
    CHECK(cubic.system.degree == 3);
    CHECK_FALSE(check_obstruction(nodal(2, 3, 1)).obstructed);

    CHECK_THROWS_AS(gen_nodal_curve<Fp>(1, rng), parse_error);
}

TEST_CASE("generator works over the rationals") {
    Rng rng(19);
    auto curve = gen_nodal_curve<Rat>(3, rng);
    CHECK(curve.system.degree == 4);
    CHECK(curve.expected_nodes == 3);
}
