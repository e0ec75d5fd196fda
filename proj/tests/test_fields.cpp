#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "cremona/fields.hpp"
#include "cremona/rng.hpp"

using namespace cremona;

TEST_CASE("deterministic primality") {
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK(is_prime(5));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(91));          // 7 * 13
    CHECK_FALSE(is_prime(561));         // Carmichael
    CHECK(is_prime(1000000007ULL));
    CHECK(is_prime(kMersenne61));
    CHECK_FALSE(is_prime(kMersenne61 - 2));
    CHECK_FALSE(is_prime((u64{1} << 61) + 1));
}

TEST_CASE("modulus validation") {
    CHECK_THROWS_AS(Fp::set_modulus(91), parse_error);
    CHECK_THROWS_AS(FieldSpec::make_prime(15), parse_error);
    FieldSpec s = FieldSpec::make_prime(kMersenne61);
    CHECK(s.description() == "F_2305843009213693951");
    CHECK(FieldSpec::make_rationals().description() == "rationals");
}

TEST_CASE("prime field arithmetic is canonical") {
    CHECK(Fp::modulus() == kMersenne61);
    Fp a = Fp::from_int(-1);
    CHECK(a.raw() == kMersenne61 - 1);
    CHECK(a.to_string() == "-1");
    CHECK((a + Fp::one()).is_zero());
    CHECK((Fp::from_int(7) * Fp::from_int(7).inverse()) == Fp::one());
    CHECK_THROWS_AS(Fp::zero().inverse(), error);
    CHECK(Fp::parse("2305843009213693952") == Fp::one());  // p + 1
    CHECK(Fp::parse("-3/4") == Fp::from_int(-3) / Fp::from_int(4));

    FpScope scope(5);
    CHECK(Fp::from_int(2) * Fp::from_int(3) == Fp::one());  // 6 mod 5
    CHECK(Fp::from_int(-1).to_string() == "-1");
}

TEST_CASE("mersenne fast path agrees with generic reduction") {
    Rng rng(314);
    for (int i = 0; i < 2000; ++i) {
        u64 a = rng.below(kMersenne61), b = rng.below(kMersenne61);
        u64 fast = detail::mulmod(a, b, kMersenne61);
        u64 slow = u64((u128{a} * b) % kMersenne61);
        REQUIRE(fast == slow);
    }
}

TEST_CASE("rationals are canonical") {
    Rat x = Rat::parse("-6/8");
    CHECK(x.to_string() == "-3/4");
    CHECK(Rat::parse("3/4") + Rat::parse("1/4") == Rat::one());
    CHECK((Rat::from_int(2) / Rat::from_int(-4)).to_string() == "-1/2");
    CHECK_THROWS_AS(Rat::parse("1/0"), parse_error);
    CHECK_THROWS_AS(Rat::zero().inverse(), error);
    CHECK(Rat::parse("123456789012345678901234567890").to_string() == "123456789012345678901234567890");
}

TEST_CASE("seeded draws are reproducible") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());

    Rng r(42);
    CHECK(r.next() == 13679457532755275413ULL);
    CHECK(r.next() == 2949826092126892291ULL);
    CHECK(r.next() == 5139283748462763858ULL);
}

TEST_CASE("uniform sampling stays in range and avoids repeats") {
    Rng rng(1234);
    // 10^4 nonzero draws over F_p: a repeat among so few values from a
    // ~2^61 set is far past the birthday bound
    std::set<u64> seen;
    for (int i = 0; i < 10000; ++i) {
        Fp x = Fp::random_nonzero(rng);
        REQUIRE(x.raw() >= 1);
        REQUIRE(x.raw() < Fp::modulus());
        seen.insert(x.raw());
    }
    CHECK(seen.size() == 10000);

    // small bounds are exercised exactly
    Rng r2(9);
    for (int i = 0; i < 1000; ++i) REQUIRE(r2.below(3) < 3);
}
