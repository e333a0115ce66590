#include <doctest.h>

#include <algorithm>

#include "gengap/groups.hpp"
#include "gengap/primes.hpp"
#include "oracles.hpp"

using namespace gengap;
using namespace gengap::groups;
using testutil::s3;

TEST_SUITE("groups") {

TEST_CASE("cyclic group basics") {
    auto g = cyclic(6);
    CHECK(g.order == 6);
    CHECK(g.e == 0);
    CHECK(g.order_of(1) == 6);
    CHECK(g.power(1, 10) == 4);
    CHECK(g.power(1, -1) == 5);
    CHECK(is_cyclic(g));
    CHECK(is_abelian(g));
    CHECK(primes_of_group(g) == std::vector<long>{2, 3});
}

TEST_CASE("trivial group has no primes") {
    CHECK(primes_of_group(trivial_group()).empty());
    CHECK(min_generators_group(trivial_group()) == 0);
    CHECK(generating_primes(trivial_group()).all_primes);
}

TEST_CASE("corrupted table is rejected") {
    auto mul = cyclic(3).mul;
    mul[1][1] = 1;  // breaks associativity/latin-square structure
    CHECK_THROWS_AS(make_group(mul, {1}, {"a"}), gg_error);
}

TEST_CASE("direct product C2 x C3 is C6 up to invariants") {
    auto g = direct_product(cyclic(2), cyclic(3));
    CHECK(g.order == 6);
    CHECK(abelian_invariants(g) == std::vector<long>{6});
    CHECK(abelian_invariants(cyclic(6)) == std::vector<long>{6});
    CHECK(is_cyclic(g));
}

TEST_CASE("abelian builder normalizes to invariant factors") {
    CHECK(abelian_invariants(abelian({2, 2})) == std::vector<long>{2, 2});
    CHECK(abelian_invariants(abelian({2, 3})) == std::vector<long>{6});
    CHECK(abelian_invariants(abelian({4, 6})) == std::vector<long>{2, 12});
    CHECK(abelian_invariants(abelian({1, 5})) == std::vector<long>{5});
}

TEST_CASE("minimal generator counts of nilpotent groups") {
    CHECK(min_generators_group(cyclic(6)) == 1);
    CHECK(min_generators_group(abelian({2, 2})) == 2);
    CHECK(min_generators_group(abelian({2, 4, 3})) == 2);  // C2 x C12
    CHECK(rank_mod_p(abelian({2, 4, 3}), 2) == 2);
    CHECK(rank_mod_p(abelian({2, 4, 3}), 3) == 1);
}

TEST_CASE("generating primes") {
    auto gp = generating_primes(abelian({2, 2}));
    CHECK_FALSE(gp.all_primes);
    CHECK(gp.primes == std::vector<long>{2});
    gp = generating_primes(cyclic(6));
    CHECK(gp.primes == std::vector<long>{2, 3});  // every prime of |G| works for cyclic
}

TEST_CASE("non-nilpotent groups are refused by nilpotent-only counts") {
    auto g = s3();
    CHECK(g.order == 6);
    CHECK_FALSE(is_abelian(g));
    CHECK_FALSE(is_nilpotent(g));
    CHECK_THROWS_AS(min_generators_group(g), hypothesis_error);
    CHECK_THROWS_AS(nilpotent_product_factor(g, 1, "bad"), hypothesis_error);
    // commutator subgroup of S3 is A3
    CHECK(commutator_subgroup(g).size() == 3);
}

TEST_CASE("word parsing and algebra") {
    std::vector<std::string> ab{"x", "c"};
    auto w = parse_word("x^2*c^-1", ab);
    REQUIRE(w.syllables.size() == 2);
    CHECK(w.syllables[0] == std::pair<int, long>{0, 2});
    CHECK(w.syllables[1] == std::pair<int, long>{1, -1});
    auto comm = parse_word("[x,c]", ab);
    CHECK(word_to_string(comm, ab) == "x*c*x^-1*c^-1");
    CHECK(word_mul(w, word_inverse(w)).syllables.empty());
    CHECK(word_to_string(parse_word("(x c)^2", ab), ab) == "x*c*x*c");
    CHECK_THROWS_AS(parse_word("q", ab), gg_error);        // undeclared letter
    CHECK_THROWS_AS(parse_word("x^", ab), gg_error);       // dangling exponent
    CHECK(parse_word("x^0", ab).syllables.empty());
}

TEST_CASE("natural abelian presentations validate") {
    auto g = abelian({2, 2});
    auto p = natural_abelian_presentation({2, 2});
    CHECK(p.free_rank() == 2);
    CHECK(p.relators.size() == 3);  // x^2, y^2, [x,y]
    validate_presentation(g, p, default_images(g, p));

    auto c6 = cyclic(6);
    auto pc = natural_abelian_presentation({6});
    validate_presentation(c6, pc, default_images(c6, pc));

    // wrong images: relator fails
    CHECK_THROWS_AS(validate_presentation(cyclic(4), natural_abelian_presentation({2}), {1}),
                    gg_error);
    // images that do not generate
    auto p22 = natural_abelian_presentation({2, 2});
    CHECK_THROWS_AS(validate_presentation(abelian({2, 2}), p22, {0, 0}), gg_error);
}

TEST_CASE("factor specs") {
    auto f = cyclic_times_z_factor(3);
    CHECK(f.infinite());
    CHECK(factor_min_generators(f) == 2);
    CHECK(factor_group_primes(f) == std::vector<long>{3});

    auto nf = nilpotent_product_factor(abelian({2, 2}), 1, "Nil(C2xC2,rank=1)");
    CHECK(factor_min_generators(nf) == 3);

    auto ff = finite_factor(cyclic(5), "C5");
    CHECK_FALSE(ff.infinite());
    CHECK(factor_min_generators(ff) == 1);

    auto zf = nilpotent_product_factor(trivial_group(), 2, "Z^2");
    CHECK(factor_min_generators(zf) == 2);
}

TEST_CASE("prime utilities") {
    CHECK(primes::factor_primes(12L) == std::vector<long>{2, 3});
    CHECK(primes::factor_primes(1L).empty());
    CHECK(primes::next_prime_after(7) == 11);
    CHECK(primes::smallest_prime_outside({2, 3}) == 5);
    CHECK(primes::valuation(24, 2) == 3);
    CHECK(primes::factor_primes(mpz_class(63)) == std::vector<long>{3, 7});
}

} // TEST_SUITE
