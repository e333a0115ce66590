#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "gengap/error.hpp"
#include "gengap/formulas.hpp"
#include "gengap/groups.hpp"
#include "oracles.hpp"

using namespace gengap;
using namespace gengap::formulas;
using groups::FactorSpec;
using groups::cyclic_times_z_factor;
using groups::finite_factor;
using groups::nilpotent_product_factor;

namespace {

FactorSpec cyc(long n) {
    return finite_factor(groups::cyclic(n), "C" + std::to_string(n));
}

FactorSpec elab(long p, int rank) {
    std::vector<long> inv(rank, p);
    std::string label = "C" + std::to_string(p);
    for (int i = 1; i < rank; ++i) label += "xC" + std::to_string(p);
    return finite_factor(groups::abelian(inv), label);
}

const PrimeRow& row_at(const FormulaReport& r, long p) {
    for (const auto& row : r.table)
        if (row.p == p) return row;
    FAIL("no row for p = " << p);
    return r.table.front();
}

const PrimeRow& good_row(const FormulaReport& r) {
    for (const auto& row : r.table)
        if (row.good) return row;
    FAIL("no generic row");
    return r.table.front();
}

std::string quantity(const FormulaReport& r, const std::string& key) {
    for (const auto& [k, v] : r.quantities)
        if (k == key) return v;
    FAIL("no quantity " << key);
    return "";
}

// Every report must satisfy: result is the table max, each row dominates the
// generic row, and the max is witnessed away from the generic prime.
void check_table_shape(const FormulaReport& r) {
    int mx = 0;
    for (const auto& row : r.table) {
        CHECK(row.sum >= good_row(r).sum);
        int s = 0;
        for (int ccount : row.components) s += ccount;
        CHECK(s == row.sum);
        mx = std::max(mx, row.sum);
    }
    CHECK(r.result == mx);
    bool away = false;
    for (const auto& row : r.table)
        if (!row.good && row.sum == mx) away = true;
    CHECK(away);
    for (long p : r.argmax) CHECK(row_at(r, p).sum == mx);
}

} // namespace

TEST_SUITE("formulas") {

TEST_CASE("prime support and the generic prime") {
    auto pr = augmentation_problem({cyc(6), cyc(35)});
    CHECK(prime_support(pr) == std::vector<long>{2, 3, 5, 7});
    CHECK(good_prime(pr) == 11);

    auto mixed = augmentation_problem({cyclic_times_z_factor(2), cyclic_times_z_factor(3)});
    CHECK(prime_support(mixed) == std::vector<long>{2, 3});
    CHECK(good_prime(mixed) == 5);
}

TEST_CASE("per-prime counts of induced modules") {
    CHECK(bergman_mod_p(augmentation_problem({cyc(2), cyc(3)}), 2) == 2);
    CHECK(bergman_mod_p(augmentation_problem({cyc(2), cyc(3)}), 3) == 2);
    CHECK(bergman_mod_p(augmentation_problem({cyc(2), cyc(3)}), 5) == 2);

    auto rel = relation_problem({cyclic_times_z_factor(2), cyclic_times_z_factor(3)});
    CHECK(bergman_mod_p(rel, 2) == 3);
    CHECK(bergman_mod_p(rel, 3) == 3);
    CHECK(bergman_mod_p(rel, 5) == 2);

    CHECK_THROWS_AS(bergman_mod_p(rel, 4), gg_error);
    CHECK_THROWS_AS(bergman_mod_p(rel, 1), gg_error);
}

TEST_CASE("factor realization rejects unusable shapes") {
    CHECK_THROWS_WITH_AS(realize_factors(augmentation_problem({})),
                         doctest::Contains("at least one factor"), gg_error);
    CHECK_THROWS_WITH_AS(
        realize_factors(augmentation_problem({finite_factor(groups::trivial_group(), "1")})),
        doctest::Contains("trivial group"), gg_error);
    CHECK_THROWS_WITH_AS(
        realize_factors(relation_problem({finite_factor(testutil::s3(), "S3")})),
        doctest::Contains("explicit presentation"), gg_error);
    CHECK_THROWS_WITH_AS(
        realize_factors(relation_problem({nilpotent_product_factor(groups::cyclic(2), 1, "C2xZ")})),
        doctest::Contains("not supported"), gg_error);
}

TEST_CASE("d_induced on the two-factor mixed relation problem") {
    auto r = d_induced(relation_problem({cyclic_times_z_factor(2), cyclic_times_z_factor(3)}));
    CHECK(r.result == 3);
    CHECK(r.argmax == std::vector<long>{2, 3});
    CHECK(row_at(r, 2).components == std::vector<int>{2, 1});
    CHECK(row_at(r, 3).components == std::vector<int>{1, 2});
    CHECK(good_row(r).sum == 2);
    CHECK(!r.hypotheses.empty());
    check_table_shape(r);
}

TEST_CASE("augmentation ideals of coprime finite free products") {
    auto r = coprime_augmentation(augmentation_problem({cyc(2), cyc(3)}));
    CHECK(r.result == 2);
    CHECK(r.gap == 0);
    CHECK(quantity(r, "d(G)") == "2");
    CHECK(quantity(r, "gap_zero_predicate") == "met");
    check_table_shape(r);

    auto r2 = coprime_augmentation(augmentation_problem({elab(2, 2), cyc(3)}));
    CHECK(r2.result == 3);
    CHECK(r2.gap == 0);
    CHECK(r2.argmax == std::vector<long>{2});
    CHECK(quantity(r2, "d_aug(C2xC2)") == "2");

    auto r3 = coprime_augmentation(augmentation_problem({elab(2, 2), elab(3, 2)}));
    CHECK(r3.result == 3);
    CHECK(r3.gap == 1);
    CHECK(quantity(r3, "d(G)") == "4");
    CHECK(quantity(r3, "gap_zero_predicate") == "not met");
    CHECK(row_at(r3, 2).components == std::vector<int>{2, 1});
    CHECK(row_at(r3, 3).components == std::vector<int>{1, 2});
    check_table_shape(r3);
}

TEST_CASE("nonabelian factors go through the same augmentation formula") {
    auto r = coprime_augmentation(
        augmentation_problem({finite_factor(testutil::s3(), "S3"), cyc(5)}));
    CHECK(r.result == 3);
    CHECK(r.gap == 0);  // d(S3 * C5) = 3 and the count reaches 2 + 1 at p = 3
    CHECK(row_at(r, 2).components == std::vector<int>{1, 1});
    CHECK(row_at(r, 3).components == std::vector<int>{2, 1});
    CHECK(row_at(r, 5).components == std::vector<int>{1, 1});
    CHECK(quantity(r, "d(S3)") == "2");
    check_table_shape(r);
}

TEST_CASE("coprime augmentation hypothesis failures") {
    CHECK_THROWS_WITH_AS(
        coprime_augmentation(augmentation_problem({cyc(2), cyc(6)})),
        doctest::Contains("are coprime"), hypothesis_error);
    CHECK_THROWS_WITH_AS(
        coprime_augmentation(augmentation_problem({cyclic_times_z_factor(2), cyc(3)})),
        doctest::Contains("is finite"), hypothesis_error);
    CHECK_THROWS_WITH_AS(
        coprime_augmentation(relation_problem({cyc(2), cyc(3)})),
        doctest::Contains("expects an augmentation problem"), gg_error);
}

TEST_CASE("relation modules of coprime finite free products") {
    auto pres1 = groups::natural_abelian_presentation({2});
    auto f2 = cyc(2);
    f2.presentation = pres1;  // explicit presentation takes the same route
    auto r = coprime_relation(relation_problem({f2, cyc(3)}));
    CHECK(r.result == 2);
    CHECK(r.adef == 0);
    CHECK(quantity(r, "d(F)") == "2");
    check_table_shape(r);

    auto r2 = coprime_relation(relation_problem({elab(2, 2), elab(3, 2)}));
    CHECK(r2.result == 5);
    CHECK(r2.adef == 1);
    CHECK(row_at(r2, 2).components == std::vector<int>{3, 2});
    CHECK(row_at(r2, 3).components == std::vector<int>{2, 3});
    CHECK(good_row(r2).sum == 4);
    check_table_shape(r2);

    auto r3 = coprime_relation(relation_problem({elab(2, 2), elab(3, 2), elab(5, 2)}));
    CHECK(r3.result == 7);
    CHECK(r3.adef == 1);
    CHECK(good_row(r3).sum == 6);

    auto r4 = coprime_relation(relation_problem({elab(2, 2)}));
    CHECK(r4.result == 3);
    CHECK(r4.adef == 1);
    CHECK(good_row(r4).p == 3);
    CHECK(quantity(r4, "d_rel(C2xC2)") == "3");
    CHECK(quantity(r4, "d_free(C2xC2)") == "2");
}

TEST_CASE("augmentation ideals with free-abelian directions") {
    auto r = mixed_augmentation(
        augmentation_problem({cyclic_times_z_factor(2), cyclic_times_z_factor(3)}));
    CHECK(r.result == 3);
    CHECK(r.gap == 1);
    CHECK(row_at(r, 2).sum == 3);
    CHECK(row_at(r, 3).sum == 3);
    CHECK(good_row(r).sum == 2);
    CHECK(quantity(r, "d(H)") == "4");
    CHECK(quantity(r, "torsion_free_or_cyclic_criterion") == "not met");
    check_table_shape(r);

    auto r2 = mixed_augmentation(augmentation_problem({cyclic_times_z_factor(2), cyc(3)}));
    CHECK(r2.result == 3);
    CHECK(r2.gap == 0);
    CHECK(quantity(r2, "torsion_free_or_cyclic_criterion") == "met");

    auto r3 = mixed_augmentation(augmentation_problem({cyclic_times_z_factor(2)}));
    CHECK(r3.result == 2);
    CHECK(r3.gap == 0);

    // rank-2 torsion beside a free direction: counts are d + rank on pi(G)
    auto r4 = mixed_augmentation(
        augmentation_problem({nilpotent_product_factor(groups::abelian({2, 2}), 1, "C2xC2 x Z"),
                              cyc(3)}));
    CHECK(r4.result == 4);
    CHECK(row_at(r4, 2).components == std::vector<int>{3, 1});
    CHECK(row_at(r4, 3).components == std::vector<int>{1, 1});
    CHECK(good_row(r4).sum == 2);
    check_table_shape(r4);
}

TEST_CASE("mixed augmentation rejects factors violating abelianized generation") {
    CHECK_THROWS_WITH_AS(
        mixed_augmentation(
            augmentation_problem({finite_factor(testutil::s3(), "S3"), cyclic_times_z_factor(5)})),
        doctest::Contains("equals d(G/G')"), hypothesis_error);
}

TEST_CASE("relation modules of C_n x Z free products") {
    auto r = mixed_relation(
        relation_problem({cyclic_times_z_factor(2), cyclic_times_z_factor(3)}));
    CHECK(r.result == 3);
    CHECK(row_at(r, 2).components == std::vector<int>{2, 1});
    CHECK(good_row(r).sum == 2);
    check_table_shape(r);

    CHECK(mixed_relation(relation_problem({cyclic_times_z_factor(2)})).result == 2);
    CHECK(mixed_relation(relation_problem({cyclic_times_z_factor(2), cyclic_times_z_factor(3),
                                           cyclic_times_z_factor(5)}))
              .result == 4);

    CHECK_THROWS_WITH_AS(
        mixed_relation(relation_problem({cyclic_times_z_factor(2), cyclic_times_z_factor(4)})),
        doctest::Contains("are coprime"), hypothesis_error);
    CHECK_THROWS_WITH_AS(mixed_relation(relation_problem({cyc(2), cyclic_times_z_factor(3)})),
                         doctest::Contains("C_n x Z"), hypothesis_error);
    CHECK_THROWS_WITH_AS(
        mixed_relation(augmentation_problem({cyclic_times_z_factor(2)})),
        doctest::Contains("expects a relation problem"), gg_error);
}

TEST_CASE("kernels of periodic resolutions over free products") {
    auto pr = augmentation_problem({cyc(2), cyc(3)});
    auto r1 = resolution_kernel_count(pr, 1);
    CHECK(r1.result == 2);
    CHECK(quantity(r1, "stage") == "1");
    CHECK(row_at(r1, 2).components == std::vector<int>{1, 1});
    check_table_shape(r1);

    CHECK(resolution_kernel_count(pr, 3).result == 2);
    CHECK(resolution_kernel_count(pr, 1, {2, 2}).result == 2);

    // s + 2 = 0 mod 2 hits the period: stages 0 and 2 are excluded
    CHECK_THROWS_WITH_AS(resolution_kernel_count(pr, 0),
                         doctest::Contains("not a multiple of the period"), hypothesis_error);
    CHECK_THROWS_WITH_AS(resolution_kernel_count(pr, 2),
                         doctest::Contains("not a multiple of the period"), hypothesis_error);
    CHECK_THROWS_AS(resolution_kernel_count(pr, -1), gg_error);
    CHECK_THROWS_WITH_AS(resolution_kernel_count(pr, 1, {2}),
                         doctest::Contains("one entry per factor"), gg_error);
    CHECK_THROWS_WITH_AS(resolution_kernel_count(pr, 1, {2, 4}),
                         doctest::Contains("period"), hypothesis_error);
    CHECK_THROWS_WITH_AS(
        resolution_kernel_count(augmentation_problem({elab(2, 2), cyc(3)}), 1),
        doctest::Contains("finite cyclic"), hypothesis_error);
}

TEST_CASE("constructive gap-zero proofs for nilpotent factors") {
    auto gz = nilpotent_gap_zero(
        augmentation_problem({elab(2, 2), nilpotent_product_factor(groups::trivial_group(), 1, "Z")}));
    CHECK(gz.criterion_met);
    CHECK(gz.q == 2);
    CHECK(gz.assigned == std::vector<long>{2, 2});
    CHECK(gz.absorbed == std::vector<int>{0, 1});
    CHECK(gz.quotients == std::vector<std::vector<long>>{{2, 2}, {2}});
    CHECK(gz.d_free_product == 3);
    CHECK(gz.quotient_check.result == 3);

    auto gz2 = nilpotent_gap_zero(augmentation_problem({cyc(6), cyc(35)}));
    CHECK(gz2.criterion_met);
    CHECK(gz2.q == 2);
    CHECK(gz2.assigned == std::vector<long>{2, 5});
    CHECK(gz2.absorbed == std::vector<int>{0});
    CHECK(gz2.d_free_product == 2);
    CHECK(gz2.quotient_check.result == 2);

    auto gz3 = nilpotent_gap_zero(augmentation_problem({elab(2, 2), elab(3, 2)}));
    CHECK(!gz3.criterion_met);
    CHECK(gz3.reason.find("C2xC2") != std::string::npos);
    CHECK(gz3.reason.find("C3xC3") != std::string::npos);

    CHECK_THROWS_WITH_AS(nilpotent_gap_zero(relation_problem({cyc(2)})),
                         doctest::Contains("expects an augmentation problem"), gg_error);
    CHECK_THROWS_WITH_AS(
        nilpotent_gap_zero(augmentation_problem({finite_factor(testutil::s3(), "S3")})),
        doctest::Contains("nilpotent"), hypothesis_error);
}

TEST_CASE("coprime-exponent one-relator products") {
    auto r = bridson_tweedale({2, 3});
    CHECK(r.result == 3);
    CHECK(quantity(r, "q_2") == "8");
    CHECK(quantity(r, "q_3") == "63");
    CHECK(quantity(r, "c_2") == "16");
    CHECK(quantity(r, "c_3") == "189");
    CHECK(row_at(r, 2).components == std::vector<int>{2, 1});
    CHECK(row_at(r, 3).components == std::vector<int>{1, 2});
    CHECK(good_row(r).sum == 2);
    check_table_shape(r);

    CHECK(bridson_tweedale({2}).result == 2);

    CHECK_THROWS_WITH_AS(bridson_tweedale({2, 4}), doctest::Contains("gcd(q_2, q_4)"),
                         hypothesis_error);
    CHECK_THROWS_WITH_AS(bridson_tweedale({1, 2}), doctest::Contains("at least 2"),
                         hypothesis_error);
    CHECK_THROWS_WITH_AS(bridson_tweedale({}), doctest::Contains("at least one"), gg_error);
}

TEST_CASE("closed forms match the per-prime tables across a small sweep") {
    std::vector<std::vector<FactorSpec>> probs = {
        {cyc(2), cyc(3)},  {cyc(4), cyc(9)},          {elab(2, 2), cyc(5)},
        {cyc(6), cyc(35)}, {elab(3, 2), elab(5, 2)},
    };
    for (const auto& fs : probs) {
        auto a = coprime_augmentation(augmentation_problem(fs));
        check_table_shape(a);
        CHECK(a.result == d_induced(augmentation_problem(fs)).result);
        auto rel = coprime_relation(relation_problem(fs));
        check_table_shape(rel);
        CHECK(rel.result == d_induced(relation_problem(fs)).result);
    }
}

} // TEST_SUITE
