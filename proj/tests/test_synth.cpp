#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "gengap/builders.hpp"
#include "gengap/error.hpp"
#include "gengap/formulas.hpp"
#include "gengap/gmodule.hpp"
#include "gengap/groups.hpp"
#include "gengap/induced.hpp"
#include "gengap/synth.hpp"
#include "oracles.hpp"

using namespace gengap;
using exactla::IntMat;
using formulas::ModuleKind;
using groups::FactorSpec;

namespace {

gring::GroupPtr gp(groups::FiniteGroup g) { return gring::share(std::move(g)); }

FactorSpec cyc(long n) {
    return groups::finite_factor(groups::cyclic(n), "C" + std::to_string(n));
}

bool has_note(const std::vector<std::string>& notes, const std::string& needle) {
    for (const auto& n : notes)
        if (n.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_SUITE("synth") {

TEST_CASE("nested family on a cyclic augmentation ideal matches the CRT shape") {
    auto m = builders::augmentation_lattice(gp(groups::cyclic(2)));
    auto f = synth::build_nested_family(m, {2, 3});
    REQUIRE(f.primes == std::vector<long>{2, 3});
    REQUIRE(f.counts == std::vector<int>{1, 1});
    REQUIRE(f.rows.rows == 1);
    // alpha_2 = 3, alpha_3 = 4 and both greedy picks are a - 1
    CHECK(f.rows.at(0, 0) == 7);

    auto m3 = builders::augmentation_lattice(gp(groups::cyclic(3)));
    auto f3 = synth::build_nested_family(m3, {2, 3});
    CHECK(f3.counts == std::vector<int>{1, 1});
    CHECK(f3.rows.at(0, 0) == 7);
    CHECK(f3.rows.at(0, 1) == 0);
}

TEST_CASE("nested family pads shorter member sets with zero rows") {
    auto m = builders::augmentation_lattice(gp(groups::abelian({2, 2})));
    auto f = synth::build_nested_family(m, {2, 3});
    REQUIRE(f.primes == std::vector<long>{2, 3});
    REQUIRE(f.counts == std::vector<int>{2, 1});
    REQUIRE(f.rows.rows == 2);
    // the second row exists only in the mod-2 member: a pure alpha_2 multiple
    bool second_nonzero = false;
    for (int c = 0; c < f.rows.cols; ++c) {
        CHECK(f.rows.at(1, c) % 3 == 0);
        if (f.rows.at(1, c) != 0) second_nonzero = true;
    }
    CHECK(second_nonzero);
    auto lines = synth::check_nested_counts(m, f);
    CHECK(lines.size() == 1);  // one ordered pair of primes
    CHECK(lines.front().find("= 2 - 1") != std::string::npos);
}

TEST_CASE("nested family input validation") {
    auto m = builders::augmentation_lattice(gp(groups::cyclic(2)));
    CHECK_THROWS_AS(synth::build_nested_family(m, {}), gg_error);
    CHECK_THROWS_AS(synth::build_nested_family(m, {4}), gg_error);
    CHECK_THROWS_AS(synth::residual_count(m, IntMat(1, 5), 2), gg_error);
}

TEST_CASE("nested families hold their residual-count identity on random windows") {
    testutil::Rng rng(0xfeedbeef);
    std::vector<long> pool{2, 3, 5, 7};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<long> orders;
        for (int i = 0, k = (int)rng.range(1, 2); i < k; ++i)
            orders.push_back(pool[rng.range(0, 2)]);
        auto m = builders::augmentation_lattice(gp(groups::abelian(orders)));
        std::vector<long> pi;
        for (long p : pool)
            if (rng.range(0, 1)) pi.push_back(p);
        if (pi.empty()) pi.push_back(pool[rng.range(0, 3)]);

        auto f = synth::build_nested_family(m, pi);
        REQUIRE(f.primes.size() == pi.size());
        for (size_t i = 1; i < f.counts.size(); ++i)
            CHECK(f.counts[i] <= f.counts[i - 1]);
        // each prefix generates exactly at its prime
        for (size_t i = 0; i < f.primes.size(); ++i) {
            IntMat prefix(f.counts[i], f.rows.cols);
            for (int r = 0; r < f.counts[i]; ++r) prefix.a[r] = f.rows.a[r];
            CHECK(synth::residual_count(m, prefix, f.primes[i]) == 0);
        }
        CHECK_NOTHROW(synth::check_nested_counts(m, f));
    }
}

TEST_CASE("good-module witness for a cyclic group passes off the claimed set") {
    auto m = builders::augmentation_lattice(gp(groups::cyclic(6)));
    auto w = synth::check_good(m, {2, 3}, {2, 3, 5});
    CHECK(w.passed);
    CHECK(w.delta == 1);
    CHECK(w.exponent == 31);
    CHECK(w.constant_primes == std::vector<long>{5, 7, 11, 13});
    for (auto& [p, c] : w.outside_counts) CHECK(c <= 1);
}

TEST_CASE("good-module witness for a relation module of V4") {
    auto g = gp(groups::abelian({2, 2}));
    auto rel = builders::relation_lattice(g, groups::natural_abelian_presentation({2, 2}));
    auto w = synth::check_good(rel.lat, {2}, {2, 3});
    CHECK(w.passed);
    CHECK(w.delta == 2);
    CHECK(w.exponent == 56);
    CHECK(!w.rechosen);
}

TEST_CASE("good-module witness is vacuous on the zero lattice") {
    auto m = builders::augmentation_lattice(gp(groups::trivial_group()));
    auto w = synth::check_good(m, {2}, {2, 3});
    CHECK(w.passed);
    CHECK(w.note.find("zero lattice") != std::string::npos);
}

TEST_CASE("good-module witness validates its prime windows") {
    auto m = builders::augmentation_lattice(gp(groups::cyclic(6)));
    CHECK_THROWS_AS(synth::check_good(m, {7}, {2, 3}), gg_error);
    CHECK_THROWS_AS(synth::check_good(m, {2}, {2}), gg_error);
}

TEST_CASE("relation generator of C_n x Z traps the module with exponent n^2") {
    for (long n : {2L, 3L}) {
        auto ifg = synth::infinite_factor_generators(groups::cyclic_times_z_factor(n),
                                                     ModuleKind::Relation);
        REQUIRE(ifg.x.size() == 1);
        CHECK(ifg.exponent == n * n);
        CHECK(ifg.exponent_bound == n * n);
        REQUIRE(ifg.identities.size() == 3);
        for (auto& idr : ifg.identities) CHECK(idr.holds);
        CHECK(has_note(ifg.notes, "exponent " + std::to_string(n * n) + " certified"));
    }
    // regeneration happens at the first two primes coprime to n
    auto i2 = synth::infinite_factor_generators(groups::cyclic_times_z_factor(2),
                                                ModuleKind::Relation);
    CHECK(has_note(i2.notes, "X ZH + 3 * module"));
    CHECK(has_note(i2.notes, "X ZH + 5 * module"));
    auto i3 = synth::infinite_factor_generators(groups::cyclic_times_z_factor(3),
                                                ModuleKind::Relation);
    CHECK(has_note(i3.notes, "X ZH + 2 * module"));
}

TEST_CASE("augmentation generator of C_n x Z reaches exponent |G|^2") {
    auto ifg = synth::infinite_factor_generators(groups::cyclic_times_z_factor(2),
                                                 ModuleKind::Augmentation);
    REQUIRE(ifg.x.size() == 1);
    CHECK(ifg.exponent == 4);
    CHECK(ifg.exponent_bound == 4);
    REQUIRE(ifg.identities.size() == 1);
    CHECK(ifg.identities.front().holds);
}

TEST_CASE("augmentation generator of Z alone is c - 1") {
    auto f = groups::nilpotent_product_factor(groups::trivial_group(), 1, "Z");
    auto ifg = synth::infinite_factor_generators(f, ModuleKind::Augmentation);
    REQUIRE(ifg.x.size() == 1);
    CHECK(ifg.exponent == 1);
    auto pr = formulas::augmentation_problem({f});
    auto sp = induced::make_induced_space(pr);
    CHECK(ifg.x.front() == induced::basis_element(sp, 0, 0, 1));
}

TEST_CASE("single-factor generators reject unsupported shapes") {
    CHECK_THROWS_AS(synth::infinite_factor_generators(cyc(2), ModuleKind::Relation),
                    hypothesis_error);
    CHECK_THROWS_AS(synth::infinite_factor_generators(cyc(2), ModuleKind::Augmentation),
                    hypothesis_error);
    auto wide = groups::nilpotent_product_factor(groups::cyclic(2), 2, "C2*Z2");
    CHECK_THROWS_AS(synth::infinite_factor_generators(wide, ModuleKind::Augmentation),
                    gg_error);
}

TEST_CASE("synthesis over coprime finite factors returns the factor generators") {
    auto pr = formulas::augmentation_problem({cyc(2), cyc(3)});
    auto cert = synth::synthesize_generators(pr);
    auto rep = formulas::d_induced(pr);
    REQUIRE((int)cert.x.size() == rep.result);
    CHECK(cert.x.size() == 2);
    CHECK(cert.exponent == 1);
    CHECK(cert.complete);
    auto sp = induced::make_induced_space(pr);
    CHECK(cert.x[0] == induced::basis_element(sp, 0, 0));  // (a-1) x 1
    CHECK(cert.x[1] == induced::basis_element(sp, 1, 0));  // (b-1) x 1
    for (auto& s : cert.systems) CHECK(s.depth <= 3);
}

TEST_CASE("synthesis spends the defect budget on a CRT level when counts clash") {
    auto v4 = groups::finite_factor(groups::abelian({2, 2}), "V4");
    auto pr = formulas::augmentation_problem({v4, cyc(3)});
    auto cert = synth::synthesize_generators(pr);
    CHECK(cert.x.size() == 3);
    CHECK(cert.complete);
    CHECK(has_note(cert.provenance, "CRT level 1"));
    auto vr = synth::verify_certificate(cert, pr);
    CHECK(vr.status == synth::VerifyStatus::Verified);
}

TEST_CASE("synthesis handles a pair of elementary abelian factors") {
    auto v4 = groups::finite_factor(groups::abelian({2, 2}), "V4");
    auto c33 = groups::finite_factor(groups::abelian({3, 3}), "C3xC3");
    auto pr = formulas::augmentation_problem({v4, c33});
    auto cert = synth::synthesize_generators(pr);
    CHECK(cert.x.size() == 3);
    CHECK(cert.complete);
}

TEST_CASE("mixed relation synthesis reproduces the two-prime CRT combination") {
    auto pr = formulas::relation_problem(
        {groups::cyclic_times_z_factor(2), groups::cyclic_times_z_factor(3)});
    auto cert = synth::synthesize_generators(pr);
    REQUIRE(cert.x.size() == 3);
    CHECK(cert.exponent == 36);
    CHECK(cert.complete);
    CHECK(cert.exponent_primes == std::vector<long>{2, 3});
    // the CRT level is 9*eta_1 + 28*eta_2: 9 = 1 mod 4, 0 mod 9; 28 = 0, 1
    auto sp = induced::make_induced_space(pr);
    auto eta1 = induced::factor_targets(sp, 0)[1];
    auto eta2 = induced::factor_targets(sp, 1)[1];
    CHECK(cert.x[2] == mpz_class(9) * eta1 + mpz_class(28) * eta2);
}

TEST_CASE("synthesis refuses augmentation problems with an infinite factor") {
    auto pr = formulas::augmentation_problem({groups::cyclic_times_z_factor(2), cyc(3)});
    CHECK_THROWS_AS(synth::synthesize_generators(pr), gg_error);
}

TEST_CASE("verification refutes a certificate that is too small") {
    auto pr = formulas::augmentation_problem({cyc(2), cyc(3)});
    auto cert = synth::synthesize_generators(pr);
    cert.x.pop_back();
    auto vr = synth::verify_certificate(cert, pr, 2);
    CHECK(vr.status == synth::VerifyStatus::Refuted);
    CHECK(vr.reason.find("only 1 generators") != std::string::npos);
}

TEST_CASE("verification refutes a size-preserving tamper through a finite quotient") {
    auto pr = formulas::augmentation_problem({cyc(2), cyc(3)});
    auto cert = synth::synthesize_generators(pr);
    cert.x.back() = cert.x.front();  // duplicate drops the C3 component
    auto vr = synth::verify_certificate(cert, pr, 2);
    CHECK(vr.status == synth::VerifyStatus::Refuted);
    CHECK(vr.reason.find("quotient spin") != std::string::npos);
}

TEST_CASE("verification reports incomplete when the word budget is zero") {
    auto pr = formulas::augmentation_problem({cyc(2), cyc(3)});
    auto cert = synth::synthesize_generators(pr);
    auto vr = synth::verify_certificate(cert, pr, 0);
    CHECK(vr.status == synth::VerifyStatus::Incomplete);
    CHECK(vr.reason.find("no contradiction") != std::string::npos);
}

TEST_CASE("verification validates certificate shape") {
    auto pr = formulas::augmentation_problem({cyc(2), cyc(3)});
    auto cert = synth::synthesize_generators(pr);
    auto bad = cert;
    bad.x.clear();
    CHECK_THROWS_AS(synth::verify_certificate(bad, pr), gg_error);
    bad = cert;
    bad.exponent = 0;
    CHECK_THROWS_AS(synth::verify_certificate(bad, pr), gg_error);
    bad = cert;
    for (auto& [k, c] : bad.x.front().coef) {
        auto nk = k;
        nk.factor = 9;
        bad.x.front().coef.clear();
        bad.x.front().coef.emplace(nk, c);
        break;
    }
    CHECK_THROWS_AS(synth::verify_certificate(bad, pr), gg_error);
}

TEST_CASE("certificates round-trip through JSON byte-identically") {
    auto pr = formulas::relation_problem(
        {groups::cyclic_times_z_factor(2), groups::cyclic_times_z_factor(3)});
    auto cert = synth::synthesize_generators(pr);
    for (bool pretty : {false, true}) {
        auto text = synth::certificate_to_json(cert, pr, pretty);
        auto back = synth::certificate_from_json(text, pr);
        CHECK(synth::certificate_to_json(back, pr, pretty) == text);
        CHECK(back.x == cert.x);
        CHECK(back.exponent == cert.exponent);
        CHECK(back.complete == cert.complete);
    }
}

TEST_CASE("certificate JSON is validated against the problem") {
    auto pr = formulas::augmentation_problem({cyc(2), cyc(3)});
    auto cert = synth::synthesize_generators(pr);
    auto text = synth::certificate_to_json(cert, pr, false);
    CHECK_THROWS_AS(synth::certificate_from_json("not json", pr), gg_error);
    CHECK_THROWS_AS(synth::certificate_from_json("{}", pr), gg_error);
    auto other = formulas::augmentation_problem({cyc(2), cyc(5)});
    CHECK_THROWS_AS(synth::certificate_from_json(text, other), gg_error);
    auto rel = formulas::relation_problem({cyc(2), cyc(3)});
    CHECK_THROWS_AS(synth::certificate_from_json(text, rel), gg_error);
}

} // TEST_SUITE
