#include <doctest.h>

#include "gengap/exactla.hpp"
#include "oracles.hpp"

using namespace gengap;
using namespace gengap::exactla;

namespace {

FpMat fpmat(long p, std::vector<std::vector<long>> rows) {
    FpMat m(p, (int)rows.size(), rows.empty() ? 0 : (int)rows[0].size());
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m.a[i][j] = ((rows[i][j] % p) + p) % p;
    return m;
}

IntMat intmat(std::vector<std::vector<long>> rows) {
    IntMat m((int)rows.size(), rows.empty() ? 0 : (int)rows[0].size());
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m.a[i][j] = rows[i][j];
    return m;
}

bool is_zero(const FpMat& m) {
    for (auto& r : m.a)
        for (long v : r)
            if (v) return false;
    return true;
}

IntMat random_intmat(testutil::Rng& rng, int rows, int cols, long lo, long hi) {
    IntMat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.a[i][j] = rng.range(lo, hi);
    return m;
}

void check_smith(const IntMat& A) {
    SmithForm s = smith_normal_form(A);
    CHECK(int_mul(int_mul(s.U, A), s.V) == s.D);
    mpz_class du = det(s.U), dv = det(s.V);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    int n = std::min(A.rows, A.cols);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < std::min(A.rows, A.cols); ++j)
            if (i != j) CHECK(s.D.a[i][j] == 0);
    for (size_t i = 0; i + 1 < s.divisors.size(); ++i) {
        CHECK(s.divisors[i] > 0);
        CHECK(s.divisors[i + 1] % s.divisors[i] == 0);
    }
}

} // namespace

TEST_SUITE("exactla") {

TEST_CASE("rref on identity mod 2") {
    auto r = rref(fp_identity(2, 4));
    CHECK(r.rank == 4);
    CHECK(r.kernel.rows == 0);
}

TEST_CASE("rref rank-1 example mod 2") {
    auto r = rref(fpmat(2, {{1, 1}, {1, 1}}));
    CHECK(r.rank == 1);
    REQUIRE(r.kernel.rows == 1);
    CHECK(r.kernel.a[0] == std::vector<long>{1, 1});
}

TEST_CASE("rref of zero matrix mod 5") {
    auto r = rref(fpmat(5, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}));
    CHECK(r.rank == 0);
    CHECK(r.kernel.rows == 3);
    // kernel of the zero map is everything
    CHECK(r.kernel.a[0] == std::vector<long>{1, 0, 0});
}

TEST_CASE("modulus must be a prime >= 2") {
    CHECK_THROWS_AS(FpMat(1, 2, 2), gg_error);
    CHECK_THROWS_AS(FpMat(6, 2, 2), gg_error);
    CHECK_THROWS_AS(check_prime_modulus(-3), gg_error);
}

TEST_CASE("rref properties on random matrices, p in {2,3,5,7,11,13}") {
    testutil::Rng rng(12345);
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        for (int trial = 0; trial < 20; ++trial) {
            int rows = (int)rng.range(1, 6), cols = (int)rng.range(1, 6);
            FpMat m(p, rows, cols);
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) m.a[i][j] = rng.range(0, p - 1);
            auto r = rref(m);
            CHECK(r.rank + r.kernel.rows == cols);
            // kernel rows annihilate m^T
            if (r.kernel.rows > 0) CHECK(is_zero(fp_mul(r.kernel, fp_transpose(m))));
            // rref is idempotent
            auto r2 = rref(r.rowspace);
            CHECK(r2.rank == r.rank);
            CHECK(r2.rowspace.a == r.rowspace.a);
        }
    }
}

TEST_CASE("solve_mod_p solves x*A = b") {
    // [[1,2],[0,1]] mod 3, b = (2,2): x = (2, 1): check 2*(1,2)+1*(0,1) = (2,5) = (2,2) mod 3
    auto A = fpmat(3, {{1, 2}, {0, 1}});
    auto x = solve_mod_p(A, {2, 2});
    REQUIRE(x.has_value());
    CHECK(fp_vec_mul(*x, A) == std::vector<long>{2, 2});
}

TEST_CASE("solve_mod_p reports inconsistency") {
    auto A = fpmat(2, {{1, 1}});  // x*(1,1): only multiples of (1,1)
    CHECK_FALSE(solve_mod_p(A, {1, 0}).has_value());
    CHECK(solve_mod_p(A, {1, 1}).has_value());
}

TEST_CASE("smith normal form of diag(2,3) is (1,6)") {
    // frozen expectation from the minors-gcd oracle
    auto A = intmat({{2, 0}, {0, 3}});
    auto oracle = testutil::invariant_factors_by_minors(A);
    REQUIRE(oracle.size() == 2);
    CHECK(oracle[0] == 1);
    CHECK(oracle[1] == 6);
    auto s = smith_normal_form(A);
    CHECK(s.divisors == oracle);
    check_smith(A);
}

TEST_CASE("smith normal form basic shapes") {
    auto s = smith_normal_form(IntMat::identity(3));
    CHECK(s.divisors == std::vector<mpz_class>{1, 1, 1});
    s = smith_normal_form(intmat({{2, 0}, {0, 2}}));
    CHECK(s.divisors == std::vector<mpz_class>{2, 2});
    s = smith_normal_form(IntMat(2, 3));
    CHECK(s.divisors.empty());
}

TEST_CASE("smith normal form agrees with minors-gcd oracle on random 3x3..4x4") {
    testutil::Rng rng(777);
    for (int trial = 0; trial < 40; ++trial) {
        int rows = (int)rng.range(1, 4), cols = (int)rng.range(1, 4);
        IntMat A = random_intmat(rng, rows, cols, -6, 6);
        auto s = smith_normal_form(A);
        CHECK(s.divisors == testutil::invariant_factors_by_minors(A));
        check_smith(A);
    }
}

TEST_CASE("smith normal form survives larger entries") {
    testutil::Rng rng(4242);
    for (int trial = 0; trial < 10; ++trial) {
        IntMat A = random_intmat(rng, 8, 8, -50, 50);
        check_smith(A);
    }
}

TEST_CASE("integer kernel of [[2,0],[0,0]]") {
    auto k = integer_kernel(intmat({{2, 0}, {0, 0}}));
    REQUIRE(k.rows == 1);
    CHECK(k.a[0] == Zvec{0, 1});
}

TEST_CASE("integer kernel of a column of ones") {
    auto k = integer_kernel(intmat({{1}, {1}}));
    REQUIRE(k.rows == 1);
    // Hermite-reduced generator of {(x, y) : x + y = 0}
    CHECK(k.a[0] == Zvec{1, -1});
}

TEST_CASE("integer kernel is saturated and annihilates A") {
    testutil::Rng rng(999);
    for (int trial = 0; trial < 30; ++trial) {
        int rows = (int)rng.range(1, 5), cols = (int)rng.range(1, 5);
        IntMat A = random_intmat(rng, rows, cols, -5, 5);
        IntMat k = integer_kernel(A);
        if (k.rows > 0) {
            IntMat prod = int_mul(k, A);
            for (auto& row : prod.a)
                for (auto& v : row) CHECK(v == 0);
            // saturation: the kernel lattice has all invariant factors 1
            auto s = smith_normal_form(k);
            for (auto& d : s.divisors) CHECK(d == 1);
        }
        auto sa = smith_normal_form(A);
        CHECK(k.rows == A.rows - sa.rank());
    }
}

TEST_CASE("hnf is canonical for the row lattice") {
    // same lattice under row shuffles/combinations reduces to one form
    auto b1 = intmat({{2, 1}, {0, 3}});
    auto b2 = intmat({{2, 4}, {2, 1}});  // row2 + row1, row1
    CHECK(hnf(b1).a == hnf(b2).a);
}

TEST_CASE("smith solve decides lattice membership") {
    auto A = intmat({{2, 0}, {0, 3}});
    auto s = smith_normal_form(A);
    auto x = s.solve({4, 9});
    REQUIRE(x.has_value());
    CHECK(int_vec_mul(*x, A) == Zvec{4, 9});
    CHECK_FALSE(s.solve({1, 0}).has_value());
    CHECK(in_row_lattice(A, {2, 3}));
    CHECK_FALSE(in_row_lattice(A, {2, 2}));
}

TEST_CASE("bareiss determinant matches cofactor values") {
    CHECK(det(intmat({{1, 2}, {3, 4}})) == -2);
    CHECK(det(intmat({{2, 0, 0}, {0, 3, 0}, {0, 0, 5}})) == 30);
    CHECK(det(intmat({{1, 1}, {1, 1}})) == 0);
}

TEST_CASE("hnf_with_transform records the row operations exactly") {
    testutil::Rng rng(0x51ab5);
    for (int t = 0; t < 12; ++t) {
        IntMat A = random_intmat(rng, rng.range(1, 4), rng.range(1, 4), -9, 9);
        HnfTransform ht = hnf_with_transform(A);
        CHECK(int_mul(ht.w, A) == ht.h);
        CHECK(ht.h.rows == A.rows);
        mpz_class dw = det(ht.w);
        CHECK((dw == 1 || dw == -1));
        // same lattice as the zero-row-dropping form
        IntMat dropped(0, A.cols);
        for (int i = 0; i < ht.h.rows; ++i) {
            bool z = true;
            for (int j = 0; j < A.cols; ++j)
                if (ht.h.a[i][j] != 0) z = false;
            if (z) continue;
            IntMat row(1, A.cols);
            row.a[0] = ht.h.a[i];
            dropped = stack_rows(dropped, row);
        }
        CHECK(dropped == hnf(A));
    }
}

TEST_CASE("unimodular_inverse inverts and rejects") {
    IntMat v = intmat({{2, 3}, {1, 2}});  // det 1
    IntMat vi = unimodular_inverse(v);
    CHECK(int_mul(v, vi) == IntMat::identity(2));
    CHECK(int_mul(vi, v) == IntMat::identity(2));
    CHECK_THROWS_AS(unimodular_inverse(intmat({{2, 0}, {0, 1}})), gg_error);
    CHECK_THROWS_AS(unimodular_inverse(intmat({{1, 2, 3}})), gg_error);
}

} // TEST_SUITE
