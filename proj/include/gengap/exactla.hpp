#pragma once
#include <gmpxx.h>
#include <optional>
#include <vector>

#include "gengap/error.hpp"

// Exact linear algebra. Vectors are rows; maps act by right multiplication
// (x * A), so "kernel" always means the row lattice/space {x : x*A = 0}.

namespace gengap::exactla {

using Zvec = std::vector<mpz_class>;

// Dense matrix over F_p, entries normalized to [0, p).
struct FpMat {
    long p = 0;
    int rows = 0, cols = 0;
    std::vector<std::vector<long>> a;

    FpMat() = default;
    FpMat(long p, int rows, int cols);
    long& at(int i, int j) { return a[i][j]; }
    long at(int i, int j) const { return a[i][j]; }
};

// Dense matrix over Z with arbitrary-precision entries.
struct IntMat {
    int rows = 0, cols = 0;
    std::vector<Zvec> a;

    IntMat() = default;
    IntMat(int rows, int cols);
    static IntMat identity(int n);
    mpz_class& at(int i, int j) { return a[i][j]; }
    const mpz_class& at(int i, int j) const { return a[i][j]; }
    bool operator==(const IntMat&) const = default;
};

void check_prime_modulus(long p);
long inv_mod(long x, long p);

FpMat fp_identity(long p, int n);
FpMat fp_mul(const FpMat& x, const FpMat& y);
FpMat fp_transpose(const FpMat& m);
std::vector<long> fp_vec_mul(const std::vector<long>& v, const FpMat& m);
FpMat reduce_mod(const IntMat& m, long p);
std::vector<long> reduce_vec_mod(const Zvec& v, long p);

struct Rref {
    int rank = 0;
    FpMat rowspace;  // nonzero rows of the reduced row-echelon form
    FpMat kernel;    // basis rows of {v : v * m^T = 0}; rank + kernel.rows == cols
    std::vector<int> pivot_cols;
};

Rref rref(const FpMat& m);

// First solution of x * A = b with free coordinates set to 0.
std::optional<std::vector<long>> solve_mod_p(const FpMat& A, const std::vector<long>& b);

IntMat int_mul(const IntMat& x, const IntMat& y);
IntMat int_transpose(const IntMat& m);
Zvec int_vec_mul(const Zvec& v, const IntMat& m);
IntMat stack_rows(const IntMat& top, const IntMat& bottom);
mpz_class det(const IntMat& m);  // Bareiss fraction-free elimination

struct SmithForm {
    IntMat U, V, D;  // U*A*V = D, U and V unimodular, D diagonal
    std::vector<mpz_class> divisors;  // nonzero diagonal entries, d1 | d2 | ...
    int rank() const { return (int)divisors.size(); }

    // Solve x*A = b exactly over Z (A is the decomposed matrix).
    std::optional<Zvec> solve(const Zvec& b) const;
};

SmithForm smith_normal_form(const IntMat& A);

// Row Hermite normal form: positive pivots, entries above each pivot reduced
// into [0, pivot); zero rows dropped. Canonical for a given row lattice.
IntMat hnf(const IntMat& m);

struct HnfTransform {
    IntMat h;  // Hermite form with zero rows kept, so w * A = h exactly
    IntMat w;  // unimodular record of the row operations
};

HnfTransform hnf_with_transform(const IntMat& m);

// Inverse of a square matrix with det +-1; throws gg_error otherwise.
IntMat unimodular_inverse(const IntMat& m);

// Basis rows of the saturated lattice {x : x * A = 0}, Hermite-reduced.
IntMat integer_kernel(const IntMat& A);

// Membership of b in the row lattice of m (m need not be in any normal form).
bool in_row_lattice(const IntMat& m, const Zvec& b);

} // namespace gengap::exactla
