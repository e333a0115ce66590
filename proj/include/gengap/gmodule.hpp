#pragma once
// Modules over group rings: F_pG-modules, ZG-lattices, and finite ZG-modules
// presented as lattice chains. Provides spin closures, radicals, minimal
// generator counts with explicit generating sets, exhaustive cross-checks,
// and composition series with factor reordering.
//
// All modules are right modules: vectors are rows and a group element acts by
// right multiplication with one matrix per distinguished generator.

#include <gmpxx.h>

#include <vector>

#include "gengap/error.hpp"
#include "gengap/exactla.hpp"
#include "gengap/gring.hpp"
#include "gengap/groups.hpp"

namespace gengap::gmodule {

using exactla::FpMat;
using exactla::IntMat;
using gring::GroupPtr;

// ---- F_pG-modules ----

struct FpGModule {
    GroupPtr g;
    long p = 0;
    int dim = 0;
    std::vector<FpMat> gen_action;  // parallel to g->gens
};

// Validates: p prime, matrices square of size dim and invertible, and the
// per-generator matrices define an action of the whole group. The dimension
// is read off the matrices; dim_if_no_gens covers the trivial group.
FpGModule make_fpg_module(GroupPtr g, long p, std::vector<FpMat> gen_action,
                          int dim_if_no_gens = 0);

FpGModule regular_module(GroupPtr g, long p);
FpGModule zero_module(GroupPtr g, long p);

FpMat element_action(const FpGModule& n, int x);
std::vector<FpMat> element_action_table(const FpGModule& n);
// action of a group-ring element given by its coefficient vector over G
FpMat coef_action(const FpGModule& n, const std::vector<long>& coef);
FpMat ring_action(const FpGModule& n, const gring::GroupRingElement& r);

// Smallest action-closed subspace containing the seed rows, as canonical
// reduced row-echelon basis rows.
FpMat spin(const FpGModule& n, const FpMat& seeds);
FpMat spin(const FpGModule& n, const std::vector<std::vector<long>>& seeds);

struct Submodule {
    FpGModule mod;  // action written in the coordinates of the basis rows
    FpMat emb;      // mod.dim x n.dim, rows = the basis
};
Submodule submodule(const FpGModule& n, const FpMat& closed_basis);

struct Quotient {
    FpGModule mod;
    FpMat proj;  // n.dim x mod.dim, v -> image of v
    FpMat lift;  // mod.dim x n.dim, a section: proj(lift(w)) == w
};
Quotient quotient(const FpGModule& n, const FpMat& closed_subspace);

int hom_dim(const FpGModule& m, const FpGModule& n);  // dim_{F_p} Hom_G(m, n)

// ---- structure of the group algebra, cached per (G, p) ----

struct AlgebraBlock {
    std::vector<long> idempotent;  // central idempotent of F_pG/rad, lifted to
                                   // a coefficient vector over G
    int dim = 0;                   // dimension of the block e_i * (F_pG/rad)
    FpGModule block;               // the block as a right module
};

struct AlgebraData {
    GroupPtr g;
    long p = 0;
    FpMat radical;  // rref basis of rad F_pG, coordinates over the group basis
    std::vector<AlgebraBlock> blocks;
};

const AlgebraData& algebra_data(GroupPtr g, long p);

// rad F_pG two ways: a characteristic-polynomial coefficient chain always,
// and for abelian G independently as the kernel of an iterated Frobenius;
// disagreement raises invariant_error. The result is checked to be a
// nilpotent two-sided ideal, zero whenever p does not divide |G|.
FpMat algebra_radical(GroupPtr g, long p);

FpMat module_radical(const FpGModule& n);  // basis of N * rad(F_pG)
Quotient top(const FpGModule& n);          // N / rad N

// One simple module per block (the unique simple it contains).
struct SimpleModule {
    int block_index = -1;
    FpGModule mod;
};
const std::vector<SimpleModule>& algebra_simples(GroupPtr g, long p);

// Smallest k with an epimorphism (F_pG)^k ->> N, via isotypic multiplicities
// of the semisimple top. Agrees with brute_force_min_generators.
int min_generators(const FpGModule& n);

// A generating set of size min_generators(n): greedy, each vector the first
// one in a fixed enumeration of the successive quotients that lowers the
// residual count. Deterministic; budget_error if a scan exceeds `scan_cap`.
std::vector<std::vector<long>> minimal_generating_set(const FpGModule& n,
                                                      long long scan_cap = 300000);

// Exhaustive oracle: tries all spin-independent tuples in a fixed order.
// Exceeding `cap` spin tests raises budget_error ("infeasible"), so a cap
// never yields a wrong count.
int brute_force_min_generators(const FpGModule& n, long long cap = 500000);

// ---- ZG-lattices ----

struct ZGLattice {
    GroupPtr g;
    int rank = 0;
    std::vector<IntMat> gen_action;  // parallel to g->gens, each det +-1
};

// Validates determinants and that the matrices define a group action.
ZGLattice make_zg_lattice(GroupPtr g, std::vector<IntMat> gen_action,
                          int rank_if_no_gens = 0);

ZGLattice regular_lattice(GroupPtr g);
IntMat lattice_element_action(const ZGLattice& m, int x);
std::vector<IntMat> lattice_element_table(const ZGLattice& m);

FpGModule reduce_lattice(const ZGLattice& m, long p);

// Module structure on a sublattice spanned by the given independent rows;
// the rowspace must be action-closed with integral, unimodular restriction.
ZGLattice sublattice_module(const ZGLattice& amb, const IntMat& rows);

// Invariant factors of the abelian group M / (ZG-span of the rows of x):
// nontrivial finite factors ascending, then one 0 per free rank unit.
std::vector<mpz_class> quotient_invariants(const ZGLattice& m, const IntMat& x);
// Exponent of that quotient: 0 if infinite, 1 if trivial.
mpz_class quotient_exponent(const ZGLattice& m, const IntMat& x);

long good_prime(const ZGLattice& m);  // smallest prime not dividing |G|
int d_rational(const ZGLattice& m);   // min_generators at good_prime(m)

// ---- finite ZG-modules as lattice chains ----

struct FiniteZGModule {
    ZGLattice lat;
    IntMat rel;  // Hermite form, full rank: the module is Z^rank / rowspace
};

// Validates closure of the relation lattice under the action, finiteness,
// and the supported order bound (10^6).
FiniteZGModule make_finite_module(ZGLattice lat, IntMat rel_rows);

mpz_class module_order(const FiniteZGModule& m);
std::vector<mpz_class> finite_invariants(const FiniteZGModule& m);
std::vector<long> module_primes(const FiniteZGModule& m);
FpGModule reduce_finite(const FiniteZGModule& m, long p);  // M / pM

struct CompositionFactor {
    long p = 0;
    FpGModule simple;
};
bool same_factor(const CompositionFactor& a, const CompositionFactor& b);

struct CompositionSeries {
    // chain[k] = basis rows (ambient coordinates, Hermite form) of the k-th
    // term: Z^r = chain[0] > chain[1] > ... > chain.back() = relations.
    std::vector<IntMat> chain;
    std::vector<CompositionFactor> factors;  // factors[k] = chain[k]/chain[k+1]
};

// Requires every prime dividing |M| to be coprime to |G| (hypothesis_error
// otherwise), which makes each M/pM semisimple.
CompositionSeries composition_series(const FiniteZGModule& m);

// Rebuilds a series realizing the requested factor order. The target must be
// a permutation of the factors of some (hence any) series; gg_error if not.
CompositionSeries reorder_series(const FiniteZGModule& m,
                                 const std::vector<CompositionFactor>& target);

} // namespace gengap::gmodule
