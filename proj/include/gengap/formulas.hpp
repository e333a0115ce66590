#pragma once
// Closed-form generator counts for modules induced over free products.
// Each operation builds a per-prime evidence table (the count of the induced
// module mod p is the sum of the factor counts mod p), takes the max, and
// cross-checks it against the applicable closed form. Reports carry the
// hypothesis-check transcript; violated hypotheses throw hypothesis_error.
#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gengap/builders.hpp"
#include "gengap/gmodule.hpp"
#include "gengap/groups.hpp"

namespace gengap::formulas {

using gring::GroupPtr;

enum class ModuleKind { Augmentation, Relation };

struct FreeProductProblem {
    std::vector<groups::FactorSpec> factors;
    ModuleKind kind = ModuleKind::Augmentation;
};

FreeProductProblem augmentation_problem(std::vector<groups::FactorSpec> factors);
FreeProductProblem relation_problem(std::vector<groups::FactorSpec> factors);

// One factor's component module, realized far enough to count generators:
// finite parts get an actual lattice, the infinite shapes carry their proven
// constant values.
struct FactorModule {
    groups::FactorSpec spec;
    GroupPtr g;  // finite part (possibly trivial for pure free-abelian factors)
    std::optional<builders::RelationLattice> rel;  // finite-factor relation module
    std::optional<gmodule::ZGLattice> lat;         // finite-part module to reduce mod p
    int free_rank = 0;                             // rank of the Z^e part
    int delta = 0;                                 // generic (good-prime) count
    std::vector<long> primes;                      // primes of the finite part
};

std::vector<FactorModule> realize_factors(const FreeProductProblem& pr);

// d of the factor's component module mod p
int component_count(const FactorModule& fm, long p);

struct PrimeRow {
    long p = 0;
    std::vector<int> components;  // one count per factor
    int sum = 0;
    bool good = false;  // representative prime for the generic value
};

struct FormulaReport {
    std::string op;
    int result = 0;
    std::vector<PrimeRow> table;
    std::vector<long> argmax;             // primes of the rows attaining result
    std::vector<std::string> hypotheses;  // transcript of checks that passed
    std::vector<std::string> notes;       // derivations and cross-check records
    std::vector<std::pair<std::string, std::string>> quantities;  // named extras
    std::optional<int> gap;
    std::optional<int> adef;
};

// distinct primes of the factor groups (module lattices carry no torsion)
std::vector<long> prime_support(const FreeProductProblem& pr);
long good_prime(const FreeProductProblem& pr);

// Sum over factors of the component counts mod p: the count of the induced
// module mod p (Bergman's additivity across free products).
int bergman_mod_p(const FreeProductProblem& pr, long p);

// d of the induced module as the max of the per-prime table, after checking
// every component module is of a certified Swan class.
FormulaReport d_induced(const FreeProductProblem& pr);

// Finite factors of pairwise coprime orders, augmentation ideal:
// result = max_k d_{G_k}(Delta G_k) + n - 1, with gap and the
// gap-zero predicate (some factor has gap 0 and the rest are cyclic).
FormulaReport coprime_augmentation(const FreeProductProblem& pr);

// Finite factors of pairwise coprime orders, relation module:
// result = max_k { d_{G_k}(Rbar_k) + sum_{i != k} d(F_i) }, with adef.
FormulaReport coprime_relation(const FreeProductProblem& pr);

// Factors G_i x Z^{e_i} with coprime finite parts satisfying
// d(G) = d(G/G') and d_G(DeltaG/pDeltaG) = d(G/G'G^p) on pi(G)
// (automatic for nilpotent finite parts), augmentation ideal.
// Also evaluates the torsion-free-or-finite-cyclic gap-zero criterion.
FormulaReport mixed_augmentation(const FreeProductProblem& pr);

// Factors C_{n_i} x Z with coprime n_i, natural 2-generator presentations,
// relation module: result = n + 1.
FormulaReport mixed_relation(const FreeProductProblem& pr);

// s-th kernel of the stitched periodic resolutions of the cyclic factors.
// Hypothesis: s + 2 is not a multiple of any factor's cohomological period
// (cyclic groups have period 2, so s must be odd).
FormulaReport resolution_kernel_count(const FreeProductProblem& pr, int s,
                                      std::vector<int> periods = {});

// Constructive gap-zero proof for free products of nilpotent factors:
// when all factors but at most one are cyclic or have torsion-free
// abelianization, pins a generating prime per factor and verifies gap 0 on
// the elementary-abelian quotient free product.
struct GapZeroProof {
    bool criterion_met = false;
    std::string reason;          // blocking factors when not met
    long q = 0;                  // generating prime of the exceptional factor
    std::vector<long> assigned;  // chosen generating prime per factor
    std::vector<int> absorbed;   // factors for which q itself is generating
    std::vector<std::vector<long>> quotients;  // elementary-abelian invariants
    int d_free_product = 0;
    FormulaReport quotient_check;  // d_induced over the quotient problem
};
GapZeroProof nilpotent_gap_zero(const FreeProductProblem& pr);

// Relation module of Q_{m_1} * ... * Q_{m_r}, where Q_n is the one-relator
// HNN extension with torsion presented by rho_n(x,t) = x^n = 1. Requires
// m_i >= 2 and pairwise coprime q-values q_n = (n+1)^n - 1; result = r + 1.
FormulaReport bridson_tweedale(const std::vector<int>& ms);

} // namespace gengap::formulas
