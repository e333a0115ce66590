#pragma once
// Generator synthesis and certification for modules induced over free
// products. Builds nested families of minimal generating vectors across a
// prime window via CRT, certifies the constant-count-off-a-finite-set
// behaviour of a lattice with an explicit witness, assembles a generating
// set of the induced module whose size matches the per-prime maximum, and
// verifies or refutes such certificates by bounded membership solves plus
// exact finite-quotient spins.

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "gengap/exactla.hpp"
#include "gengap/formulas.hpp"
#include "gengap/gmodule.hpp"
#include "gengap/gring.hpp"
#include "gengap/groups.hpp"
#include "gengap/induced.hpp"

namespace gengap::synth {

// ---- nested families over a prime window ----

// Generating vectors x_1, ..., x_d of a ZG-lattice M such that for every
// listed prime p the first counts[p] of them reduce to a minimal generating
// set of M/pM. Primes are ordered so the counts are non-increasing, ties by
// value; the per-prime sets are then nested by construction.
struct NestedFamily {
    std::vector<long> primes;
    std::vector<int> counts;  // counts[i] = d(M / p_i M)
    exactla::IntMat rows;     // counts.front() rows; p_i keeps the first counts[i]
};

NestedFamily build_nested_family(const gmodule::ZGLattice& m, std::vector<long> pi);

// d(M / (pM + the ZG-span of the rows of x)); empty x allowed
int residual_count(const gmodule::ZGLattice& m, const exactla::IntMat& x, long p);

// For p, q in the family with d_p >= d_q the residual count of the q-set at
// p must be exactly d_p - d_q. Returns a transcript line per checked pair;
// disagreement raises invariant_error.
std::vector<std::string> check_nested_counts(const gmodule::ZGLattice& m,
                                             const NestedFamily& f);

// ---- constant-count witnesses ----

// Evidence that d(M/pM) equals the generic count delta for every prime
// outside `claimed`, and that minimal generating vectors can be chosen
// nested across any tested window with cyclic residuals outside it.
struct GoodModuleWitness {
    std::vector<long> claimed;  // exceptional primes of (G, M)
    int delta = 0;              // generic count d(M/pM) off the claimed set
    std::vector<long> tested;   // finite window actually exercised (superset)
    NestedFamily family;        // nested family over `tested`
    exactla::IntMat x;          // its minimal member
    bool rechosen = false;      // x was shifted mod prod(tested) for an outside prime
    mpz_class exponent;         // exponent of M / xZG (finite when passed)
    std::vector<long> constant_primes;               // outside primes with count == delta
    std::vector<std::pair<long, int>> outside_counts;  // sampled p -> residual count at x
    bool passed = false;
    std::string note;
};

// `tested` must strictly contain `claimed`. A sampled outside prime whose
// count drifts off delta raises invariant_error; a residual count that stays
// above 1 outside `tested` after the bounded re-choice search only clears
// `passed` (the search budget, not the claim, is what ran out).
GoodModuleWitness check_good(const gmodule::ZGLattice& m, std::vector<long> claimed,
                             std::vector<long> tested);

// ---- generators of the component modules over G x Z ----

struct InfiniteFactorGenerators {
    groups::FactorSpec spec;
    formulas::ModuleKind kind = formulas::ModuleKind::Augmentation;
    std::vector<induced::InducedElement> x;  // coordinates of the factor alone
    mpz_class exponent;        // certified: exponent * module lies in the X-span
    mpz_class exponent_bound;  // a priori bound the certified value divides
    std::vector<std::string> notes;
    std::vector<gring::IdentityReport> identities;
};

// Augmentation: X = {x + (c-1)*ghat} with x a single generic generator of
// Delta G, bound |G|^2 * exponent(Delta G / x ZG). Relation of C_n x Z:
// X = {z}, bound n^2; the exponent is the least divisor of the bound whose
// multiple of every module generator solves back into the X-span.
InfiniteFactorGenerators infinite_factor_generators(const groups::FactorSpec& f,
                                                    formulas::ModuleKind kind);

// ---- certificates ----

struct SolvedSystem {
    std::string target;
    long p = 0;     // 0 for the integer solve of exponent * target
    int depth = 0;  // syllable budget that closed the system
};

struct GenerationCertificate {
    std::vector<induced::InducedElement> x;
    mpz_class exponent;                   // m with m * M inside the X-span
    std::vector<long> exponent_primes;    // prime divisors of m
    std::vector<std::string> provenance;  // construction transcript
    std::vector<SolvedSystem> systems;    // filled in by verification
    bool complete = false;                // verification finished within budget
    std::string note;
};

// Assembles a generating set of size d_induced(pr): per factor the minimal
// member of a nested family over the shared prime window (finite factors)
// or the structural generators (C_n x Z relation factors), then one CRT
// combination per residual level across the leftover finite pieces.
GenerationCertificate synthesize_generators(const formulas::FreeProductProblem& pr,
                                            int lmax = 8);

enum class VerifyStatus { Verified, Incomplete, Refuted };

struct VerifyReport {
    VerifyStatus status = VerifyStatus::Incomplete;
    std::string reason;
    std::vector<SolvedSystem> systems;
    std::vector<std::string> lines;  // transcript, one line per check
};

// Checks exponent * target solves into the X-span over Z and that X spans
// every target mod each prime of the exponent, all within lmax syllables.
// Refutes only on an exact contradiction: |X| below the mod-p count, or a
// finite-quotient spin that stabilizes short of a target. Budget exhaustion
// reports Incomplete.
VerifyReport verify_certificate(const GenerationCertificate& cert,
                                const formulas::FreeProductProblem& pr, int lmax = 8);

std::string certificate_to_json(const GenerationCertificate& cert,
                                const formulas::FreeProductProblem& pr,
                                bool pretty = false);
// `pr` must describe the same problem the JSON was written from (labels and
// factor shapes are cross-checked).
GenerationCertificate certificate_from_json(const std::string& text,
                                            const formulas::FreeProductProblem& pr);

} // namespace gengap::synth
