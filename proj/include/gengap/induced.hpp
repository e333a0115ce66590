#pragma once
// Windowed coordinates for modules induced over a free product: each factor
// contributes its component module tensored with reduced coset words, and
// elements are integer combinations of (component row, c-power, word) keys.
// Generation questions become linear systems over products x * w for words w
// up to a syllable budget; a companion finite-quotient spin (collapsing each
// infinite direction to a finite cycle and the free product to the direct
// product) gives exact negative answers.

#include <gmpxx.h>

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gengap/exactla.hpp"
#include "gengap/formulas.hpp"
#include "gengap/gmodule.hpp"
#include "gengap/gring.hpp"

namespace gengap::induced {

// One reduced syllable of a coset word: a nontrivial element of one factor
// group, split as finite part * c^cpow (cpow = 0 for finite factors).
struct Syllable {
    int factor = 0;
    int elt = 0;
    long cpow = 0;
    auto operator<=>(const Syllable&) const = default;
};

using CosetWord = std::vector<Syllable>;  // alternating factors, no trivial syllables

struct BasisKey {
    int factor = 0;  // which component module the row lives in
    int row = 0;
    long cpow = 0;   // Laurent degree of the row (0 for finite factors)
    CosetWord word;  // never starts with a syllable of `factor`
    auto operator<=>(const BasisKey&) const = default;
};

struct InducedElement {
    std::map<BasisKey, mpz_class> coef;  // no zero values
};

InducedElement ie_zero();
bool ie_is_zero(const InducedElement& v);
InducedElement operator+(const InducedElement& a, const InducedElement& b);
InducedElement operator-(const InducedElement& a, const InducedElement& b);
InducedElement operator*(const mpz_class& k, const InducedElement& a);
bool operator==(const InducedElement& a, const InducedElement& b);
InducedElement ie_reduce_mod(const InducedElement& v, const mpz_class& m);

// ---- factor realizations ----

// How a factor's component module is coordinatized:
//   Lattice         finite factor, rows of a ZG-lattice
//   RelationLaurent relation module of C_n x Z; row 0 = xi (class of x^n),
//                   rows 1..n-1 = eta * a^r with eta the class of [x, c]
//   AugLaurent      augmentation ideal of G x Z; row g at degree j = g c^j - 1
struct FactorSlot {
    enum class Rep { Lattice, RelationLaurent, AugLaurent };
    Rep rep = Rep::Lattice;
    groups::FactorSpec spec;
    gring::GroupPtr g;
    std::optional<gmodule::ZGLattice> lat;        // Rep::Lattice
    std::optional<gring::RelationContext> rc;     // Rep::RelationLaurent
    std::vector<exactla::IntMat> tables;          // Lattice: action per element
    int rows = 0;
};

struct InducedSpace {
    formulas::FreeProductProblem problem;
    std::vector<FactorSlot> fac;
    long window = 4;  // |cpow| cap on coordinates and word syllables
};

InducedSpace make_induced_space(const formulas::FreeProductProblem& pr, long window = 4);

InducedElement basis_element(const InducedSpace& sp, int factor, int row, long cpow = 0);
// embed a row vector of factor coordinates at Laurent degree 0
InducedElement from_factor_row(const InducedSpace& sp, int factor,
                               const std::vector<mpz_class>& row);
// coordinates of a relation-module element of a RelationLaurent factor
InducedElement from_relation_element(const InducedSpace& sp, int factor,
                                     const gring::FoxPair& s);

// canonical ZG-generators of factor f's component, as induced elements:
// all lattice rows (Lattice), {xi, eta} (RelationLaurent), or
// {gen - 1 for the distinguished generators, c - 1} (AugLaurent)
std::vector<InducedElement> factor_targets(const InducedSpace& sp, int f);
struct Target {
    std::string name;
    InducedElement v;
};
std::vector<Target> all_targets(const InducedSpace& sp);

// nontrivial syllables of factor f with |cpow| <= cstep
std::vector<Syllable> factor_alphabet(const InducedSpace& sp, int f, long cstep);
std::vector<Syllable> alphabet(const InducedSpace& sp, long cstep);

// right action; nullopt when a coordinate or syllable leaves the c-window
std::optional<InducedElement> act(const InducedSpace& sp, const InducedElement& v,
                                  const Syllable& s);
std::optional<InducedElement> act_word(const InducedSpace& sp, const InducedElement& v,
                                       const CosetWord& w);

std::string word_to_string(const InducedSpace& sp, const CosetWord& w);
std::string ie_to_string(const InducedSpace& sp, const InducedElement& v);

// ---- membership within a word window ----

struct WindowSolve {
    bool solved = false;
    int depth = 0;       // longest word used by the enumeration when solved
    bool truncated = false;  // some products were dropped at the c-window
    // (generator index, word, coefficient) triples with nonzero coefficient
    std::vector<std::tuple<int, CosetWord, mpz_class>> combo;
};

// exact integer solve of rhs = sum y_t * (x_{i_t} * w_t) over words of at
// most lmax syllables (alphabet c-step csyll), smallest depth first
WindowSolve solve_membership(const InducedSpace& sp,
                             const std::vector<InducedElement>& x,
                             const InducedElement& rhs, int lmax, long csyll = 2,
                             int product_cap = 4000);
// same system mod p
WindowSolve solve_membership_mod(const InducedSpace& sp,
                                 const std::vector<InducedElement>& x,
                                 const InducedElement& rhs, long p, int lmax,
                                 long csyll = 2, int product_cap = 4000);

// ---- exact spin in a finite quotient ----

// Collapse c to a cycle of length `period` in every infinite factor and the
// free product to the direct product of the factor groups. The resulting
// module is finite dimensional over F_p, so the spin stabilizes exactly and
// a missed target refutes generation outright.
struct QuotientSpin {
    bool all_reached = false;
    std::vector<int> missing;  // indices into the target list
    int dim = 0;               // dimension of the spanned submodule
    int ambient = 0;           // dimension of the whole quotient module
};
QuotientSpin quotient_generation(const InducedSpace& sp,
                                 const std::vector<InducedElement>& x,
                                 const std::vector<Target>& targets, long p,
                                 long period = 2);

} // namespace gengap::induced
