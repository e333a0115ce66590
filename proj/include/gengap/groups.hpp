#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gengap/error.hpp"

namespace gengap::groups {

// Finite group as a full multiplication table. Elements are indices 0..order-1.
struct FiniteGroup {
    int order = 1;
    std::vector<std::vector<int>> mul;  // mul[a][b] = a*b
    int e = 0;
    std::vector<int> inv;
    std::vector<int> gens;                  // distinguished generating set
    std::vector<std::string> gen_names;     // parallel to gens
    std::vector<std::pair<int, int>> via;   // BFS factorization: via[g] = (parent, gen index); via[e] = (-1,-1)
    std::vector<long> declared_invariants;  // construction-order cyclic factors (abelian builders)

    int op(int a, int b) const { return mul[a][b]; }
    int power(int g, long k) const;
    int order_of(int g) const;
    int conj(int g, int h) const { return mul[mul[inv[h]][g]][h]; }  // h^-1 g h
    int comm(int a, int b) const;                                    // a b a^-1 b^-1
};

// table is validated exhaustively (associativity, identity, inverses) when order <= 24
FiniteGroup make_group(std::vector<std::vector<int>> mul, std::vector<int> gens,
                       std::vector<std::string> gen_names);

// printable factorization of an element over the distinguished generators ("1", "a^2*b")
std::string element_name(const FiniteGroup& g, int x);

FiniteGroup trivial_group();
FiniteGroup cyclic(long n);
FiniteGroup abelian(const std::vector<long>& cyclic_orders);
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

std::vector<int> subgroup_closure(const FiniteGroup& g, std::vector<int> seed);
std::vector<int> commutator_subgroup(const FiniteGroup& g);

std::vector<long> primes_of_group(const FiniteGroup& g);
bool is_abelian(const FiniteGroup& g);
bool is_nilpotent(const FiniteGroup& g);  // every set of p-elements forms a subgroup
bool is_cyclic(const FiniteGroup& g);

// canonical invariant factors m1 | m2 | ... of an abelian group (no leading 1s)
std::vector<long> abelian_invariants(const FiniteGroup& g);

// dim_{F_p} of G / G'G^p
int rank_mod_p(const FiniteGroup& g, long p);

// d(G) for nilpotent G = max_p rank_mod_p; hypothesis error otherwise
int min_generators_group(const FiniteGroup& g);

struct GeneratingPrimes {
    bool all_primes = false;   // trivial group / torsion-free abelianization
    std::vector<long> primes;  // argmax primes when not all
};
GeneratingPrimes generating_primes(const FiniteGroup& g);

// ---- free words and presentations ----

struct Word {
    // product of letter^exp factors; exponents nonzero, letters are alphabet indices
    std::vector<std::pair<int, long>> syllables;
};

Word word_normalize(Word w);
Word word_mul(const Word& a, const Word& b);
Word word_inverse(const Word& a);
Word word_power(const Word& a, long k);
Word word_commutator(const Word& a, const Word& b);

// Grammar: juxtaposition or '*' for products, x^k (k may be negative),
// [u,v] = u v u^-1 v^-1, parentheses. Letters must be declared.
Word parse_word(const std::string& text, const std::vector<std::string>& alphabet);
std::string word_to_string(const Word& w, const std::vector<std::string>& alphabet);

struct Presentation {
    std::vector<std::string> alphabet;  // free generators
    std::vector<Word> relators;
    std::vector<std::string> relator_text;

    int free_rank() const { return (int)alphabet.size(); }
};

// x_i^{m_i} together with all commutators [x_i, x_j]; minimal for abelian groups
Presentation natural_abelian_presentation(const std::vector<long>& cyclic_orders);

int eval_word(const FiniteGroup& g, const Word& w, const std::vector<int>& images);

// relators must die and the images must generate
void validate_presentation(const FiniteGroup& g, const Presentation& p,
                           const std::vector<int>& images);

// the generator images a presentation maps onto: by default the group's own gens
std::vector<int> default_images(const FiniteGroup& g, const Presentation& p);

// ---- free-product factor descriptions ----

struct FactorSpec {
    enum class Kind {
        Finite,              // finite group (abelian in this artifact's builders)
        FiniteCyclicTimesZ,  // C_n x Z with its natural 2-generator presentation
        NilpotentProduct,    // G x Z^rank, G finite nilpotent (possibly trivial)
    };
    Kind kind = Kind::Finite;
    FiniteGroup group;       // the finite part (C_n for FiniteCyclicTimesZ)
    long cyclic_order = 0;   // FiniteCyclicTimesZ only
    int free_rank = 0;       // NilpotentProduct only
    std::string label;

    std::optional<Presentation> presentation;  // custom presentation (Finite only)
    std::vector<int> presentation_images;

    bool infinite() const { return kind != Kind::Finite; }
};

FactorSpec finite_factor(FiniteGroup g, std::string label);
FactorSpec cyclic_times_z_factor(long n);
FactorSpec nilpotent_product_factor(FiniteGroup g, int rank, std::string label);

// d of the factor group itself (Grushko-compatible count for our factor kinds)
int factor_min_generators(const FactorSpec& f);
std::vector<long> factor_group_primes(const FactorSpec& f);

} // namespace gengap::groups
