#pragma once
// Canonical lattices over group rings of finite groups: augmentation ideals,
// relation modules built from presentations by free differential calculus,
// kernels of free resolutions, good primes, and constructive witnesses that a
// prime p satisfies d_G(M) = d_G(M/pM).

#include <optional>
#include <vector>

#include "gengap/exactla.hpp"
#include "gengap/gmodule.hpp"
#include "gengap/gring.hpp"
#include "gengap/groups.hpp"

namespace gengap::builders {

using exactla::IntMat;
using gmodule::ZGLattice;
using gring::GroupPtr;

// Basis {g - 1 : g != e}; the action is right multiplication in that basis.
ZGLattice augmentation_lattice(GroupPtr g);

// (ZG)^k with the diagonal right-regular action; coordinates are blocked by
// copy, group-element index fastest.
ZGLattice free_module_lattice(GroupPtr g, int k);

// Row of the mirrored free derivative of w, evaluated in ZG through the
// generator images: the unique D with D(uv) = D(u)*vbar + D(v) and
// D(x_k) = e_k. Shape 1 x (alphabet * |G|). Satisfies
// sum_k (image_k - 1) * D_k(w) = wbar - 1.
IntMat fox_row(GroupPtr g, const groups::Presentation& pres,
               const std::vector<int>& images, const groups::Word& w);

struct RelationLattice {
    ZGLattice lat;   // kernel of ZG^m -> Delta G, e_k -> image_k - 1
    IntMat emb;      // lat.rank x (m * |G|): basis rows inside ZG^m
    groups::Presentation pres;
    std::vector<int> images;
    IntMat fox;      // derivative rows of the relators, in lattice coordinates;
                     // they generate the lattice over ZG
};

// images defaults to the group's own distinguished generators; the relators
// must die under the images and the images must generate.
RelationLattice relation_lattice(GroupPtr g, const groups::Presentation& pres,
                                 std::vector<int> images = {});

// A free resolution ... -> ZG^{f_2} -> ZG^{f_1} -> Delta G -> 0 described one
// stage at a time: boundary[t] has ranks[t] rows, row k the image of the k-th
// free generator as an element of ZG^{ranks[t-1]} (of ZG itself for t = 0, in
// which case it must land in the augmentation ideal).
struct ResolutionSpec {
    GroupPtr g;
    std::vector<int> ranks;
    std::vector<IntMat> boundary;
};

// Alternating (x - 1), then sum-of-group boundaries for a cyclic group.
ResolutionSpec periodic_cyclic_resolution(GroupPtr g, int stages);

// Full integer matrix of the stage-t map ZG^{f_t} -> ZG^{f_{t-1}}, 1-based t.
IntMat boundary_matrix(const ResolutionSpec& spec, int t);

struct ResolutionKernel {
    ZGLattice lat;
    IntMat emb;  // lat.rank x (f_s * |G|)
};

// Kernel of the stage-s boundary. Validates shapes, that consecutive maps
// compose to zero, that the stage-1 image is exactly the augmentation ideal,
// and exactness at every stage below s; stages beyond s are ignored.
ResolutionKernel resolution_kernel(const ResolutionSpec& spec, int s);

// Smallest prime outside pi(G) and the given torsion primes of the module.
long good_prime(GroupPtr g, const std::vector<long>& module_torsion = {});
long good_prime(const gmodule::FiniteZGModule& m);

struct SwanWitness {
    long p = 0;  // certified: x.rows == d(M/pM) and x generates M over ZG,
                 // hence d_G(M) = d_G(M/pM)
    IntMat x;    // rows in lattice coordinates
};

// Bounded search over the candidate primes (divisors of |G| maximizing the
// mod-p count), mixing per-prime minimal generating sets by CRT. `attempts`
// bounds the tries per candidate; exhausting the budget returns nothing —
// undecided, never a negative claim.
std::optional<SwanWitness> swan_witness(const ZGLattice& m, int attempts = 8,
                                        unsigned long seed = 1);

} // namespace gengap::builders
