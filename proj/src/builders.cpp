#include "gengap/builders.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "gengap/error.hpp"
#include "gengap/primes.hpp"

namespace gengap::builders {

using exactla::Zvec;
using groups::Presentation;
using groups::Word;

namespace {

bool int_is_zero(const IntMat& m) {
    for (const auto& row : m.a)
        for (const auto& v : row)
            if (v != 0) return false;
    return true;
}

IntMat aug_basis_rows(const groups::FiniteGroup& g) {
    IntMat rows(g.order - 1, g.order);
    int r = 0;
    for (int x = 0; x < g.order; ++x) {
        if (x == g.e) continue;
        rows.a[r][x] = 1;
        rows.a[r][g.e] = -1;
        ++r;
    }
    return rows;
}

// coefficients of (basis element x - 1) * v inside ZG
Zvec left_mult_by_xminus1(const groups::FiniteGroup& g, int x, const Zvec& v) {
    Zvec out(g.order, 0);
    for (int i = 0; i < g.order; ++i) {
        out[g.mul[x][i]] += v[i];
        out[i] -= v[i];
    }
    return out;
}

} // namespace

ZGLattice augmentation_lattice(GroupPtr g) {
    if (!g) throw gg_error("lattice needs a group");
    if (g->order == 1) return gmodule::make_zg_lattice(g, {}, 0);
    return gmodule::sublattice_module(gmodule::regular_lattice(g), aug_basis_rows(*g));
}

ZGLattice free_module_lattice(GroupPtr g, int k) {
    if (!g) throw gg_error("lattice needs a group");
    if (k < 0) throw gg_error("negative rank");
    int n = g->order;
    std::vector<IntMat> acts;
    for (int gen : g->gens) {
        IntMat a(k * n, k * n);
        for (int b = 0; b < k; ++b)
            for (int x = 0; x < n; ++x) a.a[b * n + x][b * n + g->op(x, gen)] = 1;
        acts.push_back(std::move(a));
    }
    return gmodule::make_zg_lattice(g, std::move(acts), k * n);
}

IntMat fox_row(GroupPtr g, const Presentation& pres, const std::vector<int>& images,
               const Word& w) {
    if (!g) throw gg_error("derivative needs a group");
    int n = g->order, m = pres.free_rank();
    if ((int)images.size() != m) throw gg_error("one image per free generator");
    IntMat d(1, m * n);
    for (const auto& [letter, exp] : w.syllables) {
        if (letter < 0 || letter >= m) throw gg_error("word letter outside the alphabet");
        int x = images[letter];
        // D(u * s) = D(u) * sbar + D(s), with sbar the image of the syllable
        int s = g->power(x, exp);
        Zvec moved(m * n, 0);
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < n; ++i) moved[k * n + g->op(i, s)] = d.a[0][k * n + i];
        d.a[0] = std::move(moved);
        if (exp > 0)
            for (long i = 0; i < exp; ++i) d.a[0][letter * n + g->power(x, i)] += 1;
        else
            for (long i = 1; i <= -exp; ++i) d.a[0][letter * n + g->power(x, -i)] -= 1;
    }
    // fundamental identity: sum_k (image_k - 1) * D_k(w) = wbar - 1
    Zvec total(n, 0);
    for (int k = 0; k < m; ++k) {
        Zvec dk(d.a[0].begin() + k * n, d.a[0].begin() + (k + 1) * n);
        Zvec part = left_mult_by_xminus1(*g, images[k], dk);
        for (int i = 0; i < n; ++i) total[i] += part[i];
    }
    Zvec expect(n, 0);
    expect[groups::eval_word(*g, w, images)] += 1;
    expect[g->e] -= 1;
    if (total != expect) throw invariant_error("free derivative lost the word identity");
    return d;
}

RelationLattice relation_lattice(GroupPtr g, const Presentation& pres,
                                 std::vector<int> images) {
    if (!g) throw gg_error("relation module needs a group");
    if (images.empty()) images = groups::default_images(*g, pres);
    groups::validate_presentation(*g, pres, images);

    int n = g->order, m = pres.free_rank();
    IntMat map(m * n, n);  // e_k * x  ->  (image_k - 1) * x
    for (int k = 0; k < m; ++k)
        for (int x = 0; x < n; ++x) {
            map.a[k * n + x][g->op(images[k], x)] += 1;
            map.a[k * n + x][x] -= 1;
        }
    IntMat emb = exactla::integer_kernel(map);
    if (emb.rows != m * n - (n - 1))
        throw invariant_error("relation lattice has the wrong rank");
    if (!int_is_zero(exactla::int_mul(emb, map)))
        throw invariant_error("relation lattice escaped the kernel");

    ZGLattice lat = gmodule::sublattice_module(free_module_lattice(g, m), emb);
    exactla::SmithForm sf = exactla::smith_normal_form(emb);
    IntMat fox((int)pres.relators.size(), emb.rows);
    for (size_t r = 0; r < pres.relators.size(); ++r) {
        IntMat row = fox_row(g, pres, images, pres.relators[r]);
        auto local = sf.solve(row.a[0]);
        if (!local) throw invariant_error("relator derivative escaped the kernel");
        for (int j = 0; j < emb.rows; ++j) fox.a[(int)r][j] = (*local)[j];
    }
    return RelationLattice{std::move(lat), std::move(emb), pres, std::move(images),
                           std::move(fox)};
}

ResolutionSpec periodic_cyclic_resolution(GroupPtr g, int stages) {
    if (!g) throw gg_error("resolution needs a group");
    if (stages < 1) throw gg_error("need at least one stage");
    if (!groups::is_cyclic(*g))
        throw gg_error("built-in periodic resolutions cover cyclic groups only");
    int n = g->order, x = 0;
    while (g->order_of(x) != n) ++x;
    ResolutionSpec spec{g, std::vector<int>(stages, 1), {}};
    for (int t = 1; t <= stages; ++t) {
        IntMat row(1, n);
        if (t % 2 == 1) {
            row.a[0][x] += 1;
            row.a[0][g->e] -= 1;
        } else {
            for (int i = 0; i < n; ++i) row.a[0][i] = 1;
        }
        spec.boundary.push_back(std::move(row));
    }
    return spec;
}

IntMat boundary_matrix(const ResolutionSpec& spec, int t) {
    if (!spec.g) throw gg_error("resolution needs a group");
    if (spec.ranks.size() != spec.boundary.size())
        throw gg_error("one boundary per stage");
    if (t < 1 || t > (int)spec.ranks.size()) throw gg_error("stage out of range");
    int n = spec.g->order;
    int ft = spec.ranks[t - 1];
    int prev = t == 1 ? 1 : spec.ranks[t - 2];
    const IntMat& b = spec.boundary[t - 1];
    if (b.rows != ft || b.cols != prev * n)
        throw gg_error("boundary matrix has the wrong shape");
    IntMat full(ft * n, prev * n);
    for (int k = 0; k < ft; ++k)
        for (int x = 0; x < n; ++x)
            for (int c = 0; c < prev; ++c)
                for (int i = 0; i < n; ++i)
                    full.a[k * n + x][c * n + spec.g->op(i, x)] = b.a[k][c * n + i];
    return full;
}

ResolutionKernel resolution_kernel(const ResolutionSpec& spec, int s) {
    if (s < 1 || s > (int)spec.ranks.size()) throw gg_error("stage out of range");
    std::vector<IntMat> full;
    for (int t = 1; t <= s; ++t) full.push_back(boundary_matrix(spec, t));
    if (!(exactla::hnf(full[0]) == exactla::hnf(aug_basis_rows(*spec.g))))
        throw gg_error("stage-1 image is not the augmentation ideal");
    for (int t = 2; t <= s; ++t) {
        if (!int_is_zero(exactla::int_mul(spec.boundary[t - 1], full[t - 2])))
            throw gg_error("boundaries do not compose to zero at stage " +
                           std::to_string(t));
        if (!(exactla::hnf(full[t - 1]) == exactla::integer_kernel(full[t - 2])))
            throw gg_error("resolution is not exact at stage " + std::to_string(t - 1));
    }
    IntMat emb = exactla::integer_kernel(full[s - 1]);
    ZGLattice lat = gmodule::sublattice_module(free_module_lattice(spec.g, spec.ranks[s - 1]),
                                               emb);
    return ResolutionKernel{std::move(lat), std::move(emb)};
}

long good_prime(GroupPtr g, const std::vector<long>& module_torsion) {
    std::vector<long> avoid = groups::primes_of_group(*g);
    for (long q : module_torsion)
        if (std::find(avoid.begin(), avoid.end(), q) == avoid.end()) avoid.push_back(q);
    return primes::smallest_prime_outside(avoid);
}

long good_prime(const gmodule::FiniteZGModule& m) {
    return good_prime(m.lat.g, gmodule::module_primes(m));
}

std::optional<SwanWitness> swan_witness(const ZGLattice& m, int attempts,
                                        unsigned long seed) {
    if (attempts <= 0) return std::nullopt;
    std::vector<long> gps = groups::primes_of_group(*m.g);
    if (m.rank == 0) return SwanWitness{gps.empty() ? 2 : gps.front(), IntMat(0, 0)};

    std::map<long, std::vector<std::vector<long>>> sets;
    auto gen_set = [&](long q) -> const std::vector<std::vector<long>>& {
        auto it = sets.find(q);
        if (it == sets.end())
            it = sets.emplace(q, gmodule::minimal_generating_set(
                                     gmodule::reduce_lattice(m, q)))
                     .first;
        return it->second;
    };

    int best = (int)gen_set(gmodule::good_prime(m)).size();
    for (long q : gps) best = std::max(best, (int)gen_set(q).size());
    std::vector<long> cands;
    for (long q : gps)
        if ((int)gen_set(q).size() == best) cands.push_back(q);
    if (cands.empty()) cands.push_back(gmodule::good_prime(m));  // trivial group

    std::mt19937_64 rng(seed);
    for (long p : cands) {
        IntMat x(best, m.rank);
        for (int i = 0; i < best; ++i)
            for (int j = 0; j < m.rank; ++j) x.a[i][j] = gen_set(p)[i][j];
        for (int att = 0; att < attempts; ++att) {
            auto inv = gmodule::quotient_invariants(m, x);
            if (inv.empty()) return SwanWitness{p, std::move(x)};
            for (const auto& d : inv)
                if (d == 0) throw invariant_error("mod-p generators lost the rational span");
            // mix per-prime generating sets so that x' = x_q (mod q) for every
            // prime q of the group, of the current quotient, and p itself
            std::set<long> s{p};
            s.insert(gps.begin(), gps.end());
            for (long q : primes::factor_primes(inv.back())) s.insert(q);
            mpz_class L = 1;
            for (long q : s) L *= q;
            IntMat mixed(best, m.rank);
            for (long q : s) {
                std::vector<std::vector<long>> rows = gen_set(q);
                if (att >= 2) std::shuffle(rows.begin(), rows.end(), rng);
                mpz_class lq = L / q;
                long lq_mod_q = mpz_class(lq % q).get_si();
                mpz_class cq = lq * exactla::inv_mod(lq_mod_q, q) % L;
                for (int i = 0; i < best; ++i) {
                    if (i >= (int)rows.size()) continue;  // zero-padding keeps generation
                    for (int j = 0; j < m.rank; ++j)
                        mixed.a[i][j] = (mixed.a[i][j] + cq * rows[i][j]) % L;
                }
            }
            x = std::move(mixed);
        }
    }
    return std::nullopt;
}

} // namespace gengap::builders
