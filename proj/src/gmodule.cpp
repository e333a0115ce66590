#include "gengap/gmodule.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "gengap/primes.hpp"

namespace gengap::gmodule {
namespace {

using exactla::Rref;
using groups::FiniteGroup;

void check_same_group(const GroupPtr& a, const GroupPtr& b) {
    if (!a || !b) throw gg_error("module carries no group");
    if (a == b) return;
    if (a->order != b->order || a->mul != b->mul)
        throw gg_error("objects live over different groups");
}

long mod_p(const mpz_class& v, long p) {
    mpz_class r = v % p;
    if (r < 0) r += p;
    return r.get_si();
}

FpMat rows_matrix(long p, int cols, const std::vector<std::vector<long>>& rows) {
    FpMat m(p, (int)rows.size(), cols);
    for (size_t i = 0; i < rows.size(); ++i) {
        if ((int)rows[i].size() != cols) throw gg_error("row length mismatch");
        for (int j = 0; j < cols; ++j) m.at((int)i, j) = ((rows[i][j] % p) + p) % p;
    }
    return m;
}

FpMat fp_stack(const FpMat& top, const FpMat& bottom) {
    if (top.p != bottom.p || top.cols != bottom.cols)
        throw gg_error("stack shape mismatch");
    FpMat m(top.p, top.rows + bottom.rows, top.cols);
    for (int i = 0; i < top.rows; ++i) m.a[i] = top.a[i];
    for (int i = 0; i < bottom.rows; ++i) m.a[top.rows + i] = bottom.a[i];
    return m;
}

// rows v with v * m == 0
FpMat right_kernel(const FpMat& m) { return exactla::rref(exactla::fp_transpose(m)).kernel; }

// Reduce v against rref basis rows in place; true if v is in the rowspace.
bool reduce_against(std::vector<long>& v, const FpMat& basis) {
    long p = basis.p;
    for (int i = 0; i < basis.rows; ++i) {
        int piv = -1;
        for (int j = 0; j < basis.cols; ++j)
            if (basis.at(i, j) != 0) { piv = j; break; }
        if (piv < 0) continue;
        long c = v[piv] % p;
        if (c == 0) continue;
        for (int j = 0; j < basis.cols; ++j)
            v[j] = ((v[j] - c * basis.at(i, j)) % p + p) % p;
    }
    for (long x : v)
        if (x % p != 0) return false;
    return true;
}

// Coordinates of v in an rref basis (v must lie in the rowspace).
std::vector<long> coords_in(const std::vector<long>& v, const FpMat& basis) {
    std::vector<long> out(basis.rows, 0), w = v;
    long p = basis.p;
    for (int i = 0; i < basis.rows; ++i) {
        int piv = -1;
        for (int j = 0; j < basis.cols; ++j)
            if (basis.at(i, j) != 0) { piv = j; break; }
        if (piv < 0) continue;
        long c = ((w[piv] % p) + p) % p;
        out[i] = c;
        if (c == 0) continue;
        for (int j = 0; j < basis.cols; ++j)
            w[j] = ((w[j] - c * basis.at(i, j)) % p + p) % p;
    }
    for (long x : w)
        if (x % p != 0) throw invariant_error("vector not in the claimed subspace");
    return out;
}

int div_ceil(int a, int b) { return (a + b - 1) / b; }

std::vector<long> counter_vector(unsigned long long k, long p, int dim) {
    std::vector<long> v(dim, 0);
    for (int i = 0; i < dim && k; ++i) {
        v[i] = (long)(k % (unsigned long long)p);
        k /= (unsigned long long)p;
    }
    return v;
}

// ---- group-algebra arithmetic on coefficient vectors over G ----

std::vector<long> coef_mul(const FiniteGroup& G, long p, const std::vector<long>& x,
                           const std::vector<long>& y) {
    std::vector<long> out(G.order, 0);
    for (int g = 0; g < G.order; ++g) {
        if (x[g] == 0) continue;
        for (int h = 0; h < G.order; ++h) {
            if (y[h] == 0) continue;
            int gh = G.mul[g][h];
            out[gh] = (out[gh] + x[g] * y[h]) % p;
        }
    }
    return out;
}

// Matrix of w -> z*w on row vectors: row i = z * e_i.
FpMat left_mult_matrix(const FiniteGroup& G, long p, const std::vector<long>& z) {
    FpMat m(p, G.order, G.order);
    for (int i = 0; i < G.order; ++i)
        for (int g = 0; g < G.order; ++g)
            if (z[g]) m.at(i, G.mul[g][i]) = (m.at(i, G.mul[g][i]) + z[g]) % p;
    return m;
}

// Coefficients of det(X*I - a), leading coefficient first (index k holds the
// coefficient of X^{n-k}). Division-free Berkowitz recurrence.
std::vector<long> charpoly_mod_p(const FpMat& a) {
    long p = a.p;
    int n = a.rows;
    std::vector<long> C{1 % p};
    for (int r = 1; r <= n; ++r) {
        std::vector<long> t(r + 1, 0);
        t[0] = 1 % p;
        t[1] = (p - a.at(r - 1, r - 1) % p) % p;
        std::vector<long> row(r - 1);
        for (int j = 0; j < r - 1; ++j) row[j] = a.at(r - 1, j);
        for (int k = 2; k <= r; ++k) {
            long dot = 0;
            for (int j = 0; j < r - 1; ++j) dot = (dot + row[j] * a.at(j, r - 1)) % p;
            t[k] = (p - dot) % p;
            if (k < r) {
                std::vector<long> nr(r - 1, 0);
                for (int j = 0; j < r - 1; ++j) {
                    if (row[j] == 0) continue;
                    for (int l = 0; l < r - 1; ++l)
                        nr[l] = (nr[l] + row[j] * a.at(j, l)) % p;
                }
                row = std::move(nr);
            }
        }
        std::vector<long> Cn(r + 1, 0);
        for (int i = 0; i <= r; ++i) {
            long s = 0;
            for (int j = std::max(0, i - r); j < (int)C.size() && j <= i; ++j)
                s = (s + t[i - j] * C[j]) % p;
            Cn[i] = s;
        }
        C = std::move(Cn);
    }
    return C;
}

// Radical of F_pG by the characteristic-polynomial coefficient chain: starting
// from the whole algebra, intersect with the kernels of x -> c_{p^i}(x*y) for
// y in the current space, for p^i up to |G|. Over the prime field each such
// map is linear on the current space.
FpMat radical_chain(const GroupPtr& g, long p) {
    const FiniteGroup& G = *g;
    int n = G.order;
    FpMat J = exactla::fp_identity(p, n);
    for (long q = 1; q <= n; q *= p) {
        int m = J.rows;
        if (m == 0) break;
        FpMat vals(p, m, m);
        for (int k = 0; k < m; ++k)
            for (int j = 0; j < m; ++j) {
                std::vector<long> z = coef_mul(G, p, J.a[k], J.a[j]);
                std::vector<long> cp = charpoly_mod_p(left_mult_matrix(G, p, z));
                vals.at(k, j) = cp[(size_t)q];
            }
        FpMat ker = right_kernel(vals);  // rows in J coordinates
        J = exactla::rref(exactla::fp_mul(ker, J)).rowspace;
    }
    return J;
}

// For abelian G the radical is the set of nilpotents, i.e. the kernel of an
// iterated coefficient-shuffling Frobenius x -> x^p.
FpMat radical_abelian(const GroupPtr& g, long p) {
    const FiniteGroup& G = *g;
    int n = G.order;
    FpMat F(p, n, n);
    for (int x = 0; x < n; ++x) F.at(x, G.power(x, p)) = 1;
    FpMat M = exactla::fp_identity(p, n);
    for (long q = 1; q < n; q *= p) M = exactla::fp_mul(M, F);
    return exactla::rref(right_kernel(M)).rowspace;
}

bool same_rowspace(const FpMat& a, const FpMat& b) {
    FpMat ra = exactla::rref(a).rowspace, rb = exactla::rref(b).rowspace;
    return ra.rows == rb.rows && ra.a == rb.a;
}

// ---- cached algebra structure ----

std::string cache_note(const GroupPtr& g, long p) {
    return "|G|=" + std::to_string(g->order) + ", p=" + std::to_string(p);
}

// Multiplication of B = F_pG/rad in quotient coordinates.
struct BAlgebra {
    long p = 0;
    int dim = 0;
    std::vector<std::vector<std::vector<long>>> sc;  // sc[i][j] = b_i * b_j
    std::vector<long> one;

    std::vector<long> mul(const std::vector<long>& u, const std::vector<long>& v) const {
        std::vector<long> out(dim, 0);
        for (int i = 0; i < dim; ++i) {
            if (u[i] == 0) continue;
            for (int j = 0; j < dim; ++j) {
                if (v[j] == 0) continue;
                long c = (u[i] * v[j]) % p;
                for (int k = 0; k < dim; ++k) out[k] = (out[k] + c * sc[i][j][k]) % p;
            }
        }
        return out;
    }
};

std::vector<long> scale_vec(long c, const std::vector<long>& v, long p) {
    std::vector<long> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = (((c % p) * v[i]) % p + p) % p;
    return out;
}

std::vector<long> add_vec(const std::vector<long>& a, const std::vector<long>& b, long p) {
    std::vector<long> out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + b[i]) % p;
    return out;
}

bool is_zero_vec(const std::vector<long>& v, long p) {
    for (long x : v)
        if (x % p != 0) return false;
    return true;
}

// Primitive idempotents of the Frobenius-fixed subalgebra of the centre of B,
// found by recursive eigenspace splitting; these are the central primitive
// idempotents of B.
std::vector<std::vector<long>> split_idempotents(const BAlgebra& B, const FpMat& fixed) {
    long p = B.p;
    std::vector<std::vector<long>> out;
    std::vector<std::pair<FpMat, std::vector<long>>> work;
    work.emplace_back(exactla::rref(fixed).rowspace, B.one);
    while (!work.empty()) {
        auto [V, u] = std::move(work.back());
        work.pop_back();
        if (V.rows == 0) throw invariant_error("empty idempotent component");
        if (V.rows == 1) {
            if (B.mul(u, u) != u) throw invariant_error("component unit is not idempotent");
            out.push_back(u);
            continue;
        }
        // a basis vector not proportional to the unit
        std::vector<long> w;
        for (int i = 0; i < V.rows && w.empty(); ++i) {
            int piv = -1;
            for (int j = 0; j < V.cols; ++j)
                if (u[j] != 0) { piv = j; break; }
            long lam = (V.at(i, piv) * exactla::inv_mod(u[piv], p)) % p;
            if (V.a[i] != scale_vec(lam, u, p)) w = V.a[i];
        }
        if (w.empty()) throw invariant_error("fixed space lacks a splitting element");
        // multiplication by w on V, in V coordinates
        FpMat lw(p, V.rows, V.rows);
        for (int i = 0; i < V.rows; ++i) {
            std::vector<long> c = coords_in(B.mul(w, V.a[i]), V);
            lw.a[i] = c;
        }
        std::vector<std::pair<long, FpMat>> eigen;
        for (long lam = 0; lam < p; ++lam) {
            FpMat shifted = lw;
            for (int i = 0; i < V.rows; ++i)
                shifted.at(i, i) = ((shifted.at(i, i) - lam) % p + p) % p;
            FpMat ker = right_kernel(shifted);
            if (ker.rows == 0) continue;
            eigen.emplace_back(lam, exactla::rref(exactla::fp_mul(ker, V)).rowspace);
        }
        if (eigen.size() < 2) throw invariant_error("splitting element failed to split");
        std::vector<long> total(B.dim, 0);
        for (auto& [lam, Vl] : eigen) {
            std::vector<long> ul = u;
            for (auto& [mu, Vm] : eigen) {
                if (mu == lam) continue;
                std::vector<long> f = add_vec(w, scale_vec(p - mu, u, p), p);  // w - mu*u
                ul = B.mul(ul, f);
                ul = scale_vec(exactla::inv_mod(((lam - mu) % p + p) % p, p), ul, p);
            }
            if (is_zero_vec(ul, p)) throw invariant_error("component unit vanished");
            if (B.mul(ul, ul) != ul) throw invariant_error("eigen unit is not idempotent");
            coords_in(ul, Vl);  // membership check
            total = add_vec(total, ul, p);
            work.emplace_back(Vl, ul);
        }
        if (total != u) throw invariant_error("idempotents do not sum to the unit");
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::unique_ptr<AlgebraData> build_algebra_data(GroupPtr g, long p) {
    auto ad = std::make_unique<AlgebraData>();
    ad->g = g;
    ad->p = p;
    ad->radical = algebra_radical(g, p);

    FpGModule reg = regular_module(g, p);
    Quotient bq = quotient(reg, ad->radical);
    int q = bq.mod.dim;
    if (q == 0) throw invariant_error("radical swallowed the whole algebra");

    // surviving group-basis columns give the section used by proj/lift
    BAlgebra B;
    B.p = p;
    B.dim = q;
    B.sc.assign(q, std::vector<std::vector<long>>(q));
    // basis i of B is the class of the group element behind lift row i
    std::vector<int> rep(q, -1);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < bq.lift.cols; ++j)
            if (bq.lift.at(i, j) != 0) { rep[i] = j; break; }
        if (rep[i] < 0) throw invariant_error("quotient section has a zero row");
    }
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) B.sc[i][j] = bq.proj.a[g->mul[rep[i]][rep[j]]];
    B.one = bq.proj.a[g->e];

    // centre of B
    FpMat comm(p, q, q * q);
    for (int k = 0; k < q; ++k)
        for (int j = 0; j < q; ++j)
            for (int c = 0; c < q; ++c)
                comm.at(k, j * q + c) = ((B.sc[k][j][c] - B.sc[j][k][c]) % p + p) % p;
    FpMat centre = exactla::rref(right_kernel(comm)).rowspace;
    if (centre.rows == 0) throw invariant_error("centre of the top algebra is empty");

    // Frobenius-fixed subspace of the centre
    FpMat frob(p, centre.rows, centre.rows);
    for (int t = 0; t < centre.rows; ++t) {
        std::vector<long> pw = B.one;
        for (long i = 0; i < p; ++i) pw = B.mul(pw, centre.a[t]);
        frob.a[t] = coords_in(pw, centre);
    }
    for (int t = 0; t < centre.rows; ++t)
        frob.at(t, t) = ((frob.at(t, t) - 1) % p + p) % p;
    FpMat fixed = exactla::fp_mul(right_kernel(frob), centre);

    std::vector<std::vector<long>> idems = split_idempotents(B, fixed);

    int total = 0;
    for (const auto& e : idems) {
        std::vector<std::vector<long>> image;
        for (int k = 0; k < q; ++k) {
            std::vector<long> unit(q, 0);
            unit[k] = 1;
            image.push_back(B.mul(unit, e));
        }
        FpMat basis = exactla::rref(rows_matrix(p, q, image)).rowspace;
        if (basis.rows == 0) throw invariant_error("empty algebra block");
        AlgebraBlock blk;
        blk.dim = basis.rows;
        blk.block = submodule(bq.mod, basis).mod;
        blk.idempotent = exactla::fp_vec_mul(e, bq.lift);
        ad->blocks.push_back(std::move(blk));
        total += basis.rows;
    }
    if (total != q)
        throw invariant_error("block dimensions do not fill the top algebra (" +
                              cache_note(g, p) + ")");
    return ad;
}

std::map<std::pair<const FiniteGroup*, long>, std::unique_ptr<AlgebraData>>& algebra_cache() {
    static std::map<std::pair<const FiniteGroup*, long>, std::unique_ptr<AlgebraData>> c;
    return c;
}

std::map<std::pair<const FiniteGroup*, long>, std::vector<SimpleModule>>& simples_cache() {
    static std::map<std::pair<const FiniteGroup*, long>, std::vector<SimpleModule>> c;
    return c;
}

int min_generators_with(const FpGModule& n, const AlgebraData& ad);

// ---- integral helpers ----

IntMat int_identity_times(const mpz_class& c, int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = c;
    return m;
}

IntMat lift_rows(const FpMat& m) {
    IntMat out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out.at(i, j) = m.at(i, j);
    return out;
}

mpz_class hnf_det(const IntMat& h) {
    mpz_class d = 1;
    for (int i = 0; i < h.rows; ++i) d *= h.at(i, i);
    return d;
}

} // namespace

// ---- F_pG-modules ----

FpGModule make_fpg_module(GroupPtr g, long p, std::vector<FpMat> gen_action,
                          int dim_if_no_gens) {
    if (!g) throw gg_error("module needs a group");
    exactla::check_prime_modulus(p);
    if (gen_action.size() != g->gens.size())
        throw gg_error("need one action matrix per distinguished generator");
    int dim = gen_action.empty() ? dim_if_no_gens : gen_action[0].rows;
    for (const auto& a : gen_action) {
        if (a.p != p || a.rows != a.cols || a.rows != dim)
            throw gg_error("action matrices must be square, same size, same modulus");
        if (exactla::rref(a).rank != dim)
            throw gg_error("action matrix is singular");
    }
    FpGModule n{std::move(g), p, dim, std::move(gen_action)};
    auto table = element_action_table(n);
    for (int x = 0; x < n.g->order; ++x)
        for (size_t j = 0; j < n.g->gens.size(); ++j) {
            int y = n.g->mul[x][n.g->gens[j]];
            if (!(exactla::fp_mul(table[x], n.gen_action[j]).a == table[y].a))
                throw gg_error("matrices do not define a group action");
        }
    return n;
}

FpGModule regular_module(GroupPtr g, long p) {
    exactla::check_prime_modulus(p);
    int n = g->order;
    std::vector<FpMat> acts;
    for (int gen : g->gens) {
        FpMat m(p, n, n);
        for (int h = 0; h < n; ++h) m.at(h, g->mul[h][gen]) = 1;
        acts.push_back(std::move(m));
    }
    return FpGModule{std::move(g), p, n, std::move(acts)};
}

FpGModule zero_module(GroupPtr g, long p) {
    exactla::check_prime_modulus(p);
    std::vector<FpMat> acts(g->gens.size(), FpMat(p, 0, 0));
    return FpGModule{std::move(g), p, 0, std::move(acts)};
}

FpMat element_action(const FpGModule& n, int x) {
    if (x < 0 || x >= n.g->order) throw gg_error("element out of range");
    if (x == n.g->e) return exactla::fp_identity(n.p, n.dim);
    auto [parent, gen] = n.g->via[x];
    return exactla::fp_mul(element_action(n, parent), n.gen_action[gen]);
}

std::vector<FpMat> element_action_table(const FpGModule& n) {
    std::vector<FpMat> table(n.g->order);
    std::vector<bool> done(n.g->order, false);
    table[n.g->e] = exactla::fp_identity(n.p, n.dim);
    done[n.g->e] = true;
    // via[] chains always point toward the identity
    for (int x = 0; x < n.g->order; ++x) {
        std::vector<int> path;
        int y = x;
        while (!done[y]) {
            path.push_back(y);
            y = n.g->via[y].first;
        }
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            table[*it] = exactla::fp_mul(table[n.g->via[*it].first], n.gen_action[n.g->via[*it].second]);
            done[*it] = true;
        }
    }
    return table;
}

namespace {

FpMat coef_action_with(const std::vector<FpMat>& table, long p, int dim,
                       const std::vector<long>& coef) {
    FpMat out(p, dim, dim);
    for (size_t x = 0; x < table.size(); ++x) {
        long c = ((coef[x] % p) + p) % p;
        if (c == 0) continue;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                out.at(i, j) = (out.at(i, j) + c * table[x].at(i, j)) % p;
    }
    return out;
}

} // namespace

FpMat coef_action(const FpGModule& n, const std::vector<long>& coef) {
    if ((int)coef.size() != n.g->order) throw gg_error("coefficient vector length mismatch");
    return coef_action_with(element_action_table(n), n.p, n.dim, coef);
}

FpMat ring_action(const FpGModule& n, const gring::GroupRingElement& r) {
    check_same_group(n.g, r.g);
    if (r.p != 0 && r.p != n.p) throw gg_error("ring element carries a different modulus");
    std::vector<long> coef(n.g->order);
    for (int x = 0; x < n.g->order; ++x) coef[x] = mod_p(r.coef[x], n.p);
    return coef_action(n, coef);
}

FpMat spin(const FpGModule& n, const FpMat& seeds) {
    if (seeds.cols != n.dim || seeds.p != n.p) throw gg_error("seed shape mismatch");
    FpMat basis = exactla::rref(seeds).rowspace;
    for (;;) {
        FpMat next = basis;
        for (const auto& a : n.gen_action) next = fp_stack(next, exactla::fp_mul(basis, a));
        FpMat closed = exactla::rref(next).rowspace;
        if (closed.rows == basis.rows) return closed;
        basis = std::move(closed);
    }
}

FpMat spin(const FpGModule& n, const std::vector<std::vector<long>>& seeds) {
    return spin(n, rows_matrix(n.p, n.dim, seeds));
}

Submodule submodule(const FpGModule& n, const FpMat& closed_basis) {
    FpMat basis = exactla::rref(closed_basis).rowspace;
    std::vector<int> pivots;
    for (int i = 0; i < basis.rows; ++i)
        for (int j = 0; j < basis.cols; ++j)
            if (basis.at(i, j) != 0) { pivots.push_back(j); break; }
    if ((int)pivots.size() != basis.rows) throw gg_error("degenerate subspace basis");
    std::vector<FpMat> acts;
    for (const auto& a : n.gen_action) {
        FpMat m(n.p, basis.rows, basis.rows);
        for (int i = 0; i < basis.rows; ++i) {
            std::vector<long> img = exactla::fp_vec_mul(basis.a[i], a);
            std::vector<long> red = img;
            if (!reduce_against(red, basis))
                throw gg_error("subspace is not action-closed");
            for (int k = 0; k < basis.rows; ++k) m.at(i, k) = img[pivots[k]];
        }
        acts.push_back(std::move(m));
    }
    return Submodule{FpGModule{n.g, n.p, basis.rows, std::move(acts)}, basis};
}

Quotient quotient(const FpGModule& n, const FpMat& closed_subspace) {
    FpMat w = exactla::rref(closed_subspace).rowspace;
    std::vector<bool> pivot(n.dim, false);
    for (int i = 0; i < w.rows; ++i)
        for (int j = 0; j < w.cols; ++j)
            if (w.at(i, j) != 0) { pivot[j] = true; break; }
    std::vector<int> np;
    for (int j = 0; j < n.dim; ++j)
        if (!pivot[j]) np.push_back(j);
    int q = (int)np.size();

    FpMat proj(n.p, n.dim, q), lift(n.p, q, n.dim);
    for (int j = 0; j < n.dim; ++j) {
        std::vector<long> e(n.dim, 0);
        e[j] = 1;
        reduce_against(e, w);
        for (int k = 0; k < q; ++k) proj.at(j, k) = e[np[k]];
    }
    for (int k = 0; k < q; ++k) lift.at(k, np[k]) = 1;

    std::vector<FpMat> acts;
    for (const auto& a : n.gen_action)
        acts.push_back(exactla::fp_mul(exactla::fp_mul(lift, a), proj));
    // well-definedness: the subspace must be action-closed
    for (const auto& a : n.gen_action) {
        FpMat img = exactla::fp_mul(w, a);
        for (int i = 0; i < img.rows; ++i) {
            std::vector<long> v = img.a[i];
            if (!reduce_against(v, w)) throw gg_error("subspace is not action-closed");
        }
    }
    return Quotient{FpGModule{n.g, n.p, q, std::move(acts)}, std::move(proj), std::move(lift)};
}

namespace {

// Basis of Hom_G(m, n) as flattened matrices; kernel of the equivariance system.
std::vector<FpMat> hom_space(const FpGModule& m, const FpGModule& n) {
    check_same_group(m.g, n.g);
    if (m.p != n.p) throw gg_error("hom between different characteristics");
    long p = m.p;
    int dm = m.dim, dn = n.dim;
    if (dm == 0 || dn == 0) return {};
    int ng = (int)m.gen_action.size();
    FpMat sys(p, dm * dn, ng * dm * dn);
    for (int t = 0; t < ng; ++t) {
        const FpMat& am = m.gen_action[t];
        const FpMat& an = n.gen_action[t];
        for (int a = 0; a < dm; ++a)
            for (int b = 0; b < dn; ++b) {
                int row = a * dn + b;
                for (int i = 0; i < dm; ++i) {
                    int col = t * dm * dn + i * dn + b;
                    sys.at(row, col) = (sys.at(row, col) + am.at(i, a)) % p;
                }
                for (int j = 0; j < dn; ++j) {
                    int col = t * dm * dn + a * dn + j;
                    sys.at(row, col) = ((sys.at(row, col) - an.at(b, j)) % p + p) % p;
                }
            }
    }
    FpMat ker = right_kernel(sys);
    std::vector<FpMat> out;
    for (int r = 0; r < ker.rows; ++r) {
        FpMat phi(p, dm, dn);
        for (int a = 0; a < dm; ++a)
            for (int b = 0; b < dn; ++b) phi.at(a, b) = ker.at(r, a * dn + b);
        out.push_back(std::move(phi));
    }
    return out;
}

} // namespace

int hom_dim(const FpGModule& m, const FpGModule& n) { return (int)hom_space(m, n).size(); }

// ---- algebra structure ----

FpMat algebra_radical(GroupPtr g, long p) {
    exactla::check_prime_modulus(p);
    FpMat rad = radical_chain(g, p);
    if (groups::is_abelian(*g)) {
        FpMat frob = radical_abelian(g, p);
        if (!same_rowspace(rad, frob))
            throw invariant_error("radical routes disagree (" + cache_note(g, p) + ")");
    }
    if (g->order % p != 0 && rad.rows != 0)
        throw invariant_error("nonzero radical in the semisimple case (" + cache_note(g, p) + ")");
    // two-sided ideal
    const FiniteGroup& G = *g;
    for (int i = 0; i < rad.rows; ++i)
        for (int gen : G.gens) {
            std::vector<long> eg(G.order, 0);
            eg[gen] = 1;
            std::vector<long> r = coef_mul(G, p, rad.a[i], eg);
            std::vector<long> l = coef_mul(G, p, eg, rad.a[i]);
            if (!reduce_against(r, rad) || !reduce_against(l, rad))
                throw invariant_error("radical candidate is not an ideal (" + cache_note(g, p) + ")");
        }
    // nilpotency
    FpMat power = rad;
    while (power.rows > 0) {
        std::vector<std::vector<long>> prods;
        for (int i = 0; i < power.rows; ++i)
            for (int j = 0; j < rad.rows; ++j) prods.push_back(coef_mul(G, p, power.a[i], rad.a[j]));
        FpMat next = exactla::rref(rows_matrix(p, G.order, prods)).rowspace;
        if (next.rows >= power.rows)
            throw invariant_error("radical candidate is not nilpotent (" + cache_note(g, p) + ")");
        power = std::move(next);
    }
    return rad;
}

const AlgebraData& algebra_data(GroupPtr g, long p) {
    auto key = std::make_pair(g.get(), p);
    auto& cache = algebra_cache();
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_algebra_data(g, p)).first;
    return *it->second;
}

FpMat module_radical(const FpGModule& n) {
    const AlgebraData& ad = algebra_data(n.g, n.p);
    auto table = element_action_table(n);
    FpMat stacked(n.p, 0, n.dim);
    for (int i = 0; i < ad.radical.rows; ++i)
        stacked = fp_stack(stacked, coef_action_with(table, n.p, n.dim, ad.radical.a[i]));
    return exactla::rref(stacked).rowspace;
}

Quotient top(const FpGModule& n) { return quotient(n, module_radical(n)); }

const std::vector<SimpleModule>& algebra_simples(GroupPtr g, long p) {
    auto key = std::make_pair(g.get(), p);
    auto& cache = simples_cache();
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const AlgebraData& ad = algebra_data(g, p);
    std::vector<SimpleModule> out;
    for (size_t b = 0; b < ad.blocks.size(); ++b) {
        const FpGModule& blk = ad.blocks[b].block;
        if (blk.dim == 1) {
            out.push_back({(int)b, blk});
            continue;
        }
        double size = 1;
        for (int i = 0; i < blk.dim; ++i) size *= (double)p;
        if (size > 200000.0)
            throw budget_error("simple extraction infeasible for a block of dimension " +
                               std::to_string(blk.dim));
        FpMat best(p, 0, blk.dim);
        for (unsigned long long k = 1; k < (unsigned long long)size; ++k) {
            FpMat s = spin(blk, {counter_vector(k, p, blk.dim)});
            if (best.rows == 0 || s.rows < best.rows) best = std::move(s);
            if (best.rows == 1) break;
        }
        out.push_back({(int)b, submodule(blk, best).mod});
    }
    it = cache.emplace(key, std::move(out)).first;
    return it->second;
}

namespace {

int min_generators_with(const FpGModule& n, const AlgebraData& ad) {
    if (n.dim == 0) return 0;
    auto table = element_action_table(n);
    FpMat stacked(n.p, 0, n.dim);
    for (int i = 0; i < ad.radical.rows; ++i)
        stacked = fp_stack(stacked, coef_action_with(table, n.p, n.dim, ad.radical.a[i]));
    Quotient t = quotient(n, exactla::rref(stacked).rowspace);
    auto ttable = element_action_table(t.mod);
    int d = 0;
    for (const auto& blk : ad.blocks) {
        int rank = exactla::rref(coef_action_with(ttable, n.p, t.mod.dim, blk.idempotent)).rank;
        if (rank > 0) d = std::max(d, div_ceil(rank, blk.dim));
    }
    return d;
}

} // namespace

int min_generators(const FpGModule& n) {
    return min_generators_with(n, algebra_data(n.g, n.p));
}

std::vector<std::vector<long>> minimal_generating_set(const FpGModule& n, long long scan_cap) {
    const AlgebraData& ad = algebra_data(n.g, n.p);
    int d = min_generators_with(n, ad);
    std::vector<std::vector<long>> chosen;
    FpGModule cur = n;
    FpMat lift_to_n = exactla::fp_identity(n.p, n.dim);
    long long scanned = 0;
    for (int residual = d; residual > 0; --residual) {
        double size = 1;
        for (int i = 0; i < cur.dim; ++i) {
            size *= (double)n.p;
            if (size > 1e18) break;
        }
        bool found = false;
        for (unsigned long long k = 1; !found && (double)k < size; ++k) {
            if (++scanned > scan_cap)
                throw budget_error("generating-set scan exceeded its budget");
            std::vector<long> v = counter_vector(k, n.p, cur.dim);
            Quotient q = quotient(cur, spin(cur, {v}));
            if (min_generators_with(q.mod, ad) == residual - 1) {
                chosen.push_back(exactla::fp_vec_mul(v, lift_to_n));
                lift_to_n = exactla::fp_mul(q.lift, lift_to_n);
                cur = q.mod;
                found = true;
            }
        }
        if (!found) throw invariant_error("no generator lowered the residual count");
    }
    if (spin(n, chosen).rows != n.dim)
        throw invariant_error("claimed generating set does not generate");
    return chosen;
}

int brute_force_min_generators(const FpGModule& n, long long cap) {
    if (n.dim == 0) return 0;
    double size = 1;
    for (int i = 0; i < n.dim; ++i) size *= (double)n.p;
    if (size > 4e18) throw budget_error("state space too large for the exhaustive oracle");
    unsigned long long total = (unsigned long long)size;
    long long spins = 0;

    // depth-first search over index-increasing tuples, each new vector
    // outside the spin of the previous ones
    std::vector<FpMat> stack_spin{FpMat(n.p, 0, n.dim)};
    auto extend = [&](auto&& self, unsigned long long from, int depth) -> bool {
        if (depth == 0) return stack_spin.back().rows == n.dim;
        for (unsigned long long k = from; k < total; ++k) {
            std::vector<long> v = counter_vector(k, n.p, n.dim);
            std::vector<long> red = v;
            if (reduce_against(red, stack_spin.back())) continue;  // redundant seed
            if (++spins > cap) throw budget_error("exhaustive oracle infeasible under the cap");
            stack_spin.push_back(spin(n, fp_stack(stack_spin.back(),
                                                  rows_matrix(n.p, n.dim, {v}))));
            if (self(self, k + 1, depth - 1)) return true;
            stack_spin.pop_back();
        }
        return false;
    };
    for (int k = 1; k <= n.dim; ++k)
        if (extend(extend, 1, k)) return k;
    throw invariant_error("exhaustive search failed to generate the module");
}

// ---- ZG-lattices ----

ZGLattice make_zg_lattice(GroupPtr g, std::vector<IntMat> gen_action, int rank_if_no_gens) {
    if (!g) throw gg_error("lattice needs a group");
    if (gen_action.size() != g->gens.size())
        throw gg_error("need one action matrix per distinguished generator");
    int rank = gen_action.empty() ? rank_if_no_gens : gen_action[0].rows;
    for (const auto& a : gen_action) {
        if (a.rows != a.cols || a.rows != rank)
            throw gg_error("action matrices must be square of equal size");
        mpz_class d = exactla::det(a);
        if (d != 1 && d != -1) throw gg_error("lattice action matrix is not unimodular");
    }
    ZGLattice m{std::move(g), rank, std::move(gen_action)};
    auto table = lattice_element_table(m);
    for (int x = 0; x < m.g->order; ++x)
        for (size_t j = 0; j < m.g->gens.size(); ++j) {
            int y = m.g->mul[x][m.g->gens[j]];
            if (!(exactla::int_mul(table[x], m.gen_action[j]) == table[y]))
                throw gg_error("matrices do not define a group action");
        }
    return m;
}

ZGLattice regular_lattice(GroupPtr g) {
    int n = g->order;
    std::vector<IntMat> acts;
    for (int gen : g->gens) {
        IntMat m(n, n);
        for (int h = 0; h < n; ++h) m.at(h, g->mul[h][gen]) = 1;
        acts.push_back(std::move(m));
    }
    return ZGLattice{std::move(g), n, std::move(acts)};
}

IntMat lattice_element_action(const ZGLattice& m, int x) {
    if (x < 0 || x >= m.g->order) throw gg_error("element out of range");
    if (x == m.g->e) return IntMat::identity(m.rank);
    auto [parent, gen] = m.g->via[x];
    return exactla::int_mul(lattice_element_action(m, parent), m.gen_action[gen]);
}

std::vector<IntMat> lattice_element_table(const ZGLattice& m) {
    std::vector<IntMat> table(m.g->order);
    std::vector<bool> done(m.g->order, false);
    table[m.g->e] = IntMat::identity(m.rank);
    done[m.g->e] = true;
    for (int x = 0; x < m.g->order; ++x) {
        std::vector<int> path;
        int y = x;
        while (!done[y]) {
            path.push_back(y);
            y = m.g->via[y].first;
        }
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            table[*it] =
                exactla::int_mul(table[m.g->via[*it].first], m.gen_action[m.g->via[*it].second]);
            done[*it] = true;
        }
    }
    return table;
}

FpGModule reduce_lattice(const ZGLattice& m, long p) {
    exactla::check_prime_modulus(p);
    std::vector<FpMat> acts;
    for (const auto& a : m.gen_action) acts.push_back(exactla::reduce_mod(a, p));
    return FpGModule{m.g, p, m.rank, std::move(acts)};
}

ZGLattice sublattice_module(const ZGLattice& amb, const IntMat& rows) {
    if (rows.cols != amb.rank) throw gg_error("sublattice rows live in the wrong space");
    exactla::SmithForm sf = exactla::smith_normal_form(rows);
    if (sf.rank() != rows.rows) throw gg_error("sublattice rows are dependent");
    std::vector<IntMat> acts;
    for (const auto& a : amb.gen_action) {
        IntMat c(rows.rows, rows.rows);
        for (int i = 0; i < rows.rows; ++i) {
            auto sol = sf.solve(exactla::int_vec_mul(rows.a[i], a));
            if (!sol) throw gg_error("rowspace is not action-closed over Z");
            c.a[i] = *sol;
        }
        mpz_class d = exactla::det(c);
        if (d != 1 && d != -1) throw gg_error("restricted action is not unimodular");
        acts.push_back(std::move(c));
    }
    return ZGLattice{amb.g, rows.rows, std::move(acts)};
}

std::vector<mpz_class> quotient_invariants(const ZGLattice& m, const IntMat& x) {
    if (x.rows > 0 && x.cols != m.rank) throw gg_error("rows live in the wrong space");
    if (x.rows == 0) return std::vector<mpz_class>(m.rank, 0);
    auto table = lattice_element_table(m);
    IntMat big(x.rows * m.g->order, m.rank);
    int r = 0;
    for (int i = 0; i < x.rows; ++i)
        for (int g = 0; g < m.g->order; ++g) big.a[r++] = exactla::int_vec_mul(x.a[i], table[g]);
    exactla::SmithForm sf = exactla::smith_normal_form(big);
    std::vector<mpz_class> out;
    for (const auto& d : sf.divisors)
        if (d != 1) out.push_back(d);
    for (int i = sf.rank(); i < m.rank; ++i) out.push_back(0);
    return out;
}

mpz_class quotient_exponent(const ZGLattice& m, const IntMat& x) {
    auto inv = quotient_invariants(m, x);
    for (const auto& d : inv)
        if (d == 0) return 0;
    return inv.empty() ? mpz_class(1) : inv.back();
}

long good_prime(const ZGLattice& m) {
    return primes::smallest_prime_outside(groups::primes_of_group(*m.g));
}

int d_rational(const ZGLattice& m) {
    return min_generators(reduce_lattice(m, good_prime(m)));
}

// ---- finite modules ----

FiniteZGModule make_finite_module(ZGLattice lat, IntMat rel_rows) {
    if (rel_rows.cols != lat.rank) throw gg_error("relation rows live in the wrong space");
    IntMat h = exactla::hnf(rel_rows);
    if (h.rows < lat.rank) throw gg_error("quotient is infinite");
    exactla::SmithForm sf = exactla::smith_normal_form(h);
    for (int i = 0; i < h.rows; ++i)
        for (const auto& a : lat.gen_action)
            if (!sf.solve(exactla::int_vec_mul(h.a[i], a)))
                throw gg_error("relation lattice is not action-closed");
    mpz_class order = hnf_det(h);
    if (order > 1000000) throw gg_error("module order exceeds the supported bound");
    return FiniteZGModule{std::move(lat), std::move(h)};
}

mpz_class module_order(const FiniteZGModule& m) { return hnf_det(m.rel); }

std::vector<mpz_class> finite_invariants(const FiniteZGModule& m) {
    exactla::SmithForm sf = exactla::smith_normal_form(m.rel);
    std::vector<mpz_class> out;
    for (const auto& d : sf.divisors)
        if (d != 1) out.push_back(d);
    return out;
}

std::vector<long> module_primes(const FiniteZGModule& m) {
    return primes::factor_primes(module_order(m));
}

FpGModule reduce_finite(const FiniteZGModule& m, long p) {
    FpGModule free = reduce_lattice(m.lat, p);
    FpMat w = exactla::rref(exactla::reduce_mod(m.rel, p)).rowspace;
    return quotient(free, w).mod;
}

bool same_factor(const CompositionFactor& a, const CompositionFactor& b) {
    if (a.p != b.p || a.simple.dim != b.simple.dim) return false;
    check_same_group(a.simple.g, b.simple.g);
    return hom_dim(a.simple, b.simple) > 0;
}

namespace {

struct SeriesStep {
    IntMat basis;             // r x r, rows span the current term in ambient coords
    std::vector<IntMat> act;  // action on the current term, basis coordinates
    IntMat rel_local;         // relations in basis coordinates
    mpz_class order;
};

SeriesStep series_step(const FiniteZGModule& m, const IntMat& basis) {
    SeriesStep s;
    s.basis = basis;
    exactla::SmithForm sf = exactla::smith_normal_form(basis);
    for (const auto& a : m.lat.gen_action) {
        IntMat c(basis.rows, basis.rows);
        for (int i = 0; i < basis.rows; ++i) {
            auto sol = sf.solve(exactla::int_vec_mul(basis.a[i], a));
            if (!sol) throw invariant_error("series term is not action-closed");
            c.a[i] = *sol;
        }
        s.act.push_back(std::move(c));
    }
    IntMat rl(m.rel.rows, basis.rows);
    for (int i = 0; i < m.rel.rows; ++i) {
        auto sol = sf.solve(m.rel.a[i]);
        if (!sol) throw invariant_error("relations escaped the series term");
        rl.a[i] = *sol;
    }
    s.rel_local = exactla::hnf(rl);
    s.order = abs(hnf_det(s.rel_local));
    return s;
}

// One step: peel a maximal submodule whose quotient is the requested simple
// (or the first available one when target == nullptr).
std::pair<IntMat, CompositionFactor> peel_factor(const FiniteZGModule& m, const SeriesStep& s,
                                                 long p, const FpGModule* target) {
    int r = s.basis.rows;
    std::vector<FpMat> acts;
    for (const auto& a : s.act) acts.push_back(exactla::reduce_mod(a, p));
    FpGModule cover{m.lat.g, p, r, std::move(acts)};
    FpMat w = exactla::rref(exactla::reduce_mod(s.rel_local, p)).rowspace;
    Quotient modp = quotient(cover, w);
    if (modp.mod.dim == 0) throw invariant_error("requested prime does not divide the order");

    const FpGModule* simple = target;
    if (!simple) {
        for (const auto& cand : algebra_simples(m.lat.g, p))
            if (!hom_space(modp.mod, cand.mod).empty()) { simple = &cand.mod; break; }
        if (!simple) throw invariant_error("no simple quotient found");
    }
    auto homs = hom_space(modp.mod, *simple);
    if (homs.empty()) throw invariant_error("factor is not available on top at this step");
    FpMat kernel = right_kernel(homs[0]);

    // pull back to the free cover and lift to integer rows
    FpMat sub = exactla::rref(fp_stack(exactla::fp_mul(kernel, modp.lift), w)).rowspace;
    IntMat next = exactla::hnf(exactla::stack_rows(
        exactla::stack_rows(lift_rows(sub), int_identity_times(p, r)), s.rel_local));
    mpz_class want;
    mpz_ui_pow_ui(want.get_mpz_t(), (unsigned long)p, (unsigned long)simple->dim);
    if (hnf_det(next) != want) throw invariant_error("factor size mismatch in the series");

    CompositionFactor f{p, *simple};
    return {exactla::hnf(exactla::int_mul(next, s.basis)), std::move(f)};
}

void check_series_hypothesis(const FiniteZGModule& m) {
    for (long q : module_primes(m))
        if (m.lat.g->order % q == 0)
            throw hypothesis_error("module order shares the prime " + std::to_string(q) +
                                   " with the group order");
}

} // namespace

CompositionSeries composition_series(const FiniteZGModule& m) {
    check_series_hypothesis(m);
    CompositionSeries out;
    IntMat basis = IntMat::identity(m.lat.rank);
    out.chain.push_back(basis);
    for (;;) {
        SeriesStep s = series_step(m, basis);
        if (s.order == 1) {
            if (!(exactla::hnf(basis) == m.rel))
                throw invariant_error("series did not terminate at the relation lattice");
            return out;
        }
        long p = primes::factor_primes(s.order).front();
        auto [next, factor] = peel_factor(m, s, p, nullptr);
        out.chain.push_back(next);
        out.factors.push_back(std::move(factor));
        basis = std::move(next);
    }
}

CompositionSeries reorder_series(const FiniteZGModule& m,
                                 const std::vector<CompositionFactor>& target) {
    CompositionSeries base = composition_series(m);
    std::vector<bool> used(base.factors.size(), false);
    for (const auto& t : target) {
        bool matched = false;
        for (size_t i = 0; i < base.factors.size() && !matched; ++i)
            if (!used[i] && same_factor(base.factors[i], t)) {
                used[i] = true;
                matched = true;
            }
        if (!matched) throw gg_error("target is not a permutation of the composition factors");
    }
    for (bool u : used)
        if (!u) throw gg_error("target is not a permutation of the composition factors");

    CompositionSeries out;
    IntMat basis = IntMat::identity(m.lat.rank);
    out.chain.push_back(basis);
    for (const auto& t : target) {
        SeriesStep s = series_step(m, basis);
        auto [next, factor] = peel_factor(m, s, t.p, &t.simple);
        out.chain.push_back(next);
        out.factors.push_back(std::move(factor));
        basis = std::move(next);
    }
    SeriesStep tail = series_step(m, basis);
    if (tail.order != 1 || !(exactla::hnf(basis) == m.rel))
        throw invariant_error("reordered series did not exhaust the module");
    return out;
}

} // namespace gengap::gmodule
