#include "gengap/exactla.hpp"

#include <algorithm>
#include <cstdlib>

namespace gengap::exactla {

namespace {
int cmp_abs(const mpz_class& a, const mpz_class& b) {
    return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
}
} // namespace

FpMat::FpMat(long p_, int rows_, int cols_) : p(p_), rows(rows_), cols(cols_) {
    check_prime_modulus(p);
    a.assign(rows, std::vector<long>(cols, 0));
}

IntMat::IntMat(int rows_, int cols_) : rows(rows_), cols(cols_) {
    a.assign(rows, Zvec(cols, 0));
}

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.a[i][i] = 1;
    return m;
}

void check_prime_modulus(long p) {
    if (p < 2) throw gg_error("invalid modulus " + std::to_string(p) + ": need a prime >= 2");
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0)
            throw gg_error("invalid modulus " + std::to_string(p) + ": not prime");
}

long inv_mod(long x, long p) {
    // extended Euclid; x assumed nonzero mod p
    long a = x % p, b = p, u = 1, v = 0;
    if (a < 0) a += p;
    if (a == 0) throw gg_error("division by zero mod " + std::to_string(p));
    while (b) {
        long q = a / b;
        a -= q * b; std::swap(a, b);
        u -= q * v; std::swap(u, v);
    }
    if (a != 1) throw invariant_error("inv_mod: modulus not prime");
    return ((u % p) + p) % p;
}

FpMat fp_identity(long p, int n) {
    FpMat m(p, n, n);
    for (int i = 0; i < n; ++i) m.a[i][i] = 1;
    return m;
}

FpMat fp_mul(const FpMat& x, const FpMat& y) {
    if (x.p != y.p) throw gg_error("fp_mul: mixed moduli");
    if (x.cols != y.rows) throw gg_error("fp_mul: shape mismatch");
    FpMat r(x.p, x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            long c = x.a[i][k];
            if (!c) continue;
            for (int j = 0; j < y.cols; ++j)
                r.a[i][j] = (r.a[i][j] + c * y.a[k][j]) % x.p;
        }
    return r;
}

FpMat fp_transpose(const FpMat& m) {
    FpMat r(m.p, m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.a[j][i] = m.a[i][j];
    return r;
}

std::vector<long> fp_vec_mul(const std::vector<long>& v, const FpMat& m) {
    if ((int)v.size() != m.rows) throw gg_error("fp_vec_mul: shape mismatch");
    std::vector<long> r(m.cols, 0);
    for (int i = 0; i < m.rows; ++i) {
        long c = v[i] % m.p;
        if (!c) continue;
        for (int j = 0; j < m.cols; ++j) r[j] = (r[j] + c * m.a[i][j]) % m.p;
    }
    return r;
}

FpMat reduce_mod(const IntMat& m, long p) {
    FpMat r(p, m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) {
            mpz_class v = m.a[i][j] % p;
            if (v < 0) v += p;
            r.a[i][j] = v.get_si();
        }
    return r;
}

std::vector<long> reduce_vec_mod(const Zvec& v, long p) {
    std::vector<long> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        mpz_class x = v[i] % p;
        if (x < 0) x += p;
        r[i] = x.get_si();
    }
    return r;
}

Rref rref(const FpMat& m) {
    check_prime_modulus(m.p);
    FpMat w = m;
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < w.cols && r < w.rows; ++c) {
        int pr = -1;
        for (int i = r; i < w.rows; ++i)
            if (w.a[i][c]) { pr = i; break; }
        if (pr < 0) continue;
        std::swap(w.a[r], w.a[pr]);
        long inv = inv_mod(w.a[r][c], w.p);
        for (int j = 0; j < w.cols; ++j) w.a[r][j] = (w.a[r][j] * inv) % w.p;
        for (int i = 0; i < w.rows; ++i) {
            if (i == r || !w.a[i][c]) continue;
            long f = w.a[i][c];
            for (int j = 0; j < w.cols; ++j)
                w.a[i][j] = ((w.a[i][j] - f * w.a[r][j]) % w.p + w.p) % w.p;
        }
        pivots.push_back(c);
        ++r;
    }
    Rref out;
    out.rank = r;
    out.pivot_cols = pivots;
    out.rowspace = FpMat(m.p, r, m.cols);
    for (int i = 0; i < r; ++i) out.rowspace.a[i] = w.a[i];
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : pivots) is_pivot[c] = true;
    out.kernel = FpMat(m.p, m.cols - r, m.cols);
    int k = 0;
    for (int f = 0; f < m.cols; ++f) {
        if (is_pivot[f]) continue;
        out.kernel.a[k][f] = 1;
        for (int i = 0; i < r; ++i)
            out.kernel.a[k][pivots[i]] = (m.p - w.a[i][f]) % m.p;
        ++k;
    }
    return out;
}

std::optional<std::vector<long>> solve_mod_p(const FpMat& A, const std::vector<long>& b) {
    if ((int)b.size() != A.cols) throw gg_error("solve_mod_p: shape mismatch");
    // x*A = b  <=>  A^T x^T = b^T; eliminate on [A^T | b^T]
    FpMat w = fp_transpose(A);
    std::vector<long> rhs(b);
    for (auto& v : rhs) v = ((v % A.p) + A.p) % A.p;
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < w.cols && r < w.rows; ++c) {
        int pr = -1;
        for (int i = r; i < w.rows; ++i)
            if (w.a[i][c]) { pr = i; break; }
        if (pr < 0) continue;
        std::swap(w.a[r], w.a[pr]);
        std::swap(rhs[r], rhs[pr]);
        long inv = inv_mod(w.a[r][c], w.p);
        for (int j = 0; j < w.cols; ++j) w.a[r][j] = (w.a[r][j] * inv) % w.p;
        rhs[r] = (rhs[r] * inv) % w.p;
        for (int i = 0; i < w.rows; ++i) {
            if (i == r || !w.a[i][c]) continue;
            long f = w.a[i][c];
            for (int j = 0; j < w.cols; ++j)
                w.a[i][j] = ((w.a[i][j] - f * w.a[r][j]) % w.p + w.p) % w.p;
            rhs[i] = ((rhs[i] - f * rhs[r]) % w.p + w.p) % w.p;
        }
        pivots.push_back(c);
        ++r;
    }
    for (int i = r; i < w.rows; ++i)
        if (rhs[i]) return std::nullopt;
    std::vector<long> x(A.rows, 0);
    for (int i = 0; i < r; ++i) x[pivots[i]] = rhs[i];
    return x;
}

IntMat int_mul(const IntMat& x, const IntMat& y) {
    if (x.cols != y.rows) throw gg_error("int_mul: shape mismatch");
    IntMat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            if (x.a[i][k] == 0) continue;
            for (int j = 0; j < y.cols; ++j)
                r.a[i][j] += x.a[i][k] * y.a[k][j];
        }
    return r;
}

IntMat int_transpose(const IntMat& m) {
    IntMat r(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.a[j][i] = m.a[i][j];
    return r;
}

Zvec int_vec_mul(const Zvec& v, const IntMat& m) {
    if ((int)v.size() != m.rows) throw gg_error("int_vec_mul: shape mismatch");
    Zvec r(m.cols, 0);
    for (int i = 0; i < m.rows; ++i) {
        if (v[i] == 0) continue;
        for (int j = 0; j < m.cols; ++j) r[j] += v[i] * m.a[i][j];
    }
    return r;
}

IntMat stack_rows(const IntMat& top, const IntMat& bottom) {
    if (top.rows == 0) return bottom;
    if (bottom.rows == 0) return top;
    if (top.cols != bottom.cols) throw gg_error("stack_rows: shape mismatch");
    IntMat r(top.rows + bottom.rows, top.cols);
    for (int i = 0; i < top.rows; ++i) r.a[i] = top.a[i];
    for (int i = 0; i < bottom.rows; ++i) r.a[top.rows + i] = bottom.a[i];
    return r;
}

mpz_class det(const IntMat& m) {
    if (m.rows != m.cols) throw gg_error("det: matrix not square");
    int n = m.rows;
    if (n == 0) return 1;
    IntMat w = m;
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (w.a[k][k] == 0) {
            int pr = -1;
            for (int i = k + 1; i < n; ++i)
                if (w.a[i][k] != 0) { pr = i; break; }
            if (pr < 0) return 0;
            std::swap(w.a[k], w.a[pr]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                mpz_class t = w.a[i][j] * w.a[k][k] - w.a[i][k] * w.a[k][j];
                mpz_divexact(w.a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = w.a[k][k];
    }
    return sign * w.a[n - 1][n - 1];
}

namespace {

void row_axpy(IntMat& m, int dst, int src, const mpz_class& q) {
    for (int j = 0; j < m.cols; ++j) m.a[dst][j] -= q * m.a[src][j];
}

void col_axpy(IntMat& m, int dst, int src, const mpz_class& q) {
    for (int i = 0; i < m.rows; ++i) m.a[i][dst] -= q * m.a[i][src];
}

void swap_cols(IntMat& m, int x, int y) {
    if (x == y) return;
    for (int i = 0; i < m.rows; ++i) std::swap(m.a[i][x], m.a[i][y]);
}

} // namespace

SmithForm smith_normal_form(const IntMat& A) {
    SmithForm s;
    s.D = A;
    s.U = IntMat::identity(A.rows);
    s.V = IntMat::identity(A.cols);
    IntMat& D = s.D;
    int n = std::min(A.rows, A.cols);
    for (int t = 0; t < n; ++t) {
        for (;;) {
            // smallest nonzero |entry| in the trailing block becomes the pivot
            int bi = -1, bj = -1;
            for (int i = t; i < D.rows; ++i)
                for (int j = t; j < D.cols; ++j)
                    if (D.a[i][j] != 0 &&
                        (bi < 0 || cmp_abs(D.a[i][j], D.a[bi][bj]) < 0)) {
                        bi = i; bj = j;
                    }
            if (bi < 0) { t = n; break; }
            std::swap(D.a[t], D.a[bi]);
            std::swap(s.U.a[t], s.U.a[bi]);
            swap_cols(D, t, bj);
            swap_cols(s.V, t, bj);

            bool clean = true;
            for (int i = t + 1; i < D.rows; ++i) {
                if (D.a[i][t] == 0) continue;
                mpz_class q = D.a[i][t] / D.a[t][t];
                if (q != 0) { row_axpy(D, i, t, q); row_axpy(s.U, i, t, q); }
                if (D.a[i][t] != 0) clean = false;
            }
            for (int j = t + 1; j < D.cols; ++j) {
                if (D.a[t][j] == 0) continue;
                mpz_class q = D.a[t][j] / D.a[t][t];
                if (q != 0) { col_axpy(D, j, t, q); col_axpy(s.V, j, t, q); }
                if (D.a[t][j] != 0) clean = false;
            }
            if (!clean) continue;

            // pivot must divide the whole trailing block for the divisor chain
            bool divides = true;
            for (int i = t + 1; i < D.rows && divides; ++i)
                for (int j = t + 1; j < D.cols && divides; ++j)
                    if (D.a[i][j] % D.a[t][t] != 0) {
                        row_axpy(D, t, i, -1);
                        row_axpy(s.U, t, i, -1);
                        divides = false;
                    }
            if (divides) break;
        }
        if (t >= n) break;
    }
    for (int t = 0; t < n; ++t)
        if (D.a[t][t] < 0) {
            for (int j = 0; j < D.cols; ++j) D.a[t][j] = -D.a[t][j];
            for (int j = 0; j < s.U.cols; ++j) s.U.a[t][j] = -s.U.a[t][j];
        }
    for (int t = 0; t < n; ++t)
        if (D.a[t][t] != 0) s.divisors.push_back(D.a[t][t]);
    return s;
}

std::optional<Zvec> SmithForm::solve(const Zvec& b) const {
    // x*A = b with U*A*V = D: y*D = b*V, x = y*U
    if ((int)b.size() != V.rows) throw gg_error("smith solve: shape mismatch");
    Zvec bv = int_vec_mul(b, V);
    int m = U.rows, n = V.rows;
    Zvec y(m, 0);
    int nz = std::min(m, n);
    for (int j = 0; j < n; ++j) {
        mpz_class d = (j < nz) ? D.a[j][j] : mpz_class(0);
        if (d == 0) {
            if (bv[j] != 0) return std::nullopt;
        } else {
            if (bv[j] % d != 0) return std::nullopt;
            y[j] = bv[j] / d;
        }
    }
    return int_vec_mul(y, U);
}

IntMat hnf(const IntMat& m) {
    IntMat w = m;
    int r = 0;
    for (int c = 0; c < w.cols && r < w.rows; ++c) {
        // Euclid on rows r.. in column c
        for (;;) {
            int best = -1;
            for (int i = r; i < w.rows; ++i)
                if (w.a[i][c] != 0 && (best < 0 || cmp_abs(w.a[i][c], w.a[best][c]) < 0))
                    best = i;
            if (best < 0) break;
            std::swap(w.a[r], w.a[best]);
            bool done = true;
            for (int i = r + 1; i < w.rows; ++i) {
                if (w.a[i][c] == 0) continue;
                mpz_class q = w.a[i][c] / w.a[r][c];
                if (q != 0) row_axpy(w, i, r, q);
                if (w.a[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (w.a[r][c] == 0) continue;
        if (w.a[r][c] < 0)
            for (int j = 0; j < w.cols; ++j) w.a[r][j] = -w.a[r][j];
        for (int i = 0; i < r; ++i) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), w.a[i][c].get_mpz_t(), w.a[r][c].get_mpz_t());
            if (q != 0) row_axpy(w, i, r, q);
        }
        ++r;
    }
    IntMat out(r, w.cols);
    for (int i = 0; i < r; ++i) out.a[i] = w.a[i];
    return out;
}

HnfTransform hnf_with_transform(const IntMat& m) {
    HnfTransform t{m, IntMat::identity(m.rows)};
    IntMat& h = t.h;
    IntMat& w = t.w;
    int r = 0;
    for (int c = 0; c < h.cols && r < h.rows; ++c) {
        for (;;) {
            int best = -1;
            for (int i = r; i < h.rows; ++i)
                if (h.a[i][c] != 0 && (best < 0 || cmp_abs(h.a[i][c], h.a[best][c]) < 0))
                    best = i;
            if (best < 0) break;
            std::swap(h.a[r], h.a[best]);
            std::swap(w.a[r], w.a[best]);
            bool done = true;
            for (int i = r + 1; i < h.rows; ++i) {
                if (h.a[i][c] == 0) continue;
                mpz_class q = h.a[i][c] / h.a[r][c];
                if (q != 0) { row_axpy(h, i, r, q); row_axpy(w, i, r, q); }
                if (h.a[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (h.a[r][c] == 0) continue;
        if (h.a[r][c] < 0) {
            for (int j = 0; j < h.cols; ++j) h.a[r][j] = -h.a[r][j];
            for (int j = 0; j < w.cols; ++j) w.a[r][j] = -w.a[r][j];
        }
        for (int i = 0; i < r; ++i) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), h.a[i][c].get_mpz_t(), h.a[r][c].get_mpz_t());
            if (q != 0) { row_axpy(h, i, r, q); row_axpy(w, i, r, q); }
        }
        ++r;
    }
    return t;
}

IntMat unimodular_inverse(const IntMat& m) {
    if (m.rows != m.cols) throw gg_error("unimodular_inverse: matrix not square");
    HnfTransform t = hnf_with_transform(m);
    if (t.h != IntMat::identity(m.rows))
        throw gg_error("unimodular_inverse: determinant is not a unit");
    return t.w;
}

IntMat integer_kernel(const IntMat& A) {
    SmithForm s = smith_normal_form(A);
    int n = std::min(A.rows, A.cols);
    std::vector<int> free_rows;
    for (int i = 0; i < A.rows; ++i)
        if (i >= n || s.D.a[i][i] == 0) free_rows.push_back(i);
    IntMat k((int)free_rows.size(), A.rows);
    for (size_t i = 0; i < free_rows.size(); ++i) k.a[i] = s.U.a[free_rows[i]];
    return hnf(k);
}

bool in_row_lattice(const IntMat& m, const Zvec& b) {
    return smith_normal_form(m).solve(b).has_value();
}

} // namespace gengap::exactla
