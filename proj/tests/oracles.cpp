#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace testutil {

using gengap::exactla::IntMat;

namespace {

// naive cofactor expansion, so the oracle shares nothing with the library
mpz_class cofactor_det(const IntMat& m) {
    int n = m.rows;
    if (n == 0) return 1;
    if (n == 1) return m.a[0][0];
    mpz_class acc = 0;
    for (int j = 0; j < n; ++j) {
        if (m.a[0][j] == 0) continue;
        IntMat sub(n - 1, n - 1);
        for (int i = 1; i < n; ++i) {
            int cc = 0;
            for (int c = 0; c < n; ++c)
                if (c != j) sub.a[i - 1][cc++] = m.a[i][c];
        }
        mpz_class t = m.a[0][j] * cofactor_det(sub);
        acc += (j % 2 == 0) ? t : -t;
    }
    return acc;
}

void combos(int n, int k, int start, std::vector<int>& cur,
            const std::function<void(const std::vector<int>&)>& f) {
    if ((int)cur.size() == k) { f(cur); return; }
    for (int i = start; i <= n - (k - (int)cur.size()); ++i) {
        cur.push_back(i);
        combos(n, k, i + 1, cur, f);
        cur.pop_back();
    }
}

} // namespace

std::vector<mpz_class> invariant_factors_by_minors(const IntMat& m) {
    int n = std::min(m.rows, m.cols);
    std::vector<mpz_class> dk;  // gcd of k x k minors
    for (int k = 1; k <= n; ++k) {
        mpz_class g = 0;
        std::vector<int> cur;
        combos(m.rows, k, 0, cur, [&](const std::vector<int>& ri) {
            std::vector<int> cur2;
            combos(m.cols, k, 0, cur2, [&](const std::vector<int>& ci) {
                IntMat sub(k, k);
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j) sub.a[i][j] = m.a[ri[i]][ci[j]];
                mpz_class d = cofactor_det(sub);
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
            });
        });
        if (g == 0) break;  // all k x k minors vanish; rank < k
        dk.push_back(g);
    }
    std::vector<mpz_class> out;
    mpz_class prev = 1;
    for (auto& d : dk) {
        out.push_back(d / prev);
        prev = d;
    }
    return out;
}

gengap::groups::FiniteGroup s3() {
    // permutation composition table computed from the cycle forms below
    auto perm_mul = [](std::array<int, 3> f, std::array<int, 3> g) {
        // apply f then g
        return std::array<int, 3>{g[f[0]], g[f[1]], g[f[2]]};
    };
    std::vector<std::array<int, 3>> elts = {
        {0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1},
    };
    std::vector<std::vector<int>> mul(6, std::vector<int>(6));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            auto prod = perm_mul(elts[i], elts[j]);
            mul[i][j] = (int)(std::find(elts.begin(), elts.end(), prod) - elts.begin());
        }
    return gengap::groups::make_group(mul, {1, 4}, {"s", "r"});
}

} // namespace testutil
