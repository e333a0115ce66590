#include "gengap/induced.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <tuple>

#include "gengap/error.hpp"

namespace gengap::induced {

using exactla::FpMat;
using exactla::IntMat;
using exactla::Zvec;
using groups::FactorSpec;

namespace {

void add_coef(InducedElement& v, const BasisKey& k, const mpz_class& c) {
    if (c == 0) return;
    auto it = v.coef.find(k);
    if (it == v.coef.end()) {
        v.coef.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second == 0) v.coef.erase(it);
}

// sparse factor-internal action: entries ((row, cpow), coeff)
using SparseRow = std::vector<std::pair<std::pair<int, long>, mpz_class>>;

// coordinates of a relation-module element over the rows xi, eta*a^1, ...,
// eta*a^(n-1) per Laurent degree, via the canonical membership witness
SparseRow sbar_coords(const gring::RelationContext& rc, const gring::FoxPair& s) {
    auto wit = gring::rc_solve_membership(rc, s);
    if (!wit) throw invariant_error("element left the relation module");
    SparseRow out;
    for (const auto& [cp, vec] : wit->u.coef)
        if (vec[rc.g->e] != 0) out.push_back({{0, cp}, vec[rc.g->e]});
    for (const auto& [cp, vec] : wit->w.coef)
        for (long j = 1; j < rc.n; ++j)
            if (vec[j] != 0) out.push_back({{(int)j, cp}, vec[j]});
    return out;
}

gring::FoxPair sbar_basis(const gring::RelationContext& rc, int row) {
    if (row == 0) return gring::rc_xi(rc);
    return gring::rc_eta(rc, 1) * gring::lg_monomial(rc.g, rc.g->power(1, row), 0);
}

// basis(row, 0) * (elt, c^0) in sbar coordinates, cached per (n, row, elt)
const SparseRow& sbar_act_cached(const gring::RelationContext& rc, int row, int elt) {
    static std::map<std::tuple<long, int, int>, SparseRow> cache;
    auto key = std::make_tuple(rc.n, row, elt);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    gring::FoxPair moved = sbar_basis(rc, row) * gring::lg_monomial(rc.g, elt, 0);
    return cache.emplace(key, sbar_coords(rc, moved)).first->second;
}

// right action of (elt, c^k) on basis row (row, cpow) of factor slot f;
// Laurent degrees are returned unreduced for the caller to window or wrap
SparseRow slot_act(const FactorSlot& fac, int row, long cpow, int elt, long k) {
    SparseRow out;
    switch (fac.rep) {
        case FactorSlot::Rep::Lattice: {
            if (k != 0 || cpow != 0)
                throw invariant_error("finite factor saw a Laurent degree");
            const IntMat& t = fac.tables[elt];
            for (int j = 0; j < t.cols; ++j)
                if (t.at(row, j) != 0) out.push_back({{j, 0}, t.at(row, j)});
            break;
        }
        case FactorSlot::Rep::RelationLaurent: {
            for (const auto& [rc2, c] : sbar_act_cached(*fac.rc, row, elt))
                out.push_back({{rc2.first, rc2.second + cpow + k}, c});
            break;
        }
        case FactorSlot::Rep::AugLaurent: {
            // (g c^j - 1)(g' c^k) = (g g' c^(j+k) - 1) - (g' c^k - 1)
            int prod = fac.g->mul[row][elt];
            if (!(prod == fac.g->e && cpow + k == 0))
                out.push_back({{prod, cpow + k}, 1});
            if (!(elt == fac.g->e && k == 0)) out.push_back({{elt, k}, -1});
            break;
        }
    }
    return out;
}

void check_factor_index(const InducedSpace& sp, int f) {
    if (f < 0 || f >= (int)sp.fac.size())
        throw gg_error("factor index " + std::to_string(f) + " is out of range");
}

std::string row_desc(const FactorSlot& fac, int row, long cpow) {
    std::ostringstream os;
    switch (fac.rep) {
        case FactorSlot::Rep::Lattice:
            os << "e" << row;
            break;
        case FactorSlot::Rep::RelationLaurent:
            if (row == 0)
                os << "xi";
            else if (row == 1)
                os << "eta";
            else
                os << "eta*a^" << row;
            if (cpow != 0) os << "*c^" << cpow;
            return os.str();
        case FactorSlot::Rep::AugLaurent: {
            std::string nm = groups::element_name(*fac.g, row);
            os << "(";
            if (nm != "1") os << nm;
            if (cpow != 0) {
                if (nm != "1") os << "*";
                os << "c^" << cpow;
            }
            if (nm == "1" && cpow == 0) os << "1";
            os << "-1)";
            return os.str();
        }
    }
    if (cpow != 0) os << "*c^" << cpow;
    return os.str();
}

} // namespace

InducedElement ie_zero() { return {}; }

bool ie_is_zero(const InducedElement& v) { return v.coef.empty(); }

InducedElement operator+(const InducedElement& a, const InducedElement& b) {
    InducedElement out = a;
    for (const auto& [k, c] : b.coef) add_coef(out, k, c);
    return out;
}

InducedElement operator-(const InducedElement& a, const InducedElement& b) {
    InducedElement out = a;
    for (const auto& [k, c] : b.coef) add_coef(out, k, -c);
    return out;
}

InducedElement operator*(const mpz_class& k, const InducedElement& a) {
    InducedElement out;
    if (k == 0) return out;
    for (const auto& [key, c] : a.coef) out.coef.emplace(key, k * c);
    return out;
}

bool operator==(const InducedElement& a, const InducedElement& b) {
    return a.coef == b.coef;
}

InducedElement ie_reduce_mod(const InducedElement& v, const mpz_class& m) {
    if (m <= 0) throw gg_error("reduction needs a positive modulus");
    InducedElement out;
    for (const auto& [k, c] : v.coef) {
        mpz_class r = c % m;
        if (r < 0) r += m;
        if (r != 0) out.coef.emplace(k, r);
    }
    return out;
}

InducedSpace make_induced_space(const formulas::FreeProductProblem& pr, long window) {
    if (window < 1) throw gg_error("the Laurent window must be at least 1");
    std::vector<formulas::FactorModule> fms = formulas::realize_factors(pr);
    InducedSpace sp;
    sp.problem = pr;
    sp.window = window;
    for (const auto& fm : fms) {
        FactorSlot slot;
        slot.spec = fm.spec;
        slot.g = fm.g;
        switch (fm.spec.kind) {
            case FactorSpec::Kind::Finite:
                slot.rep = FactorSlot::Rep::Lattice;
                slot.lat = fm.lat;
                break;
            case FactorSpec::Kind::FiniteCyclicTimesZ:
                if (pr.kind == formulas::ModuleKind::Relation) {
                    slot.rep = FactorSlot::Rep::RelationLaurent;
                    slot.rc = gring::make_relation_context(fm.spec.cyclic_order);
                    slot.g = slot.rc->g;
                } else {
                    slot.rep = FactorSlot::Rep::AugLaurent;
                }
                break;
            case FactorSpec::Kind::NilpotentProduct:
                if (fm.free_rank == 0) {
                    slot.rep = FactorSlot::Rep::Lattice;
                    slot.lat = fm.lat;
                } else if (fm.free_rank == 1) {
                    slot.rep = FactorSlot::Rep::AugLaurent;
                } else {
                    throw gg_error("factor '" + fm.spec.label +
                                   "': more than one free direction is not "
                                   "supported by the induced engine");
                }
                break;
        }
        switch (slot.rep) {
            case FactorSlot::Rep::Lattice:
                slot.tables = gmodule::lattice_element_table(*slot.lat);
                slot.rows = slot.lat->rank;
                break;
            case FactorSlot::Rep::RelationLaurent:
                slot.rows = (int)slot.rc->n;
                break;
            case FactorSlot::Rep::AugLaurent:
                slot.rows = slot.g->order;
                break;
        }
        sp.fac.push_back(std::move(slot));
    }
    return sp;
}

InducedElement basis_element(const InducedSpace& sp, int factor, int row, long cpow) {
    check_factor_index(sp, factor);
    const FactorSlot& fac = sp.fac[factor];
    if (row < 0 || row >= fac.rows)
        throw gg_error("row " + std::to_string(row) + " is out of range for factor '" +
                       fac.spec.label + "'");
    if (std::abs(cpow) > sp.window) throw gg_error("Laurent degree outside the window");
    if (fac.rep == FactorSlot::Rep::Lattice && cpow != 0)
        throw gg_error("finite factors have no Laurent degrees");
    if (fac.rep == FactorSlot::Rep::AugLaurent && row == fac.g->e && cpow == 0)
        throw gg_error("the identity row of an augmentation ideal is zero");
    InducedElement out;
    out.coef.emplace(BasisKey{factor, row, cpow, {}}, 1);
    return out;
}

InducedElement from_factor_row(const InducedSpace& sp, int factor,
                               const std::vector<mpz_class>& row) {
    check_factor_index(sp, factor);
    const FactorSlot& fac = sp.fac[factor];
    if ((int)row.size() != fac.rows)
        throw gg_error("coordinate vector length does not match the factor");
    InducedElement out;
    for (int r = 0; r < fac.rows; ++r) {
        if (row[r] == 0) continue;
        if (fac.rep == FactorSlot::Rep::AugLaurent && r == fac.g->e)
            throw gg_error("the identity row of an augmentation ideal is zero");
        out.coef.emplace(BasisKey{factor, r, 0, {}}, row[r]);
    }
    return out;
}

InducedElement from_relation_element(const InducedSpace& sp, int factor,
                                     const gring::FoxPair& s) {
    check_factor_index(sp, factor);
    const FactorSlot& fac = sp.fac[factor];
    if (fac.rep != FactorSlot::Rep::RelationLaurent)
        throw gg_error("factor '" + fac.spec.label + "' is not a relation factor");
    InducedElement out;
    for (const auto& [rc2, c] : sbar_coords(*fac.rc, s)) {
        if (std::abs(rc2.second) > sp.window)
            throw gg_error("relation element leaves the Laurent window");
        add_coef(out, BasisKey{factor, rc2.first, rc2.second, {}}, c);
    }
    return out;
}

std::vector<InducedElement> factor_targets(const InducedSpace& sp, int f) {
    check_factor_index(sp, f);
    const FactorSlot& fac = sp.fac[f];
    std::vector<InducedElement> out;
    switch (fac.rep) {
        case FactorSlot::Rep::Lattice:
            for (int r = 0; r < fac.rows; ++r) out.push_back(basis_element(sp, f, r, 0));
            break;
        case FactorSlot::Rep::RelationLaurent: {
            out.push_back(basis_element(sp, f, 0, 0));  // xi
            InducedElement eta;
            for (const auto& [rc2, c] : sbar_coords(*fac.rc, gring::rc_eta(*fac.rc, 1)))
                add_coef(eta, BasisKey{f, rc2.first, rc2.second, {}}, c);
            out.push_back(std::move(eta));
            break;
        }
        case FactorSlot::Rep::AugLaurent:
            for (int x : fac.g->gens) out.push_back(basis_element(sp, f, x, 0));
            out.push_back(basis_element(sp, f, fac.g->e, 1));  // c - 1
            break;
    }
    return out;
}

std::vector<Target> all_targets(const InducedSpace& sp) {
    std::vector<Target> out;
    for (int f = 0; f < (int)sp.fac.size(); ++f) {
        const FactorSlot& fac = sp.fac[f];
        std::vector<InducedElement> ts = factor_targets(sp, f);
        std::vector<std::string> names;
        switch (fac.rep) {
            case FactorSlot::Rep::Lattice:
                for (int r = 0; r < fac.rows; ++r)
                    names.push_back(fac.spec.label + ":e" + std::to_string(r));
                break;
            case FactorSlot::Rep::RelationLaurent:
                names = {fac.spec.label + ":xi", fac.spec.label + ":eta"};
                break;
            case FactorSlot::Rep::AugLaurent:
                for (int x : fac.g->gens)
                    names.push_back(fac.spec.label + ":" +
                                    groups::element_name(*fac.g, x) + "-1");
                names.push_back(fac.spec.label + ":c-1");
                break;
        }
        for (size_t i = 0; i < ts.size(); ++i)
            out.push_back({names[i], std::move(ts[i])});
    }
    return out;
}

std::vector<Syllable> factor_alphabet(const InducedSpace& sp, int f, long cstep) {
    check_factor_index(sp, f);
    const FactorSlot& fac = sp.fac[f];
    long cap = std::min(cstep, sp.window);
    std::vector<Syllable> out;
    if (fac.rep == FactorSlot::Rep::Lattice) {
        for (int x = 0; x < fac.g->order; ++x)
            if (x != fac.g->e) out.push_back({f, x, 0});
        return out;
    }
    for (int x = 0; x < fac.g->order; ++x)
        for (long k = -cap; k <= cap; ++k)
            if (!(x == fac.g->e && k == 0)) out.push_back({f, x, k});
    return out;
}

std::vector<Syllable> alphabet(const InducedSpace& sp, long cstep) {
    std::vector<Syllable> out;
    for (int f = 0; f < (int)sp.fac.size(); ++f)
        for (const Syllable& s : factor_alphabet(sp, f, cstep)) out.push_back(s);
    return out;
}

std::optional<InducedElement> act(const InducedSpace& sp, const InducedElement& v,
                                  const Syllable& s) {
    check_factor_index(sp, s.factor);
    const FactorSlot& sfac = sp.fac[s.factor];
    if (s.elt < 0 || s.elt >= sfac.g->order) throw gg_error("syllable element out of range");
    if (sfac.rep == FactorSlot::Rep::Lattice && s.cpow != 0)
        throw gg_error("finite factors have no Laurent degrees");
    if (std::abs(s.cpow) > sp.window) return std::nullopt;
    if (s.elt == sfac.g->e && s.cpow == 0) return v;

    InducedElement out;
    for (const auto& [key, c] : v.coef) {
        if (key.word.empty() && key.factor == s.factor) {
            // internal action on the component module
            for (const auto& [rc2, co] : slot_act(sfac, key.row, key.cpow, s.elt, s.cpow)) {
                if (std::abs(rc2.second) > sp.window) return std::nullopt;
                add_coef(out, BasisKey{key.factor, rc2.first, rc2.second, {}}, c * co);
            }
            continue;
        }
        if (!key.word.empty() && key.word.back().factor == s.factor) {
            Syllable last = key.word.back();
            int melt = sfac.g->mul[last.elt][s.elt];
            long mc = last.cpow + s.cpow;
            CosetWord w(key.word.begin(), key.word.end() - 1);
            if (!(melt == sfac.g->e && mc == 0)) {
                if (std::abs(mc) > sp.window) return std::nullopt;
                w.push_back({s.factor, melt, mc});
            }
            BasisKey nk{key.factor, key.row, key.cpow, std::move(w)};
            add_coef(out, nk, c);
            continue;
        }
        BasisKey nk = key;
        nk.word.push_back(s);
        add_coef(out, nk, c);
    }
    return out;
}

std::optional<InducedElement> act_word(const InducedSpace& sp, const InducedElement& v,
                                       const CosetWord& w) {
    InducedElement cur = v;
    for (const Syllable& s : w) {
        auto next = act(sp, cur, s);
        if (!next) return std::nullopt;
        cur = std::move(*next);
    }
    return cur;
}

std::string word_to_string(const InducedSpace& sp, const CosetWord& w) {
    if (w.empty()) return "[]";
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) os << "|";
        const FactorSlot& fac = sp.fac[w[i].factor];
        std::string nm = groups::element_name(*fac.g, w[i].elt);
        os << fac.spec.label << ":";
        if (nm != "1" || w[i].cpow == 0) os << nm;
        if (w[i].cpow != 0) {
            if (nm != "1") os << "*";
            os << "c^" << w[i].cpow;
        }
    }
    os << "]";
    return os.str();
}

std::string ie_to_string(const InducedSpace& sp, const InducedElement& v) {
    if (v.coef.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : v.coef) {
        if (!first) os << " + ";
        first = false;
        const FactorSlot& fac = sp.fac[key.factor];
        if (c != 1) os << c.get_str() << "*";
        os << fac.spec.label << ":" << row_desc(fac, key.row, key.cpow);
        if (!key.word.empty()) os << "(x)" << word_to_string(sp, key.word);
    }
    return os.str();
}

// ---- windowed membership systems ----

namespace {

struct ProductRow {
    int gen = 0;
    CosetWord word;
    InducedElement val;
};

// breadth-first products x_i * w over reduced words, layered by word length
struct ProductEnum {
    std::vector<ProductRow> rows;
    std::vector<int> layer_end;  // rows[0 .. layer_end[d]) have depth <= d
    bool truncated = false;
};

ProductEnum enumerate_products(const InducedSpace& sp,
                               const std::vector<InducedElement>& x, int lmax,
                               long csyll, int product_cap) {
    ProductEnum en;
    for (int i = 0; i < (int)x.size(); ++i) en.rows.push_back({i, {}, x[i]});
    en.layer_end.push_back((int)en.rows.size());
    std::vector<Syllable> letters = alphabet(sp, csyll);
    int lo = 0;
    for (int depth = 1; depth <= lmax; ++depth) {
        int hi = (int)en.rows.size();
        for (int t = lo; t < hi; ++t) {
            for (const Syllable& s : letters) {
                if (!en.rows[t].word.empty() && en.rows[t].word.back().factor == s.factor)
                    continue;  // only reduced extensions: merges live in earlier layers
                if ((int)en.rows.size() >= product_cap) {
                    en.truncated = true;
                    en.layer_end.push_back((int)en.rows.size());
                    return en;
                }
                auto val = act(sp, en.rows[t].val, s);
                if (!val) {
                    en.truncated = true;
                    continue;
                }
                if (ie_is_zero(*val)) continue;
                CosetWord w = en.rows[t].word;
                w.push_back(s);
                en.rows.push_back({en.rows[t].gen, std::move(w), std::move(*val)});
            }
        }
        lo = hi;
        en.layer_end.push_back((int)en.rows.size());
    }
    return en;
}

std::map<BasisKey, int> collect_columns(const ProductEnum& en, const InducedElement& rhs,
                                        int upto) {
    std::map<BasisKey, int> cols;
    for (const auto& [k, c] : rhs.coef) cols.emplace(k, 0);
    for (int t = 0; t < upto; ++t)
        for (const auto& [k, c] : en.rows[t].val.coef) cols.emplace(k, 0);
    int idx = 0;
    for (auto& [k, i] : cols) i = idx++;
    return cols;
}

} // namespace

WindowSolve solve_membership(const InducedSpace& sp, const std::vector<InducedElement>& x,
                             const InducedElement& rhs, int lmax, long csyll,
                             int product_cap) {
    if (x.empty()) throw gg_error("membership needs at least one generator");
    WindowSolve out;
    if (ie_is_zero(rhs)) {
        out.solved = true;
        return out;
    }
    ProductEnum en = enumerate_products(sp, x, lmax, csyll, product_cap);
    out.truncated = en.truncated;
    for (int depth = 0; depth < (int)en.layer_end.size(); ++depth) {
        int upto = en.layer_end[depth];
        if (depth > 0 && upto == en.layer_end[depth - 1]) continue;
        std::map<BasisKey, int> cols = collect_columns(en, rhs, upto);
        IntMat a(upto, (int)cols.size());
        for (int t = 0; t < upto; ++t)
            for (const auto& [k, c] : en.rows[t].val.coef) a.at(t, cols.at(k)) = c;
        Zvec b(cols.size(), 0);
        for (const auto& [k, c] : rhs.coef) b[cols.at(k)] = c;
        auto sol = exactla::smith_normal_form(a).solve(b);
        if (!sol) continue;
        out.solved = true;
        out.depth = depth;
        for (int t = 0; t < upto; ++t)
            if ((*sol)[t] != 0)
                out.combo.push_back({en.rows[t].gen, en.rows[t].word, (*sol)[t]});
        return out;
    }
    return out;
}

WindowSolve solve_membership_mod(const InducedSpace& sp,
                                 const std::vector<InducedElement>& x,
                                 const InducedElement& rhs, long p, int lmax,
                                 long csyll, int product_cap) {
    exactla::check_prime_modulus(p);
    if (x.empty()) throw gg_error("membership needs at least one generator");
    WindowSolve out;
    if (ie_is_zero(ie_reduce_mod(rhs, p))) {
        out.solved = true;
        return out;
    }
    ProductEnum en = enumerate_products(sp, x, lmax, csyll, product_cap);
    out.truncated = en.truncated;
    for (int depth = 0; depth < (int)en.layer_end.size(); ++depth) {
        int upto = en.layer_end[depth];
        if (depth > 0 && upto == en.layer_end[depth - 1]) continue;
        std::map<BasisKey, int> cols = collect_columns(en, rhs, upto);
        FpMat a(p, upto, (int)cols.size());
        for (int t = 0; t < upto; ++t)
            for (const auto& [k, c] : en.rows[t].val.coef) {
                long r = (long)mpz_fdiv_ui(c.get_mpz_t(), (unsigned long)p);
                a.at(t, cols.at(k)) = r;
            }
        std::vector<long> b(cols.size(), 0);
        for (const auto& [k, c] : rhs.coef)
            b[cols.at(k)] = (long)mpz_fdiv_ui(c.get_mpz_t(), (unsigned long)p);
        auto sol = exactla::solve_mod_p(a, b);
        if (!sol) continue;
        out.solved = true;
        out.depth = depth;
        for (int t = 0; t < upto; ++t)
            if ((*sol)[t] != 0)
                out.combo.push_back({en.rows[t].gen, en.rows[t].word, (*sol)[t]});
        return out;
    }
    return out;
}

// ---- finite-quotient spin ----

namespace {

// key of the quotient module: component row and degree, with one finite
// coset coordinate (element, c-power mod period) per factor; the key's own
// factor coordinate is kept trivial by absorbing it into the row
struct QKey {
    int factor = 0;
    int row = 0;
    long cpow = 0;
    std::vector<std::pair<int, long>> coset;
    auto operator<=>(const QKey&) const = default;
};

using QElem = std::map<QKey, long>;  // coefficients mod p

struct QuotientCtx {
    const InducedSpace& sp;
    long p = 0;
    long period = 2;

    long wrap(int f, long c) const {
        if (sp.fac[f].rep == FactorSlot::Rep::Lattice) return 0;
        long r = c % period;
        return r < 0 ? r + period : r;
    }
};

void q_add(QElem& v, const QKey& k, long c, long p) {
    long r = ((c % p) + p) % p;
    if (r == 0) return;
    auto it = v.find(k);
    if (it == v.end()) {
        v.emplace(k, r);
        return;
    }
    it->second = (it->second + r) % p;
    if (it->second == 0) v.erase(it);
}

// absorb a nontrivial own-factor coset coordinate into the row
void q_emit(const QuotientCtx& q, QElem& out, const QKey& k, long c) {
    auto [ge, gk] = k.coset[k.factor];
    if (ge == q.sp.fac[k.factor].g->e && gk == 0) {
        q_add(out, k, c, q.p);
        return;
    }
    const FactorSlot& fac = q.sp.fac[k.factor];
    QKey base = k;
    base.coset[k.factor] = {fac.g->e, 0};
    for (const auto& [rc2, co] : slot_act(fac, k.row, k.cpow, ge, gk)) {
        if (fac.rep == FactorSlot::Rep::AugLaurent && rc2.first == fac.g->e &&
            q.wrap(k.factor, rc2.second) == 0)
            continue;  // g c^j - 1 dies when g = e and j wraps to 0
        QKey nk = base;
        nk.row = rc2.first;
        nk.cpow = q.wrap(k.factor, rc2.second);
        long r = (long)mpz_fdiv_ui(co.get_mpz_t(), (unsigned long)q.p);
        q_add(out, nk, (c * r) % q.p, q.p);
    }
}

QElem q_act(const QuotientCtx& q, const QElem& v, const Syllable& s) {
    QElem out;
    for (const auto& [k, c] : v) {
        QKey nk = k;
        auto& slot = nk.coset[s.factor];
        slot.first = q.sp.fac[s.factor].g->mul[slot.first][s.elt];
        slot.second = q.wrap(s.factor, slot.second + s.cpow);
        q_emit(q, out, nk, c);
    }
    return out;
}

QElem q_image(const QuotientCtx& q, const InducedElement& v) {
    QElem out;
    int nf = (int)q.sp.fac.size();
    for (const auto& [key, c] : v.coef) {
        QKey base{key.factor, key.row, q.wrap(key.factor, key.cpow),
                  std::vector<std::pair<int, long>>(nf, {0, 0})};
        for (int f = 0; f < nf; ++f) base.coset[f] = {q.sp.fac[f].g->e, 0};
        if (q.sp.fac[key.factor].rep == FactorSlot::Rep::AugLaurent &&
            key.row == q.sp.fac[key.factor].g->e && base.cpow == 0)
            continue;  // wrapped to the zero row
        long r = (long)mpz_fdiv_ui(c.get_mpz_t(), (unsigned long)q.p);
        QElem cur;
        q_add(cur, base, r, q.p);
        for (const Syllable& s : key.word) cur = q_act(q, cur, s);
        for (const auto& [k2, c2] : cur) q_add(out, k2, c2, q.p);
    }
    return out;
}

} // namespace

QuotientSpin quotient_generation(const InducedSpace& sp,
                                 const std::vector<InducedElement>& x,
                                 const std::vector<Target>& targets, long p,
                                 long period) {
    exactla::check_prime_modulus(p);
    if (period < 2) throw gg_error("the quotient period must be at least 2");
    QuotientCtx q{sp, p, period};

    std::vector<QElem> seeds;
    for (const auto& v : x) seeds.push_back(q_image(q, v));
    std::vector<QElem> goal;
    for (const auto& t : targets) goal.push_back(q_image(q, t.v));

    // close the key space under the quotient alphabet
    std::vector<Syllable> letters = alphabet(sp, period - 1);
    std::map<QKey, int> cols;
    std::vector<QKey> frontier;
    auto note_keys = [&](const QElem& v) {
        for (const auto& [k, c] : v)
            if (cols.emplace(k, 0).second) frontier.push_back(k);
    };
    for (const auto& v : seeds) note_keys(v);
    for (const auto& v : goal) note_keys(v);
    while (!frontier.empty()) {
        QKey k = frontier.back();
        frontier.pop_back();
        QElem unit{{k, 1}};
        for (const Syllable& s : letters) note_keys(q_act(q, unit, s));
        if ((int)cols.size() > 20000)
            throw budget_error("finite-quotient key space exceeded its cap");
    }
    int idx = 0;
    for (auto& [k, i] : cols) i = idx++;

    auto densify = [&](const std::vector<QElem>& list) {
        FpMat m(p, (int)list.size(), (int)cols.size());
        for (int i = 0; i < (int)list.size(); ++i)
            for (const auto& [k, c] : list[i]) m.at(i, cols.at(k)) = c;
        return m;
    };

    // spin to stabilization: the key space is finite, so this is exact
    FpMat basis = exactla::rref(densify(seeds)).rowspace;
    std::vector<QKey> keys(cols.size());
    for (const auto& [k, i] : cols) keys[i] = k;
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<QElem> next;
        for (int i = 0; i < basis.rows; ++i) {
            QElem row;
            for (int j = 0; j < basis.cols; ++j)
                if (basis.at(i, j) != 0) row.emplace(keys[j], basis.at(i, j));
            for (const Syllable& s : letters) next.push_back(q_act(q, row, s));
        }
        FpMat stacked = densify(next);
        FpMat both(p, basis.rows + stacked.rows, basis.cols);
        for (int i = 0; i < basis.rows; ++i) both.a[i] = basis.a[i];
        for (int i = 0; i < stacked.rows; ++i) both.a[basis.rows + i] = stacked.a[i];
        exactla::Rref r = exactla::rref(both);
        if (r.rank > basis.rows) {
            basis = r.rowspace;
            grew = true;
        }
    }

    QuotientSpin out;
    out.dim = basis.rows;
    out.ambient = (int)cols.size();
    FpMat goals = densify(goal);
    for (int i = 0; i < goals.rows; ++i) {
        auto sol = exactla::solve_mod_p(basis, goals.a[i]);
        if (!sol) out.missing.push_back(i);
    }
    out.all_reached = out.missing.empty();
    return out;
}

} // namespace gengap::induced
