#include "gengap/gring.hpp"

#include <iterator>
#include <sstream>

#include "gengap/exactla.hpp"

namespace gengap::gring {

namespace {

const long kMaxFoxExponent = 4096;

void check_group(const GroupPtr& a, const GroupPtr& b) {
    if (a == b) return;
    if (a && b && a->order == b->order && a->mul == b->mul) return;
    throw gg_error("operands belong to different groups");
}

void check_domain(const GroupRingElement& a, const GroupRingElement& b) {
    check_group(a.g, b.g);
    if (a.p != b.p) throw gg_error("mixed coefficient domains");
}

mpz_class mod_p(const mpz_class& v, long p) {
    mpz_class r = v % p;
    if (r < 0) r += p;
    return r;
}

void gr_normalize(GroupRingElement& a) {
    if (a.p == 0) return;
    for (auto& c : a.coef) c = mod_p(c, a.p);
}

void lg_normalize(LaurentGroupRingElement& a) {
    for (auto it = a.coef.begin(); it != a.coef.end();) {
        bool zero = true;
        for (auto& c : it->second)
            if (c != 0) { zero = false; break; }
        it = zero ? a.coef.erase(it) : std::next(it);
    }
}

std::string coef_vector_to_string(const groups::FiniteGroup& g,
                                  const std::vector<mpz_class>& vec) {
    std::ostringstream out;
    bool first = true;
    for (int x = 0; x < g.order; ++x) {
        if (vec[x] == 0) continue;
        mpz_class c = vec[x];
        if (first) {
            if (c < 0) { out << "-"; c = -c; }
        } else {
            out << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        std::string name = groups::element_name(g, x);
        if (name == "1") out << c.get_str();
        else if (c == 1) out << name;
        else out << c.get_str() << "*" << name;
    }
    return first ? "0" : out.str();
}

} // namespace

GroupPtr share(groups::FiniteGroup g) {
    return std::make_shared<const groups::FiniteGroup>(std::move(g));
}

GroupRingElement gr_zero(GroupPtr g, long p) {
    if (p != 0) exactla::check_prime_modulus(p);
    return {g, p, std::vector<mpz_class>(g->order, 0)};
}

GroupRingElement gr_one(GroupPtr g, long p) { return gr_basis(g, g->e, p); }

GroupRingElement gr_basis(GroupPtr g, int elt, long p) {
    if (elt < 0 || elt >= g->order) throw gg_error("group element index out of range");
    GroupRingElement a = gr_zero(std::move(g), p);
    a.coef[elt] = 1;
    return a;
}

GroupRingElement gr_ghat(GroupPtr g, long p) {
    GroupRingElement a = gr_zero(std::move(g), p);
    for (auto& c : a.coef) c = 1;
    return a;
}

GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b) {
    check_domain(a, b);
    GroupRingElement out = a;
    for (int i = 0; i < a.g->order; ++i) out.coef[i] += b.coef[i];
    gr_normalize(out);
    return out;
}

GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b) {
    check_domain(a, b);
    GroupRingElement out = a;
    for (int i = 0; i < a.g->order; ++i) out.coef[i] -= b.coef[i];
    gr_normalize(out);
    return out;
}

GroupRingElement operator-(const GroupRingElement& a) {
    GroupRingElement out = a;
    for (auto& c : out.coef) c = -c;
    gr_normalize(out);
    return out;
}

GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
    check_domain(a, b);
    GroupRingElement out = gr_zero(a.g, a.p);
    for (int i = 0; i < a.g->order; ++i) {
        if (a.coef[i] == 0) continue;
        for (int j = 0; j < a.g->order; ++j) {
            if (b.coef[j] == 0) continue;
            out.coef[a.g->mul[i][j]] += a.coef[i] * b.coef[j];
        }
    }
    gr_normalize(out);
    return out;
}

GroupRingElement operator*(const mpz_class& k, const GroupRingElement& a) {
    GroupRingElement out = a;
    for (auto& c : out.coef) c *= k;
    gr_normalize(out);
    return out;
}

bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    check_domain(a, b);
    return a.coef == b.coef;
}

bool gr_is_zero(const GroupRingElement& a) {
    for (auto& c : a.coef)
        if (c != 0) return false;
    return true;
}

mpz_class augment(const GroupRingElement& a) {
    mpz_class s = 0;
    for (auto& c : a.coef) s += c;
    return a.p == 0 ? s : mod_p(s, a.p);
}

GroupRingElement gr_reduce_mod(const GroupRingElement& a, long p) {
    exactla::check_prime_modulus(p);
    if (a.p != 0 && a.p != p)
        throw gg_error("element already carries a different modulus");
    GroupRingElement out = a;
    out.p = p;
    gr_normalize(out);
    return out;
}

std::string gr_to_string(const GroupRingElement& a) {
    return coef_vector_to_string(*a.g, a.coef);
}

// ---- Laurent extension ----

LaurentGroupRingElement lg_zero(GroupPtr g) { return {std::move(g), {}}; }

LaurentGroupRingElement lg_one(GroupPtr g) {
    int e = g->e;
    return lg_monomial(std::move(g), e, 0);
}

LaurentGroupRingElement lg_monomial(GroupPtr g, int elt, long cpow, const mpz_class& coeff) {
    if (elt < 0 || elt >= g->order) throw gg_error("group element index out of range");
    LaurentGroupRingElement a{std::move(g), {}};
    if (coeff != 0) {
        std::vector<mpz_class> vec(a.g->order, 0);
        vec[elt] = coeff;
        a.coef[cpow] = std::move(vec);
    }
    return a;
}

LaurentGroupRingElement lg_embed(const GroupRingElement& a, long cpow) {
    if (a.p != 0) throw gg_error("only integer coefficients embed into the Laurent ring");
    LaurentGroupRingElement out{a.g, {}};
    out.coef[cpow] = a.coef;
    lg_normalize(out);
    return out;
}

LaurentGroupRingElement lg_ghat(GroupPtr g) { return lg_embed(gr_ghat(std::move(g))); }

LaurentGroupRingElement operator+(const LaurentGroupRingElement& a,
                                  const LaurentGroupRingElement& b) {
    check_group(a.g, b.g);
    LaurentGroupRingElement out = a;
    for (auto& [k, vec] : b.coef) {
        auto& row = out.coef.try_emplace(k, std::vector<mpz_class>(a.g->order, 0)).first->second;
        for (int i = 0; i < a.g->order; ++i) row[i] += vec[i];
    }
    lg_normalize(out);
    return out;
}

LaurentGroupRingElement operator-(const LaurentGroupRingElement& a,
                                  const LaurentGroupRingElement& b) {
    return a + (-b);
}

LaurentGroupRingElement operator-(const LaurentGroupRingElement& a) {
    LaurentGroupRingElement out = a;
    for (auto& [k, vec] : out.coef)
        for (auto& c : vec) c = -c;
    return out;
}

LaurentGroupRingElement operator*(const LaurentGroupRingElement& a,
                                  const LaurentGroupRingElement& b) {
    check_group(a.g, b.g);
    LaurentGroupRingElement out = lg_zero(a.g);
    for (auto& [ka, va] : a.coef)
        for (auto& [kb, vb] : b.coef) {
            auto& row =
                out.coef.try_emplace(ka + kb, std::vector<mpz_class>(a.g->order, 0))
                    .first->second;
            for (int i = 0; i < a.g->order; ++i) {
                if (va[i] == 0) continue;
                for (int j = 0; j < a.g->order; ++j) {
                    if (vb[j] == 0) continue;
                    row[a.g->mul[i][j]] += va[i] * vb[j];
                }
            }
        }
    lg_normalize(out);
    return out;
}

LaurentGroupRingElement operator*(const mpz_class& k, const LaurentGroupRingElement& a) {
    if (k == 0) return lg_zero(a.g);
    LaurentGroupRingElement out = a;
    for (auto& [kk, vec] : out.coef)
        for (auto& c : vec) c *= k;
    return out;
}

bool operator==(const LaurentGroupRingElement& a, const LaurentGroupRingElement& b) {
    check_group(a.g, b.g);
    return a.coef == b.coef;
}

bool lg_is_zero(const LaurentGroupRingElement& a) { return a.coef.empty(); }

mpz_class lg_augment(const LaurentGroupRingElement& a) {
    mpz_class s = 0;
    for (auto& [k, vec] : a.coef)
        for (auto& c : vec) s += c;
    return s;
}

std::map<long, mpz_class> lg_group_augment(const LaurentGroupRingElement& a) {
    std::map<long, mpz_class> out;
    for (auto& [k, vec] : a.coef) {
        mpz_class s = 0;
        for (auto& c : vec) s += c;
        if (s != 0) out[k] = s;
    }
    return out;
}

GroupRingElement lg_at_c_one(const LaurentGroupRingElement& a) {
    GroupRingElement out = gr_zero(a.g);
    for (auto& [k, vec] : a.coef)
        for (int i = 0; i < a.g->order; ++i) out.coef[i] += vec[i];
    return out;
}

GroupRingElement gr_from_laurent(const LaurentGroupRingElement& a) {
    for (auto& [k, vec] : a.coef)
        if (k != 0) throw gg_error("element has nonconstant Laurent part");
    return lg_at_c_one(a);
}

LaurentGroupRingElement lg_reduce_mod(const LaurentGroupRingElement& a, long p) {
    exactla::check_prime_modulus(p);
    LaurentGroupRingElement out = a;
    for (auto& [k, vec] : out.coef)
        for (auto& c : vec) c = mod_p(c, p);
    lg_normalize(out);
    return out;
}

std::string lg_to_string(const LaurentGroupRingElement& a) {
    if (a.coef.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto& [k, vec] : a.coef) {
        if (!first) out << " + ";
        first = false;
        out << "(" << coef_vector_to_string(*a.g, vec) << ")";
        if (k != 0) out << "*c^" << k;
    }
    return out.str();
}

// ---- Fox derivatives ----

namespace {

void check_images(const groups::Word& w, const std::vector<LetterImage>& images,
                  const GroupPtr& g) {
    for (auto& [letter, k] : w.syllables) {
        if (letter < 0 || letter >= (int)images.size())
            throw gg_error("word uses an undeclared generator");
        if (k > kMaxFoxExponent || k < -kMaxFoxExponent)
            throw gg_error("exponent too large for Fox expansion");
        if (images[letter].elt < 0 || images[letter].elt >= g->order)
            throw gg_error("letter image out of range");
    }
}

LetterImage image_power(const groups::FiniteGroup& g, const LetterImage& x, long k) {
    return {g.power(x.elt, k), x.cpow * k};
}

LetterImage image_mul(const groups::FiniteGroup& g, const LetterImage& x,
                      const LetterImage& y) {
    return {g.mul[x.elt][y.elt], x.cpow + y.cpow};
}

} // namespace

LaurentGroupRingElement word_image(const groups::Word& w,
                                   const std::vector<LetterImage>& images, GroupPtr g) {
    check_images(w, images, g);
    LetterImage acc{g->e, 0};
    for (auto& [letter, k] : w.syllables)
        acc = image_mul(*g, acc, image_power(*g, images[letter], k));
    return lg_monomial(std::move(g), acc.elt, acc.cpow);
}

LaurentGroupRingElement fox_derivative(const groups::Word& w, int letter,
                                       const std::vector<LetterImage>& images,
                                       GroupPtr g) {
    check_images(w, images, g);
    if (letter < 0 || letter >= (int)images.size())
        throw gg_error("derivative with respect to an undeclared generator");
    LaurentGroupRingElement out = lg_zero(g);
    LetterImage prefix{g->e, 0};
    for (auto& [l, k] : w.syllables) {
        if (l == letter) {
            // d(x^k)/dx = sum_{t=0}^{k-1} X^t  (k > 0),  -sum_{t=1}^{-k} X^-t  (k < 0)
            LaurentGroupRingElement part = lg_zero(g);
            if (k > 0)
                for (long t = 0; t < k; ++t) {
                    LetterImage m = image_mul(*g, prefix, image_power(*g, images[l], t));
                    part = part + lg_monomial(g, m.elt, m.cpow);
                }
            else
                for (long t = 1; t <= -k; ++t) {
                    LetterImage m = image_mul(*g, prefix, image_power(*g, images[l], -t));
                    part = part - lg_monomial(g, m.elt, m.cpow);
                }
            out = out + part;
        }
        prefix = image_mul(*g, prefix, image_power(*g, images[l], k));
    }
    return out;
}

FoxImage fox_image(const groups::Word& w, const std::vector<LetterImage>& images,
                   GroupPtr g) {
    FoxImage f;
    f.source = w;
    for (int i = 0; i < (int)images.size(); ++i)
        f.partials.push_back(fox_derivative(w, i, images, g));
    return f;
}

bool fox_fundamental_identity_holds(const FoxImage& f,
                                    const std::vector<LetterImage>& images, GroupPtr g) {
    LaurentGroupRingElement lhs = lg_zero(g);
    for (int i = 0; i < (int)images.size(); ++i)
        lhs = lhs + f.partials[i] * (lg_monomial(g, images[i].elt, images[i].cpow) - lg_one(g));
    return lhs == word_image(f.source, images, g) - lg_one(g);
}

// ---- relation module of C_n x C ----

FoxPair operator+(const FoxPair& a, const FoxPair& b) { return {a.dx + b.dx, a.dc + b.dc}; }
FoxPair operator-(const FoxPair& a, const FoxPair& b) { return {a.dx - b.dx, a.dc - b.dc}; }
FoxPair operator-(const FoxPair& a) { return {-a.dx, -a.dc}; }
FoxPair operator*(const FoxPair& a, const LaurentGroupRingElement& u) {
    return {a.dx * u, a.dc * u};
}
FoxPair operator*(const mpz_class& k, const FoxPair& a) { return {k * a.dx, k * a.dc}; }
bool operator==(const FoxPair& a, const FoxPair& b) { return a.dx == b.dx && a.dc == b.dc; }
bool pair_is_zero(const FoxPair& a) { return lg_is_zero(a.dx) && lg_is_zero(a.dc); }

std::string pair_to_string(const FoxPair& a) {
    return "[" + lg_to_string(a.dx) + ", " + lg_to_string(a.dc) + "]";
}

RelationContext make_relation_context(long n) {
    if (n < 2) throw hypothesis_error("relation context needs a cyclic group of order >= 2");
    return {share(groups::cyclic(n)), n};
}

LaurentGroupRingElement RelationContext::one() const { return lg_one(g); }

LaurentGroupRingElement RelationContext::a(long j) const {
    return lg_monomial(g, g->power(1, j), 0);
}

LaurentGroupRingElement RelationContext::c(long k) const { return lg_monomial(g, g->e, k); }

LaurentGroupRingElement RelationContext::ghat() const { return lg_ghat(g); }

LaurentGroupRingElement RelationContext::ghat_prefix(long m) const {
    if (m < 0) throw gg_error("prefix sums need a nonnegative length");
    LaurentGroupRingElement out = lg_zero(g);
    for (long t = 0; t < m; ++t) out = out + a(t);
    return out;
}

FoxPair rc_xi(const RelationContext& rc) { return {rc.ghat(), lg_zero(rc.g)}; }

FoxPair rc_eta(const RelationContext& rc, long m) {
    // Fox coordinates of [x^m, c]: ((1 + a + ... + a^(m-1))(1 - c), a^m - 1)
    if (m < 0) throw gg_error("negative commutator powers are not needed here");
    return {rc.ghat_prefix(m) * (rc.one() - rc.c()), rc.a(m) - rc.one()};
}

LaurentGroupRingElement rc_sigma(const RelationContext& rc, const FoxPair& s) {
    check_group(rc.g, s.dc.g);
    return s.dc;  // kills exactly xi*ZH
}

FoxPair rc_tau(const RelationContext& rc, const LaurentGroupRingElement& v) {
    check_group(rc.g, v.g);
    if (!lg_group_augment(v).empty())
        throw gg_error("tau is only defined on the induced augmentation submodule");
    // v = sum v_{j,i} (a^j - 1) c^i  ->  sum v_{j,i} eta_j c^i
    FoxPair out{lg_zero(rc.g), lg_zero(rc.g)};
    for (auto& [cpow, vec] : v.coef)
        for (long j = 1; j < rc.n; ++j)
            if (vec[j] != 0)
                out = out + rc_eta(rc, j) * lg_monomial(rc.g, rc.g->e, cpow, vec[j]);
    return out;
}

FoxPair rc_tau_ghat(const RelationContext& rc, const LaurentGroupRingElement& v) {
    FoxPair out{lg_zero(rc.g), lg_zero(rc.g)};
    for (long m = 0; m < rc.n; ++m)
        out = out + rc_tau(rc, v * rc.a(-m)) * rc.a(m);
    return out;
}

FoxPair rc_psi(const RelationContext& rc, int gelt, const LaurentGroupRingElement& v) {
    auto ginv = lg_monomial(rc.g, rc.g->inv[gelt], 0);
    auto gg = lg_monomial(rc.g, gelt, 0);
    return rc_tau(rc, v * ginv) * gg - rc_tau(rc, v);
}

std::optional<MembershipWitness> rc_solve_membership(const RelationContext& rc,
                                                     const FoxPair& s) {
    check_group(rc.g, s.dx.g);
    const long n = rc.n;
    // dc must be divisible by a - 1: per c-degree group augmentation zero
    if (!lg_group_augment(s.dc).empty()) return std::nullopt;
    // solve w(a-1) = dc degreewise: w_j = -(u_1 + ... + u_j)
    LaurentGroupRingElement w = lg_zero(rc.g);
    for (auto& [cpow, u] : s.dc.coef) {
        std::vector<mpz_class> wv(n, 0);
        mpz_class acc = 0;
        for (long j = 1; j < n; ++j) {
            acc += u[j];
            wv[j] = -acc;
        }
        w.coef[cpow] = std::move(wv);
    }
    lg_normalize(w);
    // remainder must be a ghat multiple in every c-degree
    LaurentGroupRingElement gamma = s.dx - (rc.one() - rc.c()) * w;
    LaurentGroupRingElement u = lg_zero(rc.g);
    for (auto& [cpow, vec] : gamma.coef) {
        for (long j = 1; j < n; ++j)
            if (vec[j] != vec[0]) return std::nullopt;
        if (vec[0] != 0) u = u + lg_monomial(rc.g, rc.g->e, cpow, vec[0]);
    }
    MembershipWitness wit{u, w};
    if (!(rc_xi(rc) * wit.u + rc_eta(rc) * wit.w == s))
        throw invariant_error("membership witness failed to reproduce its element");
    return wit;
}

bool rc_in_relation_module(const RelationContext& rc, const FoxPair& s) {
    return rc_solve_membership(rc, s).has_value();
}

FoxPair rc_z(const RelationContext& rc) {
    return rc_tau_ghat(rc, rc.a() - rc.one()) - rc_xi(rc);
}

// ---- identity checking ----

IdentityReport verify_identity(const std::string& name,
                               const LaurentGroupRingElement& lhs,
                               const LaurentGroupRingElement& rhs) {
    LaurentGroupRingElement diff = lhs - rhs;
    bool holds = lg_is_zero(diff);
    return {name, holds, holds, holds ? "0" : lg_to_string(diff)};
}

IdentityReport verify_identity(const std::string& name, const FoxPair& lhs,
                               const FoxPair& rhs) {
    FoxPair diff = lhs - rhs;
    bool holds = pair_is_zero(diff);
    return {name, holds, holds, holds ? "0" : pair_to_string(diff)};
}

namespace {

// (x + ghat(c-1))(|G| - ghat) = |G|x for x in the augmentation ideal: the
// twisted generator recovers |G|x, the key step behind the combined
// generating sets over G x Z.
void twisted_generator_reports(std::vector<IdentityReport>& out, long m) {
    GroupPtr g = share(groups::cyclic(m));
    auto one = lg_one(g), ghat = lg_ghat(g), c = lg_monomial(g, g->e, 1);
    auto gen = [&](long j) { return lg_monomial(g, g->power(1, j), 0); };
    std::vector<std::pair<std::string, LaurentGroupRingElement>> xs;
    xs.push_back({"a-1", gen(1) - one});
    if (m >= 3) xs.push_back({"a^" + std::to_string(m - 1) + "-a", gen(m - 1) - gen(1)});
    for (auto& [xname, x] : xs) {
        auto lhs = (x + ghat * (c - one)) * (mpz_class(m) * one - ghat);
        auto rhs = mpz_class(m) * x;
        out.push_back(verify_identity(
            "twisted-generator-recovery(G=C" + std::to_string(m) + ",x=" + xname + ")",
            lhs, rhs));
    }
}

void retraction_report(std::vector<IdentityReport>& out, long n) {
    RelationContext rc = make_relation_context(n);
    IdentityReport rep{"averaged-section-retraction(n=" + std::to_string(n) + ")", true,
                       true, "0"};
    for (long j = 1; j < n && rep.holds; ++j)
        for (long i : {-1L, 0L, 2L}) {
            auto v = (rc.a(j) - rc.one()) * rc.c(i);
            auto r = verify_identity(rep.name, rc_sigma(rc, rc_tau_ghat(rc, v)),
                                     mpz_class(n) * v);
            if (!r.holds) {
                rep = r;
                rep.residue += "  [at j=" + std::to_string(j) + ",i=" + std::to_string(i) + "]";
                break;
            }
        }
    out.push_back(rep);
}

void cocycle_report(std::vector<IdentityReport>& out, long n) {
    RelationContext rc = make_relation_context(n);
    IdentityReport rep{"coinvariant-cocycle-vanishing(n=" + std::to_string(n) + ")", true,
                       true, "0"};
    for (int gelt = 0; gelt < rc.g->order && rep.holds; ++gelt)
        for (long j = 1; j < n && rep.holds; ++j)
            for (long i : {0L, 1L}) {
                auto v = (rc.a(j) - rc.one()) * rc.c(i);
                FoxPair psi = rc_psi(rc, gelt, v);
                // the cocycle class dies in the C-coinvariants: psi lands in
                // Sbar*(c-1), i.e. it is a relation-module element that
                // vanishes under c -> 1
                bool dead = rc_in_relation_module(rc, psi) &&
                            gr_is_zero(lg_at_c_one(psi.dx)) &&
                            gr_is_zero(lg_at_c_one(psi.dc));
                if (!dead) {
                    rep.holds = rep.ok = false;
                    rep.residue = pair_to_string(psi) + "  [at g=a^" + std::to_string(gelt) +
                                  ",j=" + std::to_string(j) + ",i=" + std::to_string(i) + "]";
                    break;
                }
            }
    out.push_back(rep);
}

void closed_form_report(std::vector<IdentityReport>& out, long n) {
    RelationContext rc = make_relation_context(n);
    auto lhs = rc_tau_ghat(rc, rc.a() - rc.one());
    auto rhs = rc_eta(rc) * (mpz_class(n) * rc.one() - rc.ghat());
    out.push_back(verify_identity("averaged-section-closed-form(n=" + std::to_string(n) + ")",
                                  lhs, rhs));
}

void exponent_reports(std::vector<IdentityReport>& out, long n) {
    RelationContext rc = make_relation_context(n);
    FoxPair z = rc_z(rc), xi = rc_xi(rc), eta = rc_eta(rc);
    // z*ghat = -n*xi and z*(n + ghat*c - 2*ghat) = n^2*eta put n^2*Sbar
    // inside z*ZH, so Sbar/zZH has exponent dividing n^2
    std::string tag = "(n=" + std::to_string(n) + ")";
    out.push_back(verify_identity("exponent-bound-xi" + tag, z * rc.ghat(),
                                  mpz_class(-n) * xi));
    auto mult = mpz_class(n) * rc.one() + rc.ghat() * rc.c() - mpz_class(2) * rc.ghat();
    out.push_back(
        verify_identity("exponent-bound-eta" + tag, z * mult, mpz_class(n * n) * eta));
}

void regeneration_report(std::vector<IdentityReport>& out, long n, long q) {
    RelationContext rc = make_relation_context(n);
    FoxPair z = rc_z(rc), xi = rc_xi(rc), eta = rc_eta(rc);
    // alpha*n^2 + beta*q = 1 turns the exponent-bound identities into
    // xi, eta in z*ZH + q*Sbar, i.e. Sbar = z*ZH + q*Sbar
    mpz_class alpha, beta, gcd;
    mpz_class n2 = mpz_class(n) * n, qq = q;
    mpz_gcdext(gcd.get_mpz_t(), alpha.get_mpz_t(), beta.get_mpz_t(), n2.get_mpz_t(),
               qq.get_mpz_t());
    std::string tag = "(n=" + std::to_string(n) + ",q=" + std::to_string(q) + ")";
    if (gcd != 1) {
        out.push_back({"regeneration" + tag, false, false, "q shares a factor with n"});
        return;
    }
    auto xi_rhs = z * ((-alpha * n) * rc.ghat()) + (beta * q) * xi;
    auto eta_mult = mpz_class(n) * rc.one() + rc.ghat() * rc.c() - mpz_class(2) * rc.ghat();
    auto eta_rhs = z * (alpha * eta_mult) + (beta * q) * eta;
    auto r1 = verify_identity("regeneration-xi" + tag, xi, xi_rhs);
    auto r2 = verify_identity("regeneration-eta" + tag, eta, eta_rhs);
    out.push_back(r1);
    out.push_back(r2);
}

void literal_comparison_report(std::vector<IdentityReport>& out, long n) {
    RelationContext rc = make_relation_context(n);
    FoxPair z = rc_z(rc), xi = rc_xi(rc), eta = rc_eta(rc);
    auto lhs = z * (mpz_class(n) * rc.one() - rc.ghat() * rc.c());
    FoxPair residue = lhs - mpz_class(n * n) * eta;
    // the one-sided literal form z(n - ghat*c) = n^2*eta is sensitive to the
    // section convention; here it misses by a term supported on xi, which
    // sigma kills — record the residue instead of asserting the equation
    bool expected = residue == mpz_class(-2 * n) * (xi * (rc.one() - rc.c())) &&
                    lg_is_zero(rc_sigma(rc, residue)) && rc_in_relation_module(rc, residue);
    IdentityReport rep{"literal-z-comparison(n=" + std::to_string(n) + ")",
                       pair_is_zero(residue), expected, pair_to_string(residue)};
    out.push_back(rep);
}

} // namespace

std::vector<IdentityReport> identity_suite() {
    std::vector<IdentityReport> out;
    for (long m : {2, 3, 6}) twisted_generator_reports(out, m);
    for (long n : {2, 3, 4}) retraction_report(out, n);
    for (long n : {2, 3, 4}) cocycle_report(out, n);
    for (long n : {2, 3, 4}) closed_form_report(out, n);
    for (long n : {2, 3, 4}) exponent_reports(out, n);
    for (long n : {2, 3})
        for (long q : {5, 7}) regeneration_report(out, n, q);
    for (long n : {2, 3}) literal_comparison_report(out, n);
    return out;
}

} // namespace gengap::gring
