#include "gengap/groups.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

#include "gengap/primes.hpp"

namespace gengap::primes {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<long> factor_primes(long n) {
    if (n < 1) throw gg_error("factor_primes: need n >= 1");
    std::vector<long> ps;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            ps.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) ps.push_back(n);
    return ps;
}

std::vector<long> factor_primes(const mpz_class& n0) {
    mpz_class n = n0;
    if (n < 1) throw gg_error("factor_primes: need n >= 1");
    std::vector<long> ps;
    for (mpz_class d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            ps.push_back(d.get_si());
            while (n % d == 0) n /= d;
        }
    if (n > 1) {
        if (!n.fits_slong_p()) throw budget_error("factor_primes: prime factor too large");
        ps.push_back(n.get_si());
    }
    return ps;
}

long next_prime_after(long n) {
    long k = n + 1;
    while (!is_prime(k)) ++k;
    return k;
}

int valuation(long n, long p) {
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

long power_of(long p, int e) {
    long r = 1;
    while (e-- > 0) r *= p;
    return r;
}

long smallest_prime_outside(const std::vector<long>& avoid) {
    for (long p = 2;; p = next_prime_after(p)) {
        if (std::find(avoid.begin(), avoid.end(), p) == avoid.end()) return p;
    }
}

} // namespace gengap::primes

namespace gengap::groups {

int FiniteGroup::power(int g, long k) const {
    int base = (k >= 0) ? g : inv[g];
    unsigned long n = (k >= 0) ? k : -(unsigned long)k;
    int r = e;
    while (n) {
        if (n & 1) r = mul[r][base];
        base = mul[base][base];
        n >>= 1;
    }
    return r;
}

int FiniteGroup::order_of(int g) const {
    int x = g, n = 1;
    while (x != e) { x = mul[x][g]; ++n; }
    return n;
}

int FiniteGroup::comm(int a, int b) const {
    return mul[mul[mul[a][b]][inv[a]]][inv[b]];
}

namespace {

void compute_via(FiniteGroup& g) {
    g.via.assign(g.order, {-2, -2});
    g.via[g.e] = {-1, -1};
    std::vector<int> queue{g.e};
    for (size_t q = 0; q < queue.size(); ++q) {
        int x = queue[q];
        for (size_t gi = 0; gi < g.gens.size(); ++gi) {
            int y = g.mul[x][g.gens[gi]];
            if (g.via[y].first == -2) {
                g.via[y] = {x, (int)gi};
                queue.push_back(y);
            }
        }
    }
    if ((int)queue.size() != g.order)
        throw gg_error("declared generators do not generate the group");
}

void validate_table(const FiniteGroup& g) {
    int n = g.order;
    if ((int)g.mul.size() != n) throw gg_error("group table: wrong number of rows");
    for (auto& row : g.mul) {
        if ((int)row.size() != n) throw gg_error("group table: ragged row");
        for (int v : row)
            if (v < 0 || v >= n) throw gg_error("group table: entry out of range");
    }
    // identity and inverses always; associativity exhaustively at desk scale
    for (int a = 0; a < n; ++a)
        if (g.mul[g.e][a] != a || g.mul[a][g.e] != a)
            throw gg_error("group table: identity fails");
    for (int a = 0; a < n; ++a)
        if (g.mul[a][g.inv[a]] != g.e || g.mul[g.inv[a]][a] != g.e)
            throw gg_error("group table: inverses fail");
    if (n <= 24) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (g.mul[g.mul[a][b]][c] != g.mul[a][g.mul[b][c]])
                        throw gg_error("group table: associativity fails");
    }
}

std::vector<std::string> default_names(size_t k) {
    static const char* pool = "abdfghjklmnopqrstuvw";  // skip c, e, x, y, z
    std::vector<std::string> names;
    for (size_t i = 0; i < k; ++i) {
        if (i < 20) names.push_back(std::string(1, pool[i]));
        else names.push_back("g" + std::to_string(i));
    }
    return names;
}

} // namespace

FiniteGroup make_group(std::vector<std::vector<int>> mul, std::vector<int> gens,
                       std::vector<std::string> gen_names) {
    FiniteGroup g;
    g.order = (int)mul.size();
    if (g.order == 0) throw gg_error("group table: empty");
    g.mul = std::move(mul);
    // locate identity
    int e = -1;
    for (int cand = 0; cand < g.order; ++cand) {
        bool ok = true;
        for (int a = 0; a < g.order && ok; ++a)
            if (g.mul[cand][a] != a || g.mul[a][cand] != a) ok = false;
        if (ok) { e = cand; break; }
    }
    if (e < 0) throw gg_error("group table: no identity element");
    g.e = e;
    g.inv.assign(g.order, -1);
    for (int a = 0; a < g.order; ++a) {
        for (int b = 0; b < g.order; ++b)
            if (g.mul[a][b] == e && g.mul[b][a] == e) { g.inv[a] = b; break; }
        if (g.inv[a] < 0) throw gg_error("group table: missing inverse");
    }
    if (gens.empty() && g.order > 1) {
        for (int a = 0; a < g.order; ++a)
            if (a != e) gens.push_back(a);
    }
    g.gens = std::move(gens);
    if (gen_names.empty()) gen_names = default_names(g.gens.size());
    if (gen_names.size() != g.gens.size())
        throw gg_error("generator names do not match generators");
    g.gen_names = std::move(gen_names);
    validate_table(g);
    compute_via(g);
    return g;
}

FiniteGroup trivial_group() {
    FiniteGroup g;
    g.order = 1;
    g.mul = {{0}};
    g.e = 0;
    g.inv = {0};
    g.via = {{-1, -1}};
    return g;
}

std::string element_name(const FiniteGroup& g, int x) {
    if (x == g.e) return "1";
    std::vector<int> letters;  // generator indices, innermost first
    for (int y = x; y != g.e; y = g.via[y].first) letters.push_back(g.via[y].second);
    std::string out;
    for (size_t i = letters.size(); i > 0;) {
        size_t j = i;
        while (j > 0 && letters[j - 1] == letters[i - 1]) --j;
        if (!out.empty()) out += "*";
        out += g.gen_names[letters[i - 1]];
        if (i - j > 1) out += "^" + std::to_string(i - j);
        i = j;
    }
    return out;
}

FiniteGroup cyclic(long n) {
    if (n < 1) throw gg_error("cyclic: order must be >= 1");
    if (n == 1) return trivial_group();
    if (n > 4096) throw budget_error("cyclic: table too large");
    int N = (int)n;
    std::vector<std::vector<int>> mul(N, std::vector<int>(N));
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) mul[a][b] = (a + b) % N;
    FiniteGroup g = make_group(std::move(mul), {1}, {"a"});
    g.declared_invariants = {n};
    return g;
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
    FiniteGroup g;
    long n = (long)a.order * b.order;
    if (n > 4096) throw budget_error("direct_product: table too large");
    int N = (int)n;
    auto idx = [&](int x, int y) { return x * b.order + y; };
    std::vector<std::vector<int>> mul(N, std::vector<int>(N));
    for (int x1 = 0; x1 < a.order; ++x1)
        for (int y1 = 0; y1 < b.order; ++y1)
            for (int x2 = 0; x2 < a.order; ++x2)
                for (int y2 = 0; y2 < b.order; ++y2)
                    mul[idx(x1, y1)][idx(x2, y2)] = idx(a.mul[x1][x2], b.mul[y1][y2]);
    std::vector<int> gens;
    for (int x : a.gens) gens.push_back(idx(x, b.e));
    for (int y : b.gens) gens.push_back(idx(a.e, y));
    g = make_group(std::move(mul), gens, default_names(gens.size()));
    g.declared_invariants = a.declared_invariants;
    g.declared_invariants.insert(g.declared_invariants.end(),
                                 b.declared_invariants.begin(), b.declared_invariants.end());
    return g;
}

FiniteGroup abelian(const std::vector<long>& cyclic_orders) {
    FiniteGroup g = trivial_group();
    for (long m : cyclic_orders) {
        if (m < 1) throw gg_error("abelian: cyclic orders must be >= 1");
        if (m == 1) continue;
        g = (g.order == 1) ? cyclic(m) : direct_product(g, cyclic(m));
    }
    std::vector<long> kept;
    for (long m : cyclic_orders)
        if (m > 1) kept.push_back(m);
    g.declared_invariants = kept;
    return g;
}

std::vector<int> subgroup_closure(const FiniteGroup& g, std::vector<int> seed) {
    std::set<int> have{g.e};
    std::vector<int> queue{g.e};
    for (int s : seed)
        if (have.insert(s).second) queue.push_back(s);
    for (size_t q = 0; q < queue.size(); ++q)
        for (size_t r = 0; r < queue.size(); ++r) {  // closure under products
            int x = g.mul[queue[q]][queue[r]];
            if (have.insert(x).second) queue.push_back(x);
        }
    return {have.begin(), have.end()};
}

std::vector<int> commutator_subgroup(const FiniteGroup& g) {
    std::vector<int> seed;
    for (int a = 0; a < g.order; ++a)
        for (int b = 0; b < g.order; ++b) seed.push_back(g.comm(a, b));
    return subgroup_closure(g, seed);
}

std::vector<long> primes_of_group(const FiniteGroup& g) {
    return primes::factor_primes((long)g.order);
}

bool is_abelian(const FiniteGroup& g) {
    for (int a = 0; a < g.order; ++a)
        for (int b = a + 1; b < g.order; ++b)
            if (g.mul[a][b] != g.mul[b][a]) return false;
    return true;
}

bool is_nilpotent(const FiniteGroup& g) {
    for (long p : primes_of_group(g)) {
        std::vector<int> pelts;
        for (int a = 0; a < g.order; ++a) {
            int o = g.order_of(a);
            bool ppower = true;
            while (o > 1) {
                if (o % p) { ppower = false; break; }
                o /= (int)p;
            }
            if (ppower) pelts.push_back(a);
        }
        long target = primes::power_of(p, primes::valuation(g.order, p));
        if ((long)pelts.size() != target) return false;
        if ((long)subgroup_closure(g, pelts).size() != target) return false;
    }
    return true;
}

bool is_cyclic(const FiniteGroup& g) {
    for (int a = 0; a < g.order; ++a)
        if (g.order_of(a) == g.order) return true;
    return false;
}

std::vector<long> abelian_invariants(const FiniteGroup& g) {
    if (!is_abelian(g)) throw hypothesis_error("abelian_invariants: group is not abelian");
    // elementary divisors via subgroup sizes s_k = |{x : x^(p^k) = e}|
    std::map<long, std::vector<int>> cyclic_p_orders;  // p -> exponents, descending
    for (long p : primes_of_group(g)) {
        std::vector<int> counts;  // counts[k] = log_p s_k
        for (int k = 0;; ++k) {
            long pk = primes::power_of(p, k);
            int s = 0;
            for (int a = 0; a < g.order; ++a)
                if (g.power(a, pk) == g.e) ++s;
            int logs = 0;
            while (s > 1) { s /= (int)p; ++logs; }
            counts.push_back(logs);
            if (k > 0 && counts[k] == counts[k - 1]) break;
        }
        std::vector<int> exps;
        for (size_t k = 1; k < counts.size(); ++k) {
            int mult = counts[k] - counts[k - 1];  // # cyclic p-factors of order >= p^k
            for (int i = 0; i < mult; ++i) {
                if ((int)exps.size() < mult) exps.resize(mult, 0);
            }
            for (int i = 0; i < mult; ++i) exps[i] = (int)k;
        }
        if (!exps.empty()) cyclic_p_orders[p] = exps;
    }
    size_t len = 0;
    for (auto& [p, exps] : cyclic_p_orders) len = std::max(len, exps.size());
    std::vector<long> inv(len, 1);
    for (auto& [p, exps] : cyclic_p_orders)
        for (size_t i = 0; i < exps.size(); ++i)
            inv[i] *= primes::power_of(p, exps[i]);
    std::sort(inv.begin(), inv.end());  // ascending: m1 | m2 | ...
    return inv;
}

int rank_mod_p(const FiniteGroup& g, long p) {
    std::vector<int> seed = commutator_subgroup(g);
    for (int a = 0; a < g.order; ++a) seed.push_back(g.power(a, p));
    long sub = (long)subgroup_closure(g, seed).size();
    long quot = g.order / sub;
    int r = 0;
    while (quot > 1) {
        if (quot % p) throw invariant_error("rank_mod_p: quotient not elementary abelian");
        quot /= p;
        ++r;
    }
    return r;
}

int min_generators_group(const FiniteGroup& g) {
    if (!is_nilpotent(g))
        throw hypothesis_error("min_generators_group: group is not nilpotent");
    int d = 0;
    for (long p : primes_of_group(g)) d = std::max(d, rank_mod_p(g, p));
    return d;
}

GeneratingPrimes generating_primes(const FiniteGroup& g) {
    GeneratingPrimes out;
    if (g.order == 1) {
        out.all_primes = true;
        return out;
    }
    int d = min_generators_group(g);
    for (long p : primes_of_group(g))
        if (rank_mod_p(g, p) == d) out.primes.push_back(p);
    return out;
}

// ---- words ----

Word word_normalize(Word w) {
    std::vector<std::pair<int, long>> out;
    for (auto& s : w.syllables) {
        if (s.second == 0) continue;
        if (!out.empty() && out.back().first == s.first) {
            out.back().second += s.second;
            if (out.back().second == 0) out.pop_back();
        } else {
            out.push_back(s);
        }
    }
    w.syllables = std::move(out);
    return w;
}

Word word_mul(const Word& a, const Word& b) {
    Word w = a;
    w.syllables.insert(w.syllables.end(), b.syllables.begin(), b.syllables.end());
    return word_normalize(w);
}

Word word_inverse(const Word& a) {
    Word w;
    for (auto it = a.syllables.rbegin(); it != a.syllables.rend(); ++it)
        w.syllables.push_back({it->first, -it->second});
    return w;
}

Word word_power(const Word& a, long k) {
    Word base = (k >= 0) ? a : word_inverse(a);
    long n = std::abs(k);
    Word w;
    for (long i = 0; i < n; ++i) w = word_mul(w, base);
    return w;
}

Word word_commutator(const Word& a, const Word& b) {
    return word_mul(word_mul(a, b), word_mul(word_inverse(a), word_inverse(b)));
}

namespace {

struct WordParser {
    const std::string& s;
    const std::vector<std::string>& alphabet;
    size_t pos = 0;

    void skip() {
        while (pos < s.size() && (std::isspace((unsigned char)s[pos]) || s[pos] == '*')) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    long parse_int() {
        skip();
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
        if (pos == start) throw gg_error("word parse: expected integer at position " + std::to_string(start));
        return std::stol(s.substr(start, pos - start));
    }
    Word parse_atom() {
        skip();
        if (pos >= s.size()) throw gg_error("word parse: unexpected end of input");
        if (s[pos] == '(') {
            ++pos;
            Word w = parse_product(')');
            if (!eat(')')) throw gg_error("word parse: missing ')'");
            return w;
        }
        if (s[pos] == '[') {
            ++pos;
            Word u = parse_product(',');
            if (!eat(',')) throw gg_error("word parse: missing ',' in commutator");
            Word v = parse_product(']');
            if (!eat(']')) throw gg_error("word parse: missing ']'");
            return word_commutator(u, v);
        }
        size_t start = pos;
        if (!std::isalpha((unsigned char)s[pos]) && s[pos] != '_')
            throw gg_error(std::string("word parse: unexpected character '") + s[pos] + "'");
        ++pos;
        while (pos < s.size() && (std::isalnum((unsigned char)s[pos]) || s[pos] == '_')) ++pos;
        std::string name = s.substr(start, pos - start);
        auto it = std::find(alphabet.begin(), alphabet.end(), name);
        if (it == alphabet.end())
            throw gg_error("word parse: undeclared generator '" + name + "'");
        Word w;
        w.syllables.push_back({(int)(it - alphabet.begin()), 1});
        return w;
    }
    Word parse_factor() {
        Word w = parse_atom();
        skip();
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            w = word_power(w, parse_int());
        }
        return w;
    }
    Word parse_product(char stop) {
        Word w;
        for (;;) {
            skip();
            if (pos >= s.size() || s[pos] == stop || s[pos] == ')' || s[pos] == ']' || s[pos] == ',')
                break;
            w = word_mul(w, parse_factor());
        }
        return w;
    }
};

} // namespace

Word parse_word(const std::string& text, const std::vector<std::string>& alphabet) {
    WordParser p{text, alphabet};
    Word w = p.parse_product('\0');
    p.skip();
    if (p.pos != text.size())
        throw gg_error("word parse: trailing input at position " + std::to_string(p.pos));
    return word_normalize(w);
}

std::string word_to_string(const Word& w, const std::vector<std::string>& alphabet) {
    if (w.syllables.empty()) return "1";
    std::string out;
    for (auto& [l, e] : w.syllables) {
        if (!out.empty()) out += "*";
        out += alphabet.at(l);
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

Presentation natural_abelian_presentation(const std::vector<long>& cyclic_orders) {
    Presentation p;
    std::vector<long> orders;
    for (long m : cyclic_orders)
        if (m != 1) orders.push_back(m);
    static const char* pool = "xyzwvu";
    for (size_t i = 0; i < orders.size(); ++i)
        p.alphabet.push_back(i < 6 ? std::string(1, pool[i]) : "x" + std::to_string(i));
    for (size_t i = 0; i < orders.size(); ++i) {
        p.relator_text.push_back(p.alphabet[i] + "^" + std::to_string(orders[i]));
        p.relators.push_back(parse_word(p.relator_text.back(), p.alphabet));
    }
    for (size_t i = 0; i < orders.size(); ++i)
        for (size_t j = i + 1; j < orders.size(); ++j) {
            p.relator_text.push_back("[" + p.alphabet[i] + "," + p.alphabet[j] + "]");
            p.relators.push_back(parse_word(p.relator_text.back(), p.alphabet));
        }
    return p;
}

int eval_word(const FiniteGroup& g, const Word& w, const std::vector<int>& images) {
    int r = g.e;
    for (auto& [l, e] : w.syllables) {
        if (l < 0 || l >= (int)images.size())
            throw gg_error("eval_word: letter outside alphabet");
        r = g.mul[r][g.power(images[l], e)];
    }
    return r;
}

void validate_presentation(const FiniteGroup& g, const Presentation& p,
                           const std::vector<int>& images) {
    if (images.size() != p.alphabet.size())
        throw gg_error("presentation: generator images do not match alphabet");
    for (size_t i = 0; i < p.relators.size(); ++i)
        if (eval_word(g, p.relators[i], images) != g.e)
            throw gg_error("presentation: relator '" +
                           (i < p.relator_text.size() ? p.relator_text[i] : word_to_string(p.relators[i], p.alphabet)) +
                           "' does not vanish");
    if ((long)subgroup_closure(g, images).size() != g.order)
        throw gg_error("presentation: images do not generate the group");
}

std::vector<int> default_images(const FiniteGroup& g, const Presentation& p) {
    if (p.alphabet.size() != g.gens.size())
        throw gg_error("presentation: cannot infer images (alphabet size != generator count)");
    return g.gens;
}

// ---- factor specs ----

FactorSpec finite_factor(FiniteGroup g, std::string label) {
    FactorSpec f;
    f.kind = FactorSpec::Kind::Finite;
    f.group = std::move(g);
    f.label = std::move(label);
    return f;
}

FactorSpec cyclic_times_z_factor(long n) {
    if (n < 2) throw gg_error("cyclic_times_z_factor: need n >= 2");
    FactorSpec f;
    f.kind = FactorSpec::Kind::FiniteCyclicTimesZ;
    f.group = cyclic(n);
    f.cyclic_order = n;
    f.label = "C" + std::to_string(n) + "xZ";
    return f;
}

FactorSpec nilpotent_product_factor(FiniteGroup g, int rank, std::string label) {
    if (rank < 0) throw gg_error("nilpotent_product_factor: rank must be >= 0");
    if (!is_nilpotent(g))
        throw hypothesis_error("nilpotent_product_factor: finite part is not nilpotent");
    FactorSpec f;
    f.kind = FactorSpec::Kind::NilpotentProduct;
    f.group = std::move(g);
    f.free_rank = rank;
    f.label = std::move(label);
    return f;
}

int factor_min_generators(const FactorSpec& f) {
    switch (f.kind) {
        case FactorSpec::Kind::Finite:
            return min_generators_group(f.group);
        case FactorSpec::Kind::FiniteCyclicTimesZ:
            return 2;
        case FactorSpec::Kind::NilpotentProduct:
            return min_generators_group(f.group) + f.free_rank;
    }
    throw invariant_error("factor_min_generators: bad kind");
}

std::vector<long> factor_group_primes(const FactorSpec& f) {
    return primes_of_group(f.group);
}

} // namespace gengap::groups
