// Rewriting-engine core: exact Q(v) scalars, K-twisted free algebra
// elements, and degree-truncated diamond-lemma completion.
//
// Scalars are Laurent polynomials over __int128 (overflow-checked)
// divided by an integer times a product of factors from a grow-only
// global basis (seeded with v^2-1 and v^2+1), so common-denominator
// arithmetic is exponent bookkeeping rather than polynomial gcd.
//
// Elements are hash maps keyed by [kexp bytes][B-word bytes]; the
// Cartan commutation K_l B_i = v^(pair(l,i)) B_i K_l is baked into
// multiplication.  Normal forms fold through the memoized table
// mulgen(u, g) = nf((irreducible u) * B_g) one letter at a time.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <deque>
#include <map>
#include <memory>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace py = pybind11;

using i128 = __int128;

// ---------------------------------------------------------------------------
// exceptions
// ---------------------------------------------------------------------------

struct TruncEx : std::exception {
    int degree, bound;
    std::string msg;
    TruncEx(int d, int b) : degree(d), bound(b) {
        msg = "needed degree " + std::to_string(d) + " > truncation bound " +
              std::to_string(b);
    }
    const char *what() const noexcept override { return msg.c_str(); }
};

struct CompletionEx : std::exception {
    std::string msg;
    explicit CompletionEx(std::string m) : msg(std::move(m)) {}
    const char *what() const noexcept override { return msg.c_str(); }
};

static inline i128 addchk(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("coefficient overflow");
    return r;
}
static inline i128 subchk(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("coefficient overflow");
    return r;
}
static inline i128 mulchk(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("coefficient overflow");
    return r;
}
static inline i128 igcd(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// ---------------------------------------------------------------------------
// Laurent polynomials: dense run c[0..] starting at exponent lo, trimmed
// ---------------------------------------------------------------------------

struct Poly {
    int lo = 0;
    std::vector<i128> c;

    bool zero() const { return c.empty(); }
    bool is_one() const { return lo == 0 && c.size() == 1 && c[0] == 1; }
};

static void ptrim(Poly &p) {
    size_t b = 0, e = p.c.size();
    while (e > b && p.c[e - 1] == 0) --e;
    while (b < e && p.c[b] == 0) ++b;
    if (b == e) {
        p.c.clear();
        p.lo = 0;
        return;
    }
    if (b > 0) p.c.erase(p.c.begin(), p.c.begin() + b);
    p.c.resize(e - b);
    p.lo += (int)b;
}

static Poly padd(const Poly &a, const Poly &b) {
    if (a.zero()) return b;
    if (b.zero()) return a;
    int lo = std::min(a.lo, b.lo);
    int hi = std::max(a.lo + (int)a.c.size(), b.lo + (int)b.c.size());
    Poly r;
    r.lo = lo;
    r.c.assign(hi - lo, 0);
    for (size_t i = 0; i < a.c.size(); ++i) r.c[a.lo - lo + i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i)
        r.c[b.lo - lo + i] = addchk(r.c[b.lo - lo + i], b.c[i]);
    ptrim(r);
    return r;
}

static Poly pneg(const Poly &a) {
    Poly r = a;
    for (auto &x : r.c) x = -x;
    return r;
}

static Poly pmul(const Poly &a, const Poly &b) {
    if (a.zero() || b.zero()) return Poly{};
    Poly r;
    r.lo = a.lo + b.lo;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        i128 ai = a.c[i];
        if (!ai) continue;
        for (size_t j = 0; j < b.c.size(); ++j) {
            if (!b.c[j]) continue;
            r.c[i + j] = addchk(r.c[i + j], mulchk(ai, b.c[j]));
        }
    }
    ptrim(r);
    return r;
}

static Poly pscale(const Poly &a, i128 k) {
    if (k == 0) return Poly{};
    Poly r = a;
    for (auto &x : r.c) x = mulchk(x, k);
    return r;
}

// exact division; returns false if b does not divide a
static bool pdivexact(const Poly &a, const Poly &b, Poly &out) {
    if (a.zero()) {
        out = Poly{};
        return true;
    }
    if (b.zero()) throw std::runtime_error("division by zero polynomial");
    int la = (int)a.c.size(), lb = (int)b.c.size();
    if (la < lb) return false;
    std::vector<i128> r = a.c;
    std::vector<i128> q(la - lb + 1, 0);
    i128 lead = b.c.back();
    for (int i = la - lb; i >= 0; --i) {
        i128 t = r[i + lb - 1];
        if (t == 0) continue;
        if (t % lead) return false;
        i128 qq = t / lead;
        q[i] = qq;
        for (int j = 0; j < lb; ++j) r[i + j] = subchk(r[i + j], mulchk(qq, b.c[j]));
    }
    for (int i = 0; i < lb - 1; ++i)
        if (r[i]) return false;
    out.lo = a.lo - b.lo;
    out.c = std::move(q);
    ptrim(out);
    return true;
}

// cheap necessary condition for monic-divisor exact division: synthetic
// division with wrapping uint64 arithmetic (divisor lead must be +-1, so it is
// invertible mod 2^64; nonzero wrapped remainder => definitely not divisible)
static bool pdivcheck64(const Poly &a, const Poly &b) {
    int la = (int)a.c.size(), lb = (int)b.c.size();
    if (la < lb) return false;
    uint64_t lead = (uint64_t)b.c.back();  // +-1
    static thread_local std::vector<uint64_t> r;
    r.resize(la);
    for (int i = 0; i < la; ++i) r[i] = (uint64_t)a.c[i];
    for (int i = la - lb; i >= 0; --i) {
        uint64_t t = r[i + lb - 1];
        if (!t) continue;
        uint64_t qq = (lead == 1) ? t : (uint64_t)(0 - t);
        for (int j = 0; j < lb - 1; ++j) r[i + j] -= qq * (uint64_t)b.c[j];
        r[i + lb - 1] = 0;
    }
    for (int i = 0; i < lb - 1; ++i)
        if (r[i]) return false;
    return true;
}

static bool pdivtry(const Poly &a, const Poly &b, Poly &out) {
    if (a.zero()) {
        out = Poly{};
        return true;
    }
    if ((b.c.back() == 1 || b.c.back() == -1) && !pdivcheck64(a, b)) return false;
    return pdivexact(a, b, out);
}

static i128 pcontent(const Poly &a) {
    i128 g = 0;
    for (auto x : a.c) {
        g = igcd(g, x);
        if (g == 1) break;
    }
    return g;
}

// ---------------------------------------------------------------------------
// scalars: num / (dc * prod basis[k]^de[k])
// ---------------------------------------------------------------------------

static std::vector<Poly> g_basis = {
    Poly{0, {-1, 0, 1}},  // v^2 - 1
    Poly{0, {1, 0, 1}},   // v^2 + 1
};
static std::map<std::vector<uint16_t>, Poly> g_denpoly_cache;

static const Poly &denpoly(const std::vector<uint16_t> &de) {
    auto it = g_denpoly_cache.find(de);
    if (it != g_denpoly_cache.end()) return it->second;
    Poly p{0, {1}};
    for (size_t k = 0; k < de.size(); ++k)
        for (int j = 0; j < de[k]; ++j) p = pmul(p, g_basis[k]);
    return g_denpoly_cache.emplace(de, std::move(p)).first->second;
}

struct Coeff {
    Poly num;
    long long dc = 1;
    std::vector<uint16_t> de;

    bool zero() const { return num.zero(); }
};

static void cnormalize(Coeff &x) {
    if (x.num.zero()) {
        x.dc = 1;
        x.de.clear();
        return;
    }
    for (size_t k = 0; k < x.de.size(); ++k) {
        while (x.de[k]) {
            Poly q;
            if (pdivtry(x.num, g_basis[k], q)) {
                x.num = std::move(q);
                x.de[k]--;
            } else
                break;
        }
    }
    while (!x.de.empty() && x.de.back() == 0) x.de.pop_back();
    if (x.dc != 1) {
        i128 g = igcd((i128)x.dc, pcontent(x.num));
        if (g > 1) {
            for (auto &c : x.num.c) c /= g;
            x.dc /= (long long)g;
        }
    }
}

static Coeff czero() { return Coeff{}; }
static Coeff cint(long long n) { return n ? Coeff{Poly{0, {n}}, 1, {}} : Coeff{}; }
static Coeff cvpow(int e) { return Coeff{Poly{e, {1}}, 1, {}}; }

static Coeff cneg(const Coeff &a) { return Coeff{pneg(a.num), a.dc, a.de}; }

static Coeff cadd(const Coeff &a, const Coeff &b) {
    if (a.zero()) return b;
    if (b.zero()) return a;
    if (a.dc == b.dc && a.de == b.de) {
        Coeff r{padd(a.num, b.num), a.dc, a.de};
        if (r.num.zero()) return Coeff{};
        return r;
    }
    long long g = (long long)igcd(a.dc, b.dc);
    long long dc = a.dc / g * b.dc;
    size_t nk = std::max(a.de.size(), b.de.size());
    std::vector<uint16_t> de(nk, 0), d1(nk, 0), d2(nk, 0);
    for (size_t k = 0; k < nk; ++k) {
        uint16_t ea = k < a.de.size() ? a.de[k] : 0;
        uint16_t eb = k < b.de.size() ? b.de[k] : 0;
        de[k] = std::max(ea, eb);
        d1[k] = de[k] - ea;
        d2[k] = de[k] - eb;
    }
    while (!d1.empty() && d1.back() == 0) d1.pop_back();
    while (!d2.empty() && d2.back() == 0) d2.pop_back();
    Poly n1 = pscale(pmul(a.num, denpoly(d1)), dc / a.dc);
    Poly n2 = pscale(pmul(b.num, denpoly(d2)), dc / b.dc);
    while (!de.empty() && de.back() == 0) de.pop_back();
    Coeff r{padd(n1, n2), dc, std::move(de)};
    if (r.num.zero()) return Coeff{};
    cnormalize(r);
    return r;
}

// accumulate b into a without allocating when the shapes line up
static void cadd_into(Coeff &a, const Coeff &b) {
    if (b.zero()) return;
    if (a.zero()) {
        a = b;
        return;
    }
    if (a.dc == b.dc && a.de == b.de && b.num.lo >= a.num.lo &&
        b.num.lo + (int)b.num.c.size() <= a.num.lo + (int)a.num.c.size()) {
        int off = b.num.lo - a.num.lo;
        for (size_t i = 0; i < b.num.c.size(); ++i)
            a.num.c[off + i] = addchk(a.num.c[off + i], b.num.c[i]);
        ptrim(a.num);
        if (a.num.zero()) a = Coeff{};
        return;
    }
    a = cadd(a, b);
}

static Coeff csub(const Coeff &a, const Coeff &b) { return cadd(a, cneg(b)); }

static Coeff cmul(const Coeff &a, const Coeff &b) {
    if (a.zero() || b.zero()) return Coeff{};
    Coeff r;
    r.num = pmul(a.num, b.num);
    r.dc = a.dc;
    if (b.dc != 1) {
        i128 p = mulchk((i128)a.dc, (i128)b.dc);
        if (p > INT64_MAX) throw std::overflow_error("denominator overflow");
        r.dc = (long long)p;
    }
    if (a.de.empty())
        r.de = b.de;
    else if (b.de.empty())
        r.de = a.de;
    else {
        size_t nk = std::max(a.de.size(), b.de.size());
        r.de.assign(nk, 0);
        for (size_t k = 0; k < nk; ++k)
            r.de[k] = (k < a.de.size() ? a.de[k] : 0) + (k < b.de.size() ? b.de[k] : 0);
    }
    if (!r.de.empty() || r.dc != 1) cnormalize(r);
    return r;
}

// multiply by v^e in place
static inline void cvshift(Coeff &a, int e) {
    if (!a.num.zero()) a.num.lo += e;
}

// build a coefficient from an exact fraction, factoring the denominator
// over the global basis (extending the basis when a new factor shows up)
static Coeff cfrac(Poly num, Poly den) {
    if (den.zero()) throw std::runtime_error("zero denominator");
    if (num.zero()) return Coeff{};
    Coeff r;
    num.lo -= den.lo;
    den.lo = 0;
    if (den.c.size() > 1) {
        i128 ct = pcontent(den);
        if (den.c.back() < 0) ct = -ct;
        if (ct != 1) {
            for (auto &c : den.c) c /= ct;
            num = {num.lo, num.c};
            // fold the integer content into dc below
            if (ct > INT64_MAX || -ct > INT64_MAX) throw std::overflow_error("denominator overflow");
            r.dc = (long long)ct;
        }
        bool progress = true;
        while (den.c.size() > 1 && progress) {
            progress = false;
            for (size_t k = 0; k < g_basis.size(); ++k) {
                Poly q;
                while (den.c.size() > 1 && pdivtry(den, g_basis[k], q)) {
                    den = q;
                    if (r.de.size() <= k) r.de.resize(k + 1, 0);
                    r.de[k]++;
                    progress = true;
                }
            }
            if (den.c.size() > 1 && !progress) {
                // leftover primitive factor: register as new basis element
                g_basis.push_back(den);
                r.de.resize(g_basis.size(), 0);
                r.de.back() = 1;
                den = Poly{0, {1}};
            }
        }
    }
    if (den.c.size() == 1) {
        i128 d = den.c[0];
        num.lo -= den.lo;
        if (d < 0) {
            d = -d;
            num = pneg(num);
        }
        i128 p = mulchk((i128)r.dc, d);
        if (p > INT64_MAX) throw std::overflow_error("denominator overflow");
        r.dc = (long long)p;
    }
    r.num = std::move(num);
    if (r.dc < 0) {
        r.dc = -r.dc;
        r.num = pneg(r.num);
    }
    cnormalize(r);
    return r;
}

static Coeff cinv(const Coeff &a) {
    if (a.zero()) throw std::runtime_error("inverse of zero scalar");
    Poly num = pscale(denpoly(a.de), a.dc);
    return cfrac(std::move(num), a.num);
}

static Coeff cdiv(const Coeff &a, const Coeff &b) { return cmul(a, cinv(b)); }

static Coeff cqint(int m) {
    // [m] = (v^m - v^-m)/(v - v^-1) = v^(m-1) + v^(m-3) + ... + v^(1-m)
    if (m == 0) return Coeff{};
    int s = m < 0 ? -1 : 1;
    int n = m * s;
    Poly p;
    p.lo = 1 - n;
    p.c.assign(2 * n - 1, 0);
    for (int j = 0; j < n; ++j) p.c[2 * j] = s;
    return Coeff{std::move(p), 1, {}};
}

static bool ceq(const Coeff &a, const Coeff &b) { return csub(a, b).zero(); }

// ---------------------------------------------------------------------------
// elements: key = [2n bytes of little-endian int16 kexp][B-word bytes]
// ---------------------------------------------------------------------------

using Key = std::string;
using Elem = std::unordered_map<Key, Coeff>;
using ElemPtr = std::shared_ptr<Elem>;

struct PyCo {
    Coeff c;
};

struct PyEl {
    ElemPtr p;
};

static inline void acc(Elem &d, const Key &key, Coeff c) {
    auto it = d.find(key);
    if (it == d.end()) {
        if (!c.zero()) d.emplace(key, std::move(c));
        return;
    }
    cadd_into(it->second, c);
    if (it->second.zero()) d.erase(it);
}

struct Engine {
    int n;        // number of nodes
    int koff;     // key offset = 2*n bytes of kexp
    int D;        // truncation bound on B-degree
    std::vector<std::vector<int>> pair_;  // khalf pairing matrix
    std::string zk;                       // zero kexp prefix

    // std::map: stable references across insertion, and transparent
    // comparator allows allocation-free string_view lookups
    std::map<std::string, Elem, std::less<>> rules;  // lhs word -> rhs element
    std::vector<std::string> rule_order;
    std::vector<int> rule_lens;  // sorted distinct lhs lengths
    std::unordered_map<std::string, Elem> mg;  // (u + g) -> nf(u * B_g)
    size_t memo_cap = 8'000'000;

    struct CP {
        int deg;
        long seq;
        int kind;  // 0 = overlap, 1 = containment
        std::string l1, l2;
        int k;
        bool operator>(const CP &o) const {
            return deg != o.deg ? deg > o.deg : seq > o.seq;
        }
    };
    std::priority_queue<CP, std::vector<CP>, std::greater<CP>> heap;
    std::vector<CP> deferred;
    long seq = 0;
    int confluent_upto = 0;

    Engine(std::vector<std::vector<int>> pair, int trunc)
        : n((int)pair.size()), koff(2 * (int)pair.size()), D(trunc), pair_(std::move(pair)) {
        if (D < 2) throw std::runtime_error("truncation degree must be >= 2");
        zk.assign(koff, 0);
    }

    // -- key helpers --------------------------------------------------
    inline bool kzero(const Key &key) const {
        return std::memcmp(key.data(), zk.data(), koff) == 0;
    }
    inline int kget(const Key &key, int i) const {
        int16_t v;
        std::memcpy(&v, key.data() + 2 * i, 2);
        return v;
    }
    Key make_key(const std::vector<int> &kexp, const std::string &w) const {
        Key key(koff + w.size(), 0);
        for (int i = 0; i < n; ++i) {
            int16_t v = (int16_t)kexp[i];
            if ((int)v != kexp[i]) throw std::overflow_error("K-exponent overflow");
            std::memcpy(&key[2 * i], &v, 2);
        }
        std::memcpy(&key[koff], w.data(), w.size());
        return key;
    }
    // combine kexp of two keys (words handled separately)
    inline void kadd_into(Key &dst, const Key &src) const {
        for (int i = 0; i < koff; i += 2) {
            int16_t a, b;
            std::memcpy(&a, dst.data() + i, 2);
            std::memcpy(&b, src.data() + i, 2);
            int s = (int)a + (int)b;
            int16_t v = (int16_t)s;
            if ((int)v != s) throw std::overflow_error("K-exponent overflow");
            std::memcpy(&dst[i], &v, 2);
        }
    }

    inline int wlen(const Key &key) const { return (int)key.size() - koff; }

    inline int twistg(const Key &key, int g) const {
        int e = 0;
        for (int i = 0; i < n; ++i) {
            int16_t v;
            std::memcpy(&v, key.data() + 2 * i, 2);
            if (v) e += (int)v * pair_[i][g];
        }
        return e;
    }
    inline int twistw(const Key &key, const char *w, int len) const {
        int e = 0;
        for (int i = 0; i < n; ++i) {
            int16_t v;
            std::memcpy(&v, key.data() + 2 * i, 2);
            if (v) {
                int s = 0;
                for (int j = 0; j < len; ++j) s += pair_[i][(unsigned char)w[j]];
                e += (int)v * s;
            }
        }
        return e;
    }

    // -- element construction -----------------------------------------
    Elem el_word(const std::string &w) const {
        Elem e;
        e.emplace(zk + w, cint(1));
        return e;
    }
    Elem el_k(const std::vector<int> &kexp) const {
        Elem e;
        e.emplace(make_key(kexp, ""), cint(1));
        return e;
    }
    Elem el_one() const {
        Elem e;
        e.emplace(zk, cint(1));
        return e;
    }

    Elem scal(const Coeff &c, const Elem &x) const {
        Elem out;
        if (c.zero()) return out;
        out.reserve(x.size());
        for (auto &kv : x) out.emplace(kv.first, cmul(c, kv.second));
        return out;
    }

    Elem eadd(const std::vector<const Elem *> &els) const {
        Elem out;
        for (auto *x : els)
            for (auto &kv : *x) acc(out, kv.first, kv.second);
        return out;
    }

    Elem esub(const Elem &x, const Elem &y) const {
        Elem out = x;
        for (auto &kv : y) acc(out, kv.first, cneg(kv.second));
        return out;
    }

    // free product with K-twist, no normal-forming
    Elem mul_raw(const Elem &x, const Elem &y) const {
        Elem out;
        for (auto &[k1, c1] : x) {
            bool k1z = kzero(k1);
            int l1 = wlen(k1);
            for (auto &[k2, c2] : y) {
                Coeff c = cmul(c1, c2);
                int l2 = wlen(k2);
                if (!k1z && l2) {
                    int e = twistw(k1, k2.data() + koff, l2);
                    cvshift(c, e);
                }
                Key key;
                key.reserve(koff + l1 + l2);
                key.append(k1, 0, (size_t)(koff + l1));
                key.append(k2, koff, (size_t)l2);
                if (!k1z && !kzero(k2)) {
                    kadd_into(key, k2);
                } else if (k1z && !kzero(k2)) {
                    std::memcpy(&key[0], k2.data(), koff);
                }
                acc(out, key, std::move(c));
            }
        }
        return out;
    }

    // -- straightening -------------------------------------------------
    const Elem &mulgen(std::string_view u, unsigned char g) {
        std::string w;
        w.reserve(u.size() + 1);
        w.assign(u);
        w.push_back((char)g);
        auto hit = mg.find(w);
        if (hit != mg.end()) return hit->second;
        if ((int)w.size() > D) throw TruncEx((int)w.size(), D);
        int nw = (int)w.size();
        int L = 0;
        for (int length : rule_lens) {
            if (length <= nw &&
                rules.find(std::string_view(w.data() + nw - length, length)) != rules.end()) {
                L = length;
                break;
            }
        }
        Elem res;
        if (L == 0) {
            res.emplace(zk + w, cint(1));
        } else {
            // std::map references stay valid while recursion inserts rules
            const Elem &rhs =
                rules.find(std::string_view(w.data() + nw - L, L))->second;
            Elem pre;
            pre.emplace(zk + w.substr(0, nw - L), cint(1));
            for (auto &[k2, c2] : rhs) {
                int l2 = wlen(k2);
                Elem sub = mulword(pre, std::string_view(k2).substr(koff, l2));
                bool k2z = kzero(k2);
                static thread_local Key keybuf;
                for (auto &[k3, c3] : sub) {
                    keybuf.assign(k3);
                    if (!k2z) {
                        if (kzero(k3))
                            std::memcpy(&keybuf[0], k2.data(), koff);
                        else
                            kadd_into(keybuf, k2);
                    }
                    acc(res, keybuf, cmul(c2, c3));
                }
            }
        }
        if (mg.size() < memo_cap) return mg.emplace(std::move(w), std::move(res)).first->second;
        static Elem scratch;
        scratch = std::move(res);
        return scratch;
    }

    Elem mulword(Elem el, std::string_view word) {
        static thread_local Key keybuf;
        for (unsigned char g : word) {
            Elem nxt;
            for (auto &[k, c0] : el) {
                bool kz = kzero(k);
                Coeff c = c0;
                if (!kz) {
                    int e = twistg(k, g);
                    cvshift(c, e);
                }
                const Elem &prod = mulgen(std::string_view(k).substr(koff), g);
                for (auto &[k2, c2] : prod) {
                    keybuf.assign(k2);
                    if (!kz) {
                        if (kzero(k2))
                            std::memcpy(&keybuf[0], k.data(), koff);
                        else
                            kadd_into(keybuf, k);
                    }
                    acc(nxt, keybuf, cmul(c, c2));
                }
            }
            el = std::move(nxt);
        }
        return el;
    }

    Elem nf(const Elem &x) {
        Elem out;
        Elem one = el_one();
        for (auto &[key, c] : x) {
            int lw = wlen(key);
            if (lw > D) throw TruncEx(lw, D);
            Elem part = lw ? mulword(one, std::string_view(key).substr(koff)) : one;
            bool kz = kzero(key);
            static thread_local Key keybuf;
            for (auto &[k2, c2] : part) {
                keybuf.assign(k2);
                if (!kz) {
                    if (kzero(k2))
                        std::memcpy(&keybuf[0], key.data(), koff);
                    else
                        kadd_into(keybuf, key);
                }
                acc(out, keybuf, cmul(c, c2));
            }
        }
        return out;
    }

    Elem mul2(const Elem &a, const Elem &y) {
        Elem out = nf(a);
        Elem nxt;
        for (auto &[k2, c2] : y) {
            int l2 = wlen(k2);
            Elem part = l2 ? mulword(out, std::string_view(k2).substr(koff, l2)) : out;
            bool k2z = kzero(k2);
            static thread_local Key keybuf;
            for (auto &[k1, c1] : part) {
                keybuf.assign(k1);
                if (!k2z) {
                    if (kzero(k1))
                        std::memcpy(&keybuf[0], k2.data(), koff);
                    else
                        kadd_into(keybuf, k2);
                }
                acc(nxt, keybuf, cmul(c1, c2));
            }
        }
        return nxt;
    }

    Elem qbracket(const Elem &a, const Elem &b, const Coeff &u) {
        Elem ab = mul2(a, b);
        Elem ba = scal(u, mul2(b, a));
        return esub(ab, ba);
    }

    bool is_zero(const Elem &x) { return nf(x).empty(); }

    int bdegree(const Elem &x) const {
        int d = 0;
        for (auto &kv : x) d = std::max(d, wlen(kv.first));
        return d;
    }

    // -- completion ----------------------------------------------------
    void orient(const Elem &el, std::string &lhs, Elem &rhs) const {
        if (el.empty()) throw CompletionEx("cannot orient the zero element");
        int maxlen = 0;
        for (auto &kv : el) maxlen = std::max(maxlen, wlen(kv.first));
        std::string lw;
        for (auto &kv : el) {
            if (wlen(kv.first) == maxlen) {
                std::string w = kv.first.substr(koff);
                if (w > lw) lw = w;
            }
        }
        const Key *leadkey = nullptr;
        int nlead = 0;
        for (auto &kv : el) {
            if (wlen(kv.first) == maxlen && kv.first.compare(koff, std::string::npos, lw) == 0) {
                leadkey = &kv.first;
                nlead++;
            }
        }
        if (nlead != 1)
            throw CompletionEx("leading word has non-monomial K-coefficient; cannot invert");
        const Coeff &c0 = el.at(*leadkey);
        bool muz = kzero(*leadkey);
        rhs.clear();
        for (auto &[key, cc] : el) {
            if (wlen(key) == maxlen && key.compare(koff, std::string::npos, lw) == 0) continue;
            Key kk = key;
            if (!muz) {
                for (int i = 0; i < koff; i += 2) {
                    int16_t a, b;
                    std::memcpy(&a, key.data() + i, 2);
                    std::memcpy(&b, leadkey->data() + i, 2);
                    int16_t v = (int16_t)(a - b);
                    std::memcpy(&kk[i], &v, 2);
                }
            }
            rhs.emplace(std::move(kk), cneg(cdiv(cc, c0)));
        }
        lhs = lw;
    }

    void add_rule(const std::string &lhs, Elem rhs) {
        rules.emplace(lhs, std::move(rhs));
        rule_order.push_back(lhs);
        bool have = false;
        for (int L : rule_lens)
            if (L == (int)lhs.size()) have = true;
        if (!have) {
            rule_lens.push_back((int)lhs.size());
            std::sort(rule_lens.begin(), rule_lens.end());
        }
        purge_cache(lhs);
        enqueue_overlaps(lhs);
    }

    void purge_cache(const std::string &lhs) {
        size_t L = lhs.size();
        std::vector<const std::string *> drop;
        for (auto &kv : mg) {
            // key is u + g, a full word
            if (kv.first.size() >= L && kv.first.find(lhs) != std::string::npos) {
                drop.push_back(&kv.first);
                continue;
            }
            for (auto &term : kv.second) {
                if ((size_t)wlen(term.first) >= L &&
                    term.first.find(lhs, koff) != std::string::npos) {
                    drop.push_back(&kv.first);
                    break;
                }
            }
        }
        for (auto *k : drop) mg.erase(*k);
    }

    void enqueue_overlaps(const std::string &nw) {
        for (auto &old : rule_order) {
            enqueue_pair(old, nw);
            if (old != nw) enqueue_pair(nw, old);
        }
    }

    void enqueue_pair(const std::string &l1, const std::string &l2) {
        int n1 = (int)l1.size(), n2 = (int)l2.size();
        for (int k = 1; k < std::min(n1, n2); ++k) {
            if (l1.compare(n1 - k, k, l2, 0, k) == 0) {
                heap.push(CP{n1 + n2 - k, ++seq, 0, l1, l2, k});
            }
        }
        if (n2 < n1) {
            size_t start = 0;
            while (true) {
                size_t t = l1.find(l2, start);
                if (t == std::string::npos) break;
                heap.push(CP{n1, ++seq, 1, l1, l2, (int)t});
                start = t + 1;
            }
        }
    }

    Elem spoly(const CP &cp) {
        auto it1 = rules.find(cp.l1);
        auto it2 = rules.find(cp.l2);
        if (it1 == rules.end() || it2 == rules.end()) return Elem{};
        Elem a, b;
        if (cp.kind == 0) {
            a = mul_raw(it1->second, el_word(cp.l2.substr(cp.k)));
            b = mul_raw(el_word(cp.l1.substr(0, cp.l1.size() - cp.k)), it2->second);
        } else {
            a = it1->second;
            b = mul_raw(mul_raw(el_word(cp.l1.substr(0, cp.k)), it2->second),
                        el_word(cp.l1.substr(cp.k + cp.l2.size())));
        }
        return nf(esub(a, b));
    }

    bool has_other_match(const std::string &w, const std::string &l1,
                         const std::string &l2) const {
        int nw = (int)w.size();
        int p1 = 0, L1 = (int)l1.size();
        int p2 = nw - (int)l2.size(), L2 = (int)l2.size();
        for (int p = 0; p < nw; ++p) {
            for (int L : rule_lens) {
                if (p + L > nw) break;
                if ((p != p1 || L != L1) && (p != p2 || L != L2) &&
                    rules.find(std::string_view(w.data() + p, L)) != rules.end())
                    return true;
            }
        }
        return false;
    }

    void drain(int Dmax) {
        while (!heap.empty() && heap.top().deg <= Dmax) {
            CP cp = heap.top();
            heap.pop();
            if (cp.kind == 0) {
                std::string w = cp.l1 + cp.l2.substr(cp.k);
                if (has_other_match(w, cp.l1, cp.l2)) {
                    deferred.push_back(cp);
                    continue;
                }
            }
            Elem diff = spoly(cp);
            if (!diff.empty()) {
                std::string lhs;
                Elem rhs;
                orient(diff, lhs, rhs);
                add_rule(lhs, std::move(rhs));
            }
        }
    }

    // Aho-Corasick count of rule-avoiding words per degree 1..dmax
    std::vector<long long> count_irreducible(int dmax) const {
        std::vector<std::unordered_map<int, int>> go(1);
        std::vector<int> fail(1, 0);
        std::vector<char> bad(1, 0);
        for (auto &kv : rules) {
            int s = 0;
            for (unsigned char ch : kv.first) {
                auto it = go[s].find(ch);
                int nxt;
                if (it == go[s].end()) {
                    go.push_back({});
                    fail.push_back(0);
                    bad.push_back(0);
                    nxt = (int)go.size() - 1;
                    go[s][ch] = nxt;
                } else
                    nxt = it->second;
                s = nxt;
            }
            bad[s] = 1;
        }
        std::vector<int> bfs;
        std::deque<int> dq;
        for (auto &kv : go[0]) dq.push_back(kv.second);
        while (!dq.empty()) {
            int s = dq.front();
            dq.pop_front();
            bfs.push_back(s);
            for (auto &kv : go[s]) {
                int ch = kv.first, t = kv.second;
                dq.push_back(t);
                int f = fail[s];
                while (f && !go[f].count(ch)) f = fail[f];
                auto it = go[f].find(ch);
                int g = it == go[f].end() ? 0 : it->second;
                fail[t] = g != t ? g : 0;
                if (bad[fail[t]]) bad[t] = 1;
            }
        }
        int ns = (int)go.size();
        std::vector<std::vector<int>> delta(ns, std::vector<int>(n, 0));
        for (int ch = 0; ch < n; ++ch) {
            auto it = go[0].find(ch);
            delta[0][ch] = it == go[0].end() ? 0 : it->second;
        }
        for (int s : bfs)
            for (int ch = 0; ch < n; ++ch) {
                auto it = go[s].find(ch);
                delta[s][ch] = it != go[s].end() ? it->second : delta[fail[s]][ch];
            }
        std::vector<long long> vec(ns, 0), counts;
        vec[0] = 1;
        for (int d = 0; d < dmax; ++d) {
            std::vector<long long> nw(ns, 0);
            for (int s = 0; s < ns; ++s) {
                if (!vec[s]) continue;
                for (int ch = 0; ch < n; ++ch) {
                    int t = delta[s][ch];
                    if (!bad[t]) nw[t] += vec[s];
                }
            }
            vec = std::move(nw);
            long long tot = 0;
            for (auto x : vec) tot += x;
            counts.push_back(tot);
        }
        return counts;
    }

    void complete(int upto, const std::vector<long long> &oracle) {
        if (upto > D) D = upto;
        if (upto <= confluent_upto) return;
        drain(upto);
        while (true) {
            auto counts = count_irreducible(upto);
            int bad_d = 0;
            for (int d = 1; d <= upto; ++d) {
                if (counts[d - 1] != oracle[d - 1]) {
                    bad_d = d;
                    break;
                }
            }
            if (!bad_d) break;
            std::vector<CP> pending, rest;
            for (auto &cp : deferred)
                (cp.deg <= bad_d ? pending : rest).push_back(cp);
            if (pending.empty())
                throw CompletionEx(
                    "graded certificate failed at degree " + std::to_string(bad_d) + ": " +
                    std::to_string(counts[bad_d - 1]) + " irreducible words, oracle says " +
                    std::to_string(oracle[bad_d - 1]));
            deferred = std::move(rest);
            for (auto &cp : pending) {
                Elem diff = spoly(cp);
                if (!diff.empty()) {
                    std::string lhs;
                    Elem rhs;
                    orient(diff, lhs, rhs);
                    add_rule(lhs, std::move(rhs));
                }
            }
            drain(upto);
        }
        confluent_upto = upto;
    }
};

// ---------------------------------------------------------------------------
// bindings
// ---------------------------------------------------------------------------

static py::object i128_to_py(i128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? (unsigned __int128)(-v) : (unsigned __int128)v;
    uint64_t lo = (uint64_t)u, hi = (uint64_t)(u >> 64);
    py::object r = py::cast(hi);
    r = r.attr("__lshift__")(64).attr("__add__")(py::cast(lo));
    if (neg) r = r.attr("__neg__")();
    return r;
}

static i128 i128_from_pair(int64_t hi, uint64_t lo) {
    return ((i128)hi << 64) | (i128)lo;
}

static py::tuple co_parts(const PyCo &a) {
    py::list digits;
    for (auto x : a.c.num.c) digits.append(i128_to_py(x));
    py::tuple de(a.c.de.size());
    for (size_t k = 0; k < a.c.de.size(); ++k) de[k] = (int)a.c.de[k];
    return py::make_tuple(a.c.num.lo, digits, (long long)a.c.dc, de);
}

static Poly poly_from_pairs(int lo, const std::vector<std::pair<int64_t, uint64_t>> &digits) {
    Poly p;
    p.lo = lo;
    for (auto &d : digits) p.c.push_back(i128_from_pair(d.first, d.second));
    ptrim(p);
    return p;
}

static std::vector<int> key_kexp(const Engine &e, const Key &key) {
    std::vector<int> out(e.n);
    for (int i = 0; i < e.n; ++i) out[i] = e.kget(key, i);
    return out;
}

PYBIND11_MODULE(_core, m) {
    m.doc() = "rewriting engine core";

    py::register_exception<TruncEx>(m, "TruncationExceeded");
    py::register_exception<CompletionEx>(m, "CompletionError");

    py::class_<PyCo>(m, "Co")
        .def("__mul__", [](const PyCo &a, const PyCo &b) { return PyCo{cmul(a.c, b.c)}; })
        .def("__add__", [](const PyCo &a, const PyCo &b) { return PyCo{cadd(a.c, b.c)}; })
        .def("__sub__", [](const PyCo &a, const PyCo &b) { return PyCo{csub(a.c, b.c)}; })
        .def("__neg__", [](const PyCo &a) { return PyCo{cneg(a.c)}; })
        .def("__truediv__", [](const PyCo &a, const PyCo &b) { return PyCo{cdiv(a.c, b.c)}; })
        .def("__eq__", [](const PyCo &a, const PyCo &b) { return ceq(a.c, b.c); })
        .def("inv", [](const PyCo &a) { return PyCo{cinv(a.c)}; })
        .def("is_zero", [](const PyCo &a) { return a.c.zero(); })
        .def("is_one", [](const PyCo &a) { return ceq(a.c, cint(1)); })
        .def("parts", &co_parts);

    m.def("co_int", [](long long v) { return PyCo{cint(v)}; });
    m.def("co_vpow", [](int e) { return PyCo{cvpow(e)}; });
    m.def("co_qint", [](int v) { return PyCo{cqint(v)}; });
    m.def("co_frac",
          [](int num_lo, const std::vector<std::pair<int64_t, uint64_t>> &num_digits,
             int den_lo, const std::vector<std::pair<int64_t, uint64_t>> &den_digits) {
              return PyCo{cfrac(poly_from_pairs(num_lo, num_digits),
                                poly_from_pairs(den_lo, den_digits))};
          });
    m.def("den_basis", []() {
        py::list out;
        for (auto &b : g_basis) {
            py::list digits;
            for (auto x : b.c) digits.append(i128_to_py(x));
            out.append(py::make_tuple(b.lo, digits));
        }
        return out;
    });

    py::class_<PyEl>(m, "El")
        .def("__len__", [](const PyEl &e) { return e.p->size(); });

    py::class_<Engine>(m, "Engine")
        .def(py::init<std::vector<std::vector<int>>, int>())
        .def_readonly("n", &Engine::n)
        .def_readwrite("memo_cap", &Engine::memo_cap)
        .def_property_readonly("trunc", [](const Engine &e) { return e.D; })
        .def_property_readonly("confluent_upto",
                               [](const Engine &e) { return e.confluent_upto; })
        .def_property_readonly("nrules", [](const Engine &e) { return e.rules.size(); })
        .def_property_readonly("memo_size", [](const Engine &e) { return e.mg.size(); })
        .def("set_trunc",
             [](Engine &e, int d) {
                 if (d > e.D) e.D = d;
             })
        .def("el_word",
             [](const Engine &e, const py::bytes &w) { return PyEl{std::make_shared<Elem>(e.el_word(std::string(w)))}; })
        .def("el_k",
             [](const Engine &e, const std::vector<int> &kexp) {
                 return PyEl{std::make_shared<Elem>(e.el_k(kexp))};
             })
        .def("el_one", [](const Engine &e) { return PyEl{std::make_shared<Elem>(e.el_one())}; })
        .def("scal",
             [](const Engine &e, const PyCo &c, const PyEl &x) {
                 return PyEl{std::make_shared<Elem>(e.scal(c.c, *x.p))};
             })
        .def("add",
             [](const Engine &e, const std::vector<PyEl> &els) {
                 std::vector<const Elem *> ps;
                 for (auto &x : els) ps.push_back(x.p.get());
                 return PyEl{std::make_shared<Elem>(e.eadd(ps))};
             })
        .def("sub",
             [](const Engine &e, const PyEl &x, const PyEl &y) {
                 return PyEl{std::make_shared<Elem>(e.esub(*x.p, *y.p))};
             })
        .def("mul_raw",
             [](const Engine &e, const PyEl &x, const PyEl &y) {
                 return PyEl{std::make_shared<Elem>(e.mul_raw(*x.p, *y.p))};
             })
        .def("nf", [](Engine &e, const PyEl &x) { return PyEl{std::make_shared<Elem>(e.nf(*x.p))}; })
        .def("mul2",
             [](Engine &e, const PyEl &x, const PyEl &y) {
                 return PyEl{std::make_shared<Elem>(e.mul2(*x.p, *y.p))};
             })
        .def("qbracket",
             [](Engine &e, const PyEl &a, const PyEl &b, const PyCo &u) {
                 return PyEl{std::make_shared<Elem>(e.qbracket(*a.p, *b.p, u.c))};
             })
        .def("is_zero", [](Engine &e, const PyEl &x) { return e.is_zero(*x.p); })
        .def("bdegree", [](const Engine &e, const PyEl &x) { return e.bdegree(*x.p); })
        .def("terms",
             [](const Engine &e, const PyEl &x) {
                 py::list out;
                 for (auto &[key, c] : *x.p) {
                     auto kx = key_kexp(e, key);
                     py::tuple kt(e.n);
                     for (int i = 0; i < e.n; ++i) kt[i] = kx[i];
                     out.append(py::make_tuple(
                         kt, py::bytes(key.substr(e.koff)), PyCo{c}));
                 }
                 return out;
             })
        .def("el_from_terms",
             [](const Engine &e,
                const std::vector<std::tuple<std::vector<int>, py::bytes, PyCo>> &terms) {
                 Elem out;
                 for (auto &[kexp, w, c] : terms)
                     acc(out, e.make_key(kexp, std::string(w)), c.c);
                 return PyEl{std::make_shared<Elem>(std::move(out))};
             })
        .def("add_rule_from",
             [](Engine &e, const PyEl &rel) {
                 std::string lhs;
                 Elem rhs;
                 e.orient(*rel.p, lhs, rhs);
                 if (e.rules.count(lhs))
                     throw CompletionEx("duplicate rule for the same leading word");
                 e.add_rule(lhs, std::move(rhs));
                 return py::bytes(lhs);
             })
        .def("add_rule_raw",
             [](Engine &e, const py::bytes &lhs, const PyEl &rhs) {
                 e.add_rule(std::string(lhs), *rhs.p);
             })
        .def("install_rules",
             [](Engine &e, const std::vector<std::pair<py::bytes, PyEl>> &rules,
                int confluent_upto) {
                 // cache load path: trust the rules, certify separately
                 e.rules.clear();
                 e.rule_order.clear();
                 e.rule_lens.clear();
                 e.mg.clear();
                 while (!e.heap.empty()) e.heap.pop();
                 e.deferred.clear();
                 for (auto &[lhs, rhs] : rules) {
                     std::string l(lhs);
                     e.rules.emplace(l, *rhs.p);
                     e.rule_order.push_back(l);
                 }
                 std::vector<int> lens;
                 for (auto &kv : e.rules) lens.push_back((int)kv.first.size());
                 std::sort(lens.begin(), lens.end());
                 lens.erase(std::unique(lens.begin(), lens.end()), lens.end());
                 e.rule_lens = lens;
                 e.confluent_upto = confluent_upto;
             })
        .def("rules_list",
             [](const Engine &e) {
                 py::list out;
                 for (auto &lhs : e.rule_order)
                     out.append(py::make_tuple(py::bytes(lhs),
                                               PyEl{std::make_shared<Elem>(e.rules.at(lhs))}));
                 return out;
             })
        .def("count_irreducible", &Engine::count_irreducible)
        .def("complete", &Engine::complete,
             py::call_guard<py::gil_scoped_release>());
}
