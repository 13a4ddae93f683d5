"""Free noncommutative algebra with K-twisted coefficients and a
degree-truncated rewriting engine (diamond-lemma completion).

The heavy lifting lives in the compiled extension ``_core``: elements are
opaque handles holding {(kexp, bword): coefficient} maps with the Cartan
commutation K_l B_i = v^(c_{tau l,i} - c_{l i}) B_i K_l baked into
multiplication, and scalars are exact elements of Q(v) (Laurent-polynomial
numerator over a factored denominator).  This module seeds the defining
presentation, drives completion against the graded dimension oracle, and
handles the text formats (elements, rule caches).

The term order is B-degree first, then deglex on the word with node order
0 < 1 < ... < 2r.  Completion is degree-by-degree and certified against
the graded dimension oracle: once the number of irreducible words of each
degree d <= D matches pbw_dim_oracle(r, d), irreducible words span and
are independent, so normal forms decide equality up to degree D.  A
reduction to zero is a proof of zero at any degree; only nonzero
residuals above the certified degree are inconclusive.
"""

from __future__ import annotations

import hashlib
import os
import re
import tempfile

from . import _core
from .cartan import SatakeData, pbw_dim_oracle
from .coeff import LaurentPoly, RatFunc, rf_parse, rf_to_str

__all__ = [
    "TruncationExceeded",
    "CompletionError",
    "RewriteSystem",
    "co_int",
    "co_vpow",
    "co_qint",
    "CO_ONE",
    "CO_V",
    "co_to_rf",
    "co_from_rf",
    "element_to_str",
    "element_parse",
]

TruncationExceeded = _core.TruncationExceeded
CompletionError = _core.CompletionError

co_int = _core.co_int
co_vpow = _core.co_vpow
co_qint = _core.co_qint
CO_ONE = co_int(1)
CO_V = co_vpow(1)


def _int_pairs(coeffs):
    out = []
    for d in coeffs:
        hi = d >> 64
        assert -(1 << 63) <= hi < (1 << 63), "coefficient too large for the core"
        out.append((hi, d & ((1 << 64) - 1)))
    return out


def co_from_rf(rf: RatFunc):
    return _core.co_frac(rf.num.lo, _int_pairs(rf.num.c), rf.den.lo, _int_pairs(rf.den.c))


def co_to_rf(co) -> RatFunc:
    lo, digits, dc, de = co.parts()
    num = LaurentPoly(lo, tuple(digits))
    den = LaurentPoly(0, (dc,))
    if de:
        basis = _core.den_basis()
        for k, e in enumerate(de):
            blo, bdig = basis[k]
            bp = LaurentPoly(blo, tuple(bdig))
            for _ in range(e):
                den = den * bp
    return RatFunc(num, den)


def _as_co(c):
    if isinstance(c, int):
        return co_int(c)
    return c


class RewriteSystem:
    """Presented algebra with normal forms, truncated at B-degree ``trunc_degree``."""

    def __init__(self, satake: SatakeData, trunc_degree: int):
        if trunc_degree < 2:
            raise ValueError("truncation degree must be >= 2")
        self.sd = satake
        self.n = satake.n
        self.pair = tuple(
            tuple(satake.khalf_pairing(ell, i) for i in range(self.n)) for ell in range(self.n)
        )
        self.eng = _core.Engine([list(row) for row in self.pair], trunc_degree)
        self.relations: list = []  # (name, element) defining relations
        self._seed_presentation()

    @property
    def D(self) -> int:
        return self.eng.trunc

    @property
    def confluent_upto(self) -> int:
        return self.eng.confluent_upto

    def set_trunc(self, d: int):
        self.eng.set_trunc(d)

    # ------------------------------------------------------------------
    # element construction and arithmetic (opaque handles)
    # ------------------------------------------------------------------
    def el_word(self, word):
        return self.eng.el_word(bytes(word))

    def el_k(self, kexp):
        return self.eng.el_k(list(kexp))

    def el_kgen(self, i: int, power: int = 1):
        k = [0] * self.n
        k[i] = power
        return self.eng.el_k(k)

    def el_one(self):
        return self.eng.el_one()

    def el_scalar(self, c):
        return self.eng.scal(_as_co(c), self.eng.el_one())

    def scal(self, c, x):
        return self.eng.scal(_as_co(c), x)

    def add(self, *els):
        return self.eng.add(list(els))

    def sub(self, x, y):
        return self.eng.sub(x, y)

    def mul_raw(self, x, y):
        """Product in the free K-twisted algebra, without normal-forming."""
        return self.eng.mul_raw(x, y)

    def nf(self, x):
        return self.eng.nf(x)

    def nf_word(self, w):
        return self.eng.nf(self.el_word(w))

    def mul(self, *els):
        """Normal-formed product."""
        if len(els) == 1:
            return self.eng.nf(els[0])
        out = els[0]
        for y in els[1:]:
            out = self.eng.mul2(out, y)
        return out

    def qbracket(self, a, b, u=None):
        """[a, b]_u = ab - u ba, normal-formed."""
        return self.eng.qbracket(a, b, CO_ONE if u is None else _as_co(u))

    def is_zero(self, x) -> bool:
        return self.eng.is_zero(x)

    def bdegree(self, x) -> int:
        return self.eng.bdegree(x)

    def terms(self, x):
        """List of (kexp tuple, bword bytes, coefficient) for an element."""
        return self.eng.terms(x)

    def el_from_terms(self, terms):
        return self.eng.el_from_terms(list(terms))

    # ------------------------------------------------------------------
    # presentation
    # ------------------------------------------------------------------
    def _seed_presentation(self):
        sd = self.sd
        n, r = self.n, self.sd.r
        c, tau = sd.cartan, sd.tau

        rels = []
        two = co_qint(2)
        vminus = CO_V - co_vpow(-1)
        inv_vminus = CO_ONE / vminus
        W = self.el_word

        # commuting pairs: c_ij = 0, j != tau(i)
        for i in range(n):
            for j in range(i + 1, n):
                if c[i][j] == 0 and tau[i] != j:
                    rels.append((f"comm_{i}_{j}", self.sub(W([i, j]), W([j, i]))))
        # q-Serre for i with tau(i) != i, j not in {i, tau(i)}, c_ij = -1
        for i in range(1, n):
            for j in range(n):
                if j in (i, tau[i]) or c[i][j] != -1:
                    continue
                rel = self.add(
                    W([j, i, i]),
                    self.scal(-two, W([i, j, i])),
                    W([i, i, j]),
                )
                rels.append((f"serre_{i}_{j}", rel))
        # node 0 (tau-fixed): modified Serre with K_0 correction
        for j in range(n):
            if c[0][j] == -1:
                rel = self.add(
                    W([0, 0, j]),
                    self.scal(-two, W([0, j, 0])),
                    W([j, 0, 0]),
                    self.scal(co_vpow(-1), self.mul_raw(W([j]), self.el_kgen(0))),
                )
                rels.append((f"serre0_{j}", rel))
        # split tau-pairs: c_{i,tau i} = 0
        for i in range(1, r):
            ti = tau[i]
            rel = self.add(
                self.sub(W([ti, i]), W([i, ti])),
                self.scal(-inv_vminus, self.el_kgen(i)),
                self.scal(inv_vminus, self.el_kgen(ti)),
            )
            rels.append((f"pair_{i}", rel))
        # adjacent tau-pair {r, r+1}: modified Serre with K-corrections
        for i in (r, r + 1):
            ti = tau[i]
            rel = self.add(
                W([i, i, ti]),
                self.scal(-two, W([i, ti, i])),
                W([ti, i, i]),
                self.scal(two * CO_V, self.mul_raw(self.el_kgen(i), W([i]))),
                self.scal(two * CO_V, self.mul_raw(W([i]), self.el_kgen(ti))),
            )
            rels.append((f"pairserre_{i}", rel))

        self.relations = rels
        for name, rel in rels:
            self.eng.add_rule_from(rel)

    # ------------------------------------------------------------------
    # completion
    # ------------------------------------------------------------------
    def count_irreducible(self, dmax: int):
        """Number of B-words of each degree 1..dmax avoiding every rule lhs."""
        return self.eng.count_irreducible(dmax)

    def complete(self, upto=None):
        """Run completion and the graded certificate up to the given degree."""
        D = self.D if upto is None else upto
        oracle = [pbw_dim_oracle(self.sd.r, d) for d in range(1, D + 1)]
        self.eng.complete(D, oracle)
        return self

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------
    FORMAT_VERSION = 1

    def _rules_text(self) -> str:
        pairs = sorted(self.eng.rules_list(), key=lambda p: (len(p[0]), p[0]))
        lines = []
        for lhs, rhs in pairs:
            lines.append(f"{word_to_str(lhs)} -> {element_to_str(self, rhs)}")
        return "\n".join(lines) + "\n"

    def content_hash(self) -> str:
        return hashlib.sha256(self._rules_text().encode()).hexdigest()

    def save(self, path: str, sign: str = "even"):
        body = self._rules_text()
        header = (
            f"#iqsym-rewrite-cache v{self.FORMAT_VERSION}\n"
            f"r={self.sd.r}\n"
            f"D={self.confluent_upto}\n"
            f"order=bdeg-deglex\n"
            f"sign={sign}\n"
            f"nrules={self.eng.nrules}\n"
            f"hash={hashlib.sha256(body.encode()).hexdigest()}\n"
        )
        d = os.path.dirname(os.path.abspath(path))
        os.makedirs(d, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".iqsym-cache-")
        try:
            with os.fdopen(fd, "w") as f:
                f.write(header)
                f.write(body)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def load(cls, path: str, satake: SatakeData, sign: str = "even"):
        """Load a cached system; returns None on any header mismatch."""
        try:
            with open(path) as f:
                text = f.read()
        except OSError:
            return None
        lines = text.splitlines()
        if not lines or lines[0] != f"#iqsym-rewrite-cache v{cls.FORMAT_VERSION}":
            return None
        hdr = {}
        k = 1
        while k < len(lines) and "=" in lines[k] and "->" not in lines[k]:
            key, _, val = lines[k].partition("=")
            hdr[key] = val
            k += 1
        body = "\n".join(lines[k:]) + "\n"
        if (
            hdr.get("r") != str(satake.r)
            or hdr.get("order") != "bdeg-deglex"
            or hdr.get("sign") != sign
            or hdr.get("hash") != hashlib.sha256(body.encode()).hexdigest()
        ):
            return None
        D = int(hdr.get("D", "0"))
        sys_ = cls(satake, max(D, 2))
        pairs = []
        for line in lines[k:]:
            if not line.strip():
                continue
            lhs_s, _, rhs_s = line.partition(" -> ")
            pairs.append((word_from_str(lhs_s), element_parse(sys_, rhs_s)))
        if int(hdr.get("nrules", "-1")) != len(pairs):
            return None
        sys_.eng.install_rules(pairs, D)
        return sys_


# ---------------------------------------------------------------------------
# Element text format:  `coef * K[e0,e1,...] * B(i1).B(i2)`; empty word -> 1
# ---------------------------------------------------------------------------

def word_to_str(bw: bytes) -> str:
    if not bw:
        return "1"
    return ".".join(f"B({i})" for i in bw)


def word_from_str(s: str) -> bytes:
    s = s.strip()
    if s == "1":
        return b""
    return bytes(int(m) for m in re.findall(r"B\((\d+)\)", s))


def _coef_str(c) -> str:
    s = rf_to_str(co_to_rf(c))
    if " " in s or "/" in s:
        return f"({s})"
    return s


def element_to_str(rs: RewriteSystem, el) -> str:
    terms = rs.terms(el)
    if not terms:
        return "0"
    terms.sort(key=lambda t: (len(t[1]), t[1], t[0]), reverse=True)
    parts = []
    for kexp, bw, c in terms:
        parts.append(
            f"{_coef_str(c)} * K[{','.join(str(e) for e in kexp)}] * {word_to_str(bw)}"
        )
    return " + ".join(parts)


def element_parse(rs: RewriteSystem, s: str):
    s = s.strip()
    if s == "0":
        return rs.el_from_terms([])
    # split on top-level " + " (never inside parentheses)
    chunks = []
    depth = 0
    cur = []
    k = 0
    while k < len(s):
        if s.startswith(" + ", k) and depth == 0:
            chunks.append("".join(cur))
            cur = []
            k += 3
            continue
        ch = s[k]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur.append(ch)
        k += 1
    chunks.append("".join(cur))
    terms = []
    for t in chunks:
        coef_s, k_s, w_s = (p.strip() for p in t.split(" * "))
        coef = co_from_rf(rf_parse(coef_s[1:-1] if coef_s.startswith("(") else coef_s))
        kexp = tuple(int(x) for x in k_s[2:-1].split(","))
        assert len(kexp) == rs.n
        terms.append((list(kexp), word_from_str(w_s), coef))
    return rs.el_from_terms(terms)
