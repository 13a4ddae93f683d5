"""Loop-style generators built on top of the presented algebra: real
generators B[i,k], imaginary generators Theta[i,n] and their companions
D[i,n], the central element C, the chain elements TB0[level], and the
H[i,m] extracted from the Theta generating function.

Everything is computed lazily and cached per table.  Two independent
routes exist for several elements (Theta[i,1] via its two defining
expressions, TB0 via recursion and via the operator word); the
verification layer cross-checks them.
"""

from __future__ import annotations

import re

from .algebra import CO_ONE, CO_V, RewriteSystem, co_int, co_qint, co_vpow
from .iqg import OpCatalog

__all__ = [
    "NonCommutingTheta",
    "RootVectorTable",
    "parse_element_name",
]

VINV = co_vpow(-1)
VMINUS = CO_V - VINV  # v - v^-1
INV_VMINUS = CO_ONE / VMINUS


class NonCommutingTheta(Exception):
    """Raised when H extraction is attempted on non-commuting Theta's."""


class RootVectorTable:
    """Lazy cache of loop generators for one rewrite system."""

    def __init__(self, rs: RewriteSystem, cat: OpCatalog | None = None):
        self.rs = rs
        self.cat = cat if cat is not None else OpCatalog(rs)
        self.sd = rs.sd
        self.r = rs.sd.r
        self._b = {}
        self._d = {}
        self._theta = {}
        self._tb0 = {}
        self._tb0_op = {}
        self._h = {}
        self._theta_comm_ok = {}

    def o(self, i: int) -> int:
        return self.sd.sign_o[i]

    # ------------------------------------------------------------------
    # central element and K-monomials
    # ------------------------------------------------------------------
    def c_pow(self, m: int = 1):
        """C^m where C = -v^(2r-1) K_0 K_1 ... K_2r."""
        rs = self.rs
        el = rs.el_k([m] * rs.n)
        c = co_vpow((2 * self.r - 1) * m)
        if m % 2:
            c = -c
        return rs.scal(c, el)

    def kinv(self, i: int):
        return self.rs.el_kgen(i, power=-1)

    # ------------------------------------------------------------------
    # real generators
    # ------------------------------------------------------------------
    def b(self, i: int, k: int = 0):
        """B[i,k] = o(i)^-k (T_varpi_i)^-k (B_i)."""
        key = (i, k)
        if key in self._b:
            return self._b[key]
        if k == 0:
            el = self.rs.el_word([i])
        else:
            step = -1 if k > 0 else 1
            prev = self.b(i, k + step)
            img = self.cat.varpi_apply(i, prev, inverse=(k > 0))
            el = self.rs.scal(co_int(self.o(i)), img)
        self._b[key] = el
        return el

    # ------------------------------------------------------------------
    # imaginary generators
    # ------------------------------------------------------------------
    def d(self, i: int, n: int):
        """D[i,n] = -[B_{tau i}, B[i,n]]_{v^-1} - [B[i,n+1], B[tau i,-1]]_{v^-1}."""
        key = (i, n)
        if key in self._d:
            return self._d[key]
        rs = self.rs
        ti = self.sd.tau[i]
        el = rs.add(
            rs.scal(-1, rs.qbracket(self.b(ti), self.b(i, n), VINV)),
            rs.scal(-1, rs.qbracket(self.b(i, n + 1), self.b(ti, -1), VINV)),
        )
        self._d[key] = el
        return el

    def theta(self, i: int, n: int):
        key = (i, n)
        if key in self._theta:
            return self._theta[key]
        rs = self.rs
        ti = self.sd.tau[i]
        if n < 0:
            el = rs.el_from_terms([])
        elif n == 0:
            el = rs.scal(INV_VMINUS, rs.el_one())
        elif self.sd.cartan[i][ti] == 0:
            # split pair: Theta[i,n] = [B[i,n], B_{tau i}] K_{tau i}^-1
            el = rs.mul(rs.qbracket(self.b(i, n), self.b(ti)), self.kinv(ti))
        elif n == 1:
            # -o(i) v ( [B_i, T_varpi_i(B_{tau i})]_{v^-1} C K_{tau i}^-1
            #           - TB0[r] K_i )
            br = rs.qbracket(self.b(i), self.cat.varpi_apply(i, self.b(ti)), VINV)
            el = rs.scal(
                co_int(-self.o(i)) * CO_V,
                rs.sub(
                    rs.mul(br, self.c_pow(), self.kinv(ti)),
                    rs.mul(self.tb0(self.r), rs.el_kgen(i)),
                ),
            )
        elif n == 2:
            # -v D[i,0] C K_{tau i}^-1 + v Theta0 C - Theta0 C K_{tau i}^-1 K_i
            el = rs.add(
                rs.scal(-CO_V, rs.mul(self.d(i, 0), self.c_pow(), self.kinv(ti))),
                rs.scal(CO_V * INV_VMINUS, self.c_pow()),
                rs.scal(
                    -INV_VMINUS,
                    rs.mul(self.c_pow(), self.kinv(ti), rs.el_kgen(i)),
                ),
            )
        else:
            # v Theta[i,n-2] C - v D[i,n-2] C K_{tau i}^-1
            el = rs.sub(
                rs.scal(CO_V, rs.mul(self.theta(i, n - 2), self.c_pow())),
                rs.scal(CO_V, rs.mul(self.d(i, n - 2), self.c_pow(), self.kinv(ti))),
            )
        self._theta[key] = el
        return el

    def theta1_alt(self, i: int):
        """Second route to Theta[i,1] in the adjacent case:
        v [B_i, B[tau i,-1]]_{v^-1} C K_{tau i}^-1 + o(i) v TB0[r] K_i."""
        rs = self.rs
        ti = self.sd.tau[i]
        assert self.sd.cartan[i][ti] == -1
        return rs.add(
            rs.scal(
                CO_V,
                rs.mul(
                    rs.qbracket(self.b(i), self.b(ti, -1), VINV),
                    self.c_pow(),
                    self.kinv(ti),
                ),
            ),
            rs.scal(co_int(self.o(i)) * CO_V, rs.mul(self.tb0(self.r), rs.el_kgen(i))),
        )

    def rank1_theta1(self, i: int):
        """Affine-rank-one route to Theta[i,1] (r = 1 only):
        -o(i) ( [B_i, [B_{tau i}, B_0]_v]_{v^2} - v B_0 K_i )."""
        rs = self.rs
        assert self.r == 1
        ti = self.sd.tau[i]
        b0 = rs.el_word([0])
        inner = rs.qbracket(self.b(ti), b0, CO_V)
        return rs.scal(
            co_int(-self.o(i)),
            rs.sub(
                rs.qbracket(self.b(i), inner, co_vpow(2)),
                rs.scal(CO_V, rs.mul(b0, rs.el_kgen(i))),
            ),
        )

    # ------------------------------------------------------------------
    # the B_0 chain
    # ------------------------------------------------------------------
    def tb0(self, level: int):
        """TB0[level] for level in 1..r, via the bracket recursion:
        TB0[1] = B_0 and
        TB0[m] = [B_{tau(m-1)}, [B_{m-1}, TB0[m-1]]_v]_v - v TB0[m-1] K_{tau(m-1)}.
        """
        if level in self._tb0:
            return self._tb0[level]
        rs = self.rs
        if not 1 <= level <= self.r:
            raise ValueError(f"level must be in 1..{self.r}")
        if level == 1:
            el = rs.el_word([0])
        else:
            j = level - 1
            tj = self.sd.tau[j]
            prev = self.tb0(level - 1)
            el = rs.sub(
                rs.qbracket(self.b(tj), rs.qbracket(self.b(j), prev, CO_V), CO_V),
                rs.scal(CO_V, rs.mul(prev, rs.el_kgen(tj))),
            )
        self._tb0[level] = el
        return el

    def tb0_op(self, level: int):
        """TB0[level] computed independently as T_{level-1}^-1 ... T_1^-1 (B_0)."""
        if level in self._tb0_op:
            return self._tb0_op[level]
        if not 1 <= level <= self.r:
            raise ValueError(f"level must be in 1..{self.r}")
        word = tuple((j, -1) for j in range(level - 1, 0, -1))
        el = self.cat.word_op(word)(self.rs.el_word([0]))
        self._tb0_op[level] = el
        return el

    def longest_finite_word(self):
        """Reduced word (gens 1..r-1) for the longest element of the
        finite symmetric group they generate."""
        out = []
        for a in range(self.r - 1, 0, -1):
            out.extend(range(a, self.r))
        return tuple(out)

    def theta_r_k0(self):
        """Image of K_0 under the braid operator of the longest finite element."""
        word = tuple((j, 1) for j in self.longest_finite_word())
        return self.cat.word_op(word)(self.rs.el_kgen(0))

    # ------------------------------------------------------------------
    # H extraction
    # ------------------------------------------------------------------
    def check_theta_commute(self, i: int, mmax: int) -> bool:
        key = (i, mmax)
        if key in self._theta_comm_ok:
            return self._theta_comm_ok[key]
        rs = self.rs
        ok = True
        for a in range(1, mmax + 1):
            for bb in range(a + 1, mmax + 1):
                if not rs.is_zero(rs.qbracket(self.theta(i, a), self.theta(i, bb))):
                    ok = False
                    break
            if not ok:
                break
        self._theta_comm_ok[key] = ok
        return ok

    def h(self, i: int, m: int):
        """H[i,m] from log of the Theta generating function:
        (v-v^-1) sum H_m u^m = log(1 + (v-v^-1) sum Theta_m u^m).
        Valid only when the Theta[i,*] involved commute."""
        key = (i, m)
        if key in self._h:
            return self._h[key]
        if not self.check_theta_commute(i, m):
            raise NonCommutingTheta(f"Theta[{i},1..{m}] do not pairwise commute")
        rs = self.rs
        # f_k = coefficient of u^k in (v-v^-1) sum Theta u^m, k = 1..m
        f = [rs.scal(VMINUS, self.theta(i, k)) for k in range(1, m + 1)]
        log = [rs.el_from_terms([]) for _ in range(m)]
        power = list(f)  # f^k truncated, index = u-degree - 1
        for k in range(1, m + 1):
            c = co_int(-1 if k % 2 == 0 else 1) / co_int(k)
            for deg in range(k, m + 1):
                log[deg - 1] = rs.add(log[deg - 1], rs.scal(c, power[deg - 1]))
            if k < m:
                nxt = [rs.el_from_terms([]) for _ in range(m)]
                for d1 in range(k, m):
                    for d2 in range(1, m - d1 + 1):
                        nxt[d1 + d2 - 1] = rs.add(
                            nxt[d1 + d2 - 1], rs.mul(power[d1 - 1], f[d2 - 1])
                        )
                power = nxt
        el = rs.scal(INV_VMINUS, log[m - 1])
        self._h[key] = el
        return el

    # ------------------------------------------------------------------
    # Serre combination
    # ------------------------------------------------------------------
    def serre_comb(self, i: int, j: int, k1: int, k2: int, l: int):
        """Sym_{k1,k2} ( B[i,k1] B[i,k2] B[j,l] - [2] B[i,k1] B[j,l] B[i,k2]
        + B[j,l] B[i,k1] B[i,k2] )."""
        rs = self.rs
        out = rs.el_from_terms([])
        # Sym always sums both orderings, also when k1 == k2
        pairs = [(k1, k2), (k2, k1)]
        q2 = co_qint(2)
        for a, bb in pairs:
            ba, bb_, bj = self.b(i, a), self.b(i, bb), self.b(j, l)
            out = rs.add(
                out,
                rs.mul(ba, bb_, bj),
                rs.scal(-q2, rs.mul(ba, bj, bb_)),
                rs.mul(bj, ba, bb_),
            )
        return out

    # ------------------------------------------------------------------
    # name lookup (CLI dump)
    # ------------------------------------------------------------------
    def element(self, name: str):
        kind, args = parse_element_name(name)
        if kind == "C":
            return self.c_pow()
        if kind == "B":
            return self.b(*args)
        if kind == "Theta":
            return self.theta(*args)
        if kind == "D":
            return self.d(*args)
        if kind == "TB0":
            return self.tb0(*args)
        if kind == "H":
            return self.h(*args)
        raise ValueError(f"unknown element {name!r}")


_NAME_RE = re.compile(r"^(B|Theta|D|H|TB0)\[(-?\d+(?:,-?\d+)*)\]$")


def parse_element_name(name: str):
    """Parse ``B[i,k]``, ``Theta[i,n]``, ``D[i,n]``, ``H[i,m]``, ``TB0[m]``, ``C``."""
    name = name.strip()
    if name == "C":
        return "C", ()
    m = _NAME_RE.match(name)
    if not m:
        raise ValueError(f"bad element name {name!r}")
    kind = m.group(1)
    args = tuple(int(x) for x in m.group(2).split(","))
    want = 1 if kind == "TB0" else 2
    if len(args) != want:
        raise ValueError(f"{kind} takes {want} index(es), got {name!r}")
    return kind, args
