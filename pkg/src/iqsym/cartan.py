"""Satake datum of the quasi-split affine type on a (2r+1)-cycle.

Provides the index sets, affine Cartan matrix, diagram involution tau,
sign function o(.), root enumeration by height, and the graded dimension
oracle used to certify rewrite-system confluence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["SatakeData", "build_satake", "RootVec", "positive_roots_up_to_height", "pbw_dim_oracle"]


@dataclass(frozen=True)
class RootVec:
    """Element of the affine root lattice: coords[i] is the coefficient of alpha_i."""

    coords: tuple

    def height(self) -> int:
        return sum(self.coords)

    def __add__(self, other: "RootVec") -> "RootVec":
        return RootVec(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RootVec":
        return RootVec(tuple(-a for a in self.coords))

    def __sub__(self, other: "RootVec") -> "RootVec":
        return self + (-other)


@dataclass(frozen=True)
class SatakeData:
    r: int
    n: int                      # 2r+1 nodes, indexed 0..2r
    cartan: tuple               # tuple of tuples, c[i][j]
    tau: tuple                  # involution on nodes
    sign_o: tuple               # o(i) for i in 0..2r (o(0) unused, set +1)
    itau_reps: tuple = field(default=())
    sign_flip: bool = False

    @property
    def nodes(self):
        return range(self.n)

    @property
    def i0(self):
        """Finite nodes 1..2r."""
        return range(1, self.n)

    def khalf_pairing(self, ell: int, i: int) -> int:
        """Exponent in K_ell B_i = v^(c[tau ell][i] - c[ell][i]) B_i K_ell."""
        return self.cartan[self.tau[ell]][i] - self.cartan[ell][i]

    def rep(self, i: int) -> int:
        """Representative of the tau-orbit of node i."""
        return min(i, self.tau[i])

    def relative_cartan(self) -> tuple:
        """Relative Cartan matrix on I_tau, from the restricted-root inner products:
        cbar[i][j] = 2 (c_ij + c_{i,tau j}) / (2 + c_{i,tau i})."""
        c, tau = self.cartan, self.tau
        reps = self.itau_reps
        out = []
        for i in reps:
            row = []
            for j in reps:
                num = 2 * (c[i][j] + c[i][tau[j]])
                den = 2 + c[i][tau[i]]
                q, rr = divmod(num, den)
                assert rr == 0, "relative Cartan entry not integral"
                row.append(q)
            out.append(tuple(row))
        return tuple(out)


def build_satake(r: int, sign_flip: bool = False) -> SatakeData:
    if r < 1:
        raise ValueError("rank parameter must be >= 1")
    n = 2 * r + 1
    cartan = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(2)
            elif (i - j) % n in (1, n - 1):
                row.append(-1)
            else:
                row.append(0)
        cartan.append(tuple(row))
    tau = tuple([0] + [n - i for i in range(1, n)])
    sgn = 1 if not sign_flip else -1
    sign_o = tuple([1] + [sgn * (-1) ** i for i in range(1, n)])
    sd = SatakeData(
        r=r,
        n=n,
        cartan=tuple(cartan),
        tau=tau,
        sign_o=sign_o,
        itau_reps=tuple(range(r + 1)),
        sign_flip=sign_flip,
    )
    # sanity: o alternates across edges of the finite diagram
    for i in range(1, n):
        for j in range(1, n):
            if i != j and cartan[i][j] < 0:
                assert sign_o[i] * sign_o[j] == -1
    return sd


def positive_roots_up_to_height(r: int, hmax: int):
    """Positive roots of the affine (2r+1)-cycle with height <= hmax, as
    (RootVec, multiplicity) pairs.  Real roots are k*delta +/- beta for beta a
    positive root of the finite A_{2r} subdiagram on nodes 1..2r; imaginary
    roots m*delta have multiplicity 2r."""
    if hmax < 1:
        raise ValueError("hmax must be >= 1")
    n = 2 * r + 1
    delta = tuple([1] * n)
    out = []
    finite = []  # beta = alpha_i + ... + alpha_j, 1 <= i <= j <= 2r
    for i in range(1, n):
        for j in range(i, n):
            coords = tuple(1 if i <= t <= j else 0 for t in range(n))
            finite.append(coords)
    for beta in finite:
        h = sum(beta)
        k = 0
        while k * n + h <= hmax:
            out.append((RootVec(tuple(k * d + b for d, b in zip(delta, beta))), 1))
            k += 1
        k = 1
        while k * n - h <= hmax:
            out.append((RootVec(tuple(k * d - b for d, b in zip(delta, beta))), 1))
            k += 1
    m = 1
    while m * n <= hmax:
        out.append((RootVec(tuple(m * d for d in delta)), 2 * r))
        m += 1
    out.sort(key=lambda p: (p[0].height(), p[0].coords))
    return out


def pbw_dim_oracle(r: int, d: int) -> int:
    """Coefficient of x^d in prod over positive roots of (1-x^{ht})^{-mult}."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    if d == 0:
        return 1
    ser = [0] * (d + 1)
    ser[0] = 1
    for root, mult in positive_roots_up_to_height(r, d):
        h = root.height()
        for _ in range(mult):
            for k in range(h, d + 1):
                ser[k] += ser[k - h]
    return ser[d]
