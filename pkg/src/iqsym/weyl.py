"""Extended affine Weyl group of the (2r+1)-cycle in window notation, the
relative Weyl group fixed by the diagram flip, lengths and reduced words.

An affine permutation f: Z -> Z with f(t + n) = f(t) + n is stored by its
window (f(1), ..., f(n)).  The quotient by the global shift t -> t + n is
taken by normalizing the level sum((f(i) - i))/n into 0..n-1; elements of
the non-extended group are exactly those of level 0.
"""

from __future__ import annotations

from .cartan import RootVec, SatakeData

__all__ = [
    "AffinePerm",
    "identity_perm",
    "simple_reflection",
    "translation",
    "t_omega",
    "varpi",
    "rel_generator",
    "rel_expansion",
    "rel_word_to_perm",
    "rel_length",
    "rel_reduced_word",
    "coxeter_order",
    "check_varpi_factorizations",
]


class AffinePerm:
    __slots__ = ("n", "window", "_hash")

    def __init__(self, n: int, window):
        window = tuple(window)
        assert len(window) == n
        s = sum(window) - n * (n + 1) // 2
        assert s % n == 0, "window does not define an affine permutation"
        level = s // n
        if not (0 <= level < n):
            shift = n * (level // n)
            window = tuple(w - shift for w in window)
        assert len({w % n for w in window}) == n, "window entries collide mod n"
        self.n = n
        self.window = window
        self._hash = hash((n, window))

    # -- basic group structure ---------------------------------------
    def apply(self, t: int) -> int:
        i = (t - 1) % self.n + 1
        return self.window[i - 1] + (t - i)

    def __mul__(self, other: "AffinePerm") -> "AffinePerm":
        assert self.n == other.n
        return AffinePerm(self.n, tuple(self.apply(other.window[i]) for i in range(self.n)))

    def inv(self) -> "AffinePerm":
        n = self.n
        out = [0] * n
        for j in range(1, n + 1):
            val = self.window[j - 1]
            rho = (val - 1) % n + 1
            out[rho - 1] = j - (val - rho)
        return AffinePerm(n, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, AffinePerm) and self.n == other.n and self.window == other.window

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"AffinePerm{self.window}"

    # -- statistics ---------------------------------------------------
    def is_identity(self) -> bool:
        return self.window == tuple(range(1, self.n + 1))

    @property
    def level(self) -> int:
        return (sum(self.window) - self.n * (self.n + 1) // 2) // self.n

    def in_nonextended(self) -> bool:
        return self.level == 0

    def length(self) -> int:
        n, w = self.n, self.window
        total = 0
        for a in range(n):
            fa = w[a]
            for b in range(a + 1, n):
                d = w[b] - fa
                total += abs(d // n) if d < 0 else d // n
        return total

    # -- diagram flip and root action ---------------------------------
    def tau_conj(self) -> "AffinePerm":
        """Conjugate by the diagram flip (node i -> n - i, fixing 0)."""
        return AffinePerm(self.n, tuple(1 - self.apply(1 - t) for t in range(1, self.n + 1)))

    def is_tau_invariant(self) -> bool:
        return self.tau_conj() == self

    def act_on_simple(self, i: int) -> RootVec:
        """Image of the simple root alpha_i (i in 0..n-1) in the root lattice."""
        n = self.n
        a, b = (n, n + 1) if i == 0 else (i, i + 1)
        fa, fb = self.apply(a), self.apply(b)
        coords = [0] * n
        if fa < fb:
            for t in range(fa, fb):
                coords[t % n] += 1
        else:
            for t in range(fb, fa):
                coords[t % n] -= 1
        return RootVec(tuple(coords))

    def act_on_root(self, gamma: RootVec) -> RootVec:
        coords = [0] * self.n
        for i, m in enumerate(gamma.coords):
            if m:
                img = self.act_on_simple(i)
                for t, x in enumerate(img.coords):
                    coords[t] += m * x
        return RootVec(tuple(coords))


def identity_perm(n: int) -> AffinePerm:
    return AffinePerm(n, range(1, n + 1))


def simple_reflection(n: int, i: int) -> AffinePerm:
    assert 0 <= i < n
    w = list(range(1, n + 1))
    if i == 0:
        w[0], w[n - 1] = 0, n + 1
    else:
        w[i - 1], w[i] = i + 1, i
    return AffinePerm(n, w)


def translation(avec) -> AffinePerm:
    """Translation by the weight-lattice class of the integer vector avec."""
    n = len(avec)
    return AffinePerm(n, tuple(j + 1 + n * avec[j] for j in range(n)))


def t_omega(n: int, i: int) -> AffinePerm:
    """Translation by the i-th fundamental weight class (1 <= i <= n-1)."""
    assert 1 <= i < n
    return translation([1] * i + [0] * (n - i))


def omega_pairing(n: int, i: int, j: int) -> int:
    """Pairing of the i-th fundamental weight with the simple root alpha_j."""
    if j == 0:
        return -1 if 1 <= i <= n - 1 else 0
    return 1 if i == j else 0


# -- relative Weyl group ----------------------------------------------------

def rel_expansion(sd: SatakeData, i: int):
    """Expansion of the relative generator into simple reflections."""
    tau = sd.tau[i]
    c = sd.cartan[i][tau]
    if c == 2:
        return (i,)
    if c == 0:
        return (i, tau)
    return (i, tau, i)


def rel_generator(sd: SatakeData, i: int) -> AffinePerm:
    w = identity_perm(sd.n)
    for a in rel_expansion(sd, i):
        w = w * simple_reflection(sd.n, a)
    return w


def rel_word_to_perm(sd: SatakeData, word) -> AffinePerm:
    w = identity_perm(sd.n)
    for a in word:
        w = w * rel_generator(sd, a)
    return w


def varpi(sd: SatakeData, i: int) -> AffinePerm:
    """The translation element t_{omega_i} t_{omega_{tau i}} of the relative group."""
    assert 1 <= i < sd.n
    return t_omega(sd.n, i) * t_omega(sd.n, sd.tau[i])


def rel_reduced_word(sd: SatakeData, w: AffinePerm):
    """Greedy descent extraction of a reduced word in the relative generators."""
    if not w.is_tau_invariant():
        raise ValueError("element does not commute with the diagram flip")
    gens = [(i, rel_generator(sd, i)) for i in sd.itau_reps]
    word = []
    cur = w
    ell = cur.length()
    while not cur.is_identity():
        for i, g in gens:
            nxt = cur * g
            nl = nxt.length()
            if nl < ell:
                word.append(i)
                cur, ell = nxt, nl
                break
        else:
            raise ValueError("no descent found: element not in the relative group")
    word.reverse()
    return tuple(word)


def rel_length(sd: SatakeData, w: AffinePerm) -> int:
    return len(rel_reduced_word(sd, w))


def coxeter_order(sd: SatakeData, i: int, j: int, cutoff: int = 12):
    """Order of r_i r_j in the relative group; None when >= cutoff (infinite)."""
    assert i != j
    p = rel_generator(sd, i) * rel_generator(sd, j)
    cur = p
    for m in range(1, cutoff + 1):
        if cur.is_identity():
            return m
        cur = cur * p
    return None


def relword_format(word) -> str:
    return " ".join(str(a) for a in word)


def relword_parse(s: str):
    return tuple(int(t) for t in s.split())


def check_varpi_factorizations(r: int) -> dict:
    """Group-level identities for the varpi elements; returns {name: bool}."""
    from .cartan import build_satake

    sd = build_satake(r)
    report = {}
    base = list(range(r + 1))  # r_0 r_1 ... r_r
    for k in range(1, r + 1):
        word = tuple((base + list(range(r - 1, k - 1, -1)))) * k
        lhs = varpi(sd, k)
        rhs = rel_word_to_perm(sd, word)
        ok = lhs == rhs
        # reducedness: the relative length must equal the word length,
        # and the W-length must match 2k(2r+1-k)
        ok = ok and rel_length(sd, lhs) == len(word)
        ok = ok and lhs.length() == 2 * k * (2 * r + 1 - k)
        report[f"varpi_{k}_zigzag"] = ok
    if r >= 2:
        word = tuple(base) * (r - 1) + tuple(range(1, r))
        report["varpi_rm1_flat"] = varpi(sd, r - 1) == rel_word_to_perm(sd, word)
    report["varpi_r_flat"] = varpi(sd, r) == rel_word_to_perm(sd, tuple(base) * r)
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            if varpi(sd, i) * varpi(sd, j) != varpi(sd, j) * varpi(sd, i):
                report["varpi_commute"] = False
                break
    report.setdefault("varpi_commute", True)
    return report
