"""Quadratic coordinate algebra on x^0..x^3 with relations (R - 1)(x (x) x) = 0.

Elements are kept in a PBW basis of ordered monomials.  The generator
precedence (which letter sorts first) is a property of the
:class:`RewriteTable`; by default it is x0 < x1 < x2 < x3, but some
parameter points need another precedence for the ordered monomials to
stay independent, see :func:`choose_order`.

Normal ordering is done degree by degree.  For each degree d the table
stores the matrices ``Y[d][j]`` with ``row(m) @ Y[d][j] = nf(x^j * m)``
for every ordered monomial m of degree d.  They are obtained from the
quotient ``C_{d+1} = (C_1 (x) C_d) / (relations (x) C_{d-1})`` by solving
for the disordered products ``x^j m`` in terms of the ordered ones.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from math import comb

import numpy as np

PRUNE = 1e-13
EQ_TOL = 1e-9
CONDITION_FLOOR = 1e-10
DEFAULT_ORDER = (0, 1, 2, 3)


class PivotFailure(ArithmeticError):
    """Disordered quadratic products cannot be solved for in terms of ordered ones."""


class NonTermination(ArithmeticError):
    """Normal ordering has no unique answer at some degree."""


MultiIndex = tuple  # four non-negative exponents, indexed by generator label


def monomials(d: int) -> list[tuple]:
    """All exponent 4-tuples of total degree d, in lexicographic order."""
    return sorted(a for a in itertools.product(range(d + 1), repeat=4) if sum(a) == d)


def _unit(i: int) -> tuple:
    return tuple(1 if k == i else 0 for k in range(4))


class Poly:
    """Element of the coordinate algebra: ordered monomial -> coefficient."""

    __slots__ = ("terms",)
    __hash__ = None

    def __init__(self, terms=None):
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != 4 or min(m) < 0:
                raise ValueError(f"bad multi-index {m}")
            clean[m] = clean.get(m, 0) + complex(c)
        self.terms = {}
        for m, c in clean.items():
            c = complex(c.real if abs(c.real) > PRUNE else 0.0, c.imag if abs(c.imag) > PRUNE else 0.0)
            if c != 0:
                self.terms[m] = c

    @classmethod
    def const(cls, c=1.0) -> "Poly":
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def gen(cls, i: int, c=1.0) -> "Poly":
        return cls({_unit(i): c})

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, m) -> complex:
        return self.terms.get(tuple(m), 0j)

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def distance(self, other: "Poly") -> float:
        keys = set(self.terms) | set(other.terms)
        return max((abs(self.coeff(k) - other.coeff(k)) for k in keys), default=0.0)

    def close_to(self, other: "Poly", tol: float = EQ_TOL) -> bool:
        return self.distance(other) <= tol

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.close_to(other)

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, Poly):
            raise TypeError("use multiply(a, b, rt) for algebra products")
        return Poly({m: scalar * c for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __repr__(self):
        return f"Poly({self.terms!r})"


@dataclass(frozen=True)
class Bispinor:
    """Four Poly components, one per bispinor index."""

    components: tuple

    def __post_init__(self):
        if len(self.components) != 4:
            raise ValueError("a bispinor has four components")

    @classmethod
    def basis(cls, a: int, f: Poly | None = None) -> "Bispinor":
        """epsilon_a (x) f."""
        f = Poly.const() if f is None else f
        return cls(tuple(f if k == a else Poly() for k in range(4)))

    def __getitem__(self, a):
        return self.components[a]

    def __add__(self, other):
        return Bispinor(tuple(x + y for x, y in zip(self.components, other.components)))

    def __sub__(self, other):
        return Bispinor(tuple(x - y for x, y in zip(self.components, other.components)))

    def __mul__(self, scalar):
        return Bispinor(tuple(x * scalar for x in self.components))

    __rmul__ = __mul__

    def distance(self, other) -> float:
        return max(x.distance(y) for x, y in zip(self.components, other.components))


@dataclass
class _Degree:
    monos: list
    index: dict


@dataclass
class RewriteTable:
    """Normal-ordering data for one R-matrix.

    ``coeffs[(i, j)]`` lists ``((k, l), c)`` with ``x^i x^j = sum c x^k x^l``
    for every disordered pair; ``order`` lists the generator labels from
    first to last.  Higher-degree reductions are built lazily and cached.
    """

    R: np.ndarray
    order: tuple
    coeffs: dict = field(default_factory=dict)
    conditioning: dict = field(default_factory=dict)
    _rank: tuple = field(default=(), repr=False)
    _rels: np.ndarray = field(default=None, repr=False)
    _degrees: dict = field(default_factory=dict, repr=False)
    _Y: dict = field(default_factory=dict, repr=False)
    _D: dict = field(default_factory=dict, repr=False)
    _S: dict = field(default_factory=dict, repr=False)
    _lock: threading.RLock = field(default_factory=threading.RLock, repr=False)

    @property
    def R4(self) -> np.ndarray:
        return self.R.reshape(4, 4, 4, 4)

    # -- basis bookkeeping ---------------------------------------------
    def degree_basis(self, d: int) -> _Degree:
        if d not in self._degrees:
            ms = monomials(d)
            self._degrees[d] = _Degree(ms, {m: k for k, m in enumerate(ms)})
        return self._degrees[d]

    def first_letter(self, m) -> int:
        """Generator that an ordered monomial starts with."""
        return next(g for g in self.order if m[g] > 0)

    def word(self, m) -> list[int]:
        """Letters of the ordered monomial m, left to right."""
        return [g for g in self.order for _ in range(m[g])]

    def is_ordered_product(self, j: int, m) -> bool:
        """Is x^j * m already an ordered monomial?"""
        return sum(m) == 0 or self._rank[j] <= self._rank[self.first_letter(m)]

    # -- normal ordering -----------------------------------------------
    def left_mult(self, d: int) -> np.ndarray:
        """Y[d] with shape (4, n_d, n_{d+1})."""
        with self._lock:
            if d not in self._Y:
                self._Y[d] = self._solve_degree(d)
            return self._Y[d]

    def _solve_degree(self, d: int) -> np.ndarray:
        lo, hi = self.degree_basis(d), self.degree_basis(d + 1)
        n, n1 = len(lo.monos), len(hi.monos)
        if d == 0:
            y = np.zeros((4, 1, n1), dtype=complex)
            for j in range(4):
                y[j, 0, hi.index[_unit(j)]] = 1
            return y
        prev = self.left_mult(d - 1)
        # each relation sum_kl r[kl] x^k x^l times an ordered monomial of
        # degree d-1 gives a vector in the (j, m) coordinates of C_1 (x) C_d
        rel = self._rels.reshape(-1, 4, 4)
        W = np.einsum("rkl,lpm->rpkm", rel, prev).reshape(-1, 4 * n).T
        ordered, target = [], []
        for j in range(4):
            for a, m in enumerate(lo.monos):
                if self.is_ordered_product(j, m):
                    e = list(m)
                    e[j] += 1
                    ordered.append(j * n + a)
                    target.append(hi.index[tuple(e)])
        taken = set(ordered)
        disordered = [k for k in range(4 * n) if k not in taken]
        WO, WU = W[ordered], W[disordered]
        sv = np.linalg.svd(WU, compute_uv=False)
        ratio = sv[len(disordered) - 1] / sv[0] if len(disordered) <= len(sv) else 0.0
        self.conditioning[d] = float(ratio)
        failure = PivotFailure if d == 1 else NonTermination
        if ratio < CONDITION_FLOOR:
            raise failure(
                f"degree {d + 1}: disordered products are not reducible "
                f"(condition {ratio:.1e}) for generator order {self.order}"
            )
        QU = -np.linalg.lstsq(WU.T, WO.T, rcond=None)[0].T
        # consistency: relations must not tie the ordered monomials together
        resid = np.abs(WO + QU @ WU).max() / max(np.abs(W).max(), 1.0)
        if resid > 1e-8:
            raise failure(
                f"degree {d + 1}: ordered monomials are dependent modulo the "
                f"relations (residual {resid:.1e}) for generator order {self.order}"
            )
        Q = np.zeros((n1, 4 * n), dtype=complex)
        Q[target, ordered] = 1
        Q[np.ix_(target, disordered)] = QU
        return Q.T.reshape(4, n, n1)

    # -- graded vectors ------------------------------------------------
    def to_graded(self, p: Poly) -> dict:
        out = {}
        for m, c in p.terms.items():
            d = sum(m)
            basis = self.degree_basis(d)
            if d not in out:
                out[d] = np.zeros(len(basis.monos), dtype=complex)
            out[d][basis.index[m]] += c
        return out

    def from_graded(self, parts: dict) -> Poly:
        terms = {}
        for d, v in parts.items():
            monos = self.degree_basis(d).monos
            for k in np.nonzero(np.abs(v) > PRUNE)[0]:
                terms[monos[k]] = v[k]
        return Poly(terms)

    def apply_word(self, letters, parts: dict) -> dict:
        """Left-multiply graded vectors by the word letters[0] letters[1] ..."""
        for j in reversed(letters):
            parts = {d + 1: v @ self.left_mult(d)[j] for d, v in parts.items()}
        return parts

    def word_poly(self, letters) -> Poly:
        """Normal form of the product of generators in the given order."""
        return self.from_graded(self.apply_word(list(letters), {0: np.ones(1, complex)}))

    # -- derivatives and star -------------------------------------------
    def derivative_matrices(self, d: int) -> np.ndarray:
        """D[d] with shape (4, n_d, n_{d-1}): row(m) @ D[d][i] = d_i(m)."""
        with self._lock:
            if d not in self._D:
                self._D[d] = self._build_derivative(d)
            return self._D[d]

    def _build_derivative(self, d: int) -> np.ndarray:
        lo, hi = self.degree_basis(d - 1), self.degree_basis(d)
        n, n1 = len(hi.monos), len(lo.monos)
        out = np.zeros((4, n, n1), dtype=complex)
        if d == 1:
            for i in range(4):
                out[i, hi.index[_unit(i)], 0] = 1
            return out
        prev = self.derivative_matrices(d - 1)
        y = self.left_mult(d - 2)
        # T[l, n] maps a tail w to x^n * d_l(w)
        T = np.einsum("lab,nbc->lnac", prev, y)
        R4 = self.R4
        for a, m in enumerate(hi.monos):
            k = self.first_letter(m)
            tail = list(m)
            tail[k] -= 1
            t = lo.index[tuple(tail)]
            out[:, a, :] = np.einsum("lin,lnc->ic", R4[k], T[:, :, t, :])
            out[k, a, t] += 1
        return out

    def star_matrix(self, d: int) -> np.ndarray:
        """row(m) @ S[d] is the normal form of the reversed word of m."""
        with self._lock:
            if d not in self._S:
                basis = self.degree_basis(d)
                rows = []
                for m in basis.monos:
                    rev = self.word(m)[::-1]
                    part = self.apply_word(rev, {0: np.ones(1, complex)})
                    rows.append(part[d])
                self._S[d] = np.array(rows).reshape(len(basis.monos), -1)
            return self._S[d]


def _relations(R: np.ndarray) -> np.ndarray:
    """Orthonormal rows spanning the row space of R - 1."""
    M = np.asarray(R, dtype=complex) - np.eye(16)
    _, sv, vh = np.linalg.svd(M)
    rank = int(np.sum(sv > 1e-9 * max(sv.max(), 1.0)))
    return vh[:rank]


def build_rewrite_table(R, order=None) -> RewriteTable:
    """Solve the quadratic relations for the disordered products.

    With ``order=None`` the generator precedence is picked by
    :func:`choose_order`.
    """
    R = np.asarray(R, dtype=complex)
    if R.shape != (16, 16):
        raise ValueError("R must be 16x16")
    if np.abs(R @ R - np.eye(16)).max() > 1e-8:
        raise PivotFailure("R^2 != 1; the rewriting scheme does not apply")
    if order is None:
        order = choose_order(R)
    order = tuple(int(g) for g in order)
    if sorted(order) != [0, 1, 2, 3]:
        raise ValueError(f"order must be a permutation of 0..3, got {order}")
    rank = [0] * 4
    for pos, g in enumerate(order):
        rank[g] = pos
    rels = _relations(R)
    if len(rels) != 6:
        raise PivotFailure(f"rank(R - 1) = {len(rels)}, expected 6")
    rt = RewriteTable(R=R, order=order, _rank=tuple(rank), _rels=rels)
    y = rt.left_mult(1)
    deg1, deg2 = rt.degree_basis(1), rt.degree_basis(2)
    for i in range(4):
        for j in range(4):
            if rank[i] <= rank[j]:
                continue
            row = y[i, deg1.index[_unit(j)]]
            pairs = []
            for k in np.nonzero(np.abs(row) > PRUNE)[0]:
                m = deg2.monos[k]
                ab = rt.word(m)
                pairs.append(((ab[0], ab[1]), complex(row[k])))
            rt.coeffs[(i, j)] = pairs
    return rt


def order_score(R, order, max_degree: int = 3) -> float:
    """Worst relative conditioning of the reductions up to max_degree."""
    try:
        rt = build_rewrite_table(R, order)
        for d in range(2, max_degree):
            rt.left_mult(d)
    except (PivotFailure, NonTermination):
        return 0.0
    return min(rt.conditioning.values())


def choose_order(R, max_degree: int = 3) -> tuple:
    """Generator precedence for normal ordering.

    Keeps x0 < x1 < x2 < x3 unless another precedence is better conditioned
    by more than a factor of ten; ties go to the lexicographically first.
    """
    scores = {p: order_score(R, p, max_degree) for p in itertools.permutations(range(4))}
    best = max(scores.values())
    if best == 0.0:
        raise NonTermination("no generator order gives a well-defined normal form")
    if scores[DEFAULT_ORDER] * 10 >= best:
        return DEFAULT_ORDER
    return min(p for p, s in scores.items() if s == best)


def table_residual(rt: RewriteTable) -> float:
    """Substitute the quadratic table into (R - 1)(x (x) x); max leftover."""
    rels = rt._rels.reshape(-1, 4, 4)
    deg2 = rt.degree_basis(2)
    worst = 0.0
    for r in rels:
        acc = np.zeros(len(deg2.monos), dtype=complex)
        for k in range(4):
            for l in range(4):
                if abs(r[k, l]) < PRUNE:
                    continue
                if (k, l) in rt.coeffs:
                    for (a, b), c in rt.coeffs[(k, l)]:
                        e = [0] * 4
                        e[a] += 1
                        e[b] += 1
                        acc[deg2.index[tuple(e)]] += r[k, l] * c
                else:
                    e = [0] * 4
                    e[k] += 1
                    e[l] += 1
                    acc[deg2.index[tuple(e)]] += r[k, l]
        worst = max(worst, np.abs(acc).max())
    return float(worst)


# -- algebra operations ------------------------------------------------------

def multiply(a: Poly, b: Poly, rt: RewriteTable) -> Poly:
    parts_b = rt.to_graded(b)
    total: dict = {}
    for m, c in a.terms.items():
        for d, v in rt.apply_word(rt.word(m), parts_b).items():
            total[d] = total.get(d, 0) + c * v
    return rt.from_graded(total)


def star(a: Poly, rt: RewriteTable) -> Poly:
    """Antilinear antihomomorphism fixing every generator."""
    return rt.from_graded(
        {d: v.conj() @ rt.star_matrix(d) for d, v in rt.to_graded(a).items()}
    )


def derive(i: int, f: Poly, ss, rt: RewriteTable) -> Poly:
    """d_i f, from d_i(x^k w) = delta^k_i w + R^{kl}_{in} x^n d_l(w).

    The R-matrix comes from ``rt``; ``ss`` is accepted for symmetry with
    the other operations.
    """
    return rt.from_graded(
        {d - 1: v @ rt.derivative_matrices(d)[i] for d, v in rt.to_graded(f).items() if d > 0}
    )


def laplacian(f: Poly, ss, rt: RewriteTable) -> Poly:
    """g^{ij} d_j d_i f."""
    out = {}
    for d, v in rt.to_graded(f).items():
        if d < 2:
            continue
        box = laplacian_matrix(d, ss, rt)
        out[d - 2] = v @ box
    return rt.from_graded(out)


def laplacian_matrix(d: int, ss, rt: RewriteTable) -> np.ndarray:
    """Row-vector form of the Laplacian from degree d to d - 2."""
    hi, lo = rt.derivative_matrices(d), rt.derivative_matrices(d - 1)
    return np.einsum("ij,iab,jbc->ac", ss.g, hi, lo)


def dirac_apply(phi: Bispinor, ss, rt: RewriteTable) -> Bispinor:
    """(D phi)^s = gamma^i[s, a] d_i(phi^a)."""
    grads = [[derive(i, phi[a], ss, rt) for i in range(4)] for a in range(4)]
    out = []
    for s in range(4):
        acc = Poly()
        for i in range(4):
            for a in range(4):
                c = ss.gamma[i][s, a]
                if c != 0:
                    acc = acc + c * grads[a][i]
        out.append(acc)
    return Bispinor(tuple(out))


def pairing(phi: Bispinor, chi: Bispinor, ss, rt: RewriteTable) -> Poly:
    """sum_ab Abisp[a, b] star(phi^a) chi^b."""
    acc = Poly()
    for a in range(4):
        if phi[a].is_zero():
            continue
        left = star(phi[a], rt)
        for b in range(4):
            c = ss.Abisp[a, b]
            if c != 0 and not chi[b].is_zero():
                acc = acc + c * multiply(left, chi[b], rt)
    return acc


def lagrangian(phi: Bispinor, m: float, ss, rt: RewriteTable) -> Poly:
    """pairing(phi, i D phi - m phi)."""
    if m < 0:
        raise ValueError("mass must be non-negative")
    return pairing(phi, 1j * dirac_apply(phi, ss, rt) - m * phi, ss, rt)


# -- checks --------------------------------------------------------------------

def pbw_dimension(R, d: int) -> int:
    """dim of degree-d words modulo the ideal, by direct rank computation."""
    M = np.asarray(R, dtype=complex) - np.eye(16)
    if d < 2:
        return 4**d
    blocks = [np.kron(np.kron(np.eye(4**a), M), np.eye(4 ** (d - 2 - a))) for a in range(d - 1)]
    return 4**d - int(np.linalg.matrix_rank(np.hstack(blocks), tol=1e-9))


def normal_form_span(rt: RewriteTable, d: int) -> int:
    """Rank of the normal forms of all 4^d words of degree d."""
    rows = [rt.apply_word(list(w), {0: np.ones(1, complex)})[d] for w in itertools.product(range(4), repeat=d)]
    return int(np.linalg.matrix_rank(np.array(rows), tol=1e-9))


def classical_dimension(d: int) -> int:
    return comb(d + 3, 3)


def associativity_defect(rt: RewriteTable, words=None, seed: int = 0, pairs: int = 50) -> dict:
    """Compare (w1)(w2) computed from normal forms with nf(w1 w2).

    Returns the worst absolute error on generator triples and the worst
    error relative to the largest coefficient on random word pairs.
    """
    gens = [Poly.gen(i) for i in range(4)]
    triple = 0.0
    for a, b, c in itertools.product(range(4), repeat=3):
        lhs = multiply(multiply(gens[a], gens[b], rt), gens[c], rt)
        rhs = multiply(gens[a], multiply(gens[b], gens[c], rt), rt)
        triple = max(triple, lhs.distance(rhs))
    rng = np.random.default_rng(seed)
    if words is None:
        words = [
            (tuple(rng.integers(0, 4, rng.integers(1, 5))), tuple(rng.integers(0, 4, rng.integers(1, 5))))
            for _ in range(pairs)
        ]
    rel = 0.0
    for w1, w2 in words:
        whole = rt.word_poly(w1 + w2)
        split = multiply(rt.word_poly(w1), rt.word_poly(w2), rt)
        rel = max(rel, whole.distance(split) / max(whole.max_abs(), 1.0))
    return {"triples": triple, "pairs_relative": rel}
