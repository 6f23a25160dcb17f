"""Prime-field arithmetic, sparse multivariate polynomials and dense linear algebra mod q."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime

DEFAULT_Q = 101
SECOND_Q = 131
MAX_Q = 2**31  # products of two residues must fit in int64

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class PrimeField:
    q: int

    def __post_init__(self):
        if self.q < 5 or not isprime(self.q):
            raise ValueError(f"modulus must be a prime >= 5, got {self.q}")
        if self.q >= MAX_Q:
            raise ValueError(f"modulus must be below 2^31, got {self.q}")

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.q)

    def random(self, rng: np.random.Generator, size=None):
        return rng.integers(0, self.q, size=size)


def check_modulus(q: int) -> int:
    PrimeField(q)
    return q


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[Exponent, ...]:
    """Exponent vectors of the given total degree, in descending lex order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(sorted(out, reverse=True))


def monomials_upto(nvars: int, degree: int) -> tuple[Exponent, ...]:
    """Graded-lex list of all monomials of degree <= ``degree``."""
    return tuple(e for d in range(degree + 1) for e in monomials(nvars, d))


class MultiPoly:
    """Sparse polynomial over F_q: a map from exponent vectors to nonzero residues.

    Instances are treated as immutable; every operation returns a new polynomial.
    """

    __slots__ = ("q", "nvars", "terms")

    def __init__(self, nvars: int, q: int, terms: dict[Exponent, int] | None = None):
        self.nvars = nvars
        self.q = q
        clean: dict[Exponent, int] = {}
        for e, c in (terms or {}).items():
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            c %= q
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    # construction helpers
    @classmethod
    def zero(cls, nvars: int, q: int) -> MultiPoly:
        return cls(nvars, q)

    @classmethod
    def constant(cls, c: int, nvars: int, q: int) -> MultiPoly:
        return cls(nvars, q, {(0,) * nvars: c})

    @classmethod
    def variable(cls, i: int, nvars: int, q: int) -> MultiPoly:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, q, {tuple(e): 1})

    @classmethod
    def linear_form(cls, coeffs: Sequence[int], q: int) -> MultiPoly:
        n = len(coeffs)
        return cls(n, q, {tuple(int(i == j) for j in range(n)): int(c) for i, c in enumerate(coeffs)})

    @classmethod
    def monomial(cls, exps: Exponent, q: int, coeff: int = 1) -> MultiPoly:
        return cls(len(exps), q, {tuple(exps): coeff})

    # basic properties
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, exps: Exponent) -> int:
        return self.terms.get(tuple(exps), 0)

    def sorted_terms(self) -> list[tuple[Exponent, int]]:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    # arithmetic
    def _check(self, other: MultiPoly):
        if self.nvars != other.nvars or self.q != other.q:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = MultiPoly.constant(other, self.nvars, self.q)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPoly(self.nvars, self.q, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, self.q, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return MultiPoly(self.nvars, self.q, {e: c * int(other) for e, c in self.terms.items()})
        self._check(other)
        q = self.q
        terms: dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = (terms.get(e, 0) + c1 * c2) % q
        return MultiPoly(self.nvars, q, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = MultiPoly.constant(1, self.nvars, self.q)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.nvars, self.q, self.terms) == (other.nvars, other.q, other.terms)

    def __hash__(self):
        return hash((self.nvars, self.q, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"{c}*{mon}" if mon else str(c))
        return " + ".join(parts)

    # evaluation and substitution
    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        q = self.q
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * pow(int(x), k, q) % q
            total += v
        return total % q

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at every row of an (N, nvars) integer array."""
        points = np.asarray(points, dtype=np.int64) % self.q
        if points.shape[1] != self.nvars:
            raise ValueError("arity mismatch")
        q = self.q
        out = np.zeros(points.shape[0], dtype=np.int64)
        powers: dict[tuple[int, int], np.ndarray] = {}

        def pw(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = points[:, i] if k == 1 else pw(i, k - 1) * points[:, i] % q
            return powers[key]

        for e, c in self.terms.items():
            v = np.full(points.shape[0], c, dtype=np.int64)
            for i, k in enumerate(e):
                if k:
                    v = v * pw(i, k) % q
            out = (out + v) % q
        return out

    def substitute(self, forms: Sequence[MultiPoly]) -> MultiPoly:
        """Compose: replace variable i by ``forms[i]``."""
        if len(forms) != self.nvars:
            raise ValueError("need one form per variable")
        nv = forms[0].nvars
        powers: dict[tuple[int, int], MultiPoly] = {}

        def pw(i, k):
            if (i, k) not in powers:
                powers[(i, k)] = forms[i] if k == 1 else pw(i, k - 1) * forms[i]
            return powers[(i, k)]

        acc: dict[Exponent, int] = {}
        for e, c in self.terms.items():
            term = MultiPoly.constant(c, nv, self.q)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            for te, tc in term.terms.items():
                acc[te] = acc.get(te, 0) + tc
        return MultiPoly(nv, self.q, acc)

    def coefficient_vector(self, basis: Sequence[Exponent]) -> list[int]:
        return [self.terms.get(e, 0) for e in basis]

    # serialization
    def to_json(self) -> list:
        return [[list(e), c] for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: list, nvars: int, q: int) -> MultiPoly:
        return cls(nvars, q, {tuple(e): c for e, c in data})


def evaluate(f: MultiPoly, p: "ProjPoint") -> int:
    return f.evaluate(p.coords)


def determinant(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Laplace expansion; only used for the small (<= 3x3) matrices of linear forms here."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = MultiPoly.zero(matrix[0][0].nvars, matrix[0][0].q)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


# ---------------------------------------------------------------------------
# projective points and lines


def normalize(coords: Sequence[int], q: int) -> tuple[int, ...]:
    v = [int(c) % q for c in coords]
    for c in v:
        if c:
            inv = pow(c, -1, q)
            return tuple(x * inv % q for x in v)
    raise ValueError("the zero vector is not a projective point")


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[int, ...]
    q: int

    def __post_init__(self):
        object.__setattr__(self, "coords", normalize(self.coords, self.q))

    @property
    def dim(self) -> int:
        return len(self.coords) - 1


@dataclass(frozen=True)
class ProjLine:
    base: ProjPoint
    direction: ProjPoint

    def __post_init__(self):
        if self.base.q != self.direction.q or len(self.base.coords) != len(self.direction.coords):
            raise ValueError("line endpoints live in different spaces")
        if rank([self.base.coords, self.direction.coords], self.base.q) != 2:
            raise ValueError("base and direction are not independent")

    @property
    def q(self) -> int:
        return self.base.q

    def point(self, t: int) -> tuple[int, ...]:
        return tuple((b + t * d) % self.q for b, d in zip(self.base.coords, self.direction.coords))


@dataclass(frozen=True)
class ProjPlane:
    """Plane spanned by three independent points; parametrized by (u0:u1:u2)."""

    points: tuple[ProjPoint, ProjPoint, ProjPoint]

    def __post_init__(self):
        q = self.points[0].q
        if rank([p.coords for p in self.points], q) != 3:
            raise ValueError("plane points are not independent")

    @property
    def q(self) -> int:
        return self.points[0].q

    def linear_forms(self) -> list[MultiPoly]:
        """Coordinate i of the plane point u0*P0 + u1*P1 + u2*P2, as a form in u."""
        n = len(self.points[0].coords)
        return [MultiPoly.linear_form([p.coords[i] for p in self.points], self.q) for i in range(n)]

    def matrix(self) -> list[list[int]]:
        return [list(p.coords) for p in self.points]


# ---------------------------------------------------------------------------
# univariate polynomials, coefficient lists low -> high


def trim(a: Sequence[int], q: int) -> list[int]:
    a = [int(c) % q for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
    return trim(out, q)


def poly_divmod(a: Sequence[int], b: Sequence[int], q: int) -> tuple[list[int], list[int]]:
    a = trim(a, q)
    b = trim(b, q)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    inv = pow(b[-1], -1, q)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv % q
        shift = len(a) - len(b)
        quot[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % q
        a = trim(a, q)
    return trim(quot, q), a


def monic(a: Sequence[int], q: int) -> list[int]:
    a = trim(a, q)
    if not a:
        return a
    inv = pow(a[-1], -1, q)
    return [c * inv % q for c in a]


def gcd_univariate(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    """Monic gcd over F_q of two coefficient vectors (constant term first)."""
    a = trim(a, q)
    b = trim(b, q)
    if not a and not b:
        raise ValueError("gcd of two zero polynomials is undefined")
    while b:
        a, b = b, poly_divmod(a, b, q)[1]
    return monic(a, q)


def gcd_many(polys: Iterable[Sequence[int]], q: int) -> list[int] | None:
    """gcd of a family; None when every member is zero."""
    g: list[int] | None = None
    for p in polys:
        p = trim(p, q)
        if not p:
            continue
        g = monic(p, q) if g is None else gcd_univariate(g, p, q)
        if len(g) == 1:
            break
    return g


def derivative(a: Sequence[int], q: int) -> list[int]:
    return trim([i * c for i, c in enumerate(a)][1:], q)


def is_squarefree(a: Sequence[int], q: int) -> bool:
    a = trim(a, q)
    return len(gcd_univariate(a, derivative(a, q), q)) == 1


def binary_gcd_degree(forms: Sequence[Sequence[int]], q: int) -> int | None:
    """Degree of the gcd of binary forms given as coefficient lists of s^(d-k) t^k.

    Returns None when all forms vanish. The root at infinity (s = 0) is accounted
    for by the drop in t-degree of every form.
    """
    g = gcd_many(forms, q)
    if g is None:
        return None
    at_infinity = min(len(f) - len(trim(f, q)) for f in forms if trim(f, q))
    return len(g) - 1 + at_infinity


# ---------------------------------------------------------------------------
# dense linear algebra mod q


def row_reduce(matrix, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns, by exact Gaussian elimination."""
    a = np.array(matrix, dtype=np.int64) % q
    if a.ndim != 2:
        a = a.reshape(len(matrix), -1) if a.size else np.zeros((len(matrix), 0), dtype=np.int64)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, q) % q
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % q
        pivots.append(c)
        r += 1
    return a, pivots


def rank(matrix, q: int) -> int:
    return len(row_reduce(matrix, q)[1])


def nullspace(matrix, q: int, ncols: int | None = None) -> list[list[int]]:
    """Basis of the right kernel, one vector per free column (reduced echelon form)."""
    a = np.array(matrix, dtype=np.int64)
    if a.size == 0:
        n = ncols if ncols is not None else (a.shape[1] if a.ndim == 2 else 0)
        return [[int(i == j) for j in range(n)] for i in range(n)]
    rref, pivots = row_reduce(a, q)
    n = rref.shape[1]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, p in enumerate(pivots):
            v[p] = int(-rref[i, f] % q)
        basis.append(v)
    return basis


def solve_vandermonde(values: Sequence[int], q: int) -> list[int]:
    """Coefficients c with sum_k c_k t^k = values[t] for t = 0..len(values)-1."""
    d = len(values) - 1
    if q <= d:
        raise ValueError(f"need q > {d} interpolation nodes, got q = {q}")
    vander = [[pow(t, k, q) for k in range(d + 1)] + [int(values[t]) % q] for t in range(d + 1)]
    rref, _ = row_reduce(vander, q)
    return [int(x) for x in rref[:, -1]]


def restrict_to_line(f: MultiPoly, line: ProjLine) -> list[int]:
    """Coefficients (t^0 .. t^d) of f(base + t * direction), by interpolation at t = 0..d."""
    if f.nvars != len(line.base.coords):
        raise ValueError("arity mismatch")
    d = max(f.degree, 0)
    if line.q <= d:
        raise ValueError(f"modulus {line.q} too small to interpolate degree {d}")
    if f.is_zero():
        return [0] * (d + 1)
    return solve_vandermonde([f.evaluate(line.point(t)) for t in range(d + 1)], line.q)


def restrict_to_plane(f: MultiPoly, plane: ProjPlane) -> MultiPoly:
    """f composed with the plane parametrization; a form in 3 variables."""
    if f.nvars != len(plane.points[0].coords):
        raise ValueError("arity mismatch")
    return f.substitute(plane.linear_forms())


def random_point(rng: np.random.Generator, n: int, q: int) -> ProjPoint:
    while True:
        v = rng.integers(0, q, size=n + 1)
        if v.any():
            return ProjPoint(tuple(int(x) for x in v), q)


def projective_points(n: int, q: int) -> np.ndarray:
    """All normalized points of P^n(F_q) as an (N, n+1) array."""
    return projective_chunk(n, q, 0, projective_count(n, q))


def projective_count(n: int, q: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def projective_chunk(n: int, q: int, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of the normalized transversal of P^n(F_q).

    Points with leading 1 in position i come in a block of size q^(n-i);
    inside a block the free trailing coordinates run in base-q order.
    """
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.zeros((idx.size, n + 1), dtype=np.int64)
    offset = 0
    for lead in range(n + 1):
        size = q ** (n - lead)
        mask = (idx >= offset) & (idx < offset + size)
        if mask.any():
            local = idx[mask] - offset
            out[mask, lead] = 1
            for j in range(n, lead, -1):
                out[mask, j] = local % q
                local //= q
        offset += size
    return out


def monomial_matrix(points: np.ndarray, exps: Sequence[Exponent], q: int) -> np.ndarray:
    """(N, len(exps)) matrix of the monomials evaluated at the rows of ``points``, mod q."""
    points = np.asarray(points, dtype=np.int64) % q
    n, nv = points.shape
    top = max((max(e) for e in exps if e), default=0)
    powers = [[np.ones(n, dtype=np.int64)] for _ in range(nv)]
    for i in range(nv):
        for _ in range(top):
            powers[i].append(powers[i][-1] * points[:, i] % q)
    out = np.empty((n, len(exps)), dtype=np.int64)
    for j, e in enumerate(exps):
        col = np.ones(n, dtype=np.int64)
        for i, k in enumerate(e):
            if k:
                col = col * powers[i][k] % q
        out[:, j] = col
    return out
