"""Chow ring of the Grassmannian G(1,n) of lines in P^n.

Schubert cycles are indexed by two-row partitions (a, b) with n-1 >= a >= b >= 0;
sigma_{a,b} has codimension a + b. Products are computed with Pieri's rule,
general classes being reduced to special ones by the two-row Giambelli formula
sigma_{a,b} = sigma_a sigma_b - sigma_{a+1} sigma_{b-1}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence


@dataclass(frozen=True, order=True)
class SchubertSymbol:
    a: int
    b: int
    n: int

    def __post_init__(self):
        if not (self.n - 1 >= self.a >= self.b >= 0):
            raise ValueError(f"s({self.a},{self.b}) is not a Schubert symbol on G(1,{self.n})")

    @property
    def codim(self) -> int:
        return self.a + self.b

    def dual(self) -> SchubertSymbol:
        return SchubertSymbol(self.n - 1 - self.b, self.n - 1 - self.a, self.n)


def grassmannian_dim(n: int) -> int:
    return 2 * (n - 1)


@dataclass(frozen=True)
class SchubertClass:
    """Integer combination of Schubert symbols, all of one codimension."""

    n: int
    terms: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (a, b), c in self.terms.items():
            SchubertSymbol(a, b, self.n)
            if c:
                clean[(a, b)] = int(c)
        if len({a + b for a, b in clean}) > 1:
            raise ValueError("Schubert classes must be graded-homogeneous")
        object.__setattr__(self, "terms", dict(sorted(clean.items(), reverse=True)))

    @classmethod
    def sigma(cls, a: int, b: int, n: int, coeff: int = 1) -> SchubertClass:
        return cls(n, {(a, b): coeff})

    @classmethod
    def zero(cls, n: int) -> SchubertClass:
        return cls(n, {})

    @property
    def codim(self) -> int | None:
        for a, b in self.terms:
            return a + b
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, a: int, b: int) -> int:
        return self.terms.get((a, b), 0)

    def _check(self, other: SchubertClass):
        if self.n != other.n:
            raise ValueError(f"ambient dimensions differ: {self.n} vs {other.n}")

    def __add__(self, other: SchubertClass) -> SchubertClass:
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return SchubertClass(self.n, terms)

    def __neg__(self) -> SchubertClass:
        return SchubertClass(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: SchubertClass) -> SchubertClass:
        return self + (-other)

    def scale(self, c: int) -> SchubertClass:
        return SchubertClass(self.n, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return mult(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> SchubertClass:
        result = SchubertClass.sigma(0, 0, self.n)
        for _ in range(k):
            result = mult(result, self)
        return result

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in self.terms.items():
            sym = f"s({a},{b})"
            parts.append(sym if c == 1 else f"-{sym}" if c == -1 else f"{c} {sym}")
        return " + ".join(parts).replace("+ -", "- ")


def pieri(cls: SchubertClass, p: int) -> SchubertClass:
    """Multiply by the special class sigma_p = sigma_{p,0}."""
    n = cls.n
    if not 0 <= p <= n - 1:
        raise ValueError(f"sigma_{p} does not exist on G(1,{n})")
    out: dict[tuple[int, int], int] = {}
    for (a, b), coeff in cls.terms.items():
        total = a + b + p
        # c + d = total with n-1 >= c >= a >= d >= b
        for d in range(b, a + 1):
            c = total - d
            if a <= c <= n - 1:
                out[(c, d)] = out.get((c, d), 0) + coeff
    return SchubertClass(n, out)


def special(p: int, n: int) -> SchubertClass:
    return SchubertClass.sigma(p, 0, n) if 0 <= p <= n - 1 else SchubertClass.zero(n)


def _times_symbol(cls: SchubertClass, a: int, b: int) -> SchubertClass:
    # Giambelli: sigma_{a,b} = sigma_a sigma_b - sigma_{a+1} sigma_{b-1}
    n = cls.n
    first = pieri(pieri(cls, a), b)
    if b == 0 or a + 1 > n - 1:
        return first
    return first - pieri(pieri(cls, a + 1), b - 1)


def mult(c1: SchubertClass, c2: SchubertClass) -> SchubertClass:
    """Product in the Chow ring of G(1,n)."""
    c1._check(c2)
    out = SchubertClass.zero(c1.n)
    for (a, b), coeff in c2.terms.items():
        out = out + _times_symbol(c1, a, b).scale(coeff)
    return out


def pair(c1: SchubertClass, c2: SchubertClass) -> int:
    """Intersection number of two classes of complementary codimension."""
    c1._check(c2)
    top = grassmannian_dim(c1.n)
    if not c1.is_zero() and not c2.is_zero() and c1.codim + c2.codim != top:
        raise ValueError(f"codimensions {c1.codim} + {c2.codim} are not complementary in dimension {top}")
    if c1.is_zero() or c2.is_zero():
        return 0
    return mult(c1, c2).coefficient(c1.n - 1, c1.n - 1)


def grassmannian_degree(n: int) -> int:
    """Degree of G(1,n) in its Pluecker embedding: sigma_1^{2(n-1)}."""
    return pair(SchubertClass.sigma(1, 0, n) ** (2 * (n - 1) - 1), SchubertClass.sigma(1, 0, n))


@dataclass(frozen=True)
class CongruenceDegrees:
    """Sequence of degrees (a_0, ..., a_nu) of a congruence, nu = floor((n-1)/2)."""

    n: int
    degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(x) for x in self.degrees))
        if self.n < 2:
            raise ValueError("need n >= 2")
        if len(self.degrees) != self.nu + 1:
            raise ValueError(f"expected {self.nu + 1} degrees for n = {self.n}, got {len(self.degrees)}")
        if any(x < 0 for x in self.degrees):
            raise ValueError("degrees must be nonnegative")

    @property
    def nu(self) -> int:
        return (self.n - 1) // 2

    @property
    def order(self) -> int:
        return self.degrees[0]

    @property
    def congruence_class(self) -> int:
        return self.degrees[-1]

    def a(self, i: int) -> int:
        # degrees past nu are read as zero
        return self.degrees[i] if 0 <= i < len(self.degrees) else 0

    def schubert_class(self) -> SchubertClass:
        n = self.n
        return SchubertClass(n, {(n - 1 - i, i): ai for i, ai in enumerate(self.degrees)})


def v_pi_degree(B: CongruenceDegrees) -> int:
    """Degree of the hypersurface swept by the lines meeting a general (n-2)-plane."""
    n = B.n
    g_pi = pieri(B.schubert_class(), 1)
    value = pair(g_pi, special(n - 2, n))
    if value != B.a(0) + B.a(1):
        raise AssertionError(f"Schubert calculus gives {value}, expected a0 + a1 = {B.a(0) + B.a(1)}")
    return value


def sigma_scroll_degree(B: CongruenceDegrees) -> int:
    """Degree of the scroll of lines meeting two general (n-2)-planes (n > 3)."""
    n = B.n
    if n <= 3:
        raise ValueError("the scroll degree formula needs n > 3")
    cls = pieri(pieri(B.schubert_class(), 1), 1)
    value = pair(cls, special(n - 3, n))
    expected = B.a(0) + 2 * B.a(1) + B.a(2)
    if value != expected:
        raise AssertionError(f"Schubert calculus gives {value}, expected a0 + 2a1 + a2 = {expected}")
    return value


def symbols_of_codim(n: int, k: int) -> list[SchubertSymbol]:
    return [SchubertSymbol(k - b, b, n) for b in range(0, k // 2 + 1) if k - b <= n - 1]


def basis(n: int) -> list[SchubertSymbol]:
    return [s for k in range(grassmannian_dim(n) + 1) for s in symbols_of_codim(n, k)]


def as_class(sym: SchubertSymbol | Sequence[int], n: int | None = None) -> SchubertClass:
    if isinstance(sym, SchubertSymbol):
        return SchubertClass.sigma(sym.a, sym.b, sym.n)
    a, b = sym
    return SchubertClass.sigma(a, b, n)
