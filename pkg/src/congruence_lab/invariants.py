"""Numerical invariants of surfaces in P^4 and of their trisecant congruences.

Every formula is evaluated in exact rational arithmetic; a value that should be
an integer but is not raises instead of being rounded.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence


class NonIntegralError(ValueError):
    """A formula that must produce an integer produced a proper fraction."""


def _integral(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise NonIntegralError(f"{what} = {value} is not an integer")
    return int(value)


@dataclass(frozen=True)
class SurfaceInvariants:
    n: int
    m: int
    pi: int
    Ksq: int
    chi: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("degree must be positive")

    @property
    def HK(self) -> int:
        # adjunction on the hyperplane section: 2*pi - 2 = m + H.K
        return 2 * self.pi - 2 - self.m


@dataclass(frozen=True)
class InvariantRow:
    m: int
    h: int
    k: int
    a: int
    x: int
    pi: int
    audit: tuple[str, ...] = field(default=(), compare=False)

    def as_tuple(self) -> tuple[int, ...]:
        return (self.m, self.h, self.k, self.a, self.x, self.pi)


@dataclass(frozen=True)
class ParasiticDecomposition:
    """Multiset of parasitic planes, as (plane-curve degree mu, number of planes b)."""

    parts: tuple[tuple[int, int], ...]
    n: int = 4

    @property
    def multiplicities(self) -> tuple[tuple[int, int], ...]:
        return tuple((comb(mu, self.n - 1), b) for mu, b in self.parts)

    @property
    def x(self) -> int:
        return sum(comb(mu, self.n - 1) ** 2 * b for mu, b in self.parts)

    @property
    def plane_count(self) -> int:
        return sum(b for _, b in self.parts)


@dataclass(frozen=True)
class FocalBudget:
    """Lengths h_a of the focal points on a general congruence line.

    ``indices`` gives, for each length, the index i of the fundamental
    (n-1-i)-locus the point lies on; it defaults to 1 (the fundamental
    (n-2)-locus) for every point.
    """

    n: int
    lengths: tuple[int, ...]
    indices: tuple[int, ...] | None = None

    def index_list(self) -> tuple[int, ...]:
        return self.indices if self.indices is not None else (1,) * len(self.lengths)


# ---------------------------------------------------------------------------
# multiple point formulae


def triple_points_general(inv: SurfaceInvariants) -> int:
    """Trisecant (n-3)-planes through a general (n-4)-plane of a smooth surface in P^n."""
    if inv.n < 4:
        raise ValueError("the triple point formula needs n >= 4")
    m, pi, K2, chi = (Fraction(v) for v in (inv.m, inv.pi, inv.Ksq, inv.chi))
    t = m**3 / 6 - Fraction(3, 2) * m**2 + Fraction(13, 3) * m - m * pi + K2 + 8 * pi - 4 * chi - 8
    return _integral(t, "triple point count")


def triple_points_p4(m: int, pi: int, chi: int) -> int:
    """Apparent triple points of a smooth surface in P^4."""
    return comb(m - 1, 3) - pi * (m - 3) + 2 * chi - 2 if m >= 1 else 0


def smooth_quintic_parity(chi: int, pi: int) -> int:
    """Triple point count of a would-be smooth quintic surface in P^4; always even."""
    return 2 * (chi - pi + 1)


def double_point_residual(inv: SurfaceInvariants) -> int:
    """m^2 - 10m - 5HK - 2K^2 + 12chi; zero exactly for smooth surfaces of P^4."""
    return inv.m**2 - 10 * inv.m - 5 * inv.HK - 2 * inv.Ksq + 12 * inv.chi


def double_point_consistency(inv: SurfaceInvariants) -> int:
    """Return the double point residual after checking it against the two triple point formulas.

    The general formula at n = 4 minus the P^4 formula equals minus half the residual.
    """
    residual = double_point_residual(inv)
    delta = consistency_delta(inv)
    if Fraction(delta) != Fraction(-residual, 2):
        raise AssertionError(f"delta {delta} != -residual/2 = {Fraction(-residual, 2)}")
    return residual


def consistency_delta(inv: SurfaceInvariants) -> int:
    general = triple_points_general(SurfaceInvariants(4, inv.m, inv.pi, inv.Ksq, inv.chi))
    return general - triple_points_p4(inv.m, inv.pi, inv.chi)


# ---------------------------------------------------------------------------
# congruence invariants for surfaces of P^4


def cayley_class(h: int, m: int) -> int:
    """Class of the trisecant congruence from the apparent double points h of a hyperplane section."""
    if m < 3 or h < 0:
        raise ValueError("need m >= 3 and h >= 0")
    return h * (m - 2) - comb(m, 3)


def multiplicity_k(h: int, m: int) -> int:
    return h - m + 2


def clebsch_h(m: int, pi: int) -> int:
    """Apparent double points of a degree m space curve of geometric genus pi."""
    if m < 3:
        raise ValueError("need m >= 3")
    top = comb(m - 1, 2)
    if not 0 <= pi <= top:
        raise ValueError(f"genus {pi} out of range 0..{top} for degree {m}")
    return top - pi


def integrality_gate(m: int) -> int | None:
    """h = m(m+2)/6 - 1, or None when that is not a nonnegative integer. Not valid for m = 5."""
    if m == 5:
        raise ValueError("the formula for h degenerates at m = 5")
    if not 3 < m < 9:
        raise ValueError("degree outside 3 < m < 9")
    h = Fraction(m * (m + 2), 6) - 1
    if h.denominator != 1 or h < 0:
        return None
    return int(h)


def parasitic_excess(m: int, k: int, a: int, n: int = 4, a2: int = 0) -> int:
    """x = (n-1)^2 k^2 - k^2 m - 1 - 2a - a2; the weighted count of parasitic planes."""
    if k < 1:
        raise ValueError("need k >= 1")
    x = (n - 1) ** 2 * k**2 - k**2 * m - 1 - 2 * a - a2
    if x < 0:
        raise ValueError(f"infeasible invariants: x = {x} < 0")
    return x


def check_agen(components: Sequence[tuple[int, int]], a0: int, a1: int, pure_dim: bool = False) -> bool:
    """sum l_j k_j <= a0 + a1, with equality when the fundamental locus is pure of dim n-2."""
    total = sum(l * k for l, k in components)
    return total == a0 + a1 if pure_dim else total <= a0 + a1


def check_bgen(a0: int, a1: int, a2: int, x: int, components: Sequence[tuple[int, int]]) -> bool:
    """(a0 + a1)^2 == x + sum k_j^2 m_j + a0 + 2a1 + a2."""
    return (a0 + a1) ** 2 == x + sum(k * k * m for k, m in components) + a0 + 2 * a1 + a2


def parasitic_multiplicity(mus: Sequence[int], n: int = 4) -> int:
    return sum(comb(mu, n - 1) for mu in mus)


def decompose_x(x: int, n: int = 4) -> list[ParasiticDecomposition]:
    """All multisets of parasitic planes whose squared multiplicities sum to x."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    weights = []
    mu = n - 1
    while comb(mu, n - 1) ** 2 <= x:
        weights.append((mu, comb(mu, n - 1) ** 2))
        mu += 1
    weights.reverse()  # largest plane-curve degree first

    found: list[ParasiticDecomposition] = []

    def walk(i: int, remaining: int, acc: list[tuple[int, int]]):
        if remaining == 0:
            found.append(ParasiticDecomposition(tuple(acc), n))
            return
        if i == len(weights):
            return
        mu, w = weights[i]
        for b in range(remaining // w, -1, -1):
            walk(i + 1, remaining - b * w, acc + [(mu, b)] if b else acc)

    walk(0, x, [])
    return found


def focal_budget_check(budget: FocalBudget) -> bool:
    idx = budget.index_list()
    if len(idx) != len(budget.lengths):
        raise ValueError("one codimension index per length")
    return sum(budget.lengths) == budget.n - 1 and all(h >= i for h, i in zip(budget.lengths, idx))


def degree_bounds(n: int, kprime: int) -> tuple[Fraction, Fraction]:
    """Open interval (lower, upper) for the degree of an irreducible fundamental (n-2)-locus."""
    if kprime < 1:
        raise ValueError("k' must be positive")
    return Fraction(n - 1, kprime), Fraction((n - 1) ** 2)


def congruence_sectional_genus(p_a: int, a: int) -> int:
    if p_a < 0 or a < 0:
        raise ValueError("need p_a >= 0 and a >= 0")
    return p_a + a - 1


# ---------------------------------------------------------------------------
# classification in P^4


@dataclass(frozen=True)
class Exclusion:
    m: int
    h: int | None
    reason: str


def classify_p4_detailed() -> tuple[list[InvariantRow], list[Exclusion]]:
    """Rows (m, h, k, a, x, pi) surviving every constraint, and the excluded cases."""
    lower, upper = degree_bounds(4, 1)
    rows: list[InvariantRow] = []
    excluded: list[Exclusion] = []
    for m in range(int(lower) + 1, int(upper)):
        if m != 5:
            h = integrality_gate(m)
            if h is None:
                excluded.append(Exclusion(m, None, f"h = m(m+2)/6 - 1 = {Fraction(m * (m + 2), 6) - 1} is not an integer"))
                continue
            candidates = [(h, "h from m(m+2)/6 - 1")]
        else:
            # Clebsch: pi >= 0 forces h <= C(m-1, 2)
            candidates = [(h, "h enumerated up to the Clebsch bound") for h in range(comb(m - 1, 2) + 1)]
        for h, h_source in candidates:
            k = multiplicity_k(h, m)
            if k < 1:
                excluded.append(Exclusion(m, h, f"k = h - m + 2 = {k} < 1"))
                continue
            a = cayley_class(h, m)
            x = (4 - 1) ** 2 * k * k - k * k * m - 1 - 2 * a
            if x < 0:
                excluded.append(Exclusion(m, h, f"x = 9k^2 - k^2 m - 1 - 2a = {x} < 0"))
                continue
            pi = comb(m - 1, 2) - h
            if not check_agen([(3, k)], 1, a, pure_dim=True):
                excluded.append(Exclusion(m, h, "3k != 1 + a"))
                continue
            audit = (
                f"h={h}: {h_source}",
                f"k={k}: k = h - m + 2",
                f"a={a}: a = h(m-2) - C(m,3)",
                f"x={x}: x = 9k^2 - k^2 m - 1 - 2a >= 0",
                f"pi={pi}: Clebsch pi = C(m-1,2) - h",
                f"check: 3k = 1 + a and (1+a)^2 = x + k^2 m + 1 + 2a",
            )
            rows.append(InvariantRow(m, h, k, a, x, pi, audit))
    return rows, excluded


def classify_p4() -> list[InvariantRow]:
    return classify_p4_detailed()[0]
