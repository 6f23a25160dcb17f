"""Surfaces in P^4 over a prime field: the four families whose trisecants form
a first order congruence, a few non-examples, and implicitization.

Every constructor is deterministic in (q, seed). Genericity of random choices
is checked where an exact test is cheap and otherwise left to the downstream
trisecant count.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Any, Sequence

import numpy as np

from .polyalg import (
    MultiPoly,
    ProjPlane,
    ProjPoint,
    binary_gcd_degree,
    check_modulus,
    determinant,
    is_squarefree,
    monomial_matrix,
    monomials,
    nullspace,
    rank,
    restrict_to_plane,
)

PROVENANCES = (
    "bordiga",
    "veronese",
    "veronese-degenerate",
    "delpezzo",
    "scroll-14",
    "scroll-23",
    "quartic-scroll",
    "zak",
)

MAX_RETRIES = 8


class ConstructionError(RuntimeError):
    """Random data kept landing in a degenerate configuration."""


@dataclass(frozen=True)
class Parametrization:
    """Map from a source space given by one form per ambient coordinate."""

    forms: tuple[MultiPoly, ...]

    @property
    def source_nvars(self) -> int:
        return self.forms[0].nvars

    @property
    def q(self) -> int:
        return self.forms[0].q

    def image(self, params: np.ndarray) -> np.ndarray:
        return np.stack([f.evaluate_many(params) for f in self.forms], axis=1)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Images of random parameter values, skipping base points."""
        rows = []
        while sum(len(r) for r in rows) < count:
            params = rng.integers(0, self.q, size=(count, self.source_nvars))
            img = self.image(params)
            rows.append(img[img.any(axis=1)])
        return np.concatenate(rows)[:count]

    def compose(self, matrix: Sequence[Sequence[int]]) -> Parametrization:
        """Follow the parametrization by the linear map with the given rows."""
        q = self.q
        out = []
        for row in matrix:
            acc = MultiPoly.zero(self.source_nvars, q)
            for c, f in zip(row, self.forms):
                if c % q:
                    acc = acc + f * int(c)
            out.append(acc)
        return Parametrization(tuple(out))


@dataclass(frozen=True)
class SurfaceModel:
    n: int
    q: int
    generators: tuple[MultiPoly, ...]
    provenance: str
    seed: int | None = None
    parametrization: Parametrization | None = None
    meta: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a surface model needs generators")
        degs = {g.degree for g in self.generators}
        if len(degs) != 1 or not all(g.is_homogeneous() for g in self.generators):
            raise ValueError("generators must be homogeneous of one degree")
        if any(g.nvars != self.n + 1 for g in self.generators):
            raise ValueError("generator arity does not match the ambient space")

    @property
    def degree(self) -> int:
        return self.generators[0].degree

    def contains(self, point: Sequence[int]) -> bool:
        return all(g.evaluate(point) == 0 for g in self.generators)

    def scaled(self, factors: Sequence[int]) -> SurfaceModel:
        gens = tuple(g * int(c) for g, c in zip(self.generators, factors))
        return SurfaceModel(self.n, self.q, gens, self.provenance, self.seed, self.parametrization, dict(self.meta))

    # JSON interchange
    def to_dict(self) -> dict:
        d = {
            "schema": "v1",
            "kind": "surface_model",
            "modulus": self.q,
            "ambient": self.n,
            "provenance": self.provenance,
            "seed": self.seed,
            "degree": self.degree,
            "generators": [g.to_json() for g in self.generators],
            "parametrization": None,
            "meta": self.meta,
        }
        if self.parametrization is not None:
            d["parametrization"] = {
                "source_nvars": self.parametrization.source_nvars,
                "forms": [f.to_json() for f in self.parametrization.forms],
            }
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> SurfaceModel:
        if d.get("schema") != "v1" or d.get("kind") != "surface_model":
            raise ValueError("not a v1 surface model document")
        q, n = d["modulus"], d["ambient"]
        gens = tuple(MultiPoly.from_json(g, n + 1, q) for g in d["generators"])
        param = None
        if d.get("parametrization"):
            p = d["parametrization"]
            param = Parametrization(tuple(MultiPoly.from_json(f, p["source_nvars"], q) for f in p["forms"]))
        return cls(n, q, gens, d["provenance"], d.get("seed"), param, d.get("meta", {}))

    @classmethod
    def from_json(cls, text: str) -> SurfaceModel:
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# helpers


def _rng(q: int, seed: int, label: str) -> np.random.Generator:
    # independent streams per family so that seeds are comparable across constructors
    tag = sum(ord(c) * 31**i for i, c in enumerate(label)) % (2**32)
    return np.random.default_rng([seed, q, tag])


def random_linear_form(rng: np.random.Generator, nvars: int, q: int) -> MultiPoly:
    return MultiPoly.linear_form([int(c) for c in rng.integers(0, q, size=nvars)], q)


def projection_matrix(center: Sequence[Sequence[int]], q: int) -> list[list[int]]:
    """Rows spanning the linear forms vanishing on the center; projection from it."""
    return nullspace(center, q)


def implicitize(
    param: Parametrization,
    degree: int,
    q: int | None = None,
    rng: np.random.Generator | None = None,
    samples: int | None = None,
    checks: int = 200,
) -> list[MultiPoly]:
    """Basis of the degree-``degree`` forms vanishing on the image of ``param``.

    Computed as the kernel of the evaluation matrix (sample points x monomials),
    then checked on a fresh batch of ``checks`` image points.
    """
    q = q or param.q
    if rng is None:
        rng = np.random.default_rng(0)
    nv = len(param.forms)
    exps = monomials(nv, degree)
    if samples is None:
        samples = 2 * len(exps) + 20
    if samples < len(exps):
        raise ValueError(f"{samples} samples cannot determine {len(exps)} monomial coefficients")
    pts = param.sample(rng, samples)
    kernel = nullspace(monomial_matrix(pts, exps, q), q)
    forms = [MultiPoly(nv, q, {e: c for e, c in zip(exps, v)}) for v in kernel]
    fresh = param.sample(rng, checks)
    for f in forms:
        if f.evaluate_many(fresh).any():
            raise ValueError("sample grid too small: a kernel form does not vanish on the image")
    return forms


def vanishes_on_parametrization(model: SurfaceModel, rng: np.random.Generator, count: int = 200) -> bool:
    if model.parametrization is None:
        raise ValueError("model has no parametrization")
    pts = model.parametrization.sample(rng, count)
    return all(not g.evaluate_many(pts).any() for g in model.generators)


def hilbert_function(forms: Sequence[MultiPoly], t: int) -> int:
    """dim (k[u]/J)_t for the ideal J generated by the given forms."""
    nv = forms[0].nvars
    q = forms[0].q
    target = monomials(nv, t)
    index = {e: i for i, e in enumerate(target)}
    rows = []
    for f in forms:
        if f.is_zero() or f.degree > t:
            continue
        for mono in monomials(nv, t - f.degree):
            row = [0] * len(target)
            for e, c in f.terms.items():
                row[index[tuple(a + b for a, b in zip(e, mono))]] = c
            rows.append(row)
    r = rank(rows, q) if rows else 0
    return comb(t + nv - 1, nv - 1) - r


def section_degree(model: SurfaceModel, plane: ProjPlane, max_extra: int = 6) -> int | None:
    """Length of the plane section scheme, or None if it has a curve component.

    Read off as the stable value of the Hilbert function of the restricted ideal.
    """
    forms = [restrict_to_plane(g, plane) for g in model.generators]
    if all(f.is_zero() for f in forms):
        return None
    d = model.degree
    prev = hilbert_function(forms, d)
    for t in range(d + 1, d + max_extra + 1):
        cur = hilbert_function(forms, t)
        if cur == prev:
            return cur
        prev = cur
    return None


def random_plane(rng: np.random.Generator, n: int, q: int) -> ProjPlane:
    while True:
        pts = rng.integers(0, q, size=(3, n + 1))
        if rank(pts, q) == 3:
            return ProjPlane(tuple(ProjPoint(tuple(int(x) for x in p), q) for p in pts))


def check_section_degree(model: SurfaceModel, expected: int, rng: np.random.Generator, tries: int = 3) -> int:
    """Degree of a random plane section, retried up to ``tries`` planes."""
    last = None
    for _ in range(tries):
        last = section_degree(model, random_plane(rng, model.n, model.q))
        if last == expected:
            return last
    raise ConstructionError(f"{model.provenance}: plane section degree {last}, expected {expected}")


# ---------------------------------------------------------------------------
# Bordiga surfaces


def _linear_span_dim(entries: Sequence[MultiPoly], q: int) -> int:
    nv = entries[0].nvars
    basis = monomials(nv, 1)
    return rank([e.coefficient_vector(basis) for e in entries], q)


def maximal_minors(matrix: Sequence[Sequence[MultiPoly]]) -> list[MultiPoly]:
    """The 3x3 minors of a 3x4 matrix, minor j omitting column j."""
    cols = len(matrix[0])
    return [determinant([[row[c] for c in range(cols) if c != j] for row in matrix]) for j in range(cols)]


def bordiga_from_matrix(
    M: Sequence[Sequence[MultiPoly]],
    q: int,
    rng: np.random.Generator | None = None,
    provenance: str = "bordiga",
    seed: int | None = None,
    meta: dict | None = None,
) -> SurfaceModel:
    """Degeneracy locus of a 3x4 matrix of linear forms on P^4."""
    check_modulus(q)
    if len(M) != 3 or any(len(row) != 4 for row in M):
        raise ValueError("need a 3x4 matrix")
    entries = [e for row in M for e in row]
    if any(not e.is_zero() and (e.degree != 1 or not e.is_homogeneous()) for e in entries):
        raise ValueError("matrix entries must be linear forms")
    nonzero = [e for e in entries if not e.is_zero()]
    if not nonzero or _linear_span_dim(nonzero, q) < 2:
        raise ValueError("matrix entries span at most one linear form: the locus is a cone")
    minors = [m for m in maximal_minors(M) if not m.is_zero()]
    if not minors:
        raise ConstructionError("all maximal minors vanish identically")
    n = nonzero[0].nvars - 1
    meta = dict(meta or {})
    meta["matrix"] = [[e.to_json() for e in row] for row in M]
    model = SurfaceModel(n, q, tuple(minors), provenance, seed, None, meta)
    check_section_degree(model, 6, rng if rng is not None else np.random.default_rng(0))
    return model


def random_bordiga(q: int, seed: int) -> SurfaceModel:
    rng = _rng(q, seed, "bordiga")
    for _ in range(MAX_RETRIES):
        M = [[random_linear_form(rng, 5, q) for _ in range(4)] for _ in range(3)]
        try:
            return bordiga_from_matrix(M, q, rng, seed=seed)
        except ConstructionError:
            continue
    raise ConstructionError("could not build a Bordiga surface")


def parasitic_plane() -> list[list[int]]:
    """The plane x3 = x4 = 0, spanned by e0, e1, e2."""
    return [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]]


def bordiga_with_parasitic_plane(q: int, seed: int) -> tuple[SurfaceModel, ProjPlane]:
    """Bordiga surface whose matrix has last column (x3, x4, 0).

    The plane V(x3, x4) then cuts the surface in the cubic det(A_eta).
    """
    rng = _rng(q, seed, "bordiga-parasitic")
    x3 = MultiPoly.variable(3, 5, q)
    x4 = MultiPoly.variable(4, 5, q)
    zero = MultiPoly.zero(5, q)
    for _ in range(MAX_RETRIES):
        M = [[random_linear_form(rng, 5, q) for _ in range(3)] + [last] for last in (x3, x4, zero)]
        try:
            model = bordiga_from_matrix(M, q, rng, seed=seed)
        except ConstructionError:
            continue
        plane = ProjPlane(tuple(ProjPoint(tuple(p), q) for p in parasitic_plane()))
        return model, plane
    raise ConstructionError("could not build a Bordiga surface with a parasitic plane")


def catalecticant(q: int) -> list[list[MultiPoly]]:
    x = [MultiPoly.variable(i, 6, q) for i in range(6)]
    return [[x[i + j] for j in range(4)] for i in range(3)]


def zak_bordiga(q: int, seed: int) -> SurfaceModel:
    """Hyperplane section of the secant variety of the rational normal quintic.

    The hyperplane x5 = c0 x0 + ... + c4 x4 meets the curve (1, s, ..., s^5) in
    the roots of c0 + c1 s + ... + c4 s^4 - s^5, the singular points of the section.
    """
    rng = _rng(q, seed, "zak")
    for _ in range(MAX_RETRIES):
        c = [int(v) for v in rng.integers(0, q, size=5)]
        quintic = c + [q - 1]
        if not is_squarefree(quintic, q):
            continue
        y = [MultiPoly.variable(i, 5, q) for i in range(5)]
        subs = y + [MultiPoly.linear_form(c, q)]
        M = [[e.substitute(subs) for e in row] for row in catalecticant(q)]
        meta = {"hyperplane": c + [q - 1], "singular_parameter_polynomial": quintic}
        try:
            return bordiga_from_matrix(M, q, rng, provenance="zak", seed=seed, meta=meta)
        except ConstructionError:
            continue
    raise ConstructionError("could not build a Zak-Bordiga surface")


# ---------------------------------------------------------------------------
# projected Veronese surfaces


def veronese_parametrization(q: int) -> Parametrization:
    u = [MultiPoly.variable(i, 3, q) for i in range(3)]
    return Parametrization(tuple(u[i] * u[j] for i in range(3) for j in range(i, 3)))


def symmetric_matrix(c: Sequence[int]) -> list[list[int]]:
    """Coordinates (x00, x01, x02, x11, x12, x22) of P^5 as a symmetric 3x3 matrix."""
    return [[c[0], c[1], c[2]], [c[1], c[3], c[4]], [c[2], c[4], c[5]]]


def veronese_projection(q: int, seed: int, degenerate: bool = False) -> SurfaceModel:
    """Projection of the Veronese surface from a point of P^5 to P^4.

    A center of rank 3 (off the secant cubic) gives the smooth surface cut out by
    cubics; a center of rank 2 (on a secant line) gives a complete intersection of
    two quadrics.
    """
    check_modulus(q)
    rng = _rng(q, seed, "veronese-degenerate" if degenerate else "veronese")
    ver = veronese_parametrization(q)
    for _ in range(MAX_RETRIES):
        if degenerate:
            a, b = rng.integers(0, q, size=(2, 3))
            va = ver.image(a[None, :])[0]
            vb = ver.image(b[None, :])[0]
            lam = int(rng.integers(1, q))
            center = (va + lam * vb) % q
            want_rank = 2
        else:
            center = rng.integers(0, q, size=6)
            want_rank = 3
        if rank(symmetric_matrix([int(v) for v in center]), q) != want_rank:
            continue
        proj = projection_matrix([center], q)
        param = ver.compose(proj)
        if degenerate:
            gens = implicitize(param, 2, q, rng)
            if len(gens) != 2:
                continue
        else:
            if implicitize(param, 2, q, rng):
                continue
            gens = implicitize(param, 3, q, rng)
        label = "veronese-degenerate" if degenerate else "veronese"
        meta = {"center": [int(v) for v in center], "projection": proj}
        model = SurfaceModel(4, q, tuple(gens), label, seed, param, meta)
        try:
            check_section_degree(model, 4, rng)
        except ConstructionError:
            continue
        return model
    raise ConstructionError("could not build a projected Veronese surface")


# ---------------------------------------------------------------------------
# projected Del Pezzo quintic


def _no_three_collinear(points: np.ndarray, q: int) -> bool:
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            for k in range(j + 1, len(points)):
                if rank(points[[i, j, k]], q) < 3:
                    return False
    return True


def delpezzo_parametrization(base_points: np.ndarray, q: int) -> Parametrization:
    """Plane cubics through four points: the anticanonical map to P^5."""
    exps = monomials(3, 3)
    kernel = nullspace(monomial_matrix(base_points, exps, q), q)
    return Parametrization(tuple(MultiPoly(3, q, dict(zip(exps, v))) for v in kernel))


def delpezzo_projection(q: int, seed: int) -> SurfaceModel:
    """Quintic Del Pezzo surface of P^5 projected from a random point."""
    check_modulus(q)
    rng = _rng(q, seed, "delpezzo")
    for _ in range(MAX_RETRIES):
        base = rng.integers(0, q, size=(4, 3))
        if not _no_three_collinear(base, q):
            continue
        dp = delpezzo_parametrization(base, q)
        if len(dp.forms) != 6:
            continue
        quadrics = implicitize(dp, 2, q, rng)
        center = rng.integers(0, q, size=6)
        if not center.any() or all(f.evaluate(center) == 0 for f in quadrics):
            continue
        proj = projection_matrix([center], q)
        param = dp.compose(proj)
        gens = implicitize(param, 3, q, rng)
        if not gens:
            continue
        meta = {
            "base_points": base.tolist(),
            "center": [int(v) for v in center],
            "projection": proj,
            "ambient_quadrics": len(quadrics),
        }
        model = SurfaceModel(4, q, tuple(gens), "delpezzo", seed, param, meta)
        try:
            check_section_degree(model, 5, rng)
        except ConstructionError:
            continue
        return model
    raise ConstructionError("could not build a projected Del Pezzo surface")


def delpezzo_conic_plane(model: SurfaceModel, rng: np.random.Generator) -> ProjPlane:
    """Image in P^4 of the plane of a conic of the Del Pezzo surface.

    Lines through the first base point map to conics; three points of such a
    conic span its plane, which the projection carries to a plane of P^4.
    """
    q = model.q
    base = np.array(model.meta["base_points"], dtype=np.int64)
    p0 = base[0]
    while True:
        r = rng.integers(0, q, size=3)
        if rank([p0, r], q) < 2:
            continue
        ts = rng.choice(np.arange(1, q), size=3, replace=False)
        params = np.array([(r + int(t) * p0) % q for t in ts])
        img = model.parametrization.image(params)
        if rank(img, q) == 3:
            return ProjPlane(tuple(ProjPoint(tuple(int(x) for x in row), q) for row in img))


# ---------------------------------------------------------------------------
# rational normal scrolls


def scroll_parametrization(a: int, b: int, q: int) -> Parametrization:
    """S_{a,b} in P^{a+b+1}; source variables (s, t, l, m) with l, m the ruling coordinate."""
    s, t, l, m = (MultiPoly.variable(i, 4, q) for i in range(4))
    first = [l * s ** (a - i) * t**i for i in range(a + 1)]
    second = [m * s ** (b - i) * t**i for i in range(b + 1)]
    return Parametrization(tuple(first + second))


def scroll_minors(a: int, b: int, q: int) -> list[MultiPoly]:
    """2x2 minors of the 2 x (a+b) matrix cutting out S_{a,b}."""
    n = a + b + 2
    x = [MultiPoly.variable(i, n, q) for i in range(n)]
    xs, ys = x[: a + 1], x[a + 1 :]
    top = xs[:-1] + ys[:-1]
    bot = xs[1:] + ys[1:]
    return [top[i] * bot[j] - top[j] * bot[i] for i in range(len(top)) for j in range(i + 1, len(top))]


def line_meets(forms: Sequence[MultiPoly], c1: Sequence[int], c2: Sequence[int], q: int) -> bool:
    """Whether the line spanned by c1, c2 meets the common zero locus of ``forms``."""
    restricted = []
    for f in forms:
        u = [MultiPoly.linear_form([int(x), int(y)], q) for x, y in zip(c1, c2)]
        g = f.substitute(u)
        d = f.degree
        restricted.append([g.coefficient((d - k, k)) for k in range(d + 1)])
    deg = binary_gcd_degree(restricted, q)
    return deg is None or deg >= 1


SCROLL_TYPES = {"S14": (1, 4), "S23": (2, 3), "S22": (2, 2), "S13": (1, 3)}


def scroll_projection(kind: str, q: int, seed: int) -> SurfaceModel:
    """Projection to P^4 of a smooth rational normal scroll.

    Quintic scrolls (S14, S23) of P^6 are projected from a line missing the
    scroll and cut out by quartics; quartic scrolls (S22, S13) of P^5 are
    projected from a point off the scroll and cut out by cubics.
    """
    check_modulus(q)
    if kind not in SCROLL_TYPES:
        raise ValueError(f"unknown scroll type {kind!r}")
    a, b = SCROLL_TYPES[kind]
    quintic = a + b == 5
    rng = _rng(q, seed, f"scroll-{kind}")
    scroll = scroll_parametrization(a, b, q)
    minors = scroll_minors(a, b, q)
    ambient = a + b + 1
    for _ in range(MAX_RETRIES):
        if quintic:
            c1, c2 = rng.integers(0, q, size=(2, ambient + 1))
            if rank([c1, c2], q) < 2 or line_meets(minors, c1, c2, q):
                continue
            center = [c1, c2]
        else:
            c = rng.integers(0, q, size=ambient + 1)
            if not c.any() or all(f.evaluate(c) == 0 for f in minors):
                continue
            center = [c]
        proj = projection_matrix(center, q)
        param = scroll.compose(proj)
        gen_degree = 4 if quintic else 3
        gens = implicitize(param, gen_degree, q, rng)
        if not gens:
            continue
        label = {"S14": "scroll-14", "S23": "scroll-23"}.get(kind, "quartic-scroll")
        meta = {
            "scroll": kind,
            "center": [[int(v) for v in c] for c in center],
            "projection": proj,
            "cubics": len(implicitize(param, 3, q, rng)) if quintic else len(gens),
        }
        model = SurfaceModel(4, q, tuple(gens), label, seed, param, meta)
        try:
            check_section_degree(model, a + b, rng)
        except ConstructionError:
            continue
        return model
    raise ConstructionError(f"could not build a projected {kind} scroll")


def ruling_line(model: SurfaceModel, s: int, t: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Two points spanning the ruling line over (s:t) of a projected scroll."""
    img = model.parametrization.image(np.array([[s, t, 1, 0], [s, t, 0, 1]]))
    return tuple(int(x) for x in img[0]), tuple(int(x) for x in img[1])


# ---------------------------------------------------------------------------
# family registry

EXPECTED_ORDER = {
    # first order: smooth projected Veronese, general projection of the Veronese
    "bordiga": 1,
    "veronese": 1,
    # "has not trisecants": projection from a point of the secant variety
    "veronese-degenerate": 0,
    "delpezzo": 1,
    "scroll14": 1,
    "scroll23": 1,
    # "the trisecants of the scrolls generate a congruence of order zero"
    "quartic-scroll": 0,
    "zak": 1,
}


def build_family(family: str, q: int, seed: int) -> SurfaceModel:
    if family == "bordiga":
        return random_bordiga(q, seed)
    if family == "veronese":
        return veronese_projection(q, seed, degenerate=False)
    if family == "veronese-degenerate":
        return veronese_projection(q, seed, degenerate=True)
    if family == "delpezzo":
        return delpezzo_projection(q, seed)
    if family == "scroll14":
        return scroll_projection("S14", q, seed)
    if family == "scroll23":
        return scroll_projection("S23", q, seed)
    if family == "quartic-scroll":
        return scroll_projection("S22", q, seed)
    if family == "zak":
        return zak_bordiga(q, seed)
    raise ValueError(f"unknown family {family!r}")
