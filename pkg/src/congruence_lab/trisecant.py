"""Exhaustive trisecant search over F_q.

A line meets the scheme cut out by the generators in the zero locus of the gcd
of the restricted generators. It is a trisecant when that gcd has degree >= 3
and the restrictions are not all zero (a line inside the surface is not a
trisecant).

Counting the trisecants through a point P enumerates every line through P once:
after the coordinate change x = s*P + D with D in the coordinate hyperplane
opposite the pivot of P, lines through P are the points of P^3(F_q). Each
generator becomes sum_k s^(d-k) c_k(D) with c_k a form of degree k in D, so the
restrictions for a whole batch of directions are one matrix product of the
direction monomials with a fixed coefficient table.
"""
from __future__ import annotations

import json
import os
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .polyalg import (
    MultiPoly,
    ProjLine,
    ProjPlane,
    ProjPoint,
    binary_gcd_degree,
    monomial_matrix,
    monomials,
    projective_chunk,
    projective_count,
    random_point,
    restrict_to_line,
    restrict_to_plane,
    trim,
)
from .surfaces import SurfaceModel

SCHEMA = "v1"
CHUNK = 1 << 16

TRISECANT = "trisecant"
NOT = "not"
CONTAINED = "contained"


def default_threads() -> int:
    return max(1, int(os.environ.get("CONGRUENCE_LAB_THREADS", "1")))


@dataclass
class TrisecantReport:
    family: str
    q: int
    seed: int
    trials: int
    counts: list[tuple[tuple[int, ...], int]]
    contained: list[int]
    mode: int
    anomalies: list[tuple[tuple[int, ...], int]]
    expected: int | None = None
    wall_time: float = field(default=0.0, compare=False)

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "schema": SCHEMA,
            "kind": "trisecant_report",
            "family": self.family,
            "modulus": self.q,
            "seed": self.seed,
            "trials": self.trials,
            "counts": [{"point": list(p), "count": c, "contained": k} for (p, c), k in zip(self.counts, self.contained)],
            "mode": self.mode,
            "anomalies": [{"point": list(p), "count": c} for p, c in self.anomalies],
            "expected_order": self.expected,
        }
        if timing:
            d["wall_time"] = round(self.wall_time, 3)
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> TrisecantReport:
        if d.get("schema") != SCHEMA or d.get("kind") != "trisecant_report":
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        counts = [(tuple(e["point"]), e["count"]) for e in d["counts"]]
        return cls(
            family=d["family"],
            q=d["modulus"],
            seed=d["seed"],
            trials=d["trials"],
            counts=counts,
            contained=[e.get("contained", 0) for e in d["counts"]],
            mode=d["mode"],
            anomalies=[(tuple(e["point"]), e["count"]) for e in d["anomalies"]],
            expected=d.get("expected_order"),
            wall_time=d.get("wall_time", 0.0),
        )


@dataclass
class PlaneSectionReport:
    plane: list[list[int]]
    gcd_degree: int
    residual_degrees: list[int | None]
    line_gcd_degrees: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": "plane_section_report",
            "plane": self.plane,
            "gcd_degree": self.gcd_degree,
            "residual_degrees": self.residual_degrees,
            "line_gcd_degrees": self.line_gcd_degrees,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# single lines


def restrictions(model: SurfaceModel, line: ProjLine) -> list[list[int]]:
    return [restrict_to_line(g, line) for g in model.generators]


def classify_line(forms: Sequence[Sequence[int]], q: int) -> str:
    g = binary_gcd_degree(forms, q)
    if g is None:
        return CONTAINED
    return TRISECANT if g >= 3 else NOT


def is_trisecant(model: SurfaceModel, line: ProjLine) -> str:
    """'trisecant', 'not' or 'contained'."""
    return classify_line(restrictions(model, line), model.q)


def line_in_surface(model: SurfaceModel, line: ProjLine) -> bool:
    return all(not trim(r, model.q) for r in restrictions(model, line))


# ---------------------------------------------------------------------------
# all lines through a point


class PencilSearch:
    """Restrictions of the generators to every line through a fixed point."""

    def __init__(self, model: SurfaceModel, point: ProjPoint):
        if point.q != model.q or len(point.coords) != model.n + 1:
            raise ValueError("point does not live in the model's ambient space")
        q = model.q
        values = [g.evaluate(point.coords) for g in model.generators]
        if not any(values):
            raise ValueError(f"point {point.coords} lies on the surface")
        self.model = model
        self.point = point
        self.q = q
        self.d = model.degree
        nv = model.n + 1
        self.pivot = next(i for i, c in enumerate(point.coords) if c)
        self.free = [i for i in range(nv) if i != self.pivot]
        # x_j = P_j * s + D_j, with D_pivot = 0; variables (s, D_free...)
        s = MultiPoly.variable(0, nv, q)
        subs = []
        for j in range(nv):
            form = s * point.coords[j]
            if j != self.pivot:
                form = form + MultiPoly.variable(1 + self.free.index(j), nv, q)
            subs.append(form)
        composed = [g.substitute(subs) for g in model.generators]

        # basis adapted to P: one generator nonzero at P, the rest vanishing there
        star = next(i for i, v in enumerate(values) if v)
        inv = pow(values[star], -1, q)
        h = [composed[i] - composed[star] * (values[i] * inv) for i in range(len(composed)) if i != star]
        self.composed = composed
        self.h = h

        # monomials of degree 1..d in the n direction coordinates
        self.exps = [e for k in range(1, self.d + 1) for e in monomials(model.n, k)]
        index = {e: i for i, e in enumerate(self.exps)}
        self._index = index
        self._parents = []
        for e in self.exps:
            var = next(i for i, k in enumerate(e) if k)
            parent = tuple(k - (i == var) for i, k in enumerate(e))
            self._parents.append((index[parent] if any(parent) else -1, var))
        self.full_table = self._table(composed, include_constant=True)
        if self.d >= 3 and h:
            if self.d == 3:
                self.filter_forms = h
            else:
                rng = np.random.default_rng([q, *point.coords])
                combos = rng.integers(0, q, size=(2, len(h)))
                self.filter_forms = [sum((f * int(c) for f, c in zip(h, row)), MultiPoly.zero(nv, q)) for row in combos]
            self.filter_table = self._table(self.filter_forms, include_constant=False)
        else:
            self.filter_forms = []
            self.filter_table = None

    def _table(self, forms: Sequence[MultiPoly], include_constant: bool) -> np.ndarray:
        """Coefficient table: rows are direction monomials, columns (form, k)."""
        ks = range(0 if include_constant else 1, self.d + 1)
        table = np.zeros((len(self.exps) + 1, len(forms) * len(ks)), dtype=np.float64)
        for fi, f in enumerate(forms):
            for e, c in f.terms.items():
                k = self.d - e[0]
                if k not in ks:
                    continue
                col = fi * len(ks) + (k - ks.start)
                row = len(self.exps) if k == 0 else self._index[e[1:]]
                table[row, col] = c
        return table

    def directions(self, start: int, stop: int) -> np.ndarray:
        return projective_chunk(self.model.n - 1, self.q, start, stop)

    def _monomials(self, dirs: np.ndarray) -> np.ndarray:
        n = dirs.shape[0]
        exact = float(self.q) ** (self.d + 1) * (len(self.exps) + 1) < 2.0**53
        if not exact:
            mons = monomial_matrix(dirs, self.exps, self.q).astype(np.float64)
            return np.concatenate([mons, np.ones((n, 1))], axis=1)
        # unreduced products stay below 2^53, so float64 arithmetic is exact
        cols = np.asfortranarray(dirs, dtype=np.float64)
        mons = np.empty((n, len(self.exps) + 1), dtype=np.float64, order="F")
        mons[:, -1] = 1.0
        for j, (parent, var) in enumerate(self._parents):
            mons[:, j] = cols[:, var] if parent < 0 else mons[:, parent] * cols[:, var]
        return mons

    def _evaluate(self, table: np.ndarray, dirs: np.ndarray, width: int) -> np.ndarray:
        mons = self._monomials(dirs)
        raw = mons @ table
        vals = (raw - np.floor(raw / self.q) * self.q).astype(np.int64)
        vals %= self.q  # guards against a rounded quotient
        return vals.reshape(dirs.shape[0], -1, width)

    def candidates(self, start: int, stop: int) -> np.ndarray:
        """Indices in [start, stop) of directions passing the necessary rank test."""
        if self.filter_table is None:
            return np.zeros(0, dtype=np.int64)
        dirs = self.directions(start, stop)
        r = self._evaluate(self.filter_table, dirs, self.d)
        if self.d == 3:
            # rank 1 <=> every generator vanishing at P restricts to zero
            mask = ~r.any(axis=(1, 2))
        else:
            a, b = r[:, 0, :], r[:, 1, :]
            mask = np.ones(len(dirs), dtype=bool)
            for i in range(self.d):
                for j in range(i + 1, self.d):
                    mask &= (a[:, i] * b[:, j] - a[:, j] * b[:, i]) % self.q == 0
        return start + np.nonzero(mask)[0]

    def exact_restrictions(self, indices: np.ndarray) -> np.ndarray:
        dirs = self.directions(0, 0) if len(indices) == 0 else np.concatenate([self.directions(int(i), int(i) + 1) for i in indices])
        return self._evaluate(self.full_table, dirs, self.d + 1)

    def line(self, index: int) -> ProjLine:
        dvec = [0] * (self.model.n + 1)
        for j, v in zip(self.free, self.directions(index, index + 1)[0]):
            dvec[j] = int(v)
        return ProjLine(self.point, ProjPoint(tuple(dvec), self.q))

    def search(self, threads: int = 1, chunk: int = CHUNK) -> tuple[list[int], int]:
        """Direction indices of the trisecants through P, and the number of lines inside the surface."""
        total = projective_count(self.model.n - 1, self.q)
        bounds = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(lambda b: self.candidates(*b), bounds))
        else:
            parts = [self.candidates(*b) for b in bounds]
        cand = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
        found: list[int] = []
        contained = 0
        if len(cand):
            restricted = self.exact_restrictions(cand)
            for idx, forms in zip(cand, restricted):
                verdict = classify_line(forms.tolist(), self.q)
                if verdict == TRISECANT:
                    found.append(int(idx))
                elif verdict == CONTAINED:
                    contained += 1
        return sorted(found), contained


def trisecants_through_point(model: SurfaceModel, point: ProjPoint, threads: int = 1) -> tuple[list[ProjLine], int]:
    search = PencilSearch(model, point)
    found, contained = search.search(threads)
    return [search.line(i) for i in found], contained


def count_trisecants_through_point(model: SurfaceModel, point: ProjPoint, threads: int = 1) -> int:
    return len(PencilSearch(model, point).search(threads)[0])


def sample_points(model: SurfaceModel, trials: int, seed: int) -> list[ProjPoint]:
    rng = np.random.default_rng([seed, model.q, 7919])
    out = []
    while len(out) < trials:
        p = random_point(rng, model.n, model.q)
        if not model.contains(p.coords):
            out.append(p)
    return out


def mode_of(values: Sequence[int]) -> int:
    counts = Counter(values)
    # ties go to the smaller count
    return min(counts, key=lambda v: (-counts[v], v))


def estimate_order(
    model: SurfaceModel,
    trials: int,
    seed: int,
    threads: int | None = None,
    expected: int | None = None,
    family: str | None = None,
) -> TrisecantReport:
    if trials < 1:
        raise ValueError("need at least one trial")
    threads = threads or default_threads()
    start = time.perf_counter()
    counts = []
    contained = []
    for p in sample_points(model, trials, seed):
        found, inside = PencilSearch(model, p).search(threads)
        counts.append((p.coords, len(found)))
        contained.append(inside)
    mode = mode_of([c for _, c in counts])
    anomalies = [(p, c) for p, c in counts if c != mode]
    return TrisecantReport(
        family=family or model.provenance,
        q=model.q,
        seed=seed,
        trials=trials,
        counts=counts,
        contained=contained,
        mode=mode,
        anomalies=anomalies,
        expected=expected,
        wall_time=time.perf_counter() - start,
    )


# ---------------------------------------------------------------------------
# plane sections


def plane_section(model: SurfaceModel, plane: ProjPlane, lines: int = 4, seed: int = 0) -> PlaneSectionReport:
    """Degree of the curve the plane shares with the surface.

    The gcd of the restricted trivariate forms is measured along random lines of
    the plane; a generic line meets the gcd curve in exactly its degree and
    misses the finitely many residual points, so the minimum over several lines
    is the gcd degree.
    """
    if plane.q != model.q:
        raise ValueError("plane and model over different fields")
    q = model.q
    forms = [restrict_to_plane(g, plane) for g in model.generators]
    d = model.degree
    if all(f.is_zero() for f in forms):
        return PlaneSectionReport(plane.matrix(), d, [None] * len(forms), [])
    rng = np.random.default_rng([seed, q, 104729])
    per_line = []
    while len(per_line) < lines:
        u, v = rng.integers(0, q, size=(2, 3))
        try:
            line = ProjLine(ProjPoint(tuple(int(x) for x in u), q), ProjPoint(tuple(int(x) for x in v), q))
        except ValueError:
            continue
        restricted = [restrict_to_line(f, line) if not f.is_zero() else [0] * (d + 1) for f in forms]
        per_line.append(binary_gcd_degree(restricted, q))
    g = min(per_line)
    residual = [None if f.is_zero() else d - g for f in forms]
    return PlaneSectionReport(plane.matrix(), g, residual, per_line)
