"""Wasserstein-1 distance on finite metric spaces by linear programming.

Both sides of the Kantorovich duality are solved: the primal transport plan
(min cost coupling) and the dual 1-Lipschitz potential (max mass-weighted
potential difference).  The duality gap is required to close to 1e-9, which
the HiGHS simplex achieves exactly at these sizes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

TRIANGLE_TOL = 1e-12
GAP_TOL = 1e-9
MARGINAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Labelled points with coordinates and a (possibly custom) metric."""

    labels: tuple[str, ...]
    coords: np.ndarray
    dist: np.ndarray

    def __post_init__(self):
        coords = np.atleast_2d(np.asarray(self.coords, dtype=float))
        if coords.shape[0] != len(self.labels):
            raise ValueError("one coordinate vector per label required")
        d = np.asarray(self.dist, dtype=float)
        n = len(self.labels)
        if d.shape != (n, n):
            raise ValueError(f"distance matrix must be {n} x {n}")
        if np.abs(d - d.T).max() > TRIANGLE_TOL or np.abs(np.diag(d)).max() > TRIANGLE_TOL:
            raise ValueError("distance matrix must be symmetric with zero diagonal")
        if d.min() < -TRIANGLE_TOL:
            raise ValueError("distances must be nonnegative")
        via = np.min(d[:, :, None] + d[None, :, :], axis=1)
        if (d - via).max() > TRIANGLE_TOL:
            raise ValueError("triangle inequality violated")
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "dist", d)

    @property
    def size(self) -> int:
        return len(self.labels)

    @classmethod
    def euclidean(cls, labels, coords) -> "FiniteMetricSpace":
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        if coords.ndim == 2 and coords.shape[0] == 1 and len(labels) > 1:
            coords = coords.T
        diff = coords[:, None, :] - coords[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=2))
        return cls(tuple(labels), coords, dist)

    @classmethod
    def segment(cls) -> "FiniteMetricSpace":
        """The two-point space {0, 1} on the real line."""
        return cls.euclidean(("0", "1"), [[0.0], [1.0]])


@dataclass(frozen=True, eq=False)
class Measure:
    space: FiniteMetricSpace
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.space.size,):
            raise ValueError("one weight per point required")
        if w.min() < -1e-12:
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {w.sum()}")
        object.__setattr__(self, "weights", w)

    @classmethod
    def dirac(cls, space: FiniteMetricSpace, index: int) -> "Measure":
        w = np.zeros(space.size)
        w[index] = 1.0
        return cls(space, w)


def lambda_measure(space: FiniteMetricSpace, lam: float) -> Measure:
    """The two-point mixture lam*delta_1 + (1-lam)*delta_0 on the segment."""
    if space.size != 2:
        raise ValueError("lambda_measure lives on a two-point space")
    return Measure(space, np.array([1.0 - lam, lam]))


@dataclass(frozen=True, eq=False)
class W1Result:
    value: float
    potential: np.ndarray     # optimal 1-Lipschitz potential, f[0] = 0
    plan: np.ndarray          # optimal coupling with the prescribed marginals


def w1(space: FiniteMetricSpace, mu: Measure, nu: Measure) -> W1Result:
    """Wasserstein-1 distance with its optimal potential and transport plan."""
    if mu.space is not space and not np.array_equal(mu.space.dist, space.dist):
        raise ValueError("mu does not live on the given space")
    if nu.space is not space and not np.array_equal(nu.space.dist, space.dist):
        raise ValueError("nu does not live on the given space")
    n = space.size
    d = space.dist

    # primal: min <d, P>, P >= 0, row sums mu, column sums nu
    c = d.reshape(-1)
    a_eq = np.zeros((2 * n, n * n))
    for i in range(n):
        a_eq[i, i * n:(i + 1) * n] = 1.0
        a_eq[n + i, i::n] = 1.0
    b_eq = np.concatenate([mu.weights, nu.weights])
    primal = linprog(c, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not primal.success:
        raise ValueError(f"transport LP failed: {primal.message}")
    plan = primal.x.reshape(n, n)
    if max(np.abs(plan.sum(axis=1) - mu.weights).max(),
           np.abs(plan.sum(axis=0) - nu.weights).max()) > MARGINAL_TOL:
        raise ValueError("transport plan violates its marginals")
    primal_value = float(primal.fun)

    # dual: max f.(mu - nu) over 1-Lipschitz f, gauge f[0] = 0
    delta = mu.weights - nu.weights
    rows, rhs = [], []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            r = np.zeros(n)
            r[i], r[j] = 1.0, -1.0
            rows.append(r)
            rhs.append(d[i, j])
    bounds = [(0.0, 0.0)] + [(None, None)] * (n - 1)
    dual = linprog(-delta, A_ub=np.array(rows), b_ub=np.array(rhs),
                   bounds=bounds, method="highs")
    if not dual.success:
        raise ValueError(f"dual LP failed: {dual.message}")
    potential = dual.x
    dual_value = float(-dual.fun)

    gap = abs(primal_value - dual_value)
    if gap > GAP_TOL:
        raise ValueError(f"duality gap {gap} exceeds {GAP_TOL}")
    lipschitz_excess = np.abs(potential[:, None] - potential[None, :]) - d
    if lipschitz_excess.max() > GAP_TOL:
        raise ValueError("dual potential is not 1-Lipschitz")
    return W1Result(primal_value, potential, plan)


def product_space(s1: FiniteMetricSpace, s2: FiniteMetricSpace) -> FiniteMetricSpace:
    """Cartesian product with the Pythagorean metric sqrt(d1^2 + d2^2)."""
    labels = tuple(f"({a},{b})" for a in s1.labels for b in s2.labels)
    coords = np.array([np.concatenate([x, y]) for x in s1.coords for y in s2.coords])
    d1sq, d2sq = s1.dist ** 2, s2.dist ** 2
    n1, n2 = s1.size, s2.size
    dist = np.sqrt(d1sq[:, None, :, None] + d2sq[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    return FiniteMetricSpace(labels, coords, dist)


def product_measure(m1: Measure, m2: Measure,
                    space: FiniteMetricSpace | None = None) -> Measure:
    if space is None:
        space = product_space(m1.space, m2.space)
    return Measure(space, np.outer(m1.weights, m2.weights).reshape(-1))


# JSON wire formats ----------------------------------------------------------


def space_to_json(s: FiniteMetricSpace) -> dict:
    return {"labels": list(s.labels),
            "coords": [[float(v) for v in row] for row in s.coords],
            "dist": [[float(v) for v in row] for row in s.dist]}


def space_from_json(obj: dict) -> FiniteMetricSpace:
    return FiniteMetricSpace(tuple(obj["labels"]),
                             np.array(obj["coords"], dtype=float),
                             np.array(obj["dist"], dtype=float))


def measure_to_json(m: Measure) -> dict:
    return {"weights": [float(w) for w in m.weights]}


def measure_from_json(space: FiniteMetricSpace, obj: dict) -> Measure:
    return Measure(space, np.array(obj["weights"], dtype=float))
