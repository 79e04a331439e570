"""Hermite expansions of disorder functionals.

Works with functionals phi of the base Gaussian couplings, vectorized as
phi(rows) with rows of shape (B, n_edges). Coefficients are against the
orthonormal (probabilist) Hermite basis h_m, E[h_m(J) h_k(J)] = delta_mk
for J standard normal, built from the stable three-term recurrence.

Tensor quadrature grids are capped at 6 coordinates, order 24 per axis,
and 2^22 total nodes; coefficient degrees are capped at 10 per edge and
10 total. Everything past a cap raises CapacityError rather than
degrading silently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from scipy.integrate import quad

from .errors import CapacityError, NumericalError, ValidationError
from .hypergraph import Hypergraph, MultiIndex, multi_index

MAX_AXES = 6
MAX_ORDER = 24
MAX_GRID = 1 << 22
MAX_TOTAL_DEGREE = 10
MAX_EDGE_DEGREE = 10


@lru_cache(maxsize=32)
def gauss_hermite(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for the standard Gaussian probability measure."""
    if not 1 <= order <= MAX_ORDER:
        raise CapacityError(f"quadrature order must be in [1, {MAX_ORDER}], got {order}")
    x, w = hermegauss(order)
    return x, w / math.sqrt(2.0 * math.pi)


def hermite_values(max_degree: int, x) -> np.ndarray:
    """h_m(x) for m = 0..max_degree, shape (max_degree + 1, len(x)).

    Recurrence h_{m+1} = (x h_m - sqrt(m) h_{m-1}) / sqrt(m+1), h_0 = 1.
    """
    if max_degree < 0:
        raise ValidationError(f"max_degree must be >= 0, got {max_degree}")
    x = np.asarray(x, dtype=float)
    out = np.empty((max_degree + 1,) + x.shape)
    out[0] = 1.0
    if max_degree >= 1:
        out[1] = x
    for m in range(1, max_degree):
        out[m + 1] = (x * out[m] - math.sqrt(m) * out[m - 1]) / math.sqrt(m + 1)
    return out


def _check_index(n: MultiIndex, n_edges: int):
    if n.degrees and n.degrees[-1][0] >= n_edges:
        raise ValidationError(f"multi-index touches edge {n.degrees[-1][0]} of {n_edges}")
    if n.total_degree > MAX_TOTAL_DEGREE:
        raise CapacityError(f"|n| = {n.total_degree} above cap {MAX_TOTAL_DEGREE}")
    for eid, d in n.degrees:
        if d > MAX_EDGE_DEGREE:
            raise CapacityError(f"n_{eid} = {d} above cap {MAX_EDGE_DEGREE}")


def _check_grid(n_edges: int, order: int):
    if n_edges < 1:
        raise ValidationError("need at least one coordinate")
    if n_edges > MAX_AXES:
        raise CapacityError(f"tensor quadrature capped at {MAX_AXES} coordinates, got {n_edges}")
    if not 1 <= order <= MAX_ORDER:
        raise CapacityError(f"quadrature order must be in [1, {MAX_ORDER}], got {order}")
    if order ** n_edges > MAX_GRID:
        raise CapacityError(f"grid {order}^{n_edges} exceeds {MAX_GRID} nodes")


def _grid_blocks(n_edges: int, order: int, block: int = 1 << 16):
    """Yield (rows, log-free weight, per-axis digit array) over the full
    tensor grid in C order, streaming so the grid never fully exists."""
    x, w = gauss_hermite(order)
    total = order ** n_edges
    powers = [order ** (n_edges - 1 - k) for k in range(n_edges)]
    for start in range(0, total, block):
        idx = np.arange(start, min(start + block, total), dtype=np.int64)
        digits = np.empty((len(idx), n_edges), dtype=np.int64)
        for k, p in enumerate(powers):
            digits[:, k] = (idx // p) % order
        rows = x[digits]
        weight = w[digits].prod(axis=1)
        yield rows, weight, digits


def coeff_quadrature(phi, n_edges: int, n: MultiIndex, order: int) -> float:
    """phi_hat(n) = E[phi(J) h_n(J)] by tensor Gauss-Hermite quadrature."""
    _check_grid(n_edges, order)
    _check_index(n, n_edges)
    deg = n.as_dict()
    x, _ = gauss_hermite(order)
    hvals = hermite_values(max(deg.values(), default=0), x)
    acc = 0.0
    for rows, weight, digits in _grid_blocks(n_edges, order):
        f = weight * np.asarray(phi(rows), dtype=float)
        for eid, d in deg.items():
            f *= hvals[d][digits[:, eid]]
        acc += float(f.sum())
    return acc


def second_moment_quadrature(phi, n_edges: int, order: int) -> float:
    """E[phi(J)^2] on the same tensor grid."""
    _check_grid(n_edges, order)
    acc = 0.0
    for rows, weight, _ in _grid_blocks(n_edges, order):
        vals = np.asarray(phi(rows), dtype=float)
        acc += float((weight * vals * vals).sum())
    return acc


def adaptive_gaussian_mean(f, epsabs: float = 1e-12) -> float:
    """E[f(X)] for standard Gaussian X by adaptive 1-D quadrature.

    For one-dimensional factors this reaches tolerances the fixed
    tensor grid cannot; the caller is responsible for f being scalar
    on scalars (it is wrapped for the vectorized convention used by
    phi callables elsewhere)."""
    dens = 1.0 / math.sqrt(2.0 * math.pi)

    def integrand(x: float) -> float:
        return float(f(x)) * dens * math.exp(-0.5 * x * x)

    val, err = quad(integrand, -np.inf, np.inf, epsabs=epsabs, limit=400)
    if not math.isfinite(val) or err > max(1e-7, 1e3 * epsabs):
        raise NumericalError(f"adaptive quadrature did not converge (err={err:g})")
    return val


@dataclass(frozen=True)
class CoefficientEntry:
    n: MultiIndex
    value: float
    se: float | None
    method: str


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients up to a total-degree cap, plus E[phi^2] when the
    producing routine could compute it on the same grid."""

    n_edges: int
    degree_cap: int
    entries: tuple[CoefficientEntry, ...]
    e_phi_sq: float | None

    def value(self, n: MultiIndex) -> float:
        for ent in self.entries:
            if ent.n == n:
                return ent.value
        raise ValidationError(f"no entry for {n}")


def coefficient_sweep(phi, n_edges: int, degree_cap: int, order: int,
                      method: str = "quadrature") -> CoefficientTable:
    """All coefficients with |n| <= degree_cap via one separated tensor
    transform: phi is evaluated once on the grid, then contracted axis by
    axis with the weighted Hermite matrix."""
    _check_grid(n_edges, order)
    if not 0 <= degree_cap <= MAX_TOTAL_DEGREE:
        raise CapacityError(f"degree cap must be in [0, {MAX_TOTAL_DEGREE}], got {degree_cap}")
    x, w = gauss_hermite(order)
    hv = hermite_values(degree_cap, x)  # (cap+1, order)
    transform = hv * w[None, :]

    flat = np.empty(order ** n_edges)
    e2 = 0.0
    pos = 0
    for rows, weight, _ in _grid_blocks(n_edges, order):
        vals = np.asarray(phi(rows), dtype=float)
        flat[pos:pos + len(vals)] = vals
        e2 += float((weight * vals * vals).sum())
        pos += len(vals)
    tensor = flat.reshape((order,) * n_edges)
    for _ in range(n_edges):
        tensor = np.tensordot(tensor, transform, axes=([0], [1]))

    entries = []
    for degs in _indices_up_to(n_edges, degree_cap):
        val = float(tensor[degs])
        entries.append(CoefficientEntry(n=multi_index(enumerate(degs)), value=val,
                                        se=None, method=method))
    return CoefficientTable(n_edges=n_edges, degree_cap=degree_cap,
                            entries=tuple(entries), e_phi_sq=e2)


def _indices_up_to(n_axes: int, cap: int):
    """All degree tuples with sum <= cap, lexicographic."""
    def rec(prefix, remaining, axes_left):
        if axes_left == 0:
            yield tuple(prefix)
            return
        for d in range(remaining + 1):
            yield from rec(prefix + [d], remaining - d, axes_left - 1)
    yield from rec([], cap, n_axes)


def coeff_montecarlo(phi, n_edges: int, n: MultiIndex, samples: int,
                     rng: np.random.Generator, block: int = 1 << 16) -> tuple[float, float]:
    """Monte Carlo estimate of phi_hat(n) with its standard error."""
    _check_index(n, n_edges)
    if samples < 2:
        raise ValidationError(f"need samples >= 2, got {samples}")
    deg = n.as_dict()
    top = max(deg.values(), default=0)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        b = min(block, samples - done)
        rows = rng.standard_normal((b, n_edges))
        f = np.asarray(phi(rows), dtype=float)
        for eid, d in deg.items():
            f = f * hermite_values(top, rows[:, eid])[d]
        total += float(f.sum())
        total_sq += float((f * f).sum())
        done += b
    mean = total / samples
    var = max(0.0, (total_sq / samples - mean * mean)) * samples / (samples - 1)
    return mean, math.sqrt(var / samples)


def semigroup_weight(n: MultiIndex, t: float, kind: str) -> float:
    """Decay of the mode n under the two resampling semigroups:
    exp(-|n| t) for continuous, exp(-|E(n)| t) for discrete."""
    t = float(t)
    if t < 0 or math.isnan(t):
        raise ValidationError(f"t must be >= 0, got {t}")
    if kind == "continuous":
        return math.exp(-n.total_degree * t)
    if kind == "discrete":
        return math.exp(-len(n.support) * t)
    raise ValidationError(f"kind must be continuous or discrete, got {kind!r}")


def weighted_coefficient_sum(table: CoefficientTable, t: float, kind: str) -> float:
    """sum_n w(n, t) phi_hat(n)^2 over the table's entries."""
    return sum(semigroup_weight(ent.n, t, kind) * ent.value ** 2 for ent in table.entries)


def parseval_tail(table: CoefficientTable, tol: float = 1e-8) -> float:
    """E[phi^2] minus the captured sum of squares. Must be >= -tol
    (Bessel); returned clamped at 0 for use as an error budget."""
    if table.e_phi_sq is None:
        raise ValidationError("table has no E[phi^2]; produce it by quadrature sweep")
    captured = sum(ent.value ** 2 for ent in table.entries)
    raw = table.e_phi_sq - captured
    if raw < -tol * max(1.0, abs(table.e_phi_sq)):
        raise NumericalError(f"captured coefficient mass exceeds E[phi^2] by {-raw}")
    return max(0.0, raw)


@dataclass(frozen=True)
class SignVerdict:
    """Outcome of the sign-flip vanishing criterion.

    parity[v] is the GF(2) exponent of a_v in I_n(a); forced_zero means
    some sign vector a makes I_n(a) = -1 (equivalently parity != 0), and
    witness is one such a.
    """

    forced_zero: bool
    parity: np.ndarray
    witness: np.ndarray | None


def sign_criterion(g: Hypergraph, n: MultiIndex, i: int, j: int) -> SignVerdict:
    """Decide whether symmetry forces phi_hat_ij(n) = 0.

    Gauge flip a in {+-1}^N multiplies h_n(J)<sigma_i sigma_j> inside the
    disorder average by I_n(a) = a_i a_j prod_e a_e^{n_e}; writing
    a_v = (-1)^{x_v} gives I_n(a) = (-1)^{<parity, x>}, so a flip with
    I_n(a) = -1 exists iff the parity vector is nonzero.
    """
    for v in (i, j):
        if not 0 <= v < g.n:
            raise ValidationError(f"vertex {v} outside [0, {g.n})")
    if n.degrees and n.degrees[-1][0] >= g.n_edges:
        raise ValidationError(f"multi-index touches edge {n.degrees[-1][0]} of {g.n_edges}")
    parity = np.zeros(g.n, dtype=np.int64)
    parity[i] ^= 1
    parity[j] ^= 1
    for eid in n.odd_support:
        for v in g.edges[eid]:
            parity[v] ^= 1
    if not parity.any():
        return SignVerdict(forced_zero=False, parity=parity, witness=None)
    witness = np.ones(g.n, dtype=np.int64)
    witness[int(np.argmax(parity))] = -1
    return SignVerdict(forced_zero=True, parity=parity, witness=witness)


def sign_product(g: Hypergraph, n: MultiIndex, i: int, j: int, a) -> int:
    """I_n(a) evaluated literally from the definition."""
    a = np.asarray(a, dtype=np.int64)
    if a.shape != (g.n,) or not np.all(np.abs(a) == 1):
        raise ValidationError("a must be a +-1 vector over the vertices")
    out = int(a[i]) * int(a[j])
    for eid, d in n.degrees:
        a_e = 1
        for v in g.edges[eid]:
            a_e *= int(a[v])
        out *= a_e ** d
    return 1 if out > 0 else -1


def conditional_mean_resampled(phi, n_edges: int, fixed: dict[int, float],
                               samples: int, rng: np.random.Generator,
                               block: int = 1 << 14) -> tuple[float, float]:
    """Monte Carlo E[phi(J) | J_S = fixed]: coordinates in `fixed` are
    pinned, the rest are resampled fresh each draw. Returns (mean, se)."""
    if samples < 2:
        raise ValidationError(f"need samples >= 2, got {samples}")
    for eid in fixed:
        if not 0 <= eid < n_edges:
            raise ValidationError(f"fixed coordinate {eid} outside [0, {n_edges})")
    cols = np.array(sorted(fixed), dtype=np.int64)
    vals = np.array([fixed[int(c)] for c in cols])
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        b = min(block, samples - done)
        rows = rng.standard_normal((b, n_edges))
        if len(cols):
            rows[:, cols] = vals[None, :]
        f = np.asarray(phi(rows), dtype=float)
        total += float(f.sum())
        total_sq += float((f * f).sum())
        done += b
    mean = total / samples
    var = max(0.0, (total_sq / samples - mean * mean)) * samples / (samples - 1)
    return mean, math.sqrt(var / samples)


def write_coefficient_json(table: CoefficientTable, path) -> None:
    """JSON with entries {n: sparse degree map, value, se, method}."""
    payload = {
        "n_edges": table.n_edges,
        "degree_cap": table.degree_cap,
        "e_phi_sq": table.e_phi_sq,
        "entries": [
            {
                "n": {str(eid): d for eid, d in ent.n.degrees},
                "value": ent.value,
                "se": ent.se,
                "method": ent.method,
            }
            for ent in table.entries
        ],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_coefficient_json(path) -> CoefficientTable:
    with open(path) as fh:
        payload = json.load(fh)
    entries = tuple(
        CoefficientEntry(
            n=multi_index({int(k): int(v) for k, v in ent["n"].items()}),
            value=float(ent["value"]),
            se=None if ent["se"] is None else float(ent["se"]),
            method=str(ent["method"]),
        )
        for ent in payload["entries"]
    )
    e2 = payload["e_phi_sq"]
    return CoefficientTable(n_edges=int(payload["n_edges"]),
                            degree_cap=int(payload["degree_cap"]),
                            entries=entries,
                            e_phi_sq=None if e2 is None else float(e2))
