"""Shared numerics: ODE integration, quadrature, root finding, FD Jacobians, rank queries.

Thin, contract-checked wrappers around scipy/numpy. Every closed form in the library
is cross-checked against routines from this module, so the defaults are tight: the
integrator runs at rel 1e-10 / abs 1e-12 and root polishing at 1e-10 unless a caller
loosens them explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _sint
from scipy import optimize as _sopt

from .errors import DegenerateMatrix, InvalidInput, NonConvergence, StepFailure

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-12
DEFAULT_ROOT_TOL = 1e-10
DEFAULT_RANK_TOL_FACTOR = 1e-7
DEFAULT_SCAN_POINTS = 400


@dataclass(frozen=True)
class OdeProblem:
    """First-order IVP y' = vector_field(t, y), y(t0) = initial_state, on t_span."""

    dimension: int
    vector_field: Callable[[float, np.ndarray], np.ndarray]
    initial_state: np.ndarray
    t_span: tuple[float, float]

    def __post_init__(self):
        if self.dimension < 1:
            raise InvalidInput(f"dimension must be >= 1, got {self.dimension}")
        if len(self.initial_state) != self.dimension:
            raise InvalidInput(
                f"initial_state length {len(self.initial_state)} != dimension {self.dimension}")
        if not self.t_span[0] < self.t_span[1]:
            raise InvalidInput(f"t_span must be increasing, got {self.t_span}")


class Trajectory:
    """Dense ODE solution; callable at any t inside the integrated span."""

    def __init__(self, sol, t_span: tuple[float, float]):
        self._sol = sol
        self.t_span = t_span

    def __call__(self, t: float) -> np.ndarray:
        lo, hi = self.t_span
        if not (lo - 1e-12 <= t <= hi + 1e-12):
            raise InvalidInput(f"t={t} outside integrated span {self.t_span}")
        return np.atleast_1d(self._sol(t))

    @property
    def end(self) -> np.ndarray:
        return self(self.t_span[1])


def integrate(problem: OdeProblem,
              rel_tol: float = DEFAULT_REL_TOL,
              abs_tol: float = DEFAULT_ABS_TOL) -> Trajectory:
    """Integrate an OdeProblem with an embedded RK5(4) pair, dense output.

    Raises StepFailure if the integrator cannot reach the end of the span.
    """
    for tol in (rel_tol, abs_tol):
        if not (0.0 < tol <= 1e-2):
            raise InvalidInput(f"tolerance {tol} outside (0, 1e-2]")
    y0 = np.asarray(problem.initial_state, dtype=float)
    res = _sint.solve_ivp(problem.vector_field, problem.t_span, y0, method="RK45",
                          rtol=rel_tol, atol=abs_tol, dense_output=True)
    if not res.success:
        raise StepFailure(f"integration failed on {problem.t_span}: {res.message}")
    return Trajectory(res.sol, tuple(problem.t_span))


def quad(f: Callable[[float], float], a: float, b: float,
         tol: float = DEFAULT_ROOT_TOL) -> float:
    """Adaptive quadrature of f over [a, b]; the error estimate must meet tol."""
    out = _sint.quad(f, a, b, epsabs=tol, epsrel=tol, limit=200, full_output=1)
    value, abserr = out[0], out[1]
    if len(out) > 3 or abserr > max(tol, tol * abs(value)):
        raise NonConvergence(
            f"quadrature error estimate {abserr:.3e} exceeds tol {tol:.3e} on [{a}, {b}]")
    return value


@dataclass(frozen=True)
class RootHit:
    """One root (or near-tangency) of a scalar function on a scan interval.

    bracketed is True for a sign-change root polished by Brent's method; False for
    an interior dip of |g| below tolerance that never changes sign (an even-order
    contact the caller may want to inspect separately).
    """

    value: float
    residual: float
    bracketed: bool


def find_roots(g: Callable[[float], float], lo: float, hi: float,
               scan_points: int = DEFAULT_SCAN_POINTS,
               tol: float = DEFAULT_ROOT_TOL) -> list[RootHit]:
    """All roots of g on [lo, hi]: uniform scan, then Brent polish on each bracket.

    Every accepted root satisfies |g(r)| <= tol * scale, where scale is the largest
    |g| seen on the scan grid; a sign change across a pole fails that gate and is
    dropped. Even-order contacts (|g| dips below tol * scale without a sign change)
    are reported with bracketed=False. Hits are deduplicated and sorted ascending.
    """
    if not (hi > lo):
        raise InvalidInput(f"empty scan interval [{lo}, {hi}]")
    if scan_points < 2:
        raise InvalidInput("scan_points must be at least 2")
    xs = np.linspace(lo, hi, scan_points)
    gs = np.array([g(x) for x in xs], dtype=float)
    if not np.all(np.isfinite(gs)):
        raise NonConvergence("scan produced non-finite values")
    scale = max(1.0, float(np.max(np.abs(gs))))
    hits: list[RootHit] = []

    for i, x in enumerate(xs):
        if gs[i] == 0.0:
            hits.append(RootHit(float(x), 0.0, True))
    # residual gate: a sign change across a pole (tan-style) converges to the
    # discontinuity, where |g| stays huge; genuine roots polish to ~|g'| * xtol
    residual_cap = tol * scale
    for i in range(len(xs) - 1):
        if gs[i] == 0.0 or gs[i + 1] == 0.0:
            continue
        if np.sign(gs[i]) != np.sign(gs[i + 1]):
            r = _sopt.brentq(g, xs[i], xs[i + 1], xtol=tol * 1e-2, rtol=1e-15)
            residual = abs(g(r))
            if residual <= residual_cap:
                hits.append(RootHit(float(r), residual, True))

    # interior |g| minima below tolerance that never cross zero
    for i in range(1, len(xs) - 1):
        a_, m_, b_ = abs(gs[i - 1]), abs(gs[i]), abs(gs[i + 1])
        if m_ <= a_ and m_ <= b_ and m_ < tol * scale and gs[i] != 0.0:
            if np.sign(gs[i - 1]) == np.sign(gs[i]) == np.sign(gs[i + 1]):
                res = _sopt.minimize_scalar(lambda x: abs(g(x)),
                                            bounds=(xs[i - 1], xs[i + 1]),
                                            method="bounded",
                                            options={"xatol": tol * 1e-2})
                hits.append(RootHit(float(res.x), float(res.fun), False))

    hits.sort(key=lambda h: h.value)
    merged: list[RootHit] = []
    min_gap = (hi - lo) * 1e-9
    for h in hits:
        if merged and abs(h.value - merged[-1].value) < min_gap:
            if h.residual < merged[-1].residual:
                merged[-1] = h
            continue
        merged.append(h)
    return merged


def fd_jacobian(F: Callable[[np.ndarray], np.ndarray], x: Sequence[float],
                h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of F at x; step scaled per coordinate."""
    if not (1e-8 <= h <= 1e-3):
        raise InvalidInput(f"step h={h} outside [1e-8, 1e-3]")
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(x.size):
        hj = h * max(1.0, abs(x[j]))
        xp = x.copy(); xp[j] += hj
        xm = x.copy(); xm[j] -= hj
        cols.append((np.asarray(F(xp), dtype=float) - np.asarray(F(xm), dtype=float)) / (2.0 * hj))
    return np.column_stack(cols)


@dataclass(frozen=True)
class RankResult:
    """SVD-based numeric rank report."""

    singular_values: np.ndarray
    numeric_rank: int
    nullspace_basis: tuple[np.ndarray, ...]
    tolerance_used: float


def rank_nullspace(M: np.ndarray, tol_factor: float = DEFAULT_RANK_TOL_FACTOR) -> RankResult:
    """Numeric rank and nullspace of M; threshold is tol_factor * largest singular value."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.size == 0:
        raise InvalidInput(f"expected a nonempty 2-d matrix, got shape {M.shape}")
    if not (0.0 < tol_factor < 1.0):
        raise InvalidInput(f"tol_factor {tol_factor} outside (0, 1)")
    if not np.all(np.isfinite(M)):
        raise DegenerateMatrix("matrix contains non-finite entries")
    _, s, vh = np.linalg.svd(M)
    if s.size == 0 or s[0] == 0.0:
        raise DegenerateMatrix("zero matrix has no usable rank threshold")
    tol = tol_factor * float(s[0])
    rank = int(np.sum(s > tol))
    basis = tuple(vh[k].copy() for k in range(rank, M.shape[1]))
    return RankResult(singular_values=s, numeric_rank=rank,
                      nullspace_basis=basis, tolerance_used=tol)
