"""Conjugate-locus scanning and Whitney-type classification, generic over structures.

A geometric structure plugs in through StructureAdapter: a chart presentation of
its fiber exponential (endpoint of the unit-time geodesic as a function of the
initial covector), analytic stratum functions whose zeros along a ray mark the
conjugate covectors, analytic gradients and kernel vectors, and optional hooks
into closed-form Jacobi solutions.

Classification at an order-one conjugate covector follows the transversality
dichotomy: when the active stratum's gradient pairs nontrivially with the kernel
direction, the singularity is a fold; when the pairing vanishes, the certificate
for the tangential (xz-type) normal form is a nonzero mixed second derivative
along the radial (Euler) direction and the kernel direction, projected outside
the image of the differential. Anything that fails both certificates, or that an
adapter explicitly excludes, is reported as Undetermined rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InvalidInput, WitnessNotFound
from .numeric import (DEFAULT_RANK_TOL_FACTOR, DEFAULT_ROOT_TOL,
                      DEFAULT_SCAN_POINTS, fd_jacobian, find_roots,
                      rank_nullspace)

# |<grad, kernel>| / (|grad| |kernel|) above this means transversal (fold)
PAIRING_TOL = 1e-6
# projected mixed second derivative above this certifies the tangential form
SECOND_ORDER_TOL = 1e-3
# relative offset of the first scan node from the ray origin
RAY_ORIGIN_OFFSET = 1e-4


class SingularityClass(Enum):
    NOT_SINGULAR = "NotSingular"
    FOLD = "Fold"
    TANGENTIAL = "Tangential"
    UNDETERMINED = "Undetermined"


def _never(cov: np.ndarray, stratum: str) -> bool:
    return False


@dataclass(frozen=True)
class StructureAdapter:
    """Hooks a geometric structure into the generic scanner and classifier.

    exp_chart(cov, center=None) maps a fiber covector to chart coordinates of
    the time-one endpoint; the chart selection must be frozen at `center` (the
    covector under study) so finite differences never straddle a chart switch.
    conj_f returns the tuple of stratum function values aligned with
    stratum_names; conj_grad(cov, stratum) the analytic gradient of one of
    them; kernel(cov) a unit kernel vector at a conjugate covector.

    ray_gate(direction) says whether covectors along the ray can be conjugate
    at all; undetermined(cov, stratum) marks points the classification theory
    deliberately excludes. stratum_relabel, if given, renames a record's
    stratum once the kernel/gradient pairing is known (used when the strata
    are defined by transversality rather than by separate functions).

    kernel_jacobi_p0 / jacobi_p_end / frame_images expose closed-form Jacobi
    data for regularity_isomorphism_check: the vertical Jacobi datum spanning
    the kernel, its momentum propagated to t=1, and the chart images of the
    frame directions at the endpoint.
    """

    name: str
    fiber_dim: int
    exp_chart: Callable[..., np.ndarray]
    conj_f: Callable[[np.ndarray], tuple]
    conj_grad: Callable[[np.ndarray, str], np.ndarray]
    kernel: Callable[[np.ndarray], np.ndarray]
    stratum_names: tuple[str, ...]
    ray_gate: Callable[[np.ndarray], bool]
    undetermined: Callable[[np.ndarray, str], bool] = field(default=_never)
    stratum_relabel: Optional[Callable[[np.ndarray, float], str]] = None
    kernel_jacobi_p0: Optional[Callable[[np.ndarray], np.ndarray]] = None
    jacobi_p_end: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    frame_images: Optional[Callable[[np.ndarray], np.ndarray]] = None


@dataclass(frozen=True)
class ConjugateRecord:
    """One conjugate covector found on a ray, with its cross-validated order."""

    s: float
    covector: np.ndarray
    stratum: str
    order: int
    kernel_basis: tuple[np.ndarray, ...]
    f_values: tuple[float, ...]
    singularity_class: SingularityClass


@dataclass(frozen=True)
class FoldWitness:
    """Two distinct covectors near a fold whose endpoints coincide."""

    covector_a: np.ndarray
    covector_b: np.ndarray
    image_distance: float
    separation: float


def _chart_at(adapter: StructureAdapter, center: np.ndarray):
    def chart(cov: np.ndarray) -> np.ndarray:
        return np.asarray(adapter.exp_chart(cov, center), dtype=float)
    return chart


def _normalized_pairing(adapter: StructureAdapter,
                        record: ConjugateRecord) -> Optional[float]:
    grad = np.asarray(adapter.conj_grad(record.covector, record.stratum), float)
    kern = np.asarray(record.kernel_basis[0], float)
    denom = float(np.linalg.norm(grad) * np.linalg.norm(kern))
    if denom == 0.0 or not np.isfinite(denom):
        return None
    return float(grad @ kern / denom)


def _image_complement(chart, cov: np.ndarray,
                      rank_tol_factor: float) -> Optional[np.ndarray]:
    """Orthonormal basis of the complement of Im(d chart) at cov, or None if full rank."""
    jac = fd_jacobian(chart, cov)
    u_mat, svals, _ = np.linalg.svd(jac)
    if svals[0] == 0.0:
        return u_mat
    rank = int(np.sum(svals > rank_tol_factor * svals[0]))
    if rank == jac.shape[0]:
        return None
    return u_mat[:, rank:]


def scan_ray(adapter: StructureAdapter, direction: Sequence[float], s_max: float, *,
             scan_points: int = DEFAULT_SCAN_POINTS,
             root_tol: float = DEFAULT_ROOT_TOL,
             pairing_tol: float = PAIRING_TOL,
             second_order_tol: float = SECOND_ORDER_TOL,
             rank_tol_factor: float = DEFAULT_RANK_TOL_FACTOR) -> list[ConjugateRecord]:
    """Conjugate covectors on the ray {s * direction : 0 < s <= s_max}, classified.

    Roots of each stratum function are located by a scan-and-bracket search;
    every root is cross-validated by the finite-difference rank of the chart
    exponential before it becomes a record. Records are sorted by s.
    """
    d = np.asarray(direction, dtype=float)
    if d.shape != (adapter.fiber_dim,):
        raise InvalidInput(
            f"direction must have {adapter.fiber_dim} components, got shape {d.shape}")
    norm_d = float(np.linalg.norm(d))
    if norm_d == 0.0 or not np.isfinite(norm_d):
        raise InvalidInput("direction must be a nonzero finite vector")
    if not (s_max > 0.0):
        raise InvalidInput(f"s_max must be positive, got {s_max}")
    d = d / norm_d
    if not adapter.ray_gate(d):
        return []
    lo = s_max * RAY_ORIGIN_OFFSET
    records: list[ConjugateRecord] = []
    for idx, stratum in enumerate(adapter.stratum_names):
        def g(s: float, _i: int = idx) -> float:
            return float(adapter.conj_f(s * d)[_i])
        for hit in find_roots(g, lo, s_max, scan_points=scan_points, tol=root_tol):
            if not hit.bracketed:
                continue
            records.append(_build_record(
                adapter, d, hit.value, stratum,
                pairing_tol=pairing_tol, second_order_tol=second_order_tol,
                rank_tol_factor=rank_tol_factor))
    records.sort(key=lambda rec: rec.s)
    return records


def _build_record(adapter: StructureAdapter, d: np.ndarray, s: float, stratum: str, *,
                  pairing_tol: float, second_order_tol: float,
                  rank_tol_factor: float) -> ConjugateRecord:
    cov = s * d
    chart = _chart_at(adapter, cov)
    rank_info = rank_nullspace(fd_jacobian(chart, cov), rank_tol_factor)
    order = adapter.fiber_dim - rank_info.numeric_rank
    f_values = tuple(float(v) for v in adapter.conj_f(cov))
    if order == 1:
        kernel_basis = (np.asarray(adapter.kernel(cov), dtype=float),)
    else:
        kernel_basis = tuple(rank_info.nullspace_basis)
    record = ConjugateRecord(s=float(s), covector=cov, stratum=stratum, order=order,
                             kernel_basis=kernel_basis, f_values=f_values,
                             singularity_class=SingularityClass.UNDETERMINED)
    cls = classify(adapter, record,
                   pairing_tol=pairing_tol, second_order_tol=second_order_tol,
                   rank_tol_factor=rank_tol_factor)
    if adapter.stratum_relabel is not None and order == 1:
        pairing = _normalized_pairing(adapter, record)
        if pairing is not None:
            record = replace(record, stratum=adapter.stratum_relabel(cov, pairing))
    return replace(record, singularity_class=cls)


def classify(adapter: StructureAdapter, record: ConjugateRecord, *,
             pairing_tol: float = PAIRING_TOL,
             second_order_tol: float = SECOND_ORDER_TOL,
             rank_tol_factor: float = DEFAULT_RANK_TOL_FACTOR) -> SingularityClass:
    """Fold / Tangential / Undetermined for an order-one record; NotSingular at order 0.

    The decision depends only on directions, not magnitudes: the pairing is
    normalized by |grad| |kernel|, and the second-order certificate is a norm of
    a projection, so rescaling gradient or kernel vectors cannot flip the class.
    """
    if record.order == 0:
        return SingularityClass.NOT_SINGULAR
    if record.order != 1:
        return SingularityClass.UNDETERMINED
    if adapter.undetermined(record.covector, record.stratum):
        return SingularityClass.UNDETERMINED
    pairing = _normalized_pairing(adapter, record)
    if pairing is None:
        return SingularityClass.UNDETERMINED
    if abs(pairing) > pairing_tol:
        return SingularityClass.FOLD
    value = second_order_transversality(adapter, record,
                                        rank_tol_factor=rank_tol_factor)
    if value > second_order_tol:
        return SingularityClass.TANGENTIAL
    return SingularityClass.UNDETERMINED


def second_order_transversality(adapter: StructureAdapter, record: ConjugateRecord, *,
                                step: float = 1e-4,
                                rank_tol_factor: float = DEFAULT_RANK_TOL_FACTOR) -> float:
    """Norm of the mixed radial/kernel second derivative outside Im(d exp_chart).

    Evaluates d^2/ds dr of (s, r) -> exp_chart((1+s)(cov + r k)) at (0, 0) by a
    four-point central stencil and projects it onto the orthogonal complement of
    the image of the differential. Returns 0.0 when the differential has full
    rank (no complement to project onto).
    """
    if record.order < 1:
        return 0.0
    cov = np.asarray(record.covector, dtype=float)
    chart = _chart_at(adapter, cov)
    complement = _image_complement(chart, cov, rank_tol_factor)
    if complement is None:
        return 0.0
    kern = np.asarray(record.kernel_basis[0], dtype=float)
    kern = kern / np.linalg.norm(kern)

    def endpoint(sgn_s: float, sgn_r: float) -> np.ndarray:
        return chart((1.0 + sgn_s * step) * (cov + sgn_r * step * kern))

    mixed = (endpoint(1, 1) - endpoint(1, -1) - endpoint(-1, 1) + endpoint(-1, -1))
    mixed /= 4.0 * step * step
    return float(np.linalg.norm(complement.T @ mixed))


def fold_witness(adapter: StructureAdapter, record: ConjugateRecord,
                 delta: float) -> FoldWitness:
    """Two covectors within delta of the fold whose endpoints coincide to 1e-9.

    Steps +-a along the kernel direction and Newton-corrects the full covector
    on the far side until both images agree, certifying non-injectivity of the
    exponential in every neighbourhood of the fold point.
    """
    if record.singularity_class is not SingularityClass.FOLD:
        raise InvalidInput("fold_witness requires a record classified as Fold")
    if not (delta > 0.0):
        raise InvalidInput(f"delta must be positive, got {delta}")
    cov = np.asarray(record.covector, dtype=float)
    kern = np.asarray(record.kernel_basis[0], dtype=float)
    kern = kern / np.linalg.norm(kern)
    chart = _chart_at(adapter, cov)
    for a in (delta / 2.0, delta / 3.0, delta / 4.0):
        pair = _newton_partner(chart, cov, kern, a)
        if pair is None:
            continue
        lam_a, lam_b, dist = pair
        separation = float(np.linalg.norm(lam_a - lam_b))
        if (dist <= 1e-9 and separation >= delta / 4.0
                and np.linalg.norm(lam_a - cov) <= delta
                and np.linalg.norm(lam_b - cov) <= delta):
            return FoldWitness(covector_a=lam_a, covector_b=lam_b,
                               image_distance=dist, separation=separation)
    raise WitnessNotFound(
        f"no coincident endpoint pair within delta={delta} of the fold covector; "
        "the record may be misclassified")


def _newton_partner(chart, cov: np.ndarray, kern: np.ndarray, a: float):
    """Newton solve for the partner covector across the fold line, or None."""
    lam_a = cov + a * kern
    target = chart(lam_a)
    lam_b = cov - a * kern
    for _ in range(50):
        residual = chart(lam_b) - target
        if np.linalg.norm(residual) <= 1e-13:
            break
        try:
            jac = fd_jacobian(chart, lam_b, h=1e-7)
            step_vec = np.linalg.solve(jac, residual)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step_vec)):
            return None
        step_norm = float(np.linalg.norm(step_vec))
        if step_norm > 5.0 * a:
            step_vec *= 5.0 * a / step_norm
        lam_b = lam_b - step_vec
    dist = float(np.linalg.norm(chart(lam_b) - target))
    return lam_a, lam_b, dist


def regularity_isomorphism_check(adapter: StructureAdapter, record: ConjugateRecord, *,
                                 independence_tol: float = 1e-3,
                                 rank_tol_factor: float = DEFAULT_RANK_TOL_FACTOR) -> bool:
    """True when the kernel Jacobi datum's endpoint momentum escapes Im(d exp).

    Takes the vertical Jacobi datum p(0) whose field vanishes at both ends,
    propagates the momentum to t=1 with the structure's closed-form Jacobi
    solution, realizes it in the chart through the endpoint frame images, and
    tests linear independence from the image of the differential.
    """
    if record.order != 1:
        raise InvalidInput("regularity check requires an order-one record")
    if (adapter.kernel_jacobi_p0 is None or adapter.jacobi_p_end is None
            or adapter.frame_images is None):
        raise InvalidInput(
            f"structure {adapter.name!r} does not expose Jacobi hooks")
    cov = np.asarray(record.covector, dtype=float)
    p0 = np.asarray(adapter.kernel_jacobi_p0(cov), dtype=float)
    p1 = np.asarray(adapter.jacobi_p_end(cov, p0), dtype=float)
    vec = np.asarray(adapter.frame_images(cov), dtype=float) @ p1
    norm_vec = float(np.linalg.norm(vec))
    if norm_vec == 0.0:
        return False
    chart = _chart_at(adapter, cov)
    complement = _image_complement(chart, cov, rank_tol_factor)
    if complement is None:
        return False
    return bool(np.linalg.norm(complement.T @ vec) > independence_tol * norm_vec)
