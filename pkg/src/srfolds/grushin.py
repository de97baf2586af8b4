"""The alpha-Grushin plane: closed-form geodesics and conjugate-locus analysis.

The plane is R^2 with orthonormal frame X = d/dx, Y = |x|^alpha d/dy, so normal
geodesics from (x0, y0) with initial covector (u0, v0) follow the Hamiltonian
H = (u^2 + v^2 |x|^(2 alpha)) / 2. When v0 != 0 the horizontal coordinate is a
scaled generalized sine,

    x(t) = A sin_alpha(omega t + phi),   u(t) = A omega cos_alpha(omega t + phi),

with amplitude A = (2H / v0^2)^(1/(2 alpha)), frequency omega = v0 A^(alpha-1)
and phase phi fixed by the initial conditions; y(t) integrates in closed form
from the conserved quantities. Degenerate covectors (v0 = 0 straight lines,
H = 0 rest points) are explicit branches.

All fractional powers follow the even/odd convention x^(2 alpha) := |x|^(2 alpha)
and x^(2(alpha-1)) x := |x|^(2(alpha-1)) x, which keeps every field real and odd
for non-integer alpha.

Conjugate covectors at time one are the zeros of

    f(u0, v0) = u1 (u0 + x0) - u0 x1        (endpoint values u1, x1)

with v0 != 0; they all have order one, with kernel direction
(v0 |x0|^(2 alpha), -u0) in the (u, v) fiber coordinates. The analytic gradient
of f drives the fold/tangential split; here the strata are not named by
separate functions, so records are labeled C0 (transversal) or C1 (tangent)
after the kernel pairing is known.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .alphatrig import arc_alpha, pi_alpha, sin_cos_alpha
from .errors import DegenerateCovector, InvalidInput, NotConjugate
from .numeric import OdeProblem, integrate
from .singularity import PAIRING_TOL, StructureAdapter
from .state import GeodesicState, JacobiCoords

# relative tolerance deciding the u0 + x0 = 0 branch of the gradient formulas
_BRANCH_TOL = 1e-12


@dataclass(frozen=True)
class GrushinBase:
    """Base point (x0, y0) of the plane together with the exponent alpha."""

    alpha: float
    x0: float
    y0: float

    def __post_init__(self) -> None:
        for name in ("alpha", "x0", "y0"):
            value = getattr(self, name)
            if not (np.isscalar(value) and math.isfinite(float(value))):
                raise InvalidInput(f"{name} must be a finite real, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.alpha < 1.0:
            raise InvalidInput(f"alpha must be >= 1, got {self.alpha}")


@dataclass(frozen=True)
class GrushinCovector:
    """Initial covector u0 dx + v0 dy at the base point."""

    u0: float
    v0: float

    def __post_init__(self) -> None:
        for name in ("u0", "v0"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidInput(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class GrushinAmplitude:
    """Amplitude, frequency and phase of the oscillatory branch."""

    A: float
    omega: float
    phi: float


@dataclass(frozen=True)
class GrushinJacobiCoeffs:
    """Coefficients k1, k2, k3 of the closed-form Jacobi solution ansatz."""

    k1: float
    k2: float
    k3: float


def _cov_pair(cov) -> tuple[float, float]:
    if isinstance(cov, GrushinCovector):
        return cov.u0, cov.v0
    u0, v0 = (float(c) for c in cov)
    if not (math.isfinite(u0) and math.isfinite(v0)):
        raise InvalidInput(f"covector components must be finite, got {cov!r}")
    return u0, v0


def _even_power(x: float, alpha: float) -> float:
    """|x|^(2 alpha)."""
    return abs(x) ** (2.0 * alpha)


def _odd_power(x: float, alpha: float) -> float:
    """|x|^(2(alpha-1)) x, the odd companion of the even power; 0 at x = 0."""
    if x == 0.0:
        return 0.0
    return abs(x) ** (2.0 * (alpha - 1.0)) * x


def _energy(base: GrushinBase, u0: float, v0: float) -> float:
    """2H at the base point."""
    return u0 * u0 + v0 * v0 * _even_power(base.x0, base.alpha)


def _curvature_resolvable(h2: float, v0: float) -> bool:
    """True when the oscillator parameters are representable in doubles.

    v0 whose square underflows (or whose amplitude ratio overflows) bends the
    geodesic by less than one ulp over unit time, so the straight-line branch
    is the accurate evaluation there.
    """
    if v0 == 0.0 or v0 * v0 == 0.0:
        return False
    return math.isfinite(math.sqrt(h2) / abs(v0))


def _oscillator(base: GrushinBase, u0: float, v0: float,
                h2: float) -> tuple[float, float, float, float]:
    """(amp, omega, phase, flip) with x(t) = amp sin_alpha(phase + flip omega t).

    phase lies in [-pi_alpha/2, pi_alpha/2] and flip is -1 exactly when
    u0 v0 < 0, so that u(t) = flip amp omega cos_alpha(phase + flip omega t).
    Keeping the phase as a signed small angle matters: the equivalent single
    phase in [0, 2 pi_alpha) sits next to pi_alpha when u0 v0 < 0, and forming
    it destroys the small effective angle that the amplitude (of order 1/|v0|)
    then amplifies.
    """
    alpha = base.alpha
    amp = (math.sqrt(h2) / abs(v0)) ** (1.0 / alpha)
    omega = v0 * amp ** (alpha - 1.0)
    ratio = min(max(base.x0 / amp, -1.0), 1.0)
    phase = math.copysign(arc_alpha(alpha, abs(ratio), 1.0), base.x0)
    flip = -1.0 if u0 * v0 < 0.0 else 1.0
    return amp, omega, phase, flip


def grushin_amplitude(base: GrushinBase, cov) -> GrushinAmplitude:
    """(A, omega, phi) of the oscillatory branch; requires v0 != 0 and H != 0."""
    u0, v0 = _cov_pair(cov)
    h2 = _energy(base, u0, v0)
    if h2 == 0.0 or not _curvature_resolvable(h2, v0):
        raise DegenerateCovector(
            f"amplitude parameters need v0 != 0 and H != 0, got (u0, v0)=({u0}, {v0})")
    amp, omega, phase, flip = _oscillator(base, u0, v0, h2)
    half = pi_alpha(base.alpha)
    if flip > 0.0:
        phi = phase if phase >= 0.0 else phase + 2.0 * half
    else:
        phi = half - phase
    return GrushinAmplitude(A=amp, omega=omega, phi=phi)


def grushin_exp(base: GrushinBase, cov, t: float) -> GeodesicState:
    """Normal geodesic from the base point at time t: positions and momenta."""
    u0, v0 = _cov_pair(cov)
    t = float(t)
    h2 = _energy(base, u0, v0)
    if h2 == 0.0:
        return GeodesicState(t, (base.x0, base.y0), (u0, v0))
    if not _curvature_resolvable(h2, v0):
        return GeodesicState(t, (base.x0 + u0 * t, base.y0), (u0, v0))
    alpha = base.alpha
    amp, omega, phase, flip = _oscillator(base, u0, v0, h2)
    sin_a, cos_a = sin_cos_alpha(alpha, phase + flip * omega * t)
    x = amp * sin_a
    u = flip * amp * omega * cos_a
    y = base.y0 + (t * h2 + u0 * base.x0 - u * x) / (v0 * (alpha + 1.0))
    return GeodesicState(t, (x, y), (u, v0))


def grushin_dexp(base: GrushinBase, cov) -> np.ndarray:
    """Analytic Jacobian d(x1, y1)/d(u0, v0) of the time-one endpoint map."""
    u0, v0 = _cov_pair(cov)
    alpha = base.alpha
    x0 = base.x0
    x2a = _even_power(x0, alpha)
    h2 = u0 * u0 + v0 * v0 * x2a
    if h2 == 0.0:
        raise DegenerateCovector("endpoint differential undefined at H = 0")
    if not _curvature_resolvable(h2, v0):
        # straight-line branch: y responds to v0 only through the removable limit
        # dy/dv0 = integral of |x|^(2 alpha) along the line x0 + u0 t
        x1 = x0 + u0
        flux = _even_power(x1, alpha) * x1 - _even_power(x0, alpha) * x0
        dy_dv = flux / ((2.0 * alpha + 1.0) * u0)
        return np.array([[1.0, 0.0], [0.0, dy_dv]])
    state = grushin_exp(base, cov, 1.0)
    x, _ = state.position
    u, _ = state.momentum
    u_dot = -alpha * v0 * v0 * _odd_power(x, alpha)
    a = alpha
    t = 1.0
    dx_du = (((a - 1.0) * t * u0 - x0) * u + u0 * x) / (h2 * a)
    dx_dv = ((t * (a * (h2 - u0 * u0) + u0 * u0) + u0 * x0) * u
             - u0 * u0 * x) / (h2 * a * v0)
    du_du = (a * u0 * u + ((a - 1.0) * t * u0 - x0) * u_dot) / (h2 * a)
    du_dv = (a * (h2 - u0 * u0) * u
             + (t * (a * (h2 - u0 * u0) + u0 * u0) + u0 * x0) * u_dot) / (a * h2 * v0)
    residue = t * h2 + u0 * x0 - u * x
    d_res_du = 2.0 * t * u0 + x0 - du_du * x - u * dx_du
    d_res_dv = 2.0 * t * v0 * x2a - du_dv * x - u * dx_dv
    dy_du = d_res_du / (v0 * (a + 1.0))
    dy_dv = d_res_dv / (v0 * (a + 1.0)) - residue / (v0 * v0 * (a + 1.0))
    return np.array([[dx_du, dx_dv], [dy_du, dy_dv]])


def grushin_jacobi_coefficients(base: GrushinBase, cov,
                                init: JacobiCoords) -> GrushinJacobiCoeffs:
    """Ansatz coefficients k1, k2, k3 matching the initial Jacobi data."""
    u0, v0 = _cov_pair(cov)
    h2 = _energy(base, u0, v0)
    if h2 == 0.0 or not _curvature_resolvable(h2, v0):
        raise DegenerateCovector(
            "closed-form Jacobi coefficients need v0 != 0 and H != 0")
    pa0, pb0 = init.p
    xa0, _ = init.x
    a = base.alpha
    x0 = base.x0
    odd0 = _odd_power(x0, a)
    k1 = (a * xa0 * v0 ** 3 * odd0 + pa0 * u0 * v0 - pb0 * u0 * u0) / (a * v0 * h2)
    k2 = (a * xa0 * u0 * v0 - pa0 * v0 * x0 + pb0 * u0 * x0) / (a * v0 * h2)
    k3 = ((a - 1.0) * v0 * k1 + pb0) / v0
    return GrushinJacobiCoeffs(k1=k1, k2=k2, k3=k3)


def grushin_jacobi(base: GrushinBase, cov, init: JacobiCoords,
                   t: float) -> JacobiCoords:
    """Jacobi data (p_a, p_b, x_a, x_b)(t) along the geodesic of cov.

    Uses the closed-form ansatz whenever v0 != 0 and H != 0; on the degenerate
    branches it falls back to numeric integration of the linearized system
    along the explicit geodesic (which needs t >= 0).
    """
    u0, v0 = _cov_pair(cov)
    t = float(t)
    h2 = _energy(base, u0, v0)
    if h2 == 0.0 or not _curvature_resolvable(h2, v0):
        return _grushin_jacobi_numeric(base, (u0, v0), init, t)
    a = base.alpha
    x0 = base.x0
    pa0, pb0 = init.p
    xa0, xb0 = init.x
    coeffs = grushin_jacobi_coefficients(base, cov, init)
    k1, k2, k3 = coeffs.k1, coeffs.k2, coeffs.k3
    state = grushin_exp(base, cov, t)
    x, _ = state.position
    u, _ = state.momentum
    u_dot = -a * v0 * v0 * _odd_power(x, a)
    xa = k1 * x + (k2 + k3 * t) * u
    pa = (k1 + k3) * u + (k2 + k3 * t) * u_dot
    y_flux = (t * h2 + u0 * x0 - u * x) / (v0 * (a + 1.0))
    z_flux = (u0 * x0 - a * t * h2 + (a + 1.0) * t * u * u - u * x) / (v0 * (a + 1.0))
    xb = (xb0 + (pb0 / v0 + 2.0 * a * k1) * y_flux
          - (k2 / v0) * (u * u - u0 * u0) - k3 * z_flux)
    return JacobiCoords(p=(pa, pb0), x=(xa, xb))


def _grushin_jacobi_numeric(base: GrushinBase, cov: tuple[float, float],
                            init: JacobiCoords, t: float) -> JacobiCoords:
    """Integrate the linearized system along the explicit degenerate geodesic."""
    if t < 0.0:
        raise InvalidInput("numeric Jacobi fallback needs t >= 0")
    pa0, pb0 = init.p
    xa0, xb0 = init.x
    if t == 0.0:
        return JacobiCoords(p=(pa0, pb0), x=(xa0, xb0))
    u0, v0 = cov
    a = base.alpha
    h2 = _energy(base, u0, v0)

    def x_path(tt: float) -> float:
        if h2 == 0.0:
            return base.x0
        return base.x0 + u0 * tt

    def field(tt: float, y: np.ndarray) -> np.ndarray:
        pa, pb, xa, xb = y
        x = x_path(tt)
        even = abs(x) ** (2.0 * (a - 1.0))
        odd = _odd_power(x, a)
        pa_dot = (-2.0 * a * v0 * odd * pb
                  - a * (2.0 * a - 1.0) * v0 * v0 * even * xa)
        xb_dot = _even_power(x, a) * pb + 2.0 * a * v0 * odd * xa
        return np.array([pa_dot, 0.0, pa, xb_dot])

    problem = OdeProblem(dimension=4, vector_field=field,
                         initial_state=np.array([pa0, pb0, xa0, xb0]),
                         t_span=(0.0, t))
    pa, pb, xa, xb = integrate(problem).end
    return JacobiCoords(p=(pa, pb), x=(xa, xb))


def grushin_conj_f(base: GrushinBase, cov) -> float:
    """Conjugacy function f = u1 (u0 + x0) - u0 x1 at time one.

    Its zeros with v0 != 0 are exactly the conjugate covectors; along v0 = 0
    rays f vanishes identically and carries no information, which is why ray
    scans gate those out.
    """
    u0, v0 = _cov_pair(cov)
    if _energy(base, u0, v0) == 0.0:
        raise DegenerateCovector("conjugacy function undefined at H = 0")
    state = grushin_exp(base, cov, 1.0)
    x1, _ = state.position
    u1, _ = state.momentum
    return u1 * (u0 + base.x0) - u0 * x1


def grushin_conj_grad(base: GrushinBase, cov) -> np.ndarray:
    """Analytic gradient (df/du0, df/dv0) of the conjugacy function."""
    u0, v0 = _cov_pair(cov)
    alpha = base.alpha
    x0 = base.x0
    x2a = _even_power(x0, alpha)
    h2 = u0 * u0 + v0 * v0 * x2a
    if h2 == 0.0:
        raise DegenerateCovector("conjugacy gradient undefined at H = 0")
    if v0 == 0.0:
        raise DegenerateCovector(
            "conjugacy gradient undefined on the v0 = 0 branch (f vanishes identically)")
    state = grushin_exp(base, cov, 1.0)
    x1, _ = state.position
    u1, _ = state.momentum
    u1_dot = -alpha * v0 * v0 * _odd_power(x1, alpha)
    a = alpha
    edge = u0 + x0
    if abs(edge) <= _BRANCH_TOL * max(1.0, abs(u0), abs(x0)):
        df_du = u1 * v0 * v0 * x2a / h2
        df_dv = u1 * v0 * x2a * x0 / h2
        return np.array([df_du, df_dv])
    df_du = (u1_dot * edge * edge * ((a - 1.0) * u0 - x0)
             - a * v0 * v0 * x1 * x2a * x0) / (a * edge * h2)
    df_dv = (u1_dot * edge * edge * (u0 * u0 + a * v0 * v0 * x2a + u0 * x0)
             + a * u0 * v0 * v0 * x1 * x2a * x0) / (a * v0 * edge * h2)
    return np.array([df_du, df_dv])


def grushin_kernel(base: GrushinBase, cov, tol: float = 1e-8) -> list[np.ndarray]:
    """Unit kernel vector(s) of the endpoint differential at a conjugate covector.

    The kernel is always one-dimensional here, spanned by
    (v0 |x0|^(2 alpha), -u0) in the (u, v) fiber coordinates.
    """
    u0, v0 = _cov_pair(cov)
    if _energy(base, u0, v0) == 0.0:
        raise DegenerateCovector("kernel undefined at H = 0")
    if v0 == 0.0:
        raise DegenerateCovector("no conjugate covectors along v0 = 0 rays")
    state = grushin_exp(base, cov, 1.0)
    x1, _ = state.position
    u1, _ = state.momentum
    f = u1 * (u0 + base.x0) - u0 * x1
    scale = max(1.0, abs(u1) * (abs(u0) + abs(base.x0)) + abs(u0) * abs(x1))
    if abs(f) > tol * scale:
        raise NotConjugate(
            f"covector is not conjugate: |f| = {abs(f):.3e} exceeds {tol * scale:.3e}")
    kern = np.array([v0 * _even_power(base.x0, base.alpha), -u0])
    return [kern / np.linalg.norm(kern)]


def grushin_adapter(base: GrushinBase) -> StructureAdapter:
    """Plug the plane into the generic conjugate-locus scanner.

    The chart is the plane itself, so exp_chart is just the endpoint position;
    chart selection is trivially center-independent. Records start on the
    placeholder stratum and are renamed C0/C1 from the kernel pairing, the
    transversality that defines the strata for this structure.
    """

    def exp_chart(cov, center=None) -> np.ndarray:
        return np.asarray(grushin_exp(base, cov, 1.0).position, dtype=float)

    def conj_f(cov) -> tuple[float]:
        return (grushin_conj_f(base, cov),)

    def conj_grad(cov, stratum: str) -> np.ndarray:
        return grushin_conj_grad(base, cov)

    def kernel(cov) -> np.ndarray:
        return grushin_kernel(base, cov)[0]

    def ray_gate(direction: np.ndarray) -> bool:
        du, dv = float(direction[0]), float(direction[1])
        if dv == 0.0:
            return False
        return _energy(base, du, dv) > 0.0

    def stratum_relabel(cov, pairing: float) -> str:
        return "C0" if abs(pairing) > PAIRING_TOL else "C1"

    def kernel_jacobi_p0(cov) -> np.ndarray:
        return kernel(cov)

    def jacobi_p_end(cov, p0) -> np.ndarray:
        coords = grushin_jacobi(base, cov, JacobiCoords(p=tuple(p0), x=(0.0, 0.0)), 1.0)
        return np.asarray(coords.p, dtype=float)

    def frame_images(cov) -> np.ndarray:
        # fiber perturbations are realized directly in plane coordinates
        return np.eye(2)

    return StructureAdapter(
        name="grushin",
        fiber_dim=2,
        exp_chart=exp_chart,
        conj_f=conj_f,
        conj_grad=conj_grad,
        kernel=kernel,
        stratum_names=("other",),
        ray_gate=ray_gate,
        stratum_relabel=stratum_relabel,
        kernel_jacobi_p0=kernel_jacobi_p0,
        jacobi_p_end=jacobi_p_end,
        frame_images=frame_images,
    )
