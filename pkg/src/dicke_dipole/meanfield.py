"""Thermodynamic-limit phase structure of the dipole-coupled Dicke model.

For N -> infinity the partition function is dominated by constant stationary
configurations of the rescaled boson amplitude b0 and of the auxiliary field
r0 that decouples the dipole exchange.  With

    G     = (g1 + g2)**2 - omega0*lam          (effective coupling, energy^2)
    Delta = (g1 + g2)*b0 - sqrt(lam)*r0        (condensate amplitude, energy)

the effective atomic gap is Omega_Delta = sqrt(Omega**2 + 4*Delta**2), and a
nonzero condensate must solve the gap equation

    tanh(beta*Omega_Delta/2) / Omega_Delta = omega0 / G.

The left side is strictly decreasing in Omega_Delta for Omega_Delta > 0, so
the superradiant root on [Omega, inf) is unique whenever it exists, i.e. when
G > 0 and tanh(beta*Omega/2)/Omega > omega0/G.  Setting b0 = 0 instead gives
the critical condition tanh(beta_c*Omega/2) = omega0*Omega/G, hence

    beta_c = (2/Omega) * artanh(omega0*Omega/G)        for 0 < omega0*Omega/G < 1

and no finite-temperature transition otherwise.  In the superradiant phase
the free energy per atom drops below the noninteracting reference by

    f_diff = omega0*(Omega_Delta**2 - Omega**2)/(4*G)
             - (1/beta)*ln( cosh(beta*Omega_Delta/2) / cosh(beta*Omega/2) ),

while f_diff = 0 in the normal phase.

Solutions are reported in the canonical gauge b0 >= 0, Delta >= 0 (the model
has a b -> -b symmetry combined with a spin phase flip).  For lam < 0 the
auxiliary stationary value sqrt(lam)*r0 is real even though r0 itself would
be imaginary; GapSolution.r0 then stores the sqrt(lam)-rescaled value
r0~ = Delta*omega0/G, and every residual involving r0 is evaluated through
the products sqrt(lam)*r0 = lam*r0~, which stay real.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from .errors import ConvergenceError, DomainError
from .model import ModelParams, Thermo, effective_coupling, validate

# Bisection relative tolerance on Omega_Delta (overridable per solve_gap
# call) and the acceptance threshold consumers compare residuals against.
GAP_RTOL = 1e-13
RESIDUAL_TOL = 1e-10

_LN2 = math.log(2.0)


class PhaseLabel(Enum):
    NORMAL = "normal"
    SUPERRADIANT = "superradiant"
    NO_FINITE_TRANSITION = "no_transition"


@dataclass(frozen=True)
class GapSolution:
    """Stationary-point data returned by :func:`solve_gap`.

    Attributes:
        omega_delta: effective gap; equals Omega in the normal phase.
        delta: condensate amplitude, sqrt(omega_delta**2 - Omega**2)/2.
        b0: boson order parameter (per-sqrt(N) rescaled), >= 0.
        r0: auxiliary-field stationary value; for lam < 0 this holds the
            sqrt(lam)-rescaled value r0~ (see module docstring).
        phase: NORMAL or SUPERRADIANT.
    """

    omega_delta: float
    delta: float
    b0: float
    r0: float
    phase: PhaseLabel


@dataclass(frozen=True)
class FreeEnergyResult:
    """Free energy per atom relative to the noninteracting model.

    f_diff is exactly 0.0 in the normal phase and strictly negative in the
    superradiant phase; f0 = -(1/beta)*ln(2*cosh(beta*Omega/2)) is the
    noninteracting per-atom reference (the boson contributes O(1/N) per atom
    in the thermodynamic limit and is dropped).
    """

    f_diff: float
    f0: float


class StationaryResiduals(NamedTuple):
    """Left-minus-right values of the four stationary equations plus the
    reduction identity sqrt(lam)*omega0*b0 = (g1 + g2)*r0."""

    eq_b: float
    eq_b_conj: float
    eq_aux: float
    eq_aux_conj: float
    reduction: float

    def max_abs(self) -> float:
        return max(abs(v) for v in self)


class CurvePoint(NamedTuple):
    beta: float
    b0: float
    omega_delta: float


def _ln_cosh(x: float) -> float:
    # ln cosh x = |x| + ln((1 + exp(-2|x|))/2); overflow-free for any x
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - _LN2


def _ln_2cosh(x: float) -> float:
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax))


def critical_inverse_temperature(params: ModelParams) -> float | None:
    """Inverse critical temperature beta_c, or None if no finite transition.

    beta_c = (2/Omega)*artanh(omega0*Omega/G) whenever 0 < omega0*Omega/G < 1;
    for G <= 0 or omega0*Omega/G >= 1 the critical condition has no solution
    at any beta > 0 and None is returned (a normal outcome, not an error).
    """
    validate(params)
    G = effective_coupling(params).G
    if G <= 0:
        return None
    ratio = params.omega0 * params.Omega / G
    if ratio >= 1.0:
        return None
    return (2.0 / params.Omega) * math.atanh(ratio)


def critical_coupling_zero_temperature(
    omega0: float, Omega: float, lam: float, ratio: float
) -> float:
    """Quantum-critical rotating coupling g1_c at T = 0, for fixed g2/g1.

    In the zero-temperature limit tanh -> 1 and the critical condition
    becomes (g1*(1 + ratio))**2 = omega0*(Omega + lam), so

        g1_c = sqrt(omega0*(Omega + lam)) / (1 + ratio).

    ``ratio`` is g2/g1 >= 0.  Raises DomainError when omega0*(Omega + lam)
    <= 0, i.e. lam <= -Omega, where no transition exists at any coupling.
    """
    probe = ModelParams(omega0=omega0, Omega=Omega, g1=0.0, g2=0.0, lam=lam)
    validate(probe)
    if not (isinstance(ratio, (int, float)) and math.isfinite(ratio)) or ratio < 0:
        raise DomainError(f"ratio g2/g1 must be finite and nonnegative, got {ratio!r}")
    product = omega0 * (Omega + lam)
    if product <= 0:
        raise DomainError(
            f"omega0*(Omega + lambda) = {product} is not positive; "
            "no zero-temperature transition exists"
        )
    return math.sqrt(product) / (1.0 + ratio)


def _bisect_gap(beta, Omega, target, rtol, max_doublings):
    """Unique root of tanh(beta*x/2)/x = target on [Omega, inf).

    The left side is strictly decreasing, so plain bisection is
    unconditionally convergent once the root is bracketed.  The upper
    bracket starts at 2*max(Omega, 1/target) = 2*max(Omega, G/omega0) and
    doubles; since tanh <= 1 the first candidate already satisfies
    g(hi) < 0 unless floating-point pathologies intervene.
    """

    def g(x):
        return math.tanh(0.5 * beta * x) / x - target

    lo = Omega
    hi = 2.0 * max(Omega, 1.0 / target)
    doublings = 0
    while g(hi) >= 0.0:
        hi *= 2.0
        doublings += 1
        if doublings > max_doublings:
            raise ConvergenceError(
                f"failed to bracket the gap equation root within "
                f"{max_doublings} doublings (beta={beta}, Omega={Omega}, "
                f"target={target})"
            )
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # interval collapsed to adjacent floats
        if g(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_gap(
    params: ModelParams,
    thermo: Thermo,
    rtol: float = GAP_RTOL,
    max_doublings: int = 200,
) -> GapSolution:
    """Solve the stationary-point system at inverse temperature beta.

    Returns the normal solution (omega_delta = Omega, b0 = r0 = delta = 0)
    when G <= 0 or tanh(beta*Omega/2)/Omega <= omega0/G, and otherwise the
    unique superradiant solution with

        b0 = (g1 + g2)*Delta/G,    r0 = sqrt(lam)*Delta*omega0/G  (lam >= 0)

    where Delta = sqrt(Omega_Delta**2 - Omega**2)/2.  The exact phase
    boundary (equality) is classified normal, so b0 > 0 iff superradiant
    whenever g1 + g2 > 0.  For lam < 0, r0 carries the rescaled value
    Delta*omega0/G instead.

    Corner case: with g1 = g2 = 0 and lam < -Omega the gap equation still
    has a root (G = -omega0*lam > 0) describing pure transverse spin
    exchange ordering with b0 = 0; the boson is a spectator there and the
    ordered solution is reported with its lam-only observables.
    """
    validate(params)
    beta = thermo.beta
    G = effective_coupling(params).G
    normal = GapSolution(params.Omega, 0.0, 0.0, 0.0, PhaseLabel.NORMAL)
    if G <= 0:
        return normal
    target = params.omega0 / G
    if math.tanh(0.5 * beta * params.Omega) / params.Omega <= target:
        return normal
    omega_delta = _bisect_gap(beta, params.Omega, target, rtol, max_doublings)
    delta = 0.5 * math.sqrt(max(omega_delta * omega_delta - params.Omega * params.Omega, 0.0))
    b0 = (params.g1 + params.g2) * delta / G
    scale = math.sqrt(params.lam) if params.lam >= 0 else 1.0
    r0 = scale * delta * params.omega0 / G
    return GapSolution(omega_delta, delta, b0, r0, PhaseLabel.SUPERRADIANT)


def stationary_residuals(
    params: ModelParams, thermo: Thermo, sol: GapSolution
) -> StationaryResiduals:
    """Evaluate the four stationary equations literally at (b0, r0).

    Each entry is left side minus right side under the real-solution
    convention (conjugation acts as the identity), plus the reduction
    identity as the fifth entry.  The effective gap entering the equations
    is recomputed from the fields through its definition
    Omega_Delta = sqrt(Omega**2 + 4*|Delta|**2), never taken from
    sol.omega_delta: that is what lets the residuals detect a perturbed
    (b0, r0) pair instead of vanishing identically along the b0 direction.

    For lam < 0 sol.r0 stores the rescaled r0~ with sqrt(lam)*r0 = lam*r0~,
    and the auxiliary-field entries are evaluated in the sqrt(lam)-divided
    form, which keeps every residual real.
    """
    validate(params)
    b0, r0 = sol.b0, sol.r0
    g1, g2 = params.g1, params.g2
    if params.lam >= 0:
        root_lam = math.sqrt(params.lam)
        aux = root_lam * r0  # sqrt(lam)*conj(r0), real convention
    else:
        root_lam = None
        aux = params.lam * r0  # sqrt(lam)*r0 expressed through the rescaled r0~
    # d = g1*b0 + g2*conj(b0) - sqrt(lam)*conj(r0); d_conj swaps the conjugates
    d = g1 * b0 + g2 * b0 - aux
    d_conj = g1 * b0 + g2 * b0 - aux
    omega_delta = math.sqrt(params.Omega**2 + 4.0 * d * d_conj)
    t = math.tanh(0.5 * thermo.beta * omega_delta) / omega_delta
    eq_b = params.omega0 * b0 - (g1 * d + g2 * d_conj) * t
    eq_b_conj = params.omega0 * b0 - (g1 * d_conj + g2 * d) * t
    if root_lam is not None:
        eq_aux = r0 - root_lam * d_conj * t
        eq_aux_conj = r0 - root_lam * d * t
        reduction = root_lam * params.omega0 * b0 - (g1 * r0 + g2 * r0)
    else:
        # auxiliary equations and reduction divided through by sqrt(lam)
        eq_aux = r0 - d_conj * t
        eq_aux_conj = r0 - d * t
        reduction = params.omega0 * b0 - (g1 * r0 + g2 * r0)
    return StationaryResiduals(eq_b, eq_b_conj, eq_aux, eq_aux_conj, reduction)


def free_energy_diff(
    params: ModelParams, thermo: Thermo, sol: GapSolution
) -> FreeEnergyResult:
    """Per-atom free energy relative to the noninteracting reference.

    Normal phase: f_diff = 0 exactly.  Superradiant phase: the condensation
    formula from the module docstring, evaluated through ln cosh in log
    space so beta*Omega_Delta in the thousands cannot overflow.
    """
    validate(params)
    beta = thermo.beta
    f0 = -_ln_2cosh(0.5 * beta * params.Omega) / beta
    if sol.phase is not PhaseLabel.SUPERRADIANT:
        return FreeEnergyResult(0.0, f0)
    G = effective_coupling(params).G
    quad = params.omega0 * (sol.omega_delta**2 - params.Omega**2) / (4.0 * G)
    entropic = (
        _ln_cosh(0.5 * beta * sol.omega_delta) - _ln_cosh(0.5 * beta * params.Omega)
    ) / beta
    return FreeEnergyResult(quad - entropic, f0)


def order_parameter_curve(params: ModelParams, beta_list) -> list[CurvePoint]:
    """solve_gap along a strictly increasing list of inverse temperatures.

    Returns one (beta, b0, omega_delta) point per entry; b0 is nondecreasing
    along the list.  Solver errors are re-raised with the offending index.
    """
    validate(params)
    betas = list(beta_list)
    for i in range(1, len(betas)):
        if not betas[i] > betas[i - 1]:
            raise DomainError(
                f"beta_list must be strictly increasing; "
                f"beta_list[{i}]={betas[i]} after {betas[i - 1]}"
            )
    points = []
    for i, beta in enumerate(betas):
        try:
            sol = solve_gap(params, Thermo(beta))
        except (DomainError, ConvergenceError) as exc:
            raise type(exc)(f"beta_list[{i}]={beta}: {exc}") from exc
        points.append(CurvePoint(beta, sol.b0, sol.omega_delta))
    return points
