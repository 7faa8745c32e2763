"""Finite-N exact diagonalization oracle for the dipole-coupled Dicke model.

Builds the N-atom Hamiltonian on a truncated boson Fock space in three bases:

  * full product basis: N spin-1/2 tensor factors (sigma^z = diag(+1,-1),
    sigma^+ = |up><down| per site) times Fock states |0..n_max>, with the
    boson as the fastest index.  The dipole exchange sum runs over ordered
    pairs i != j only.
  * collective sectors: the Hamiltonian commutes with total spin, so it
    block-diagonalizes on |j,m> ladders.  With J^z = 2 S^z and J^+- = S^+-
    (standard angular momentum matrix elements), the i != j exchange equals
    J^+ J^- - (N + J^z)/2, and every sector enters the trace with the
    SU(2) multiplicity d(N,j).
  * two-mode-per-atom fermion Fock space for the trace identity:
    sigma^z -> a'a - b'b, sigma^+ -> a'b, sigma^- -> b'a.  All Hamiltonian
    terms are products of same-site parity-even bilinears, which commute
    across sites, so plain tensor products of 4x4 site blocks reproduce the
    algebra exactly and no Jordan-Wigner strings are needed.  The physical
    trace is recovered as i^N Tr exp(-beta H_F - i pi/2 N_F), where the two
    unphysical occupation sectors per atom cancel in pairs.

Dense symmetric eigensolvers throughout; no sparsity is exploited at these
dimensions.  Partition sums are accumulated in shifted (log-sum-exp) form.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse

from .errors import (
    CommutationError,
    DimensionError,
    DomainError,
    HermiticityError,
    TruncationError,
)
from .model import ModelParams, Thermo, validate

FULL_DIM_CAP = 30_000
COLLECTIVE_DIM_CAP = 100_000
MAX_ATOMS_FULL = 12
HERMITICITY_TOL = 1e-12
COMMUTATOR_TOL = 1e-12


@dataclass(frozen=True)
class TruncationConfig:
    """Boson Fock cutoff n_max (highest retained occupation) plus the
    absolute free-energy tolerance used by the adaptive doubling loop."""

    n_max: int
    tol: float = 1e-8

    def __post_init__(self):
        if not isinstance(self.n_max, int) or isinstance(self.n_max, bool):
            raise DomainError(f"n_max must be an integer, got {self.n_max!r}")
        if self.n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {self.n_max}")
        if not (isinstance(self.tol, (int, float)) and self.tol > 0):
            raise DomainError(f"tol must be positive, got {self.tol!r}")

    @classmethod
    def seeded(cls, params: ModelParams, thermo: Thermo, tol: float = 1e-8):
        """Heuristic starting cutoff for the adaptive doubling loop.

        Superradiant states displace the oscillator by O(sqrt(N)*g/omega0),
        and low beta populates the thermal tail, so seed with
        ceil(8*(g1+g2)**2/omega0**2 + 10*max(1, 1/(beta*omega0))).
        """
        g = params.g1 + params.g2
        seed = math.ceil(
            8.0 * g * g / params.omega0**2
            + 10.0 * max(1.0, 1.0 / (thermo.beta * params.omega0))
        )
        return cls(max(seed, 1), tol)


@dataclass
class SpectralData:
    """Sorted eigenvalues of one finite-N Hamiltonian block.

    occupations holds the per-eigenstate expectation <k|b'b|k> and is only
    populated when observables were requested at build time (eigenvectors
    are reduced to it immediately and discarded).
    """

    eigenvalues: np.ndarray
    dimension: int
    basis: str  # "full_product" | "collective" | "fermion_fock"
    n_atoms: int
    n_max: int
    sector_j: float | None = None
    occupations: np.ndarray | None = None


def _boson_ops(n_max: int):
    occ = np.arange(n_max + 1, dtype=float)
    lower = sparse.diags(np.sqrt(occ[1:]), 1, format="csr")  # <n-1|b|n> = sqrt(n)
    number = sparse.diags(occ, format="csr")
    return lower, number


def _embed(site_op, i: int, n_sites: int, site_dim: int) -> sparse.csr_matrix:
    """site_op acting on site i, identity elsewhere (site 0 leftmost)."""
    left = sparse.identity(site_dim**i, format="csr")
    right = sparse.identity(site_dim ** (n_sites - 1 - i), format="csr")
    return sparse.kron(sparse.kron(left, site_op), right, format="csr")


def _diagonalize(h, basis, n_atoms, n_max, sector_j, want_occupations):
    hd = h.toarray() if sparse.issparse(h) else np.asarray(h)
    deviation = float(np.abs(hd - hd.conj().T).max())
    if deviation > HERMITICITY_TOL:
        raise HermiticityError(
            f"max |H - H^dag| entry = {deviation:.3e} exceeds {HERMITICITY_TOL:g}"
        )
    dim = hd.shape[0]
    if want_occupations:
        vals, vecs = np.linalg.eigh(hd)
        # b'b is diagonal in every basis used here; the boson index is fastest
        occ_basis = np.tile(np.arange(n_max + 1, dtype=float), dim // (n_max + 1))
        occupations = (np.abs(vecs) ** 2 * occ_basis[:, None]).sum(axis=0)
    else:
        vals = np.linalg.eigvalsh(hd)
        occupations = None
    return SpectralData(vals, dim, basis, n_atoms, n_max, sector_j, occupations)


def build_full(
    params: ModelParams,
    n_atoms: int,
    trunc: TruncationConfig,
    want_occupations: bool = False,
) -> SpectralData:
    """Dense spectrum in the full 2^N x (n_max+1) product basis.

    The dipole term is assembled directly from ordered pairs of one-site
    operators (never through the collective identity, which is checked
    against this construction in the tests).
    """
    validate(params)
    if not isinstance(n_atoms, int) or not 1 <= n_atoms <= MAX_ATOMS_FULL:
        raise DomainError(f"n_atoms must be an integer in [1, {MAX_ATOMS_FULL}], got {n_atoms!r}")
    dim = 2**n_atoms * (trunc.n_max + 1)
    if dim > FULL_DIM_CAP:
        raise DimensionError(
            f"full-product dimension {dim} exceeds the cap {FULL_DIM_CAP}"
        )
    sz1 = sparse.diags([1.0, -1.0], format="csr")
    sp1 = sparse.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    sz = [_embed(sz1, i, n_atoms, 2) for i in range(n_atoms)]
    sp = [_embed(sp1, i, n_atoms, 2) for i in range(n_atoms)]
    sm = [op.T.tocsr() for op in sp]

    lower, number = _boson_ops(trunc.n_max)
    raise_op = lower.T.tocsr()
    spin_dim = 2**n_atoms
    eye_s = sparse.identity(spin_dim, format="csr")
    eye_b = sparse.identity(trunc.n_max + 1, format="csr")

    dipole = sparse.csr_matrix((spin_dim, spin_dim))
    for i in range(n_atoms):
        for j in range(n_atoms):
            if i != j:
                dipole = dipole + sp[i] @ sm[j]

    jp = sum(sp[1:], sp[0])
    jm = sum(sm[1:], sm[0])
    scale = 1.0 / math.sqrt(n_atoms)
    h = (
        sparse.kron((params.lam / n_atoms) * dipole, eye_b)
        + sparse.kron((params.Omega / 2.0) * sum(sz[1:], sz[0]), eye_b)
        + sparse.kron(eye_s, params.omega0 * number)
        + params.g1 * scale * (sparse.kron(jp, lower) + sparse.kron(jm, raise_op))
        + params.g2 * scale * (sparse.kron(jm, lower) + sparse.kron(jp, raise_op))
    )
    return _diagonalize(h, "full_product", n_atoms, trunc.n_max, None, want_occupations)


def _check_sector(n_atoms: int, j) -> None:
    if not isinstance(n_atoms, int) or n_atoms < 1:
        raise DomainError(f"n_atoms must be a positive integer, got {n_atoms!r}")
    two_j = 2.0 * j
    if not (
        isinstance(j, (int, float))
        and math.isfinite(two_j)
        and two_j >= 0
        and abs(two_j - round(two_j)) < 1e-12
        and (n_atoms - round(two_j)) % 2 == 0
        and round(two_j) <= n_atoms
    ):
        raise DomainError(
            f"j={j!r} is not a valid spin sector for N={n_atoms} "
            f"(need j in {{N/2, N/2-1, ...}} down to 0 or 1/2)"
        )


def build_collective(
    params: ModelParams,
    n_atoms: int,
    j,
    trunc: TruncationConfig,
    want_occupations: bool = False,
) -> SpectralData:
    """Spectrum on the total-spin-j ladder tensor the truncated Fock space.

    Basis |j,m> x |n> with m ascending; S^+|j,m> = sqrt(j(j+1)-m(m+1))|j,m+1>,
    J^z = 2 S^z, and the dipole exchange enters as
    (lam/N) * (S^+ S^- - (N + 2 S^z)/2).
    """
    validate(params)
    _check_sector(n_atoms, j)
    spin_dim = int(round(2 * j)) + 1
    dim = spin_dim * (trunc.n_max + 1)
    if dim > COLLECTIVE_DIM_CAP:
        raise DimensionError(
            f"collective-sector dimension {dim} exceeds the cap {COLLECTIVE_DIM_CAP}"
        )
    m = -float(j) + np.arange(spin_dim, dtype=float)
    s_z = sparse.diags(m, format="csr")
    s_p = sparse.diags(np.sqrt(j * (j + 1.0) - m[:-1] * (m[:-1] + 1.0)), -1, format="csr")
    s_m = s_p.T.tocsr()

    lower, number = _boson_ops(trunc.n_max)
    raise_op = lower.T.tocsr()
    eye_s = sparse.identity(spin_dim, format="csr")
    eye_b = sparse.identity(trunc.n_max + 1, format="csr")

    exchange = s_p @ s_m - 0.5 * (n_atoms * eye_s + 2.0 * s_z)
    scale = 1.0 / math.sqrt(n_atoms)
    h = (
        sparse.kron((params.lam / n_atoms) * exchange, eye_b)
        + sparse.kron(params.Omega * s_z, eye_b)  # (Omega/2) J^z = Omega S^z
        + sparse.kron(eye_s, params.omega0 * number)
        + params.g1 * scale * (sparse.kron(s_p, lower) + sparse.kron(s_m, raise_op))
        + params.g2 * scale * (sparse.kron(s_m, lower) + sparse.kron(s_p, raise_op))
    )
    return _diagonalize(h, "collective", n_atoms, trunc.n_max, float(j), want_occupations)


def sector_multiplicity(n_atoms: int, j) -> int:
    """SU(2) multiplicity d(N,j) = C(N, N/2-j) - C(N, N/2-j-1)."""
    _check_sector(n_atoms, j)
    k = round(n_atoms / 2.0 - float(j))
    lower = math.comb(n_atoms, k - 1) if k >= 1 else 0
    return math.comb(n_atoms, k) - lower


def sector_spins(n_atoms: int) -> list[float]:
    """All total-spin values N/2, N/2-1, ... down to 0 or 1/2."""
    return [n_atoms / 2.0 - k for k in range(n_atoms // 2 + 1)]


@dataclass(frozen=True)
class LogPartition:
    """Partition sum in shifted form: Z = shifted_sum * exp(-beta*e_min)."""

    shifted_sum: float
    e_min: float
    beta: float

    @property
    def ln_z(self) -> float:
        return math.log(self.shifted_sum) - self.beta * self.e_min


def partition_function(spectral: SpectralData, thermo: Thermo) -> LogPartition:
    """Z = sum_k exp(-beta*(E_k - E_min)) together with the shift E_min."""
    energies = spectral.eigenvalues
    e_min = float(energies[0])
    shifted = float(np.exp(-thermo.beta * (energies - e_min)).sum())
    return LogPartition(shifted, e_min, thermo.beta)


def _sector_spectra(params, n_atoms, n_max, want_occupations=False):
    trunc = TruncationConfig(n_max)
    return [
        (
            sector_multiplicity(n_atoms, j),
            build_collective(params, n_atoms, j, trunc, want_occupations),
        )
        for j in sector_spins(n_atoms)
    ]


def _ln_z_sectors(params, n_atoms, thermo, n_max) -> float:
    spectra = _sector_spectra(params, n_atoms, n_max)
    e_min = min(float(spec.eigenvalues[0]) for _, spec in spectra)
    total = 0.0
    for degeneracy, spec in spectra:
        total += degeneracy * float(
            np.exp(-thermo.beta * (spec.eigenvalues - e_min)).sum()
        )
    return math.log(total) - thermo.beta * e_min


def _ln_z_full(params, n_atoms, thermo, n_max) -> float:
    spec = build_full(params, n_atoms, TruncationConfig(n_max))
    return partition_function(spec, thermo).ln_z


def _ln_z_free(params, n_atoms, beta, n_max) -> float:
    """Noninteracting reference lam = g1 = g2 = 0 at the same truncation:
    N free two-level atoms times the truncated boson geometric sum."""
    spin = n_atoms * (abs(0.5 * beta * params.Omega) + math.log1p(math.exp(-beta * params.Omega)))
    x = beta * params.omega0
    boson = math.log(-math.expm1(-x * (n_max + 1))) - math.log(-math.expm1(-x))
    return spin + boson


@dataclass(frozen=True)
class ExactFreeEnergy:
    """f = -(1/(N*beta)) ln Z at the converged cutoff, and its difference
    from the noninteracting finite-N reference at the same cutoff."""

    f_diff: float
    f: float
    n_max: int


def free_energy_exact(
    params: ModelParams,
    n_atoms: int,
    thermo: Thermo,
    trunc: TruncationConfig,
    basis: str = "collective",
    max_dim: int | None = None,
) -> ExactFreeEnergy:
    """Finite-N free energy per atom with adaptive boson cutoff.

    Starting from trunc.n_max, the cutoff doubles until the free energy
    moves by less than trunc.tol; TruncationError if the dimension cap is
    reached first.  basis="collective" assembles Z as the multiplicity-
    weighted sector sum; basis="full" uses the product basis (both agree,
    which the tests assert).
    """
    validate(params)
    if basis not in ("collective", "full"):
        raise DomainError(f"basis must be 'collective' or 'full', got {basis!r}")
    if basis == "full" and not (isinstance(n_atoms, int) and 1 <= n_atoms <= MAX_ATOMS_FULL):
        raise DomainError(f"n_atoms must be an integer in [1, {MAX_ATOMS_FULL}], got {n_atoms!r}")
    if basis == "collective" and (not isinstance(n_atoms, int) or n_atoms < 1):
        raise DomainError(f"n_atoms must be a positive integer, got {n_atoms!r}")
    cap = max_dim if max_dim is not None else (
        FULL_DIM_CAP if basis == "full" else COLLECTIVE_DIM_CAP
    )

    def dimension(n_max):
        if basis == "full":
            return 2**n_atoms * (n_max + 1)
        return (n_atoms + 1) * (n_max + 1)  # largest sector, j = N/2

    def ln_z(n_max):
        if basis == "full":
            return _ln_z_full(params, n_atoms, thermo, n_max)
        return _ln_z_sectors(params, n_atoms, thermo, n_max)

    n_max = trunc.n_max
    if dimension(n_max) > cap:
        raise DimensionError(
            f"starting cutoff n_max={n_max} already exceeds the dimension cap {cap}"
        )
    scale = -1.0 / (n_atoms * thermo.beta)
    f_prev = scale * ln_z(n_max)
    while True:
        if dimension(2 * n_max) > cap:
            raise TruncationError(
                f"free energy not stable to tol={trunc.tol:g} before the "
                f"dimension cap {cap} (last n_max={n_max}, f={f_prev!r})"
            )
        n_max *= 2
        f_next = scale * ln_z(n_max)
        if abs(f_next - f_prev) < trunc.tol:
            break
        f_prev = f_next
    f0 = scale * _ln_z_free(params, n_atoms, thermo.beta, n_max)
    return ExactFreeEnergy(f_next - f0, f_next, n_max)


def boson_occupation(spectral: SpectralData, thermo: Thermo) -> float:
    """Thermal average <b'b>/N over one spectral block.

    Requires the block to have been built with want_occupations=True.
    """
    if spectral.occupations is None:
        raise DomainError("spectral data was built without occupation expectations")
    weights = np.exp(-thermo.beta * (spectral.eigenvalues - spectral.eigenvalues[0]))
    return float((weights * spectral.occupations).sum() / weights.sum()) / spectral.n_atoms


def thermal_boson_occupation(
    params: ModelParams, n_atoms: int, thermo: Thermo, trunc: TruncationConfig
) -> float:
    """<b'b>/N of the full thermal state, assembled from collective sectors
    with their multiplicities at the fixed cutoff trunc.n_max."""
    validate(params)
    spectra = _sector_spectra(params, n_atoms, trunc.n_max, want_occupations=True)
    e_min = min(float(spec.eigenvalues[0]) for _, spec in spectra)
    numerator = 0.0
    denominator = 0.0
    for degeneracy, spec in spectra:
        weights = np.exp(-thermo.beta * (spec.eigenvalues - e_min))
        numerator += degeneracy * float((weights * spec.occupations).sum())
        denominator += degeneracy * float(weights.sum())
    return numerator / denominator / n_atoms


def _fermion_site_ops():
    """4x4 blocks on one site's {|00>, |01>, |10>, |11>} = |n_a n_b> space."""
    sz = np.diag([0.0, -1.0, 1.0, 0.0])  # a'a - b'b
    sp = np.zeros((4, 4))
    sp[2, 1] = 1.0  # a'b : |01> -> |10>, annihilated on |11> and |00>
    sm = sp.T.copy()  # b'a
    nf = np.diag([0.0, 1.0, 1.0, 2.0])  # a'a + b'b
    return sz, sp, sm, nf


def fermionic_identity_check(
    params: ModelParams, n_atoms: int, thermo: Thermo, trunc: TruncationConfig
) -> float:
    """Relative discrepancy of the phase-weighted fermionic trace identity.

    Builds the spin model and its two-mode-per-atom fermionic counterpart at
    the same boson truncation and returns

        | Tr exp(-beta H) - i^N Tr exp(-beta H_F - i pi/2 N_F) | / Tr exp(-beta H).

    [H_F, N_F] = 0 by construction (verified numerically), so the fermionic
    trace is evaluated by diagonalizing H_F inside fixed-N_F blocks and
    attaching the phase (-i)^{n_F} to each block; no complex matrix
    exponential is needed.  Restricted to N <= 2 to keep 4^N harmless.
    """
    validate(params)
    if n_atoms not in (1, 2):
        raise DomainError(f"fermionic check supports n_atoms in {{1, 2}}, got {n_atoms!r}")

    spin_side = build_full(params, n_atoms, trunc)

    sz1, sp1, sm1, nf1 = (sparse.csr_matrix(op) for op in _fermion_site_ops())
    sz = [_embed(sz1, i, n_atoms, 4) for i in range(n_atoms)]
    sp = [_embed(sp1, i, n_atoms, 4) for i in range(n_atoms)]
    sm = [_embed(sm1, i, n_atoms, 4) for i in range(n_atoms)]
    nf = [_embed(nf1, i, n_atoms, 4) for i in range(n_atoms)]

    lower, number = _boson_ops(trunc.n_max)
    raise_op = lower.T.tocsr()
    site_dim = 4**n_atoms
    eye_s = sparse.identity(site_dim, format="csr")
    eye_b = sparse.identity(trunc.n_max + 1, format="csr")

    exchange = sparse.csr_matrix((site_dim, site_dim))
    for i in range(n_atoms):
        for j in range(n_atoms):
            if i != j:
                exchange = exchange + sp[i] @ sm[j]

    jp = sum(sp[1:], sp[0])
    jm = sum(sm[1:], sm[0])
    scale = 1.0 / math.sqrt(n_atoms)
    h_f = (
        sparse.kron((params.lam / n_atoms) * exchange, eye_b)
        + sparse.kron((params.Omega / 2.0) * sum(sz[1:], sz[0]), eye_b)
        + sparse.kron(eye_s, params.omega0 * number)
        + params.g1 * scale * (sparse.kron(jp, lower) + sparse.kron(jm, raise_op))
        + params.g2 * scale * (sparse.kron(jm, lower) + sparse.kron(jp, raise_op))
    ).toarray()

    nf_diag = sparse.kron(sum(nf[1:], nf[0]), eye_b).toarray().diagonal().copy()
    # [H_F, diag(N_F)]_{kl} = H_{kl} (n_l - n_k)
    commutator = h_f * (nf_diag[None, :] - nf_diag[:, None])
    worst = float(np.abs(commutator).max())
    if worst > COMMUTATOR_TOL:
        raise CommutationError(
            f"max |[H_F, N_F]| entry = {worst:.3e} exceeds {COMMUTATOR_TOL:g}"
        )

    block_energies = []
    for n_f in range(2 * n_atoms + 1):
        (block_idx,) = np.nonzero(np.abs(nf_diag - n_f) < 0.5)
        block = h_f[np.ix_(block_idx, block_idx)]
        block_energies.append(np.linalg.eigvalsh(block))
    # one common shift keeps both sides' shifted sums of comparable size
    e_ref = min(
        float(spin_side.eigenvalues[0]),
        min(float(energies[0]) for energies in block_energies),
    )
    fermion_trace = 0.0 + 0.0j
    for n_f, energies in enumerate(block_energies):
        fermion_trace += (-1j) ** n_f * float(
            np.exp(-thermo.beta * (energies - e_ref)).sum()
        )
    fermion_trace *= (1j) ** n_atoms

    spin_trace = float(np.exp(-thermo.beta * (spin_side.eigenvalues - e_ref)).sum())
    return abs(spin_trace - fermion_trace) / abs(spin_trace)
