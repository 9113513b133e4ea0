"""Dressed-state model of a single rigid rotor strongly coupled to a cavity mode.

Two pictures are supported:

* the entangled (dressed) basis ``{|0;0>, |-;n>, |+;n>}`` in which the
  excitation-conserving Hamiltonian is diagonal with the anharmonic ladder
  ``w(+-, n) = wc*(n+1) +- g*sqrt(n+1)``, and
* the product basis ``{|J,0>|n>}`` of bare rotor and Fock states, which keeps
  the counter-rotating light-matter terms and higher rotational states.

Sign conventions used throughout: the rotor phase is fixed so that
``<0,0|cos(theta)|1,0> = +1/sqrt(3)``, the dressed doublet is
``|+-;n> = (|0,0>|n+1> +- |1,0>|n>)/sqrt(2)``, and the cavity coupling carries
a plus sign so that this doublet diagonalizes it.  Flipping the cavity-coupling
sign is a photon-parity gauge change (a -> -a) with no observable effect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .units import DEBYE_TO_AU, LabParams, UnitSystem

HERMITICITY_TOL = 1e-12

SQRT2_OVER_2 = math.sqrt(2.0) / 2.0
SQRT6_OVER_6 = math.sqrt(6.0) / 6.0
COS01 = 1.0 / math.sqrt(3.0)  # <0,0|cos(theta)|1,0>


class ModelError(ValueError):
    """Invalid physical parameters or operator request."""


@dataclass(frozen=True)
class PhysicalParams:
    """Internal-unit model parameters (hbar = 1, omega01 = 2B = 1)."""

    rotational_constant: float
    dipole: float  # atomic units (e*a0)
    cavity_frequency: float
    coupling: float
    j_max: int
    n_max: int
    units: UnitSystem | None = None

    def __post_init__(self):
        if self.rotational_constant <= 0:
            raise ModelError("rotational constant must be positive")
        if self.dipole < 0:
            raise ModelError("dipole moment must be non-negative")
        if self.cavity_frequency != self.omega01:
            raise ModelError(
                "cavity must be exactly resonant with the rotational transition: "
                f"omega_c={self.cavity_frequency} != 2B={self.omega01}"
            )
        if not 0.0 < self.coupling < self.omega01:
            raise ModelError("coupling must satisfy 0 < g < omega01")
        if self.j_max < 1:
            raise ModelError("j_max must be at least 1")
        if self.n_max < 0:
            raise ModelError("n_max must be non-negative")

    @property
    def omega01(self) -> float:
        return 2.0 * self.rotational_constant

    @property
    def mu01(self) -> float:
        """Transition dipole <0,0|mu cos(theta)|1,0> = mu/sqrt(3)."""
        return self.dipole * COS01

    @property
    def tau0(self) -> float:
        """Rotational period pi/B in internal time units."""
        return math.pi / self.rotational_constant

    @property
    def dim_entangled(self) -> int:
        return 1 + 2 * (self.n_max + 1)

    @property
    def dim_product(self) -> int:
        return (self.j_max + 1) * (self.n_max + 1)


def to_internal_units(lab: LabParams) -> PhysicalParams:
    """Convert laboratory parameters to the internal unit system.

    The returned parameters carry a :class:`UnitSystem` for converting times
    and fields back to laboratory units.
    """
    if lab.b_cm1 <= 0:
        raise ModelError("rotational constant must be positive")
    if lab.mu_debye <= 0:
        raise ModelError("dipole moment must be positive")
    units = UnitSystem(b_cm1=lab.b_cm1, mu_debye=lab.mu_debye)
    return PhysicalParams(
        rotational_constant=0.5,
        dipole=lab.mu_debye * DEBYE_TO_AU,
        cavity_frequency=1.0,
        coupling=lab.g_over_omega01,
        j_max=lab.j_max,
        n_max=lab.n_max,
        units=units,
    )


@dataclass(frozen=True)
class OperatorMatrix:
    """Square operator matrix tagged with its basis."""

    data: np.ndarray
    basis: str
    hermitian: bool
    labels: tuple[str, ...]

    def __post_init__(self):
        a = np.asarray(self.data)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ModelError("operator matrix must be square")
        if len(self.labels) != a.shape[0]:
            raise ModelError("label count must match matrix dimension")
        if self.hermitian:
            scale = max(1.0, float(np.abs(a).max()))
            if np.abs(a - a.conj().T).max() > HERMITICITY_TOL * scale:
                raise ModelError("matrix tagged hermitian is not hermitian")

    @property
    def dim(self) -> int:
        return self.data.shape[0]


def doublet_frequencies(omega_c: float, g: float, n: int) -> tuple[float, float]:
    """Dressed doublet frequencies ``wc*(n+1) -+ g*sqrt(n+1)``; g=0 degenerates."""
    if n < 0:
        raise ModelError("photon index must be non-negative")
    base = omega_c * (n + 1)
    split = g * math.sqrt(n + 1)
    return base - split, base + split


def polariton_eigenvalues(params: PhysicalParams, n: int) -> tuple[float, float]:
    """Dressed doublet frequencies of the model at photon index n."""
    return doublet_frequencies(params.cavity_frequency, params.coupling, n)


def entangled_labels(n_max: int) -> tuple[str, ...]:
    labels = ["0;0"]
    for n in range(n_max + 1):
        labels.append(f"-;{n}")
        labels.append(f"+;{n}")
    return tuple(labels)


def entangled_index(ell: str, n: int) -> int:
    """Index of |ell;n> in the entangled basis ordering (|0;0> first)."""
    if ell == "0":
        return 0
    return 1 + 2 * n + (0 if ell == "-" else 1)


def product_labels(j_max: int, n_max: int) -> tuple[str, ...]:
    return tuple(f"J{j};n{n}" for j in range(j_max + 1) for n in range(n_max + 1))


def product_index(j: int, n: int, n_max: int) -> int:
    return j * (n_max + 1) + n


def cos_theta_rotor_element(j: int) -> float:
    """Rigid-rotor matrix element <J,0|cos(theta)|J+1,0>."""
    return (j + 1) / math.sqrt((2 * j + 1) * (2 * j + 3))


def build_jc_hamiltonian(params: PhysicalParams) -> OperatorMatrix:
    """Field-free Hamiltonian, diagonal in the entangled basis."""
    diag = [0.0]
    for n in range(params.n_max + 1):
        wm, wp = polariton_eigenvalues(params, n)
        diag.extend([wm, wp])
    return OperatorMatrix(
        data=np.diag(np.asarray(diag, dtype=np.complex128)),
        basis="entangled",
        hermitian=True,
        labels=entangled_labels(params.n_max),
    )


def _cos_theta_entangled(params: PhysicalParams) -> np.ndarray:
    """cos(theta) in the entangled basis (identity on the photon factor).

    Ground couplings: <+-;0|cos|0;0> = +-sqrt(2)/2 * cos01.  Ladder couplings
    for n >= 1: <l;n|cos|l';n-1> = sign(l)/2 * cos01 independent of l', which
    follows from the sqrt(2)/2 doublet coefficients and photon orthogonality.
    """
    dim = params.dim_entangled
    c = np.zeros((dim, dim), dtype=np.complex128)
    im0 = entangled_index("-", 0)
    ip0 = entangled_index("+", 0)
    c[0, im0] = c[im0, 0] = -SQRT2_OVER_2 * COS01
    c[0, ip0] = c[ip0, 0] = +SQRT2_OVER_2 * COS01
    for n in range(1, params.n_max + 1):
        for ell, sign in (("-", -1.0), ("+", +1.0)):
            i = entangled_index(ell, n)
            for ellp in ("-", "+"):
                j = entangled_index(ellp, n - 1)
                c[i, j] = c[j, i] = sign * 0.5 * COS01
    return c


def build_drive_coupling(params: PhysicalParams) -> OperatorMatrix:
    """Dipole coupling D = mu*cos(theta) in the entangled basis.

    The laser term of the Hamiltonian is ``H_p(t) = -field(t) * D``.
    """
    data = params.dipole * _cos_theta_entangled(params)
    return OperatorMatrix(
        data=data,
        basis="entangled",
        hermitian=True,
        labels=entangled_labels(params.n_max),
    )


def cos_theta_matrix(params: PhysicalParams, basis: str = "entangled") -> OperatorMatrix:
    """cos(theta) operator in the requested basis."""
    if basis == "entangled":
        return OperatorMatrix(
            data=_cos_theta_entangled(params),
            basis="entangled",
            hermitian=True,
            labels=entangled_labels(params.n_max),
        )
    if basis == "product":
        jd, nd = params.j_max + 1, params.n_max + 1
        c_rot = np.zeros((jd, jd))
        for j in range(params.j_max):
            c_rot[j, j + 1] = c_rot[j + 1, j] = cos_theta_rotor_element(j)
        data = np.kron(c_rot, np.eye(nd)).astype(np.complex128)
        return OperatorMatrix(
            data=data,
            basis="product",
            hermitian=True,
            labels=product_labels(params.j_max, params.n_max),
        )
    raise ModelError(f"unknown basis {basis!r}")


def _photon_ladder(n_max: int) -> np.ndarray:
    """a + a^dag on the Fock space truncated at n_max."""
    nd = n_max + 1
    x = np.zeros((nd, nd))
    for n in range(n_max):
        x[n, n + 1] = x[n + 1, n] = math.sqrt(n + 1)
    return x


def build_jc_hamiltonian_product(params: PhysicalParams) -> OperatorMatrix:
    """Excitation-conserving Hamiltonian in the product basis.

    Rotor states are restricted to J = 0, 1; the J=0,n <-> J=1,n-1 coupling is
    +g*sqrt(n), keeping only the excitation-conserving half of the ladder.
    """
    nd = params.n_max + 1
    dim = 2 * nd
    h = np.zeros((dim, dim), dtype=np.complex128)
    for j in (0, 1):
        for n in range(nd):
            h[j * nd + n, j * nd + n] = params.cavity_frequency * n + \
                params.rotational_constant * j * (j + 1)
    for n in range(1, nd):
        i, j = 0 * nd + n, 1 * nd + (n - 1)  # |0,n> <-> |1,n-1>
        h[i, j] = h[j, i] = params.coupling * math.sqrt(n)
    return OperatorMatrix(
        data=h,
        basis="product",
        hermitian=True,
        labels=product_labels(1, params.n_max),
    )


def build_rabi_hamiltonian(params: PhysicalParams) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Full product-basis Hamiltonian pieces, ``H(t) = H_static + field(t)*H_drive``.

    ``H_static`` holds the cavity, rotor, and cavity-dipole terms including the
    counter-rotating parts; the cavity-coupling operator is
    ``(g/mu01) * mu*cos(theta) (x) (a + a^dag)`` so its J=0 <-> J=1 element is
    exactly g.  ``H_drive = -mu*cos(theta) (x) 1`` carries the laser coupling.
    """
    jd, nd = params.j_max + 1, params.n_max + 1
    n_op = np.diag(np.arange(nd, dtype=float))
    j2 = np.diag([j * (j + 1.0) for j in range(jd)])
    c_rot = np.zeros((jd, jd))
    for j in range(params.j_max):
        c_rot[j, j + 1] = c_rot[j + 1, j] = cos_theta_rotor_element(j)
    h_static = (
        params.cavity_frequency * np.kron(np.eye(jd), n_op)
        + params.rotational_constant * np.kron(j2, np.eye(nd))
        + (params.coupling / COS01) * np.kron(c_rot, _photon_ladder(params.n_max))
    ).astype(np.complex128)
    h_drive = (-params.dipole) * np.kron(c_rot, np.eye(nd)).astype(np.complex128)
    labels = product_labels(params.j_max, params.n_max)
    return (
        OperatorMatrix(h_static, "product", True, labels),
        OperatorMatrix(h_drive, "product", True, labels),
    )


def total_excitation_product(params: PhysicalParams) -> OperatorMatrix:
    """Conserved excitation number a^dag a + |1,0><1,0| on the J<=1 subspace."""
    nd = params.n_max + 1
    dim = 2 * nd
    op = np.zeros((dim, dim), dtype=np.complex128)
    for j in (0, 1):
        for n in range(nd):
            op[j * nd + n, j * nd + n] = n + (1 if j == 1 else 0)
    return OperatorMatrix(op, "product", True, product_labels(1, params.n_max))


def entangled_to_product(params: PhysicalParams) -> np.ndarray:
    """Columns are the entangled states expressed in the product basis.

    Doublets up to min(n_max-1, requested) fit in the truncated Fock space;
    the returned map covers |0;0> and |+-;n> for n <= n_max - 1.
    """
    if params.n_max < 1:
        raise ModelError("need n_max >= 1 to embed any dressed doublet")
    nd = params.n_max + 1
    n_doublets = params.n_max  # |+-;n> needs photon number n+1
    dim_ent = 1 + 2 * n_doublets
    v = np.zeros((params.dim_product, dim_ent), dtype=np.complex128)
    v[product_index(0, 0, params.n_max), 0] = 1.0
    for n in range(n_doublets):
        col_m = 1 + 2 * n
        col_p = col_m + 1
        i_up = product_index(0, n + 1, params.n_max)  # |0,0>|n+1>
        i_dn = product_index(1, n, params.n_max)      # |1,0>|n>
        v[i_up, col_m] = SQRT2_OVER_2
        v[i_dn, col_m] = -SQRT2_OVER_2
        v[i_up, col_p] = SQRT2_OVER_2
        v[i_dn, col_p] = SQRT2_OVER_2
    return v


def orientation_matrix_elements(params: PhysicalParams) -> tuple[float, float]:
    """(M_minus, M_plus) = <-+;0|cos(theta)|0;0> = (-+)sqrt(6)/6."""
    del params
    return -SQRT6_OVER_6, +SQRT6_OVER_6


def rabi_dressed_frequencies(params: PhysicalParams) -> tuple[float, float]:
    """Exact n=0 doublet transition frequencies of the static product-basis model.

    The counter-rotating and higher-rotational couplings renormalize the bare
    doublet (wc -+ g); the shift is second order in g (Bloch-Siegert scale)
    and shows up as a slow phase drift relative to the excitation-conserving
    model.  Identified by overlap with |0,0>|1> and |1,0>|0>.
    """
    h_static, _ = build_rabi_hamiltonian(params)
    vals, vecs = np.linalg.eigh(h_static.data)
    i_ground = int(np.argmax(np.abs(vecs[product_index(0, 0, params.n_max), :])))
    weight = (
        np.abs(vecs[product_index(0, 1, params.n_max), :]) ** 2
        + np.abs(vecs[product_index(1, 0, params.n_max), :]) ** 2
    )
    doublet = np.sort(np.argsort(weight)[-2:])
    wm = float(vals[doublet[0]] - vals[i_ground])
    wp = float(vals[doublet[1]] - vals[i_ground])
    return wm, wp
