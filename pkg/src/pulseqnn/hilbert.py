"""Truncated-transmon operators and device Hamiltonians.

Operators are dense complex ndarrays on the d^M-dimensional product space.
Qubit 0 is the most significant tensor factor. hbar = 1 throughout: energies
are angular frequencies in rad/s, times are in seconds.
"""

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

TWO_PI = 2.0 * np.pi

# Calibrated constants of the three-transmon device (first entry = qubit 0).
XMON_ANHARMONICITY = tuple(TWO_PI * f * 1e6 for f in (217.0, 206.0, 197.0))
XMON_T1 = (13e-6, 10e-6, 13e-6)
XMON_TPHI = (49e-6, 37e-6, 58e-6)
# Pairwise couplings J/2pi in Hz, keyed by qubit pair.
XMON_COUPLING = {
    (0, 1): TWO_PI * 4.11e6,
    (1, 2): TWO_PI * 3.02e6,
    (0, 2): TWO_PI * 4.46e6,
}


class CouplingModel(str, Enum):
    EXCHANGE = "exchange"
    CROSS_KERR = "cross_kerr"


@dataclass(frozen=True)
class DeviceModel:
    """Static description of the coupled-transmon system.

    anharmonicity, coupling entries in rad/s; t1/tphi in seconds (inf for
    no decay). coupling must be symmetric with zero diagonal.
    """

    num_qubits: int
    levels: int = 2
    anharmonicity: tuple = ()
    coupling: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    t1: tuple = ()
    tphi: tuple = ()
    coupling_model: CouplingModel = CouplingModel.EXCHANGE

    def __post_init__(self):
        m = self.num_qubits
        if m < 1:
            raise ValueError("need at least one qubit")
        if self.levels < 2:
            raise ValueError("transmon truncation requires at least 2 levels")
        if len(self.anharmonicity) != m:
            raise ValueError("anharmonicity must have one entry per qubit")
        coupling = np.asarray(self.coupling, dtype=float)
        if coupling.shape != (m, m):
            raise ValueError(f"coupling matrix must be {m}x{m}")
        if not np.allclose(coupling, coupling.T, atol=1e-12):
            raise ValueError("coupling matrix must be symmetric")
        if np.any(np.abs(np.diag(coupling)) > 0):
            raise ValueError("coupling diagonal must be zero")
        if not np.all(np.isfinite(coupling)):
            raise ValueError("coupling entries must be finite")
        if len(self.t1) != m or len(self.tphi) != m:
            raise ValueError("t1/tphi must have one entry per qubit")
        for t in (*self.t1, *self.tphi):
            if not t > 0:
                raise ValueError("coherence times must be positive (inf allowed)")
        coupling.setflags(write=False)
        object.__setattr__(self, "coupling", coupling)
        object.__setattr__(self, "anharmonicity", tuple(float(a) for a in self.anharmonicity))
        object.__setattr__(self, "t1", tuple(float(t) for t in self.t1))
        object.__setattr__(self, "tphi", tuple(float(t) for t in self.tphi))
        object.__setattr__(self, "coupling_model", CouplingModel(self.coupling_model))

    @property
    def dim(self) -> int:
        return self.levels ** self.num_qubits

    def with_uniform_coherence(self, t1: float, tphi: float) -> "DeviceModel":
        """Copy of the device with identical T1/Tphi on every qubit."""
        m = self.num_qubits
        return replace(self, t1=(t1,) * m, tphi=(tphi,) * m)


def default_device(num_qubits: int, levels: int = 2,
                   coupling_model: CouplingModel = CouplingModel.EXCHANGE) -> DeviceModel:
    """Device built from the calibrated three-transmon constants.

    num_qubits selects the leading subset of the calibrated qubits, so the
    two-qubit device keeps the 4.11 MHz pair coupling.
    """
    if not 1 <= num_qubits <= 3:
        raise ValueError("calibrated constants cover 1 to 3 qubits")
    j = np.zeros((num_qubits, num_qubits))
    for (q, p), val in XMON_COUPLING.items():
        if q < num_qubits and p < num_qubits:
            j[q, p] = j[p, q] = val
    return DeviceModel(
        num_qubits=num_qubits,
        levels=levels,
        anharmonicity=XMON_ANHARMONICITY[:num_qubits],
        coupling=j,
        t1=XMON_T1[:num_qubits],
        tphi=XMON_TPHI[:num_qubits],
        coupling_model=coupling_model,
    )


def annihilation(d: int) -> np.ndarray:
    """Lowering operator truncated to d levels: entries sqrt(k) at (k-1, k)."""
    if d < 2:
        raise ValueError("truncation requires at least 2 levels")
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1).astype(complex)


def number(d: int) -> np.ndarray:
    """Occupation-number operator a^dag a."""
    return np.diag(np.arange(d, dtype=float)).astype(complex)


def embed(op: np.ndarray, q: int, device: DeviceModel) -> np.ndarray:
    """Lift a single-transmon operator to the full space at slot q.

    Qubit 0 is the most significant tensor factor.
    """
    d, m = device.levels, device.num_qubits
    op = np.asarray(op)
    if op.shape != (d, d):
        raise ValueError(f"operator shape {op.shape} does not match truncation d={d}")
    if not 0 <= q < m:
        raise ValueError(f"qubit index {q} out of range for {m} qubits")
    out = np.eye(d ** q, dtype=complex)
    out = np.kron(out, op)
    out = np.kron(out, np.eye(d ** (m - q - 1), dtype=complex))
    return out


def build_static_hamiltonian(device: DeviceModel) -> np.ndarray:
    """Drift Hamiltonian: pair couplings minus transmon anharmonicity.

    Exchange: sum over unordered pairs of J_qp (a_q^dag a_p + a_p^dag a_q).
    Cross-Kerr: sum over unordered pairs of J_qp n_q n_p.
    Both minus sum_q (E_C,q / 2) a_q^dag a_q^dag a_q a_q.
    """
    d, m = device.levels, device.num_qubits
    a = annihilation(d)
    lowering = [embed(a, q, device) for q in range(m)]
    h = np.zeros((device.dim, device.dim), dtype=complex)
    for q in range(m):
        for p in range(q + 1, m):
            j = device.coupling[q, p]
            if j == 0.0:
                continue
            if device.coupling_model is CouplingModel.EXCHANGE:
                term = lowering[q].conj().T @ lowering[p]
                h += j * (term + term.conj().T)
            else:
                nq = lowering[q].conj().T @ lowering[q]
                np_ = lowering[p].conj().T @ lowering[p]
                h += j * (nq @ np_)
    for q in range(m):
        aq = lowering[q]
        h -= 0.5 * device.anharmonicity[q] * (aq.conj().T @ aq.conj().T @ aq @ aq)
    return h


def build_control_hamiltonians(device: DeviceModel) -> list:
    """Per-qubit drive operators, ordered (q0 x, q0 y, q1 x, q1 y, ...).

    x channel: (a + a^dag)/2.  y channel: i(a - a^dag)/2.
    """
    d = device.levels
    a = annihilation(d)
    x = 0.5 * (a + a.conj().T)
    y = 0.5j * (a - a.conj().T)
    ops = []
    for q in range(device.num_qubits):
        ops.append(embed(x, q, device))
        ops.append(embed(y, q, device))
    return ops


def total_number_operator(device: DeviceModel) -> np.ndarray:
    """Sum of per-qubit occupation numbers (conserved by exchange coupling)."""
    n = number(device.levels)
    out = np.zeros((device.dim, device.dim), dtype=complex)
    for q in range(device.num_qubits):
        out += embed(n, q, device)
    return out


def ground_state(device: DeviceModel) -> np.ndarray:
    """All-transmons-in-ground state vector |g...g>."""
    psi = np.zeros(device.dim, dtype=complex)
    psi[0] = 1.0
    return psi
