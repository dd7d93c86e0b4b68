"""State propagation under drift plus waveform-modulated control Hamiltonians.

Controls are piecewise constant over each waveform sample. The exponential
stepper diagonalizes the sampled Hamiltonian and is exact per sample, so its
result does not depend on the integrator step; RK4 integrates the same
piecewise-constant generator and serves as an independent cross-check and as
the open-system (Lindblad) integrator.

All entry points accept a single state (vector / density matrix) or a
leading batch axis; batched inputs may carry per-element waveform sample
arrays of shape (batch, channels, samples).
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .hilbert import DeviceModel, annihilation, embed
from .pulses import Waveform


class NumericalError(RuntimeError):
    """Propagation produced a non-physical state (norm/trace drift)."""


class Integrator(str, Enum):
    STEP_EXPONENTIAL = "step_exponential"
    RK4 = "rk4"


@dataclass(frozen=True)
class EvolutionConfig:
    integrator: Integrator = Integrator.STEP_EXPONENTIAL
    dt: float = 0.5e-9
    open_system: bool = False

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("integrator dt must be positive")
        object.__setattr__(self, "integrator", Integrator(self.integrator))


PURE_DEFAULT = EvolutionConfig(Integrator.STEP_EXPONENTIAL, 0.5e-9, open_system=False)
LINDBLAD_DEFAULT = EvolutionConfig(Integrator.RK4, 0.1e-9, open_system=True)


def _check_hermitian(h: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0
    if np.max(np.abs(h - h.conj().T)) > 1e-12 * scale:
        raise ValueError("operator is not Hermitian")


def step_propagator(h: np.ndarray, dt: float) -> np.ndarray:
    """Unitary exp(-i H dt) of a Hermitian generator, via eigendecomposition."""
    h = np.asarray(h, dtype=complex)
    _check_hermitian(h)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * dt)) @ v.conj().T


def _control_stack(controls) -> np.ndarray:
    stack = np.asarray(controls, dtype=complex)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise ValueError("controls must be a list of square operators")
    return stack


def _batched_samples(waveform, num_controls: int):
    """Normalize waveform input to samples of shape (batch, channels, S)."""
    if isinstance(waveform, Waveform):
        samples, dt = waveform.samples, waveform.dt
    else:
        raise TypeError("waveform must be a Waveform")
    if not np.all(np.isfinite(samples)):
        raise ValueError("waveform contains non-finite amplitudes")
    if samples.shape[0] != num_controls:
        raise ValueError(
            f"waveform has {samples.shape[0]} channels for {num_controls} control operators")
    return samples[None, :, :], dt


def _substeps(sample_dt: float, config: EvolutionConfig) -> int:
    if config.dt > sample_dt * (1 + 1e-12):
        raise ValueError("integrator dt must not exceed the waveform sample dt")
    return max(1, math.ceil(sample_dt / config.dt - 1e-12))


def _hamiltonians(h0, controls, samples, s):
    # samples (B,C,S) at sample index s -> (B,D,D)
    return h0 + np.einsum("bc,cij->bij", samples[:, :, s], controls)


def propagate_pure_batch(states: np.ndarray, h0: np.ndarray, controls,
                         samples: np.ndarray, sample_dt: float,
                         config: EvolutionConfig = PURE_DEFAULT) -> np.ndarray:
    """Evolve a batch of state vectors; samples has shape (batch, channels, S).

    A batch axis of length 1 broadcasts one waveform over all states.
    """
    controls = _control_stack(controls)
    h0 = np.asarray(h0, dtype=complex)
    psi = np.asarray(states, dtype=complex)
    squeeze = psi.ndim == 1
    if squeeze:
        psi = psi[None, :]
    nb = max(psi.shape[0], samples.shape[0])
    if psi.shape[0] not in (1, nb) or samples.shape[0] not in (1, nb):
        raise ValueError("state and waveform batch sizes are incompatible")
    psi = np.broadcast_to(psi, (nb, psi.shape[1])).copy()
    dim = h0.shape[0]
    if psi.shape[1] != dim or controls.shape[1] != dim:
        raise ValueError("operator dimension does not match the state")

    if config.integrator is Integrator.STEP_EXPONENTIAL:
        # Exact per piecewise-constant sample; integrator dt is irrelevant.
        h = np.einsum("bcs,cij->bsij", samples, controls)
        h = h + h0  # broadcast over (batch, sample)
        w, v = np.linalg.eigh(h)
        phases = np.exp(-1j * w * sample_dt)
        u = np.einsum("bsij,bsj,bskj->bsik", v, phases, v.conj())
        if u.shape[0] == 1 and nb > 1:
            u = np.broadcast_to(u, (nb,) + u.shape[1:])
        for s in range(u.shape[1]):
            psi = np.einsum("bij,bj->bi", u[:, s], psi)
    else:
        k = _substeps(sample_dt, config)
        h_step = sample_dt / k
        nsamp = samples.shape[2]
        bsam = np.broadcast_to(samples, (nb,) + samples.shape[1:])
        for s in range(nsamp):
            h = _hamiltonians(h0, controls, bsam, s)
            for _ in range(k):
                psi = _rk4_schrodinger(h, psi, h_step)

    norms = np.linalg.norm(psi, axis=1)
    if np.max(np.abs(norms - 1.0)) > 1e-6:
        raise NumericalError("state norm drifted; reduce the integrator dt")
    return psi[0] if squeeze else psi


def _rk4_schrodinger(h, psi, dt):
    def rhs(p):
        return -1j * np.einsum("bij,bj->bi", h, p)
    k1 = rhs(psi)
    k2 = rhs(psi + 0.5 * dt * k1)
    k3 = rhs(psi + 0.5 * dt * k2)
    k4 = rhs(psi + dt * k3)
    return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve_pure(state: np.ndarray, h0: np.ndarray, controls, waveform: Waveform,
                config: EvolutionConfig = PURE_DEFAULT) -> np.ndarray:
    """Closed-system evolution of a state vector across a full waveform."""
    if config.open_system:
        raise ValueError("evolve_pure requires a closed-system config")
    samples, dt = _batched_samples(waveform, len(controls))
    return propagate_pure_batch(state, h0, controls, samples, dt, config)


def _dissipators(device: DeviceModel):
    """Jump operators with rates: relaxation via a_q, dephasing via n_q."""
    a = annihilation(device.levels)
    ops, rates = [], []
    for q in range(device.num_qubits):
        gamma1 = 0.0 if math.isinf(device.t1[q]) else 1.0 / device.t1[q]
        gamma2 = 0.0 if math.isinf(device.tphi[q]) else 1.0 / device.tphi[q]
        if gamma1 < 0 or gamma2 < 0:
            raise ValueError("decay rates must be nonnegative")
        aq = embed(a, q, device)
        if gamma1 > 0:
            ops.append(aq)
            rates.append(gamma1)
        if gamma2 > 0:
            ops.append(aq.conj().T @ aq)
            rates.append(gamma2)
    return ops, rates


def propagate_lindblad_batch(rhos: np.ndarray, h0: np.ndarray, controls,
                             samples: np.ndarray, sample_dt: float,
                             device: DeviceModel,
                             config: EvolutionConfig = LINDBLAD_DEFAULT) -> np.ndarray:
    """RK4 integration of the master equation for a batch of density matrices."""
    controls = _control_stack(controls)
    h0 = np.asarray(h0, dtype=complex)
    rho = np.asarray(rhos, dtype=complex)
    squeeze = rho.ndim == 2
    if squeeze:
        rho = rho[None, :, :]
    nb = max(rho.shape[0], samples.shape[0])
    rho = np.broadcast_to(rho, (nb,) + rho.shape[1:]).copy()
    bsam = np.broadcast_to(samples, (nb,) + samples.shape[1:])

    jump_ops, rates = _dissipators(device)
    jump_dag = [op.conj().T for op in jump_ops]
    # Anticommutator part collapses into one Hermitian operator.
    gsum = np.zeros_like(h0)
    for rate, op, opd in zip(rates, jump_ops, jump_dag):
        gsum += rate * (opd @ op)

    def rhs(h, r):
        out = -1j * (h @ r - r @ h)
        out -= 0.5 * (gsum @ r + r @ gsum)
        for rate, op, opd in zip(rates, jump_ops, jump_dag):
            out += rate * (op @ r @ opd)
        return out

    k = _substeps(sample_dt, config)
    h_step = sample_dt / k
    for s in range(bsam.shape[2]):
        h = _hamiltonians(h0, controls, bsam, s)
        for _ in range(k):
            k1 = rhs(h, rho)
            k2 = rhs(h, rho + 0.5 * h_step * k1)
            k3 = rhs(h, rho + 0.5 * h_step * k2)
            k4 = rhs(h, rho + h_step * k3)
            rho = rho + (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    traces = np.einsum("bii->b", rho).real
    if np.max(np.abs(traces - 1.0)) > 1e-6:
        raise NumericalError("density-matrix trace drifted; reduce the integrator dt")
    return rho[0] if squeeze else rho


def evolve_lindblad(rho: np.ndarray, h0: np.ndarray, controls, waveform: Waveform,
                    device: DeviceModel,
                    config: EvolutionConfig = LINDBLAD_DEFAULT) -> np.ndarray:
    """Open-system evolution of a density matrix across a full waveform."""
    if not config.open_system:
        raise ValueError("evolve_lindblad requires an open-system config")
    samples, dt = _batched_samples(waveform, len(controls))
    return propagate_lindblad_batch(rho, h0, controls, samples, dt, device, config)
