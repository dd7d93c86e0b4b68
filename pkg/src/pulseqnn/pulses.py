"""Layered Gaussian sub-pulse schedules and their sampled waveforms.

Each layer holds one truncated Gaussian sub-pulse per control channel, all
played simultaneously over a window of 4*sigma seconds. Amplitudes are peak
values in rad/s. Sampling is left-edge on a uniform grid of step dt, so the
peak sample sits exactly at the window center when dt divides 2*sigma.
"""

import math
from dataclasses import dataclass

import numpy as np

# Area of a unit-peak Gaussian truncated to [0, 4 sigma], divided by sigma.
_UNIT_AREA = math.sqrt(2.0 * math.pi) * math.erf(math.sqrt(2.0))


@dataclass(frozen=True)
class PulseShape:
    """Sub-pulse geometry: Gaussian width sigma and sample step dt (seconds)."""

    sigma: float = 10e-9
    dt: float = 0.5e-9

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not 0 < self.dt <= self.support:
            raise ValueError("dt must be positive and at most one layer long")

    @property
    def support(self) -> float:
        """Sub-pulse duration, fixed at 4*sigma."""
        return 4.0 * self.sigma

    @property
    def samples_per_layer(self) -> int:
        return max(1, round(self.support / self.dt))

    @property
    def area(self) -> float:
        """Integral of the unit-peak truncated Gaussian over one layer."""
        return self.sigma * _UNIT_AREA


def shape_for_total_length(tau: float, layers: int, dt: float = 0.5e-9) -> PulseShape:
    """Shape whose `layers` sub-pulses span a total of tau seconds."""
    return PulseShape(sigma=tau / (4.0 * layers), dt=dt)


@dataclass(frozen=True)
class PulseSchedule:
    """Grid of peak amplitudes, shape (channels, layers), in rad/s."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=float)
        if amp.ndim != 2:
            raise ValueError("amplitude grid must be 2-D (channels x layers)")
        if not np.all(np.isfinite(amp)):
            raise ValueError("amplitudes must be finite")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def num_channels(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def num_layers(self) -> int:
        return self.amplitudes.shape[1]


@dataclass(frozen=True)
class Waveform:
    """Sampled per-channel drive amplitudes on a common time grid."""

    samples: np.ndarray  # (channels, total_samples), rad/s
    dt: float
    samples_per_layer: int

    @property
    def num_channels(self) -> int:
        return self.samples.shape[0]

    @property
    def num_samples(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        return self.num_samples * self.dt


def _unit_envelope(shape: PulseShape) -> np.ndarray:
    t = np.arange(shape.samples_per_layer) * shape.dt
    mid = 2.0 * shape.sigma
    return np.exp(-((t - mid) ** 2) / (2.0 * shape.sigma ** 2))


def gaussian_envelope(amplitude: float, shape: PulseShape) -> np.ndarray:
    """Sampled sub-pulse amplitude * exp(-(t - 2 sigma)^2 / (2 sigma^2)).

    Truncated at the window edges, no baseline subtraction; t in [0, 4 sigma).
    """
    if not np.isfinite(amplitude):
        raise ValueError("amplitude must be finite")
    return amplitude * _unit_envelope(shape)


def amplitude_for_rotation(angle: float, shape: PulseShape) -> float:
    """Peak amplitude whose sub-pulse area equals `angle` radians.

    Sized for a resonant drive through an (a + a^dag)/2 control operator,
    so a pi-area pulse fully inverts a two-level qubit.
    """
    if not np.isfinite(angle):
        raise ValueError("angle must be finite")
    return angle / shape.area


def schedule_to_waveforms(schedule: PulseSchedule, shape: PulseShape) -> Waveform:
    """Render a schedule into contiguous per-channel sample arrays.

    Layer j occupies [j*4sigma, (j+1)*4sigma); all channels share the grid.
    """
    env = _unit_envelope(shape)
    # (channels, layers, samples_per_layer) -> (channels, total)
    samples = schedule.amplitudes[:, :, None] * env[None, None, :]
    samples = samples.reshape(schedule.num_channels, -1)
    return Waveform(samples=samples, dt=shape.dt,
                    samples_per_layer=shape.samples_per_layer)
