"""Four-line NMR spectrum of the coupled pair after a small flip-angle pulse.

Line intensity model (small flip angle)::

    amplitude = sin(flip) * (pop_lower - pop_upper) * roofing

where populations are taken in the eigenbasis and the roofing factor is
proportional to |<phi_i|I_x|phi_j>|^2: ``1 + sin 2theta`` for the two lines
touching phi_2 (the inner pair, 1<->2 and 2<->4) and ``1 - sin 2theta`` for
the two lines touching phi_3 (1<->3 and 3<->4). Positive amplitudes are
absorptive. Frequencies are reported in ascending order; NMR plots usually
draw the axis increasing to the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .spin_system import SpinParams, derive_params, eigenbasis_from_theta, energy_levels
from .thermal import thermal_density_matrix

TRANSITIONS = ((1, 2), (1, 3), (2, 4), (3, 4))
INNER = frozenset({(1, 2), (2, 4)})
DEFAULT_LINEWIDTH = 0.02
DEFAULT_POINTS = 2000
DEFAULT_FLIP_DEG = 5.0
SCENARIO_TAU = 0.01
SCENARIO_THETAS_DEG = (45.0, 30.0, 10.0)


@dataclass(frozen=True)
class TransitionLine:
    from_level: int
    to_level: int
    frequency: float
    amplitude: float = 0.0

    @property
    def label(self) -> str:
        return f"{self.from_level}<->{self.to_level}"

    @property
    def pair(self) -> tuple[int, int]:
        return tuple(sorted((self.from_level, self.to_level)))

    def as_dict(self) -> dict:
        return {
            "from_level": self.from_level,
            "to_level": self.to_level,
            "label": self.label,
            "frequency": self.frequency,
            "amplitude": self.amplitude,
        }


@dataclass(frozen=True)
class SpectrumTrace:
    frequency_axis: np.ndarray
    intensity: np.ndarray
    linewidth: float


def roofing_factor(pair, theta: float) -> float:
    s = math.sin(2 * theta)
    return 1.0 + s if tuple(sorted(pair)) in INNER else 1.0 - s


def allowed_transitions(p: SpinParams) -> list[TransitionLine]:
    """Single-spin-flip lines, each oriented from the upper to the lower level."""
    e = energy_levels(p).as_array()
    lines = []
    for i, j in TRANSITIONS:
        upper, lower = (i, j) if e[i - 1] >= e[j - 1] else (j, i)
        lines.append(TransitionLine(upper, lower, float(abs(e[i - 1] - e[j - 1]))))
    return lines


def eigen_populations(rho: np.ndarray, theta: float) -> np.ndarray:
    v = eigenbasis_from_theta(theta)
    return np.real(np.einsum("ki,kl,li->i", v, rho, v))


def line_amplitudes(rho: np.ndarray, p: SpinParams, flip_angle: float, theta: float | None = None) -> list[TransitionLine]:
    """Lines of ``p`` with amplitudes for state ``rho``; ``theta`` overrides the mixing angle."""
    if not 0 <= flip_angle <= math.pi / 2:
        raise ValueError("flip angle must lie in [0, pi/2]")
    if theta is None:
        theta = derive_params(p).theta
    pops = eigen_populations(rho, theta)
    out = []
    for line in allowed_transitions(p):
        delta = pops[line.to_level - 1] - pops[line.from_level - 1]
        amp = math.sin(flip_angle) * delta * roofing_factor(line.pair, theta)
        out.append(TransitionLine(line.from_level, line.to_level, line.frequency, float(amp)))
    return out


def default_axis(lines, linewidth: float = DEFAULT_LINEWIDTH, n_points: int = DEFAULT_POINTS):
    top = max((ln.frequency for ln in lines), default=0.0)
    return 0.0, top + 10 * linewidth, n_points


def synthesize_trace(lines, linewidth: float = DEFAULT_LINEWIDTH, axis=None) -> SpectrumTrace:
    """Sum of Lorentzians amp * w^2 / ((f - f0)^2 + w^2) on a uniform axis."""
    if linewidth <= 0:
        raise ValueError("linewidth must be > 0")
    lo, hi, n = axis if axis is not None else default_axis(lines, linewidth)
    if n < 2 or not hi > lo:
        raise ValueError(f"degenerate frequency axis ({lo}, {hi}, {n})")
    f = np.linspace(lo, hi, int(n))
    w2 = linewidth * linewidth
    intensity = np.zeros_like(f)
    for ln in lines:
        intensity += ln.amplitude * w2 / ((f - ln.frequency) ** 2 + w2)
    return SpectrumTrace(f, intensity, linewidth)


def trace_peaks(trace: SpectrumTrace, rel_height: float = 0.1) -> np.ndarray:
    """Frequencies of local maxima of |intensity| above rel_height * max."""
    mag = np.abs(trace.intensity)
    top = mag.max()
    if top == 0:
        return np.array([])
    idx, _ = find_peaks(np.concatenate(([0.0], mag, [0.0])), height=rel_height * top)
    return trace.frequency_axis[idx - 1]


def assign_peaks(peaks, lines, tolerance: float) -> list[str]:
    """Label each peak with the strongest line within tolerance of it.

    Homonuclear lines can coincide (1<->2 and 2<->4 when D = J), hence the
    amplitude tie-break rather than nearest frequency.
    """
    labels = []
    for f in peaks:
        near = [ln for ln in lines if abs(ln.frequency - f) <= tolerance]
        labels.append(max(near, key=lambda ln: abs(ln.amplitude)).label if near else "?")
    return labels


def scenario_params(theta: float, regime: str, tau: float = SCENARIO_TAU, j_coupling: float = 1.0) -> SpinParams:
    """Parameters whose mixing angle is ``theta`` in the low/crossing/high regime.

    D = J / sin 2theta fixes omega_delta; omega_sigma sits at the E3/E4
    crossing J + D, or at half / one-and-a-half times that value.
    """
    s2 = math.sin(2 * theta)
    if not 0 < s2 <= 1:
        raise ValueError("theta must lie in (0, pi/2)")
    d_gap = j_coupling / s2
    omega_delta = d_gap * math.cos(2 * theta)
    crossing = j_coupling + d_gap
    scale = {"low": 0.5, "crossing": 1.0, "high": 1.5}[regime]
    return SpinParams.from_sum_diff(scale * crossing, omega_delta, j_coupling, tau)


@dataclass
class ScenarioSpectrum:
    theta_deg: float
    regime: str
    params: SpinParams
    lines: list
    trace: SpectrumTrace
    peaks: list = field(default_factory=list)


def scenario_spectra(
    theta_list=SCENARIO_THETAS_DEG,
    flip_angle: float = math.radians(DEFAULT_FLIP_DEG),
    tau: float = SCENARIO_TAU,
    linewidth: float = DEFAULT_LINEWIDTH,
    n_points: int = DEFAULT_POINTS,
    peak_height: float = 0.1,
) -> list[ScenarioSpectrum]:
    """Low-field, crossing and high-field spectra for each mixing angle (degrees)."""
    out = []
    for theta_deg in theta_list:
        theta = math.radians(theta_deg)
        for name in ("low", "crossing", "high"):
            p = scenario_params(theta, name, tau)
            rho = thermal_density_matrix(p)
            lines = line_amplitudes(rho, p, flip_angle, theta)
            trace = synthesize_trace(lines, linewidth, default_axis(lines, linewidth, n_points))
            peaks = assign_peaks(trace_peaks(trace, peak_height), lines, 3 * linewidth)
            out.append(ScenarioSpectrum(theta_deg, name, p, lines, trace, peaks))
    return out
