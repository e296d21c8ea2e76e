"""Diffracted-wavevector closure at a grating sample.

Two closure modes are provided. The basic mode sets kd = kg + kp, which off
the Bragg condition changes the wavevector length (an unphysical artifact it
is kept for: it is the cheapest possible model and fine on-Bragg). The
energy-conserving mode keeps the tangential components of kg + kp in the
local frame and resizes the normal component so that |kd| = |kp|; when the
tangential part already exceeds |kp| there is no real normal component and
the order is evanescent.

Diffraction efficiency is a pluggable hook (sample, probe) -> eta in [0, 1],
fixed at 1 by default; the zero order carries 1 - eta. Rigorous efficiency
theories can be plugged in without touching this API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from .geometry import Frame, Vec3
from .recording import GratingSample
from .waves import Wave, local_wavevector

MODES = ("basic", "energy")

EfficiencyHook = Callable[[GratingSample, Wave], float]


class DiffractionStatus(str, Enum):
    PROPAGATING = "propagating"
    EVANESCENT = "evanescent"
    PASS_THROUGH = "pass_through"


@dataclass(frozen=True)
class DiffractionResult:
    """Outcome of one closure: diffracted wavevector (None when evanescent),
    status, Bragg mismatch |kg + kp| - |kp| (rad/um) and efficiency."""

    kd: Optional[Vec3]
    status: DiffractionStatus
    mismatch: float
    eta: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"efficiency must be in [0, 1], got {self.eta}")
        if self.status is DiffractionStatus.EVANESCENT:
            if self.kd is not None:
                raise ValueError("evanescent results carry no diffracted wavevector")
        elif self.kd is None:
            raise ValueError(f"{self.status.value} results need a diffracted wavevector")

    @property
    def zero_order_weight(self) -> float:
        return 1.0 - self.eta


def kvc_basic(kp: Vec3, kg: Vec3) -> Vec3:
    """Vector-addition closure kd = kg + kp (length not preserved off-Bragg)."""
    return kg + kp


def kvc_energy_conserving(kp: Vec3, kg: Vec3, frame: Frame, eta: float = 1.0) -> DiffractionResult:
    """Closure with |kd| = |kp| enforced via the local frame.

    Tangential components of kd equal those of kg + kp; the normal component
    is sqrt(|kp|^2 - tangential^2) signed like (kg + kp).n (positive root on
    a zero dot product), preserving transmission vs. reflection character.
    A negative radicand means no propagating order: status = evanescent.
    """
    w = kg + kp
    wt = w.dot(frame.t)
    wb = w.dot(frame.b)
    wn = w.dot(frame.n)
    kp_len = kp.norm()
    mismatch = w.norm() - kp_len
    radicand = kp_len * kp_len - (wt * wt + wb * wb)
    if radicand < 0.0:
        return DiffractionResult(None, DiffractionStatus.EVANESCENT, mismatch, eta)
    c = math.sqrt(radicand)
    if wn < 0.0:
        c = -c
    kd = frame.t * wt + frame.b * wb + frame.n * c
    return DiffractionResult(kd, DiffractionStatus.PROPAGATING, mismatch, eta)


def diffract_sample(
    sample: GratingSample,
    probe: Wave,
    mode: str = "energy",
    efficiency: Optional[EfficiencyHook] = None,
) -> DiffractionResult:
    """Diffract ``probe`` at one field sample using the chosen closure mode.

    The probe wavevector is evaluated at the sample position and the stored
    frame coordinates are recomposed to a world-space kg. Degenerate kg = 0
    samples pass the probe through unchanged.
    """
    if mode not in MODES:
        raise ValueError(f"unknown closure mode {mode!r}; expected one of {MODES}")
    kp = local_wavevector(probe, sample.position)
    eta = 1.0 if efficiency is None else float(efficiency(sample, probe))
    if sample.is_degenerate:
        return DiffractionResult(kp, DiffractionStatus.PASS_THROUGH, 0.0, eta)
    kg = sample.kg_world()
    if mode == "basic":
        kd = kvc_basic(kp, kg)
        return DiffractionResult(kd, DiffractionStatus.PROPAGATING, kd.norm() - kp.norm(), eta)
    return kvc_energy_conserving(kp, kg, sample.frame, eta)
