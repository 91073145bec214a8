"""Brute-force second-quantized simulation of the coupling stage.

Two photons are propagated exactly: the signal photon B, polarization
entangled with the idle photon A, enters one beamsplitter port; the
surrounding photon E enters the other.  Amplitudes live in an 8-mode
single-photon space indexed by

    mode = (arm, polarization, temporal bin)

where the arm is BOB (toward Bob's detection) or MEAS (toward the
measurement box), the polarization is H or V, and the temporal bin is SIGNAL
(overlapping the signal wavepacket) or ORTH (orthogonal to it).  Photon A
never traverses any optics and is carried as a bare qubit index attached to
every amplitude.

The surrounding photon's completely mixed polarization I/2 is realized as a
uniform classical mixture over {H, V} inputs, which is exact for a linear
network followed by measurement; its partial indistinguishability is an
amplitude sqrt(p) on the SIGNAL bin and sqrt(1 - p) on the ORTH bin.

The beamsplitter phase convention is symmetric (factor i on reflection).
The convention is not observable in any post-selected polarization state
produced here, which the tests confirm by switching `apply_beamsplitter` to
the asymmetric real convention and comparing.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

import numpy as np

from . import qmat
from .params import CouplingConfig, Stage, StageOutcome, check_unit_interval

SQRT2 = float(np.sqrt(2.0))

ARM_BOB, ARM_MEAS = 0, 1
POL_H, POL_V = 0, 1
TIME_SIGNAL, TIME_ORTH = 0, 1

N_MODES = 8

# Treatments of the MEAS-arm polarization when reducing to the A-B pair.
TRACE_OUT = "trace_out"
PROJECT_H = "project_H"
PROJECT_V = "project_V"


class ModeLabel(NamedTuple):
    """Single-photon mode: output arm, polarization, temporal bin."""

    arm: int
    pol: int
    time: int

    @property
    def index(self) -> int:
        return 4 * self.arm + 2 * self.pol + self.time


def mode_index(arm: int, pol: int, time: int) -> int:
    return 4 * arm + 2 * pol + time


def mode_label(index: int) -> ModeLabel:
    if not 0 <= index < N_MODES:
        raise ValueError(f"mode index must lie in [0, {N_MODES}), got {index}")
    return ModeLabel(index // 4, (index % 4) // 2, index % 2)


def all_modes() -> tuple[ModeLabel, ...]:
    return tuple(mode_label(i) for i in range(N_MODES))


class FockVector:
    """Two-photon state with the A-photon qubit attached.

    `amplitudes` maps (a_pol, mode_lo, mode_hi) with mode_lo <= mode_hi to the
    amplitude of the normalized occupation basis state; a doubled key (m, m)
    is the two-photon occupation of a single mode.  Branches may be
    sub-normalized after post-selection.
    """

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes: dict[tuple[int, int, int], complex]):
        self.amplitudes = amplitudes

    def norm_squared(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"FockVector({self.amplitudes!r})"


def build_input(cfg: CouplingConfig, env_pol: int) -> FockVector:
    """Input state with the surrounding photon prepared in `env_pol`.

    The A-B pair is (|H>_A |V>_B - i |V>_A |H>_B)/sqrt(2) with B on the BOB
    arm in the SIGNAL bin; the surrounding photon sits on the MEAS arm with
    amplitude sqrt(p) on SIGNAL and sqrt(1 - p) on ORTH.  Callers average
    over env_pol in {H, V} to realize the depolarized environment.
    """
    if env_pol not in (POL_H, POL_V):
        raise ValueError(f"env_pol must be 0 (H) or 1 (V), got {env_pol}")
    p = cfg.overlap
    temporal = ((TIME_SIGNAL, float(np.sqrt(p))), (TIME_ORTH, float(np.sqrt(1.0 - p))))
    pair = ((POL_H, POL_V, 1.0 / SQRT2), (POL_V, POL_H, -1.0j / SQRT2))
    amps: dict[tuple[int, int, int], complex] = {}
    for a_pol, b_pol, pair_amp in pair:
        m_b = mode_index(ARM_BOB, b_pol, TIME_SIGNAL)
        for t, t_amp in temporal:
            if t_amp == 0.0:
                continue
            m_e = mode_index(ARM_MEAS, env_pol, t)
            lo, hi = (m_b, m_e) if m_b <= m_e else (m_e, m_b)
            amps[(a_pol, lo, hi)] = pair_amp * t_amp
    return FockVector(amps)


def beamsplitter_matrix(transmittivity: float, convention: str = "symmetric") -> np.ndarray:
    """Single-photon mode map of the coupling beamsplitter.

    Transmission keeps the arm with amplitude sqrt(T); reflection swaps arms
    with amplitude i sqrt(R) in the symmetric convention, or with real
    entries (sqrt(R) off-diagonal, -sqrt(T) on the MEAS output) in the
    asymmetric one.  Polarization and temporal bin are untouched.
    """
    t = check_unit_interval(transmittivity, "transmittivity")
    t_amp = float(np.sqrt(t))
    r_amp = float(np.sqrt(1.0 - t))
    if convention == "symmetric":
        block = np.array([[t_amp, 1.0j * r_amp], [1.0j * r_amp, t_amp]])
    elif convention == "asymmetric":
        block = np.array([[t_amp, r_amp], [r_amp, -t_amp]], dtype=complex)
    else:
        raise ValueError(f"unknown beamsplitter convention {convention!r}")
    u = np.zeros((N_MODES, N_MODES), dtype=complex)
    for pol in (POL_H, POL_V):
        for time in (TIME_SIGNAL, TIME_ORTH):
            modes = [mode_index(arm, pol, time) for arm in (ARM_BOB, ARM_MEAS)]
            u[np.ix_(modes, modes)] = block
    return u


def apply_beamsplitter(
    state: FockVector, transmittivity: float, convention: str = "symmetric"
) -> FockVector:
    """Propagate both photons through the beamsplitter.

    Each creation operator maps linearly under the single-photon matrix; the
    two-photon amplitudes are re-expanded in the normalized occupation basis
    (a doubly occupied mode carries the bosonic sqrt(2)).  The map is unitary,
    so the total norm is preserved.
    """
    u = beamsplitter_matrix(transmittivity, convention)
    monomials: dict[tuple[int, int, int], complex] = {}
    for (a_pol, m1, m2), amp in state.amplitudes.items():
        # normalized occupation amplitude -> coefficient of the c+_m1 c+_m2 monomial
        coeff = amp / SQRT2 if m1 == m2 else amp
        out1 = np.nonzero(u[:, m1])[0]
        out2 = np.nonzero(u[:, m2])[0]
        for i in out1:
            ci = coeff * u[i, m1]
            for j in out2:
                key = (a_pol, i, j) if i <= j else (a_pol, j, i)
                monomials[key] = monomials.get(key, 0.0) + ci * u[j, m2]
    amps = {
        key: (value * SQRT2 if key[1] == key[2] else value)
        for key, value in monomials.items()
        if value != 0.0
    }
    return FockVector(amps)


def postselect_one_each(state: FockVector) -> tuple[FockVector, float]:
    """Keep configurations with exactly one photon per output arm.

    Returns the sub-normalized branch together with its probability (zero
    when the branch is empty, e.g. perfect two-photon interference).
    """
    kept = {
        key: amp
        for key, amp in state.amplitudes.items()
        if key[1] // 4 != key[2] // 4
    }
    branch = FockVector(kept)
    return branch, branch.norm_squared()


def branch_probabilities(
    cfg: CouplingConfig, convention: str = "symmetric"
) -> dict[str, float]:
    """Probabilities of the three detection patterns after the coupling.

    Averaged over the depolarized environment: both photons toward Bob, both
    toward the measurement box, or one photon in each arm.  They sum to 1.
    """
    totals = {"both_bob": 0.0, "both_meas": 0.0, "one_each": 0.0}
    for env_pol in (POL_H, POL_V):
        vec = apply_beamsplitter(build_input(cfg, env_pol), cfg.transmittivity, convention)
        for (_, m1, m2), amp in vec.amplitudes.items():
            arms = (m1 // 4, m2 // 4)
            if arms == (ARM_BOB, ARM_BOB):
                pattern = "both_bob"
            elif arms == (ARM_MEAS, ARM_MEAS):
                pattern = "both_meas"
            else:
                pattern = "one_each"
            totals[pattern] += 0.5 * abs(amp) ** 2
    return totals


def _branch_tensor(branch: FockVector) -> np.ndarray:
    """Amplitudes as psi[a_pol, bob_pol, bob_time, meas_pol, meas_time]."""
    psi = np.zeros((2, 2, 2, 2, 2), dtype=complex)
    for (a_pol, m1, m2), amp in branch.amplitudes.items():
        first, second = mode_label(m1), mode_label(m2)
        bob, meas = (first, second) if first.arm == ARM_BOB else (second, first)
        if bob.arm != ARM_BOB or meas.arm != ARM_MEAS:
            raise ValueError("branch is not post-selected on one photon per arm")
        psi[a_pol, bob.pol, bob.time, meas.pol, meas.time] = amp
    return psi


def reduce_to_ab(
    branches: FockVector | Iterable[FockVector],
    env_measurement: str = TRACE_OUT,
) -> StageOutcome:
    """Reduce post-selected branches to the normalized A-B polarization state.

    `branches` are the equally weighted classical components of the
    environment mixture (one per env_pol input); a single FockVector is
    accepted as well.  The temporal bins are always traced out.  The MEAS-arm
    polarization is traced out (coupling stage) or projected on H or V
    (measurement stage); the returned probability is cumulative over the
    post-selection and, when projecting, the measurement outcome.
    """
    if isinstance(branches, FockVector):
        branches = [branches]
    branches = list(branches)
    if not branches:
        raise ValueError("at least one branch is required")
    if env_measurement not in (TRACE_OUT, PROJECT_H, PROJECT_V):
        raise ValueError(f"unknown environment treatment {env_measurement!r}")

    rho = np.zeros((4, 4), dtype=complex)
    for branch in branches:
        psi = _branch_tensor(branch)
        if env_measurement == TRACE_OUT:
            rho += np.einsum("abtcu,ABtcu->abAB", psi, psi.conj()).reshape(4, 4)
        else:
            pol = POL_H if env_measurement == PROJECT_H else POL_V
            sel = psi[:, :, :, pol, :]
            rho += np.einsum("abtu,ABtu->abAB", sel, sel.conj()).reshape(4, 4)
    rho /= len(branches)

    probability = float(np.real(np.trace(rho)))
    if probability <= 1e-15:
        raise ValueError("post-selected branch has zero probability")
    state = qmat.validate_density_matrix(rho / probability, dim=4)
    stage = Stage.COUPLING if env_measurement == TRACE_OUT else Stage.MEASUREMENT
    return StageOutcome(state=state, probability=probability, stage=stage)


def simulate(
    cfg: CouplingConfig,
    env_measurement: str = TRACE_OUT,
    convention: str = "symmetric",
) -> StageOutcome:
    """Run the full pipeline from first principles.

    Builds both environment polarization inputs, couples them on the
    beamsplitter, post-selects one photon per arm and reduces to the A-B
    pair with the requested treatment of the measured photon.
    """
    branches = []
    for env_pol in (POL_H, POL_V):
        vec = build_input(cfg, env_pol)
        vec = apply_beamsplitter(vec, cfg.transmittivity, convention)
        branch, _ = postselect_one_each(vec)
        branches.append(branch)
    return reduce_to_ab(branches, env_measurement)


def hom_coincidence(transmittivity: float, overlap: float) -> float:
    """Coincidence probability of a two-photon interference experiment.

    Two photons of identical polarization, one per input arm, with temporal
    overlap `overlap`, meet at a beamsplitter of the given transmittivity;
    returns the probability of finding one photon in each output arm.  At
    T = 0.5 this is (1 - p)/2, the textbook interference dip.
    """
    check_unit_interval(overlap, "overlap")
    m_sig = mode_index(ARM_BOB, POL_H, TIME_SIGNAL)
    amps: dict[tuple[int, int, int], complex] = {}
    temporal = ((TIME_SIGNAL, float(np.sqrt(overlap))), (TIME_ORTH, float(np.sqrt(1.0 - overlap))))
    for t, t_amp in temporal:
        if t_amp == 0.0:
            continue
        m_env = mode_index(ARM_MEAS, POL_H, t)
        lo, hi = (m_sig, m_env) if m_sig <= m_env else (m_env, m_sig)
        amps[(0, lo, hi)] = t_amp  # no idle photon here; the A slot is a spectator
    vec = apply_beamsplitter(FockVector(amps), transmittivity)
    _, probability = postselect_one_each(vec)
    return probability


def overlap_from_coincidence(coincidence: float, transmittivity: float = 0.5) -> float:
    """Invert the interference dip to estimate the photon overlap.

    The coincidence rate is (T^2 + R^2) - 2 p T R, so
    p = (T^2 + R^2 - coincidence) / (2 T R); at T = 0.5 this reduces to
    p = 1 - 2 * coincidence.
    """
    t = check_unit_interval(transmittivity, "transmittivity")
    r = 1.0 - t
    if t == 0.0 or t == 1.0:
        raise ValueError("no two-photon interference at T = 0 or T = 1")
    p = (t * t + r * r - float(coincidence)) / (2.0 * t * r)
    if not -1e-9 <= p <= 1.0 + 1e-9:
        raise ValueError(f"coincidence rate {coincidence} is outside the physical range")
    return min(max(p, 0.0), 1.0)
