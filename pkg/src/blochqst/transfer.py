"""Packet engineering: truncated Gaussians, half-period transfer, sweeps, routing.

A packet A exp(-beta (n - center)^2) truncated to |n - center| <= delta and
placed on a chain tilted with force = -coupling / (spacing * p) reaches site
p after half a Bloch period, pi p / coupling.  This module builds such plans,
scores them by the probability collected in a window around the target,
sweeps (beta, delta) at fixed tilt, and routes one packet shape to different
distances by varying the force alone.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import TiltParameters, tilt_parameters
from .chain import ChainSpec, LatticeState, build_tilted_hamiltonian
from .evolution import evolve, trajectory

_REL_TOL = 1e-12


@dataclass(frozen=True)
class TruncatedGaussianSpec:
    """Gaussian amplitude profile cut off at |n - center| > delta.

    beta    width parameter of exp(-beta n^2); must be positive
    delta   truncation half-width in sites; delta = 0 is the sharp limit
    center  site the profile is centred on
    """

    beta: float
    delta: int
    center: int = 0

    def __post_init__(self) -> None:
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")

    @property
    def support_lo(self) -> int:
        return self.center - self.delta

    @property
    def support_hi(self) -> int:
        return self.center + self.delta

    @property
    def normalization(self) -> float:
        """A with sum_{|n|<=delta} |A exp(-beta n^2)|^2 = 1."""
        offsets = np.arange(-self.delta, self.delta + 1)
        return 1.0 / math.sqrt(np.sum(np.exp(-2.0 * self.beta * offsets**2)))


def sharp_state(chain: ChainSpec) -> LatticeState:
    """All probability on site 0."""
    if not chain.left <= 0 <= chain.right:
        raise ValueError("site 0 not on the chain")
    amps = np.zeros(chain.n_sites, dtype=np.complex128)
    amps[-chain.left] = 1.0
    return LatticeState(amps, chain.left)


def gaussian_state(spec: TruncatedGaussianSpec, chain: ChainSpec) -> LatticeState:
    """Truncated Gaussian on the chain window, no target bookkeeping."""
    if spec.support_lo < chain.left or spec.support_hi > chain.right:
        raise ValueError("truncated support extends beyond the chain")
    sites = chain.sites
    amps = np.zeros(chain.n_sites)
    inside = np.abs(sites - spec.center) <= spec.delta
    amps[inside] = np.exp(-spec.beta * (sites[inside] - spec.center) ** 2)
    amps = spec.normalization * amps
    return LatticeState(amps.astype(np.complex128), chain.left)


def truncated_gaussian(spec: TruncatedGaussianSpec, chain: ChainSpec) -> LatticeState:
    """Normalized truncated Gaussian on the full chain window.

    The support must fit on the chain, and the chain's target site must lie
    strictly outside it (otherwise "arrival" would be meaningless).
    """
    if spec.support_lo <= chain.target <= spec.support_hi:
        raise ValueError("target lies inside the initial support")
    return gaussian_state(spec, chain)


def success_probability(state: LatticeState, target: int, delta: int) -> float:
    """Probability collected in the window [target - delta, target + delta].

    The window must lie within the state's site range.
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    lo = target - delta - state.site_offset
    hi = target + delta - state.site_offset
    if lo < 0 or hi >= state.n_sites:
        raise ValueError("collection window outside the state's sites")
    return float(np.sum(np.abs(state.amplitudes[lo : hi + 1]) ** 2))


@dataclass(frozen=True)
class TransferPlan:
    """A transfer-ready configuration: packet, chain, tilt constants, arrival time.

    Invariants: symmetric chain margins around [0, target]; the truncation
    half-width fits strictly inside the left margin (except in the sharp
    margin-free limit); the target sits beyond the initial support; the
    arrival time is half the Bloch period.
    """

    gauss: TruncatedGaussianSpec
    chain: ChainSpec
    tilt: TiltParameters
    transfer_time: float

    def __post_init__(self) -> None:
        eta_left = -self.chain.left
        eta_right = self.chain.right - self.chain.target
        if eta_left != eta_right:
            raise ValueError("chain margins must be symmetric")
        if not (self.gauss.delta < eta_left or (self.gauss.delta == 0 and eta_left == 0)):
            raise ValueError("margin must exceed the truncation half-width")
        if self.gauss.support_lo < self.chain.left or self.gauss.support_hi > self.chain.right:
            raise ValueError("truncated support extends beyond the chain")
        if self.gauss.support_hi >= self.chain.target:
            raise ValueError("target lies inside the initial support")
        half_period = 0.5 * self.tilt.bloch_period
        if abs(self.transfer_time - half_period) > _REL_TOL * half_period:
            raise ValueError("transfer_time must be half the Bloch period")


def plan_transfer(
    p: int,
    beta: float,
    delta: int,
    coupling: float = 1.0,
    spacing: float = 1.0,
    margin: int | None = None,
) -> TransferPlan:
    """Plan a transfer from site 0 to site p > delta.

    Chooses force = -coupling / (spacing * p), so the half-period displacement
    -2 gamma equals p, and the chain [-margin, p + margin] with margin
    defaulting to 2 delta.  A margin of 0 is allowed only for delta = 0.
    """
    if p < 1:
        raise ValueError("p must be a positive site index")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta >= p:
        raise ValueError("delta must be smaller than p")
    if margin is None:
        margin = 2 * delta
    if margin < 0:
        raise ValueError("margin must be non-negative")
    force = -coupling / (spacing * p)
    chain = ChainSpec(
        coupling=coupling,
        force=force,
        left=-margin,
        right=p + margin,
        target=p,
        spacing=spacing,
    )
    tilt = tilt_parameters(chain)
    return TransferPlan(
        gauss=TruncatedGaussianSpec(beta=beta, delta=delta, center=0),
        chain=chain,
        tilt=tilt,
        transfer_time=0.5 * tilt.bloch_period,
    )


def run_transfer(plan: TransferPlan, window: int | None = None) -> tuple[LatticeState, float]:
    """Evolve the planned packet to the arrival time and score it.

    Returns (final state, probability within window of the target); the
    window defaults to the packet's own truncation half-width.
    """
    w = plan.gauss.delta if window is None else window
    psi0 = truncated_gaussian(plan.gauss, plan.chain)
    h = build_tilted_hamiltonian(plan.chain)
    final = evolve(psi0, h, plan.transfer_time)
    return final, success_probability(final, plan.chain.target, w)


@dataclass(frozen=True)
class SweepResult:
    """Success probabilities over a (beta, delta) grid at fixed tilt ratio.

    success[i, j] belongs to beta_grid[i], delta_grid[j]; cells whose setup
    or evolution failed hold NaN, with the reason in errors as
    (i, j, message).
    """

    ratio: float
    p: int
    coupling: float
    spacing: float
    beta_grid: np.ndarray
    delta_grid: np.ndarray
    success: np.ndarray
    errors: tuple

    def __post_init__(self) -> None:
        betas = np.asarray(self.beta_grid, dtype=np.float64)
        deltas = np.asarray(self.delta_grid, dtype=np.int64)
        succ = np.asarray(self.success, dtype=np.float64)
        if succ.shape != (betas.size, deltas.size):
            raise ValueError("success must have shape (len(beta_grid), len(delta_grid))")
        for name, arr in (("beta_grid", betas), ("delta_grid", deltas), ("success", succ)):
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def _sweep_cell(
    beta: float, delta: int, ratio: float, p: int, coupling: float, spacing: float
) -> float:
    force = coupling / ratio
    chain = ChainSpec(
        coupling=coupling,
        force=force,
        left=-2 * delta,
        right=p + 2 * delta,
        target=p,
        spacing=spacing,
    )
    gauss = TruncatedGaussianSpec(beta=beta, delta=delta, center=0)
    psi0 = truncated_gaussian(gauss, chain)
    tilt = tilt_parameters(chain)
    final = evolve(psi0, build_tilted_hamiltonian(chain), 0.5 * tilt.bloch_period)
    return success_probability(final, p, delta)


def sweep_beta_delta(
    beta_grid,
    delta_grid,
    ratio: float,
    p: int,
    coupling: float = 1.0,
    spacing: float = 1.0,
    workers: int = 1,
) -> SweepResult:
    """Success probability for every (beta, delta) pair at fixed coupling/force.

    ratio is coupling/force (negative for transfer toward positive sites);
    each cell uses its own margins 2 delta and collection half-width delta.
    Cell failures are recorded, not raised.
    """
    betas = np.asarray(beta_grid, dtype=np.float64)
    deltas = np.asarray(delta_grid, dtype=np.int64)
    if betas.ndim != 1 or betas.size == 0 or deltas.ndim != 1 or deltas.size == 0:
        raise ValueError("beta_grid and delta_grid must be non-empty 1d")
    if ratio == 0:
        raise ValueError("ratio must be nonzero")
    if workers < 1:
        raise ValueError("workers must be at least 1")

    cells = [(i, j) for i in range(betas.size) for j in range(deltas.size)]

    def compute(cell):
        i, j = cell
        try:
            return _sweep_cell(float(betas[i]), int(deltas[j]), ratio, p, coupling, spacing), None
        except Exception as exc:  # noqa: BLE001 - cell errors become data
            return math.nan, str(exc)

    if workers == 1:
        outcomes = [compute(cell) for cell in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(compute, cells))

    success = np.empty((betas.size, deltas.size))
    errors = []
    for (i, j), (value, err) in zip(cells, outcomes):
        success[i, j] = value
        if err is not None:
            errors.append((i, j, err))
    return SweepResult(
        ratio=ratio,
        p=p,
        coupling=coupling,
        spacing=spacing,
        beta_grid=betas,
        delta_grid=deltas,
        success=success,
        errors=tuple(errors),
    )


@dataclass(frozen=True)
class RouteLeg:
    """One force setting: where the packet went and what arrived.

    target is the rounded half-period displacement (negative for a tilt that
    pushes left); output_profile holds site probabilities at the final time.
    """

    force: float
    target: int
    times: np.ndarray
    sites: np.ndarray
    profiles: np.ndarray
    mean_positions: np.ndarray
    output_profile: np.ndarray
    success: float

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=np.float64)
        sites = np.asarray(self.sites, dtype=np.int64)
        profiles = np.asarray(self.profiles, dtype=np.float64)
        means = np.asarray(self.mean_positions, dtype=np.float64)
        profile = np.asarray(self.output_profile, dtype=np.float64)
        if profiles.shape != (times.size, sites.size):
            raise ValueError("profiles must have shape (n_times, n_sites)")
        if means.shape != times.shape:
            raise ValueError("mean_positions must match times")
        if profile.shape != sites.shape:
            raise ValueError("output_profile must match sites")
        for name, arr in (
            ("times", times),
            ("sites", sites),
            ("profiles", profiles),
            ("mean_positions", means),
            ("output_profile", profile),
        ):
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class RouteResult:
    """One packet shape routed to several destinations by the force alone."""

    beta: float
    delta: int
    coupling: float
    spacing: float
    legs: tuple


def _route_leg(
    force: float,
    beta: float,
    delta: int,
    coupling: float,
    spacing: float,
    lengths,
    samples: int,
) -> RouteLeg:
    displacement = -coupling / (spacing * force)
    target = round(displacement)
    chain = ChainSpec(
        coupling=coupling,
        force=force,
        left=min(0, target) - 2 * delta,
        right=max(0, target) + 2 * delta,
        target=max(target, 0),
        spacing=spacing,
    )
    gauss = TruncatedGaussianSpec(beta=beta, delta=delta, center=0)
    psi0 = gaussian_state(gauss, chain)
    tilt = tilt_parameters(chain)
    if lengths is None:
        times = np.linspace(0.0, 0.5 * tilt.bloch_period, samples)
    else:
        times = np.asarray(lengths, dtype=np.float64)
    traj = trajectory(psi0, build_tilted_hamiltonian(chain), times)
    profile = traj.profiles[-1]
    lo = target - delta - chain.left
    success = float(np.sum(profile[lo : lo + 2 * delta + 1]))
    return RouteLeg(
        force=force,
        target=target,
        times=traj.times,
        sites=traj.sites,
        profiles=traj.profiles,
        mean_positions=traj.mean_positions,
        output_profile=profile,
        success=success,
    )


def route(
    beta: float,
    delta: int,
    forces,
    lengths=None,
    coupling: float = 1.0,
    spacing: float = 1.0,
    samples: int = 129,
    workers: int = 1,
) -> RouteResult:
    """Send the same truncated Gaussian to a different site per force value.

    Each leg gets its own chain [min(0, m) - 2 delta, max(0, m) + 2 delta]
    around its rounded displacement m.  With lengths = None every leg is
    sampled on its own half Bloch period (samples points); an explicit
    lengths grid is shared by all legs.
    """
    force_list = [float(f) for f in forces]
    if not force_list:
        raise ValueError("forces must be non-empty")
    if any(f == 0 for f in force_list):
        raise ValueError("forces must be nonzero")
    if samples < 2:
        raise ValueError("samples must be at least 2")
    if workers < 1:
        raise ValueError("workers must be at least 1")

    def compute(force):
        return _route_leg(force, beta, delta, coupling, spacing, lengths, samples)

    if workers == 1:
        legs = [compute(f) for f in force_list]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            legs = list(pool.map(compute, force_list))
    return RouteResult(
        beta=beta, delta=delta, coupling=coupling, spacing=spacing, legs=tuple(legs)
    )


def write_sweep_csv(sweep: SweepResult, path) -> None:
    """Rows beta,delta,success_probability in beta-major order; NaN for failed cells."""
    with open(path, "w", newline="") as fh:
        fh.write("beta,delta,success_probability\n")
        for i, beta in enumerate(sweep.beta_grid):
            for j, delta in enumerate(sweep.delta_grid):
                fh.write(f"{float(beta)!r},{int(delta)},{float(sweep.success[i, j])!r}\n")


def write_sweep_json(sweep: SweepResult, path) -> None:
    cells = [
        [None if math.isnan(v) else v for v in row] for row in sweep.success.tolist()
    ]
    payload = {
        "ratio": sweep.ratio,
        "p": sweep.p,
        "coupling": sweep.coupling,
        "spacing": sweep.spacing,
        "beta_grid": sweep.beta_grid.tolist(),
        "delta_grid": sweep.delta_grid.tolist(),
        "success_probability": cells,
        "errors": [list(e) for e in sweep.errors],
    }
    with open(path, "w", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_output_profile_csv(result: RouteResult, path) -> None:
    """Rows force,n,P_out: arrival-time site probabilities for every leg."""
    with open(path, "w", newline="") as fh:
        fh.write("force,n,P_out\n")
        for leg in result.legs:
            for n, p_out in zip(leg.sites, leg.output_profile):
                fh.write(f"{leg.force!r},{int(n)},{float(p_out)!r}\n")


def write_route_mean_csv(result: RouteResult, path) -> None:
    """Rows force,L,mean_position tracing each leg's packet centre.

    The time axis is labelled L: in the waveguide-array reading of the
    dynamics the propagation time plays the role of device length.
    """
    with open(path, "w", newline="") as fh:
        fh.write("force,L,mean_position\n")
        for leg in result.legs:
            for t, m in zip(leg.times, leg.mean_positions):
                fh.write(f"{leg.force!r},{float(t)!r},{float(m)!r}\n")


def write_route_json(result: RouteResult, path) -> None:
    payload = {
        "beta": result.beta,
        "delta": result.delta,
        "coupling": result.coupling,
        "spacing": result.spacing,
        "legs": [
            {
                "force": leg.force,
                "target": leg.target,
                "success": leg.success,
                "times": leg.times.tolist(),
                "sites": leg.sites.tolist(),
                "mean_positions": leg.mean_positions.tolist(),
                "output_profile": leg.output_profile.tolist(),
            }
            for leg in result.legs
        ],
    }
    with open(path, "w", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
