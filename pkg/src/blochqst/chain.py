"""Finite tight-binding chain: geometry, site states, tridiagonal Hamiltonians.

Sites carry absolute integer labels: the chain spans [left, right] with
left <= 0 <= target <= right, so a linear tilt F*d*n keeps its meaning
regardless of where the chain is cut.  Hamiltonians are kept in
tridiagonal-compact storage (diagonal + one off-diagonal); the hopping part
is the uniform off-diagonal -coupling/4 and the tilt enters only on the
diagonal.  hbar = 1 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

NORM_TOL = 1e-12


@dataclass(frozen=True)
class ChainSpec:
    """Geometry and physics of a finite chain with right - left + 1 sites.

    coupling  nearest-neighbour coupling Delta > 0 (energy units, hbar = 1)
    force     linear tilt per unit length; 0 means an untilted (free) chain
    left      label of the first site, left <= 0
    right     label of the last site
    target    intended transfer destination, 0 <= target <= right
    spacing   lattice constant d > 0
    """

    coupling: float
    force: float
    left: int
    right: int
    target: int
    spacing: float = 1.0

    def __post_init__(self) -> None:
        if not self.coupling > 0:
            raise ValueError("coupling must be positive")
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        if self.left > 0:
            raise ValueError("left must be <= 0")
        if self.right < self.left:
            raise ValueError("right must be >= left")
        if not 0 <= self.target <= self.right:
            raise ValueError("target must satisfy 0 <= target <= right")

    @property
    def n_sites(self) -> int:
        return self.right - self.left + 1

    @property
    def sites(self) -> np.ndarray:
        """Absolute site labels left..right as an int array."""
        return np.arange(self.left, self.right + 1)

    def to_dict(self) -> dict:
        return {
            "coupling": self.coupling,
            "force": self.force,
            "spacing": self.spacing,
            "left": self.left,
            "right": self.right,
            "target": self.target,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ChainSpec":
        return cls(
            coupling=float(data["coupling"]),
            force=float(data["force"]),
            left=int(data["left"]),
            right=int(data["right"]),
            target=int(data["target"]),
            spacing=float(data.get("spacing", 1.0)),
        )


@dataclass(frozen=True)
class LatticeState:
    """Normalized state on a contiguous window of sites.

    amplitudes[i] is the amplitude on absolute site site_offset + i.
    The norm must be 1 within NORM_TOL; amplitudes are stored read-only.
    """

    amplitudes: np.ndarray
    site_offset: int

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must be a non-empty 1d array")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 beyond {NORM_TOL}")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_sites(self) -> int:
        return self.amplitudes.size

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.site_offset, self.site_offset + self.amplitudes.size)


def overlap(a: LatticeState, b: LatticeState) -> complex:
    """<a|b>, matching amplitudes by absolute site label.

    Sites covered by only one of the two windows contribute nothing.
    """
    lo = max(a.site_offset, b.site_offset)
    hi = min(a.site_offset + a.n_sites, b.site_offset + b.n_sites)
    if hi <= lo:
        return 0j
    seg_a = a.amplitudes[lo - a.site_offset : hi - a.site_offset]
    seg_b = b.amplitudes[lo - b.site_offset : hi - b.site_offset]
    return complex(np.vdot(seg_a, seg_b))


def align_global_phase(state: LatticeState) -> LatticeState:
    """Rotate the global phase so the largest-magnitude amplitude is real positive.

    Ties in magnitude are broken by the lowest site label, making the
    representative unique.
    """
    k = int(np.argmax(np.abs(state.amplitudes)))
    pivot = state.amplitudes[k]
    phase = pivot / abs(pivot)
    return LatticeState(state.amplitudes * np.conj(phase), state.site_offset)


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Real symmetric tridiagonal Hamiltonian in compact storage."""

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    dimension: int

    def __post_init__(self) -> None:
        diag = np.asarray(self.diagonal, dtype=np.float64)
        off = np.asarray(self.off_diagonal, dtype=np.float64)
        if self.dimension < 2:
            raise ValueError("dimension must be at least 2")
        if diag.shape != (self.dimension,):
            raise ValueError("diagonal length must equal dimension")
        if off.shape != (self.dimension - 1,):
            raise ValueError("off_diagonal length must equal dimension - 1")
        diag = diag.copy()
        off = off.copy()
        diag.flags.writeable = False
        off.flags.writeable = False
        object.__setattr__(self, "diagonal", diag)
        object.__setattr__(self, "off_diagonal", off)

    def dense(self) -> np.ndarray:
        h = np.diag(self.diagonal)
        idx = np.arange(self.dimension - 1)
        h[idx, idx + 1] = self.off_diagonal
        h[idx + 1, idx] = self.off_diagonal
        return h


def build_free_hamiltonian(chain: ChainSpec) -> HamiltonianMatrix:
    """Hopping-only Hamiltonian: off-diagonal elements -coupling/4, zero diagonal."""
    c = chain.n_sites
    if c < 2:
        raise ValueError("chain must have at least 2 sites")
    return HamiltonianMatrix(
        diagonal=np.zeros(c),
        off_diagonal=np.full(c - 1, -chain.coupling / 4.0),
        dimension=c,
    )


def build_tilted_hamiltonian(chain: ChainSpec) -> HamiltonianMatrix:
    """Hopping plus linear tilt: diagonal force * spacing * n on absolute sites n."""
    c = chain.n_sites
    if c < 2:
        raise ValueError("chain must have at least 2 sites")
    return HamiltonianMatrix(
        diagonal=chain.force * chain.spacing * chain.sites.astype(np.float64),
        off_diagonal=np.full(c - 1, -chain.coupling / 4.0),
        dimension=c,
    )
