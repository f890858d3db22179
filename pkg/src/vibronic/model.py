"""Domain types: vibrational modes, molecules, and Huang-Rhys ingestion.

All spectral energies (mode quanta, zero-phonon line) are in cm^-1.
Huang-Rhys factors are dimensionless, so everything downstream of
`hr_from_gradient` is unit-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

__all__ = [
    "Mode",
    "Molecule",
    "ValidationError",
    "hr_from_gradient",
    "validate_molecule",
    "prune_modes",
    "DEFAULT_PRUNE_THRESHOLD",
]

# Modes with S below this contribute factors indistinguishable from 1
# and are conventionally dropped.
DEFAULT_PRUNE_THRESHOLD = 1e-5


class ValidationError(ValueError):
    """A molecule or mode violates a structural invariant."""


@dataclass(frozen=True)
class Mode:
    """One vibrational normal mode.

    Parameters
    ----------
    index : int
        1-based ordinal of the mode within its molecule.
    energy : float
        Vibrational quantum energy in cm^-1; must be positive.
    huang_rhys : float
        Dimensionless Huang-Rhys factor S >= 0, the mean number of
        quanta excited in this mode by the electronic transition.
    """

    index: int
    energy: float
    huang_rhys: float


@dataclass(frozen=True)
class Molecule:
    """A named set of modes plus the zero-phonon-line energy.

    `transition` selects the sign of the vibrational energy offsets:
    "absorption" adds quanta above e00, "emission" subtracts.
    """

    name: str
    e00: float
    transition: str  # "absorption" | "emission"
    modes: tuple[Mode, ...] = field(default_factory=tuple)
    atom_count: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def energies(self):
        return [m.energy for m in self.modes]

    @property
    def huang_rhys(self):
        return [m.huang_rhys for m in self.modes]

    @property
    def sign(self) -> int:
        return -1 if self.transition == "emission" else +1


def hr_from_gradient(omega: float, gradient: float) -> float:
    """Huang-Rhys factor from an excited-state gradient along a normal mode.

    Uses the displaced-oscillator relations dQ = G/omega and
    S = omega * dQ^2 / 2 with hbar = 1, i.e. S = G^2 / (2 omega).
    `omega` and `gradient` must share one consistent unit system
    (atomic units recommended); S itself is dimensionless.

    Raises
    ------
    ValueError
        If omega is not a positive finite number.
    """
    if not math.isfinite(omega) or omega <= 0:
        raise ValueError(f"omega must be positive and finite, got {omega!r}")
    if not math.isfinite(gradient):
        raise ValueError(f"gradient must be finite, got {gradient!r}")
    # omega * (G/omega)^2 / 2 simplified; exact for all omega > 0
    return gradient * gradient / (2.0 * omega)


def validate_molecule(
    m: Molecule, prune_threshold: float = DEFAULT_PRUNE_THRESHOLD
) -> Molecule:
    """Check all structural invariants of a molecule.

    Returns the molecule unchanged on success.  Every violated
    invariant is collected and reported together, each naming the
    offending mode index and field.

    Notes
    -----
    A molecule with zero modes is legal (its spectrum is a pure 0-0
    line).  Modes with S <= `prune_threshold` are permitted here; use
    `prune_modes` to drop them.
    """
    problems: list[str] = []

    if m.transition not in ("absorption", "emission"):
        problems.append(f"transition must be 'absorption' or 'emission', got {m.transition!r}")
    if not math.isfinite(m.e00) or m.e00 < 0:
        problems.append(f"e00 must be >= 0, got {m.e00!r}")

    seen: set[int] = set()
    for k, mode in enumerate(m.modes):
        if not math.isfinite(mode.energy) or mode.energy <= 0:
            problems.append(f"mode {mode.index}: energy > 0 violated (got {mode.energy!r})")
        if not math.isfinite(mode.huang_rhys) or mode.huang_rhys < 0:
            problems.append(
                f"mode {mode.index}: huang_rhys >= 0 violated (got {mode.huang_rhys!r})"
            )
        if mode.index in seen:
            problems.append(f"mode {mode.index}: duplicate index")
        seen.add(mode.index)
        if mode.index != k + 1:
            problems.append(
                f"mode at position {k}: index must be {k + 1}, got {mode.index}"
            )

    if m.atom_count is not None:
        if m.atom_count < 1:
            problems.append(f"atom_count must be positive, got {m.atom_count}")
        else:
            bound = 3 * m.atom_count - 5
            if len(m.modes) > bound:
                problems.append(
                    f"{len(m.modes)} modes exceeds 3M-5 = {bound} for {m.atom_count} atoms"
                )

    if problems:
        raise ValidationError(f"invalid molecule {m.name!r}: " + "; ".join(problems))
    return m


def prune_modes(m: Molecule, threshold: float = DEFAULT_PRUNE_THRESHOLD) -> Molecule:
    """Drop modes with Huang-Rhys factor <= threshold, keeping order.

    Surviving modes are reindexed contiguously from 1.  Idempotent:
    pruning twice at the same threshold is a no-op the second time.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    kept = [mode for mode in m.modes if mode.huang_rhys > threshold]
    reindexed = tuple(replace(mode, index=i + 1) for i, mode in enumerate(kept))
    return replace(m, modes=reindexed)
