"""Closed-form bound states of star-shaped and stem tight-binding chains.

All energies here are dimensionless, in units of the hopping amplitude, for
the chain-centred model: zero on-site energy and ``+1`` between nearest
neighbours, so the Bloch band of a uniform chain is ``[-2, 2]``. Along an arm
the amplitudes obey ``phi[k+1] - E phi[k] + phi[k-1] = 0``.

With ``+1`` hopping the nodeless bound state sits *above* the band at
``+p/sqrt(p-1)``; its partner at ``-p/sqrt(p-1)`` flips sign from site to site.
The grid-shifted model (on-site 4, hopping -1) maps ``E -> 4 - E``, which puts
the nodeless state at the bottom of the spectrum. See :mod:`starbound.spectra`
for the conversions.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import InvalidArmCount, NotBound, NotNormalizable

BAND_EDGE_TOL = 1e-12
GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


class Convention(enum.Enum):
    """Energy origin and hopping sign of a tight-binding model."""

    CHAIN_CENTERED = "chain_centered"
    GRID_SHIFTED = "grid_shifted"


class EnergyClass(enum.Enum):
    IN_BAND = "in_band"
    BAND_EDGE = "band_edge"
    EVANESCENT = "evanescent"


@dataclass(frozen=True)
class StarChainSpec:
    """``p`` arms of ``n_sites`` sites each, joined at one central site."""

    p: int
    n_sites: int
    convention: Convention = Convention.CHAIN_CENTERED

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 2:
            raise InvalidArmCount(f"arm count must be an integer >= 2, got {self.p!r}")
        if int(self.n_sites) != self.n_sites or self.n_sites < 1:
            raise ValueError(f"sites per arm must be an integer >= 1, got {self.n_sites!r}")
        object.__setattr__(self, "convention", Convention(self.convention))

    @property
    def dimension(self) -> int:
        return self.p * self.n_sites + 1

    def site(self, arm: int, k: int) -> int:
        """Matrix index of site ``k`` (``k = 0`` is the centre) on ``arm``."""
        if k == 0:
            return 0
        if not (0 <= arm < self.p and 1 <= k <= self.n_sites):
            raise IndexError(f"no site {k} on arm {arm}")
        return 1 + arm * self.n_sites + (k - 1)

    def arm_sites(self, arm: int) -> list[int]:
        """Indices along ``arm`` ordered outward, starting with the centre."""
        return [0] + [self.site(arm, k) for k in range(1, self.n_sites + 1)]


@dataclass(frozen=True)
class TransferRoots:
    mu_plus: complex
    mu_minus: complex
    energy: float


@dataclass(frozen=True)
class RecurrenceSolution:
    """Coefficients of ``phi[k] = a_plus mu_plus**k + a_minus mu_minus**k``."""

    a_plus: float
    a_minus: float
    phi0: float


@dataclass(frozen=True)
class BoundStatePair:
    """Energies of the two bound states and the per-site decay factor.

    ``e_plus`` is the nodeless state and ``e_minus`` the sign-alternating one,
    in the chain-centred convention.
    """

    e_minus: float
    e_plus: float
    decay_factor: float


@dataclass(frozen=True)
class ResonancePrediction:
    """Transmission peaks and Bloch band edges of a resonator star, in GHz."""

    f_low: float
    f_high: float
    band_low: float
    band_high: float
    splitting: float


def _sign(parity) -> int:
    if parity in (1, "+", "plus"):
        return 1
    if parity in (-1, "-", "minus"):
        return -1
    raise ValueError(f"parity must be '+' or '-', got {parity!r}")


def transfer_roots(energy: float) -> TransferRoots:
    """Both roots of ``mu**2 - E mu + 1 = 0``.

    ``mu_plus`` carries the ``+`` branch of ``(E +/- sqrt(E**2 - 4)) / 2`` with
    the principal square root. Outside the band the smaller root is taken as
    the reciprocal of the larger one, which keeps ``mu_plus * mu_minus == 1``
    accurate for large ``|E|``.
    """
    e = float(energy)
    disc = e * e - 4.0
    if disc > 0.0:
        big = 0.5 * (e + math.copysign(math.sqrt(disc), e))
        small = 1.0 / big
        mp, mm = (big, small) if e > 0 else (small, big)
        return TransferRoots(complex(mp), complex(mm), e)
    root = cmath.sqrt(complex(disc, 0.0))
    return TransferRoots(0.5 * (e + root), 0.5 * (e - root), e)


def recurrence_solution(energy: float, phi0: float = 1.0) -> RecurrenceSolution:
    """Square-summable coefficient choice on an infinite arm.

    Keeps only the root inside the unit interval: ``A+ = 0`` above the band,
    ``A- = 0`` below it. There is no such solution for ``|E| <= 2``.
    """
    if abs(energy) <= 2.0 + BAND_EDGE_TOL:
        raise NotBound(f"E = {energy} is not outside the band [-2, 2]")
    if energy > 0:
        return RecurrenceSolution(0.0, phi0, phi0)
    return RecurrenceSolution(phi0, 0.0, phi0)


def bound_energies(p: int) -> BoundStatePair:
    """Bound-state energies ``+/- p / sqrt(p - 1)`` of a symmetric star."""
    if p < 2:
        raise InvalidArmCount(f"need at least 2 arms, got {p}")
    root = math.sqrt(p - 1)
    e = p / root
    return BoundStatePair(e_minus=-e, e_plus=e, decay_factor=1.0 / root)


def bound_amplitude(p: int, parity, k: int) -> float:
    """Amplitude at distance ``k`` from the centre, with ``phi0 = 1``.

    Identical on every arm. ``parity='+'`` is the nodeless state at
    ``E = +p/sqrt(p-1)``; ``'-'`` alternates in sign.
    """
    if p < 3:
        raise NotBound(f"a {p}-arm star has no bound state")
    if k < 0:
        raise ValueError("site index must be non-negative")
    s = _sign(parity)
    return float(s**k * (p - 1) ** (-k / 2.0))


def normalization_constant(p: int) -> float:
    """``phi0`` giving unit norm over infinitely long arms.

    The squared norm is ``phi0**2 * (1 + p * sum_k (p-1)**-k)``, a geometric
    series that only converges for ``p >= 3``.
    """
    if p <= 2:
        raise NotNormalizable(f"the {p}-arm state is not square-summable")
    return math.sqrt((p - 2) / (2.0 * p - 2.0))


def stem_bound_energies() -> BoundStatePair:
    """Bound states of an infinite chain with one extra site on its centre.

    The energies ``+/- sqrt(2 tau + 1)`` involve the golden ratio ``tau``;
    ``E**2`` is the positive root of ``x**2 - 4x - 1``.
    """
    e = math.sqrt(2.0 * GOLDEN_RATIO + 1.0)
    decay = 0.5 * (e - math.sqrt(2.0 * GOLDEN_RATIO - 3.0))
    return BoundStatePair(e_minus=-e, e_plus=e, decay_factor=decay)


def stem_amplitude(parity, site) -> float:
    """Stem-chain bound-state amplitude with ``phi0 = 1``.

    ``site`` is ``"center"``, ``"stem"`` or a positive integer ``k`` for the
    ``k``-th site along either infinite arm (both arms carry equal values).
    """
    s = _sign(parity)
    pair = stem_bound_energies()
    energy = pair.e_plus if s > 0 else pair.e_minus
    if site == "center":
        return 1.0
    if site == "stem":
        return 1.0 / energy
    k = int(site)
    if k < 1 or k != site:
        raise ValueError(f"arm site index must be a positive integer, got {site!r}")
    return float((s * pair.decay_factor) ** k)


def classify_energy(energy: float) -> EnergyClass:
    a = abs(energy)
    if abs(a - 2.0) <= BAND_EDGE_TOL:
        return EnergyClass.BAND_EDGE
    return EnergyClass.IN_BAND if a < 2.0 else EnergyClass.EVANESCENT


def predict_resonances(omega0: float, delta: float, p: int) -> ResonancePrediction:
    """Transmission peaks ``omega0 -/+ p delta / sqrt(p-1)`` for a resonator star.

    ``delta`` is the nearest-neighbour coupling; the band spans
    ``omega0 -/+ 2 delta``.
    """
    if p < 2:
        raise InvalidArmCount(f"need at least 2 arms, got {p}")
    if delta < 0:
        raise ValueError("coupling must be non-negative")
    split = delta * bound_energies(p).e_plus
    return ResonancePrediction(
        f_low=omega0 - split,
        f_high=omega0 + split,
        band_low=omega0 - 2.0 * delta,
        band_high=omega0 + 2.0 * delta,
        splitting=split,
    )
