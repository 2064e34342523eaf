"""Bands, thresholds and bound-state identification.

Grid energies use the grid-shifted convention (on-site 4, hopping -1). A
straight wire of ``w`` sites then carries propagating waves above
``E_t = 2 - 2 cos(pi/(w+1))`` and, by sublattice symmetry, below ``8 - E_t``.
The Bloch band of a thin chain is ``[2, 6]`` with centre ``E_c = 4``; the
chain-centred model (on-site 0, hopping +1) maps to it by ``E -> 4 - E``.

How a grid state is called bound:

* below ``E_t`` (or above ``8 - E_t``): always. Hard walls only raise
  eigenvalues, so every such level of the finite grid implies a bound state
  of the infinite wire;
* between ``E_t`` and the half-guide threshold ``4 E_t`` (or the mirror
  window): only if the state also survives a change of system size. A
  companion grid with longer arms is solved, and the state must reappear
  there with eigenvector overlap >= 0.95 on the shared sites and relative
  energy drift <= 2 %.

Both cases also require the localization fraction within the report radius
to be at least 0.5.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .eigensolve import DENSE_LIMIT, Spectrum, eig_dense_symmetric, eig_extremal_lanczos
from .errors import FitDomainError, NeedVectors, StateNotTracked
from .lattice_grid import (
    GridMask,
    RasterPolicy,
    StemChainSpec,
    build_laplacian,
    build_star_chain_matrix,
    build_star_mask,
    build_stem_chain_matrix,
)
from .sparse import SparseSymMatrix
from .star_chain import Convention, StarChainSpec, bound_energies, stem_bound_energies

GRID_CENTER = 4.0
CHAIN_DRIFT_TOL = 1e-6
GRID_DRIFT_TOL = 0.02
TRACK_OVERLAP = 0.95
DEFAULT_GROW = 12


class BandKind(enum.Enum):
    PROPAGATING_THRESHOLD = "propagating_threshold"
    BLOCH_BAND = "bloch_band"


@dataclass(frozen=True)
class BandDescriptor:
    """Continuum of a lead, as seen by bound-state classification.

    ``band_low``/``band_high`` bound the propagating energies; ``e_threshold``
    is the lowest of them. ``half_guide`` is set for thick wires and marks the
    top of the window where decoupled states can be embedded.
    """

    kind: BandKind
    e_threshold: float
    band_low: float
    band_high: float
    band_center: float
    convention: Convention
    half_guide: float | None = None
    thickness: int | None = None

    def __post_init__(self):
        if not self.band_low <= self.band_center <= self.band_high:
            raise ValueError("band centre must lie inside the band")
        if abs(self.band_center - 0.5 * (self.band_low + self.band_high)) > 1e-12:
            raise ValueError("band centre must be the midpoint of the band")

    def describe(self) -> dict:
        out = {
            "kind": self.kind.value,
            "e_threshold": self.e_threshold,
            "band_low": self.band_low,
            "band_high": self.band_high,
            "band_center": self.band_center,
            "convention": self.convention.value,
        }
        if self.half_guide is not None:
            out["half_guide_threshold"] = self.half_guide
        if self.thickness is not None:
            out["thickness"] = self.thickness
        return out


def propagation_threshold(thickness: int) -> float:
    """Lowest transverse-mode energy of a hard-wall strip ``thickness`` sites wide."""
    if thickness < 1:
        raise ValueError("thickness must be at least 1")
    return 2.0 - 2.0 * math.cos(math.pi / (thickness + 1))


def transverse_mode(thickness: int, m: int) -> float:
    return 2.0 - 2.0 * math.cos(m * math.pi / (thickness + 1))


def half_guide_threshold(thickness: int) -> float:
    return 4.0 * propagation_threshold(thickness)


def bloch_band(convention=Convention.CHAIN_CENTERED) -> BandDescriptor:
    convention = Convention(convention)
    if convention is Convention.CHAIN_CENTERED:
        return BandDescriptor(BandKind.BLOCH_BAND, -2.0, -2.0, 2.0, 0.0, convention)
    return BandDescriptor(BandKind.BLOCH_BAND, 2.0, 2.0, 6.0, GRID_CENTER, convention)


def grid_band(thickness: int) -> BandDescriptor:
    et = propagation_threshold(thickness)
    return BandDescriptor(
        BandKind.PROPAGATING_THRESHOLD,
        et,
        et,
        2 * GRID_CENTER - et,
        GRID_CENTER,
        Convention.GRID_SHIFTED,
        half_guide=4.0 * et if thickness >= 2 else None,
        thickness=int(thickness),
    )


def chain_to_grid(energy):
    return GRID_CENTER - np.asarray(energy) if np.ndim(energy) else GRID_CENTER - energy


def grid_to_chain(energy):
    return GRID_CENTER - np.asarray(energy) if np.ndim(energy) else GRID_CENTER - energy


def site_radii(geometry) -> np.ndarray:
    """Distance of every site from the junction (graph distance on chains)."""
    if isinstance(geometry, GridMask):
        return geometry.radii()
    if isinstance(geometry, StemChainSpec):
        n = geometry.n_sites
        return np.concatenate([[0.0], np.arange(1, n + 1), np.arange(1, n + 1), [1.0]]).astype(float)
    if isinstance(geometry, StarChainSpec):
        ks = np.tile(np.arange(1, geometry.n_sites + 1), geometry.p)
        return np.concatenate([[0.0], ks]).astype(float)
    raise TypeError(f"unsupported geometry {type(geometry).__name__}")


def localization_fraction(vector, radii, radius: float) -> float:
    """Share of ``|phi|**2`` on sites within ``radius`` of the junction."""
    d = np.asarray(vector, dtype=float) ** 2
    total = d.sum()
    if total == 0:
        return 0.0
    return float(min(1.0, d[np.asarray(radii) <= radius + 1e-12].sum() / total))


@dataclass(frozen=True)
class DecayFit:
    kappa: float
    intercept: float
    r_squared: float
    k_min: int
    k_max: int


def decay_rate_fit(amplitudes, arm_sites: Sequence[int], fit_range: tuple[int, int] = (2, 10)) -> DecayFit:
    """Least-squares slope of ``ln|phi_k|`` against ``k``, negated.

    ``arm_sites[k]`` is the index of the site ``k`` steps out along an arm
    (``arm_sites[0]`` the centre). ``kappa > 0`` means decay.
    """
    k_min, k_max = fit_range
    if k_min < 0 or k_max <= k_min:
        raise FitDomainError(f"bad fit range {fit_range}")
    if k_max >= len(arm_sites):
        raise FitDomainError(f"fit range {fit_range} runs past the arm end ({len(arm_sites) - 1})")
    amps = np.asarray(amplitudes, dtype=float)
    ks = np.arange(k_min, k_max + 1, dtype=float)
    phi = np.abs(amps[np.asarray(arm_sites)[k_min : k_max + 1]])
    if np.any(phi == 0.0):
        raise FitDomainError("zero amplitude inside the fit range")
    y = np.log(phi)
    kc = ks - ks.mean()
    yc = y - y.mean()
    slope = float(kc @ yc / (kc @ kc))
    intercept = float(y.mean() - slope * ks.mean())
    ss_tot = float(yc @ yc)
    ss_res = float(np.sum((y - (intercept + slope * ks)) ** 2))
    r2 = 1.0 if ss_tot <= 1e-300 else 1.0 - ss_res / ss_tot
    kappa = -slope
    if kappa == 0.0:
        kappa = 0.0  # no negative zero in reports
    return DecayFit(kappa, intercept, r2, k_min, k_max)


@dataclass
class BoundState:
    index: int
    energy: float
    energy_over_et: float
    energy_over_ec: float
    localization: float
    side: str
    kind: str
    decay_rate: float | None = None
    decay_rate_predicted: float | None = None
    overlap: float | None = None
    drift: float | None = None

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}


@dataclass
class BoundLevel:
    energy: float
    energy_over_et: float
    energy_over_ec: float
    multiplicity: int
    side: str
    kind: str
    indices: list[int]

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class BoundStateReport:
    states: list[BoundState]
    levels: list[BoundLevel]
    band: BandDescriptor
    geometry: dict
    solver: dict
    criterion: dict
    notes: list[str] = field(default_factory=list)

    def counts(self) -> dict:
        """Number of distinct levels per region (degenerate partners merged)."""
        out: dict[str, int] = {}
        for lv in self.levels:
            key = f"{lv.side}:{lv.kind}"
            out[key] = out.get(key, 0) + 1
        return out

    def as_dict(self) -> dict:
        return {
            "states": [s.as_dict() for s in self.states],
            "levels": [lv.as_dict() for lv in self.levels],
            "band": self.band.describe(),
            "geometry": self.geometry,
            "solver": self.solver,
            "criterion": self.criterion,
            "counts": self.counts(),
            "notes": list(self.notes),
        }


def _grid_energy(energy: float, convention: Convention) -> float:
    return GRID_CENTER - energy if convention is Convention.CHAIN_CENTERED else energy


def _geometry_info(geometry) -> dict:
    if isinstance(geometry, GridMask):
        return {"type": "grid", **geometry.fingerprint()}
    if isinstance(geometry, StemChainSpec):
        return {"type": "stem", "sites": geometry.n_sites, "dimension": geometry.dimension}
    return {"type": "star", "arms": geometry.p, "sites": geometry.n_sites, "dimension": geometry.dimension}


def _chain_prediction(geometry) -> float | None:
    if isinstance(geometry, StemChainSpec):
        return -math.log(stem_bound_energies().decay_factor)
    if geometry.p >= 3:
        return math.log(math.sqrt(geometry.p - 1))
    return None


def _chain_fit_range(n_sites: int, fit_range) -> tuple[int, int] | None:
    lo, hi = fit_range
    hi = min(hi, n_sites // 2)
    return (lo, hi) if hi > lo else None


def _embedding(mask: GridMask, other: GridMask) -> np.ndarray:
    x, y = mask.coords()
    ox, oy = other.coords()
    key = {
        (int(round(2 * (a - other.origin[0]))), int(round(2 * (b - other.origin[1])))): i
        for i, (a, b) in enumerate(zip(ox, oy))
    }
    try:
        return np.array(
            [key[(int(round(2 * (a - mask.origin[0]))), int(round(2 * (b - mask.origin[1]))))] for a, b in zip(x, y)]
        )
    except KeyError as exc:
        raise ValueError("companion grid does not contain the original geometry") from exc


def track_states(
    spectrum: Spectrum, mask: GridMask, companion: Spectrum, companion_mask: GridMask, indices
) -> list[tuple[int, float, float]]:
    """Match states of ``mask`` to the enlarged ``companion_mask``.

    Returns ``(companion_index, overlap, energy)`` per requested index, the
    overlap being ``|<phi|psi>|`` restricted to the original sites.
    """
    emb = _embedding(mask, companion_mask)
    sub = companion.eigenvectors[emb, :]
    out = []
    for i in indices:
        ov = np.abs(spectrum.eigenvectors[:, i] @ sub)
        j = int(np.argmax(ov))
        out.append((j, float(ov[j]), float(companion.eigenvalues[j])))
    return out


def companion_mask(mask: GridMask, grow: int = DEFAULT_GROW) -> GridMask:
    """Same star with every arm lengthened by ``grow / 2`` lattice steps."""
    if mask.policy is None or mask.thickness is None:
        raise ValueError("companion grids need a mask built by build_star_mask")
    if grow % 2:
        raise ValueError("grow must be even so the junction stays on the same sublattice")
    return build_star_mask(mask.width + grow, mask.height + grow, mask.policy.p, mask.thickness, mask.policy)


def _cluster(states: list[BoundState], gap: float) -> list[BoundLevel]:
    levels: list[BoundLevel] = []
    for s in sorted(states, key=lambda s: s.energy):
        last = levels[-1] if levels else None
        if last and last.side == s.side and last.kind == s.kind and s.energy - last.energy <= gap * max(1, last.multiplicity):
            m = last.multiplicity
            last.energy = (last.energy * m + s.energy) / (m + 1)
            last.energy_over_et = (last.energy_over_et * m + s.energy_over_et) / (m + 1)
            last.energy_over_ec = (last.energy_over_ec * m + s.energy_over_ec) / (m + 1)
            last.multiplicity += 1
            last.indices.append(s.index)
        else:
            levels.append(BoundLevel(s.energy, s.energy_over_et, s.energy_over_ec, 1, s.side, s.kind, [s.index]))
    return levels


def find_bound_states(
    spectrum: Spectrum,
    band: BandDescriptor,
    geometry,
    localization_radius: float | None = None,
    *,
    companion: tuple[Spectrum, GridMask] | None = None,
    min_localization: float = 0.5,
    fit_range: tuple[int, int] | None = None,
    tol: float = 1e-9,
    degeneracy: float = 0.01,
) -> BoundStateReport:
    """Pick out the bound states of a solved geometry.

    Parameters
    ----------
    spectrum : Spectrum
        Eigenpairs of the geometry's Hamiltonian; vectors are required.
    band : BandDescriptor
        :func:`bloch_band` for chains, :func:`grid_band` for wires.
    geometry : StarChainSpec, StemChainSpec or GridMask
    localization_radius : float, optional
        Radius for the localization fraction. Defaults to 10 sites for chains
        and ``2 * thickness`` for grids.
    companion : (Spectrum, GridMask), optional
        Solution of an enlarged copy of the grid (see :func:`companion_mask`).
        Needed to accept states embedded above ``E_t``.
    degeneracy : float
        Grid states closer than ``degeneracy * E_t`` are merged into one level.
    """
    if not spectrum.has_vectors:
        raise NeedVectors("bound-state analysis needs eigenvectors")
    radii = site_radii(geometry)
    is_grid = isinstance(geometry, GridMask)
    notes: list[str] = []
    if is_grid:
        thickness = geometry.thickness or 1
        radius = float(localization_radius if localization_radius is not None else 2 * thickness)
        e_t = band.e_threshold
    else:
        radius = float(localization_radius if localization_radius is not None else 10)
        e_t = propagation_threshold(1)
    convention = band.convention

    states: list[BoundState] = []
    values = spectrum.eigenvalues
    vectors = spectrum.eigenvectors

    def annotate(i: int, side: str, kind: str) -> BoundState:
        e = float(values[i])
        eg = _grid_energy(e, convention)
        return BoundState(
            index=int(i),
            energy=e,
            energy_over_et=eg / e_t,
            energy_over_ec=eg / GRID_CENTER,
            localization=localization_fraction(vectors[:, i], radii, radius),
            side=side,
            kind=kind,
        )

    if band.kind is BandKind.BLOCH_BAND:
        for i, e in enumerate(values):
            if e < band.band_low - tol or e > band.band_high + tol:
                eg = _grid_energy(float(e), convention)
                side = "lower" if eg < GRID_CENTER else "upper"
                states.append(annotate(i, side, "outside_band"))
        pred = _chain_prediction(geometry)
        rng = _chain_fit_range(geometry.n_sites, fit_range or (2, 10))
        for s in states:
            s.decay_rate_predicted = pred
            if rng is not None:
                try:
                    s.decay_rate = decay_rate_fit(vectors[:, s.index], geometry.arm_sites(0), rng).kappa
                except FitDomainError:
                    s.decay_rate = None
        criterion = {
            "rule": "energy outside the Bloch band",
            "band": [band.band_low, band.band_high],
            "tolerance": tol,
            "localization_radius": radius,
        }
    else:
        low, high = band.band_low, band.band_high
        embedded_top = band.half_guide
        candidates = []
        for i, e in enumerate(values):
            e = float(e)
            if e < low - tol:
                states.append(annotate(i, "lower", "below_threshold"))
            elif e > high + tol:
                states.append(annotate(i, "upper", "below_threshold"))
            elif embedded_top is not None and e < embedded_top:
                candidates.append((i, "lower"))
            elif embedded_top is not None and e > 2 * GRID_CENTER - embedded_top:
                candidates.append((i, "upper"))
        states = [s for s in states if s.localization >= min_localization]
        if candidates and companion is None:
            notes.append("states between E_t and the half-guide threshold were not assessed: no companion grid")
        elif candidates:
            c_spec, c_mask = companion
            tracked = track_states(spectrum, geometry, c_spec, c_mask, [i for i, _ in candidates])
            for (i, side), (j, ov, e2) in zip(candidates, tracked):
                e = float(values[i])
                ref = e if side == "lower" else 2 * GRID_CENTER - e
                ref2 = e2 if side == "lower" else 2 * GRID_CENTER - e2
                drift = abs(ref2 - ref) / abs(ref)
                st = annotate(i, side, "embedded")
                st.overlap, st.drift = ov, drift
                if ov >= TRACK_OVERLAP and drift <= GRID_DRIFT_TOL and st.localization >= min_localization:
                    states.append(st)
        if companion is not None and candidates == []:
            notes.append("no candidates above threshold")
        _annotate_grid_decay(states, geometry, band, vectors)
        criterion = {
            "rule": "below E_t (or above 8 - E_t); embedded states up to the half-guide threshold must survive a size change",
            "e_threshold": band.e_threshold,
            "half_guide_threshold": band.half_guide,
            "localization_radius": radius,
            "min_localization": min_localization,
            "track_overlap": TRACK_OVERLAP,
            "track_drift": GRID_DRIFT_TOL,
            "companion_grid": None if companion is None else [companion[1].width, companion[1].height],
        }
    states.sort(key=lambda s: s.energy)
    gap = degeneracy * e_t if is_grid else 1e-8
    levels = _cluster(states, gap)
    return BoundStateReport(
        states=states,
        levels=levels,
        band=band,
        geometry=_geometry_info(geometry),
        solver=spectrum.metadata(),
        criterion=criterion,
        notes=notes,
    )


def _annotate_grid_decay(states, mask: GridMask, band: BandDescriptor, vectors) -> None:
    if mask.policy is None:
        return
    axis = mask.arm_axis_sites(0)
    start = int(math.ceil(mask.junction_radius or 2))
    stop = min(start + 8, len(axis) - 3)
    w = mask.thickness or 1
    for s in states:
        eps = s.energy if s.side == "lower" else 2 * GRID_CENTER - s.energy
        channel = transverse_mode(w, 2 if s.kind == "embedded" else 1)
        if eps < channel:
            s.decay_rate_predicted = math.acosh(1.0 + (channel - eps) / 2.0)
        if stop > start:
            try:
                s.decay_rate = decay_rate_fit(vectors[:, s.index], axis, (start, stop)).kappa
            except FitDomainError:
                s.decay_rate = None


# ---------------------------------------------------------------------------
# solving helpers

def solve(matrix: SparseSymMatrix, solver: str = "auto", count: int = 2, seed: int = 0, tol: float = 1e-10) -> Spectrum:
    """Dense full spectrum when it fits, Lanczos extremes otherwise."""
    if solver == "dense" or (solver == "auto" and matrix.dim <= DENSE_LIMIT):
        return eig_dense_symmetric(matrix)
    if solver not in ("auto", "lanczos"):
        raise ValueError(f"unknown solver {solver!r}")
    return eig_extremal_lanczos(matrix, count=count, which="both", tol=tol, seed=seed)


@dataclass
class GridAnalysis:
    mask: GridMask
    matrix: SparseSymMatrix
    spectrum: Spectrum
    band: BandDescriptor
    report: BoundStateReport
    companion: GridMask | None = None


def analyze_grid(mask: GridMask, grow: int | None = DEFAULT_GROW, localization_radius=None) -> GridAnalysis:
    """Solve a star mask, and an enlarged companion, then classify its states."""
    matrix = build_laplacian(mask)
    spectrum = eig_dense_symmetric(matrix)
    band = grid_band(mask.thickness or 1)
    comp = None
    comp_mask = None
    if grow and band.half_guide is not None and mask.policy is not None:
        comp_mask = companion_mask(mask, grow)
        comp = (eig_dense_symmetric(build_laplacian(comp_mask)), comp_mask)
    report = find_bound_states(spectrum, band, mask, localization_radius, companion=comp)
    return GridAnalysis(mask, matrix, spectrum, band, report, comp_mask)


# ---------------------------------------------------------------------------
# size stability and mesh refinement

@dataclass
class SizeStabilityResult:
    sizes: list
    energies: list[float]
    max_drift: float
    tolerance: float
    relative: bool

    @property
    def stable(self) -> bool:
        return self.max_drift < self.tolerance

    def as_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "energies": list(self.energies),
            "max_drift": self.max_drift,
            "tolerance": self.tolerance,
            "relative": self.relative,
            "stable": self.stable,
        }


def star_chain_builder(p: int, convention=Convention.CHAIN_CENTERED):
    def build(n_sites):
        spec = StarChainSpec(p, int(n_sites), convention)
        return build_star_chain_matrix(spec), spec, bloch_band(convention)

    return build


def stem_chain_builder(convention=Convention.CHAIN_CENTERED):
    def build(n_sites):
        spec = StemChainSpec(int(n_sites), convention)
        return build_stem_chain_matrix(spec.n_sites, convention), spec, bloch_band(convention)

    return build


def grid_builder(p: int, thickness: int, policy: RasterPolicy | None = None):
    def build(size):
        w, h = (size, size) if np.ndim(size) == 0 else size
        mask = build_star_mask(int(w), int(h), p, thickness, policy)
        return build_laplacian(mask), mask, grid_band(thickness)

    return build


def _select_energy(selector, spectrum, geometry, band):
    if callable(selector):
        return selector(spectrum, geometry, band)
    if selector == "lowest":
        return float(spectrum.eigenvalues[0])
    if selector == "highest":
        return float(spectrum.eigenvalues[-1])
    if selector in ("bound_lowest", "bound_highest"):
        report = find_bound_states(spectrum, band, geometry)
        if not report.states:
            return None
        return report.states[0].energy if selector == "bound_lowest" else report.states[-1].energy
    raise ValueError(f"unknown state selector {selector!r}")


def size_stability(
    builder: Callable,
    sizes: Sequence,
    state_selector="bound_lowest",
    tolerance: float | None = None,
    relative: bool | None = None,
    solver: str = "auto",
    seed: int = 0,
) -> SizeStabilityResult:
    """Recompute one state's energy over a list of system sizes.

    ``builder(size)`` returns ``(matrix, geometry, band)``. The default
    tolerance is an absolute ``1e-6`` for chains and a relative 2 % for grids.
    """
    if len(sizes) < 2:
        raise ValueError("need at least two sizes")
    energies = []
    is_grid = None
    for size in sizes:
        matrix, geometry, band = builder(size)
        is_grid = isinstance(geometry, GridMask)
        spectrum = solve(matrix, solver, seed=seed)
        e = _select_energy(state_selector, spectrum, geometry, band)
        if e is None:
            raise StateNotTracked(size)
        energies.append(float(e))
    if relative is None:
        relative = bool(is_grid)
    if tolerance is None:
        tolerance = GRID_DRIFT_TOL if is_grid else CHAIN_DRIFT_TOL
    arr = np.array(energies)
    drift = float(arr.max() - arr.min())
    if relative:
        drift /= float(np.abs(arr).max()) if np.any(arr) else 1.0
    return SizeStabilityResult(list(sizes), energies, drift, float(tolerance), bool(relative))


@dataclass
class RefinementRow:
    factor: int
    size: int
    thickness: int
    n_sites: int
    energy: float
    e_threshold: float
    ratio: float
    solver: str


@dataclass
class RefinementTable:
    rows: list[RefinementRow]
    max_drift: float

    def as_dict(self) -> dict:
        return {"rows": [dict(r.__dict__) for r in self.rows], "max_drift": self.max_drift}


def mesh_refinement_check(
    size: int,
    p: int,
    thickness: int,
    factors: Sequence[int],
    policy: RasterPolicy | None = None,
    seed: int = 0,
) -> RefinementTable:
    """Scale grid and wire thickness together and compare ``E/E_t``.

    The lowest eigenvalue is the nodeless bound state whenever one exists.
    Drift is the largest relative change of ``E/E_t`` from the first factor.
    """
    rows = []
    for f in factors:
        if int(f) != f or f < 1:
            raise ValueError(f"refinement factors must be integers >= 1, got {f!r}")
        f = int(f)
        mask = build_star_mask(size * f, size * f, p, thickness * f, policy)
        matrix = build_laplacian(mask)
        if matrix.dim <= DENSE_LIMIT:
            e = float(eig_dense_symmetric(matrix, want_vectors=False).eigenvalues[0])
            how = "dense"
        else:
            e = float(eig_extremal_lanczos(matrix, 1, "lowest", seed=seed).eigenvalues[0])
            how = "lanczos"
        et = propagation_threshold(thickness * f)
        rows.append(RefinementRow(f, size * f, thickness * f, matrix.dim, e, et, e / et, how))
    base = rows[0].ratio
    drift = max(abs(r.ratio - base) / base for r in rows)
    return RefinementTable(rows, float(drift))


def chain_analytic(geometry):
    """Closed-form bound-state pair for a chain geometry, or ``None`` for p = 2."""
    if isinstance(geometry, StemChainSpec):
        return stem_bound_energies()
    return bound_energies(geometry.p)
