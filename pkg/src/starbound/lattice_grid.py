"""Star-shaped wire masks on a square lattice and their Hamiltonians.

Two families of matrices are assembled here:

* the five-point discrete Laplacian ``-lap`` on an arbitrary occupancy mask,
  with hard-wall (Dirichlet) boundaries realised by omitting exterior sites;
* the exact star and stem chain matrices, in either energy convention.

Site ordering mirrors the block layout of the chain Hamiltonian: the centre
first, then each arm in angle order, each arm listed from the centre outward.
"""

from __future__ import annotations

import enum
import math
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import Disconnected, GeometryOverlap, InvalidArmCount, OutOfBounds
from .sparse import SparseSymMatrix
from .star_chain import Convention, StarChainSpec

_EPS = 1e-9


class RasterKind(enum.Enum):
    AXIS_ALIGNED = "axis_aligned"
    BRESENHAM_STAIRCASE = "bresenham_staircase"


class Corner(enum.Enum):
    """Which leg of a diagonal Bresenham step a thin staircase walks first."""

    MINOR_FIRST = "minor_first"
    MAJOR_FIRST = "major_first"


@dataclass(frozen=True)
class RasterPolicy:
    """How arms are drawn on the lattice.

    Arms of thickness 1 are 4-connected Bresenham staircases; ``corner``
    decides which lattice site fills each diagonal step. Thicker arms are
    digital bands: every site whose perpendicular offset ``s`` from the arm
    axis satisfies ``-h <= s < h`` with ``h = (w - 1)/2 + (|cos| + |sin|)/2``,
    which is the staircase line dilated to ``w`` sites across. Axis-aligned
    arms come out as exact rectangles either way.
    """

    kind: RasterKind
    angles: tuple[float, ...]
    corner: Corner = Corner.MINOR_FIRST

    def __post_init__(self):
        object.__setattr__(self, "kind", RasterKind(self.kind))
        object.__setattr__(self, "corner", Corner(self.corner))
        angles = tuple(float(a) for a in self.angles)
        object.__setattr__(self, "angles", angles)
        if len(angles) < 2:
            raise InvalidArmCount("need at least two arm angles")
        wrapped = sorted(a % (2 * math.pi) for a in angles)
        gaps = np.diff(wrapped + [wrapped[0] + 2 * math.pi])
        if np.min(gaps) < 1e-9:
            raise ValueError("arm angles must be distinct modulo 2*pi")
        if self.kind is RasterKind.AXIS_ALIGNED:
            for a in angles:
                q = a / (math.pi / 2)
                if abs(q - round(q)) > 1e-9:
                    raise ValueError(f"angle {a} is not a multiple of pi/2")

    @classmethod
    def default(cls, p: int, kind=RasterKind.BRESENHAM_STAIRCASE, corner=Corner.MINOR_FIRST):
        """Evenly spaced arms ``2*pi*j/p`` (quarter turns when axis-aligned)."""
        kind = RasterKind(kind)
        if p < 2:
            raise InvalidArmCount(f"need at least 2 arms, got {p}")
        if kind is RasterKind.AXIS_ALIGNED:
            if p > 4:
                raise InvalidArmCount("axis-aligned stars have at most 4 arms")
            angles = tuple(j * math.pi / 2 for j in range(p))
            if p == 2:
                angles = (0.0, math.pi)
        else:
            angles = tuple(2 * math.pi * j / p for j in range(p))
        return cls(kind, angles, corner)

    @property
    def p(self) -> int:
        return len(self.angles)

    def describe(self) -> dict:
        return {
            "kind": self.kind.value,
            "angles": [float(a) for a in self.angles],
            "corner": self.corner.value,
        }


@dataclass(frozen=True, eq=False)
class GridMask:
    """Occupied sites of a ``width x height`` lattice, indexed densely.

    ``occupancy`` and ``site_index`` are indexed ``[y, x]``; ``site_index`` is
    ``-1`` on empty sites. ``center`` is the occupied junction site and
    ``origin`` the (possibly half-integer) point the arms radiate from.
    ``arm_label`` and ``axial`` give, per site index, the arm a site was
    assigned to (``-1`` for the centre) and its coordinate along that arm.
    """

    width: int
    height: int
    occupancy: np.ndarray
    site_index: np.ndarray
    center: tuple[int, int]
    origin: tuple[float, float]
    arm_label: np.ndarray | None = None
    axial: np.ndarray | None = None
    thickness: int | None = None
    policy: RasterPolicy | None = None
    junction_radius: float | None = None
    _xy: tuple = field(init=False, repr=False)

    def __post_init__(self):
        n = int(self.occupancy.sum())
        idx = self.site_index[self.occupancy]
        if n == 0 or idx.min() != 0 or idx.max() != n - 1 or len(np.unique(idx)) != n:
            raise ValueError("site_index must enumerate the occupied sites densely")
        cx, cy = self.center
        if not self.occupancy[cy, cx]:
            raise ValueError("centre site is not occupied")
        ys, xs = np.nonzero(self.occupancy)
        order = self.site_index[ys, xs]
        x = np.empty(n, dtype=np.int64)
        y = np.empty(n, dtype=np.int64)
        x[order], y[order] = xs, ys
        object.__setattr__(self, "_xy", (x, y))

    @property
    def n_sites(self) -> int:
        return len(self._xy[0])

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Lattice ``(x, y)`` of every site, in index order."""
        return self._xy

    def radii(self) -> np.ndarray:
        """Euclidean distance of each site from ``origin``."""
        x, y = self._xy
        return np.hypot(x - self.origin[0], y - self.origin[1])

    def center_index(self) -> int:
        return int(self.site_index[self.center[1], self.center[0]])

    def arm_axis_sites(self, arm: int) -> list[int]:
        """Sites nearest the axis of ``arm``, ordered outward from the centre.

        The centre comes first. Requires a mask built by :func:`build_star_mask`.
        """
        if self.arm_label is None or self.policy is None:
            raise ValueError("mask carries no arm structure")
        theta = self.policy.angles[arm]
        x, y = self._xy
        rx, ry = x - self.origin[0], y - self.origin[1]
        t = rx * math.cos(theta) + ry * math.sin(theta)
        s = -rx * math.sin(theta) + ry * math.cos(theta)
        sel = np.flatnonzero(self.arm_label == arm)
        best: dict[int, tuple[float, float, int]] = {}
        for i in sel:
            key = int(math.floor(t[i] + 0.5))
            cand = (abs(s[i]), s[i], int(i))
            if key not in best or cand < best[key]:
                best[key] = cand
        out = [self.center_index()]
        for key in sorted(k for k in best if k > 0):
            out.append(best[key][2])
        return out

    def is_connected(self) -> bool:
        return _component_size(self.occupancy, self.center) == self.n_sites

    def fingerprint(self) -> dict:
        """Summary recorded in reports."""
        out = {
            "width": self.width,
            "height": self.height,
            "n_sites": self.n_sites,
            "center": [int(c) for c in self.center],
            "origin": [float(o) for o in self.origin],
        }
        if self.thickness is not None:
            out["thickness"] = int(self.thickness)
        if self.policy is not None:
            out["raster_policy"] = self.policy.describe()
        if self.junction_radius is not None:
            out["junction_radius"] = float(self.junction_radius)
        return out

    def to_text(self) -> str:
        """Plain-text form: ``"width height"`` then one ``.``/``#`` row per ``y``.

        Text row ``r`` is lattice row ``y = r``.
        """
        rows = ["".join("#" if v else "." for v in row) for row in self.occupancy]
        return f"{self.width} {self.height}\n" + "\n".join(rows) + "\n"


_NEIGHBOURS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _component_size(occ: np.ndarray, start: tuple[int, int]) -> int:
    h, w = occ.shape
    seen = np.zeros_like(occ, dtype=bool)
    sx, sy = start
    seen[sy, sx] = True
    queue = deque([(sx, sy)])
    count = 0
    while queue:
        x, y = queue.popleft()
        count += 1
        for dx, dy in _NEIGHBOURS:
            nx, ny = x + dx, y + dy
            if 0 <= nx < w and 0 <= ny < h and occ[ny, nx] and not seen[ny, nx]:
                seen[ny, nx] = True
                queue.append((nx, ny))
    return count


def _bfs_order(occ: np.ndarray, start: tuple[int, int]) -> list[tuple[int, int]]:
    h, w = occ.shape
    dist = np.full(occ.shape, -1)
    sx, sy = start
    dist[sy, sx] = 0
    queue = deque([(sx, sy)])
    while queue:
        x, y = queue.popleft()
        for dx, dy in _NEIGHBOURS:
            nx, ny = x + dx, y + dy
            if 0 <= nx < w and 0 <= ny < h and occ[ny, nx] and dist[ny, nx] < 0:
                dist[ny, nx] = dist[y, x] + 1
                queue.append((nx, ny))
    ys, xs = np.nonzero(occ)
    if np.any(dist[ys, xs] < 0):
        raise Disconnected("mask has more than one connected component")
    keys = sorted(zip(dist[ys, xs], ys, xs))
    return [(int(x), int(y)) for _, y, x in keys]


def mask_from_array(occupancy, center: tuple[int, int] | None = None) -> GridMask:
    """Wrap a boolean ``[y, x]`` array, ordering sites breadth-first from the centre.

    Without an explicit ``center`` the occupied site nearest the grid midpoint
    is used.
    """
    occ = np.asarray(occupancy, dtype=bool)
    if occ.ndim != 2 or not occ.any():
        raise ValueError("occupancy must be a non-empty 2-D array")
    h, w = occ.shape
    if center is None:
        ys, xs = np.nonzero(occ)
        d = (xs - (w - 1) / 2) ** 2 + (ys - (h - 1) / 2) ** 2
        j = np.lexsort((xs, ys, d))[0]
        center = (int(xs[j]), int(ys[j]))
    order = _bfs_order(occ, center)
    index = np.full(occ.shape, -1, dtype=np.int64)
    for i, (x, y) in enumerate(order):
        index[y, x] = i
    return GridMask(w, h, occ, index, center, (float(center[0]), float(center[1])))


def mask_from_text(text: str) -> GridMask:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    try:
        width, height = (int(v) for v in lines[0].split())
    except (ValueError, IndexError) as exc:
        raise ValueError("first line must be 'width height'") from exc
    rows = lines[1:]
    if len(rows) != height or any(len(r) != width for r in rows):
        raise ValueError(f"expected {height} rows of {width} characters")
    if any(set(r) - {".", "#"} for r in rows):
        raise ValueError("mask rows may only contain '.' and '#'")
    occ = np.array([[c == "#" for c in r] for r in rows], dtype=bool)
    return mask_from_array(occ)


def _pgm_tokens(data: bytes):
    pos = 0
    while True:
        m = re.compile(rb"\s*(#[^\n]*\n\s*)*").match(data, pos)
        pos = m.end()
        m = re.compile(rb"\S+").match(data, pos)
        if m is None:
            return
        yield m.group(), m.end()
        pos = m.end()


def mask_from_pgm(path) -> GridMask:
    """Read a P2 or P5 greymap; pixels equal to 0 are excluded sites.

    Image row ``r`` maps to lattice row ``y = r``.
    """
    data = Path(path).read_bytes()
    tokens = _pgm_tokens(data)
    magic, _ = next(tokens)
    width, _ = next(tokens)
    height, _ = next(tokens)
    maxval, end = next(tokens)
    width, height, maxval = int(width), int(height), int(maxval)
    count = width * height
    if magic == b"P2":
        vals = [int(next(tokens)[0]) for _ in range(count)]
        pix = np.array(vals, dtype=np.int64)
    elif magic == b"P5":
        dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
        start = end + 1
        pix = np.frombuffer(data, dtype=dtype, count=count, offset=start).astype(np.int64)
    else:
        raise ValueError(f"unsupported PGM magic {magic!r}")
    return mask_from_array(pix.reshape(height, width) != 0)


def _origin_coord(extent: int, thickness: int) -> float:
    """Arm-axis coordinate nearest the grid midpoint with the right parity.

    Odd thickness puts the axis on lattice sites, even thickness between them.
    """
    mid = (extent - 1) / 2.0
    half = (thickness - 1) / 2.0
    lo = math.floor(mid - half) + half
    hi = math.ceil(mid - half) + half
    return min((lo, hi), key=lambda v: (abs(v - mid), v))


def _staircase(origin: tuple[int, int], theta: float, corner: Corner, limit: float) -> list[tuple[int, int]]:
    """4-connected Bresenham line from ``origin`` up to axial distance ``limit``."""
    c, s = math.cos(theta), math.sin(theta)
    c = 0.0 if abs(c) < 1e-12 else c
    s = 0.0 if abs(s) < 1e-12 else s
    major_x = abs(c) >= abs(s) - 1e-12
    ox, oy = origin
    pts = [(ox, oy)]
    x = y = 0
    k = 0
    while True:
        k += 1
        if major_x:
            nx = k if c > 0 else -k
            ny = int(math.floor(nx * s / c + 0.5))
        else:
            ny = k if s > 0 else -k
            nx = int(math.floor(ny * c / s + 0.5))
        if nx != x and ny != y:
            if (corner is Corner.MAJOR_FIRST) == major_x:
                step = (nx, y)
            else:
                step = (x, ny)
            if step[0] * c + step[1] * s > limit + _EPS:
                break
            pts.append((ox + step[0], oy + step[1]))
        if nx * c + ny * s > limit + _EPS:
            break
        pts.append((ox + nx, oy + ny))
        x, y = nx, ny
    return pts


def build_star_mask(
    width: int,
    height: int,
    p: int,
    thickness: int,
    policy: RasterPolicy | None = None,
    arm_length: float | None = None,
) -> GridMask:
    """Rasterize a ``p``-armed star of wires of ``thickness`` sites.

    Arms radiate from the grid centre at ``policy.angles`` and, unless
    ``arm_length`` is given, run until they meet the grid border. With an
    explicit ``arm_length`` (measured along the arm axis) an arm that would
    leave the grid raises :class:`OutOfBounds`. Arms that touch outside the
    central junction raise :class:`GeometryOverlap`.
    """
    if thickness < 1:
        raise ValueError("thickness must be at least 1 site")
    if policy is None:
        policy = RasterPolicy.default(p)
    if policy.p != p:
        raise InvalidArmCount(f"policy has {policy.p} angles for {p} arms")
    w = int(thickness)
    ox, oy = _origin_coord(width, w), _origin_coord(height, w)

    # Draw on a padded canvas so an explicit arm length can be checked
    # against the real grid afterwards.
    reach = max(width, height) + (arm_length or 0) + w + 2
    pad = int(math.ceil(reach))
    cw, ch = width + 2 * pad, height + 2 * pad
    limit = float(arm_length) if arm_length is not None else float(2 * reach)
    cox, coy = ox + pad, oy + pad
    X, Y = np.meshgrid(np.arange(cw), np.arange(ch))
    rx, ry = X - cox, Y - coy

    arms = []
    for theta in policy.angles:
        c, s = math.cos(theta), math.sin(theta)
        c = 0.0 if abs(c) < 1e-12 else c
        s = 0.0 if abs(s) < 1e-12 else s
        region = np.zeros((ch, cw), dtype=bool)
        if w == 1:
            for px, py in _staircase((int(round(cox)), int(round(coy))), theta, policy.corner, limit):
                if 0 <= px < cw and 0 <= py < ch:
                    region[py, px] = True
        else:
            t = rx * c + ry * s
            n = -rx * s + ry * c
            h = (w - 1) / 2.0 + (abs(c) + abs(s)) / 2.0
            region = (t >= -(w - 1) / 2.0 - _EPS) & (t <= limit + _EPS) & (n >= -h - _EPS) & (n < h - _EPS)
        arms.append(region)

    inside = np.zeros((ch, cw), dtype=bool)
    inside[pad : pad + height, pad : pad + width] = True
    if arm_length is not None:
        for j, region in enumerate(arms):
            if np.any(region & ~inside):
                raise OutOfBounds(f"arm {j} of length {arm_length} leaves the {width}x{height} grid")
    else:
        # clip each arm to the part still connected to the centre
        arms = [_clip_connected(region & inside, (cox, coy)) for region in arms]

    gaps = sorted(a % (2 * math.pi) for a in policy.angles)
    gaps = np.diff(gaps + [gaps[0] + 2 * math.pi])
    # neighbouring arms meet near the bisector, and each arm's back cap
    # fills a square of half-side w/2 around the origin
    junction = max(
        (w / 2.0 + 1.0) / math.sin(min(float(np.min(gaps)), math.pi) / 2.0),
        math.hypot(w / 2.0, w / 2.0 + 1.0),
    ) + 1.0
    dist = np.hypot(rx, ry)
    centre = (np.abs(rx) < 0.5 + _EPS) & (np.abs(ry) < 0.5 + _EPS)
    bodies = [region & ~centre for region in arms]
    reach = [float(dist[region].max()) if region.any() else 0.0 for region in arms]
    for i in range(len(arms)):
        for j in range(i + 1, len(arms)):
            touch = bodies[i] & bodies[j]
            for dx, dy in _NEIGHBOURS:
                touch |= bodies[i] & np.roll(np.roll(bodies[j], dy, axis=0), dx, axis=1)
            if not touch.any():
                continue
            r_touch = float(dist[touch].max())
            if r_touch > junction:
                raise GeometryOverlap(f"arms {i} and {j} touch outside the central junction")
            if r_touch >= min(reach[i], reach[j]) - 1.0:
                raise GeometryOverlap(f"arms {i} and {j} never separate into distinct wires")

    union = np.zeros((ch, cw), dtype=bool)
    for region in arms:
        union |= region
    occ = union[pad : pad + height, pad : pad + width]
    ys, xs = np.nonzero(occ)

    # centre: occupied site nearest the origin
    d = (xs - ox) ** 2 + (ys - oy) ** 2
    j0 = np.lexsort((xs, ys, d))[0]
    center = (int(xs[j0]), int(ys[j0]))

    # label each site with the arm whose axis direction is closest
    labels = np.full(len(xs), -1)
    axial = np.zeros(len(xs))
    lateral = np.zeros(len(xs))
    phi = np.arctan2(ys - oy, xs - ox)
    for k, (x, y) in enumerate(zip(xs, ys)):
        if (x, y) == center:
            continue
        owners = [a for a, region in enumerate(arms) if region[y + pad, x + pad]]
        diffs = [abs(math.remainder(phi[k] - policy.angles[a], 2 * math.pi)) for a in owners]
        a = owners[int(np.argmin(diffs))]
        th = policy.angles[a]
        labels[k] = a
        axial[k] = (x - ox) * math.cos(th) + (y - oy) * math.sin(th)
        lateral[k] = -(x - ox) * math.sin(th) + (y - oy) * math.cos(th)
    is_center = (xs == center[0]) & (ys == center[1])
    order = np.lexsort((np.round(lateral, 9), np.round(axial, 9), labels, ~is_center))
    index = np.full((height, width), -1, dtype=np.int64)
    index[ys[order], xs[order]] = np.arange(len(xs))
    mask = GridMask(
        width,
        height,
        occ.copy(),
        index,
        center,
        (ox, oy),
        arm_label=labels[order],
        axial=axial[order],
        thickness=w,
        policy=policy,
        junction_radius=junction,
    )
    if not mask.is_connected():
        raise Disconnected("rasterized star is not edge-connected")
    return mask


def _clip_connected(region: np.ndarray, origin: tuple[float, float]) -> np.ndarray:
    ys, xs = np.nonzero(region)
    if len(xs) == 0:
        return region
    d = (xs - origin[0]) ** 2 + (ys - origin[1]) ** 2
    j = int(np.argmin(d))
    h, w = region.shape
    keep = np.zeros_like(region)
    start = (int(xs[j]), int(ys[j]))
    keep[start[1], start[0]] = True
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for dx, dy in _NEIGHBOURS:
            nx, ny = x + dx, y + dy
            if 0 <= nx < w and 0 <= ny < h and region[ny, nx] and not keep[ny, nx]:
                keep[ny, nx] = True
                queue.append((nx, ny))
    return keep


def build_laplacian(mask: GridMask) -> SparseSymMatrix:
    """``-lap`` with hard walls: 4 on the diagonal, -1 per occupied neighbour pair."""
    if not mask.is_connected():
        raise Disconnected("mask has more than one connected component")
    occ, index = mask.occupancy, mask.site_index
    n = mask.n_sites
    right = occ[:, :-1] & occ[:, 1:]
    up = occ[:-1, :] & occ[1:, :]
    r = np.concatenate([index[:, :-1][right], index[:-1, :][up]])
    c = np.concatenate([index[:, 1:][right], index[1:, :][up]])
    diag = np.arange(n)
    return SparseSymMatrix.from_triplets(
        n,
        np.concatenate([diag, r]),
        np.concatenate([diag, c]),
        np.concatenate([np.full(n, 4.0), -np.ones(len(r))]),
    )


def _chain_from_edges(dim: int, edges: list[tuple[int, int]], convention: Convention) -> SparseSymMatrix:
    convention = Convention(convention)
    r = np.array([e[0] for e in edges], dtype=np.int64)
    c = np.array([e[1] for e in edges], dtype=np.int64)
    if convention is Convention.CHAIN_CENTERED:
        return SparseSymMatrix.from_triplets(dim, r, c, np.ones(len(r)))
    diag = np.arange(dim)
    return SparseSymMatrix.from_triplets(
        dim,
        np.concatenate([diag, r]),
        np.concatenate([diag, c]),
        np.concatenate([np.full(dim, 4.0), -np.ones(len(r))]),
    )


def star_chain_edges(spec: StarChainSpec) -> list[tuple[int, int]]:
    edges = []
    for arm in range(spec.p):
        sites = spec.arm_sites(arm)
        edges.extend(zip(sites[:-1], sites[1:]))
    return edges


def build_star_chain_matrix(spec: StarChainSpec) -> SparseSymMatrix:
    """Star chain Hamiltonian of dimension ``p*N + 1``.

    Chain-centred: zero diagonal and ``+1`` couplings. Grid-shifted: ``4`` on
    the diagonal and ``-1`` couplings, i.e. ``4 I`` minus the chain-centred
    matrix.
    """
    return _chain_from_edges(spec.dimension, star_chain_edges(spec), spec.convention)


@dataclass(frozen=True)
class StemChainSpec:
    """Two arms of ``n_sites`` plus one stem site on the centre.

    Index layout: centre ``0``, arm one ``1..N``, arm two ``N+1..2N`` and the
    stem at ``2N+1``.
    """

    n_sites: int
    convention: Convention = Convention.CHAIN_CENTERED

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 1:
            raise ValueError(f"sites per arm must be an integer >= 1, got {self.n_sites!r}")
        object.__setattr__(self, "convention", Convention(self.convention))

    p = 2

    @property
    def dimension(self) -> int:
        return 2 * self.n_sites + 2

    @property
    def stem_index(self) -> int:
        return 2 * self.n_sites + 1

    def arm_sites(self, arm: int) -> list[int]:
        if arm not in (0, 1):
            raise IndexError("a stem chain has arms 0 and 1")
        n = self.n_sites
        return [0] + list(range(1 + arm * n, 1 + (arm + 1) * n))


def build_stem_chain_matrix(n_sites: int, convention=Convention.CHAIN_CENTERED) -> SparseSymMatrix:
    spec = StemChainSpec(n_sites, convention)
    edges = []
    for arm in (0, 1):
        sites = spec.arm_sites(arm)
        edges.extend(zip(sites[:-1], sites[1:]))
    edges.append((0, spec.stem_index))
    return _chain_from_edges(spec.dimension, edges, spec.convention)


def default_truncation(decay_factor: float, target: float = 1e-10) -> int:
    """Smallest arm length ``N`` with ``decay_factor**(2N) < target``."""
    if not 0.0 < decay_factor < 1.0:
        raise ValueError("decay factor must lie in (0, 1)")
    return int(math.floor(math.log(target) / (2.0 * math.log(decay_factor)))) + 1
