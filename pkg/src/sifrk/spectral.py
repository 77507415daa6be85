"""Uniform grids, central-difference Laplacians and their exponentials.

The second-order central-difference Laplacian is diagonalized exactly by the
real FFT on periodic grids and by the DCT-II/DCT-III pair on cell-centered
grids with homogeneous Neumann conditions (ghost value equal to the adjacent
interior value).  Applying ``exp(t (L - kappa I))`` therefore costs one forward
and one inverse transform, with no matrix ever assembled.
"""

from __future__ import annotations

import enum
import functools
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.fft as sfft


class BC(enum.Enum):
    PERIODIC = "periodic"
    NEUMANN = "neumann"

    @classmethod
    def parse(cls, value: "BC | str") -> "BC":
        if isinstance(value, BC):
            return value
        v = value.strip().lower()
        if v in ("periodic", "p"):
            return cls.PERIODIC
        if v in ("neumann", "homogeneous_neumann", "n"):
            return cls.NEUMANN
        raise ValueError(f"unknown boundary condition {value!r}")


class GridMismatch(ValueError):
    pass


def fft_workers() -> int:
    """Thread cap for transforms, from ``SIFRK_THREADS`` (default: all cores)."""
    env = os.environ.get("SIFRK_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class Grid:
    """Uniform tensor grid on a box.

    Periodic grids hold the nodes ``a + k h``; Neumann grids are cell centered,
    ``a + (k + 1/2) h``, for ``k = 0..n-1``.
    """

    n: tuple[int, ...]
    box: tuple[tuple[float, float], ...]
    bc: BC = BC.PERIODIC

    def __post_init__(self):
        n = tuple(int(v) for v in self.n)
        box = tuple((float(a), float(b)) for a, b in self.box)
        if not 1 <= len(n) <= 3:
            raise ValueError("grid dimension must be 1, 2 or 3")
        if len(box) != len(n):
            raise ValueError("box needs one interval per dimension")
        if any(v < 2 for v in n):
            raise ValueError("need at least 2 points per dimension")
        if any(b <= a for a, b in box):
            raise ValueError("box intervals must have b > a")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "bc", BC.parse(self.bc))

    @classmethod
    def uniform(cls, dim: int, n: int, box=(-0.5, 0.5), bc: BC | str = BC.PERIODIC) -> "Grid":
        return cls((n,) * dim, (tuple(box),) * dim, BC.parse(bc))

    @property
    def dim(self) -> int:
        return len(self.n)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.n

    @property
    def size(self) -> int:
        return int(np.prod(self.n))

    @property
    def h(self) -> tuple[float, ...]:
        return tuple((b - a) / n for (a, b), n in zip(self.box, self.n))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.h))

    @property
    def volume(self) -> float:
        return float(np.prod([b - a for a, b in self.box]))

    def axes(self) -> list[np.ndarray]:
        shift = 0.5 if self.bc is BC.NEUMANN else 0.0
        return [a + (np.arange(n) + shift) * h for (a, _), n, h in zip(self.box, self.n, self.h)]

    def coords(self) -> list[np.ndarray]:
        return np.meshgrid(*self.axes(), indexing="ij")


@dataclass(frozen=True, eq=False)
class Field:
    """Grid function; ``data`` has shape ``grid.shape`` (row-major)."""

    grid: Grid
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.shape != self.grid.shape:
            if data.size != self.grid.size:
                raise GridMismatch(f"{data.size} values for a grid of {self.grid.size} points")
            data = data.reshape(self.grid.shape)
        if not np.all(np.isfinite(data)):
            raise FloatingPointError("field has non-finite entries")
        object.__setattr__(self, "data", data)

    def with_data(self, data: np.ndarray) -> "Field":
        return Field(self.grid, data)


def _check_grid(expected: Grid, got: Grid) -> None:
    if expected != got:
        raise GridMismatch(f"field grid {got} does not match operator grid {expected}")


@functools.lru_cache(maxsize=32)
def _second_difference_eigs(n: int, h: float, bc: BC) -> np.ndarray:
    k = np.arange(n)
    if bc is BC.PERIODIC:
        lam = (2.0 * np.cos(2.0 * np.pi * k / n) - 2.0) / h**2
    else:
        lam = (2.0 * np.cos(np.pi * k / n) - 2.0) / h**2
    lam[0] = 0.0
    lam.setflags(write=False)
    return lam


class OperatorSymbol:
    """Eigenvalues of ``diffusivity * L^h`` on a grid, plus the stabilizer ``kappa``.

    ``lam`` is laid out in full transform order (FFT order for periodic grids,
    DCT index order for Neumann grids).  The periodic exponential works on the
    half spectrum of the real FFT, ``spectral_lam``.
    """

    def __init__(self, grid: Grid, diffusivity: float = 1.0, kappa: float = 0.0):
        if diffusivity <= 0:
            raise ValueError("diffusivity must be positive")
        if kappa < 0:
            raise ValueError("kappa must be nonnegative")
        self.grid = grid
        self.diffusivity = float(diffusivity)
        self.kappa = float(kappa)
        eigs = [_second_difference_eigs(n, h, grid.bc) for n, h in zip(grid.n, grid.h)]
        lam = np.zeros(grid.shape)
        for d, e in enumerate(eigs):
            shape = [1] * grid.dim
            shape[d] = -1
            lam = lam + e.reshape(shape)
        self.lam = diffusivity * lam
        self.lam.setflags(write=False)
        if grid.bc is BC.PERIODIC:
            half = grid.n[-1] // 2 + 1
            self.spectral_lam = self.lam[..., :half]
        else:
            self.spectral_lam = self.lam
        self._workers = fft_workers()

    def with_kappa(self, kappa: float) -> "OperatorSymbol":
        out = OperatorSymbol.__new__(OperatorSymbol)
        out.__dict__.update(self.__dict__)
        if kappa < 0:
            raise ValueError("kappa must be nonnegative")
        out.kappa = float(kappa)
        return out

    # transforms on raw arrays ------------------------------------------------

    def forward(self, u: np.ndarray) -> np.ndarray:
        if self.grid.bc is BC.PERIODIC:
            return sfft.rfftn(u, workers=self._workers)
        return sfft.dctn(u, type=2, norm="ortho", workers=self._workers)

    def inverse(self, uh: np.ndarray) -> np.ndarray:
        if self.grid.bc is BC.PERIODIC:
            return sfft.irfftn(uh, s=self.grid.shape, workers=self._workers)
        return sfft.idctn(uh, type=2, norm="ortho", workers=self._workers)

    def multiplier(self, t: float) -> np.ndarray:
        """Spectral multiplier of ``exp(t (L - kappa I))``."""
        return np.exp(t * (self.spectral_lam - self.kappa))

    def exp_array(self, t: float, u: np.ndarray) -> np.ndarray:
        if t < 0:
            raise ValueError("exponential needs t >= 0")
        if t == 0:
            return np.array(u, dtype=float, copy=True)
        return self.inverse(self.multiplier(t) * self.forward(u))

    def laplacian_array(self, u: np.ndarray) -> np.ndarray:
        """Stencil application of ``diffusivity * L^h`` (``kappa`` not included)."""
        out = np.zeros_like(u, dtype=float)
        for d, h in enumerate(self.grid.h):
            if self.grid.bc is BC.PERIODIC:
                nb = np.roll(u, 1, axis=d) + np.roll(u, -1, axis=d)
            else:
                pad = [(0, 0)] * u.ndim
                pad[d] = (1, 1)
                up = np.pad(u, pad, mode="edge")
                lo = [slice(None)] * u.ndim
                hi = [slice(None)] * u.ndim
                lo[d] = slice(0, -2)
                hi[d] = slice(2, None)
                nb = up[tuple(lo)] + up[tuple(hi)]
            out += (nb - 2.0 * u) / h**2
        return self.diffusivity * out

    def laplacian_spectral(self, u: np.ndarray) -> np.ndarray:
        return self.inverse(self.spectral_lam * self.forward(u))


def laplacian_symbol(grid: Grid, diffusivity: float = 1.0) -> OperatorSymbol:
    return OperatorSymbol(grid, diffusivity, 0.0)


def apply_exp(sym: OperatorSymbol, t: float, u: Field) -> Field:
    """``exp(t (L^h - kappa I)) u``."""
    _check_grid(sym.grid, u.grid)
    return Field(u.grid, sym.exp_array(t, u.data))


def apply_laplacian(sym: OperatorSymbol, u: Field) -> Field:
    _check_grid(sym.grid, u.grid)
    return Field(u.grid, sym.laplacian_array(u.data))


def sup_norm(u: Field | np.ndarray) -> float:
    data = u.data if isinstance(u, Field) else np.asarray(u)
    return float(np.max(np.abs(data))) if data.size else 0.0


def stencil_matrix(grid: Grid, diffusivity: float = 1.0) -> np.ndarray:
    """Dense matrix of the stencil, row-major ordering.  For small grids and tests only."""
    sizes = grid.n
    mats = []
    for n, h in zip(sizes, grid.h):
        m = np.zeros((n, n))
        for k in range(n):
            m[k, k] = -2.0
            if grid.bc is BC.PERIODIC:
                m[k, (k - 1) % n] += 1.0
                m[k, (k + 1) % n] += 1.0
            else:
                m[k, max(k - 1, 0)] += 1.0
                m[k, min(k + 1, n - 1)] += 1.0
        mats.append(m / h**2)
    total = np.zeros((grid.size, grid.size))
    for d, m in enumerate(mats):
        term = np.array([[1.0]])
        for e, n in enumerate(sizes):
            term = np.kron(term, m if e == d else np.eye(n))
        total += term
    return diffusivity * total


# --------------------------------------------------------------------------
# Binary snapshots: b"SIFK", u8 version, u8 dim, u32 n[dim], f64 box[2 dim], f64 data
# --------------------------------------------------------------------------

SNAPSHOT_MAGIC = b"SIFK"
SNAPSHOT_VERSION = 1


def snapshot_bytes(u: Field) -> bytes:
    g = u.grid
    head = SNAPSHOT_MAGIC + struct.pack("<BB", SNAPSHOT_VERSION, g.dim)
    head += struct.pack(f"<{g.dim}I", *g.n)
    head += struct.pack(f"<{2 * g.dim}d", *[v for ab in g.box for v in ab])
    return head + np.ascontiguousarray(u.data, dtype="<f8").tobytes()


def write_snapshot(path, u: Field) -> None:
    Path(path).write_bytes(snapshot_bytes(u))


def read_snapshot(path, bc: BC | str = BC.PERIODIC) -> Field:
    """Boundary conditions are not stored in the file and must be supplied."""
    raw = Path(path).read_bytes()
    if raw[:4] != SNAPSHOT_MAGIC:
        raise ValueError("not a snapshot file (bad magic)")
    version, dim = struct.unpack_from("<BB", raw, 4)
    if version != SNAPSHOT_VERSION:
        raise ValueError(f"unsupported snapshot version {version}")
    off = 6
    n = struct.unpack_from(f"<{dim}I", raw, off)
    off += 4 * dim
    bounds = struct.unpack_from(f"<{2 * dim}d", raw, off)
    off += 16 * dim
    count = int(np.prod(n))
    if len(raw) - off != 8 * count:
        raise ValueError("snapshot payload length does not match header")
    data = np.frombuffer(raw, dtype="<f8", count=count, offset=off).astype(float).reshape(n)
    box = tuple((bounds[2 * d], bounds[2 * d + 1]) for d in range(dim))
    return Field(Grid(tuple(n), box, BC.parse(bc)), data)
