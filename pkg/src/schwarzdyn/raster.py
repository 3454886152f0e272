"""Rasterization of the dynamical and parameter planes.

Pixels are classified by the vectorized orbit kernels and mapped through a
fixed integer palette, so identical jobs produce byte-identical images.  The
canonical interchange format is binary PPM (P6, 8-bit); PNG is an optional
re-encoding of the same pixel buffer.  Rows are split into horizontal bands
that can be evaluated concurrently; band results land in disjoint buffer
slices and assembly is single-threaded.
"""

from __future__ import annotations

import colorsys
import enum
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import cnc, deltoid

MIN_PIXELS = 16


@dataclass(frozen=True)
class GridSpec:
    """A square-pixel raster window."""

    center: complex
    width: float
    pixels_x: int
    pixels_y: int

    def __post_init__(self):
        if self.pixels_x < MIN_PIXELS or self.pixels_y < MIN_PIXELS:
            raise ValueError("grid needs at least 16 pixels per side")
        if not self.width > 0:
            raise ValueError("grid width must be positive")

    @property
    def height(self) -> float:
        return self.width * self.pixels_y / self.pixels_x

    def pixel_size(self) -> float:
        return self.width / self.pixels_x

    def row_points(self, j: int) -> np.ndarray:
        """Pixel-center complex coordinates of row j (row 0 on top)."""
        step = self.pixel_size()
        x0 = self.center.real - self.width / 2 + step / 2
        y = self.center.imag + self.height / 2 - step * (j + 0.5)
        xs = x0 + step * np.arange(self.pixels_x)
        return xs + 1j * y


class JobKind(enum.Enum):
    DELTOID_PLANE = "deltoid"
    CNC_DYNAMICAL = "dyn"
    CNC_PARAMETER = "param"


@dataclass(frozen=True)
class RenderJob:
    kind: JobKind
    grid: GridSpec
    max_iter: int = 256
    palette: str = "classic"
    a: Optional[complex] = None  # CNC_DYNAMICAL only

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.kind is JobKind.CNC_DYNAMICAL and self.a is None:
            raise ValueError("dynamical render needs the parameter a")


@dataclass
class RenderResult:
    pixels: np.ndarray  # (H, W, 3) uint8
    stats: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Palettes
# ---------------------------------------------------------------------------

def _rank_table(name: str, n: int = 64) -> np.ndarray:
    table = np.zeros((n, 3), dtype=np.uint8)
    for i in range(n):
        if name == "ink":
            v = 255 - (i * 13) % 200
            table[i] = (v, v, v)
        else:  # classic
            h = (0.61 + 0.093 * i) % 1.0
            s = 0.75
            v = 1.0 - 0.35 * ((i * 5) % 8) / 8.0
            r, g, b = colorsys.hsv_to_rgb(h, s, v)
            table[i] = (int(r * 255), int(g * 255), int(b * 255))
    return table


PALETTES = {name: _rank_table(name) for name in ("classic", "ink")}

COLOR_NONESC = np.array((12, 12, 12), dtype=np.uint8)
COLOR_UNDET = np.array((90, 90, 90), dtype=np.uint8)
COLOR_BASIN = np.array((235, 235, 225), dtype=np.uint8)
COLOR_IN = np.array((12, 12, 12), dtype=np.uint8)
COLOR_SLIT = np.array((200, 40, 160), dtype=np.uint8)


def _colorize(code: np.ndarray, count: np.ndarray, kind: JobKind,
              palette: str) -> np.ndarray:
    table = PALETTES.get(palette)
    if table is None:
        raise ValueError(f"unknown palette {palette!r}")
    h, w = code.shape
    img = np.zeros((h, w, 3), dtype=np.uint8)
    ranked = np.take(table, np.clip(count, 0, None) % len(table), axis=0)
    if kind is JobKind.DELTOID_PLANE:
        img[code == deltoid.UNDET] = COLOR_UNDET
        img[code == deltoid.TILING] = ranked[code == deltoid.TILING]
        basin = code == deltoid.BASIN
        shade = (count[basin] % 7).astype(np.uint8)
        img[basin] = COLOR_BASIN[None, :] - (shade * 10)[:, None]
    elif kind is JobKind.CNC_DYNAMICAL:
        img[code == cnc.ORBIT_UNDET] = COLOR_UNDET
        img[code == cnc.ORBIT_NONESC] = COLOR_NONESC
        esc = code == cnc.ORBIT_ESCAPED
        img[esc] = ranked[esc]
    else:
        img[code == cnc.PARAM_UNDET] = COLOR_UNDET
        img[code == cnc.PARAM_IN] = COLOR_IN
        img[code == cnc.PARAM_SLIT] = COLOR_SLIT
        out = code == cnc.PARAM_OUT
        img[out] = ranked[out]
    return img


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def _classify_band(job: RenderJob, rows: range, cnc_map=None):
    grid = job.grid
    pts = np.concatenate([grid.row_points(j) for j in rows])
    if job.kind is JobKind.DELTOID_PLANE:
        code, count = deltoid.classify_deltoid_grid(pts, job.max_iter)
    elif job.kind is JobKind.CNC_DYNAMICAL:
        code, count = cnc.orbit_grid(cnc_map.a, cnc_map.r, cnc_map.alpha,
                                     pts, job.max_iter)
    else:
        code, count = cnc.scan_parameters(pts, job.max_iter)
    shape = (len(rows), grid.pixels_x)
    return code.reshape(shape), count.reshape(shape)


def render(job: RenderJob, workers: int = 1, band_rows: int = 64) -> RenderResult:
    """Render a job to an RGB buffer plus verdict statistics.

    Deterministic: identical jobs yield byte-identical buffers regardless of
    the worker count (bands write disjoint slices).
    """
    grid = job.grid
    cnc_map = None
    if job.kind is JobKind.CNC_DYNAMICAL:
        cnc_map = cnc.build_cnc(job.a)
    code = np.zeros((grid.pixels_y, grid.pixels_x), dtype=np.uint8)
    count = np.zeros((grid.pixels_y, grid.pixels_x), dtype=np.int32)
    bands = [range(j, min(j + band_rows, grid.pixels_y))
             for j in range(0, grid.pixels_y, band_rows)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                lambda rows: _classify_band(job, rows, cnc_map), bands))
    else:
        results = [_classify_band(job, rows, cnc_map) for rows in bands]
    for rows, (c, n) in zip(bands, results):
        code[rows.start:rows.stop] = c
        count[rows.start:rows.stop] = n
    img = _colorize(code, count, job.kind, job.palette)
    total = code.size
    if job.kind is JobKind.DELTOID_PLANE:
        labels = {deltoid.UNDET: "undetermined", deltoid.TILING: "tiling",
                  deltoid.BASIN: "basin_infinity"}
    elif job.kind is JobKind.CNC_DYNAMICAL:
        labels = {cnc.ORBIT_UNDET: "undetermined", cnc.ORBIT_ESCAPED: "escaped",
                  cnc.ORBIT_NONESC: "non_escaping"}
    else:
        labels = {cnc.PARAM_UNDET: "undetermined", cnc.PARAM_OUT: "out",
                  cnc.PARAM_IN: "in", cnc.PARAM_SLIT: "slit"}
    stats = {name: int((code == val).sum()) for val, name in labels.items()}
    stats["total"] = total
    stats["fraction_undetermined"] = stats.get("undetermined", 0) / total
    return RenderResult(pixels=img, stats=stats)


def classify_grid(job: RenderJob) -> tuple:
    """Raw (code, count) arrays of a job, for tests and data export."""
    cnc_map = cnc.build_cnc(job.a) if job.kind is JobKind.CNC_DYNAMICAL else None
    return _classify_band(job, range(job.grid.pixels_y), cnc_map)


# ---------------------------------------------------------------------------
# Encoders
# ---------------------------------------------------------------------------

def ppm_bytes(pixels: np.ndarray) -> bytes:
    h, w, _ = pixels.shape
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    return header + pixels.astype(np.uint8).tobytes()


def png_bytes(pixels: np.ndarray) -> bytes:
    from PIL import Image

    img = Image.fromarray(pixels.astype(np.uint8), mode="RGB")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def write_image(pixels: np.ndarray, path: str, fmt: str = "ppm") -> None:
    if fmt == "ppm":
        data = ppm_bytes(pixels)
    elif fmt == "png":
        data = png_bytes(pixels)
    else:
        raise ValueError(f"unsupported image format {fmt!r}")
    with open(path, "wb") as fh:
        fh.write(data)
