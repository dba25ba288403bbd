"""Grid sampling of surface patches and OBJ / CSV serialization.

All numeric fields are written with 17 significant digits so identical
configurations produce byte-identical files.
"""

from __future__ import annotations

from typing import IO

import numpy as np

from .geometry import GridSpec, SurfacePatch


def fmt17(value: float) -> str:
    return f"{value:.17g}"


def sample_grid(
    patch: SurfacePatch, grid: GridSpec
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate the patch coordinates on a uniform grid (values only, no
    derivatives).  Returns (us, vs, X, Y, Z) with X, Y, Z shaped
    (grid.nu, grid.nv)."""
    us, vs = patch.domain.axes(grid)
    X = np.empty((grid.nu, grid.nv))
    Y = np.empty_like(X)
    Z = np.empty_like(X)
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            X[i, j], Y[i, j], Z[i, j] = patch.eval_point(float(u), float(v))
    return us, vs, X, Y, Z


def write_obj(stream: IO[str], X: np.ndarray, Y: np.ndarray, Z: np.ndarray) -> None:
    """Triangulated grid mesh as Wavefront OBJ.

    Each grid cell is split along the (i, j) -> (i+1, j+1) diagonal into
    two triangles wound counterclockwise in parameter orientation.
    """
    nu, nv = X.shape
    for i in range(nu):
        for j in range(nv):
            stream.write(f"v {fmt17(X[i, j])} {fmt17(Y[i, j])} {fmt17(Z[i, j])}\n")

    def vid(i: int, j: int) -> int:
        return i * nv + j + 1

    for i in range(nu - 1):
        for j in range(nv - 1):
            stream.write(f"f {vid(i, j)} {vid(i + 1, j)} {vid(i + 1, j + 1)}\n")
            stream.write(f"f {vid(i, j)} {vid(i + 1, j + 1)} {vid(i, j + 1)}\n")


def write_points_csv(
    stream: IO[str],
    us: np.ndarray,
    vs: np.ndarray,
    X: np.ndarray,
    Y: np.ndarray,
    Z: np.ndarray,
) -> None:
    """Point-cloud CSV with header u,v,x,y,z, one row per grid point."""
    stream.write("u,v,x,y,z\n")
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            fields = (u, v, X[i, j], Y[i, j], Z[i, j])
            stream.write(",".join(fmt17(f) for f in fields) + "\n")


CURVATURE_CSV_HEADER = "u,v,x,y,z,E,F,G,l,m,n,K,H"


def write_curvature_csv(stream: IO[str], rows) -> None:
    """Curvature CSV: header then one row of 13 fields per grid point."""
    stream.write(CURVATURE_CSV_HEADER + "\n")
    for row in rows:
        stream.write(",".join(fmt17(f) for f in row) + "\n")
