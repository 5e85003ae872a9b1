"""Figure-data export: CSV surfaces, gnuplot scripts, dominance checks.

The rotating rational wave with the reference constants (C3 = -15,
C4 = 55) keeps its third component above both reactant components
everywhere on the square (-1, 1)^2 at all sampled times -- the product
of the bilinear interaction dominates.  With the alternative constants
(C3 = 5, C4 = 10) dominance breaks at some space-time samples.  The
exporters here dump the field surfaces behind those observations as
diff-able CSV (header ``t,x,y,u,v,w``, 14 significant digits) plus a
gnuplot script per figure, and :func:`dominance_check` quantifies the
w > max(u, v) comparison on a seedless uniform grid.

Three canned figures are provided:

``fig1``
    u, v, w over (x, y) at the four reference times 0, pi/4, pi/2 and
    3pi/2.  The last one lies outside the periodic window [0, pi] the
    surrounding discussion studies; the report flags that discrepancy
    rather than silently dropping or keeping the value.
``fig2``
    u, v, w over (t, x) slices at y0 in {-1, 0, 1}, reference constants.
``fig3``
    the same slices with C3 = 5, C4 = 10 (dominance fails).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dlvlab.errors import ParameterError
from dlvlab.solutions import Solution, make_solution

__all__ = ["FIGURES", "FigureReport", "surface_frame", "slice_frame",
           "dominance_check", "write_figure", "dominance_times"]

_FMT = "%.14g"
_HEADER = "t,x,y,u,v,w"

#: times used by the dominance sweep: 0 to pi inclusive, step pi/8
def dominance_times() -> np.ndarray:
    return np.linspace(0.0, math.pi, 9)


def _frame_rows(sol: Solution, T, X, Y):
    """Flatten a coordinate grid into valid CSV rows (t,x,y,u,v,w)."""
    u, v, w = sol.evaluate(T, X, Y)
    ok = np.asarray(sol.is_valid(T, X, Y))
    cols = [np.broadcast_to(np.asarray(a, dtype=float), X.shape)[ok]
            for a in (T, X, Y, u, v, w)]
    return np.column_stack(cols)


def surface_frame(sol: Solution, t0: float, *, nx: int = 101, ny: int = 101,
                  box=((-1.0, 1.0), (-1.0, 1.0))) -> np.ndarray:
    """Rows of u, v, w over an (x, y) grid at fixed time ``t0``."""
    (xlo, xhi), (ylo, yhi) = box
    x = np.linspace(xlo, xhi, int(nx))
    y = np.linspace(ylo, yhi, int(ny))
    X, Y = np.meshgrid(x, y, indexing="xy")
    return _frame_rows(sol, np.full_like(X, float(t0)), X, Y)


def slice_frame(sol: Solution, y0: float, *, nt: int = 101, nx: int = 101,
                trange=(0.0, math.pi), xrange=(-1.0, 1.0)) -> np.ndarray:
    """Rows of u, v, w over a (t, x) grid at fixed ``y0``."""
    t = np.linspace(trange[0], trange[1], int(nt))
    x = np.linspace(xrange[0], xrange[1], int(nx))
    T, X = np.meshgrid(t, x, indexing="xy")
    return _frame_rows(sol, T, X, np.full_like(X, float(y0)))


@dataclass
class DominanceReport:
    """Outcome of the w > max(u, v) sweep."""

    solution: str
    n_valid: int
    n_dominant: int
    all_dominant: bool
    worst_margin: float      # min over samples of w - max(u, v)
    first_failure: tuple | None

    def to_json(self) -> dict:
        return {"solution": self.solution, "n_valid": self.n_valid,
                "n_dominant": self.n_dominant,
                "all_dominant": self.all_dominant,
                "worst_margin": self.worst_margin,
                "first_failure": (list(self.first_failure)
                                  if self.first_failure else None)}


def dominance_check(sol: Solution, *, times=None, nx: int = 101,
                    ny: int = 101,
                    box=((-1.0, 1.0), (-1.0, 1.0))) -> DominanceReport:
    """Compare w against max(u, v) at every valid node of a dense grid."""
    if times is None:
        times = dominance_times()
    n_valid = 0
    n_dom = 0
    worst = math.inf
    first_failure = None
    for t0 in times:
        rows = surface_frame(sol, float(t0), nx=nx, ny=ny, box=box)
        margin = rows[:, 5] - np.maximum(rows[:, 3], rows[:, 4])
        n_valid += rows.shape[0]
        n_dom += int(np.sum(margin > 0.0))
        low = float(np.min(margin)) if rows.size else math.inf
        if low < worst:
            worst = low
        if first_failure is None and low <= 0.0:
            idx = int(np.argmin(margin))
            first_failure = tuple(float(c) for c in rows[idx])
    return DominanceReport(solution=sol.name, n_valid=n_valid,
                           n_dominant=n_dom,
                           all_dominant=(n_dom == n_valid),
                           worst_margin=worst, first_failure=first_failure)


# --------------------------------------------------------------------------
# canned figures
# --------------------------------------------------------------------------

_REFERENCE_TIMES = (0.0, math.pi / 4.0, math.pi / 2.0, 3.0 * math.pi / 2.0)
_SLICE_Y0 = (-1.0, 0.0, 1.0)

FIGURES = {
    "fig1": {"mode": "surface", "constants": {},
             "times": _REFERENCE_TIMES},
    "fig2": {"mode": "slice", "constants": {}, "y0": _SLICE_Y0},
    "fig3": {"mode": "slice", "constants": {"C3": 5.0, "C4": 10.0},
             "y0": _SLICE_Y0},
}

_TIME_WINDOW_NOTE = (
    "reference time 3*pi/2 lies outside the periodic window [0, pi] the "
    "surrounding discussion studies; the frame is emitted anyway and "
    "flagged here")


@dataclass
class FigureReport:
    """What a figure export wrote and what the data shows."""

    figure: str
    solution: str
    constants: dict
    files: list
    frames: list            # one dict per frame: file, fixed coordinate
    rows_per_frame: int
    dominance: DominanceReport
    notes: list

    def to_json(self) -> dict:
        return {"schema": 1, "figure": self.figure,
                "solution": self.solution, "constants": self.constants,
                "files": list(self.files), "frames": list(self.frames),
                "rows_per_frame": self.rows_per_frame,
                "dominance": self.dominance.to_json(),
                "notes": list(self.notes)}


def _write_csv(path, rows):
    np.savetxt(path, rows, fmt=_FMT, delimiter=",", header=_HEADER,
               comments="")


def _gnuplot_surface(csvs, labels, out):
    lines = ["set datafile separator ','",
             "set terminal pngcairo size 1000,800",
             "set xlabel 'x'", "set ylabel 'y'", "set hidden3d"]
    for csv, label in zip(csvs, labels):
        png = csv.rsplit(".", 1)[0] + ".png"
        lines += [f"set output '{png}'",
                  f"set title '{label}'",
                  f"splot '{csv}' skip 1 using 2:3:4 with points title 'u', "
                  f"'{csv}' skip 1 using 2:3:5 with points title 'v', "
                  f"'{csv}' skip 1 using 2:3:6 with points title 'w'"]
    out.write_text("\n".join(lines) + "\n")


def _gnuplot_slice(csvs, labels, out):
    lines = ["set datafile separator ','",
             "set terminal pngcairo size 1000,800",
             "set xlabel 't'", "set ylabel 'x'", "set hidden3d"]
    for csv, label in zip(csvs, labels):
        png = csv.rsplit(".", 1)[0] + ".png"
        lines += [f"set output '{png}'",
                  f"set title '{label}'",
                  f"splot '{csv}' skip 1 using 1:2:4 with points title 'u', "
                  f"'{csv}' skip 1 using 1:2:5 with points title 'v', "
                  f"'{csv}' skip 1 using 1:2:6 with points title 'w'"]
    out.write_text("\n".join(lines) + "\n")


def write_figure(figure: str, out_dir, *, nx: int = 101) -> FigureReport:
    """Export one canned figure: per-frame CSVs plus a gnuplot script.

    Returns the report (also what the CLI prints as JSON).  ``nx``
    controls the grid resolution per axis; the dominance sweep always
    runs at the same resolution over the times 0..pi step pi/8.
    """
    from pathlib import Path

    if figure not in FIGURES:
        raise ParameterError(
            f"unknown figure {figure!r}; known: " + ", ".join(sorted(FIGURES)))
    cfg = FIGURES[figure]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sol = make_solution("rot_wave_rational", **cfg["constants"])

    files = []
    frames = []
    labels = []
    notes = []
    rows_per_frame = 0
    if cfg["mode"] == "surface":
        for i, t0 in enumerate(cfg["times"], start=1):
            rows = surface_frame(sol, t0, nx=nx, ny=nx)
            path = out_dir / f"{figure}_frame{i}.csv"
            _write_csv(path, rows)
            files.append(path.name)
            frames.append({"file": path.name, "t0": float(t0)})
            labels.append(f"t0 = {t0:.6g}")
            rows_per_frame = rows.shape[0]
        if max(cfg["times"]) > math.pi + 1e-12:
            notes.append(_TIME_WINDOW_NOTE)
        script = out_dir / f"{figure}.gp"
        _gnuplot_surface(files, labels, script)
    else:
        for i, y0 in enumerate(cfg["y0"], start=1):
            rows = slice_frame(sol, y0, nt=nx, nx=nx)
            path = out_dir / f"{figure}_frame{i}.csv"
            _write_csv(path, rows)
            files.append(path.name)
            frames.append({"file": path.name, "y0": float(y0)})
            labels.append(f"y0 = {y0:.6g}")
            rows_per_frame = rows.shape[0]
        script = out_dir / f"{figure}.gp"
        _gnuplot_slice(files, labels, script)
    files.append(script.name)

    dom = dominance_check(sol, nx=nx, ny=nx)
    return FigureReport(figure=figure, solution=sol.name,
                        constants=dict(sol.params), files=files,
                        frames=frames, rows_per_frame=rows_per_frame,
                        dominance=dom, notes=notes)
