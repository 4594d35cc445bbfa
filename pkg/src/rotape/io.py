"""On-disk formats: PESP1 spectral snapshots and the diagnostics CSV."""

from __future__ import annotations

import csv
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .grid import GridSpec


@dataclass
class DiagnosticsRow:
    """Per-accepted-step observables of a run."""

    t: float
    norm_r0tau: float
    sobolev_norm: float
    tau_tracked: float
    tau_fit_h: float
    eta_fit_v: float
    energy: float
    enstrophy_bar: float
    baroclinic_l2: float
    div_residual: float
    mean_residual: float
    termination: str = ""


CSV_FIELDS = [f.name for f in fields(DiagnosticsRow)]


def write_diagnostics_csv(path, rows) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        for row in rows:
            writer.writerow(
                [repr(getattr(row, name)) if name != "termination" else getattr(row, name) for name in CSV_FIELDS]
            )


def read_diagnostics_csv(path) -> list[DiagnosticsRow]:
    out = []
    with Path(path).open() as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_FIELDS:
            raise ValueError(f"unexpected diagnostics header {reader.fieldnames}")
        for rec in reader:
            kwargs = {k: (rec[k] if k == "termination" else float(rec[k])) for k in CSV_FIELDS}
            out.append(DiagnosticsRow(**kwargs))
    return out


# ---------------------------------------------------------------------------
# PESP1 snapshots: ASCII header + little-endian float64 interleaved (re, im)
# coefficients in (component, n1, n2, m) row-major order, n1/n2 in FFT order.
# ---------------------------------------------------------------------------

def write_snapshot(path, coeffs: np.ndarray, grid: GridSpec, t: float) -> None:
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    comps = coeffs.shape[0]
    if coeffs.shape != (comps, grid.nh, grid.nh, grid.nz):
        raise ValueError("coefficient array does not match the grid")
    header = f"PESP1 nh={grid.nh} nz={grid.nz} comps={comps} t={t!r}\n"
    inter = np.empty(coeffs.shape + (2,), dtype="<f8")
    inter[..., 0] = coeffs.real
    inter[..., 1] = coeffs.imag
    with Path(path).open("wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(inter.tobytes())


def read_snapshot(path) -> tuple[np.ndarray, GridSpec, float]:
    with Path(path).open("rb") as fh:
        header = fh.readline().decode("ascii").strip()
        parts = header.split()
        if not parts or parts[0] != "PESP1":
            raise ValueError(f"not a PESP1 snapshot: header {header!r}")
        kv = dict(p.split("=", 1) for p in parts[1:])
        nh, nz, comps = int(kv["nh"]), int(kv["nz"]), int(kv["comps"])
        t = float(kv["t"])
        raw = fh.read()
    expected = comps * nh * nh * nz * 2 * 8
    if len(raw) != expected:
        raise ValueError(f"snapshot payload has {len(raw)} bytes, expected {expected}")
    inter = np.frombuffer(raw, dtype="<f8").reshape(comps, nh, nh, nz, 2)
    coeffs = inter[..., 0] + 1j * inter[..., 1]
    return coeffs.astype(np.complex128), GridSpec(nh=nh, nz=nz), t
