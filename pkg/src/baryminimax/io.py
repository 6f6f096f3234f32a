"""CSV/JSON ingestion and result bundles.

Complex numbers are stored as separate real and imaginary columns. Every
number written to CSV uses 17 significant digits; JSON floats use Python's
shortest round-trip repr, so both read back bit-exactly.
"""

from __future__ import annotations

import csv
import json
import os
import re
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .barycentric import BarycentricRational, InterpolationData, SampleSet
from .diagnostics import extreme_points, theorem_bound_check
from .errors import ArgumentError

FMT = "%.17g"
_DEGREE = re.compile(r"#\s*degree\s*=\s*(\d+)")


class ProblemFileError(ArgumentError):
    """A problem file is malformed; the message names file, row and column."""


def fmt(v) -> str:
    return FMT % v


def _read_complex_table(path, re_col, im_col, re_col2, im_col2, what):
    """Parse a CSV with two complex columns; returns (a, b, rows, degree)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemFileError(f"{path}: cannot read ({exc.strerror})") from exc
    degree = None
    lines = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            mdeg = _DEGREE.match(s)
            if mdeg:
                degree = int(mdeg.group(1))
            continue
        lines.append((lineno, line))
    if not lines:
        raise ProblemFileError(f"{path}: no header row")
    header = [h.strip() for h in next(csv.reader([lines[0][1]]))]
    for col in (re_col, re_col2):
        if col not in header:
            raise ProblemFileError(f"{path}: missing column {col!r} in header {header}")
    pos = {name: header.index(name) if name in header else None for name in (re_col, im_col, re_col2, im_col2)}
    a, b, rows = [], [], []
    for lineno, line in lines[1:]:
        fields = next(csv.reader([line]))
        if len(fields) != len(header):
            raise ProblemFileError(
                f"{path}: row {lineno} has {len(fields)} columns, header has {len(header)}"
            )
        vals = {}
        for name, j in pos.items():
            if j is None:
                vals[name] = 0.0
                continue
            try:
                vals[name] = float(fields[j])
            except ValueError:
                raise ProblemFileError(
                    f"{path}: row {lineno}, column {name!r}: cannot parse {fields[j]!r} as a number"
                ) from None
            if not np.isfinite(vals[name]):
                raise ProblemFileError(f"{path}: row {lineno}, column {name!r}: value is not finite")
        a.append(complex(vals[re_col], vals[im_col]))
        b.append(complex(vals[re_col2], vals[im_col2]))
        rows.append(lineno)
    a = np.array(a, dtype=complex)
    b = np.array(b, dtype=complex)
    return a, b, rows, degree


def _wrap_duplicates(build, rows, path, what):
    try:
        return build()
    except ArgumentError as exc:
        idx = getattr(exc, "indices", None)
        if idx is None:
            raise ProblemFileError(f"{path}: {exc}") from exc
        i, j = idx
        raise ProblemFileError(f"{path}: duplicate {what} node in rows {rows[i]} and {rows[j]}") from exc


def read_samples(path) -> tuple[SampleSet, int | None]:
    """Samples CSV (x_re, x_im, f_re, f_im); a ``# degree=N`` comment sets n."""
    x, f, rows, degree = _read_complex_table(path, "x_re", "x_im", "f_re", "f_im", "sample")
    if x.size == 0:
        raise ProblemFileError(f"{path}: no sample rows")
    return _wrap_duplicates(lambda: SampleSet(x, f), rows, path, "sample"), degree


def read_interpolation(path, samples: SampleSet | None = None, sample_rows=None) -> InterpolationData:
    """Interpolation CSV (t_re, t_im, y_re, y_im); checked against ``samples``."""
    t, y, rows, _ = _read_complex_table(path, "t_re", "t_im", "y_re", "y_im", "interpolation")
    data = _wrap_duplicates(lambda: InterpolationData(t, y), rows, path, "interpolation")
    if samples is not None:
        try:
            data.check_disjoint(samples)
        except ArgumentError as exc:
            i, j = exc.indices
            raise ProblemFileError(
                f"{path}: interpolation node in row {rows[i]} coincides with sample {j} ({t[i]!r})"
            ) from exc
    return data


def read_points(path) -> np.ndarray:
    """Evaluation points CSV (x_re, x_im); an empty file gives no points."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemFileError(f"{path}: cannot read ({exc.strerror})") from exc
    if not any(s.strip() and not s.strip().startswith("#") for s in text.splitlines()):
        return np.zeros(0, dtype=complex)
    x, _, _, _ = _read_complex_table(path, "x_re", "x_im", "x_re", "x_im", "point")
    return x


def read_support(path) -> np.ndarray:
    """Free support points CSV (t_re, t_im)."""
    t, _, _, _ = _read_complex_table(path, "t_re", "t_im", "t_re", "t_im", "support")
    return t


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        for row in rows:
            wr.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def write_samples(path, samples: SampleSet, degree: int | None = None):
    with open(path, "w", newline="") as fh:
        if degree is not None:
            fh.write(f"# degree={degree}\n")
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["x_re", "x_im", "f_re", "f_im"])
        for x, f in zip(samples.nodes, samples.values):
            wr.writerow([fmt(x.real), fmt(x.imag), fmt(f.real), fmt(f.imag)])


def write_interpolation(path, interp: InterpolationData):
    rows = [(t.real, t.imag, y.real, y.imag) for t, y in zip(interp.nodes, interp.values)]
    write_csv(path, ["t_re", "t_im", "y_re", "y_im"], [tuple(float(v) for v in r) for r in rows])


def _dump_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def save_rational(path, r: BarycentricRational):
    _dump_json(path, r.to_dict())


def load_rational(path) -> BarycentricRational:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ArgumentError(f"{path}: cannot load rational model ({exc})") from exc
    if not isinstance(data, dict):
        raise ArgumentError(f"{path}: rational model must be a JSON object")
    return BarycentricRational.from_dict(data)


def bundle_summary(result) -> dict:
    """Certificate and headline numbers for a SolveResult; no timestamps."""
    trace = result.trace
    out = {
        "termination": trace.termination,
        "message": trace.message,
        "iterations": len(trace) - 1,
        "best_index": trace.best_index,
        "degree_n": result.config.degree_n,
        "ell": result.interp.ell,
        "m": result.samples.m,
    }
    if result.rational is None:
        return out
    report = result.error_report()
    cert = result.certificate()
    pts = extreme_points(report, result.config.extreme_threshold, nodes=result.samples.nodes)
    bound = theorem_bound_check(pts, result.config.degree_n, result.interp.ell)
    out.update(cert.to_dict())
    out.update(
        {
            "max_error": report.max_error,
            "interp_residuals": [float(v) for v in report.interp_residuals],
            "interp_residuals_offset": [float(v) for v in report.interp_residuals_offset],
            "interpolation_valid": report.interpolation_valid,
            "extreme_count": pts.cardinality,
            "extreme_threshold": pts.threshold,
            "bound_proved": bound.proved_bound,
            "bound_observed": bound.observed_bound,
            "bound_holds": bound.holds,
            "bound_meets_observed": bound.meets_observed,
        }
    )
    return out


def write_bundle(result, out_dir, meta: dict | None = None) -> dict:
    """Write rational.json, trace.csv, error_curve.csv, extreme_points.csv,
    certificate.json and a meta.json sidecar holding the timestamp."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trace = result.trace
    write_csv(
        out / "trace.csv",
        ["k", "d", "e", "gap", "active_weights", "sigma_gap", "rho", "path"],
        [(r.k, float(r.d), float(r.e), float(r.gap), r.active_weights, float(r.sigma_gap), float(r.rho), r.path)
         for r in trace.records],
    )
    summary = bundle_summary(result)
    if result.rational is not None:
        save_rational(out / "rational.json", result.rational)
        report = result.error_report()
        x = result.samples.nodes
        write_csv(
            out / "error_curve.csv",
            ["x_re", "x_im", "residual"],
            [(float(a.real), float(a.imag), float(v)) for a, v in zip(x, report.residuals)],
        )
        pts = extreme_points(report, result.config.extreme_threshold, nodes=x)
        write_csv(
            out / "extreme_points.csv",
            ["index", "x_re", "x_im", "residual"],
            [(int(i), float(x[i].real), float(x[i].imag), float(report.residuals[i])) for i in pts.indices],
        )
    _dump_json(out / "certificate.json", summary)
    sidecar = {"created": datetime.now(timezone.utc).isoformat(), "version": __version__}
    sidecar.update(meta or {})
    _dump_json(out / "meta.json", sidecar)
    return summary


def default_out_dir(flag: str | None, fallback: str = "minimax_out") -> Path:
    return Path(flag or os.environ.get("MINIMAX_OUT_DIR") or fallback)
