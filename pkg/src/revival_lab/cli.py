"""Scenario-driven command line front end.

    revival-lab run <scenario.json>
    revival-lab compare <a.csv> <b.csv>
    revival-lab spectrum --bc <file> --count N

``REVIVAL_LAB_THREADS`` caps the number of worker threads used by ``run``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .diagnostics import box_dimension, compare, energy, linearity_breakpoints
from .errors import BadSpec, GridMismatch, NotRational, RevivalLabError
from .piecewise import BoxSpec, PolyBumpSpec, RampSpec, RawSegments, make_datum
from .revival import RationalTime, evaluate_revival
from .solver import DEFAULT_GRID_SIZE, DEFAULT_NTERMS, FieldSample, TruncationPlan, evaluate_residue, evaluate_series
from .spectrum import GENERAL, GENERAL_KEYS, PSEUDOPERIODIC, BoundaryConditions, classify_modes, compute_spectrum

FIELD_OUTPUTS = ("series", "residue", "revival")
OUTPUTS = FIELD_OUTPUTS + ("energy", "spectrum", "dimension", "breakpoints")
CSV_HEADER = ["x", "re_u", "im_u", "abs_u"]
DEFAULT_SPECTRUM_COUNT = 20

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^(?P<re>[+-]?{_NUM})?(?:(?P<isign>[+-])?(?P<im>{_NUM})?i)?$")
_IMAG_RE = re.compile(rf"^(?P<sign>[+-]?)(?P<im>{_NUM})?i$")


def parse_complex(value) -> complex:
    """Parse ``"a"``, ``"a+bi"``, ``"bi"``, ``"i"``; plain JSON numbers and ``{"re","im"}`` pass through."""
    if isinstance(value, bool):
        raise BadSpec(f"not a complex number: {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, dict) and set(value) <= {"re", "im"}:
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if not isinstance(value, str) or not value or value != value.strip():
        raise BadSpec(f"not a complex number: {value!r}")
    m = _IMAG_RE.match(value)
    if m is not None:
        mag = float(m.group("im")) if m.group("im") else 1.0
        return complex(0.0, -mag if m.group("sign") == "-" else mag)
    m = _COMPLEX_RE.match(value)
    if m is None or value in ("+", "-"):
        raise BadSpec(f"not a complex number: {value!r}")
    re_part = float(m.group("re")) if m.group("re") else 0.0
    if not value.endswith("i"):
        return complex(re_part, 0.0)
    if m.group("re") and not m.group("isign"):
        raise BadSpec(f"missing sign before imaginary part in {value!r}")
    mag = float(m.group("im")) if m.group("im") else 1.0
    return complex(re_part, -mag if m.group("isign") == "-" else mag)


# -- scenario parsing -------------------------------------------------------


def parse_problem(problem: dict) -> BoundaryConditions:
    if not isinstance(problem, dict):
        raise BadSpec("'problem' must be an object")
    variant = problem.get("variant")
    L = float(problem.get("L", 1.0))
    if variant == PSEUDOPERIODIC:
        try:
            return BoundaryConditions.pseudoperiodic(parse_complex(problem["beta0"]), parse_complex(problem["beta1"]), L)
        except KeyError as exc:
            raise BadSpec(f"pseudoperiodic problem needs {exc.args[0]}") from exc
    if variant == GENERAL:
        unknown = set(problem) - set(GENERAL_KEYS) - {"variant", "L"}
        if unknown:
            raise BadSpec(f"unknown coefficients {sorted(unknown)}")
        betas = {k: parse_complex(problem.get(k, 0)) for k in GENERAL_KEYS}
        return BoundaryConditions.general(L, **betas)
    raise BadSpec(f"variant must be '{PSEUDOPERIODIC}' or '{GENERAL}', got {variant!r}")


def parse_initial(initial: dict, L: float):
    if not isinstance(initial, dict):
        raise BadSpec("'initial' must be an object")
    kind = initial.get("kind")
    try:
        if kind == "box":
            spec = BoxSpec(float(initial["a"]), float(initial["b"]), parse_complex(initial.get("height", 1)))
        elif kind == "ramp":
            spec = RampSpec(
                float(initial.get("center", 0.125)),
                float(initial.get("halfWidth", 0.02)),
                parse_complex(initial.get("slope", 8)),
                parse_complex(initial.get("value", 1)),
            )
        elif kind == "polybump":
            spec = PolyBumpSpec(float(initial["a"]), float(initial["b"]))
        elif kind == "segments":
            spec = RawSegments(
                tuple(
                    (float(s["lo"]), float(s["hi"]), [parse_complex(c) for c in s["coeffs"]])
                    for s in initial["segments"]
                )
            )
        else:
            raise BadSpec(f"unknown datum kind {kind!r}")
    except (KeyError, TypeError) as exc:
        raise BadSpec(f"malformed initial datum: {exc}") from exc
    return make_datum(spec, L)


def parse_times(spec, L: float):
    items = spec if isinstance(spec, list) else [spec]
    out = []
    for item in items:
        if not isinstance(item, dict) or len(item) != 1:
            raise BadSpec(f"time entries look like {{'rational': 'p/q'}} or {{'float': t}}, got {item!r}")
        if "rational" in item:
            out.append(RationalTime.parse(item["rational"], L))
        elif "float" in item:
            out.append(float(item["float"]))
        else:
            raise BadSpec(f"unknown time entry {item!r}")
    return out


def time_tag(t) -> str:
    return t.tag if isinstance(t, RationalTime) else f"{t:.6f}"


class Scenario:
    """Validated scenario; see the README for the schema."""

    def __init__(self, raw: dict, base: Path | None = None):
        if not isinstance(raw, dict):
            raise BadSpec("scenario must be a JSON object")
        self.raw = raw
        self.bc = parse_problem(raw.get("problem"))
        L = self.bc.L
        self.datum_spec = raw.get("initial")
        self.u0 = parse_initial(self.datum_spec, L)
        self.times = parse_times(raw.get("time", []), L)
        self.nterms = int(raw.get("nterms", DEFAULT_NTERMS))
        self.plan = TruncationPlan(self.nterms)
        n = int(raw.get("grid", DEFAULT_GRID_SIZE))
        if n < 2:
            raise BadSpec("grid needs at least two points")
        self.grid = np.linspace(0.0, L, n)
        self.outputs = list(raw.get("outputs", []))
        bad = [o for o in self.outputs if o not in OUTPUTS]
        if bad:
            raise BadSpec(f"unknown outputs {bad}")
        self.spectrum_count = int(raw.get("spectrumCount", DEFAULT_SPECTRUM_COUNT))
        out_dir = Path(raw.get("outDir", "out"))
        if base is not None and not out_dir.is_absolute():
            out_dir = base / out_dir
        self.out_dir = out_dir
        if "revival" in self.outputs:
            if not self.bc.is_pseudoperiodic:
                raise BadSpec("the revival output needs pseudoperiodic conditions")
            if any(not isinstance(t, RationalTime) for t in self.times):
                raise NotRational("the revival output needs rational times only")

    @classmethod
    def load(cls, path) -> "Scenario":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise BadSpec(f"{path}: invalid JSON ({exc})") from exc
        return cls(raw, base=path.parent)


# -- file formats -----------------------------------------------------------


def write_field_csv(path, field: FieldSample):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for x, u in zip(field.grid, field.values):
            w.writerow([f"{x:.17g}", f"{u.real:.17g}", f"{u.imag:.17g}", f"{abs(u):.17g}"])


def read_field_csv(path) -> FieldSample:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != CSV_HEADER:
        raise BadSpec(f"{path}: expected header {','.join(CSV_HEADER)}")
    data = np.array([[float(v) for v in r[:3]] for r in rows[1:]], dtype=float).reshape(-1, 3)
    return FieldSample(data[:, 0], data[:, 1] + 1j * data[:, 2])


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _threads():
    env = os.environ.get("REVIVAL_LAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise BadSpec(f"REVIVAL_LAB_THREADS must be an integer, got {env!r}") from exc
    return min(4, os.cpu_count() or 1)


# -- commands ---------------------------------------------------------------


def run_scenario(path) -> dict:
    """Run every requested output for every time; returns the metadata written to ``meta.json``."""
    sc = Scenario.load(path)
    sc.out_dir.mkdir(parents=True, exist_ok=True)
    fields_needed = set(o for o in sc.outputs if o in FIELD_OUTPUTS)
    if {"energy", "dimension", "breakpoints"} & set(sc.outputs):
        fields_needed.add("revival" if "revival" in sc.outputs else "series")
    jobs = [(name, t) for name in FIELD_OUTPUTS if name in fields_needed for t in sc.times]

    spectrum = None
    if any(name != "revival" for name, _ in jobs):
        # computed once up front so worker threads share one immutable spectrum
        spectrum = compute_spectrum(sc.bc, sc.nterms)
    solvers = {
        "series": lambda t: evaluate_series(sc.bc, sc.u0, t, sc.grid, sc.plan, spectrum, datum=sc.datum_spec),
        "residue": lambda t: evaluate_residue(sc.bc, sc.u0, t, sc.grid, sc.plan, spectrum, datum=sc.datum_spec),
        "revival": lambda t: evaluate_revival(sc.bc, sc.u0, t, sc.grid, datum=sc.datum_spec),
    }

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        futures = {job: pool.submit(solvers[job[0]], job[1]) for job in jobs}
        fields = {job: fut.result() for job, fut in futures.items()}

    written = []
    for name, t in jobs:
        if name in sc.outputs:
            fname = f"{name}_{time_tag(t)}.csv"
            write_field_csv(sc.out_dir / fname, fields[(name, t)])
            written.append(fname)

    diagnostics = {}
    source = "revival" if "revival" in fields_needed and "revival" in sc.outputs else "series"
    for t in sc.times:
        entry = {}
        f = fields.get((source, t))
        if "energy" in sc.outputs:
            entry["energy"] = energy(f)
        if "dimension" in sc.outputs:
            try:
                entry["dimension"] = box_dimension(f).to_json()
            except RevivalLabError as exc:
                entry["dimension"] = {"error": exc.code, "message": str(exc)}
        if "breakpoints" in sc.outputs:
            entry["breakpoints"] = linearity_breakpoints(f)
        if entry:
            entry["source"] = source
            diagnostics[time_tag(t)] = entry

    if "spectrum" in sc.outputs:
        spec = compute_spectrum(sc.bc, sc.spectrum_count)
        payload = spec.to_json()
        payload["modeReport"] = classify_modes(spec).to_json()
        (sc.out_dir / "spectrum.json").write_text(_dump(payload))
        written.append("spectrum.json")

    meta = {
        "version": __version__,
        "scenario": sc.raw,
        "times": {time_tag(t): (t.t if isinstance(t, RationalTime) else t) for t in sc.times},
        "files": written,
        "diagnostics": diagnostics,
    }
    (sc.out_dir / "meta.json").write_text(_dump(meta))
    return meta


def spectrum_cmd(bc_path, count) -> dict:
    raw = json.loads(Path(bc_path).read_text())
    bc = parse_problem(raw.get("problem", raw))
    spec = compute_spectrum(bc, count)
    payload = spec.to_json()
    payload["modeReport"] = classify_modes(spec).to_json()
    return payload


def _error(exc, code=1):
    name = exc.code if isinstance(exc, RevivalLabError) else type(exc).__name__
    sys.stderr.write(json.dumps({"error": name, "message": str(exc)}) + "\n")
    return code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="revival-lab", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a scenario file")
    p_run.add_argument("scenario")
    p_cmp = sub.add_parser("compare", help="L2 and sup distance between two field CSVs")
    p_cmp.add_argument("a")
    p_cmp.add_argument("b")
    p_spec = sub.add_parser("spectrum", help="discriminant zeros as JSON")
    p_spec.add_argument("--bc", required=True, help="scenario or problem JSON file")
    p_spec.add_argument("--count", type=int, default=DEFAULT_SPECTRUM_COUNT)
    args = parser.parse_args(argv)

    try:
        if args.command == "run":
            meta = run_scenario(args.scenario)
            sys.stdout.write(_dump({"outDir": str(Scenario.load(args.scenario).out_dir), "files": meta["files"]}))
        elif args.command == "compare":
            report = compare(read_field_csv(args.a), read_field_csv(args.b))
            sys.stdout.write(_dump(report.to_json()))
        else:
            sys.stdout.write(_dump(spectrum_cmd(args.bc, args.count)))
    except GridMismatch as exc:
        return _error(exc, 2)
    except (RevivalLabError, OSError, json.JSONDecodeError) as exc:
        return _error(exc, 1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
