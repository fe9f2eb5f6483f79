"""Jobs, reports, the self-test matrix and batch runs behind the CLI."""
from __future__ import annotations

import json
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .complexes import ComplexError, LinkExteriorComplex, validate_complex
from .io import (
    SHIPPED_SYSTEMS,
    InputError,
    load_complex,
    load_local_system,
    shipped_complex,
    shipped_local_system,
)
from .localsys import (
    LocalSystemError,
    MarkedLocalSystem,
    Representation,
    adjoint_rep_pgsp4,
    principal_embed_system,
    sl2_irrep,
    trivial_rep,
)
from .numfield import QQ, format_rational
from .torsion import (
    HomologyOrientation,
    TorsionError,
    TorsionResult,
    assemble_twisted,
    torsion,
)

__all__ = [
    "EXIT_NON_REGULAR",
    "EXIT_OK",
    "EXIT_PARSE",
    "EXIT_VALIDATION",
    "JobError",
    "JobSpec",
    "Report",
    "load_orientation",
    "parse_representation",
    "run",
    "run_batch",
    "selftest",
]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NON_REGULAR = 4

SHIPPED_COMPLEXES = {"figure-eight": "figure_eight.json"}

REPRESENTATIONS = "adjoint-pgsp4, sl2-irrep(n), trivial(r), principal-embed-then-adjoint"


class JobError(Exception):
    """A job that cannot run, with the exit code it maps to."""

    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class JobSpec:
    complex_path: str = "figure-eight"
    local_system_path: str = "iota_geom"
    representation: str = "adjoint-pgsp4"
    peripheral_loop_id: str | None = None
    orientation: str | None = None

    @classmethod
    def from_dict(cls, doc: dict) -> "JobSpec":
        known = {"complex", "local_system", "rep", "loop", "orientation"}
        extra = set(doc) - known
        if extra:
            raise JobError(f"unknown job keys {sorted(extra)}", EXIT_PARSE)
        return cls(
            doc.get("complex", "figure-eight"),
            doc.get("local_system", "iota_geom"),
            doc.get("rep", "adjoint-pgsp4"),
            doc.get("loop"),
            doc.get("orientation"),
        )


@dataclass
class Report:
    job: JobSpec
    complex_name: str
    local_system_name: str
    rank: int
    result: TorsionResult
    seconds: float

    @property
    def exact(self) -> str:
        return self.result.exact

    def embedding_strings(self) -> list[str]:
        return [e.format(15) for e in self.result.embeddings]

    def as_dict(self, timing: bool = False) -> dict:
        r = self.result
        doc = {
            "complex": self.complex_name,
            "local_system": self.local_system_name,
            "representation": self.job.representation,
            "loop": self.job.peripheral_loop_id,
            "field": {
                "name": r.value.field.name,
                "min_poly": [format_rational(x) for x in r.value.field.min_poly],
            },
            "rank": self.rank,
            "torsion": self.exact,
            "torsion_coefficients": r.value.to_strings(),
            "embeddings": [
                {"re": f"{e.re:.15g}", "im": f"{e.im:.15g}"} for e in r.embeddings
            ],
            "sign_alpha": r.sign_alpha,
            "sign_orientation": r.sign_orientation,
            "sign_fiber": r.sign_fiber,
            "determinants": [str(d) for d in r.determinants],
            "regularity": r.regular.as_dict(),
        }
        if timing:
            doc["seconds"] = round(self.seconds, 3)
        return doc

    def text(self) -> str:
        r = self.result
        reg = r.regular
        lines = [
            f"complex          {self.complex_name}",
            f"local system     {self.local_system_name}",
            f"representation   {self.job.representation} (rank {self.rank})",
            f"loop             {self.job.peripheral_loop_id or '(first on each component)'}",
            f"betti            {tuple(reg.betti)}",
            f"boundary H0 dim  {reg.boundary_h0_dim}",
            f"boundary-regular {reg.boundary_regular}",
            f"gamma-regular    {reg.gamma_regular}",
            f"sign alpha       {r.sign_alpha:+d}",
            f"sign orientation {r.sign_orientation:+d}",
            f"sign fiber       {r.sign_fiber:+d}",
            f"torsion          {self.exact}",
        ]
        for e in self.embedding_strings():
            lines.append(f"embedding        {e}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# resolving job inputs


def _resolve_complex(ref: str) -> LinkExteriorComplex:
    if ref in SHIPPED_COMPLEXES:
        return shipped_complex()
    if not Path(ref).exists():
        raise JobError(f"no such complex file {ref!r}", EXIT_PARSE)
    try:
        return load_complex(ref)
    except (InputError, ComplexError) as exc:
        raise JobError(str(exc), EXIT_PARSE) from exc


def _resolve_local_system(ref: str) -> MarkedLocalSystem:
    try:
        if ref in SHIPPED_SYSTEMS:
            return shipped_local_system(ref)
        if not Path(ref).exists():
            raise JobError(f"no such local system file {ref!r}", EXIT_PARSE)
        return load_local_system(ref)
    except InputError as exc:
        raise JobError(str(exc), EXIT_PARSE) from exc
    except LocalSystemError as exc:
        raise JobError(str(exc), EXIT_VALIDATION) from exc


def parse_representation(text: str, ls: MarkedLocalSystem) -> tuple[MarkedLocalSystem, Representation | None]:
    """Resolve a representation name against a local system's group tag.

    Returns the system to twist by (after any principal embedding) and the
    representation to push it through.
    """
    s = text.strip().lower()
    tag = ls.group_tag
    m = re.fullmatch(r"(sl2-irrep|trivial)\((\d+)\)", s)
    if s in ("adjoint-pgsp4", "adjoint"):
        if tag not in ("GSp(4)", "PGSp(4)"):
            raise JobError(f"adjoint-pgsp4 needs a GSp(4) or PGSp(4) system, got {tag}", EXIT_PARSE)
        return ls, adjoint_rep_pgsp4()
    if s == "principal-embed-then-adjoint":
        if tag != "PGL(2)":
            raise JobError(f"principal-embed-then-adjoint needs a PGL(2) system, got {tag}", EXIT_PARSE)
        return principal_embed_system(ls), adjoint_rep_pgsp4()
    if m and m.group(1) == "sl2-irrep":
        n = int(m.group(2))
        if tag not in ("PGL(2)", "GL(2)"):
            raise JobError(f"sl2-irrep needs a PGL(2) or GL(2) system, got {tag}", EXIT_PARSE)
        if tag == "PGL(2)" and n % 2 == 0:
            raise JobError(f"sl2-irrep({n}) does not descend to PGL(2)", EXIT_PARSE)
        if n < 1:
            raise JobError("sl2-irrep needs n >= 1", EXIT_PARSE)
        return ls, sl2_irrep(n)
    if m and m.group(1) == "trivial":
        r = int(m.group(2))
        if r < 1:
            raise JobError("trivial needs r >= 1", EXIT_PARSE)
        return ls, trivial_rep(r, ls.rank)
    raise JobError(f"unknown representation {text!r}; expected one of {REPRESENTATIONS}", EXIT_PARSE)


def load_orientation(path: str, c: LinkExteriorComplex) -> HomologyOrientation:
    """Read ``{"sign": +-1, "classes": {"k": [{cell: coefficient}, ...]}}``."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise JobError(f"cannot read orientation {path!r}: {exc}", EXIT_PARSE) from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("classes"), dict):
        raise JobError("orientation file needs a 'classes' object", EXIT_PARSE)
    sign = doc.get("sign", 1)
    if sign not in (1, -1):
        raise JobError("orientation sign must be 1 or -1", EXIT_PARSE)
    classes: dict[int, list[dict[str, object]]] = {}
    for k, chains in doc["classes"].items():
        try:
            deg = int(k)
        except ValueError as exc:
            raise JobError(f"bad degree {k!r} in orientation", EXIT_PARSE) from exc
        out = []
        for chain in chains:
            unknown = [cid for cid in chain if cid not in c.ids(deg)]
            if unknown:
                raise JobError(f"orientation mentions unknown {deg}-cells {unknown}", EXIT_PARSE)
            try:
                out.append({cid: QQ(str(v)).to_rational() for cid, v in chain.items()})
            except (TypeError, ValueError) as exc:
                raise JobError(f"bad orientation coefficient: {exc}", EXIT_PARSE) from exc
        classes[deg] = out
    return HomologyOrientation(classes, sign)


# ---------------------------------------------------------------------------
# running


def run(job: JobSpec) -> Report:
    """validate, assemble, check regularity, evaluate the torsion and embed it."""
    start = time.perf_counter()
    c = _resolve_complex(job.complex_path)
    report = validate_complex(c)
    if not report.ok:
        raise JobError("complex failed validation:\n  " + "\n  ".join(report.errors), EXIT_VALIDATION)
    ls = _resolve_local_system(job.local_system_path)
    missing = set(c.ids(1)) - set(ls.monodromy)
    if missing:
        raise JobError(f"local system has no monodromy for 1-cells {sorted(missing)}", EXIT_VALIDATION)
    ls, rep = parse_representation(job.representation, ls)
    if job.peripheral_loop_id is not None and all(p.id != job.peripheral_loop_id for p in c.peripheral_loops):
        raise JobError(f"unknown peripheral loop {job.peripheral_loop_id!r}", EXIT_PARSE)
    orientation = load_orientation(job.orientation, c) if job.orientation else None
    try:
        t = assemble_twisted(c, ls, rep)
        result = torsion(t, orientation=orientation, loop_id=job.peripheral_loop_id)
    except (TorsionError, LocalSystemError) as exc:
        raise JobError(str(exc), EXIT_VALIDATION) from exc
    return Report(job, c.name or job.complex_path, ls.name or job.local_system_path, t.rank, result,
                  time.perf_counter() - start)


def exit_code(report: Report) -> int:
    return EXIT_OK if report.result.regular.gamma_regular else EXIT_NON_REGULAR


def _run_for_batch(job: JobSpec) -> dict:
    try:
        rep = run(job)
    except JobError as exc:
        return {"status": exc.code, "error": str(exc)}
    return {"status": exit_code(rep), "report": rep.as_dict()}


def run_batch(jobs: Sequence[JobSpec], workers: int = 1) -> list[dict]:
    """Run independent jobs, in parallel when ``workers > 1``; output keeps job order."""
    if workers <= 1 or len(jobs) <= 1:
        return [_run_for_batch(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_for_batch, jobs))


# ---------------------------------------------------------------------------
# self-test


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


def _guard(name: str, fn: Callable[[], tuple[bool, str]]) -> Check:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is reported as a failed row
        return Check(name, False, f"{type(exc).__name__}: {exc}")
    return Check(name, ok, detail)


def selftest(full: bool = False) -> list[Check]:
    """Shipped-data validation, the two golden values and, with ``full``, the invariance checks."""
    from . import selfchecks

    checks = [_guard(name, fn) for name, fn in selfchecks.quick()]
    if full:
        checks += [_guard(name, fn) for name, fn in selfchecks.extended()]
    return checks
