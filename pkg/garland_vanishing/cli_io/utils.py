import csv
import hashlib
import io
import json
import logging
from typing import Sequence

import numpy as np
from sqlalchemy import create_engine, func
from sqlalchemy.orm import Session

from ..core.complex_core import SimplicialComplex, build_complex
from ..core.errors import (
    InvalidAction,
    ParseError,
    SchemaError,
)
from ..core.group_action import (
    Group,
    close_group,
    permutation_from_mapping,
    trivial_group,
    verify_action,
)
from ..core.representations import (
    Representation,
    close_representation,
    conjugate,
    permutation_representation,
    sign_representation,
    trivial_representation,
)
from .constants import SPECTRUM_COLUMNS, VALID_REPRESENTATION_KINDS
from .models import AnalysisRun, Base, RunReport, RunVersion, _utcnow

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Input files
# ----------------------------------------------------------------------
def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: {exc.msg} at line {exc.lineno}, column {exc.colno}"
        ) from exc
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be an object")
    return doc


def _require(doc: dict, key: str, kind: type, path: str):
    if key not in doc:
        raise SchemaError(f"{path}: missing field {key!r}")
    if not isinstance(doc[key], kind):
        raise SchemaError(f"{path}: field {key!r} must be a {kind.__name__}")
    return doc[key]


def parse_complex(path: str) -> SimplicialComplex:
    """
    Read ``{"vertices": [...], "top_simplexes": [[...], ...]}``.

    An optional ``weights`` list of ``{"simplex": [...], "weight": n}``
    replaces tabulated weights.
    """
    doc = _load_json(path)
    tops = _require(doc, "top_simplexes", list, path)
    vertices = _require(doc, "vertices", list, path)
    for t in tops:
        if not isinstance(t, list) or not all(isinstance(v, str) for v in t):
            raise SchemaError(f"{path}: top simplexes must be lists of vertex ids")
    if not all(isinstance(v, str) for v in vertices):
        raise SchemaError(f"{path}: vertex ids must be strings")

    overrides = None
    if "weights" in doc:
        overrides = {}
        for entry in _require(doc, "weights", list, path):
            if not isinstance(entry, dict) or "simplex" not in entry or "weight" not in entry:
                raise SchemaError(f"{path}: weight entries need 'simplex' and 'weight'")
            simplex = entry["simplex"]
            if not isinstance(simplex, list) or not all(isinstance(v, str) for v in simplex):
                raise SchemaError(f"{path}: weight simplexes must be lists of vertex ids")
            try:
                overrides[tuple(simplex)] = int(entry["weight"])
            except (TypeError, ValueError) as exc:
                raise SchemaError(
                    f"{path}: weight of {simplex} must be an integer, got {entry['weight']!r}"
                ) from exc
    return build_complex(tops, vertices=vertices, weight_overrides=overrides)


def parse_group(path: str | None, complex_: SimplicialComplex, cap: int) -> Group:
    """``{"generators": [{"a": "b", ...}, ...]}``; no path means the trivial group."""
    if path is None:
        return trivial_group(len(complex_.labels))
    doc = _load_json(path)
    generators = _require(doc, "generators", list, path)
    perms = []
    for gen in generators:
        if not isinstance(gen, dict):
            raise SchemaError(f"{path}: generators must be vertex maps")
        perms.append(permutation_from_mapping(complex_.labels, gen))
    group = close_group(perms, len(complex_.labels), cap=cap)
    report = verify_action(complex_, group)
    if not report.valid:
        raise InvalidAction(report.violations[0])
    logger.debug("group from %s: order %d", path, group.order)
    return group


def _as_matrix(raw, dim: int, path: str) -> np.ndarray:
    try:
        m = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: matrix entries must be numbers") from exc
    if m.ndim == 1 and m.size == dim * dim:
        m = m.reshape(dim, dim)
    return m


def parse_representation(path: str | None, group: Group) -> Representation:
    """
    Either ``{"kind": "trivial" | "sign" | "permutation"}`` or
    ``{"dim": d, "generator_matrices": [...]}``, optionally with a
    ``similarity`` matrix applied as S π S⁻¹.
    """
    if path is None:
        return trivial_representation(group)
    doc = _load_json(path)
    if "kind" in doc:
        kind = doc["kind"]
        if kind not in VALID_REPRESENTATION_KINDS:
            raise SchemaError(f"{path}: unknown representation kind {kind!r}")
        rep = {
            "trivial": lambda: trivial_representation(group, int(doc.get("dim", 1))),
            "sign": lambda: sign_representation(group),
            "permutation": lambda: permutation_representation(group),
        }[kind]()
    else:
        dim = _require(doc, "dim", int, path)
        raw = _require(doc, "generator_matrices", list, path)
        mats = [_as_matrix(m, dim, path) for m in raw]
        rep = close_representation(group, mats, dim=dim, name=doc.get("name", "custom"))
    if "similarity" in doc:
        rep = conjugate(rep, _as_matrix(doc["similarity"], rep.dim, path))
    return rep


def input_digest(paths: Sequence[str | None]) -> str:
    digest = hashlib.sha256()
    for path in paths:
        digest.update(b"\0")
        if path is None:
            continue
        try:
            with open(path, "rb") as fh:
                digest.update(fh.read())
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return digest.hexdigest()


# ----------------------------------------------------------------------
# Report emission
# ----------------------------------------------------------------------
def to_json(report: RunReport, include_timestamp: bool = True) -> str:
    return json.dumps(
        report.to_dict(include_timestamp=include_timestamp), ensure_ascii=False, indent=2
    )


def to_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SPECTRUM_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for link in (report.spectral or {}).get("links", []):
        writer.writerow({k: _csv_cell(link[k]) for k in SPECTRUM_COLUMNS})
    return buf.getvalue()


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _from_csv_cell(text: str):
    if text == "":
        return None
    if text in {"True", "False"}:
        return text == "True"
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            pass
    return text


def to_human(report: RunReport) -> str:
    lines = [f"command: {report.command}"]
    spectral = report.spectral
    if spectral:
        lines.append("links:")
        for link in spectral["links"]:
            lines.append(
                f"  {link['vertex']:>8}  orbit={link['orbit_size']:<3} "
                f"lambda1={_fmt(link['lambda1'])}  kappa2={_fmt(link['kappa2'])}  "
                f"threshold={_fmt(link['threshold'])}"
            )
        lines.append(
            f"criterion: C={_fmt(spectral['bound'])} threshold={_fmt(spectral['threshold'])} "
            f"-> {spectral['verdict']}"
        )
        lines.extend(f"  note: {n}" for n in spectral["notes"])
    cohomology = report.cohomology
    if cohomology:
        lines.append(
            f"cohomology: dims L={cohomology['cochain_dims']} ranks={cohomology['ranks']} "
            f"H={cohomology['cohomology_dims']}"
        )
        if cohomology.get("crosscheck"):
            lines.append(f"crosscheck: {cohomology['crosscheck']}")
        if "delta_lower_bound" in cohomology:
            lines.append(f"delta lower bound: {_fmt(cohomology['delta_lower_bound'])}")
    if report.inequality:
        status = "holds" if report.inequality["holds"] else "FAILS"
        lines.append(f"per-link inequality: {status} on {report.inequality['samples']} samples")
    if report.identities:
        lines.append("identities:")
        for r in report.identities:
            lines.append(
                f"  [{r['status']:>7}] {r['name']:<34} residual={r['max_residual']:.3e} "
                f"tol={r['tolerance']:.1e} checked={r['checked']}"
            )
    lines.extend(f"note: {n}" for n in report.notes)
    lines.append(f"exit code: {report.exit_code}")
    return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    return "-" if value is None else f"{value:.10g}"


def emit(report: RunReport, output_format: str) -> str:
    if output_format == "json":
        return to_json(report) + "\n"
    if output_format == "csv":
        return to_csv(report)
    return to_human(report)


def parse_report(text: str, output_format: str):
    """Inverse of ``emit`` for the machine formats."""
    if output_format == "json":
        return json.loads(text)
    if output_format == "csv":
        rows = csv.DictReader(io.StringIO(text))
        return [
            {k: v if k == "vertex" else _from_csv_cell(v) for k, v in row.items()}
            for row in rows
        ]
    raise ValueError(f"format {output_format!r} is not machine readable")


# ----------------------------------------------------------------------
# Run archive
# ----------------------------------------------------------------------
def open_archive(url: str) -> Session:
    engine = create_engine(url)
    Base.metadata.create_all(engine)
    return Session(engine)


def snapshot_report(session: Session, report: RunReport, note: str = "") -> RunVersion:
    """Store the report as a new version of the run for its input digest."""
    digest = report.provenance["input_digest"]
    run = (
        session.query(AnalysisRun)
        .filter_by(input_digest=digest, command=report.command)
        .one_or_none()
    )
    if run is None:
        run = AnalysisRun(input_digest=digest, command=report.command)
        session.add(run)
        session.flush()
    last = (
        session.query(func.max(RunVersion.version)).filter_by(run_id=run.id).scalar() or 0
    )
    version = RunVersion(
        run_id=run.id,
        version=last + 1,
        note=note,
        json_blob=to_json(report),
    )
    session.add(version)
    run.updated_at = _utcnow()
    session.add(run)
    session.commit()
    logger.debug("archived %s run %s as version %d", report.command, digest[:12], last + 1)
    return version


def list_versions(session: Session, digest: str) -> list[dict]:
    runs = session.query(AnalysisRun).filter_by(input_digest=digest).order_by(AnalysisRun.id)
    return [
        {
            "command": run.command,
            "version": v.version,
            "created_at": v.created_at.isoformat(),
            "note": v.note,
            "exit_code": json.loads(v.json_blob).get("exit_code"),
        }
        for run in runs
        for v in run.versions
    ]
