"""Certificate files: deterministic JSON output and untrusting re-verification.

A certificate file is an envelope ``{"format": ..., "items": [...]}`` whose
items are the payloads produced by ``SclCertificate.as_payload``.  The
verifier rebuilds every group, element and quasimorphism from their text
forms and recomputes each claimed fact from scratch; the only thing taken
from the file is the statement being checked.  Any failure names the step
that broke.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import specs
from .scl import MixedCommutatorDecomposition, SclCertificate, verify_decomposition

FORMAT = "scl-certificates/1"

_KINDS = ("scl-upper-decomposition", "scl-lower-bavard")

_PAYLOAD_FIELDS = {
    "kind": str,
    "target": str,
    "group_pair": str,
    "bound": str,
    "direction": str,
    "witness": dict,
    "evidence": dict,
    "verified": bool,
    "note": str,
}


class CertificateError(ValueError):
    """A certificate file that cannot even be read as a document."""


def document(certs: Sequence[SclCertificate]) -> dict:
    return {"format": FORMAT, "items": [c.as_payload() for c in certs]}


def dumps(doc: Any) -> str:
    """Canonical serialisation: sorted keys, two-space indent, newline end.
    Equal documents give byte-equal output."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_text_atomic(text: str, path: str | Path) -> None:
    """Write via a sibling temp file and an atomic rename."""
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=target.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_certificates(certs: Sequence[SclCertificate], path: str | Path) -> dict:
    doc = document(certs)
    write_text_atomic(dumps(doc), path)
    return doc


def load_document(path: str | Path) -> dict:
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise CertificateError(f"cannot read certificate file: {exc}") from exc
    if not raw.strip():
        raise CertificateError("schema: empty certificate file")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"schema: not valid JSON ({exc})") from exc
    return doc


class _StepFailure(Exception):
    def __init__(self, step: str, detail: str):
        super().__init__(f"{step}: {detail}")
        self.step = step
        self.detail = detail


def _fail(step: str, detail: str) -> _StepFailure:
    return _StepFailure(step, detail)


def _fraction(text: Any, step: str, label: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise _fail(step, f"{label} {text!r} is not a rational number") from exc


def _checked_payload(payload: Any) -> dict:
    if not isinstance(payload, dict):
        raise _fail("schema", "certificate item is not an object")
    for key, typ in _PAYLOAD_FIELDS.items():
        if key not in payload:
            raise _fail("schema", f"missing field {key!r}")
        if not isinstance(payload[key], typ):
            raise _fail("schema", f"field {key!r} must be {typ.__name__}")
    if payload["kind"] not in _KINDS:
        raise _fail("schema", f"unknown certificate kind {payload['kind']!r}")
    if payload["direction"] not in ("lower", "upper"):
        raise _fail("schema", f"direction must be lower or upper, got {payload['direction']!r}")
    wanted = "upper" if payload["kind"] == "scl-upper-decomposition" else "lower"
    if payload["direction"] != wanted:
        raise _fail("schema", f"kind {payload['kind']} must have direction {wanted}")
    if payload["verified"] is not True:
        raise _fail("schema", "certificate is not marked as verified")
    return payload


def _check_upper(payload: dict, pair, target) -> None:
    witness = payload["witness"]
    power = witness.get("power")
    if not isinstance(power, int) or power < 1:
        raise _fail("witness", "power must be a positive integer")
    factors_raw = witness.get("factors")
    if not isinstance(factors_raw, list) or any(
        not isinstance(f, list) or len(f) != 2 or not all(isinstance(s, str) for s in f)
        for f in factors_raw
    ):
        raise _fail("witness", "factors must be a list of [conjugator, member] text pairs")
    ctx = pair.ambient
    factors = []
    for i, (a_text, b_text) in enumerate(factors_raw):
        try:
            factors.append((ctx.parse(a_text), ctx.parse(b_text)))
        except ValueError as exc:
            raise _fail("witness", f"factor {i} does not parse: {exc}") from exc
    bound = _fraction(payload["bound"], "bound arithmetic", "bound")
    if bound != Fraction(len(factors), power):
        raise _fail(
            "bound arithmetic",
            f"claimed bound {bound} but {len(factors)} factors over power {power} "
            f"give {Fraction(len(factors), power)}",
        )
    d = MixedCommutatorDecomposition(pair, ctx.power(target, power), tuple(factors))
    report = verify_decomposition(d)
    if not report:
        raise _fail(report.failed_step or "decomposition", report.detail)


def _check_lower(payload: dict, pair, target) -> None:
    witness = payload["witness"]
    for key in ("qm", "value", "defect_upper"):
        if not isinstance(witness.get(key), str):
            raise _fail("witness", f"witness field {key!r} must be a string")
    provenance = payload["evidence"].get("defect_provenance")
    override = None
    if isinstance(provenance, str) and provenance.startswith("user-config"):
        override = _fraction(witness["defect_upper"], "witness", "defect override")
    try:
        qm = specs.parse_qm(witness["qm"], group=pair.ambient, defect_const=override)
    except specs.SpecError as exc:
        raise _fail("quasimorphism", str(exc)) from exc
    if not qm.homogeneous:
        raise _fail("quasimorphism", f"{qm.name} is not homogeneous")
    claimed_value = _fraction(witness["value"], "witness", "value")
    value = qm(target)
    if value != claimed_value:
        raise _fail(
            "qm value",
            f"recomputed {qm.name}({payload['target']}) = {value}, certificate says {claimed_value}",
        )
    claimed_defect = _fraction(witness["defect_upper"], "witness", "defect_upper")
    if qm.defect_upper is None or Fraction(qm.defect_upper) != claimed_defect:
        raise _fail(
            "defect",
            f"reconstructed defect bound {qm.defect_upper} differs from claimed {claimed_defect}",
        )
    if isinstance(provenance, str) and provenance != qm.defect_provenance:
        raise _fail(
            "defect provenance",
            f"provenance {provenance!r} does not match reconstruction {qm.defect_provenance!r}",
        )
    bound = _fraction(payload["bound"], "bound arithmetic", "bound")
    expected = Fraction(0) if claimed_defect == 0 else abs(value) / (2 * claimed_defect)
    if bound != expected:
        raise _fail(
            "bound arithmetic",
            f"claimed bound {bound}, duality gives {expected}",
        )


def verify_payload(payload: Any) -> tuple[bool, str | None, str]:
    """Re-check one certificate object: (ok, failed step, detail)."""
    try:
        payload = _checked_payload(payload)
        try:
            pair = specs.parse_group_pair(payload["group_pair"])
        except specs.SpecError as exc:
            raise _fail("group pair", str(exc)) from exc
        try:
            target = pair.ambient.parse(payload["target"])
        except ValueError as exc:
            raise _fail("target", str(exc)) from exc
        if payload["kind"] == "scl-upper-decomposition":
            _check_upper(payload, pair, target)
        else:
            _check_lower(payload, pair, target)
    except _StepFailure as failure:
        return False, failure.step, failure.detail
    return True, None, "recomputed and confirmed"


@dataclass(frozen=True)
class CheckResult:
    index: int
    kind: str
    ok: bool
    failed_step: str | None
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    source: str
    checks: tuple[CheckResult, ...]
    schema_error: str | None = None

    @property
    def ok(self) -> bool:
        return self.schema_error is None and all(c.ok for c in self.checks)

    def describe(self) -> str:
        if self.schema_error is not None:
            return f"FAIL {self.source}: {self.schema_error}"
        lines = []
        for c in self.checks:
            if c.ok:
                lines.append(f"ok   item {c.index} ({c.kind}): {c.detail}")
            else:
                lines.append(f"FAIL item {c.index} ({c.kind}) at step {c.failed_step}: {c.detail}")
        verdict = "all claims verified" if self.ok else "verification FAILED"
        lines.append(f"{self.source}: {len(self.checks)} item(s), {verdict}")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {
            "source": self.source,
            "ok": self.ok,
            "schema_error": self.schema_error,
            "items": [
                {
                    "index": c.index,
                    "kind": c.kind,
                    "ok": c.ok,
                    "failed_step": c.failed_step,
                    "detail": c.detail,
                }
                for c in self.checks
            ],
        }


def verify_document(doc: Any, source: str = "<document>") -> VerificationReport:
    if not isinstance(doc, dict):
        return VerificationReport(source, (), "schema: document is not an object")
    if doc.get("format") != FORMAT:
        return VerificationReport(
            source, (), f"schema: expected format {FORMAT!r}, got {doc.get('format')!r}"
        )
    items = doc.get("items")
    if not isinstance(items, list):
        return VerificationReport(source, (), "schema: items must be a list")
    checks = []
    for i, item in enumerate(items):
        kind = item.get("kind", "?") if isinstance(item, dict) else "?"
        ok, step, detail = verify_payload(item)
        checks.append(CheckResult(i, kind, ok, step, detail))
    return VerificationReport(source, tuple(checks))


def verify_file(path: str | Path) -> VerificationReport:
    try:
        doc = load_document(path)
    except CertificateError as exc:
        return VerificationReport(str(path), (), str(exc))
    return verify_document(doc, source=str(path))
