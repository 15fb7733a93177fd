"""Report rows and their CSV / JSON encodings.

Reals are written with 17 significant digits so a binary64 value survives
a round trip; empty cells mean "not applicable".
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

REPORT_COLUMNS = (
    "p", "k", "kind", "value", "predicted", "residual", "envelope_main", "envelope_radius", "pass",
)
TWISTED_COLUMNS = ("p", "j", "k", "quantity", "ratio")


@dataclass(frozen=True)
class ReportRow:
    p: int
    k: int
    kind: str
    value: float
    predicted: float | None = None
    residual: float | None = None
    envelope_main: float | None = None
    envelope_radius: float | None = None
    passed: bool = True
    identity: str = ""


def fmt_real(x: float | None) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def _fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def _parse_real(s: str) -> float | None:
    return None if s == "" else float(s)


def _parse_bool(s: str) -> bool:
    if s not in ("true", "false"):
        raise ValueError(f"bad boolean {s!r}")
    return s == "true"


def _csv_cells(row: ReportRow) -> list[str]:
    return [
        str(row.p), str(row.k), row.kind, fmt_real(row.value), fmt_real(row.predicted),
        fmt_real(row.residual), fmt_real(row.envelope_main), fmt_real(row.envelope_radius),
        _fmt_bool(row.passed),
    ]


def write_csv(rows, fh, header: bool = True) -> None:
    w = csv.writer(fh, lineterminator="\n")
    if header:
        w.writerow(REPORT_COLUMNS)
    for row in rows:
        w.writerow(_csv_cells(row))


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def csv_to_rows(text: str) -> list[ReportRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != REPORT_COLUMNS:
        raise ValueError(f"unexpected columns {reader.fieldnames}")
    return [
        ReportRow(
            p=int(r["p"]), k=int(r["k"]), kind=r["kind"], value=float(r["value"]),
            predicted=_parse_real(r["predicted"]), residual=_parse_real(r["residual"]),
            envelope_main=_parse_real(r["envelope_main"]),
            envelope_radius=_parse_real(r["envelope_radius"]), passed=_parse_bool(r["pass"]),
        )
        for r in reader
    ]


def row_json(row: ReportRow) -> dict:
    d = asdict(row)
    d["pass"] = d.pop("passed")
    return d


def rows_to_json(rows) -> str:
    return json.dumps([row_json(r) for r in rows], indent=1)


def json_to_rows(text: str) -> list[ReportRow]:
    out = []
    for d in json.loads(text):
        d = dict(d)
        d["passed"] = d.pop("pass")
        out.append(ReportRow(**d))
    return out


def write_twisted_csv(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TWISTED_COLUMNS)
    for r in rows:
        w.writerow([r.p, r.j, r.k, r.quantity, fmt_real(r.ratio)])


# --- converters --------------------------------------------------------------


def from_moment(rep) -> ReportRow:
    return ReportRow(
        rep.p, rep.k, rep.kind, rep.value, rep.predicted, rep.residual,
        rep.envelope_main, rep.envelope_radius, rep.passed, rep.identity,
    )


def from_katz(row) -> ReportRow:
    return ReportRow(row.p, row.k, "katz", row.total, None, abs(row.total), 0.0, row.bound, row.passed, f"katz_U{row.k}")


def from_weil(rep) -> ReportRow:
    return ReportRow(rep.p, 1, "weil", rep.max_abs, None, rep.max_abs, 0.0, rep.weil_bound, rep.passed, "weil")


def from_signs(rep) -> list[ReportRow]:
    s = rep.stats
    half = (rep.V1 + rep.Vabs1) / 2
    return [
        ReportRow(s.p, 1, "sign_split", s.pos_sum, half, rep.split_residual, None, None, rep.split_ok, "positive_split"),
        ReportRow(s.p, 1, "cauchy_pos", float(s.pos_count), None, None, s.pos_sum**2 / rep.V2, None,
                  rep.cauchy_pos_ok, "cauchy_schwarz_positive"),
        ReportRow(s.p, 1, "cauchy_neg", float(s.neg_count), None, None, s.neg_sum**2 / rep.V2, None,
                  rep.cauchy_neg_ok, "cauchy_schwarz_negative"),
    ]


def from_identity(chk, kind: str) -> ReportRow:
    # k carries the character index for twisted rows, 0 for Tolev
    k = 0 if chk.j is None else chk.j
    return ReportRow(chk.p, k, kind, abs(chk.lhs), abs(chk.rhs), chk.residual, None, chk.tolerance, chk.passed,
                     f"{kind}_a{chk.a}_b{chk.b}")
