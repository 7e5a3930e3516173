"""Command-line front end for exact hydrogenic radial moments.

Computes moment tables for single states or (n, l, d) grids, or verifies
the recurrence output against the independent integration oracle and the
built-in identities. Output is deterministic, sorted by (n, l, d, k), and
meant to be machine readable: values are reduced fraction strings, with an
optional correctly rounded decimal column.

Examples:
    hydromoments --n 2 --l 1 --d 3 --kmin -3 --kmax 2
    hydromoments --grid-n 1..3 --grid-d 2..5 --kmax 4 --mode verify
    hydromoments --n 1 --kmax 2 --decimals 6 --format csv
    hydromoments --batch jobs.jsonl

Exit codes: 0 success (in verify mode, every check passed), 1 usage error,
2 verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import oracle
from .core import (
    InvalidStateError,
    NonexistentMomentError,
    QuantumState,
    existence_bound,
    moment_exists,
    spectral_params,
)
from .recurrence import (
    ascend,
    closed_form_r,
    full_table,
    invert_two_term,
    kramers_residual,
)

__all__ = [
    "UsageError",
    "JobSpec",
    "MomentReport",
    "parse_args",
    "batch_jobs",
    "compute_records",
    "verify_state",
    "decimal_string",
    "render_json",
    "render_csv",
    "render_table",
    "run",
    "main",
]

_FORMATS = ("json", "csv", "table")
_MODES = ("compute", "verify")

_COMPUTE_FIELDS = ("n", "l", "d", "k", "exists", "value", "decimal", "unit")
# The CSV column set is part of the output contract and stays fixed.
_CSV_COMPUTE_FIELDS = ("n", "l", "d", "k", "exists", "value", "decimal")
_VERIFY_FIELDS = ("n", "l", "d", "check", "k", "candidate", "reference", "ok")

_OPTION_NAMES = (
    "n",
    "l",
    "d",
    "grid_n",
    "grid_l",
    "grid_d",
    "kmin",
    "kmax",
    "Z",
    "format",
    "mode",
    "decimals",
)


class UsageError(Exception):
    """Bad command line or batch entry; maps to exit code 1."""


@dataclass(frozen=True)
class JobSpec:
    """One validated unit of work.

    kmin = None means "pick per state": the existence bound in verify mode,
    0 in compute mode (clamped to kmax when kmax is lower).
    """

    states: tuple[QuantumState, ...]
    kmin: int | None = None
    kmax: int = 4
    Z: Fraction = Fraction(1)
    format: str = "table"
    mode: str = "compute"
    decimals: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        if not self.states:
            raise ValueError("at least one state is required")
        for state in self.states:
            if not isinstance(state, QuantumState):
                raise ValueError(f"states must be QuantumState instances, got {state!r}")
        if isinstance(self.Z, float):
            raise ValueError("Z must be exact (int, Fraction or p/q string), not float")
        object.__setattr__(self, "Z", Fraction(self.Z))
        if self.Z <= 0:
            raise ValueError(f"Z must be positive, got {self.Z}")
        if self.kmin is not None and self.kmin > self.kmax:
            raise ValueError(f"kmin {self.kmin} exceeds kmax {self.kmax}")
        if self.format not in _FORMATS:
            raise ValueError(f"format must be one of {'|'.join(_FORMATS)}, got {self.format!r}")
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {'|'.join(_MODES)}, got {self.mode!r}")
        if self.decimals is not None and (
            not isinstance(self.decimals, int) or self.decimals < 0
        ):
            raise ValueError(f"decimals must be a nonnegative integer, got {self.decimals!r}")


@dataclass(frozen=True)
class MomentCheck:
    """Recurrence value against oracle value at one order.

    For a divergent order both routes must flag nonexistence; that
    agreement is what `equal` records then.
    """

    k: int
    recurrence: Fraction | None
    oracle: Fraction | None
    exists: bool
    equal: bool


@dataclass(frozen=True)
class TwoTermCheck:
    """Two-term inversion at index k against the descend chain at order -k-2."""

    inversion_k: int
    order: int
    inverted: Fraction
    descended: Fraction
    equal: bool


@dataclass(frozen=True)
class ResidualCheck:
    k: int
    residual: Fraction
    zero: bool


@dataclass(frozen=True)
class ClosedFormCheck:
    recurrence: Fraction
    closed_form: Fraction
    equal: bool


@dataclass(frozen=True)
class MomentReport:
    """All verification results for one state."""

    state: QuantumState
    moments: tuple[MomentCheck, ...]
    two_term: tuple[TwoTermCheck, ...]
    residuals: tuple[ResidualCheck, ...]
    closed_form: ClosedFormCheck

    @property
    def passed(self) -> bool:
        return (
            all(m.equal for m in self.moments)
            and all(t.equal for t in self.two_term)
            and all(r.zero for r in self.residuals)
            and self.closed_form.equal
        )

    @property
    def check_count(self) -> int:
        return len(self.moments) + len(self.two_term) + len(self.residuals) + 1


def decimal_string(value: Fraction, digits: int) -> str:
    """Correctly rounded fixed-point rendering, ties to even."""
    if digits < 0:
        raise ValueError(f"digits must be nonnegative, got {digits}")
    sign = "-" if value < 0 else ""
    scale = 10**digits
    quotient, remainder = divmod(abs(value).numerator * scale, abs(value).denominator)
    double = 2 * remainder
    if double > abs(value).denominator or (
        double == abs(value).denominator and quotient % 2 == 1
    ):
        quotient += 1
    if digits == 0:
        return f"{sign}{quotient}"
    whole, frac = divmod(quotient, scale)
    return f"{sign}{whole}.{frac:0{digits}d}"


# ---------------------------------------------------------------------------
# Parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="hydromoments",
        description="Exact radial moments <r^k> of d-dimensional hydrogen-like bound states.",
        allow_abbrev=False,
    )
    parser.add_argument("--n", type=int, metavar="N", help="principal quantum number (single state)")
    parser.add_argument("--l", type=int, metavar="L", help="orbital quantum number (default 0)")
    parser.add_argument("--d", type=int, metavar="D", help="spatial dimension (default 3)")
    parser.add_argument("--grid-n", metavar="A..B", help="range of n (grid mode)")
    parser.add_argument(
        "--grid-l", metavar="A..B", help="range of l, clipped to n-1 per state (default: every valid l)"
    )
    parser.add_argument("--grid-d", metavar="A..B", help="range of d (default 3)")
    parser.add_argument(
        "--kmin",
        type=int,
        metavar="K",
        help="lowest moment order (default: 0 for compute, the existence bound for verify)",
    )
    parser.add_argument("--kmax", type=int, metavar="K", help="highest moment order (default 4)")
    parser.add_argument("--Z", metavar="P/Q", help="nuclear charge folded into rendered values (default 1)")
    parser.add_argument("--format", choices=_FORMATS, help="output format (default table)")
    parser.add_argument("--mode", choices=_MODES, help="compute tables or verify identities (default compute)")
    parser.add_argument(
        "--decimals", type=int, metavar="D", help="also render decimals with D digits, ties to even"
    )
    parser.add_argument("--batch", metavar="FILE", help="JSON-lines file, one job object per line")
    return parser


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: D102  (argparse hook)
        raise UsageError(message)


def _namespace_options(ns: argparse.Namespace) -> dict:
    return {name: getattr(ns, name) for name in _OPTION_NAMES if getattr(ns, name) is not None}


def _require_int(raw, name: str, where: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise UsageError(f"{where}: {name} must be an integer, got {raw!r}")
    return raw


def _parse_range(raw, name: str, floor: int, where: str) -> tuple[int, int]:
    if isinstance(raw, bool):
        raise UsageError(f"{where}: {name} must be an integer or an A..B string")
    if isinstance(raw, int):
        low = high = raw
    elif isinstance(raw, str):
        match = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?", raw)
        if match is None:
            raise UsageError(f"{where}: {name} must look like A or A..B, got {raw!r}")
        low = int(match.group(1))
        high = int(match.group(2)) if match.group(2) is not None else low
    else:
        raise UsageError(f"{where}: {name} must be an integer or an A..B string")
    if low > high:
        raise UsageError(f"{where}: {name} range {raw!r} is empty (lower end exceeds upper)")
    if low < floor:
        raise UsageError(f"{where}: {name} must be >= {floor}, got {low}")
    return low, high


def _parse_charge(raw, where: str) -> Fraction:
    if isinstance(raw, bool) or isinstance(raw, float):
        raise UsageError(f"{where}: Z must be an exact positive rational like 2 or 3/4")
    if isinstance(raw, (int, Fraction)):
        charge = Fraction(raw)
    elif isinstance(raw, str):
        try:
            charge = Fraction(raw.strip())
        except (ValueError, ZeroDivisionError) as err:
            raise UsageError(
                f"{where}: Z must be an exact positive rational like 2 or 3/4, got {raw!r}"
            ) from err
    else:
        raise UsageError(f"{where}: Z must be an exact positive rational like 2 or 3/4")
    if charge <= 0:
        raise UsageError(f"{where}: Z must be positive, got {raw}")
    return charge


def _expand_states(options: dict, where: str) -> list[QuantumState]:
    single = [key for key in ("n", "l", "d") if key in options]
    grid = [key for key in ("grid_n", "grid_l", "grid_d") if key in options]
    if single and grid:
        raise UsageError(f"{where}: single-state options cannot be mixed with grid options")
    if "n" in options:
        n = _require_int(options["n"], "n", where)
        l = _require_int(options.get("l", 0), "l", where)
        d = _require_int(options.get("d", 3), "d", where)
        try:
            return [QuantumState(n, l, d)]
        except InvalidStateError as err:
            raise UsageError(f"{where}: {err}") from err
    if single:
        raise UsageError(f"{where}: l and d need an accompanying n")
    if "grid_n" not in options:
        if grid:
            raise UsageError(f"{where}: grid ranges need grid_n")
        raise UsageError(f"{where}: specify a state with n or a grid with grid_n")
    n_low, n_high = _parse_range(options["grid_n"], "grid_n", 1, where)
    d_low, d_high = _parse_range(options.get("grid_d", 3), "grid_d", 2, where)
    l_range = (
        _parse_range(options["grid_l"], "grid_l", 0, where) if "grid_l" in options else None
    )
    states = []
    for n in range(n_low, n_high + 1):
        if l_range is None:
            l_values = range(0, n)
        else:
            # l is clipped to the valid upper end n-1; states the clip empties
            # out are skipped rather than rejected.
            l_values = range(l_range[0], min(l_range[1], n - 1) + 1)
        for l in l_values:
            for d in range(d_low, d_high + 1):
                states.append(QuantumState(n, l, d))
    if not states:
        raise UsageError(f"{where}: grid selects no valid states")
    return sorted(set(states), key=lambda s: (s.n, s.l, s.d))


def _jobspec_from_options(options: dict, where: str) -> JobSpec:
    unknown = sorted(set(options) - set(_OPTION_NAMES))
    if unknown:
        raise UsageError(f"{where}: unknown option(s) {', '.join(unknown)}")
    states = _expand_states(options, where)
    kmax = _require_int(options.get("kmax", 4), "kmax", where)
    kmin = options.get("kmin")
    if kmin is not None:
        kmin = _require_int(kmin, "kmin", where)
    charge = _parse_charge(options.get("Z", 1), where)
    decimals = options.get("decimals")
    if decimals is not None:
        decimals = _require_int(decimals, "decimals", where)
    try:
        return JobSpec(
            states=tuple(states),
            kmin=kmin,
            kmax=kmax,
            Z=charge,
            format=options.get("format", "table"),
            mode=options.get("mode", "compute"),
            decimals=decimals,
        )
    except ValueError as err:
        raise UsageError(f"{where}: {err}") from err


def parse_args(argv: list[str] | None = None) -> JobSpec:
    """Parse command-line flags into one validated JobSpec.

    Raises UsageError on any invalid input. Batch files describe one job
    per line and are expanded by batch_jobs(), not here.
    """
    ns = _build_parser().parse_args(argv)
    if ns.batch is not None:
        raise UsageError("--batch input is parsed per line by batch_jobs()")
    return _jobspec_from_options(_namespace_options(ns), "arguments")


def batch_jobs(path: str) -> list[JobSpec]:
    """Read a JSON-lines file of job objects, one JobSpec per line.

    Keys mirror the command-line flags with underscores (grid_n, kmax, Z,
    format, mode, decimals, ...). Blank lines are skipped. Every line is a
    self-contained job with the usual defaults.
    """
    jobs = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            text = line.strip()
            if not text:
                continue
            where = f"{path}:{lineno}"
            try:
                data = json.loads(text)
            except json.JSONDecodeError as err:
                raise UsageError(f"{where}: invalid JSON ({err})") from err
            if not isinstance(data, dict):
                raise UsageError(f"{where}: each line must be a JSON object")
            jobs.append(_jobspec_from_options(data, where))
    if not jobs:
        raise UsageError(f"{path}: no jobs found")
    return jobs


# ---------------------------------------------------------------------------
# Evaluation


def _effective_kmin(spec: JobSpec, state: QuantumState) -> int:
    if spec.kmin is not None:
        return spec.kmin
    if spec.mode == "verify":
        return min(existence_bound(state), spec.kmax)
    return min(0, spec.kmax)


def compute_records(spec: JobSpec) -> list[dict]:
    """Flat output records for compute mode, sorted by (n, l, d, k).

    Values carry the supplied charge folded in: the rendered number is
    M_k / Z^k, in units of a0^k. Divergent orders come out flagged with
    exists = false and a null value.
    """
    records = []
    for state in spec.states:
        kmin = _effective_kmin(spec, state)
        table = full_table(state, kmin, spec.kmax)
        for k in range(kmin, spec.kmax + 1):
            record = {
                "n": state.n,
                "l": state.l,
                "d": state.d,
                "k": k,
                "exists": table.exists(k),
                "value": None,
                "decimal": None,
                "unit": f"a0^{k}",
            }
            if table.exists(k):
                value = table.value(k) * spec.Z ** (-k)
                record["value"] = str(value)
                if spec.decimals is not None:
                    record["decimal"] = decimal_string(value, spec.decimals)
            records.append(record)
    return records


def verify_state(state: QuantumState, kmin: int, kmax: int) -> MomentReport:
    """Cross-check every identity for one state over [kmin, kmax].

    Four families of checks: recurrence against the integration oracle at
    every covered order (with agreement on nonexistence for divergent
    orders), two-term inversion against the descend chain, the hypervirial
    residual, and the closed-form first moment against the upward
    recurrence.
    """
    table = full_table(state, kmin, kmax)
    bound = existence_bound(state)
    moments = []
    for k in range(kmin, kmax + 1):
        if moment_exists(state, k):
            recurrence_value = table.value(k)
            oracle_value = oracle.oracle_moment(state, k)
            moments.append(
                MomentCheck(
                    k=k,
                    recurrence=recurrence_value,
                    oracle=oracle_value,
                    exists=True,
                    equal=recurrence_value == oracle_value,
                )
            )
        else:
            try:
                oracle.oracle_moment(state, k)
                agreed = False  # the oracle failed to flag a divergent moment
            except NonexistentMomentError:
                agreed = k in table.missing_orders()
            moments.append(
                MomentCheck(k=k, recurrence=None, oracle=None, exists=False, equal=agreed)
            )
    params = spectral_params(state)
    two_term = []
    for k in range(0, params.L):
        source, target = k - 1, -k - 2
        if source < kmin or source > kmax or target < kmin or target > kmax:
            continue
        inverted = invert_two_term(state, k, table.moment(source))
        descended = table.value(target)
        two_term.append(
            TwoTermCheck(
                inversion_k=k,
                order=target,
                inverted=inverted.value,
                descended=descended,
                equal=inverted.value == descended,
            )
        )
    residuals = []
    for k in range(max(kmin, bound) + 2, kmax + 1):
        result = kramers_residual(state, k, table)
        residuals.append(ResidualCheck(k=k, residual=result.residual, zero=result.residual == 0))
    if kmin <= 1 <= kmax:
        first = table.value(1)
    else:
        first = ascend(state, 1).value(1)
    closed = closed_form_r(state)
    closed_check = ClosedFormCheck(
        recurrence=first, closed_form=closed.value, equal=first == closed.value
    )
    return MomentReport(
        state=state,
        moments=tuple(moments),
        two_term=tuple(two_term),
        residuals=tuple(residuals),
        closed_form=closed_check,
    )


def _report_rows(report: MomentReport) -> list[dict]:
    state = report.state
    base = {"n": state.n, "l": state.l, "d": state.d}
    rows = []
    for m in report.moments:
        rows.append(
            {
                **base,
                "check": "oracle",
                "k": m.k,
                "candidate": None if m.recurrence is None else str(m.recurrence),
                "reference": None if m.oracle is None else str(m.oracle),
                "ok": m.equal,
            }
        )
    for t in report.two_term:
        rows.append(
            {
                **base,
                "check": "two_term",
                "k": t.order,
                "candidate": str(t.descended),
                "reference": str(t.inverted),
                "ok": t.equal,
            }
        )
    for r in report.residuals:
        rows.append(
            {
                **base,
                "check": "residual",
                "k": r.k,
                "candidate": str(r.residual),
                "reference": "0",
                "ok": r.zero,
            }
        )
    rows.append(
        {
            **base,
            "check": "closed_form",
            "k": 1,
            "candidate": str(report.closed_form.recurrence),
            "reference": str(report.closed_form.closed_form),
            "ok": report.closed_form.equal,
        }
    )
    return rows


# ---------------------------------------------------------------------------
# Rendering


def render_json(records: list[dict]) -> str:
    """One JSON array per job; parsing and re-rendering is byte-identical."""
    return json.dumps(records, indent=2) + "\n"


def _cell(value, missing: str) -> str:
    if value is None:
        return missing
    if value is True:
        return "true"
    if value is False:
        return "false"
    return str(value)


def render_csv(records: list[dict], fields: tuple[str, ...]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(fields)
    for record in records:
        writer.writerow([_cell(record.get(field), "") for field in fields])
    return buffer.getvalue()


_RIGHT_ALIGNED = {"n", "l", "d", "k"}


def render_table(records: list[dict], fields: tuple[str, ...]) -> str:
    rows = [[_cell(record.get(field), "-") for field in fields] for record in records]
    widths = [
        max(len(field), *(len(row[i]) for row in rows)) if rows else len(field)
        for i, field in enumerate(fields)
    ]
    lines = []
    header = [
        field.rjust(widths[i]) if field in _RIGHT_ALIGNED else field.ljust(widths[i])
        for i, field in enumerate(fields)
    ]
    lines.append("  ".join(header).rstrip())
    for row in rows:
        cells = [
            cell.rjust(widths[i]) if fields[i] in _RIGHT_ALIGNED else cell.ljust(widths[i])
            for i, cell in enumerate(row)
        ]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Driving


def run(spec: JobSpec) -> int:
    """Evaluate one job, write its records to stdout, return the exit code."""
    if spec.mode == "compute":
        records = compute_records(spec)
        if spec.format == "json":
            text = render_json(records)
        elif spec.format == "csv":
            text = render_csv(records, _CSV_COMPUTE_FIELDS)
        else:
            text = render_table(records, _COMPUTE_FIELDS)
        sys.stdout.write(text)
        return 0
    reports = [verify_state(s, _effective_kmin(spec, s), spec.kmax) for s in spec.states]
    records = [row for report in reports for row in _report_rows(report)]
    if spec.format == "json":
        text = render_json(records)
    elif spec.format == "csv":
        text = render_csv(records, _VERIFY_FIELDS)
    else:
        text = render_table(records, _VERIFY_FIELDS)
    sys.stdout.write(text)
    total = sum(report.check_count for report in reports)
    failed = sum(1 for record in records if record["ok"] is False)
    passed = all(report.passed for report in reports)
    summary = f"verify: {len(reports)} states, {total} checks, "
    summary += "all passed" if passed else f"{failed} failed"
    print(summary, file=sys.stderr)
    return 0 if passed else 2


def main(argv: list[str] | None = None) -> int:
    """Entry point: parse, run every job, combine exit codes."""
    try:
        ns = _build_parser().parse_args(argv)
        if ns.batch is not None:
            given = [name for name in _OPTION_NAMES if getattr(ns, name) is not None]
            if given:
                raise UsageError("--batch cannot be combined with other options")
            specs = batch_jobs(ns.batch)
        else:
            specs = [_jobspec_from_options(_namespace_options(ns), "arguments")]
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        sys.stderr.write(_build_parser().format_usage())
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    code = 0
    try:
        for spec in specs:
            code = max(code, run(spec))
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    return code
