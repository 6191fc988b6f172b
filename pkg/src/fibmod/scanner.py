"""Batch execution of checks over prime ranges, and the Wall-Sun-Sun search.

Work is partitioned by prime: all checks at one prime share a cache (the
factored central-binomial stream and inverse tables), and per-prime row
lists are merged in ascending prime order, so reports are byte-identical
regardless of the worker count.
"""

from __future__ import annotations

import json
import multiprocessing
import os
import random
from dataclasses import dataclass, field
from math import isqrt

from ._version import __version__
from .checks import (
    DEFAULT_TERM_BUDGET,
    BudgetExceeded,
    CheckError,
    CheckKind,
    CheckParams,
    UnknownCheckId,
    get_check,
    run_check,
)
from .modarith import jacobi
from .sequences import DomainError, _fib_pair_mod


class CheckpointCorrupt(Exception):
    """A resume file does not match the checkpoint format."""


# ---------------------------------------------------------------------------
# Prime generation.
# ---------------------------------------------------------------------------


def _small_primes(limit: int) -> list[int]:
    if limit < 2:
        return []
    mask = bytearray([1]) * (limit + 1)
    mask[0] = mask[1] = 0
    for i in range(2, isqrt(limit) + 1):
        if mask[i]:
            mask[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return [i for i in range(limit + 1) if mask[i]]


def sieve_primes(lo: int, hi: int) -> list[int]:
    """All primes in [lo, hi], ascending, by a segmented sieve.

    Memory stays O(sqrt(hi) + segment) no matter how wide the range is.
    """
    if hi < 2 or hi < lo:
        return []
    base = _small_primes(isqrt(hi))
    segment = 1 << 17
    out: list[int] = []
    lo = max(lo, 2)
    for low in range(lo, hi + 1, segment):
        high = min(low + segment, hi + 1)
        mask = bytearray([1]) * (high - low)
        for q in base:
            start = max(q * q, (low + q - 1) // q * q)
            if start >= high:
                continue
            mask[start - low :: q] = bytes((high - start + q - 1) // q)
        for i in range(high - low):
            if mask[i] and low + i >= 2:
                out.append(low + i)
    return out


# ---------------------------------------------------------------------------
# Scan requests and reports.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AllSmall:
    """m runs over 1..p-1."""


@dataclass(frozen=True)
class Sample:
    """count seeded draws of m from [p, p^2), coprime to p, distinct."""

    count: int
    seed: int


@dataclass(frozen=True)
class MList:
    """An explicit list of m values."""

    values: tuple[int, ...]


MPolicy = AllSmall | Sample | MList


@dataclass(frozen=True)
class ScanRequest:
    """One deterministic batch of checks.

    Identical requests (seed included) produce byte-identical reports no
    matter how many workers run them.
    """

    check_ids: tuple[str, ...]
    p_min: int
    p_max: int
    a_max: int = 1
    m_policy: tuple[MPolicy, ...] = (AllSmall(),)
    jobs: int = 1
    budget: int = DEFAULT_TERM_BUDGET
    force: bool = False


@dataclass(frozen=True)
class Row:
    check_id: str
    p: int
    a: int
    m: int | None
    exponent: int | None
    lhs: int | None
    rhs: int | None
    defect_valuation: int | None
    status: str


@dataclass
class Report:
    request: ScanRequest
    rows: list[Row]
    summary: dict[str, dict[str, int]] = field(default_factory=dict)


def _sample_values(pol: Sample, p: int) -> list[int]:
    # Seeded per prime so draws do not depend on scan order or workers.
    rng = random.Random(f"{pol.seed}:{p}")
    want = min(pol.count, (p - 1) * (p - 1))
    values: set[int] = set()
    while len(values) < want:
        v = rng.randrange(p, p * p)
        if v % p:
            values.add(v)
    return sorted(values)


def _m_values(p: int, policies: tuple[MPolicy, ...]) -> list[int]:
    values: set[int] = set()
    for pol in policies:
        if isinstance(pol, AllSmall):
            values.update(range(1, p))
        elif isinstance(pol, Sample):
            values.update(_sample_values(pol, p))
        else:
            values.update(pol.values)
    return sorted(values)


def _prime_worker(task) -> list[Row]:
    p, ids, a_max, policies, budget, force = task
    cache: dict = {}
    rows: list[Row] = []
    for cid in ids:
        spec = get_check(cid)
        m_list = _m_values(p, policies) if spec.uses_m else [None]
        for a in range(1, a_max + 1):
            for m in m_list:
                params = CheckParams(p=p, a=a, m=m, force=force, budget=budget)
                try:
                    v = run_check(cid, params, cache)
                    rows.append(
                        Row(
                            cid,
                            p,
                            a,
                            m,
                            v.modulus.e,
                            v.lhs.value,
                            v.rhs.value,
                            v.defect_valuation,
                            "PASS" if v.passed else "FAIL",
                        )
                    )
                except (DomainError, BudgetExceeded, CheckError):
                    rows.append(Row(cid, p, a, m, None, None, None, None, "SKIP"))
    return rows


def scan(request: ScanRequest) -> Report:
    """Run every requested check over every odd prime in range.

    Out-of-domain and over-budget combinations become SKIP rows, never
    errors; rows are ordered by (p, check_id, a, m).
    """
    ids = tuple(sorted(set(request.check_ids)))
    for cid in ids:
        get_check(cid)  # raises UnknownCheckId eagerly
    primes = [p for p in sieve_primes(request.p_min, request.p_max) if p > 2]
    tasks = [
        (p, ids, request.a_max, request.m_policy, request.budget, request.force)
        for p in primes
    ]
    rows: list[Row] = []
    if request.jobs > 1 and len(tasks) > 1:
        with multiprocessing.Pool(processes=request.jobs) as pool:
            for chunk in pool.imap(_prime_worker, tasks, chunksize=4):
                rows.extend(chunk)
    else:
        for task in tasks:
            rows.extend(_prime_worker(task))
    summary: dict[str, dict[str, int]] = {
        cid: {"pass": 0, "fail": 0, "skip": 0} for cid in ids
    }
    for row in rows:
        summary[row.check_id][row.status.lower()] += 1
    return Report(request=request, rows=rows, summary=summary)


def worst_failures(report: Report) -> dict[str, int]:
    """Count of FAIL rows per kind, for exit-code policy."""
    counts = {kind: 0 for kind in CheckKind}
    for row in report.rows:
        if row.status == "FAIL":
            counts[get_check(row.check_id).kind] += 1
    return {kind.value: n for kind, n in counts.items()}


# ---------------------------------------------------------------------------
# Report rendering.  The CSV column set and order are fixed; JSON carries
# one object per line with identical field names.
# ---------------------------------------------------------------------------

CSV_COLUMNS = "check_id,p,a,m,exponent,lhs,rhs,defect_valuation,status"


def _policy_text(policies: tuple[MPolicy, ...]) -> str:
    parts = []
    for pol in policies:
        if isinstance(pol, AllSmall):
            parts.append("all")
        elif isinstance(pol, Sample):
            parts.append(f"sample:{pol.count}:{pol.seed}")
        else:
            parts.append("list:" + ",".join(str(v) for v in pol.values))
    return "+".join(parts)


def _sample_seed(request: ScanRequest) -> str:
    seeds = [str(pol.seed) for pol in request.m_policy if isinstance(pol, Sample)]
    return ",".join(seeds) if seeds else "none"


def _header_lines(report: Report) -> list[str]:
    # jobs is deliberately omitted: it cannot affect the rows, and the
    # report must be byte-identical across worker counts.
    r = report.request
    return [
        f"# fibmod {__version__} scan report",
        "# request: ids=%s pmin=%d pmax=%d amax=%d m_policy=%s budget=%d force=%s"
        % (
            ",".join(sorted(set(r.check_ids))),
            r.p_min,
            r.p_max,
            r.a_max,
            _policy_text(r.m_policy),
            r.budget,
            str(r.force).lower(),
        ),
        f"# sample_seed: {_sample_seed(r)}",
    ]


def _cell(value) -> str:
    return "" if value is None else str(value)


def render_csv(report: Report) -> str:
    lines = _header_lines(report)
    lines.append(CSV_COLUMNS)
    for row in report.rows:
        lines.append(
            ",".join(
                (
                    row.check_id,
                    str(row.p),
                    str(row.a),
                    _cell(row.m),
                    _cell(row.exponent),
                    _cell(row.lhs),
                    _cell(row.rhs),
                    _cell(row.defect_valuation),
                    row.status,
                )
            )
        )
    for cid in sorted(report.summary):
        s = report.summary[cid]
        lines.append(f"# summary: {cid} pass={s['pass']} fail={s['fail']} skip={s['skip']}")
    return "\n".join(lines) + "\n"


def render_jsonl(report: Report) -> str:
    r = report.request
    head = {
        "tool": "fibmod",
        "version": __version__,
        "request": {
            "ids": sorted(set(r.check_ids)),
            "pmin": r.p_min,
            "pmax": r.p_max,
            "amax": r.a_max,
            "m_policy": _policy_text(r.m_policy),
            "budget": r.budget,
            "force": r.force,
        },
        "sample_seed": _sample_seed(r),
    }
    lines = [json.dumps(head)]
    for row in report.rows:
        lines.append(
            json.dumps(
                {
                    "check_id": row.check_id,
                    "p": row.p,
                    "a": row.a,
                    "m": row.m,
                    "exponent": row.exponent,
                    "lhs": row.lhs,
                    "rhs": row.rhs,
                    "defect_valuation": row.defect_valuation,
                    "status": row.status,
                }
            )
        )
    lines.append(json.dumps({"summary": {cid: report.summary[cid] for cid in sorted(report.summary)}}))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Wall-Sun-Sun search.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WssRecord:
    """One prime with the signed Fibonacci quotient F_{p-(p/5)}/p mod p.

    The quotient is reported in (-p/2, p/2], the near-miss convention;
    it is zero exactly when p is a Wall-Sun-Sun prime.
    """

    p: int
    quotient: int


CHECKPOINT_MAGIC = "wss-checkpoint v1"
CHECKPOINT_EVERY = 10_000


def _write_checkpoint(path: str, last_prime: int, records: list[WssRecord]) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write(f"{CHECKPOINT_MAGIC}\n")
        fh.write(f"last_prime={last_prime}\n")
        for rec in records:
            fh.write(f"{rec.p},{rec.quotient}\n")
    os.replace(tmp, path)


def _read_checkpoint(path: str) -> tuple[int, list[WssRecord]]:
    try:
        with open(path, encoding="ascii") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CheckpointCorrupt(f"cannot read checkpoint {path}: {exc}") from exc
    if not lines or lines[0] != CHECKPOINT_MAGIC:
        raise CheckpointCorrupt(f"{path}: missing '{CHECKPOINT_MAGIC}' header")
    if len(lines) < 2 or not lines[1].startswith("last_prime="):
        raise CheckpointCorrupt(f"{path}: missing last_prime line")
    try:
        last_prime = int(lines[1].removeprefix("last_prime="))
    except ValueError as exc:
        raise CheckpointCorrupt(f"{path}: bad last_prime value") from exc
    records = []
    for lineno, line in enumerate(lines[2:], start=3):
        parts = line.split(",")
        try:
            p, q = int(parts[0]), int(parts[1])
        except (IndexError, ValueError) as exc:
            raise CheckpointCorrupt(f"{path}:{lineno}: bad record {line!r}") from exc
        if len(parts) != 2 or p > last_prime:
            raise CheckpointCorrupt(f"{path}:{lineno}: bad record {line!r}")
        records.append(WssRecord(p, q))
    return last_prime, records


def wss_search(
    limit: int,
    near_threshold: int | None = None,
    checkpoint_path: str | None = None,
    checkpoint_every: int = CHECKPOINT_EVERY,
) -> list[WssRecord]:
    """Scan primes 7 <= p <= limit for Wall-Sun-Sun primes and near misses.

    Computes F_{p-(p/5)} mod p^2 by fast doubling and keeps records with
    |quotient| <= near_threshold (all records when the threshold is
    None).  When ``checkpoint_path`` is given, progress is persisted
    every ``checkpoint_every`` primes and the search resumes from the
    file if it already exists.
    """
    if limit < 7:
        raise ValueError("limit must be at least 7")
    start = 7
    records: list[WssRecord] = []
    if checkpoint_path and os.path.exists(checkpoint_path):
        last_prime, records = _read_checkpoint(checkpoint_path)
        start = last_prime + 1
    processed = 0
    last = None
    for p in sieve_primes(start, limit):
        if p < 7:
            continue
        idx = p - jacobi(p, 5)
        f = _fib_pair_mod(idx, p * p)[0]
        q = f // p  # exact: p | F_{p-(p/5)}
        signed = q - p if q > p // 2 else q
        if near_threshold is None or abs(signed) <= near_threshold:
            records.append(WssRecord(p, signed))
        processed += 1
        last = p
        if checkpoint_path and processed % checkpoint_every == 0:
            _write_checkpoint(checkpoint_path, p, records)
    if checkpoint_path and last is not None:
        _write_checkpoint(checkpoint_path, last, records)
    return records


def render_wss_csv(records: list[WssRecord]) -> str:
    lines = ["p,quotient"]
    for rec in records:
        lines.append(f"{rec.p},{rec.quotient}")
    return "\n".join(lines) + "\n"
