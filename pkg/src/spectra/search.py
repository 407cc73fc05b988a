"""Exhaustive enumeration of equivalence classes for small n.

Every class of length-n spectra has an integral representative with all
entries in ``[1, 2^n]``, so scanning that box finds every class. Two
independent strategies are provided and must agree:

* ``box``: depth-first over increasing integer tuples in the box. At the last
  coordinate only one value per distinct profile is tried.
* ``profile``: depth-first over profiles, deciding one triple at a time in
  lexicographic order and discarding any partial profile with no witness
  in the box.

``verify_conant`` then looks, for every class, for a witness in Conant's box
``2^i - 1 <= t_i <= 2^n - 1``.

Internally a profile is an int bitmask: bit ``p`` is set when the p-th triple
of ``spectrum.triples(n)`` is a member.
"""
from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional, Sequence

from . import __version__
from .errors import BudgetExhausted, CheckpointCorrupt, InvariantViolation, UnsupportedSize
from .spectrum import IntegralSpectrum, TriangleProfile, monotone_consistent, profile, triples

log = logging.getLogger(__name__)

MAX_N = 8
VERIFY_MAX_N = 7
BOX_STRATEGY_MAX_N = 5
SATISFIED = "Satisfied"
NO_WITNESS = "NoWitnessFound"


# -- profile bitmasks


@lru_cache(maxsize=None)
def _level_table(n: int) -> tuple[tuple[tuple[int, int, int], ...], ...]:
    """For each 0-based k, the ``(i, j, bit)`` of triples whose largest index is k."""
    table = [[] for _ in range(n)]
    for bit, (i, j, k) in enumerate(triples(n)):
        table[k - 1].append((i - 1, j - 1, bit))
    return tuple(tuple(row) for row in table)


def _mask_of(t: Sequence[int]) -> int:
    mask = 0
    for k, row in enumerate(_level_table(len(t))):
        for i, j, bit in row:
            if t[i] + t[j] >= t[k]:
                mask |= 1 << bit
    return mask


def _to_profile(n: int, mask: int) -> TriangleProfile:
    return TriangleProfile(n, tuple(bool(mask >> b & 1) for b in range(len(triples(n)))))


def _from_profile(p: TriangleProfile) -> int:
    return sum(1 << b for b, m in enumerate(p.members) if m)


def _bits(n: int, mask: int) -> str:
    return "".join("1" if mask >> b & 1 else "0" for b in range(len(triples(n))))


def _unbits(text: str) -> int:
    return sum(1 << b for b, c in enumerate(text) if c == "1")


# -- witness search in a box


def _propagate(lb: list[int], ub: list[int], pos, neg) -> bool:
    """Tighten integer bounds to a fixpoint; ``False`` if some interval empties.

    ``pos`` holds ``(i, j, k)`` with ``t_k <= t_i + t_j``; ``neg`` holds
    ``(i, j, k)`` with ``t_k >= t_i + t_j + 1``. Indices are 0-based.
    """
    n = len(lb)
    changed = True
    while changed:
        changed = False
        for k in range(1, n):
            if lb[k] <= lb[k - 1]:
                lb[k] = lb[k - 1] + 1
                changed = True
        for k in range(n - 1, 0, -1):
            if ub[k - 1] >= ub[k]:
                ub[k - 1] = ub[k] - 1
                changed = True
        for i, j, k in pos:
            if ub[k] > ub[i] + ub[j]:
                ub[k] = ub[i] + ub[j]
                changed = True
            if i == j:
                need = -((-lb[k]) // 2)
                if lb[i] < need:
                    lb[i] = need
                    changed = True
            else:
                if lb[i] < lb[k] - ub[j]:
                    lb[i] = lb[k] - ub[j]
                    changed = True
                if lb[j] < lb[k] - ub[i]:
                    lb[j] = lb[k] - ub[i]
                    changed = True
        for i, j, k in neg:
            if lb[k] < lb[i] + lb[j] + 1:
                lb[k] = lb[i] + lb[j] + 1
                changed = True
            if i == j:
                cap = (ub[k] - 1) // 2
                if ub[i] > cap:
                    ub[i] = cap
                    changed = True
            else:
                if ub[i] > ub[k] - lb[j] - 1:
                    ub[i] = ub[k] - lb[j] - 1
                    changed = True
                if ub[j] > ub[k] - lb[i] - 1:
                    ub[j] = ub[k] - lb[i] - 1
                    changed = True
        for a, b in zip(lb, ub):
            if a > b:
                return False
    return True


def _search(lower: Sequence[int], upper: Sequence[int], pos, neg) -> Optional[tuple[int, ...]]:
    """Lexicographically least increasing integer tuple in the box meeting the constraints."""
    n = len(lower)
    lb, ub = list(lower), list(upper)
    if not _propagate(lb, ub, pos, neg):
        return None

    def dfs(var: int, lb: list[int], ub: list[int]):
        if var == n:
            return tuple(lb)
        for v in range(lb[var], ub[var] + 1):
            lb2, ub2 = lb[:], ub[:]
            lb2[var] = ub2[var] = v
            if _propagate(lb2, ub2, pos, neg):
                found = dfs(var + 1, lb2, ub2)
                if found is not None:
                    return found
        return None

    return dfs(0, lb, ub)


def _split(n: int, decided: Sequence[bool]):
    pos, neg = [], []
    for (i, j, k), member in zip(triples(n), decided):
        (pos if member else neg).append((i - 1, j - 1, k - 1))
    return pos, neg


def find_in_box(p: TriangleProfile, lower: Sequence[int], upper: Sequence[int]) -> Optional[IntegralSpectrum]:
    """Lexicographically least integral spectrum with profile ``p`` and ``lower <= t <= upper``."""
    n = p.n
    if len(lower) != n or len(upper) != n:
        raise ValueError(f"box bounds must have length {n}")
    if any(a > b for a, b in zip(lower, upper)):
        raise ValueError("lower bound exceeds upper bound")
    if not monotone_consistent(p):
        return None
    pos, neg = _split(n, p.members)
    found = _search([max(1, a) for a in lower], list(upper), pos, neg)
    return None if found is None else IntegralSpectrum(found)


def conant_box(n: int) -> tuple[list[int], list[int]]:
    return [2 ** i - 1 for i in range(1, n + 1)], [2 ** n - 1] * n


# -- records and atlases


@dataclass(frozen=True)
class ClassRecord:
    profile: TriangleProfile
    canonical_witness: IntegralSpectrum
    conant_witness: Optional[IntegralSpectrum] = None
    status: Optional[str] = None  # None until the Conant box has been searched

    def to_json(self) -> dict:
        return {
            "n": self.profile.n,
            "triples": [list(t) for t in self.profile.triples],
            "witness": list(self.canonical_witness.entries),
            "conant_witness": None if self.conant_witness is None else list(self.conant_witness.entries),
            "version": __version__,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ClassRecord":
        p = TriangleProfile.from_json(data)
        cw = data.get("conant_witness")
        return cls(p, IntegralSpectrum(data["witness"]), None if cw is None else IntegralSpectrum(cw))


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


@dataclass(frozen=True)
class ClassAtlas:
    n: int
    records: tuple[ClassRecord, ...]
    complete: bool
    cursor: Optional[int] = None  # next unprocessed work unit when incomplete
    strategy: str = "box"

    def to_lines(self) -> list[str]:
        return [_dumps(r.to_json()) for r in self.records]

    def dumps(self) -> str:
        return "".join(line + "\n" for line in self.to_lines())

    def write(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @property
    def profiles(self) -> set[TriangleProfile]:
        return {r.profile for r in self.records}


def _sort_key(n: int):
    return lambda mask: _bits(n, mask)


def _check_n(n: int, limit: int = MAX_N) -> None:
    if not isinstance(n, int) or not 1 <= n <= limit:
        raise UnsupportedSize(f"n must be an integer in 1..{limit}, got {n!r}")


# -- box strategy


def _box_units(n: int) -> list[tuple]:
    return [(n, t1) for t1 in range(1, 2 ** n - n + 2)]


def _box_unit(n: int, t1: int) -> list[tuple[int, tuple[int, ...]]]:
    """All profiles whose lexicographically least witness in ``[1, 2^n]`` starts with ``t1``."""
    top = 2 ** n
    table = _level_table(n)
    found: dict[int, tuple[int, ...]] = {}
    if n == 1:
        return [(0, (t1,))]
    t = [t1] + [0] * (n - 1)

    def rec(k: int, mask: int) -> None:
        row = table[k]
        prev = t[k - 1]
        if k == n - 1:
            # profile of the last coordinate only changes just above a pair sum
            sums = [(t[i] + t[j], bit) for i, j, bit in row]
            candidates = {prev + 1}
            candidates.update(s + 1 for s, _ in sums if prev + 1 < s + 1 <= top)
            for v in sorted(candidates):
                m = mask
                for s, bit in sums:
                    if s >= v:
                        m |= 1 << bit
                if m not in found:
                    t[k] = v
                    found[m] = tuple(t)
            return
        for v in range(prev + 1, top - (n - 1 - k) + 1):
            t[k] = v
            m = mask
            for i, j, bit in row:
                if t[i] + t[j] >= v:
                    m |= 1 << bit
            rec(k + 1, m)

    rec(1, 0)
    return list(found.items())


# -- profile strategy

_FRONTIER_DEPTH = 8


def _admissible(n: int, decided: Sequence[bool], member: bool) -> bool:
    """Monotone-consistency check for appending one decision to a decided prefix."""
    pos_of = _positions(n)
    i, j, k = triples(n)[len(decided)]
    if member:
        if k - 1 > j and not decided[pos_of[(i, j, k - 1)]]:
            return False
    else:
        if i > 1 and decided[pos_of[(i - 1, j, k)]]:
            return False
        if j - 1 >= i and decided[pos_of[(i, j - 1, k)]]:
            return False
    return True


@lru_cache(maxsize=None)
def _positions(n: int) -> dict:
    return {t: p for p, t in enumerate(triples(n))}


def _children(n: int, decided: tuple[bool, ...], witness: tuple[int, ...]):
    """Feasible one-step extensions, in the order False then True, each with its least witness."""
    top = 2 ** n
    i, j, k = triples(n)[len(decided)]
    own = witness[i - 1] + witness[j - 1] >= witness[k - 1]
    out = []
    for member in (False, True):
        child = decided + (member,)
        if member == own:
            # the parent's least witness satisfies the child, so it is least there too
            out.append((child, witness))
        elif _admissible(n, decided, member):
            pos, neg = _split(n, child)
            w = _search([1] * n, [top] * n, pos, neg)
            if w is not None:
                out.append((child, w))
    return out


def _profile_frontier(n: int) -> list[tuple]:
    total = len(triples(n))
    depth = min(total, _FRONTIER_DEPTH)
    level = [((), tuple(range(1, n + 1)))]
    for _ in range(depth):
        level = [c for node in level for c in _children(n, *node)]
    return [(n, decided, w) for decided, w in level]


def _profile_unit(n: int, decided: tuple[bool, ...], witness: tuple[int, ...]) -> list[tuple[int, tuple[int, ...]]]:
    total = len(triples(n))
    out = []
    stack = [(decided, witness)]
    while stack:
        d, w = stack.pop()
        if len(d) == total:
            out.append((sum(1 << b for b, m in enumerate(d) if m), w))
            continue
        stack.extend(reversed(_children(n, d, w)))
    return out


# -- running work units


def _run(fn: Callable, units: Sequence[tuple], jobs: int) -> Iterator:
    """Apply ``fn`` to each unit, yielding results in unit order."""
    if jobs <= 1 or len(units) <= 1:
        for u in units:
            yield fn(*u)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(fn, *zip(*units))


def _strategy_for(n: int, strategy: Optional[str]) -> str:
    strategy = strategy or ("box" if n <= BOX_STRATEGY_MAX_N else "profile")
    if strategy not in ("box", "profile"):
        raise ValueError(f"unknown strategy {strategy!r}")
    return strategy


def _units(n: int, strategy: str) -> tuple[Callable, list[tuple]]:
    if strategy == "box":
        return _box_unit, _box_units(n)
    return _profile_unit, _profile_frontier(n)


def _merge(found: dict[int, tuple[int, ...]], results: Iterable[tuple[int, tuple[int, ...]]]) -> None:
    for mask, w in results:
        if mask not in found or w < found[mask]:
            found[mask] = w


def _records(n: int, found: dict[int, tuple[int, ...]]) -> tuple[ClassRecord, ...]:
    return tuple(
        ClassRecord(_to_profile(n, mask), IntegralSpectrum(found[mask]))
        for mask in sorted(found, key=_sort_key(n))
    )


def _enumerate(n, strategy, jobs, budget, done_units, on_unit=None):
    fn, units = _units(n, strategy)
    found: dict[int, tuple[int, ...]] = {}
    for results in done_units.values():
        _merge(found, results)
    todo = [idx for idx in range(len(units)) if idx not in done_units]
    if budget is not None and budget < len(todo):
        todo, cursor = todo[:budget], todo[budget]
    else:
        cursor = None
    for idx, results in zip(todo, _run(fn, [units[i] for i in todo], jobs)):
        _merge(found, results)
        if on_unit is not None:
            on_unit(idx, results)
    return found, cursor, len(todo)


def _atlas(n: int, found, cursor, strategy: str) -> ClassAtlas:
    return ClassAtlas(n, _records(n, found), cursor is None, cursor, strategy)


def enumerate_classes(
    n: int,
    budget: Optional[int] = None,
    jobs: int = 1,
    resume: Optional[ClassAtlas] = None,
    strategy: str = "box",
) -> ClassAtlas:
    """Every class of length-n spectra with its least witness in ``[1, 2^n]^n``.

    ``budget`` caps the number of work units processed in this call. When it
    runs out, ``BudgetExhausted`` is raised carrying a partial atlas whose
    ``cursor`` lets a later call with ``resume=`` carry on.
    """
    _check_n(n)
    strategy = _strategy_for(n, strategy)
    done: dict[int, list] = {}
    if resume is not None:
        if resume.n != n or resume.strategy != strategy:
            raise ValueError("resume atlas was built for a different n or strategy")
        if resume.complete:
            return resume
        # units before the cursor are finished; their classes are already merged
        done = {idx: [] for idx in range(resume.cursor)}
        done[-1] = [(_from_profile(r.profile), r.canonical_witness.entries) for r in resume.records]
    found, cursor, _ = _enumerate(n, strategy, jobs, budget, done)
    atlas = _atlas(n, found, cursor, strategy)
    if cursor is not None:
        raise BudgetExhausted(f"budget of {budget} work units used up at unit {cursor}", atlas)
    _validate(atlas)
    return atlas


def enumerate_classes_by_profile(
    n: int,
    budget: Optional[int] = None,
    jobs: int = 1,
    resume: Optional[ClassAtlas] = None,
) -> ClassAtlas:
    return enumerate_classes(n, budget=budget, jobs=jobs, resume=resume, strategy="profile")


def _validate(atlas: ClassAtlas) -> None:
    n = atlas.n
    seen = set()
    for r in atlas.records:
        w = r.canonical_witness
        if r.profile in seen:
            raise InvariantViolation("duplicate profile in atlas")
        seen.add(r.profile)
        if len(w) != n or w[-1] > 2 ** n or profile(w) != r.profile:
            raise InvariantViolation(f"witness {w} does not realize its record's profile")
        if r.conant_witness is not None:
            c = r.conant_witness
            lo, hi = conant_box(n)
            if profile(c) != r.profile or any(not a <= v <= b for a, v, b in zip(lo, c, hi)):
                raise InvariantViolation(f"Conant witness {c} is outside the box or has the wrong profile")


# -- checkpoints


class Checkpoint:
    """Append-only line-delimited log of finished work.

    Line kinds: a ``header`` naming n and the strategy, one ``unit`` line per
    finished enumeration unit, and one ``class`` line per finished Conant
    search. A truncated final line (an interrupted write) is dropped.
    """

    def __init__(self, path, n: int, strategy: str):
        self.path = Path(path)
        self.n = n
        self.strategy = strategy
        self.units: dict[int, list] = {}
        self.classes: dict[int, Optional[tuple[int, ...]]] = {}
        self._load()

    def _header(self) -> dict:
        return {"kind": "header", "n": self.n, "strategy": self.strategy, "version": __version__}

    def _load(self) -> None:
        if not self.path.exists() or self.path.stat().st_size == 0:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text(_dumps(self._header()) + "\n", encoding="utf-8")
            return
        raw = self.path.read_bytes()
        lines = raw.split(b"\n")
        good = 0  # byte length of the intact prefix
        records = []
        for idx, line in enumerate(lines):
            last = idx == len(lines) - 1
            if not line.strip():
                if not last:
                    good += len(line) + 1
                continue
            try:
                rec = json.loads(line)
                if last:
                    raise ValueError("line not terminated")
            except ValueError:
                if last:
                    log.warning("dropping truncated trailing checkpoint line in %s", self.path)
                    with open(self.path, "r+b") as fh:
                        fh.truncate(good)
                    break
                raise CheckpointCorrupt(f"{self.path}: line {idx + 1} is not valid JSON") from None
            records.append(rec)
            good += len(line) + 1
        if not records or records[0].get("kind") != "header":
            raise CheckpointCorrupt(f"{self.path}: missing header line")
        head = records[0]
        if head.get("n") != self.n or head.get("strategy") != self.strategy:
            raise CheckpointCorrupt(
                f"{self.path}: written for n={head.get('n')} strategy={head.get('strategy')}, "
                f"not n={self.n} strategy={self.strategy}"
            )
        try:
            for rec in records[1:]:
                if rec["kind"] == "unit":
                    self.units[int(rec["index"])] = [(_unbits(b), tuple(w)) for b, w in rec["classes"]]
                elif rec["kind"] == "class":
                    w = rec["conant_witness"]
                    self.classes[_unbits(rec["members"])] = None if w is None else tuple(w)
                else:
                    raise CheckpointCorrupt(f"{self.path}: unknown record kind {rec['kind']!r}")
        except (KeyError, TypeError, ValueError) as exc:
            raise CheckpointCorrupt(f"{self.path}: malformed record ({exc})") from None

    def _append(self, rec: dict) -> None:
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(_dumps(rec) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def add_unit(self, idx: int, results) -> None:
        self.units[idx] = list(results)
        self._append({
            "kind": "unit",
            "index": idx,
            "classes": [[_bits(self.n, m), list(w)] for m, w in results],
        })

    def add_class(self, mask: int, witness: Optional[tuple[int, ...]]) -> None:
        self.classes[mask] = witness
        self._append({
            "kind": "class",
            "members": _bits(self.n, mask),
            "conant_witness": None if witness is None else list(witness),
        })


# -- Conant verification


@dataclass(frozen=True)
class VerificationReport:
    n: int
    atlas: ClassAtlas
    class_count: int
    satisfied: int
    no_witness: int
    wall_time: float
    complete: bool
    strategy: str = "box"

    def to_json(self) -> dict:
        return {
            "version": __version__,
            "n": self.n,
            "strategy": self.strategy,
            "complete": self.complete,
            "classes": self.class_count,
            "satisfied": self.satisfied,
            "no_witness_found": self.no_witness,
            "wall_time_s": round(self.wall_time, 3),
        }


def _conant_job(n: int, mask: int) -> Optional[tuple[int, ...]]:
    lo, hi = conant_box(n)
    w = find_in_box(_to_profile(n, mask), lo, hi)
    return None if w is None else w.entries


def verify_conant(
    n: int,
    jobs: int = 1,
    checkpoint_path=None,
    budget: Optional[int] = None,
    strategy: Optional[str] = None,
) -> VerificationReport:
    """Search Conant's box for every class of length-n spectra.

    ``budget`` caps the work units (enumeration units plus per-class
    searches) done in this call; with a checkpoint, a later call picks up
    where this one stopped.
    """
    _check_n(n, VERIFY_MAX_N)
    strategy = _strategy_for(n, strategy)
    started = time.perf_counter()
    ckpt = Checkpoint(checkpoint_path, n, strategy) if checkpoint_path is not None else None
    remaining = budget

    def partial(found, cursor, results):
        atlas = _atlas(n, found, cursor, strategy)
        return _report(n, atlas, results, started, strategy, complete=False)

    found, cursor, processed = _enumerate(
        n, strategy, jobs, remaining, dict(ckpt.units) if ckpt else {},
        on_unit=ckpt.add_unit if ckpt else None,
    )
    results: dict[int, Optional[tuple[int, ...]]] = dict(ckpt.classes) if ckpt else {}
    if cursor is not None:
        raise BudgetExhausted(f"budget of {budget} work units used up during enumeration",
                              partial(found, cursor, results))
    if remaining is not None:
        remaining -= processed

    masks = sorted(found, key=_sort_key(n))
    todo = [m for m in masks if m not in results]
    stopped = False
    if remaining is not None and remaining < len(todo):
        todo, stopped = todo[:remaining], True
    for mask, w in zip(todo, _run(_conant_job, [(n, m) for m in todo], jobs)):
        results[mask] = w
        if ckpt:
            ckpt.add_class(mask, w)
    if stopped:
        raise BudgetExhausted(f"budget of {budget} work units used up during Conant search",
                              partial(found, None, results))

    records = []
    for mask in masks:
        w = results[mask]
        records.append(ClassRecord(
            _to_profile(n, mask),
            IntegralSpectrum(found[mask]),
            None if w is None else IntegralSpectrum(w),
            SATISFIED if w is not None else NO_WITNESS,
        ))
    atlas = ClassAtlas(n, tuple(records), True, None, strategy)
    _validate(atlas)
    report = _report(n, atlas, results, started, strategy, complete=True)
    if report.no_witness:
        log.error("n=%d: %d classes have no representative in Conant's box", n, report.no_witness)
    return report


def _report(n, atlas, results, started, strategy, complete) -> VerificationReport:
    satisfied = sum(1 for w in results.values() if w is not None)
    return VerificationReport(
        n=n,
        atlas=atlas,
        class_count=len(atlas.records),
        satisfied=satisfied,
        no_witness=len(results) - satisfied,
        wall_time=time.perf_counter() - started,
        complete=complete,
        strategy=strategy,
    )
