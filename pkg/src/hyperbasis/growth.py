"""Event-driven simulation of simultaneous disk growth on a cone sphere.

All still-active disks share one radius that only grows.  The next event
is the smallest of three candidate radii: a disk reaching its own
shortest-loop radius (self touch), two active disks meeting halfway
(pair touch), or an active disk reaching a frozen one (pair touch with
one side frozen, consuming a single new point).  Every event freezes the
touched active disk(s) at the event radius and records one geodesic arc:
a loop at the self-touching point, or an edge between the touching pair.

Simultaneous candidates (within 1e-9 relative) are ordered pair-before-
self, then lexicographically by endpoint pair, which makes every run
reproducible bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

from . import bounds
from .errors import BoundViolation, InputError, InvalidMetric

__all__ = [
    "GrowthEvent",
    "GrowthLog",
    "simulate",
    "verify_radius_bounds",
    "arc_graph",
    "log_to_dict",
    "log_from_dict",
]

_TIE_REL = 1e-9
_RADIUS_TOL = 1e-9


@dataclass(frozen=True)
class GrowthEvent:
    m: int
    kind: str                 # "pair" | "self"
    i: int
    j: int | None
    other_frozen: bool
    r: float
    k: int
    j_before: int


@dataclass
class GrowthLog:
    genus: int
    model: str
    events: list[GrowthEvent]

    @property
    def n_points(self) -> int:
        return 2 * self.genus + 2

    @property
    def M(self) -> int:
        return len(self.events)

    def consumed_total(self) -> int:
        return sum(ev.k for ev in self.events)

    def j_final(self) -> int:
        return sum(ev.k for ev in self.events[:-1])

    def validate(self, partial: bool = False) -> None:
        """Structural bookkeeping; radius bounds are checked separately.

        ``partial`` skips the termination arithmetic, for prefixes of a run.
        """
        g, n = self.genus, self.n_points
        if not g >= 2:
            raise InputError(f"genus must be >= 2, got {g}")
        if not partial:
            if not (g + 1 <= self.M <= n):
                raise InputError(f"M = {self.M} outside [{g + 1}, {n}]")
            if self.consumed_total() != n:
                raise InputError(
                    f"events consume {self.consumed_total()} disks, expected {n}"
                )
            if self.j_final() not in (2 * g, 2 * g + 1):
                raise InputError(f"final consumed count {self.j_final()} invalid")
        frozen: set[int] = set()
        j = 0
        r_prev = 0.0
        if partial and not self.events:
            return
        for idx, ev in enumerate(self.events, start=1):
            if ev.m != idx:
                raise InputError(f"event {idx} misnumbered as {ev.m}")
            if ev.j_before != j:
                raise InputError(f"event {idx} has j_before {ev.j_before} != {j}")
            if ev.r < r_prev - _RADIUS_TOL:
                raise InputError(f"event {idx} radius decreases")
            newly: tuple[int, ...]
            if ev.kind == "self":
                if ev.k != 1 or ev.j is not None or ev.other_frozen:
                    raise InputError(f"self event {idx} malformed")
                newly = (ev.i,)
            elif ev.kind == "pair":
                if ev.j is None or ev.i == ev.j:
                    raise InputError(f"pair event {idx} malformed")
                if ev.other_frozen:
                    if ev.k != 1 or ev.j not in frozen:
                        raise InputError(f"pair event {idx} malformed")
                    newly = (ev.i,)
                else:
                    if ev.k != 2 or ev.j in frozen:
                        raise InputError(f"pair event {idx} malformed")
                    newly = (ev.i, ev.j)
            else:
                raise InputError(f"unknown event kind {ev.kind!r}")
            for v in newly:
                if v in frozen or not 1 <= v <= n:
                    raise InputError(f"event {idx} refreezes vertex {v}")
                frozen.add(v)
            j += ev.k
            r_prev = max(r_prev, ev.r)
        if not partial and len(frozen) != n:
            raise InputError("some vertices never froze")


def simulate(model) -> GrowthLog:
    """Run the growth process to completion on a metric model."""
    n = model.n_points
    active = set(range(1, n + 1))
    frozen_radius: dict[int, float] = {}
    events: list[GrowthEvent] = []
    j = 0
    r_prev = 0.0

    while active:
        # (radius, kind rank, endpoint pair, payload); pairs beat self touches
        candidates: list[tuple[float, int, tuple[int, int], dict]] = []
        for i in sorted(active):
            candidates.append(
                (
                    model.loop_radius(i),
                    1,
                    (i, i),
                    {"kind": "self", "i": i, "j": None, "other_frozen": False, "k": 1},
                )
            )
            for w in sorted(active):
                if w <= i:
                    continue
                candidates.append(
                    (
                        model.pair_distance(i, w) / 2.0,
                        0,
                        (i, w),
                        {"kind": "pair", "i": i, "j": w, "other_frozen": False, "k": 2},
                    )
                )
            for f, rf in sorted(frozen_radius.items()):
                candidates.append(
                    (
                        model.pair_distance(i, f) - rf,
                        0,
                        (min(i, f), max(i, f)),
                        {"kind": "pair", "i": i, "j": f, "other_frozen": True, "k": 1},
                    )
                )
        r_min = min(c[0] for c in candidates)
        tol = abs(r_min) * _TIE_REL + 1e-18
        tied = [c for c in candidates if c[0] <= r_min + tol]
        tied.sort(key=lambda c: (c[1], c[2]))
        r, _, _, ev = tied[0]
        if r < r_prev - _RADIUS_TOL:
            raise InvalidMetric(
                f"event radius {r} decreases below {r_prev} at step {len(events) + 1}"
            )
        if r <= 0:
            raise InvalidMetric(f"nonpositive event radius {r}")
        events.append(
            GrowthEvent(
                m=len(events) + 1,
                kind=ev["kind"],
                i=ev["i"],
                j=ev["j"],
                other_frozen=ev["other_frozen"],
                r=r,
                k=ev["k"],
                j_before=j,
            )
        )
        newly = (ev["i"],) if ev["k"] == 1 else (ev["i"], ev["j"])
        for v in newly:
            active.remove(v)
            frozen_radius[v] = r
        j += ev["k"]
        r_prev = max(r_prev, r)

    log = GrowthLog(genus=model.genus, model=model.name, events=events)
    log.validate()
    return log


def verify_radius_bounds(log: GrowthLog) -> list[dict]:
    """Check every event radius against the packing bound; returns the
    per-step slack, raises BoundViolation on the first offending step."""
    report = []
    for ev in log.events:
        limit = bounds.radius_bound(log.genus, ev.j_before)
        if ev.r > limit + _RADIUS_TOL:
            raise BoundViolation(ev.m, ev.r, limit)
        report.append(
            {"m": ev.m, "r": ev.r, "bound": limit, "slack": limit - ev.r}
        )
    return report


def arc_graph(log: GrowthLog, model):
    """Embedded arc arrangement of a growth log, one arc per event with
    the event index as arc id.  Accepts prefixes of a run; untouched
    vertices come out isolated."""
    log.validate(partial=True)
    smap = model.build_arc_graph(log)
    from .spheremap import ComponentKind, classify_components

    kinds = classify_components(smap)
    if any(k is ComponentKind.INVALID for k in kinds):
        raise InvalidMetric("growth log produced an invalid component shape")
    return smap


# -- serialization ------------------------------------------------------


def log_to_dict(log: GrowthLog) -> dict:
    return {
        "genus": log.genus,
        "model": log.model,
        "events": [asdict(ev) for ev in log.events],
    }


def log_from_dict(data) -> GrowthLog:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise InputError(f"bad growth log JSON: {e}") from e
    try:
        events = [
            GrowthEvent(
                m=int(ev["m"]),
                kind=str(ev["kind"]),
                i=int(ev["i"]),
                j=None if ev.get("j") is None else int(ev["j"]),
                other_frozen=bool(ev.get("other_frozen", False)),
                r=float(ev["r"]),
                k=int(ev["k"]),
                j_before=int(ev["j_before"]),
            )
            for ev in data["events"]
        ]
        log = GrowthLog(
            genus=int(data["genus"]),
            model=str(data.get("model", "?")),
            events=events,
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed growth log: {e}") from e
    log.validate()
    return log
