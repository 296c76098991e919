"""Replay the four model constructions and verify every claim they rest on.

A report body is plain JSON data and depends only on (theorem, q); wall-clock
timing is kept beside it so that bodies can be compared byte for byte.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import drinfeld as dr
from .desing import g_desingularize
from .fan import STRICT, Fan
from .io import fraction_str

THEOREMS = ("terminal", "essential", "compact-terminal", "compact-essential")
PROPERTIES = ("regular", "terminal", "concave-roof", "complete", "shed-volume")


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witness": self.witness}


@dataclass
class RunReport:
    construction: str
    q: int | None
    checks: list[Check] = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    fan: Fan | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def body(self) -> dict:
        out = {"construction": self.construction, "q": self.q, "passed": self.passed,
               "checks": [c.to_dict() for c in self.checks], "notes": self.notes}
        if self.fan is not None:
            out["fan_sha256"] = self.fan.fingerprint()
        return out

    def body_json(self) -> str:
        return json.dumps(self.body(), sort_keys=True, indent=1) + "\n"

    def to_json(self) -> str:
        data = {"body": self.body(), "timing": {"seconds": round(self.seconds, 6)}}
        return json.dumps(data, sort_keys=True, indent=1) + "\n"


def _vec(v) -> list[int]:
    return list(v)


def _cone(rays) -> list[list[int]]:
    return [list(r) for r in rays]


# fan predicates shared by replay and the check command

def check_regular(fan: Fan) -> Check:
    bad = [{"cone": _cone(c.rays), "multiplicity": c.multiplicity}
           for c in fan.maximal_cones if c.multiplicity != 1]
    return Check("regular", not bad, bad[0] if bad else {"cones": len(fan.cones)})


def check_terminal(fan: Fan) -> Check:
    found = fan.terminal_witnesses()
    if found:
        cone, point = found[0]
        return Check("terminal", False, {"cone": _cone(cone), "point": _vec(point)})
    return Check("terminal", True, {"cones": len(fan.cones)})


def check_concave_roof(fan: Fan) -> Check:
    report = fan.roof_concavity()
    bad = [w for w in report.walls if w.verdict != STRICT]
    if bad:
        w = bad[0]
        return Check("concave-roof", False,
                     {"wall": _cone(w.wall.rays), "verdict": w.verdict,
                      "values": [fraction_str(v) for v in w.values]})
    return Check("concave-roof", True, {"internal_walls": len(report.walls)})


def check_complete(fan: Fan) -> Check:
    border = [w for w in fan.walls if not w.internal]
    if border:
        return Check("complete", False, {"boundary_wall": _cone(border[0].rays)})
    dirs = fan.generic_directions()
    for v in dirs:
        counts = fan.cover_counts([v])
        if counts and counts[0] != 1:
            return Check("complete", False, {"direction": _vec(v), "covered": counts[0]})
    return Check("complete", fan.is_complete(), {"directions": len(dirs)})


def check_shed_volume(fan: Fan) -> Check:
    return Check("shed-volume", True, {"volume": fraction_str(fan.shed_volume())})


CHECKS = {"regular": check_regular, "terminal": check_terminal,
          "concave-roof": check_concave_roof, "complete": check_complete,
          "shed-volume": check_shed_volume}


def check_fan(fan: Fan, props, name: str = "fan") -> RunReport:
    start = time.perf_counter()
    report = RunReport(name, None, [CHECKS[p](fan) for p in props], fan=fan)
    report.seconds = time.perf_counter() - start
    return report


# theorem replays

def _leave_one_out(q: int) -> Check:
    base, schedule = dr.sigma_M_fan(q), dr.terminal_schedule(q)
    witnesses = []
    for k, entry in enumerate(schedule):
        partial = schedule[:k] + schedule[k + 1:]
        fan = base.apply_schedule(partial)[0]
        found = fan.terminal_witnesses()
        witnesses.append({"omitted": _vec(entry.ray),
                          "point": _vec(found[0][1]) if found else None})
    return Check("leave-one-out breaks terminality",
                 all(w["point"] is not None for w in witnesses), witnesses)


def _replay_terminal(q: int, report: RunReport) -> Fan:
    fan = dr.sigma_min(q)
    fan.validate()
    report.checks += [check_terminal(fan), check_concave_roof(fan), _leave_one_out(q)]
    report.notes["maximal_cones"] = len(fan.cones)
    report.notes["multiplicities"] = sorted(fan.multiplicities())
    return fan


def _replay_essential(q: int, report: RunReport) -> Fan:
    fan = dr.sigma_ess(q)
    fan.validate()
    added = set(fan.rays) - set(dr.sigma_min(q).rays)
    expected = dr.essential_ray_set(q)
    report.checks += [
        check_regular(fan),
        Check("added rays match the essential family", added == expected,
              {"missing": sorted(map(_vec, expected - added)),
               "extra": sorted(map(_vec, added - expected))}),
    ]
    local = Fan.from_cones([dr.sigma_k(q, q + 1), dr.sigma_prime(q, 0)])
    g_run = g_desingularize(local)
    report.notes["g_run"] = {"rays": [_vec(r) for r in g_run.added_rays],
                             "agrees_with_schedule": set(g_run.added_rays) == expected}
    return fan


def _replay_compact_terminal(q: int, report: RunReport) -> Fan:
    fan = dr.bar_sigma_min(q)
    fan.validate()
    report.checks += [check_terminal(fan), check_complete(fan)]
    return fan


def _q_chain(q: int) -> Check:
    run = g_desingularize(Fan.from_cones([dr.sigma_tilde(q, 0)]))
    steps = [{"point": _vec(s.point), "mu": s.mu, "l_value": fraction_str(s.l_value)}
             for s in run.steps]
    ok = (run.diagnostic is None and len(run.steps) == q
          and all(s.point == dr.q_point(q, k + 1) and s.mu == q + 1 - k
                  and s.l_value == 1 + Fraction(1, q + 1 - k)
                  for k, s in enumerate(run.steps)))
    return Check("G-run reproduces the Q chain", ok, steps)


def _replay_compact_essential(q: int, report: RunReport) -> Fan:
    fan = dr.bar_sigma_ess(q)
    fan.validate()
    report.checks += [check_regular(fan), check_complete(fan), _q_chain(q)]
    computed = dr.sigma_tilde(q, 0).support_form
    printed = dr.printed_sigma_tilde0_form(q)
    report.notes["sigma_tilde0_form"] = {
        "computed": [fraction_str(x) for x in computed],
        "printed": [fraction_str(x) for x in printed],
        "y_coefficient": {"computed": fraction_str(computed[1]),
                          "printed": fraction_str(printed[1])},
        "discrepancy": tuple(computed) != tuple(printed),
    }
    return fan


_REPLAYS = {"terminal": _replay_terminal, "essential": _replay_essential,
            "compact-terminal": _replay_compact_terminal,
            "compact-essential": _replay_compact_essential}

CONSTRUCTION_OF = {"terminal": "Sigma_min", "essential": "Sigma_ess",
                   "compact-terminal": "bar_Sigma_min", "compact-essential": "bar_Sigma_ess"}


def replay(theorem: str, q: int, verify: bool = True) -> RunReport:
    if theorem not in _REPLAYS:
        raise KeyError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")
    q = dr._check_q(q)
    start = time.perf_counter()
    report = RunReport(CONSTRUCTION_OF[theorem], q)
    report.notes["theorem"] = theorem
    if verify:
        report.fan = _REPLAYS[theorem](q, report)
    else:
        report.fan = dr.build(CONSTRUCTION_OF[theorem], q)
    report.seconds = time.perf_counter() - start
    return report


def artifact_stem(theorem: str, q: int) -> str:
    return f"{theorem}_q{q}"


def write_replay(report: RunReport, theorem: str, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = artifact_stem(theorem, report.q)
    (out / f"{stem}.fan.json").write_text(report.fan.to_json(), encoding="utf-8")
    (out / f"{stem}.report.json").write_text(report.to_json(), encoding="utf-8")


def _replay_all(q: int, theorems: tuple[str, ...]) -> list[RunReport]:
    return [replay(t, q) for t in theorems]


def sweep(qs, theorems=THEOREMS, jobs: int = 1) -> list[tuple[str, RunReport]]:
    """Replay every theorem for every q, ordered by q then theorem."""
    qs = [dr._check_q(q) for q in qs]
    theorems = tuple(t for t in THEOREMS if t in set(theorems))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_q = list(pool.map(_replay_all, qs, [theorems] * len(qs)))
    else:
        per_q = [_replay_all(q, theorems) for q in qs]
    return [(t, r) for reports in per_q for t, r in zip(theorems, reports)]


def sweep_summary(results) -> dict:
    rows = [{"theorem": t, "q": r.q, "passed": r.passed} for t, r in results]
    return {"total": len(rows), "passed": sum(r["passed"] for r in rows),
            "failures": [[r["theorem"], r["q"]] for r in rows if not r["passed"]],
            "matrix": rows}
