"""Batch invariant checks behind ``k3stab verify``.

Each check returns ``{"check", "population", "failures", "examples"}``;
the report lists checks sorted by name so it does not depend on the order
in which a thread pool finishes them.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .deckgroup import LoopWord, cohomology_action, halfplane_action, monodromy
from .exact import format_rational
from .halfplane import apply, cross_ratio, hyp_distance, induced_map_oracle, lemma32_closed_form, twist_moebius
from .lattice import (
    LatticeMap,
    MukaiVector,
    central_charge,
    pairing,
    reflect,
    twist_on_skyscraper,
)
from .model import HPoint, K3Context
from .spherical import enumerate_isotropic, enumerate_spherical, spherical_point
from .walls import (
    WallType,
    classify,
    classify_by_ordering,
    diameter_and_bound,
    is_geodesic_polynomial,
    large_volume_path,
    n_AE_sq,
    scan_disk,
    wall,
    wall_containment_check,
    wall_pair,
    wall_polynomial,
    wall_population,
)

MAX_EXAMPLES = 5


@dataclass(frozen=True)
class RunConfig:
    d: int = 1
    r_max: int = 10
    x_min: Fraction = Fraction(-2)
    x_max: Fraction = Fraction(2)
    tolerance: float = 1e-12
    seed: int = 0
    paper_printed_B: bool = False
    paper_printed_disk: bool = False
    extra_v0: tuple = ()

    @property
    def ctx(self) -> K3Context:
        return K3Context(self.d)


@dataclass
class CheckResult:
    check: str
    population: int = 0
    failures: int = 0
    examples: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def fail(self, example) -> None:
        self.failures += 1
        if len(self.examples) < MAX_EXAMPLES:
            self.examples.append(example)

    def to_json(self) -> dict:
        out = {"check": self.check, "population": self.population, "failures": self.failures}
        if self.examples:
            out["examples"] = self.examples
        if self.notes:
            out["notes"] = self.notes
        return out


def _deltas(cfg: RunConfig):
    return enumerate_spherical(cfg.ctx, cfg.r_max, cfg.x_min, cfg.x_max)


def check_reflection(cfg: RunConfig) -> CheckResult:
    ctx = cfg.ctx
    res = CheckResult("reflection_involution")
    probes = [MukaiVector(1, 0, 0), MukaiVector(0, 1, 0), MukaiVector(0, 0, 1), MukaiVector(2, -1, 3)]
    for sc in _deltas(cfg):
        delta = sc.delta
        res.population += 1
        ok = all(reflect(reflect(v, delta, ctx), delta, ctx) == v for v in probes)
        ok = ok and all(
            pairing(reflect(u, delta, ctx), reflect(v, delta, ctx), ctx) == pairing(u, v, ctx)
            for u in probes for v in probes
        )
        if not ok:
            res.fail(delta.to_json())
    return res


def check_moebius_oracle(cfg: RunConfig) -> CheckResult:
    ctx = cfg.ctx
    res = CheckResult("moebius_oracle")
    for sc in _deltas(cfg):
        delta = sc.delta
        res.population += 1
        iso = twist_on_skyscraper(delta, ctx)
        oracle = induced_map_oracle(LatticeMap.reflection(delta, ctx), ctx)
        if not (oracle == twist_moebius(delta, ctx) == lemma32_closed_form(iso, iso, ctx)):
            res.fail(delta.to_json())
    return res


def check_involution(cfg: RunConfig) -> CheckResult:
    ctx = cfg.ctx
    res = CheckResult("involution_fixed_point")
    for sc in _deltas(cfg):
        res.population += 1
        m = twist_moebius(sc.delta, ctx)
        if not ((m @ m).is_identity() and m.fixed_point(ctx) == spherical_point(sc.delta, ctx)):
            res.fail(sc.delta.to_json())
    return res


def random_point(rng: random.Random, span: int = 3, den: int = 12) -> HPoint:
    return HPoint(Fraction(rng.randint(-span * den, span * den), rng.randint(1, den)),
                  Fraction(rng.randint(1, span * den), rng.randint(1, den)))


def check_isometry(cfg: RunConfig, per_map: int = 20) -> CheckResult:
    """Cross ratios are preserved exactly, distances within the tolerance."""
    ctx = cfg.ctx
    res = CheckResult("isometry")
    rng = random.Random(cfg.seed)
    for sc in _deltas(cfg):
        m = twist_moebius(sc.delta, ctx)
        for _ in range(per_map):
            res.population += 1
            pts = [random_point(rng) for _ in range(4)]
            if len(set(pts)) < 4:
                continue
            imgs = [apply(m, p, ctx) for p in pts]
            before = cross_ratio(*(p.as_complex(ctx) for p in pts))
            after = cross_ratio(*(p.as_complex(ctx) for p in imgs))
            d0 = hyp_distance(pts[0], pts[1], ctx)
            d1 = hyp_distance(imgs[0], imgs[1], ctx)
            if before != after or abs(d0 - d1) > cfg.tolerance * max(1.0, d0):
                res.fail({"delta": sc.delta.to_json(), "p": pts[0].to_json(), "q": pts[1].to_json()})
    return res


def _wall_pairs(cfg: RunConfig):
    return wall_population(cfg.ctx, cfg.r_max, cfg.r_max, 2 * cfg.r_max)


def check_wall_incidence(cfg: RunConfig) -> CheckResult:
    """N vanishes at the marked points, and Im Z(E) conj Z(A) vanishes at p(A), q."""
    ctx = cfg.ctx
    res = CheckResult("wall_incidence")
    for A, E in _wall_pairs(cfg):
        res.population += 1
        w = wall(A, E, ctx)
        pts = [(x, t * t / ctx.d) for x, t in w.marked_points()]
        ok = all(n_AE_sq(A, E, x, y_sq, ctx) == 0 for x, y_sq in pts)
        for p in (w.p_A, w.q):
            if p is not None:
                z = p.as_complex(ctx)
                ok = ok and (central_charge(z, E, ctx) * central_charge(z, A, ctx).conjugate()).im_t == 0
        ok = ok and is_geodesic_polynomial(wall_polynomial(E, A, ctx)) and wall_pair(E, A, ctx) == w.geodesic
        if not ok:
            res.fail({"A": A.to_json(), "E": E.to_json()})
    return res


def check_wall_ordering(cfg: RunConfig) -> CheckResult:
    ctx = cfg.ctx
    res = CheckResult("wall_ordering")
    counts = {t.value: 0 for t in WallType}
    for A, E in _wall_pairs(cfg):
        res.population += 1
        w = wall(A, E, ctx)
        counts[w.wall_type.value] += 1
        if classify_by_ordering(w) is not classify(A, E, ctx):
            res.fail({"A": A.to_json(), "E": E.to_json()})
    res.notes["types"] = counts
    return res


def check_diameter_bound(cfg: RunConfig) -> CheckResult:
    ctx = cfg.ctx
    res = CheckResult("diameter_bound")
    for A, E in _wall_pairs(cfg):
        if classify(A, E, ctx) is not WallType.TYPE_II:
            continue
        res.population += 1
        diameter, bound, holds = diameter_and_bound(A, E, ctx)
        if not holds:
            res.fail({"A": A.to_json(), "E": E.to_json(),
                      "diameter": format_rational(diameter), "bound": format_rational(bound)})
    return res


def containment_v0s(cfg: RunConfig) -> list[MukaiVector]:
    return [MukaiVector(1, 0, 0), MukaiVector(1, 1, cfg.d), *cfg.extra_v0]


def check_containment(cfg: RunConfig) -> CheckResult:
    ctx = cfg.ctx
    res = CheckResult("wall_containment")
    flagged = []
    for v0 in containment_v0s(cfg):
        rep = wall_containment_check(v0, ctx, cfg.r_max, paper_printed_B=cfg.paper_printed_B)
        res.population += rep.population
        for bad in rep.violations:
            res.fail({"v0": v0.to_json(), **bad})
        if rep.printed_B_smaller:
            flagged.append(v0.to_json())
    res.notes["B"] = "printed" if cfg.paper_printed_B else "derived"
    res.notes["printed_B_smaller_for"] = flagged
    return res


def check_large_volume_path(cfg: RunConfig) -> CheckResult:
    ctx = cfg.ctx
    res = CheckResult("large_volume_path")
    for v0 in enumerate_isotropic(ctx, cfg.r_max, 2 * cfg.r_max):
        res.population += 1
        if not large_volume_path(v0, ctx).certificate:
            res.fail(v0.to_json())
    return res


def check_disk_scan(cfg: RunConfig) -> CheckResult:
    ctx = cfg.ctx
    res = CheckResult("disk_scan")
    r_bound = 5 * cfg.r_max
    tangencies = 0
    # translation by L moves every disk and spherical point by 1, so one period suffices
    for sc in enumerate_spherical(ctx, cfg.r_max, 0, Fraction(1)):
        res.population += 1
        scan = scan_disk(sc.delta, ctx, r_bound, cfg.paper_printed_disk)
        tangencies += len(scan.on_boundary)
        if not scan.ok:
            res.fail({"A": sc.delta.to_json(), "inside": [v.to_json() for v in scan.inside[:3]]})
    res.notes["disk"] = "printed" if cfg.paper_printed_disk else "twist image"
    res.notes["r_bound"] = r_bound
    res.notes["boundary_tangencies"] = tangencies
    return res


def random_loop_word(rng: random.Random, alphabet, max_len: int) -> LoopWord:
    from .deckgroup import G

    seq = []
    for _ in range(rng.randint(0, max_len)):
        gen = G if rng.random() < 0.15 else rng.choice(alphabet)
        seq.append((gen, rng.choice((-2, -1, 1, 2))))
    return LoopWord.from_letters(seq)


def check_deck(cfg: RunConfig, words: int = 500) -> CheckResult:
    ctx = cfg.ctx
    res = CheckResult("deck_identities")
    alphabet = [sc.delta for sc in _deltas(cfg)][:5]
    rng = random.Random(cfg.seed)
    probe = MukaiVector(3, -1, 2)
    for _ in range(words):
        res.population += 1
        u = random_loop_word(rng, alphabet, 8)
        v = random_loop_word(rng, alphabet, 8)
        dw = monodromy(u * v)
        ok = dw == monodromy(u) * monodromy(v)
        ok = ok and cohomology_action(dw, probe, ctx) == probe
        ok = ok and halfplane_action(dw, ctx).is_identity()
        ok = ok and (u * u.inverse()).is_identity()
        if not ok:
            res.fail({"u": u.to_json(), "v": v.to_json()})
    return res


CHECKS = {
    "containment": check_containment,
    "deck": check_deck,
    "diameter": check_diameter_bound,
    "disk": check_disk_scan,
    "incidence": check_wall_incidence,
    "involution": check_involution,
    "isometry": check_isometry,
    "oracle": check_moebius_oracle,
    "ordering": check_wall_ordering,
    "path": check_large_volume_path,
    "reflection": check_reflection,
}


def thread_cap() -> int:
    """Worker count: K3STAB_THREADS if set, else the CPU count."""
    raw = os.environ.get("K3STAB_THREADS", "").strip()
    if not raw:
        return os.cpu_count() or 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"K3STAB_THREADS must be an integer, got {raw!r}") from None


def run_verify(cfg: RunConfig, only=None) -> dict:
    names = sorted(only) if only else sorted(CHECKS)
    with ThreadPoolExecutor(max_workers=thread_cap()) as pool:
        results = list(pool.map(lambda name: CHECKS[name](cfg), names))
    checks = sorted((r.to_json() for r in results), key=lambda r: r["check"])
    return {
        "config": {
            "d": cfg.d,
            "r_max": cfg.r_max,
            "window": [format_rational(cfg.x_min), format_rational(cfg.x_max)],
            "seed": cfg.seed,
            "paper_printed_B": cfg.paper_printed_B,
            "paper_printed_disk": cfg.paper_printed_disk,
            "extra_v0": [v.to_json() for v in cfg.extra_v0],
        },
        "checks": checks,
        "ok": all(c["failures"] == 0 for c in checks),
    }
