"""Shared test machinery: random fixtures and independent oracles.

The orbit enumerators below rebuild each primitive's declared symmetry
group by hand, without touching the canonical-key code, so they can serve
as the ground truth the keys are judged against.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import replace

from geoformal import (
    AngleMeasure,
    ArcMeasure,
    Circle,
    Document,
    Line,
    Parallel,
    Perp,
    Plane,
    PointLabel,
    SegmentEq,
    Solid,
    parse_expr,
)
from geoformal.canon import CanonMode

LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def make_label(index: int) -> PointLabel:
    base = LETTERS[index % 26]
    tier = index // 26
    return PointLabel(base, 0, str(tier) if tier else None)


def label_pool(rng: random.Random, size: int) -> list[PointLabel]:
    """Distinct labels, occasionally decorated with primes."""
    picks = rng.sample(range(40), size)
    pool = []
    for index in picks:
        label = make_label(index)
        if rng.random() < 0.15:
            label = replace(label, primes=rng.randint(1, 2))
        pool.append(label)
    return list(dict.fromkeys(pool))


def fresh_label(existing) -> PointLabel:
    used = set(existing)
    for index in range(200):
        candidate = make_label(index)
        if candidate not in used:
            return candidate
    raise AssertionError("label space exhausted")


# ---------------------------------------------------------------- generators

def rand_line(rng, pool, size=None) -> Line:
    size = size or rng.randint(2, min(5, len(pool)))
    return Line(tuple(rng.sample(pool, size)))


def rand_circle(rng, pool) -> Circle:
    center = rng.choice(pool)
    rest = [p for p in pool if p != center]
    on = rng.sample(rest, rng.randint(0, min(4, len(rest))))
    return Circle(center, frozenset(on))


def rand_plane(rng, pool, size=None) -> Plane:
    size = size or rng.randint(3, min(6, len(pool)))
    return Plane(tuple(rng.sample(pool, size)))


def rand_solid(rng, pool, kind=None) -> Solid:
    kind = kind or rng.choice(
        ("Cube", "Prism", "Pyramid", "Frustum", "Cylinder", "Cone", "FrustumCone", "Spheroid")
    )
    if kind in ("Cube", "Prism", "Frustum"):
        size = rng.randint(3, 4)
        picks = rng.sample(pool, 2 * size)
        return Solid(kind, (tuple(picks[:size]), tuple(picks[size:])))
    if kind == "Pyramid":
        size = rng.randint(3, 5)
        picks = rng.sample(pool, size + 1)
        return Solid(kind, ((picks[0],), tuple(picks[1:])))
    if kind == "Cone":
        picks = rng.sample(pool, 3)
        return Solid(kind, ((picks[0],), (picks[1], picks[2])))
    if kind in ("Cylinder", "FrustumCone"):
        if rng.random() < 0.5:
            picks = rng.sample(pool, 2)
            return Solid(kind, ((picks[0],), (picks[1],)))
        picks = rng.sample(pool, 4)
        return Solid(kind, ((picks[0], picks[1]), (picks[2], picks[3])))
    picks = rng.sample(pool, rng.randint(1, min(5, len(pool))))
    return Solid("Spheroid", ((picks[0],),) if len(picks) == 1 else ((picks[0],), tuple(picks[1:])))


def rand_value(rng):
    choice = rng.random()
    if choice < 0.6:
        return parse_expr(str(rng.randint(1, 179)))
    if choice < 0.9:
        return parse_expr(f"{rng.randint(1, 9)}x + {rng.randint(1, 40)}")
    return parse_expr("y^2 + 1")


def rand_angle(rng, pool) -> AngleMeasure:
    p1, v, p3 = rng.sample(pool, 3)
    return AngleMeasure(p1, v, p3, rand_value(rng))


def rand_arc(rng, pool) -> ArcMeasure:
    p1, p2 = rng.sample(pool, 2)
    return ArcMeasure(p1, p2, rand_value(rng))


def rand_perp(rng, pool) -> Perp:
    a, b, c, d = rng.sample(pool, 4)
    foot = rng.choice([None, a, c, fresh_label(pool)])
    return Perp((a, b), (c, d), foot)


def rand_parallel(rng, pool) -> Parallel:
    a, b, c, d = rng.sample(pool, 4)
    return Parallel((a, b), (c, d))


def rand_segeq(rng, pool) -> SegmentEq:
    a, b = rng.sample(pool, 2)
    if rng.random() < 0.5:
        c, d = rng.sample([p for p in pool if p not in (a, b)], 2)
        return SegmentEq((a, b), (c, d))
    return SegmentEq((a, b), rand_value(rng))


# ------------------------------------------------------------------- orbits

def _seg_variants(seg):
    return [seg, (seg[1], seg[0])]


def _dihedral(seq):
    images = set()
    for ordering in (tuple(seq), tuple(reversed(seq))):
        for shift in range(len(ordering)):
            images.add(ordering[shift:] + ordering[:shift])
    return images


def orbit(node, mode: CanonMode = CanonMode()):
    """All value-level images of a primitive under its declared symmetries."""
    if isinstance(node, Line):
        return [node, replace(node, points=tuple(reversed(node.points)))]
    if isinstance(node, Circle):
        return [node]
    if isinstance(node, Plane):
        if mode.strict_cyclic:
            seqs = _dihedral(node.points)
        else:
            seqs = set(itertools.permutations(node.points))
        return [replace(node, points=seq) for seq in seqs]
    if isinstance(node, Solid):
        return _solid_orbit(node, mode)
    if isinstance(node, AngleMeasure):
        return [node, replace(node, p1=node.p3, p3=node.p1)]
    if isinstance(node, ArcMeasure):
        return [node, replace(node, p1=node.p2, p2=node.p1)]
    if isinstance(node, (Perp, Parallel)):
        out = []
        for s1 in _seg_variants(node.seg1):
            for s2 in _seg_variants(node.seg2):
                out.append(replace(node, seg1=s1, seg2=s2))
                out.append(replace(node, seg1=s2, seg2=s1))
        return out
    if isinstance(node, SegmentEq):
        out = []
        for lhs in _seg_variants(node.lhs):
            if isinstance(node.rhs, tuple):
                for rhs in _seg_variants(node.rhs):
                    out.append(replace(node, lhs=lhs, rhs=rhs))
                    out.append(replace(node, lhs=rhs, rhs=lhs))
            else:
                out.append(replace(node, lhs=lhs))
        return out
    if isinstance(node, PointLabel):
        return [node]
    raise TypeError(f"no orbit for {node!r}")


def _solid_orbit(node: Solid, mode: CanonMode):
    kind = node.kind
    if kind in ("Cube", "Prism", "Frustum"):
        base, top = node.groups
        images = []
        for flip in (False, True):
            b = tuple(reversed(base)) if flip else base
            t = tuple(reversed(top)) if flip else top
            for shift in range(len(b)):
                images.append(
                    replace(node, groups=(b[shift:] + b[:shift], t[shift:] + t[:shift]))
                )
        return images
    if kind == "Pyramid":
        apex, base = node.groups
        if mode.strict_cyclic:
            bases = _dihedral(base)
        else:
            bases = set(itertools.permutations(base))
        return [replace(node, groups=(apex, b)) for b in bases]
    if kind == "Cone":
        return [node]
    if kind in ("Cylinder", "FrustumCone"):
        out = []
        for g1 in set(itertools.permutations(node.groups[0])):
            for g2 in set(itertools.permutations(node.groups[1])):
                out.append(replace(node, groups=(g1, g2)))
                out.append(replace(node, groups=(g2, g1)))
        return out
    if len(node.groups) == 1:
        return [node]
    center, surface = node.groups
    return [
        replace(node, groups=(center, seq)) for seq in set(itertools.permutations(surface))
    ]


def equivalent(a, b, mode: CanonMode = CanonMode()) -> bool:
    """Hand-derived equality-up-to-symmetry; independent of canonical keys."""
    if type(a) is not type(b):
        return False
    if isinstance(a, PointLabel):
        return a == b
    if isinstance(a, Line):
        return a.points == b.points or a.points == tuple(reversed(b.points))
    if isinstance(a, Circle):
        return a.center == b.center and a.on_points == b.on_points
    if isinstance(a, Plane):
        if mode.strict_cyclic:
            return tuple(b.points) in _dihedral(a.points)
        return set(a.points) == set(b.points)
    if isinstance(a, Solid):
        return _solid_equivalent(a, b, mode)
    if isinstance(a, AngleMeasure):
        return (
            a.vertex == b.vertex
            and {a.p1, a.p3} == {b.p1, b.p3}
            and a.value == b.value
        )
    if isinstance(a, ArcMeasure):
        return {a.p1, a.p2} == {b.p1, b.p2} and a.value == b.value
    if isinstance(a, Perp):
        return a.foot == b.foot and _seg_pair_eq(a.seg1, a.seg2, b.seg1, b.seg2)
    if isinstance(a, Parallel):
        return _seg_pair_eq(a.seg1, a.seg2, b.seg1, b.seg2)
    if isinstance(a, SegmentEq):
        if isinstance(a.rhs, tuple) != isinstance(b.rhs, tuple):
            return False
        if isinstance(a.rhs, tuple):
            return _seg_pair_eq(a.lhs, a.rhs, b.lhs, b.rhs)
        return set(a.lhs) == set(b.lhs) and a.rhs == b.rhs
    raise TypeError(f"no equivalence for {a!r}")


def _seg_pair_eq(a1, a2, b1, b2) -> bool:
    sa = {frozenset(a1), frozenset(a2)}
    sb = {frozenset(b1), frozenset(b2)}
    return sa == sb


def _solid_equivalent(a: Solid, b: Solid, mode: CanonMode) -> bool:
    if a.kind != b.kind:
        return False
    kind = a.kind
    if kind in ("Cube", "Prism", "Frustum"):
        return b in _solid_orbit(a, mode)
    if kind == "Pyramid":
        if a.groups[0] != b.groups[0]:
            return False
        if mode.strict_cyclic:
            return tuple(b.groups[1]) in _dihedral(a.groups[1])
        return set(a.groups[1]) == set(b.groups[1])
    if kind == "Cone":
        return a.groups == b.groups
    if kind in ("Cylinder", "FrustumCone"):
        norm_a = sorted(sorted(g, key=PointLabel.sort_key) for g in a.groups)
        norm_b = sorted(sorted(g, key=PointLabel.sort_key) for g in b.groups)
        return norm_a == norm_b
    if len(a.groups) != len(b.groups) or a.groups[0] != b.groups[0]:
        return False
    return len(a.groups) == 1 or set(a.groups[1]) == set(b.groups[1])


# ------------------------------------------------------- brute-force scoring

def dedup(nodes, mode: CanonMode = CanonMode()):
    kept = []
    for node in nodes:
        if not any(equivalent(node, other, mode) for other in kept):
            kept.append(node)
    return kept


def brute_counts(pred_nodes, ref_nodes, mode: CanonMode = CanonMode()):
    pred = dedup(pred_nodes, mode)
    ref = dedup(ref_nodes, mode)
    tp = sum(1 for node in pred if any(equivalent(node, other, mode) for other in ref))
    return tp, len(pred), len(ref)


def doc_category_nodes(doc: Document, category: str):
    if category == "points":
        return sorted(doc.points, key=PointLabel.sort_key)
    return list(getattr(doc, category))


def brute_prf(tp, pred, ref):
    if pred == 0:
        p = 100.0 if ref == 0 else 0.0
    else:
        p = 100.0 * tp / pred
    if ref == 0:
        r = 100.0 if pred == 0 else 0.0
    else:
        r = 100.0 * tp / ref
    f1 = 0.0 if p + r == 0 else 2 * p * r / (p + r)
    return p, r, f1


# -------------------------------------------------------- document builders

def consistent_plane_doc(rng: random.Random, max_primitives: int = 12) -> Document:
    """A parse-clean, consistency-clean plane document."""
    pool = label_pool(rng, rng.randint(5, 9))
    doc = Document(domain="plane", points=set(pool))
    budget = rng.randint(2, max_primitives)
    makers = [
        lambda: doc.lines.append(rand_line(rng, pool)),
        lambda: doc.circles.append(rand_circle(rng, pool)),
        lambda: doc.semantics.append(rand_angle(rng, pool)),
        lambda: doc.semantics.append(rand_arc(rng, pool)),
        lambda: doc.semantics.append(_consistent_perp(rng, pool)),
        lambda: doc.semantics.append(rand_parallel(rng, pool)),
        lambda: doc.semantics.append(rand_segeq(rng, pool)),
    ]
    for _ in range(budget):
        rng.choice(makers)()
    _strip_duplicates(doc)
    return doc


def consistent_solid_doc(rng: random.Random, max_primitives: int = 12) -> Document:
    pool = label_pool(rng, rng.randint(8, 12))
    doc = Document(domain="solid", points=set(pool))
    doc.solids.append(rand_solid(rng, pool))
    budget = rng.randint(1, max_primitives - 1)
    makers = [
        lambda: doc.lines.append(rand_line(rng, pool)),
        lambda: doc.planes.append(rand_plane(rng, pool)),
        lambda: doc.circles.append(rand_circle(rng, pool)),
        lambda: doc.semantics.append(rand_segeq(rng, pool)),
    ]
    for _ in range(budget):
        rng.choice(makers)()
    _strip_duplicates(doc)
    return doc


def _consistent_perp(rng, pool) -> Perp:
    # foot shared by both segments, so declared covering lines always hold it
    foot, a, c = rng.sample(pool, 3)
    return Perp((a, foot), (foot, c), foot)


def _strip_duplicates(doc: Document) -> None:
    for field in ("lines", "circles", "planes", "solids", "semantics"):
        nodes = getattr(doc, field)
        nodes[:] = dedup(nodes)
