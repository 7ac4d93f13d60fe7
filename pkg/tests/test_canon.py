import random

from geoformal import canonicalize, parse_document, render_canonical
from geoformal.canon import CanonMode
from helpers import (
    consistent_plane_doc,
    consistent_solid_doc,
    label_pool,
    orbit,
    rand_solid,
)

STRICT = CanonMode(strict_cyclic=True)


def keys(text, category, domain="plane", mode=CanonMode()):
    result = parse_document(text, domain)
    assert result.ok, result.diagnostics
    return canonicalize(result.document, mode).category(category)


def test_line_reversal():
    assert keys("line A B C", "lines") == keys("line C B A", "lines")
    assert keys("line A B C", "lines") != keys("line A C B", "lines")


def test_line_name_is_attribute_only():
    assert keys("line k lineson A B C", "lines") == keys("line A B C", "lines")


def test_angle_arm_swap():
    assert keys("m \\angle ABC = 41", "semantics") == keys("m \\angle CBA = 41", "semantics")
    assert keys("m \\angle ABC = 41", "semantics") != keys("m \\angle BAC = 41", "semantics")
    assert keys("m \\angle ABC = 41", "semantics") == keys("m \\angle CBA = 41.0", "semantics")


def test_arc_endpoints_unordered():
    assert keys("m \\widehat AB = 90", "semantics") == keys("m \\widehat BA = 90", "semantics")


def test_segment_equation_symmetries():
    assert keys("AB = CD", "semantics") == keys("DC = BA", "semantics")
    assert keys("AB = CD", "semantics") == keys("CD = AB", "semantics")
    assert keys("AB = 57", "semantics") == keys("BA = 57", "semantics")
    assert keys("AB = 57", "semantics") != keys("AB = 41", "semantics")


def test_perp_preserves_foot():
    same = keys("AB \\perp CD on X", "semantics")
    assert same == keys("DC \\perp to BA on X", "semantics")
    assert same != keys("AB \\perp CD on Y", "semantics")
    assert same != keys("AB \\perp CD", "semantics")


def test_parallel_sorted_pairs():
    assert keys("AB \\parallel CD", "semantics") == keys("DC \\parallel BA", "semantics")


def test_circle_rim_is_a_set():
    assert keys("\\odot O lieson A B C", "circles") == keys("\\odot O lieson C A B", "circles")
    assert keys("\\odot O lieson A B", "circles") != keys("\\odot P lieson A B", "circles")


def test_cube_alignment_against_orbit_enumeration():
    base = "solid Cube ABCD-A_{1}B_{1}C_{1}D_{1}"
    rotated = "solid Cube BCDA-B_{1}C_{1}D_{1}A_{1}"
    twisted = "solid Cube ABCD-B_{1}C_{1}D_{1}A_{1}"
    assert keys(base, "solids", "solid") == keys(rotated, "solids", "solid")
    assert keys(base, "solids", "solid") != keys(twisted, "solids", "solid")

    # brute force over all 8 cyclic/reflected alignments of the paired faces
    doc = parse_document(base, "solid").document
    images = orbit(doc.solids[0])
    assert len({canonicalize_single(s) for s in images}) == 1
    assert len(images) == 8


def canonicalize_single(solid, mode=CanonMode()):
    from geoformal.canon import solid_key

    return solid_key(solid, mode)


def test_plane_modes():
    assert keys("plane A B C D", "planes") == keys("plane D C A B", "planes")
    assert keys("plane A B C D", "planes", mode=STRICT) == keys(
        "plane B C D A", "planes", mode=STRICT
    )
    assert keys("plane A B C D", "planes", mode=STRICT) == keys(
        "plane D C B A", "planes", mode=STRICT
    )
    assert keys("plane A B C D", "planes", mode=STRICT) != keys(
        "plane A B D C", "planes", mode=STRICT
    )


def test_pyramid_base_modes():
    assert keys("solid Pyramid O-ABC", "solids", "solid") == keys(
        "solid Pyramid O-ACB", "solids", "solid"
    )
    assert keys("solid Pyramid O-ABCD", "solids", "solid", STRICT) != keys(
        "solid Pyramid O-ABDC", "solids", "solid", STRICT
    )
    assert keys("solid Pyramid O-ABC", "solids", "solid") != keys(
        "solid Pyramid P-ABC", "solids", "solid"
    )


def test_rotation_solids():
    assert keys("solid Cylinder AD-BC", "solids", "solid") == keys(
        "solid Cylinder CB-DA", "solids", "solid"
    )
    assert keys("solid Cylinder O_{1}-O_{2}", "solids", "solid") == keys(
        "solid Cylinder O_{2}-O_{1}", "solids", "solid"
    )
    assert keys("solid Cone P-OA", "solids", "solid") != keys(
        "solid Cone P-AO", "solids", "solid"
    )
    assert keys("solid Spheroid O-ABCD", "solids", "solid") == keys(
        "solid Spheriod O-DCBA", "solids", "solid"
    )


def test_duplicates_collapse():
    merged = keys("<lines>\nline A B C\nline C B A\n</lines>", "lines")
    assert len(merged) == 1


def test_canonical_idempotence_on_random_documents():
    rng = random.Random(11)
    for _ in range(20):
        doc = consistent_plane_doc(rng)
        cdoc = canonicalize(doc)
        again = parse_document(render_canonical(cdoc), "plane")
        assert again.ok, again.diagnostics
        assert canonicalize(again.document) == cdoc
    for _ in range(20):
        doc = consistent_solid_doc(rng)
        for mode in (CanonMode(), STRICT):
            cdoc = canonicalize(doc, mode)
            again = parse_document(render_canonical(cdoc), "solid")
            assert again.ok, again.diagnostics
            assert canonicalize(again.document, mode) == cdoc


def test_solid_orbit_keys_stable_across_kinds():
    rng = random.Random(3)
    for _ in range(60):
        pool = label_pool(rng, 10)
        solid = rand_solid(rng, pool)
        for mode in (CanonMode(), STRICT):
            image_keys = {canonicalize_single(s, mode) for s in orbit(solid, mode)}
            assert len(image_keys) == 1, (solid, mode)
