"""Group builders, table validation, descriptors, isomorphism search."""

import json

import numpy as np
import pytest

from hspmeas import (
    CapExceededError,
    DescriptorError,
    NotAGroupError,
    brute_force_isomorphism,
    build_cyclic,
    build_dihedral,
    build_heisenberg,
    build_product,
    build_symmetric,
    from_cayley,
    parse_descriptor,
    parse_descriptor_list,
)
from conftest import BATTERY, get_group, quaternion_group


def involutions(g):
    """Brute-force element-order census straight off the table."""
    return [a for a in range(1, g.order) if g.cayley[a, a] == 0]


def brute_center(g):
    return [
        a
        for a in range(g.order)
        if all(g.cayley[a, b] == g.cayley[b, a] for b in range(g.order))
    ]


def brute_element_classes(g):
    """Independent conjugation-orbit partition using scalar table lookups."""
    remaining = set(range(g.order))
    classes = []
    while remaining:
        a = min(remaining)
        orbit = {g.cayley[g.cayley[x, a], g.inverse[x]] for x in range(g.order)}
        classes.append(sorted(orbit))
        remaining -= orbit
    return classes


class TestCyclic:
    def test_trivial(self):
        g = build_cyclic(1)
        assert g.order == 1
        assert g.cayley.tolist() == [[0]]

    def test_z2(self):
        g = build_cyclic(2)
        assert g.order == 2
        assert g.cayley.tolist() == [[0, 1], [1, 0]]

    def test_z4_unique_involution(self):
        g = build_cyclic(4)
        assert involutions(g) == [2]

    def test_cap(self):
        with pytest.raises(CapExceededError):
            build_cyclic(201)
        assert build_cyclic(200).order == 200

    def test_bad_order(self):
        with pytest.raises(ValueError):
            build_cyclic(0)


class TestDihedral:
    def test_degenerate_is_z2(self):
        g = build_dihedral(1)
        assert g.order == 2
        assert brute_force_isomorphism(g, build_cyclic(2)) is not None

    def test_d3_isomorphic_to_s3(self):
        phi = brute_force_isomorphism(build_dihedral(3), build_symmetric(3))
        assert phi is not None

    def test_d4_center_has_order_2(self):
        assert len(brute_center(build_dihedral(4))) == 2

    def test_cap(self):
        with pytest.raises(CapExceededError):
            build_dihedral(101)


class TestSymmetric:
    def test_trivial(self):
        assert build_symmetric(1).order == 1

    def test_s3_three_classes(self):
        g = build_symmetric(3)
        assert g.order == 6
        assert len(brute_element_classes(g)) == 3

    def test_s4_five_classes(self):
        g = build_symmetric(4)
        assert g.order == 24
        assert len(brute_element_classes(g)) == 5

    def test_composition_convention(self):
        # sigma = (0 1 2) as one-line (1, 2, 0); tau = (0 1) as (1, 0, 2).
        # (sigma * tau)(x) = sigma(tau(x)) maps 0->2, 1->1, 2->0.
        g = build_symmetric(3)
        sigma, tau = 3, 2  # lexicographic positions of (1,2,0) and (1,0,2)
        assert g.labels[sigma] == "(0 1 2)"
        assert g.labels[tau] == "(0 1)"
        assert g.labels[g.mul(sigma, tau)] == "(0 2)"

    def test_degree_cap(self):
        with pytest.raises(CapExceededError):
            build_symmetric(6)


class TestHeisenberg:
    def test_p2_nonabelian(self):
        g = build_heisenberg(2)
        assert g.order == 8
        assert not g.is_abelian

    def test_p3_center_order_3(self):
        g = build_heisenberg(3)
        assert g.order == 27
        assert len(brute_center(g)) == 3

    def test_p5_cap_boundary(self):
        assert build_heisenberg(5).order == 125
        with pytest.raises(CapExceededError):
            build_heisenberg(5, cap=100)

    def test_nonprime_rejected(self):
        with pytest.raises(ValueError):
            build_heisenberg(4)


class TestProduct:
    def test_z2_z2_three_involutions(self):
        g = build_product(build_cyclic(2), build_cyclic(2))
        assert g.order == 4
        assert len(involutions(g)) == 3

    def test_trivial_times_g_identical_table(self):
        g = build_dihedral(3)
        prod = build_product(build_cyclic(1), g)
        assert np.array_equal(prod.cayley, g.cayley)

    def test_z2_z3_cyclic(self):
        prod = build_product(build_cyclic(2), build_cyclic(3))
        assert brute_force_isomorphism(prod, build_cyclic(6)) is not None

    @pytest.mark.parametrize(
        "left,right",
        [("cyclic:2", "cyclic:3"), ("cyclic:3", "cyclic:4"), ("cyclic:2", "symmetric:3")],
    )
    def test_product_commutes_up_to_isomorphism(self, left, right):
        a, b = get_group(left), get_group(right)
        ab = build_product(a, b)
        ba = build_product(b, a)
        assert brute_force_isomorphism(ab, ba) is not None

    def test_cap(self):
        with pytest.raises(CapExceededError):
            build_product(build_cyclic(20), build_cyclic(20))


class TestFromCayley:
    def test_trivial(self):
        assert from_cayley([[0]]).order == 1

    def test_z2_table(self):
        g = from_cayley([[0, 1], [1, 0]])
        assert brute_force_isomorphism(g, build_cyclic(2)) is not None

    def test_non_permutation_row_rejected(self):
        with pytest.raises(NotAGroupError, match="permutation"):
            from_cayley([[0, 1], [1, 1]])

    def test_non_associative_rejected(self):
        # Rows and columns are Latin, identity at 0, but (1*1)*2 != 1*(1*2).
        table = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ]
        with pytest.raises(NotAGroupError, match="associativity"):
            from_cayley(table)

    def test_quaternion(self):
        q8 = quaternion_group()
        assert q8.order == 8
        assert len(involutions(q8)) == 1  # only -1 squares to 1
        assert brute_force_isomorphism(q8, build_dihedral(4)) is None


class TestInvariants:
    @pytest.mark.parametrize("desc", BATTERY)
    def test_builders_pass_from_cayley(self, desc):
        g = get_group(desc)
        revalidated = from_cayley(g.cayley, labels=g.labels, origin=g.origin)
        assert np.array_equal(revalidated.cayley, g.cayley)

    @pytest.mark.parametrize("desc", BATTERY)
    def test_element_order_divides_group_order(self, desc):
        g = get_group(desc)
        for a in range(g.order):
            assert g.order % g.element_order(a) == 0

    @pytest.mark.parametrize("desc", BATTERY)
    def test_identity_first(self, desc):
        g = get_group(desc)
        assert np.array_equal(g.cayley[0], np.arange(g.order))


class TestDescriptors:
    @pytest.mark.parametrize(
        "desc,order",
        [
            ("cyclic:7", 7),
            ("dihedral:5", 10),
            ("symmetric:4", 24),
            ("heisenberg:3", 27),
            ("product:cyclic:2,cyclic:3", 6),
            ("product:product:cyclic:2,cyclic:2,cyclic:3", 12),
        ],
    )
    def test_parse(self, desc, order):
        assert parse_descriptor(desc).order == order

    def test_parse_list_with_nested_product(self):
        groups = parse_descriptor_list("cyclic:2,product:cyclic:2,cyclic:3,dihedral:4")
        assert [g.order for g in groups] == [2, 6, 8]

    @pytest.mark.parametrize(
        "bad",
        ["", "cyclic", "cyclic:", "cyclic:x", "wat:3", "product:cyclic:2", "cyclic:3junk"],
    )
    def test_bad_descriptors(self, bad):
        with pytest.raises(DescriptorError):
            parse_descriptor(bad)

    def test_cayley_file(self, tmp_path):
        path = tmp_path / "z2.json"
        path.write_text(json.dumps({"order": 2, "table": [[0, 1], [1, 0]]}))
        g = parse_descriptor(f"cayley:@{path}")
        assert g.order == 2

    def test_cayley_file_order_mismatch(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"order": 3, "table": [[0, 1], [1, 0]]}))
        with pytest.raises(DescriptorError, match="does not match"):
            parse_descriptor(f"cayley:@{path}")

    def test_missing_file(self):
        with pytest.raises(DescriptorError, match="cannot read"):
            parse_descriptor("cayley:@/nonexistent/q8.json")
