"""Character tables: orthogonality certification, known tables, multiplicities."""

import numpy as np
import pytest

from hspmeas import (
    ConvergenceError,
    NonIntegerMultiplicityError,
    character_table,
    element_classes,
    subgroup_from_elements,
    trivial_multiplicity,
)
from conftest import battery, get_chartable, get_group, get_lattice

ORTHO_TOL = 1e-8


def brute_element_classes(g):
    remaining = set(range(g.order))
    classes = []
    while remaining:
        a = min(remaining)
        orbit = {int(g.cayley[g.cayley[x, a], g.inverse[x]]) for x in range(g.order)}
        classes.append(tuple(sorted(orbit)))
        remaining -= orbit
    return classes


class TestElementClasses:
    @pytest.mark.parametrize("desc", battery(max_order=27))
    def test_matches_bruteforce(self, desc):
        g = get_group(desc)
        cd = element_classes(g)
        assert list(cd.classes) == brute_element_classes(g)

    def test_identity_alone_in_class_zero(self):
        for desc in battery(max_order=27):
            cd = element_classes(get_group(desc))
            assert cd.classes[0] == (0,)
            assert sum(cd.sizes) == get_group(desc).order

    def test_abelian_singletons(self):
        g = get_group("cyclic:12")
        cd = element_classes(g)
        assert all(s == 1 for s in cd.sizes)
        assert cd.num_classes == 12

    def test_s3_sizes(self):
        cd = element_classes(get_group("symmetric:3"))
        assert cd.sizes == (1, 3, 2)


class TestCharacterTable:
    def test_z2_rows(self):
        ct = get_chartable("cyclic:2")
        rows = {tuple(np.round(row.real, 9)) for row in ct.chi}
        assert rows == {(1.0, 1.0), (1.0, -1.0)}
        assert ct.dims == (1, 1)

    def test_trivial_group(self):
        ct = get_chartable("cyclic:1")
        assert ct.dims == (1,)
        assert ct.chi.shape == (1, 1)
        assert abs(ct.chi[0, 0] - 1) < 1e-12

    def test_s3_table(self):
        ct = get_chartable("symmetric:3")
        assert ct.dims == (1, 1, 2)
        two_dim = ct.chi[2]
        assert np.allclose(two_dim, [2.0, 0.0, -1.0], atol=ORTHO_TOL)

    @pytest.mark.parametrize("desc", battery(max_order=27))
    def test_sum_of_squares(self, desc):
        ct = get_chartable(desc)
        assert sum(d**2 for d in ct.dims) == get_group(desc).order

    @pytest.mark.parametrize("desc", battery(max_order=27))
    def test_row_orthogonality(self, desc):
        ct = get_chartable(desc)
        n = get_group(desc).order
        sizes = np.asarray(ct.class_data.sizes, dtype=float)
        gram = (ct.chi * sizes[None, :]) @ ct.chi.conj().T
        assert np.max(np.abs(gram - n * np.eye(ct.num_irreps))) < ORTHO_TOL

    @pytest.mark.parametrize("desc", battery(max_order=27))
    def test_column_orthogonality(self, desc):
        ct = get_chartable(desc)
        n = get_group(desc).order
        sizes = np.asarray(ct.class_data.sizes, dtype=float)
        gram = ct.chi.conj().T @ ct.chi
        assert np.max(np.abs(gram - np.diag(n / sizes))) < ORTHO_TOL

    @pytest.mark.parametrize("desc", battery(max_order=27))
    def test_regular_character(self, desc):
        ct = get_chartable(desc)
        n = get_group(desc).order
        reg = np.asarray(ct.dims, dtype=float) @ ct.chi
        expected = np.zeros(ct.num_irreps)
        expected[0] = n
        assert np.max(np.abs(reg - expected)) < ORTHO_TOL

    @pytest.mark.parametrize("desc", battery(max_order=27))
    def test_irrep_count_equals_class_count(self, desc):
        ct = get_chartable(desc)
        assert ct.num_irreps == ct.class_data.num_classes

    @pytest.mark.parametrize("desc", battery(max_order=27))
    def test_abelian_all_linear(self, desc):
        if not get_group(desc).is_abelian:
            pytest.skip("abelian-only invariant")
        assert all(d == 1 for d in get_chartable(desc).dims)

    def test_deterministic_across_seeds(self):
        g = get_group("dihedral:4")
        a = character_table(g, seed=0)
        b = character_table(g, seed=99)
        assert a.dims == b.dims
        assert np.max(np.abs(a.chi - b.chi)) < 1e-7

    def test_heisenberg3_self_consistency(self):
        ct = get_chartable("heisenberg:3")
        assert ct.num_irreps == 11
        assert sorted(ct.dims) == [1] * 9 + [3, 3]

    def test_convergence_error_with_no_retries(self):
        with pytest.raises(ConvergenceError):
            character_table(get_group("symmetric:3"), max_retries=0)


class TestTrivialMultiplicity:
    def test_trivial_irrep_always_one(self):
        for desc in battery(max_order=24):
            ct = get_chartable(desc)
            lat = get_lattice(desc)
            # Locate the trivial irrep by its all-ones character row.
            triv = next(
                mu
                for mu in range(ct.num_irreps)
                if np.allclose(ct.chi[mu], 1.0, atol=1e-8)
            )
            for sub in lat.subgroups:
                assert trivial_multiplicity(ct, triv, sub) == 1

    def test_z2_sign_irrep_vanishes_on_full_group(self):
        ct = get_chartable("cyclic:2")
        lat = get_lattice("cyclic:2")
        sign = next(
            mu for mu in range(2) if not np.allclose(ct.chi[mu], 1.0, atol=1e-8)
        )
        assert trivial_multiplicity(ct, sign, lat.subgroups[1]) == 0
        assert trivial_multiplicity(ct, sign, lat.subgroups[0]) == 1

    def test_s3_two_dim_on_cyclic3(self):
        g = get_group("symmetric:3")
        ct = get_chartable("symmetric:3")
        cyclic3 = subgroup_from_elements(g, [0, 3, 4])
        assert trivial_multiplicity(ct, 2, cyclic3) == 0
        order2 = subgroup_from_elements(g, [0, 1])
        assert trivial_multiplicity(ct, 2, order2) == 1

    def test_trivial_subgroup_gives_dimension(self):
        ct = get_chartable("symmetric:4")
        lat = get_lattice("symmetric:4")
        for mu in range(ct.num_irreps):
            assert trivial_multiplicity(ct, mu, lat.subgroups[0]) == ct.dims[mu]

    def test_non_integer_rejected(self):
        ct = get_chartable("cyclic:3")
        lat = get_lattice("cyclic:3")
        corrupted = np.array(ct.chi)
        corrupted[1, 1] += 0.5
        bad = type(ct)(class_data=ct.class_data, chi=corrupted, dims=ct.dims)
        with pytest.raises(NonIntegerMultiplicityError):
            trivial_multiplicity(bad, 1, lat.subgroups[1])
