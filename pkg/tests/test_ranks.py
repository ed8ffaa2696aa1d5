import pytest

from deloceta.cochains import FLAVOR_CYCLIC, FLAVOR_DELOCALIZED, FLAVOR_GROUP
from deloceta.groups import CyclicGroup
from deloceta.ranks import ComplexTruncation, SizeCapError, bareiss_rank, cohomology_ranks


def test_bareiss_rank_basics():
    assert bareiss_rank([[1, 2], [2, 4]]) == 1
    assert bareiss_rank([[1, 0], [0, 1]]) == 2
    assert bareiss_rank([[0, 0], [0, 0]]) == 0
    assert bareiss_rank([]) == 0
    # 3x3 with huge intermediate values stays exact
    m = [[10**9, 1, 0], [0, 10**9, 1], [1, 0, 10**9]]
    assert bareiss_rank(m) == 3


def test_delocalized_ranks_z2():
    grp = CyclicGroup(2)
    cl = grp.conjugacy_class(1, radius=2)
    assert cohomology_ranks(grp, FLAVOR_DELOCALIZED, 2, cls=cl) == [1, 0, 1]


@pytest.mark.parametrize("k", [2, 3, 4])
def test_delocalized_parity_pattern(k):
    grp = CyclicGroup(k)
    for gamma in range(1, k):
        cl = grp.conjugacy_class(gamma, radius=k)
        assert cohomology_ranks(grp, FLAVOR_DELOCALIZED, 3, cls=cl) == [1, 0, 1, 0]


def test_group_cohomology_ranks():
    assert cohomology_ranks(CyclicGroup(3), FLAVOR_GROUP, 3) == [1, 0, 0, 0]
    assert cohomology_ranks(CyclicGroup(4), FLAVOR_GROUP, 2)[0] == 1


def test_s3_group_cohomology_low_degrees(s3):
    assert cohomology_ranks(s3, FLAVOR_GROUP, 2) == [1, 0, 0]


def test_plain_cyclic_ranks_count_classes():
    # HC^0 of the full group algebra has one trace per conjugacy class
    grp = CyclicGroup(2)
    trunc = ComplexTruncation(grp, FLAVOR_CYCLIC, 2)
    assert trunc.cohomology_rank(0) == 2
    assert trunc.cohomology_rank(1) == 0
    assert trunc.cohomology_rank(2) == 2


def test_consecutive_matrices_compose_to_zero():
    grp = CyclicGroup(3)
    cl = grp.conjugacy_class(1, radius=3)
    trunc = ComplexTruncation(grp, FLAVOR_DELOCALIZED, 3, cls=cl)
    assert trunc.verify_composition_zero(0)
    assert trunc.verify_composition_zero(1)
    homog = ComplexTruncation(grp, FLAVOR_GROUP, 3)
    assert homog.verify_composition_zero(0)
    assert homog.verify_composition_zero(1)


def test_size_cap():
    grp = CyclicGroup(8)
    trunc = ComplexTruncation(grp, FLAVOR_GROUP, 8)
    with pytest.raises(SizeCapError):
        trunc.dimension(7)


def test_infinite_group_rejected():
    from deloceta.cochains import FlavorError
    from deloceta.groups import FreeAbelianGroup

    with pytest.raises(FlavorError):
        ComplexTruncation(FreeAbelianGroup(1), FLAVOR_GROUP, 2)
