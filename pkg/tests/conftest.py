import pytest

from deloceta.groups import CyclicGroup, FiniteTableGroup
from deloceta.spectral import AlgebraElement, eigendecompose


def permutation_table(perms, names):
    """Multiplication table for permutations under (p*q)(x) = p(q(x))."""
    index = {p: i for i, p in enumerate(perms)}
    deg = len(perms[0])

    def compose(p, q):
        return tuple(p[q[x]] for x in range(deg))

    table = [[index[compose(p, q)] for q in perms] for p in perms]
    return FiniteTableGroup(names, table)


def make_s3():
    perms = [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]
    names = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"]
    return permutation_table(perms, names)


def make_d4():
    """Dihedral group of the square: rotations r^k and reflections s r^k,
    as permutations of the vertices 0..3."""
    r = (1, 2, 3, 0)
    s = (0, 3, 2, 1)

    def compose(p, q):
        return tuple(p[q[x]] for x in range(4))

    def power(p, k):
        out = (0, 1, 2, 3)
        for _ in range(k):
            out = compose(p, out)
        return out

    perms = [power(r, k) for k in range(4)] + [compose(s, power(r, k)) for k in range(4)]
    names = ["e", "r", "r2", "r3", "s", "sr", "sr2", "sr3"]
    return permutation_table(perms, names)


@pytest.fixture(scope="session")
def s3():
    return make_s3()


@pytest.fixture(scope="session")
def d4():
    return make_d4()


@pytest.fixture(scope="session")
def z2_model():
    """The worked example D = e + 2*gamma on Z/2."""
    group = CyclicGroup(2)
    element = AlgebraElement.from_scalar_coeffs(group, {0: 1.0, 1: 2.0})
    return eigendecompose(element)


@pytest.fixture(scope="session")
def z2_class(z2_model):
    return z2_model.group.conjugacy_class(1, radius=2)
