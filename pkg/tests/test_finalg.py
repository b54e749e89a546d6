import json
from dataclasses import replace
from itertools import product

import pytest

from resguard.finalg import (
    AlgebraError, Congruence, FiniteAlgebra, boolean2, cg_bruteforce, cg_hamiltonian, check_cip_identity,
    check_edpc_exponent, goedel_chain, hamiltonian_exponent, is_hamiltonian, lukasiewicz,
    noncommutative_chain_search, validate,
)


def partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in partitions(rest):
        yield [[first]] + p
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]


def least_congruence(A, b1, b2):
    """Intersection of every compatible partition that relates b1 and b2."""
    out = None
    for p in partitions(list(range(A.n))):
        theta = Congruence(A.n)
        for blk in p:
            for a in blk[1:]:
                theta.union(blk[0], a)
        if theta.related(b1, b2) and theta.is_compatible(A):
            pairs = theta.pairs()
            out = pairs if out is None else out & pairs
    return out


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_lukasiewicz_chains_are_mv(n):
    assert validate(lukasiewicz(n), commutative=True, mv=True).ok


def test_goedel_chain():
    A = goedel_chain(3)
    assert validate(A, commutative=True).ok
    assert not validate(A, mv=True).ok
    assert check_edpc_exponent(A, 1)


def test_broken_residuation_is_caught():
    base = lukasiewicz(4).to_json()
    for a, b in product(range(4), range(4)):
        data = json.loads(json.dumps(base))
        old = data["lres"][a][b]
        data["lres"][a][b] = (old + 1) % 4
        rep = validate(FiniteAlgebra.from_json(data))
        wit = rep.failures().get("residuation")
        assert wit is not None
        x, y, z = wit
        A = FiniteAlgebra.from_json(data)
        assert not (A.leq(y, A.lres[x][z]) == A.leq(A.prod[x][y], z) == A.leq(x, A.rres[z][y]))


def test_json_round_trip(tmp_path):
    A = lukasiewicz(3)
    path = tmp_path / "l3.json"
    path.write_text(json.dumps(A.to_json()))
    assert FiniteAlgebra.load(path) == A
    assert A.elements == ("0", "1/2", "1")


def test_malformed():
    data = lukasiewicz(3).to_json()
    del data["prod"]
    with pytest.raises(AlgebraError):
        FiniteAlgebra.from_json(data)
    data = lukasiewicz(3).to_json()
    data["meet"] = data["meet"][:2]
    with pytest.raises(AlgebraError):
        FiniteAlgebra.from_json(data)
    data = lukasiewicz(3).to_json()
    data["join"][0][0] = 7
    with pytest.raises(AlgebraError):
        FiniteAlgebra.from_json(data)


def test_cg_matches_partition_oracle():
    for A in (boolean2(), lukasiewicz(3), lukasiewicz(4), goedel_chain(3)):
        bare = replace(A, guard=None)
        for b1, b2 in product(range(A.n), range(A.n)):
            assert cg_bruteforce(A, b1, b2).pairs() == least_congruence(bare, b1, b2)
            assert cg_bruteforce(A, b1, b2, with_guard=True).pairs() == least_congruence(A, b1, b2)


def test_guard_collapses_goedel_congruence():
    A = goedel_chain(3)
    assert cg_bruteforce(A, 1, 2).blocks() == [[0], [1, 2]]
    assert cg_bruteforce(A, 1, 2, with_guard=True).blocks() == [[0, 1, 2]]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cg_hamiltonian(n):
    A = lukasiewicz(n)
    for b1, b2 in product(range(n), range(n)):
        assert cg_hamiltonian(A, b1, b2) == cg_bruteforce(A, b1, b2).pairs()


def test_simple_chains():
    # Łukasiewicz chains are simple: any non-trivial pair generates everything
    A = lukasiewicz(3)
    assert len(cg_bruteforce(A, 1, 2).blocks()) == 1
    assert len(cg_bruteforce(A, 1, 1).blocks()) == 3


def test_edpc_exponent():
    assert check_edpc_exponent(lukasiewicz(3), 2)
    assert not check_edpc_exponent(lukasiewicz(3), 1)
    assert check_edpc_exponent(boolean2(), 1)
    assert check_edpc_exponent(lukasiewicz(5), 4) and not check_edpc_exponent(lukasiewicz(5), 3)
    with pytest.raises(AlgebraError):
        check_edpc_exponent(boolean2(), -1)


def test_cip_on_l3():
    A = lukasiewicz(3)
    assert all(check_cip_identity(A, *q) for q in product(range(3), repeat=4))


def test_noncommutative_chain():
    found = noncommutative_chain_search(4)
    assert found is not None
    A, (a, b) = found
    assert validate(A).ok
    p = A.meet[a][A.e]
    assert A.prod[p][b] != A.prod[b][p]
    assert any(A.prod[x][y] != A.prod[y][x] for x, y in product(range(A.n), repeat=2))
    assert is_hamiltonian(lukasiewicz(4), 1) is True
    assert hamiltonian_exponent(lukasiewicz(4)) == 1
