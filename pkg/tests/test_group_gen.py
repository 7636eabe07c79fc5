import math
from collections import Counter

import pytest
from sympy import primorial, prime

from permpqc.group_gen import (
    MAX_DIM,
    InvalidDimensionError,
    first_primes,
    generate_generator,
    make_params,
    validate_generator,
)
from permpqc.perm_core import (
    DegreeMismatchError,
    Permutation,
    SeededRng,
    cycle_decomposition,
    from_cycles,
    order,
    power,
)


def test_first_primes_against_sympy():
    assert first_primes(MAX_DIM) == [prime(i) for i in range(1, MAX_DIM + 1)]


@pytest.mark.parametrize("dim", [1, 2, 3, 8, 16, 30, MAX_DIM])
def test_params_against_independent_formulas(dim):
    params = make_params(dim)
    assert params.primes == tuple(prime(i) for i in range(1, dim + 1))
    assert params.partition_sums[-1] == params.degree == sum(params.primes)
    assert list(params.partition_sums) == [sum(params.primes[:i + 1]) for i in range(dim)]
    assert list(params.primorials) == [int(primorial(i)) for i in range(1, dim + 1)]
    assert params.omega == params.primorials[-1]


def test_dim_16_values():
    params = make_params(16)
    assert params.degree == 381
    assert params.omega == 32589158477190044730
    assert params.primes[-1] == 53


@pytest.mark.parametrize("dim", [0, -1, MAX_DIM + 1])
def test_bad_dimension(dim):
    with pytest.raises(InvalidDimensionError):
        make_params(dim)


@pytest.mark.parametrize("dim", [1, 2, 5, 16, 25])
def test_generator_cycle_type_and_order(dim):
    params = make_params(dim)
    rng = SeededRng(dim)
    for _ in range(20):
        p = generate_generator(params, rng)
        assert p.degree == params.degree
        assert Counter(cycle_decomposition(p).lengths) == Counter(params.primes)
        assert order(p) == params.omega
        assert validate_generator(params, p)


def test_generator_exact_order_certificate():
    params = make_params(16)
    p = generate_generator(params, SeededRng(3))
    assert power(p, params.omega).is_identity()
    for ell in params.primes:
        assert not power(p, params.omega // ell).is_identity()


def test_generator_is_seed_deterministic():
    params = make_params(16)
    assert generate_generator(params, SeededRng(1)) == generate_generator(params, SeededRng(1))
    assert generate_generator(params, SeededRng(1)) != generate_generator(params, SeededRng(2))


def test_generator_points_are_spread():
    # Every point should land in every cycle length with some frequency.
    params = make_params(3)
    rng = SeededRng(8)
    where = Counter()
    for _ in range(3000):
        p = generate_generator(params, rng)
        for cyc in cycle_decomposition(p).cycles:
            if 1 in cyc:
                where[len(cyc)] += 1
    # point 1 lies on a cycle of length l with probability l / 10
    for ell in (2, 3, 5):
        assert abs(where[ell] / 3000 - ell / 10) < 0.04


def test_validate_reports_missing_and_unexpected():
    params = make_params(2)
    bad = from_cycles(5, [(1, 2, 3, 4)])
    check = validate_generator(params, bad)
    assert not check
    assert 2 in check.missing and 3 in check.missing
    assert 4 in check.unexpected
    assert "missing" in check.diagnostic
    good = from_cycles(5, [(1, 2), (3, 4, 5)])
    assert validate_generator(params, good).ok


def test_validate_degree_mismatch():
    with pytest.raises(DegreeMismatchError):
        validate_generator(make_params(2), Permutation([1, 2, 3]))
