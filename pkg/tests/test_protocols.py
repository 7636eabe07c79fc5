import itertools

import pytest

from permpqc.group_gen import generate_generator, make_params
from permpqc.lehmer import encode_message
from permpqc.perm_core import (
    DegreeMismatchError,
    Permutation,
    SeededRng,
    compose,
    from_cycles,
    identity,
    inverse,
    power,
    random_permutation,
)
from permpqc.protocols import (
    Ciphertext,
    ElGamalPrivateDCP,
    ElGamalPrivateDP,
    InvalidGeneratorError,
    dh_keygen,
    dh_shared_key,
    elgamal_dcp_decrypt,
    elgamal_dcp_encrypt,
    elgamal_dcp_keygen,
    elgamal_dp_decrypt,
    elgamal_dp_encrypt,
    elgamal_dp_keygen,
    sample_exponent,
)

P16 = make_params(16)


def test_dh_matches_definition():
    rng = SeededRng(1)
    p = generate_generator(P16, rng)
    alice = dh_keygen(P16, p, rng)
    bob = dh_keygen(P16, p, rng)
    assert alice.token == power(p, alice.secret)
    assert dh_shared_key(alice.secret, bob.token) == power(p, alice.secret * bob.secret)
    assert dh_shared_key(alice.secret, bob.token) == dh_shared_key(bob.secret, alice.token)


def test_dh_random_sessions():
    rng = SeededRng(2)
    p = generate_generator(P16, rng)
    for _ in range(200):
        a, b = dh_keygen(P16, p, rng), dh_keygen(P16, p, rng)
        assert dh_shared_key(a.secret, b.token) == dh_shared_key(b.secret, a.token)


def test_forced_exponents_including_zero():
    p = generate_generator(P16, SeededRng(3))
    assert dh_keygen(P16, p, secret=0).token.is_identity()
    assert dh_keygen(P16, p, secret=5).token == power(p, 5)
    with pytest.raises(ValueError):
        dh_keygen(P16, p)
    with pytest.raises(ValueError):
        dh_keygen(P16, p, secret=-1)


def test_sample_exponent_range():
    params = make_params(1)
    rng = SeededRng(4)
    assert {sample_exponent(params, rng) for _ in range(50)} == {1}
    params = make_params(2)
    assert {sample_exponent(params, rng) for _ in range(500)} == {1, 2, 3, 4, 5}


def test_invalid_generator_rejected():
    with pytest.raises(InvalidGeneratorError):
        dh_keygen(P16, identity(381), secret=1)
    bad = from_cycles(5, [(1, 2, 3, 4, 5)])
    with pytest.raises(InvalidGeneratorError):
        elgamal_dcp_keygen(make_params(2), bad, identity(5), m=1, n=1)


def test_degree_mismatch_rejected():
    rng = SeededRng(5)
    p = generate_generator(P16, rng)
    with pytest.raises(DegreeMismatchError):
        elgamal_dcp_keygen(P16, p, identity(10), m=1, n=1)
    with pytest.raises(DegreeMismatchError):
        elgamal_dcp_decrypt(ElGamalPrivateDCP(1, 1), p, Ciphertext(identity(5), identity(5)))


def _dcp_setup(seed):
    rng = SeededRng(seed)
    p = generate_generator(P16, rng)
    g = random_permutation(381, rng)
    return rng, p, g


def test_dcp_matches_definition():
    rng, p, g = _dcp_setup(6)
    a_priv, a_pub = elgamal_dcp_keygen(P16, p, g, rng)
    b_priv, b_pub = elgamal_dcp_keygen(P16, p, g, rng)
    assert a_pub.value == compose(compose(power(p, a_priv.m), g), power(p, a_priv.n))
    msg = encode_message(381, 987654321)
    ct = elgamal_dcp_encrypt(P16, p, g, b_pub, a_priv, msg, t=11)
    k = power(p, 11)
    km, kn = power(k, a_priv.m), power(k, a_priv.n)
    assert ct.y1 == compose(compose(km, g), kn)
    assert ct.y2 == compose(msg, compose(compose(km, b_pub.value), kn))
    assert elgamal_dcp_decrypt(b_priv, p, ct) == msg


def test_dcp_round_trips():
    rng, p, g = _dcp_setup(7)
    for _ in range(100):
        a_priv, _ = elgamal_dcp_keygen(P16, p, g, rng)
        b_priv, b_pub = elgamal_dcp_keygen(P16, p, g, rng)
        msg = random_permutation(381, rng)
        ct = elgamal_dcp_encrypt(P16, p, g, b_pub, a_priv, msg, rng)
        assert elgamal_dcp_decrypt(b_priv, p, ct) == msg


def test_dcp_wrong_key_fails():
    rng, p, g = _dcp_setup(8)
    a_priv, _ = elgamal_dcp_keygen(P16, p, g, rng)
    b_priv, b_pub = elgamal_dcp_keygen(P16, p, g, rng)
    msg = random_permutation(381, rng)
    ct = elgamal_dcp_encrypt(P16, p, g, b_pub, a_priv, msg, rng)
    wrong = ElGamalPrivateDCP(b_priv.m + 1, b_priv.n)
    assert elgamal_dcp_decrypt(wrong, p, ct) != msg


def test_dp_matches_definition_and_round_trips():
    rng = SeededRng(9)
    p, q = generate_generator(P16, rng), generate_generator(P16, rng)
    g = random_permutation(381, rng)
    a_priv, a_pub = elgamal_dp_keygen(P16, p, q, g, rng)
    assert a_pub.value == compose(compose(power(p, a_priv.m), g), power(q, a_priv.n))
    for _ in range(100):
        a_priv, _ = elgamal_dp_keygen(P16, p, q, g, rng)
        b_priv, b_pub = elgamal_dp_keygen(P16, p, q, g, rng)
        msg = random_permutation(381, rng)
        ct = elgamal_dp_encrypt(P16, p, q, g, b_pub, a_priv, msg, rng)
        assert elgamal_dp_decrypt(b_priv, p, q, ct) == msg


def test_keys_and_ciphertexts_are_immutable():
    rng, p, g = _dcp_setup(10)
    priv, pub = elgamal_dcp_keygen(P16, p, g, rng)
    with pytest.raises(AttributeError):
        priv.m = 3
    with pytest.raises(ValueError):
        pub.value.array[0] = 1


# -- exhaustive small cases -------------------------------------------------------

def exhaustive_check(dim):
    params = make_params(dim)
    n, omega = params.degree, params.omega
    rng = SeededRng(100 + dim)
    p = generate_generator(params, rng)
    q = generate_generator(params, rng)
    g = random_permutation(n, rng)
    msg = random_permutation(n, rng)
    exps = range(omega)

    for a, b in itertools.product(exps, repeat=2):
        ta = dh_keygen(params, p, secret=a).token
        tb = dh_keygen(params, p, secret=b).token
        assert dh_shared_key(a, tb) == dh_shared_key(b, ta)

    for m, nn, r, s, t in itertools.product(exps, repeat=5):
        a_priv, _ = elgamal_dcp_keygen(params, p, g, m=m, n=nn)
        b_priv, b_pub = elgamal_dcp_keygen(params, p, g, m=r, n=s)
        ct = elgamal_dcp_encrypt(params, p, g, b_pub, a_priv, msg, t=t)
        assert elgamal_dcp_decrypt(b_priv, p, ct) == msg

    for m, nn, r, s, t, u in itertools.product(exps, repeat=6):
        a_priv = ElGamalPrivateDP(m, nn)
        b_priv, b_pub = elgamal_dp_keygen(params, p, q, g, m=r, n=s)
        ct = elgamal_dp_encrypt(params, p, q, g, b_pub, a_priv, msg, t=t, u=u)
        assert elgamal_dp_decrypt(b_priv, p, q, ct) == msg


def test_exhaustive_dim_1():
    # dim 2 runs in the acceptance suite
    exhaustive_check(1)


def test_decrypt_formula_uses_inverse_mask():
    rng, p, g = _dcp_setup(12)
    priv, pub = elgamal_dcp_keygen(P16, p, g, rng)
    y1 = random_permutation(381, rng)
    y2 = random_permutation(381, rng)
    mask = compose(compose(power(p, priv.m), y1), power(p, priv.n))
    assert elgamal_dcp_decrypt(priv, p, Ciphertext(y1, y2)) == compose(y2, inverse(mask))
