"""Command line interface.

Exit codes: 0 success, 1 protocol mismatch, 2 analysis failure, and the
sysexits range (64 usage, 65 bad data, 66 missing input, 73 unwritable
output) for everything else.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
from pathlib import Path
from typing import Optional

from . import keyfile
from .analysis import (
    DHTranscript,
    NotInSubgroupError,
    UnsupportedStructureError,
    audit_session,
    dlp_cycle_attack,
)
from .bench import OPERATIONS, run_bench
from .conformance import replay_dh, replay_elgamal
from .group_gen import DEFAULT_DIM, MAX_DIM, GroupParams, generate_generator, make_params, validate_generator
from .keyfile import KeyFile, KeyFileError
from .lehmer import MessageCapacityWarning, RankOutOfRangeError, encode_message, rank, unrank
from .perm_core import Permutation, PermutationError, SeededRng, random_permutation
from .protocols import (
    Ciphertext,
    ElGamalPrivateDCP,
    ElGamalPrivateDP,
    ElGamalPublicKey,
    InvalidGeneratorError,
    dh_keygen,
    dh_shared_key,
    elgamal_dcp_decrypt,
    elgamal_dcp_encrypt,
    elgamal_dcp_keygen,
    elgamal_dp_decrypt,
    elgamal_dp_encrypt,
    elgamal_dp_keygen,
)
from . import vectors

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ANALYSIS = 2
EXIT_USAGE = 64
EXIT_DATAERR = 65
EXIT_NOINPUT = 66
EXIT_CANTCREAT = 73

SEED_ENV = "PERMPQC_SEED"


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _braced(values) -> str:
    return "{" + ", ".join(str(v) for v in values) + "}"


def _params(args) -> GroupParams:
    dim = args.dim
    if dim is None:
        dim = DEFAULT_DIM
    if dim < 1:
        raise CliError(f"--dim must be >= 1, got {dim}", EXIT_USAGE)
    if dim > DEFAULT_DIM and not getattr(args, "allow_large_dim", False):
        raise CliError(
            f"--dim above {DEFAULT_DIM} needs --allow-large-dim (maximum {MAX_DIM})", EXIT_USAGE
        )
    if dim > MAX_DIM:
        raise CliError(f"--dim must be <= {MAX_DIM}", EXIT_USAGE)
    return make_params(dim)


def _seed(value: Optional[int], label: str = "seed") -> int:
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CliError(f"{SEED_ENV} must be an integer", EXIT_USAGE) from None
    seed = secrets.randbits(64)
    print(f"warning: no --{label} or {SEED_ENV} given; using OS entropy seed {seed}", file=sys.stderr)
    return seed


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_NOINPUT) from None


def _load(path: str, role: Optional[str] = None) -> KeyFile:
    try:
        kf = keyfile.parse(_read(path))
    except KeyFileError as exc:
        raise CliError(f"{path}: {exc}", EXIT_DATAERR) from None
    if role is not None and kf.role != role:
        raise CliError(f"{path}: expected a {role} file, got {kf.role}", EXIT_DATAERR)
    return kf


def _load_perm(path: str, field: str) -> Permutation:
    """A permutation from a key file field, or from a plain text listing."""
    text = _read(path)
    if text.lstrip().startswith("{") and '"format"' in text:
        try:
            kf = keyfile.parse(text)
        except KeyFileError as exc:
            raise CliError(f"{path}: {exc}", EXIT_DATAERR) from None
        if field not in kf.payload:
            raise CliError(f"{path}: no {field!r} field in {kf.role} file", EXIT_DATAERR)
        return kf[field]
    try:
        return Permutation.from_text(text)
    except PermutationError as exc:
        raise CliError(f"{path}: {exc}", EXIT_DATAERR) from None


def _write(out: Optional[str], text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc.strerror}", EXIT_CANTCREAT) from None


def _emit_keyfile(out: Optional[str], kf: KeyFile) -> None:
    _write(out, keyfile.serialize(kf))


def _same_params(*files: KeyFile) -> GroupParams:
    dims = {kf.params.dim for kf in files}
    if len(dims) != 1:
        raise CliError(f"key files use different dimensions: {sorted(dims)}", EXIT_DATAERR)
    return files[0].params


# -- commands ----------------------------------------------------------------

def cmd_params(args) -> int:
    params = _params(args)
    if args.format == "json":
        doc = {
            "dim": params.dim,
            "primes": list(params.primes),
            "partition_sums": list(params.partition_sums),
            "primorials": [str(x) for x in params.primorials],
            "degree": params.degree,
            "omega": str(params.omega),
        }
        print(json.dumps(doc, indent=2))
    else:
        print(f"Dim= {params.dim}")
        print(f"Prime list= {_braced(params.primes)}")
        print(f"Partition sum= {_braced(params.partition_sums)}")
        print(f"Primorial list= {_braced(params.primorials)}")
        print(f"Degree= {params.degree}")
        print(f"Omega= {params.omega}")
    return EXIT_OK


def cmd_gen(args) -> int:
    params = _params(args)
    rng = SeededRng(_seed(args.seed))
    if args.kind == "auxiliary":
        kf = KeyFile("auxiliary", params, {"g": random_permutation(params.degree, rng)})
    else:
        payload = {"p": generate_generator(params, rng)}
        if args.with_q:
            payload["q"] = generate_generator(params, rng)
        kf = KeyFile("generator", params, payload)
    _emit_keyfile(args.out, kf)
    return EXIT_OK


def _generator(path: str, need_q: bool = False) -> tuple[GroupParams, Permutation, Optional[Permutation]]:
    kf = _load(path, "generator")
    params = kf.params
    for name in ("p", "q"):
        if name in kf.payload:
            check = validate_generator(params, kf[name])
            if not check:
                raise CliError(f"{path}: {name} is not a valid generator: {check.diagnostic}", EXIT_DATAERR)
    if need_q and "q" not in kf.payload:
        raise CliError(f"{path}: the dp variant needs a second generator q (gen --with-q)", EXIT_DATAERR)
    return params, kf["p"], kf.get("q")


def _print_replay(result, fmt: str) -> int:
    if fmt == "json":
        print(json.dumps(result.to_dict(), indent=2))
    else:
        print(result.to_text())
    return EXIT_OK if result.ok else EXIT_MISMATCH


def cmd_dh(args) -> int:
    if args.vector:
        if args.vector != "appendix-dh":
            raise CliError("dh replays only --vector appendix-dh", EXIT_USAGE)
        return _print_replay(replay_dh(), args.format)
    if not args.generator:
        raise CliError("dh needs --generator (or --vector appendix-dh)", EXIT_USAGE)
    params, p, _ = _generator(args.generator)

    def party(secret_file, seed, label):
        if secret_file:
            kf = _load(secret_file, "dh_secret")
            _same_params(kf, KeyFile("generator", params, {"p": p}))
            return dh_keygen(params, p, secret=kf["secret"])
        return dh_keygen(params, p, SeededRng(_seed(seed, label)))

    alice = party(args.alice_secret, args.seed_a, "seed-a")
    bob = party(args.bob_secret, args.seed_b, "seed-b")
    token_a = _load_perm(args.alice_token, "token") if args.alice_token else alice.token
    token_b = _load_perm(args.bob_token, "token") if args.bob_token else bob.token
    for tok in (token_a, token_b):
        if tok.degree != params.degree:
            raise CliError("token degree does not match the generator", EXIT_DATAERR)
    key_a = dh_shared_key(alice.secret, token_b)
    key_b = dh_shared_key(bob.secret, token_a)
    agree = key_a == key_b

    transcript = {
        "format": "permpqc-dh-transcript",
        "format_version": 1,
        "dim": params.dim,
        "alice_secret": str(alice.secret),
        "bob_secret": str(bob.secret),
        "alice_token": list(token_a.images),
        "bob_token": list(token_b.images),
        "alice_key": list(key_a.images),
        "bob_key": list(key_b.images),
        "keys_equal": agree,
    }
    if args.out:
        out = Path(args.out)
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise CliError(f"cannot create {out}: {exc.strerror}", EXIT_CANTCREAT) from None
        for name, kf in (
            ("alice_secret.json", KeyFile("dh_secret", params, {"secret": alice.secret, "token": alice.token})),
            ("bob_secret.json", KeyFile("dh_secret", params, {"secret": bob.secret, "token": bob.token})),
            ("alice_token.json", KeyFile("dh_token", params, {"token": token_a})),
            ("bob_token.json", KeyFile("dh_token", params, {"token": token_b})),
        ):
            _emit_keyfile(str(out / name), kf)
        _write(str(out / "transcript.json"), _dump_transcript(transcript))

    if args.format == "json":
        sys.stdout.write(_dump_transcript(transcript))
    else:
        print(f"dim: {params.dim}")
        print(f"alice_secret: {alice.secret}")
        print(f"bob_secret: {bob.secret}")
        print(f"alice_token: {token_a.to_text()}")
        print(f"bob_token: {token_b.to_text()}")
        print(f"alice_key: {key_a.to_text()}")
        print(f"bob_key: {key_b.to_text()}")
        print(f"keys_equal: {'yes' if agree else 'no'}")
    return EXIT_OK if agree else EXIT_MISMATCH


def _dump_transcript(doc: dict) -> str:
    lines = [f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in doc.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def cmd_keygen(args) -> int:
    params, p, q = _generator(args.generator, need_q=args.variant == "dp")
    aux = _load(args.aux, "auxiliary")
    _same_params(aux, KeyFile("generator", params, {"p": p}))
    rng = SeededRng(_seed(args.seed))
    if args.variant == "dcp":
        priv, pub = elgamal_dcp_keygen(params, p, aux["g"], rng)
    else:
        priv, pub = elgamal_dp_keygen(params, p, q, aux["g"], rng)
    _emit_keyfile(args.out_private, KeyFile(
        "elgamal_private", params, {"variant": args.variant, "m": priv.m, "n": priv.n}))
    _emit_keyfile(args.out_public, KeyFile(
        "elgamal_public", params, {"variant": args.variant, "value": pub.value}))
    return EXIT_OK


def _message(args, params: GroupParams) -> Permutation:
    sources = [x is not None for x in (args.message, args.integer, args.perm)]
    if sum(sources) != 1:
        raise CliError("give exactly one of --message, --integer, --perm", EXIT_USAGE)
    if args.integer is not None:
        try:
            import warnings
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", MessageCapacityWarning)
                msg = encode_message(params.degree, args.integer, params.omega)
            for w in caught:
                print(f"warning: {w.message}", file=sys.stderr)
            return msg
        except RankOutOfRangeError as exc:
            raise CliError(str(exc), EXIT_DATAERR) from None
    if args.perm is not None:
        try:
            msg = Permutation.from_text(args.perm)
        except PermutationError as exc:
            raise CliError(str(exc), EXIT_DATAERR) from None
    else:
        msg = _load_perm(args.message, "msg")
    if msg.degree != params.degree:
        raise CliError(f"message degree {msg.degree} does not match {params.degree}", EXIT_DATAERR)
    return msg


def _check_variant(kf: KeyFile, variant: str, path: str) -> None:
    if kf["variant"] != variant:
        raise CliError(f"{path}: {kf['variant']} key used with --variant {variant}", EXIT_DATAERR)


def cmd_encrypt(args) -> int:
    if args.vector:
        return _replay_elgamal_cli(args)
    for flag in ("generator", "aux", "sender_private", "receiver_public"):
        if getattr(args, flag) is None:
            raise CliError(f"encrypt needs --{flag.replace('_', '-')}", EXIT_USAGE)
    params, p, q = _generator(args.generator, need_q=args.variant == "dp")
    aux = _load(args.aux, "auxiliary")
    sender = _load(args.sender_private, "elgamal_private")
    receiver = _load(args.receiver_public, "elgamal_public")
    _check_variant(sender, args.variant, args.sender_private)
    _check_variant(receiver, args.variant, args.receiver_public)
    _same_params(aux, sender, receiver, KeyFile("generator", params, {"p": p}))
    msg = _message(args, params)
    rng = SeededRng(_seed(args.seed))
    pub = ElGamalPublicKey(receiver["value"])
    if args.variant == "dcp":
        ct = elgamal_dcp_encrypt(params, p, aux["g"], pub,
                                 ElGamalPrivateDCP(sender["m"], sender["n"]), msg, rng)
    else:
        ct = elgamal_dp_encrypt(params, p, q, aux["g"], pub,
                                ElGamalPrivateDP(sender["m"], sender["n"]), msg, rng)
    _emit_keyfile(args.out, KeyFile("ciphertext", params,
                                    {"variant": args.variant, "y1": ct.y1, "y2": ct.y2}))
    return EXIT_OK


def cmd_decrypt(args) -> int:
    if args.vector:
        return _replay_elgamal_cli(args)
    for flag in ("generator", "private", "ciphertext"):
        if getattr(args, flag) is None:
            raise CliError(f"decrypt needs --{flag}", EXIT_USAGE)
    params, p, q = _generator(args.generator, need_q=args.variant == "dp")
    priv = _load(args.private, "elgamal_private")
    ctf = _load(args.ciphertext, "ciphertext")
    _check_variant(priv, args.variant, args.private)
    _check_variant(ctf, args.variant, args.ciphertext)
    _same_params(priv, ctf, KeyFile("generator", params, {"p": p}))
    ct = Ciphertext(ctf["y1"], ctf["y2"])
    if args.variant == "dcp":
        msg = elgamal_dcp_decrypt(ElGamalPrivateDCP(priv["m"], priv["n"]), p, ct)
    else:
        msg = elgamal_dp_decrypt(ElGamalPrivateDP(priv["m"], priv["n"]), p, q, ct)
    r = rank(msg)
    if args.out:
        _emit_keyfile(args.out, KeyFile("message", params, {"msg": msg, "rank": r}))
    if args.format == "json":
        print(json.dumps({"rank": str(r), "msg": list(msg.images)}))
    else:
        print(f"rank: {r}")
        if args.show:
            print(f"msg: {msg.to_text()}")
    return EXIT_OK


def _replay_elgamal_cli(args) -> int:
    if args.vector != "appendix-elgamal":
        raise CliError("encrypt/decrypt replay only --vector appendix-elgamal", EXIT_USAGE)
    return _print_replay(replay_elgamal(), args.format)


def cmd_rank(args) -> int:
    if (args.perm is None) == (args.file is None):
        raise CliError("give exactly one of --perm or --file", EXIT_USAGE)
    if args.perm is not None:
        try:
            perm = Permutation.from_text(args.perm)
        except PermutationError as exc:
            raise CliError(str(exc), EXIT_DATAERR) from None
    else:
        perm = _load_perm(args.file, "msg")
    print(rank(perm))
    return EXIT_OK


def cmd_unrank(args) -> int:
    degree = args.degree
    if degree is None:
        degree = _params(args).degree
    if degree < 1:
        raise CliError("--degree must be >= 1", EXIT_USAGE)
    try:
        perm = unrank(degree, args.rank)
    except RankOutOfRangeError as exc:
        raise CliError(str(exc), EXIT_DATAERR) from None
    print(perm.to_text())
    return EXIT_OK


def cmd_attack(args) -> int:
    params, p, _ = _generator(args.generator)
    token = _load_perm(args.token, "token")
    if token.degree != params.degree:
        raise CliError("token degree does not match the generator", EXIT_DATAERR)
    try:
        sol = dlp_cycle_attack(p, token)
    except (NotInSubgroupError, UnsupportedStructureError) as exc:
        print(f"attack failed: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    if args.format == "json":
        print(json.dumps({
            "exponent": str(sol.exponent),
            "modulus": str(sol.modulus),
            "residues": [[r, m] for r, m in sol.residues],
        }))
    else:
        print(sol.exponent)
    return EXIT_OK


def cmd_audit(args) -> int:
    if args.vector == "appendix-dh":
        v = vectors.dh_vector()
        report = audit_session(make_params(16), v["p"], vectors.dh_transcript())
    elif args.vector == "appendix-elgamal":
        v = vectors.elgamal_vector()
        report = audit_session(make_params(16), v["p"], vectors.elgamal_transcript())
    elif args.transcript and args.generator:
        params, p, _ = _generator(args.generator)
        try:
            doc = json.loads(_read(args.transcript))
            tr = DHTranscript(
                token_a=Permutation(doc["alice_token"]),
                token_b=Permutation(doc["bob_token"]),
                key_a=Permutation(doc["alice_key"]) if "alice_key" in doc else None,
                key_b=Permutation(doc["bob_key"]) if "bob_key" in doc else None,
                secret_a=int(doc["alice_secret"]) if "alice_secret" in doc else None,
                secret_b=int(doc["bob_secret"]) if "bob_secret" in doc else None,
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise CliError(f"{args.transcript}: malformed transcript ({exc})", EXIT_DATAERR) from None
        report = audit_session(params, p, tr)
    else:
        raise CliError("audit needs --vector or --generator with --transcript", EXIT_USAGE)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.to_text())
    return EXIT_OK if report.consistent else EXIT_MISMATCH


def cmd_bench(args) -> int:
    if args.iterations < 1:
        raise CliError("--iterations must be >= 1", EXIT_USAGE)
    params = _params(args)
    report = run_bench(args.op, args.iterations, dim=params.dim,
                       seed=_seed(args.seed), exponent_bits=args.exponent_bits)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    elif args.format == "csv":
        print(report.to_csv())
    else:
        print(report.to_csv())
        print()
        print(report.to_text())
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="permpqc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def dim_flags(sp):
        sp.add_argument("--dim", type=int, default=None, help=f"number of prime cycles (default {DEFAULT_DIM})")
        sp.add_argument("--allow-large-dim", action="store_true", help=f"permit --dim up to {MAX_DIM}")

    def fmt(sp, choices=("text", "json")):
        sp.add_argument("--format", choices=choices, default="text")

    sp = sub.add_parser("params", help="print the public group parameters")
    dim_flags(sp)
    fmt(sp)
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("gen", help="generate a generator or auxiliary permutation")
    dim_flags(sp)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--kind", choices=("generator", "auxiliary"), default="generator")
    sp.add_argument("--with-q", action="store_true", help="also draw a second generator q (dp variant)")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("dh", help="run or replay a Diffie-Hellman exchange")
    sp.add_argument("--generator")
    sp.add_argument("--seed-a", type=int)
    sp.add_argument("--seed-b", type=int)
    sp.add_argument("--alice-secret")
    sp.add_argument("--bob-secret")
    sp.add_argument("--alice-token")
    sp.add_argument("--bob-token")
    sp.add_argument("--vector", choices=("appendix-dh",))
    sp.add_argument("--out", help="directory for key files and transcript.json")
    fmt(sp)
    sp.set_defaults(func=cmd_dh)

    sp = sub.add_parser("keygen", help="generate an ElGamal key pair")
    sp.add_argument("--variant", choices=("dcp", "dp"), default="dcp")
    sp.add_argument("--generator", required=True)
    sp.add_argument("--aux", required=True)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out-private", required=True)
    sp.add_argument("--out-public", required=True)
    sp.set_defaults(func=cmd_keygen)

    for name, func in (("encrypt", cmd_encrypt), ("decrypt", cmd_decrypt)):
        sp = sub.add_parser(name, help=f"ElGamal {name}")
        sp.add_argument("--variant", choices=("dcp", "dp"), default="dcp")
        sp.add_argument("--generator")
        sp.add_argument("--vector", choices=("appendix-elgamal",))
        sp.add_argument("--out")
        fmt(sp)
        if name == "encrypt":
            sp.add_argument("--aux")
            sp.add_argument("--sender-private")
            sp.add_argument("--receiver-public")
            sp.add_argument("--message", help="message key file or plain permutation listing")
            sp.add_argument("--integer", type=int, help="integer message, encoded by Lehmer rank")
            sp.add_argument("--perm", help="message as a whitespace separated listing")
            sp.add_argument("--seed", type=int)
        else:
            sp.add_argument("--private")
            sp.add_argument("--ciphertext")
            sp.add_argument("--show", action="store_true", help="also print the message permutation")
        sp.set_defaults(func=func)

    sp = sub.add_parser("rank", help="Lehmer rank of a permutation")
    sp.add_argument("--perm")
    sp.add_argument("--file")
    sp.set_defaults(func=cmd_rank)

    sp = sub.add_parser("unrank", help="permutation with a given Lehmer rank")
    sp.add_argument("rank", type=int)
    sp.add_argument("--degree", type=int)
    dim_flags(sp)
    sp.set_defaults(func=cmd_unrank)

    sp = sub.add_parser("attack", help="recover a DH exponent by cycle-shift CRT")
    sp.add_argument("--generator", required=True)
    sp.add_argument("--token", required=True)
    fmt(sp)
    sp.set_defaults(func=cmd_attack)

    sp = sub.add_parser("audit", help="check a transcript for internal consistency")
    sp.add_argument("--vector", choices=("appendix-dh", "appendix-elgamal"))
    sp.add_argument("--generator")
    sp.add_argument("--transcript")
    fmt(sp)
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("bench", help="latency benchmark")
    sp.add_argument("--op", choices=OPERATIONS, default="dh-session")
    sp.add_argument("--iterations", type=int, default=1000)
    sp.add_argument("--exponent-bits", type=int)
    sp.add_argument("--seed", type=int, default=None)
    dim_flags(sp)
    fmt(sp, ("text", "csv", "json"))
    sp.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"permpqc: {exc}", file=sys.stderr)
        return exc.code
    except (InvalidGeneratorError, PermutationError) as exc:
        print(f"permpqc: {exc}", file=sys.stderr)
        return EXIT_DATAERR


if __name__ == "__main__":
    sys.exit(main())
