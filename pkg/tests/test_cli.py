import json
import subprocess
import sys

import pytest

from permpqc import keyfile
from permpqc.cli import main
from permpqc.lehmer import rank
from permpqc.perm_core import Permutation


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def keys(tmp_path, capsys):
    d = tmp_path
    assert run(["gen", "--seed", "1", "--with-q", "--out", str(d / "gen.json")], capsys)[0] == 0
    assert run(["gen", "--seed", "2", "--kind", "auxiliary", "--out", str(d / "aux.json")], capsys)[0] == 0
    return d


def test_params_text(capsys):
    code, out, _ = run(["params"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "Dim= 16"
    assert lines[1] == "Prime list= {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53}"
    assert lines[-2] == "Degree= 381"
    assert lines[-1] == "Omega= 32589158477190044730"


def test_params_json_and_small_dim(capsys):
    code, out, _ = run(["params", "--dim", "3", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["degree"] == 10 and doc["omega"] == "30"


def test_large_dim_needs_flag(capsys):
    assert run(["params", "--dim", "17"], capsys)[0] == 64
    code, out, _ = run(["params", "--dim", "17", "--allow-large-dim"], capsys)
    assert code == 0 and "Degree= 440" in out
    assert run(["params", "--dim", "51", "--allow-large-dim"], capsys)[0] == 64


def test_usage_errors_exit_64(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        main(["params", "--dim", "x"])
    assert exc.value.code == 64


def test_seed_env_and_entropy_warning(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PERMPQC_SEED", "5")
    run(["gen", "--out", str(tmp_path / "a.json")], capsys)
    run(["gen", "--seed", "5", "--out", str(tmp_path / "b.json")], capsys)
    assert (tmp_path / "a.json").read_text() == (tmp_path / "b.json").read_text()
    monkeypatch.delenv("PERMPQC_SEED")
    _, _, err = run(["gen", "--out", str(tmp_path / "c.json")], capsys)
    assert "OS entropy" in err


def test_dh_session_and_files(keys, capsys):
    out_dir = keys / "dh"
    code, out, _ = run(["dh", "--generator", str(keys / "gen.json"), "--seed-a", "3",
                        "--seed-b", "4", "--out", str(out_dir)], capsys)
    assert code == 0 and "keys_equal: yes" in out
    for name in ("alice_secret.json", "bob_secret.json", "alice_token.json",
                 "bob_token.json", "transcript.json"):
        assert (out_dir / name).exists()
    tr = json.loads((out_dir / "transcript.json").read_text())
    assert tr["alice_key"] == tr["bob_key"]

    # reuse stored secrets
    code, out2, _ = run(["dh", "--generator", str(keys / "gen.json"),
                         "--alice-secret", str(out_dir / "alice_secret.json"),
                         "--bob-secret", str(out_dir / "bob_secret.json")], capsys)
    assert code == 0 and out2 == out

    # attack recovers alice's exponent from her token
    code, out3, _ = run(["attack", "--generator", str(keys / "gen.json"),
                         "--token", str(out_dir / "alice_token.json")], capsys)
    assert code == 0 and out3.strip() == tr["alice_secret"]

    # audit the transcript
    code, out4, _ = run(["audit", "--generator", str(keys / "gen.json"),
                         "--transcript", str(out_dir / "transcript.json")], capsys)
    assert code == 0 and "consistent: yes" in out4


def test_dh_tampered_token_exit_1(keys, capsys):
    aux = keyfile.load(keys / "aux.json")
    bad = keyfile.KeyFile("dh_token", aux.params, {"token": aux["g"]})
    keyfile.save(keys / "bad.json", bad)
    code, out, _ = run(["dh", "--generator", str(keys / "gen.json"), "--seed-a", "3",
                        "--seed-b", "4", "--bob-token", str(keys / "bad.json")], capsys)
    assert code == 1 and "keys_equal: no" in out
    code, _, err = run(["attack", "--generator", str(keys / "gen.json"),
                        "--token", str(keys / "bad.json")], capsys)
    assert code == 2 and "attack failed" in err


def test_audit_tampered_transcript_exit_1(keys, capsys, tmp_path):
    run(["dh", "--generator", str(keys / "gen.json"), "--seed-a", "3", "--seed-b", "4",
         "--out", str(keys / "dh")], capsys)
    tr = json.loads((keys / "dh" / "transcript.json").read_text())
    tr["bob_key"] = list(range(1, 382))
    (tmp_path / "t.json").write_text(json.dumps(tr))
    code, out, _ = run(["audit", "--generator", str(keys / "gen.json"),
                        "--transcript", str(tmp_path / "t.json")], capsys)
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize("variant", ["dcp", "dp"])
def test_elgamal_round_trip(keys, capsys, variant):
    g = str(keys / "gen.json")
    for who, seed in (("a", "5"), ("b", "6")):
        assert run(["keygen", "--variant", variant, "--generator", g, "--aux", str(keys / "aux.json"),
                    "--seed", seed, "--out-private", str(keys / f"{who}.priv"),
                    "--out-public", str(keys / f"{who}.pub")], capsys)[0] == 0
    assert run(["encrypt", "--variant", variant, "--generator", g, "--aux", str(keys / "aux.json"),
                "--sender-private", str(keys / "a.priv"), "--receiver-public", str(keys / "b.pub"),
                "--integer", "424242", "--seed", "7", "--out", str(keys / "ct.json")], capsys)[0] == 0
    code, out, _ = run(["decrypt", "--variant", variant, "--generator", g,
                        "--private", str(keys / "b.priv"), "--ciphertext", str(keys / "ct.json"),
                        "--out", str(keys / "msg.json")], capsys)
    assert code == 0 and out.strip() == "rank: 424242"
    assert keyfile.load(keys / "msg.json")["rank"] == 424242

    other = "dp" if variant == "dcp" else "dcp"
    code, _, err = run(["decrypt", "--variant", other, "--generator", g,
                        "--private", str(keys / "b.priv"), "--ciphertext", str(keys / "ct.json")], capsys)
    assert code == 65 and "variant" in err


def test_encrypt_perm_message_and_capacity_warning(keys, capsys):
    g = str(keys / "gen.json")
    run(["keygen", "--generator", g, "--aux", str(keys / "aux.json"), "--seed", "5",
         "--out-private", str(keys / "a.priv"), "--out-public", str(keys / "a.pub")], capsys)
    base = ["encrypt", "--generator", g, "--aux", str(keys / "aux.json"),
            "--sender-private", str(keys / "a.priv"), "--receiver-public", str(keys / "a.pub"),
            "--seed", "1", "--out", str(keys / "ct.json")]
    code, _, err = run(base + ["--integer", str(32589158477190044730)], capsys)
    assert code == 0 and "subgroup order" in err
    assert run(base + ["--integer", "1", "--perm", "1 2"], capsys)[0] == 64
    assert run(base + ["--perm", "2 1"], capsys)[0] == 65


def test_dp_needs_second_generator(tmp_path, capsys):
    run(["gen", "--seed", "1", "--out", str(tmp_path / "gen.json")], capsys)
    run(["gen", "--seed", "2", "--kind", "auxiliary", "--out", str(tmp_path / "aux.json")], capsys)
    code, _, err = run(["keygen", "--variant", "dp", "--generator", str(tmp_path / "gen.json"),
                        "--aux", str(tmp_path / "aux.json"), "--seed", "1",
                        "--out-private", str(tmp_path / "x"), "--out-public", str(tmp_path / "y")], capsys)
    assert code == 65 and "--with-q" in err


def test_rank_unrank(capsys):
    assert run(["rank", "--perm", "3 1 2"], capsys)[1].strip() == "4"
    assert run(["unrank", "4", "--degree", "3"], capsys)[1].strip() == "3 1 2"
    code, out, _ = run(["unrank", "123"], capsys)
    assert code == 0 and rank(Permutation.from_text(out)) == 123
    assert run(["unrank", "6", "--degree", "3"], capsys)[0] == 65
    assert run(["rank", "--perm", "1 1"], capsys)[0] == 65
    assert run(["rank"], capsys)[0] == 64


def test_missing_and_bad_files(tmp_path, capsys):
    assert run(["attack", "--generator", str(tmp_path / "nope"), "--token", "x"], capsys)[0] == 66
    (tmp_path / "junk.json").write_text("{}")
    assert run(["attack", "--generator", str(tmp_path / "junk.json"), "--token", "x"], capsys)[0] == 65
    run(["gen", "--seed", "1", "--out", str(tmp_path / "gen.json")], capsys)
    code, _, _ = run(["gen", "--seed", "1", "--out", str(tmp_path / "no" / "dir" / "g.json")], capsys)
    assert code == 73


def test_vector_replays(capsys):
    code, out, _ = run(["dh", "--vector", "appendix-dh"], capsys)
    assert code == 0 and "result: PASS" in out
    for cmd in ("encrypt", "decrypt"):
        code, out, _ = run([cmd, "--vector", "appendix-elgamal"], capsys)
        assert code == 0 and "right-to-left" in out and "cannot be reproduced" in out
    code, out, _ = run(["decrypt", "--vector", "appendix-elgamal", "--format", "json"], capsys)
    assert json.loads(out)["ok"] is True


def test_audit_vectors(capsys):
    assert run(["audit", "--vector", "appendix-dh"], capsys)[0] == 0
    code, out, _ = run(["audit", "--vector", "appendix-elgamal", "--format", "json"], capsys)
    assert code == 1 and json.loads(out)["consistent"] is False
    assert run(["audit"], capsys)[0] == 64


def test_bench_cli(capsys):
    code, out, _ = run(["bench", "--iterations", "5", "--seed", "1", "--format", "csv"], capsys)
    assert code == 0 and out.startswith("operation,")
    assert run(["bench", "--iterations", "0", "--seed", "1"], capsys)[0] == 64


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "permpqc", "params", "--dim", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "Omega= 6" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "permpqc", "params", "--bogus"],
                          capture_output=True, text=True)
    assert proc.returncode == 64
