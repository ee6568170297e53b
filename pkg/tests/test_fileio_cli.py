import json
import random
import subprocess
import sys

import pytest

from rackmsr.cli import main
from rackmsr.families import build_code
from rackmsr.ffield import make_extension_field
from rackmsr.fileio import (
    FormatError,
    format_codeword,
    load_spec,
    parse_codeword,
    read_codeword,
    save_spec,
    spec_from_dict,
    spec_to_dict,
    write_codeword,
)

C1_ARGS = ["--family", "c1", "--racks", "4", "--rack-size", "2", "-k", "5", "--helpers", "3"]
C3_ARGS = ["--family", "c3", "--racks", "3", "--rack-size", "2", "-k", "3", "--helpers", "2"]


@pytest.fixture(scope="module")
def small_codes():
    return [
        build_code("C1", {"nbar": 3, "u": 2, "k": 3, "dbar": 2}),
        build_code("C1", {"nbar": 3, "u": 2, "k": 3, "dbar": 2}, field=make_extension_field(5, 2)),
        build_code("C2", {"n": 4, "k": 2, "d": 3}),
        build_code("C3", {"nbar": 3, "u": 2, "k": 3, "dbar": 2}),
        build_code("RS", {"q": 4, "u": 3, "nbar": 2, "k": 3, "dbar": 1}),
    ]


def test_spec_and_codeword_roundtrip(small_codes, tmp_path):
    for i, code in enumerate(small_codes):
        save_spec(tmp_path / f"s{i}.json", code)
        again = load_spec(tmp_path / f"s{i}.json")
        assert spec_to_dict(again) == spec_to_dict(code)
        cw = code.random_codeword(random.Random(i))
        write_codeword(tmp_path / f"c{i}.txt", code, cw)
        back = read_codeword(tmp_path / f"c{i}.txt", again)
        assert back == cw and again.parity_check(back)


def test_erasure_markers(small_codes):
    code = small_codes[3]
    cw = code.erase(code.random_codeword(random.Random(0)), [1, 4])
    text = format_codeword(code, cw)
    assert "*" in text
    assert code.decode(parse_codeword(code, text)) == code.decode(cw)


def test_parse_errors(small_codes):
    code = small_codes[0]
    text = format_codeword(code, code.zero_codeword())
    lines = text.splitlines()
    with pytest.raises(FormatError):
        parse_codeword(code, "")
    with pytest.raises(FormatError, match="header"):
        parse_codeword(code, "\n".join(["C1 9 9 9 9 17 3"] + lines[1:]))
    with pytest.raises(FormatError, match="rows"):
        parse_codeword(code, "\n".join(lines[:-1]))
    partial = lines[:]
    partial[1] = "* " + partial[1].split(" ", 1)[1]
    with pytest.raises(FormatError, match="partially"):
        parse_codeword(code, "\n".join(partial))
    bad = lines[:]
    bad[1] = "99 " + bad[1].split(" ", 1)[1]
    with pytest.raises(FormatError):
        parse_codeword(code, "\n".join(bad))


def test_spec_dict_errors(small_codes):
    d = spec_to_dict(small_codes[1])
    d["field"] = "5^2/4,0,1"  # x^2 - 1 is reducible
    with pytest.raises(FormatError, match="reducible"):
        spec_from_dict(d)
    with pytest.raises(FormatError, match="missing"):
        spec_from_dict({"family": "C1", "field": "17"})


# ---------------------------------------------------------------------------
# cli


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_c1(capsys):
    rc, out, _ = run(["build", *C1_ARGS], capsys)
    d = json.loads(out)
    assert rc == 0 and d["field"] == "17^1/-" and d["lam"] == 3


def test_build_usage_errors(capsys):
    rc, _, err = run(["build", "--family", "c1", "--racks", "4", "--rack-size", "2", "--helpers", "3"], capsys)
    assert rc == 2 and "-k" in err
    rc, _, err = run(["build", *C3_ARGS, "--field", "7"], capsys)
    assert rc == 2 and "mu" in err
    rc, _, err = run(["build", "--family", "c1", "--racks", "3", "--rack-size", "2", "-k", "7", "--helpers", "2"], capsys)
    assert rc == 2 and "k=7" in err
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--spec", "x.json", "--checks", "mds,bogus"])
    assert exc.value.code == 2


def test_pipeline(tmp_path, capsys):
    spec, cw, bad, fixed = (str(tmp_path / n) for n in ("s.json", "c.txt", "b.txt", "f.txt"))
    assert main(["build", *C3_ARGS, "-o", spec]) == 0
    assert main(["encode", "--spec", spec, "--seed", "3", "-o", cw]) == 0
    assert main(["corrupt", "--spec", spec, "--codeword", cw, "--erase", "1,4,5", "-o", bad]) == 0
    assert main(["decode", "--spec", spec, "--codeword", bad, "-o", fixed]) == 0
    code = load_spec(spec)
    assert read_codeword(fixed, code) == read_codeword(cw, code)

    rc, out, err = run(["repair", "--spec", spec, "--codeword", cw, "--fail", "3", "--helpers", "0,2"], capsys)
    d = json.loads(out)
    assert rc == 0 and d["matches_stored"] and d["transcript"]["bandwidth"] == 8
    col, _ = code.repair(read_codeword(cw, code), 3, (0, 2))
    assert d["repaired"] == [int(x) for x in col]
    assert "downloaded 8" in err

    rc, _, err = run(["repair", "--spec", spec, "--codeword", cw, "--fail", "3", "--helpers", "1,2"], capsys)
    assert rc == 2 and "helper" in err


def test_encode_data_file(tmp_path, capsys):
    spec = str(tmp_path / "s.json")
    main(["build", "--family", "c2", "-n", "4", "-k", "2", "--helpers", "3", "-o", spec])
    code = load_spec(spec)
    rows = [[(i + j) % 5 for j in range(2)] for i in range(16)]
    (tmp_path / "d.txt").write_text("\n".join(" ".join(map(str, r)) for r in rows) + "\n")
    rc, out, _ = run(["encode", "--spec", spec, "--data", str(tmp_path / "d.txt")], capsys)
    cw = parse_codeword(code, out)
    assert rc == 0 and [[int(x) for x in r[:2]] for r in cw] == rows and code.parity_check(cw)
    (tmp_path / "short.txt").write_text("1 2\n")
    rc, _, err = run(["encode", "--spec", spec, "--data", str(tmp_path / "short.txt")], capsys)
    assert rc == 2 and "rows" in err


def test_verify_exit_codes(tmp_path, capsys):
    spec, cw, bad = (str(tmp_path / n) for n in ("s.json", "c.txt", "b.txt"))
    main(["build", *C1_ARGS, "-o", spec])
    rc, out, _ = run(["verify", "--spec", spec, "--seed", "1"], capsys)
    assert rc == 0 and json.loads(out)["passed"]
    main(["encode", "--spec", spec, "--seed", "1", "-o", cw])
    main(["corrupt", "--spec", spec, "--codeword", cw, "--flip", "6:2", "-o", bad])
    rc, out, _ = run(["verify", "--spec", spec, "--codeword", bad, "--checks", "mds"], capsys)
    d = json.loads(out)
    assert rc == 1 and d["checks"]["mds"]["status"] == "fail" and d["checks"]["mds"]["detail"]["erased"]
    rc, out, _ = run(["verify", "--spec", spec, "--checks", "repair", "--format", "tsv"], capsys)
    assert rc == 0 and out.startswith("check\tstatus")


def test_seed_precedence(tmp_path, capsys, monkeypatch):
    spec = str(tmp_path / "s.json")
    main(["build", *C3_ARGS, "-o", spec])
    outs = {}
    for name, argv, env in [("flag", ["--seed", "4"], "9"), ("env", [], "4"), ("other", [], "5")]:
        monkeypatch.setenv("RACKMSR_SEED", env)
        outs[name] = run(["encode", "--spec", spec, *argv], capsys)[1]
    assert outs["flag"] == outs["env"] != outs["other"]


def test_bounds_and_bench(capsys):
    rc, out, _ = run(["bounds", *C1_ARGS, "--format", "json"], capsys)
    vals = {r["name"]: r["value"] for r in json.loads(out)}
    assert rc == 0 and vals["rack_cutset"] == "24" and "homogeneous_rack_term" not in vals  # u does not divide k
    rc, out, _ = run(["bounds", "--family", "c1", "--racks", "4", "--rack-size", "2", "-k", "4", "--helpers", "3",
                      "--format", "json"], capsys)
    vals = {r["name"]: r["value"] for r in json.loads(out)}
    assert (vals["homogeneous_rack_term"], vals["homogeneous_local_term"]) == ("24", "4")
    rc, _, err = run(["bounds"], capsys)
    assert rc == 2
    rc, out, _ = run(["bench", *C3_ARGS], capsys)
    header, row = out.strip().splitlines()
    assert rc == 0 and dict(zip(header.split("\t"), row.split("\t")))["bandwidth"] == "8"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rackmsr", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "numbered from 0" in res.stdout
