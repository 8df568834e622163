import json
from fractions import Fraction

import pytest

from opengw import cli
from opengw.laurent import Laurent


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_ogw_disk(capsys):
    rc, out, _ = run(capsys, "ogw", "--labels", "1", "--degree", "2,0",
                     "--a", "1=1", "--eps", "1=+")
    assert rc == 0
    assert out == '{"0": "1/2"}\n'


def test_ogw_negative_side(capsys):
    rc, out, _ = run(capsys, "ogw", "--labels", "1", "--degree", "0,2",
                     "--a", "1=1", "--eps", "1=-")
    assert rc == 0
    assert json.loads(out) == {"0": "-1/2"}


def test_ogw_graphsum_path(capsys):
    rc, out, _ = run(capsys, "ogw", "--labels", "1", "--degree", "2,0",
                     "--a", "1=1", "--eps", "1=+", "--path", "graphsum")
    assert rc == 0
    assert json.loads(out) == {"0": "1/2"}


def test_ogw_closed_torus(capsys):
    rc, out, _ = run(capsys, "ogw", "--gs", "1", "--labels", "1",
                     "--degree", "1,1", "--closed",
                     "--a", "1=2", "--eps", "1=+")
    assert rc == 0
    assert json.loads(out) == {"0": "1/24"}


def test_ogw_explicit_boundary(capsys):
    rc, out, _ = run(capsys, "ogw", "--degree", "1,1",
                     "--boundary", "0,0")
    assert rc == 0
    assert json.loads(out) == {"-2": "1/8"}


def test_ogw_spec_file(tmp_path, capsys):
    spec = {"components": [
        {"gs": 0, "labels": [1], "d": [1, 0], "boundary": [1]},
        {"gs": 0, "labels": [2], "d": [2, 0], "boundary": [2]},
    ]}
    f = tmp_path / "spec.json"
    f.write_text(json.dumps(spec))
    rc, out, _ = run(capsys, "ogw", "--spec", str(f),
                     "--a", "1=0,2=1", "--eps", "1=+,2=+")
    assert rc == 0
    assert json.loads(out) == {"0": "1/2"}


def test_ogw_trace_on_stderr(capsys):
    rc, out, err = run(capsys, "ogw", "--labels", "1", "--degree", "2,0",
                       "--a", "1=1", "--eps", "1=+", "--trace")
    assert rc == 0
    assert json.loads(out) == {"0": "1/2"}
    entries = [json.loads(line) for line in err.splitlines()]
    assert len(entries) == 2
    total = Laurent.zero()
    for e in entries:
        total = total + Laurent.from_json(e["term"])
    assert total == Laurent.term(Fraction(1, 2))


def test_graphs_listing(capsys):
    rc, out, _ = run(capsys, "graphs", "--labels", "1", "--degree", "1,0")
    assert rc == 0
    got = json.loads(out)
    assert len(got) == 1
    assert got[0]["aut"] == 1


def test_trees_listing(capsys):
    rc, out, _ = run(capsys, "trees", "--labels", "1", "--degree", "2,0")
    assert rc == 0
    got = json.loads(out)
    assert len(got) == 2
    assert all("vertices" in t and "aut" in t for t in got)


def test_morphisms_listing(capsys):
    rc, out, _ = run(capsys, "morphisms", "--labels", "1", "--degree", "2,0")
    assert rc == 0
    got = json.loads(out)
    assert len(got) == 2
    assert {m["segments"] for m in got} == {0, 1}
    assert all(m["volume"] == "1" for m in got)


def test_volume(tmp_path, capsys):
    obj = {"vertices": ["a", "b"],
           "edges": [["a", "a"], ["b", "b"]],
           "wavy": [["a", "b"]],
           "loops": [],
           "d_new": {"n:a": 2, "n:b": 1},
           "d_old": {"o:a,b": 3}}
    f = tmp_path / "twoface.json"
    f.write_text(json.dumps(obj))
    rc, out, _ = run(capsys, "volume", "--bc", str(f))
    assert rc == 0
    assert out == "2\n"


def test_psi_torus_point(capsys):
    rc, out, _ = run(capsys, "psi", "--genus", "1", "--b", "1")
    assert rc == 0
    assert out == "1/24\n"


def test_psi_hodge(capsys):
    rc, out, _ = run(capsys, "psi", "--genus", "1", "--b", "0",
                     "--hodge", "1")
    assert rc == 0
    assert out == "1/24\n"


# ------------------------------------------------------------------
# input errors exit with status 2 and name the offending field


@pytest.mark.parametrize("argv,needle", [
    (("ogw", "--labels", "1", "--degree", "2,0",
      "--a", "1=x", "--eps", "1=+"), "--a"),
    (("ogw", "--labels", "1", "--degree", "2",
      "--a", "1=0", "--eps", "1=+"), "--degree"),
    (("ogw", "--labels", "1", "--degree", "2,0",
      "--a", "1=0", "--eps", "1=2"), "--eps"),
    (("ogw", "--labels", "1",
      "--a", "1=0", "--eps", "1=+"), "--degree"),
    (("volume", "--bc", "/nonexistent/x.json"), "x.json"),
])
def test_input_errors(capsys, argv, needle):
    rc = cli.main(list(argv))
    err = capsys.readouterr().err
    assert rc == 2
    assert err.startswith("error:")
    assert needle in err


def test_problem_mismatch_is_input_error(capsys):
    rc, _, err = run(capsys, "ogw", "--labels", "1", "--degree", "2,0")
    assert rc == 2
    assert err.startswith("error:")


def test_unstable_psi_is_input_error(capsys):
    rc, _, err = run(capsys, "psi", "--genus", "1")
    assert rc == 2
    assert "unstable" in err


def test_unknown_suite_rejected():
    with pytest.raises(SystemExit) as ei:
        cli.main(["verify", "--suite", "nonsense"])
    assert ei.value.code == 2


# ------------------------------------------------------------------
# verification suites


@pytest.mark.parametrize("suite", ["dd-vanish", "divisor", "cayley"])
def test_small_suites_pass(capsys, suite):
    rc, out, _ = run(capsys, "verify", "--suite", suite,
                     "--max-d", "2", "--max-labels", "2")
    assert rc == 0
    assert "FAIL" not in out
    assert f"{suite}:" in out


def test_partition_suite(capsys):
    rc, out, _ = run(capsys, "verify", "--suite", "partition")
    assert rc == 0
    assert "partition: 60 cases, ok" in out


def test_paths_suite(capsys):
    rc, out, _ = run(capsys, "verify", "--suite", "paths", "--max-d", "2")
    assert rc == 0
    assert "FAIL" not in out


def test_jobs_flag_does_not_change_results(capsys):
    rc1, out1, _ = run(capsys, "ogw", "--labels", "1", "--degree", "3,0",
                       "--a", "1=2", "--eps", "1=+", "--jobs", "1")
    rc4, out4, _ = run(capsys, "ogw", "--labels", "1", "--degree", "3,0",
                       "--a", "1=2", "--eps", "1=+", "--jobs", "4")
    assert rc1 == rc4 == 0
    assert out1 == out4


def test_counterexample_is_printed(capsys, monkeypatch):
    # sabotage the oracle to confirm failures surface with exit 1
    monkeypatch.setattr(cli.oracles, "disk_cover_closed",
                        lambda a: Fraction(7))
    rc, out, _ = run(capsys, "verify", "--suite", "disk-cover",
                     "--max-d", "1", "--max-labels", "1")
    assert rc == 1
    assert "FAIL" in out
    assert "predicted" in out
