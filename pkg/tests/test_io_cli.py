import json
from pathlib import Path

import numpy as np
import pytest

from bcfb import examples as ex
from bcfb.cli import EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK, main
from bcfb.fme import fixture_region
from bcfb.geometry import RatePoint, hausdorff, vertices
from bcfb.info import FeedbackBudget, assemble_joint
from bcfb.io import InputError, channel_from_json, dump_json, load_channel, load_scheme, scheme_from_json
from bcfb.regions import thm2_scheme_region

DATA = Path(__file__).resolve().parent.parent / "data"
CHANNEL = str(DATA / "bsc_pair.json")
EXAMPLE1 = str(DATA / "example1.json")
SP = str(DATA / "sp.json")


def _vertices_csv(path: Path) -> list[RatePoint]:
    rows = path.read_text().strip().splitlines()[1:]
    return [RatePoint(*map(float, r.split(","))) for r in rows]


# ---------------------------------------------------------------------------
# JSON inputs


def test_channel_forms_agree():
    a = channel_from_json({"w1": ex.bsc(0.2).tolist(), "w2": ex.bsc(0.1).tolist()})
    b = channel_from_json({"family": "bsbc", "p1": 0.2, "p2": 0.1})
    c = channel_from_json({"law": a.law.tolist(), "x_size": 2})
    np.testing.assert_allclose(a.law, b.law)
    np.testing.assert_allclose(a.law, c.law)
    assert load_channel(CHANNEL).law.shape == (2, 2, 2)


@pytest.mark.parametrize("doc,path", [
    ({"law": [[0.5, 0.5]]}, "$.law"),
    ({"law": [[[0.5, 0.6]]]}, "$"),
    ({"w1": [[1.0]]}, "$.w2"),
    ({"family": "bsbc", "p1": "x", "p2": 0.1}, "$.p1"),
    ({"family": "zzz"}, "$.family"),
    ({"law": [[[1.0]]], "y1_size": 3}, "$.y1_size"),
    ({}, "$"),
])
def test_channel_errors_name_the_path(doc, path):
    with pytest.raises(InputError) as info:
        channel_from_json(doc)
    assert info.value.path == path


def test_scheme_errors_name_the_path():
    with pytest.raises(InputError) as info:
        scheme_from_json({"q_pmf": [1.0], "aux_pmf": [[[[1.0]]]], "symbol_map": [[[[0.5]]]]})
    assert info.value.path == "$.symbol_map"
    with pytest.raises(InputError) as info:
        scheme_from_json({"twoaux": [[0.5, 0.5]], "test1": {"form": "z", "table": []}})
    assert info.value.path == "$.test1.form"
    with pytest.raises(InputError):
        load_scheme("/nonexistent/scheme.json")


def test_twoaux_scheme_matches_superposition(tmp_path):
    s = load_scheme(EXAMPLE1)
    assert s.sizes == (1, 2, 1, 2) and s.test1 is not None
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputError, match="invalid JSON"):
        load_scheme(str(bad))


def test_dump_json_is_plain_and_sorted(tmp_path):
    path = tmp_path / "x.json"
    dump_json({"b": np.float64(0.1), "a": np.arange(2)}, path)
    assert path.read_text() == '{\n  "a": [\n    0,\n    1\n  ],\n  "b": 0.1\n}\n'


# ---------------------------------------------------------------------------
# command line


def _eval(tmp_path, bound, scheme=EXAMPLE1, *extra):
    return main(["region", "eval", "--bound", bound, "--channel", CHANNEL, "--scheme", scheme,
                 "--out", str(tmp_path), *extra])


def test_cli_cor1_matches_bsbc(tmp_path):
    assert _eval(tmp_path, "cor1", EXAMPLE1, "--rfb1", "0.8") == EXIT_OK
    got = _vertices_csv(tmp_path / "cor1_vertices.csv")
    ref = vertices(ex.bsbc_region(ex.BsbcParams(0.2, 0.1, 0.2, 0.3), 0.8).region)
    assert hausdorff(got, ref) <= 1e-11  # CSV keeps 12 significant digits
    doc = json.loads((tmp_path / "cor1_region.json").read_text())
    assert [c["name"] for c in doc["constraints"]] == ["21a", "21b", "21c"]


def test_cli_thm2_matches_library_and_projection(tmp_path):
    assert _eval(tmp_path, "thm2", EXAMPLE1, "--rfb1", "0.8") == EXIT_OK
    doc = json.loads((tmp_path / "thm2_region.json").read_text())
    scheme, ch = load_scheme(EXAMPLE1), load_channel(CHANNEL)
    lib = thm2_scheme_region(scheme, ch, FeedbackBudget(0.8, 0.0)).region
    proj = fixture_region("appendix_b", assemble_joint(scheme, ch), 0.8, 0.0)
    got = [RatePoint(*v) for v in doc["vertices"]]
    assert hausdorff(got, vertices(lib)) <= 1e-12
    assert hausdorff(got, vertices(proj)) <= 1e-9


def test_cli_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert _eval(out, "thm1", EXAMPLE1, "--rfb1", "0.8") == EXIT_OK
    for name in ("thm1_region.json", "thm1_vertices.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_cli_exit_codes(tmp_path, capsys):
    assert _eval(tmp_path, "thm1", EXAMPLE1) == EXIT_INFEASIBLE
    verdict = json.loads((tmp_path / "thm1_verdict.json").read_text())
    assert verdict["feasible"] is False
    assert "negative slack" in capsys.readouterr().out
    assert _eval(tmp_path, "simple", EXAMPLE1, "--rfb1", "1") == EXIT_INFEASIBLE
    assert _eval(tmp_path, "thm4", EXAMPLE1) == EXIT_INPUT
    assert "$.update" in capsys.readouterr().err
    assert _eval(tmp_path, "simple", SP) == EXIT_INPUT
    assert _eval(tmp_path, "marton", "/no/such/file.json") == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"law": [[0.5, 0.5]]}))
    assert main(["region", "eval", "--bound", "marton", "--channel", str(bad), "--scheme", SP,
                 "--out", str(tmp_path)]) == EXIT_INPUT
    assert "$.law: expected 3 dimensions" in capsys.readouterr().err
    assert main(["figure", "2", "--grid", "0", "--out", str(tmp_path)]) == EXIT_INPUT


@pytest.mark.parametrize("bound", ["marton", "sp1", "sp2", "ne-outer", "enh1", "enh2", "cor1-swapped"])
def test_cli_other_bounds(tmp_path, bound):
    assert _eval(tmp_path, bound, SP, "--rfb2", "0.5") == EXIT_OK
    assert (tmp_path / f"{bound}_vertices.csv").exists()


def test_cli_figure_outputs(tmp_path):
    assert main(["figure", "3", "--grid", "6", "--out", str(tmp_path)]) == EXIT_OK
    names = sorted(p.name for p in tmp_path.iterdir())
    assert "fig3.gp" in names and "fig3_e_0.7.csv" in names and "fig3_e_0.2_nofb.csv" in names
    assert (tmp_path / "fig3_e_0.7.csv").read_text().startswith("r1,r2\n")


def test_cli_fme_and_certify(tmp_path, monkeypatch):
    monkeypatch.setenv("BCFB_OUT_DIR", str(tmp_path))
    assert main(["fme", "check", "--fixture", "appendix_b", "--trials", "5"]) == EXIT_OK
    assert json.loads((tmp_path / "fme_check.json").read_text())["reports"][0]["compared"] == 5
    assert main(["certify", "--channel", "bsbc", "--p1", "0.3", "--rfb1", "0.1"]) == EXIT_OK
    rep = json.loads((tmp_path / "certify.json").read_text())
    assert rep["certificate"]["pass"] and rep["oracle_agrees"]
