import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from hgft.cli import (
    DocumentError,
    document_to_mapping,
    emit_curves,
    load_mapping,
    mapping_to_document,
    run_command,
    save_mapping,
)
from hgft.extremal import extremal_bn
from hgft.harmonic import ClassParams, identity, point_data

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = run_command(list(argv))
    out = capsys.readouterr().out
    return code, out


def write(tmp_path, doc, name="f.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


EXTREMAL_DOC = {"alpha": 1, "beta": 0, "h": [[0, 0], [1, 0]], "g": [[0, 0], [0, 0], [0.25, 0]]}


def test_load_mapping_example(tmp_path):
    f, params = load_mapping(write(tmp_path, EXTREMAL_DOC))
    assert params == ClassParams(1, 0)
    assert f.allclose(extremal_bn(2, params))


@pytest.mark.parametrize("doc, fragment", [
    ({"alpha": 0, "beta": 0, "h": [[0, 0], [2, 0]], "g": [[0, 0]]}, "invariant violation"),
    ({"alpha": 0, "beta": 0, "h": [[0, 0], [1, 0]], "g": [[1, 0]]}, "invariant violation"),
    ({"alpha": 0, "beta": 2, "h": [[0, 0], [1, 0]], "g": [[0, 0]]}, "class parameters"),
    ({"alpha": 0, "beta": 0, "h": [[0, 0], [1]], "g": [[0, 0]]}, "'h'[1]"),
    ({"alpha": "x", "beta": 0, "h": [[0, 0], [1, 0]], "g": [[0, 0]]}, "'alpha'"),
    ({"alpha": 0, "beta": 0, "g": [[0, 0]]}, "'h'"),
    ("{\"alpha\": 0,\n  \"beta\": }", "line 2"),
    ("[1, 2]", "JSON object"),
])
def test_load_mapping_errors(tmp_path, doc, fragment):
    with pytest.raises(DocumentError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        load_mapping(write(tmp_path, doc))


def test_check_exit_codes(tmp_path, capsys):
    code, out = run(capsys, "check", "--input", write(tmp_path, EXTREMAL_DOC))
    rep = json.loads(out)
    assert code == 0 and rep["schema"] == 1 and rep["grid"]["verdict"] == "member"
    assert rep["sufficient"]["margin"] == 0
    bad = dict(EXTREMAL_DOC, g=[[0, 0], [0, 0], [1, 0]])
    code, out = run(capsys, "check", "--input", write(tmp_path, bad))
    assert code == 1 and json.loads(out)["grid"]["verdict"] == "non-member"


def test_check_inconclusive(tmp_path, capsys, monkeypatch):
    # margin of z + conj(z^2/4) at alpha = 1 on the single radius 1 - 1e-10 lies in the band
    import hgft.classes as classes
    monkeypatch.setattr(classes.grid_membership, "__defaults__", ((1 - 1e-10,), 720))
    code, out = run(capsys, "check", "--input", write(tmp_path, EXTREMAL_DOC))
    assert code == 3 and json.loads(out)["grid"]["verdict"] == "inconclusive"


def test_grid_angles_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HGFT_GRID_ANGLES", "0")
    code, out = run(capsys, "check", "--input", write(tmp_path, EXTREMAL_DOC))
    assert code == 2 and json.loads(out)["error"] == "DocumentError"
    monkeypatch.setenv("HGFT_GRID_ANGLES", "16")
    code, _ = run(capsys, "check", "--input", write(tmp_path, EXTREMAL_DOC))
    assert code == 0


def test_usage_errors(capsys):
    assert run_command(["frobnicate"]) == 2
    assert run_command([]) == 2
    assert run_command(["radius"]) == 2
    assert "usage" in capsys.readouterr().err


def test_invalid_input_maps_to_2(tmp_path, capsys):
    code, out = run(capsys, "check", "--input", str(tmp_path / "missing.json"))
    assert code == 2 and json.loads(out)["schema"] == 1
    code, _ = run(capsys, "radius", "--kind", "quarter", "--p", "2", "--q", "5")
    assert code == 2
    code, _ = run(capsys, "hypergeo", "lemma", "--a", "1", "--b", "1", "--c", "2", "--which", "ii")
    assert code == 2


def test_radius_and_hypergeo_examples(capsys):
    code, out = run(capsys, "radius", "--kind", "r1", "--beta", "0")
    rep = json.loads(out)
    assert code == 0 and rep["provenance"] == "polynomial_root"
    assert rep["value"] == pytest.approx(0.2102, abs=1e-3)
    code, out = run(capsys, "hypergeo", "cond", "--id", "C64i", "--alpha", "0", "--beta", "0")
    assert code == 1 and json.loads(out)["satisfied"] is False
    code, out = run(capsys, "hypergeo", "gauss", "--a", "1", "--b", "1", "--c", "3")
    assert code == 0 and json.loads(out)["value"] == pytest.approx(2)


@pytest.mark.parametrize("argv", [
    ["bounds"], ["growth"], ["sections", "--p", "2", "--q", "2"], ["convolve", "--other"],
])
def test_document_subcommands(tmp_path, capsys, argv):
    path = write(tmp_path, EXTREMAL_DOC)
    if argv[-1] == "--other":
        argv = argv + [path]
    code, out = run(capsys, argv[0], "--input", path, *argv[1:])
    assert code == 0 and json.loads(out)["schema"] == 1


def test_generate_extremal_and_hat(tmp_path, capsys):
    out_path = tmp_path / "m.json"
    code, _ = run(capsys, "generate", "--seed", "3", "--alpha", "0.5", "--out", str(out_path))
    assert code == 0
    phi = {"alpha": 0, "beta": 0, "h": [[0, 0]] + [[1, 0]] * 20, "g": [[0, 0]]}
    code, out = run(capsys, "convolve", "--input", str(out_path), "--hat", write(tmp_path, phi, "phi.json"))
    assert code == 0
    code, out = run(capsys, "extremal", "--n", "2", "--alpha", "1")
    assert json.loads(out)["mapping"]["g"][2] == [0.25, 0.0]


def test_emit_curves_examples(tmp_path):
    path = tmp_path / "c.csv"
    emit_curves(identity(), [0.5], 16, str(path))
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["r", "theta", "re_f", "im_f", "jacobian"]
    for k, (r, t, x, y, j) in enumerate(rows[1:]):
        assert float(t) == 2 * math.pi * k / 16
        assert complex(float(x), float(y)) == pytest.approx(0.5 * np.exp(1j * float(t)), abs=1e-15)
        assert float(j) == 1.0
    f = extremal_bn(2, ClassParams(1, 0))
    emit_curves(f, [0.3, 0.5], 16, str(path))
    rows = list(csv.DictReader(path.open()))
    assert [float(r["r"]) for r in rows] == sorted(float(r["r"]) for r in rows)
    first = next(r for r in rows if r["r"] == "0.5")
    assert float(first["re_f"]) == pytest.approx(0.5625) and float(first["im_f"]) == 0
    for r in rows:
        z = float(r["r"]) * np.exp(1j * float(r["theta"]))
        assert abs(float(r["jacobian"]) - point_data(f, z).jacobian) <= 1e-12


def test_emit_curves_errors(tmp_path):
    with pytest.raises(DocumentError):
        emit_curves(identity(), [0.5], 4, str(tmp_path / "c.csv"))
    with pytest.raises(DocumentError):
        emit_curves(identity(), [1.5], 16, str(tmp_path / "c.csv"))
    with pytest.raises(DocumentError):
        emit_curves(identity(), [0.5], 16, str(tmp_path / "no" / "dir" / "c.csv"))


# --- golden files ----------------------------------------------------------------

def test_golden_radius(capsys):
    _, out = run(capsys, "radius", "--kind", "r1", "--beta", "0")
    assert out == (GOLDEN / "radius_r1_beta0.json").read_text()
    rep = json.loads(out)
    roots = np.roots([4, 1, -8, -2, -4, 1])
    oracle = min(r.real for r in roots if abs(r.imag) < 1e-12 and 0 < r.real < 1)
    assert rep["value"] == pytest.approx(oracle, abs=1e-12)


def test_golden_hypergeo_cond(capsys):
    _, out = run(capsys, "hypergeo", "cond", "--id", "C64i")
    assert out == (GOLDEN / "hypergeo_cond_C64i.json").read_text()


def test_golden_plot_data(tmp_path, capsys):
    path = tmp_path / "p.csv"
    code, _ = run(capsys, "plot-data", "--radii", "0.25,0.5", "--samples", "16", "--out", str(path))
    assert code == 0
    assert path.read_text() == (GOLDEN / "plot_identity.csv").read_text()


def _random_document(rng):
    def pairs(n):
        vals = rng.standard_normal((n, 2)) * 10.0 ** rng.integers(-300, 300, size=(n, 2))
        return [[float(x), float(y)] for x, y in vals]
    h = [[0.0, 0.0], [1.0, 0.0]] + pairs(int(rng.integers(0, 12)))
    g = [[0.0, 0.0]] + pairs(int(rng.integers(0, 12)))
    return {"alpha": float(rng.uniform(0, 5)), "beta": float(rng.uniform(0, 1)), "h": h, "g": g}


def test_json_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(2024)
    path = tmp_path / "rt.json"
    for _ in range(100):
        doc = _random_document(rng)
        f, params = document_to_mapping(doc)
        save_mapping(f, params, str(path))
        back = json.loads(path.read_text())
        assert back == doc
        f2, p2 = load_mapping(str(path))
        assert np.array_equal(f2.h.coeffs, f.h.coeffs) and np.array_equal(f2.g.coeffs, f.g.coeffs)
        assert mapping_to_document(f2, p2) == doc
