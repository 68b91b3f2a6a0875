import json

import pytest

from diraccomb import documents as D
from diraccomb import gallery as G
from diraccomb.almostperiodic import ExponentialSum
from diraccomb.cli import main
from diraccomb.schwartz import TestFunction


def run(capsys, monkeypatch, argv, stdin=""):
    monkeypatch.setattr("sys.stdin", __import__("io").StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_comb_round_trip_is_exact():
    for name in ("zd", "theorem10", "theorem11", "counterexample:J=3", "random:seed=9"):
        f = G.by_name(name)
        text = D.dumps(f)
        assert D.comb_from_doc(D.loads(text)) == f
        assert D.dumps(D.comb_from_doc(D.loads(text))) == text


def test_other_kinds_round_trip():
    phi = TestFunction(2, 1.25, (0.1, -0.2), (0.0, 0.3), (((0, 0), 1.0), ((1, 1), 0.5 - 2j)))
    assert D.testfn_from_doc(D.loads(D.dumps(phi))) == phi
    g = ExponentialSum(1, ((1.0, (1.0,)), (0.5j, (2**0.5,))))
    assert D.expsum_from_doc(D.loads(D.dumps(g))) == g
    doc = D.points_to_doc([(0.5,), (-1.25,)], 1)
    assert D.points_from_doc(json.loads(json.dumps(doc))) == [(-1.25,), (0.5,)]


@pytest.mark.parametrize(
    "text, where",
    [
        ('{"kind": "comb",\n "dim": 1,\n}', "line 3 column 1"),
        ('[1, 2]', "$"),
        ('{"kind": "nope"}', "$.kind"),
        ('{"kind": "comb", "dim": 1, "components": [{"lattice": [["1"]], "translate": ["x"], "terms": []}]}',
         "$.components[0].translate[0]"),
        ('{"kind": "comb", "dim": 1, "components": [{"lattice": [["1"]], "translate": ["0"], "terms": [{"k": [0]}]}]}',
         "$.components[0].terms[0].m"),
        ('{"kind": "comb", "dim": 2, "components": [{"lattice": [["1", "0"]], "translate": ["0", "0"], "terms": []}]}',
         "$.components[0].lattice"),
        ('{"kind": "comb", "regime": "fuzzy", "dim": 1, "components": []}', "$.regime"),
    ],
)
def test_parse_errors_are_positioned(text, where):
    with pytest.raises(D.DocumentError) as info:
        D.comb_from_doc(D.loads(text))
    assert info.value.where == where


def test_gallery_zd_is_self_dual(capsys, monkeypatch):
    code, doc, _ = run(capsys, monkeypatch, ["gallery", "zd", "--dim", "2"])
    assert code == 0
    code, out, _ = run(capsys, monkeypatch, ["comb", "ft"], doc)
    assert code == 0 and out == doc


def test_verify_poisson_on_theorem10(capsys, monkeypatch):
    _, doc, _ = run(capsys, monkeypatch, ["gallery", "theorem10"])
    code, out, _ = run(capsys, monkeypatch, ["--seed", "4", "verify", "poisson", "--tol", "1e-8", "--reflection"], doc)
    assert code == 0 and out.startswith("result PASS")


def test_verify_poisson_reports_tail_failure(capsys, monkeypatch):
    _, doc, _ = run(capsys, monkeypatch, ["gallery", "zd"])
    code, _, err = run(capsys, monkeypatch, ["verify", "poisson", "--radius", "0.5"], doc)
    assert code == 2 and "tail" in err


def test_pointset_diagnose_counterexample(capsys, monkeypatch):
    _, doc, _ = run(capsys, monkeypatch, ["gallery", "counterexample:J=4"])
    code, out, _ = run(capsys, monkeypatch, ["pointset", "diagnose", "--radius", "20", "--radii", "5,10,20"], doc)
    assert code == 0
    eta = float(next(line.split()[1] for line in out.splitlines() if line.startswith("separating_constant")))
    assert eta > 0


def test_comb_eval_and_pair(capsys, monkeypatch, tmp_path):
    _, doc, _ = run(capsys, monkeypatch, ["gallery", "zd"])
    code, out, _ = run(capsys, monkeypatch, ["comb", "eval", "--radius", "5/2"], doc)
    assert code == 0
    assert out.splitlines()[1:] == [f"{n} 0 1 0" for n in range(-2, 3)]
    phi = tmp_path / "phi.json"
    phi.write_text(D.dumps(TestFunction(1, 1.0, (0.0,), (0.0,), (((0,), 1.0),))))
    code, out, _ = run(capsys, monkeypatch, ["comb", "pair", "--testfn", str(phi), "--radius", "8"], doc)
    assert code == 0 and out.splitlines()[0].startswith("value 1.08643481121")


def test_ap_periods(capsys, monkeypatch, tmp_path):
    g = tmp_path / "g.json"
    g.write_text(D.dumps(ExponentialSum(1, ((1.0, (1.0,)),))))
    code, out, _ = run(capsys, monkeypatch, ["ap", "periods", "--in", str(g), "--eps", "0.1", "--range", "0,3", "--step", "1"])
    assert code == 0
    rows = [line for line in out.splitlines() if not line.startswith("#")]
    assert [float(r.split()[0]) for r in rows] == [0.0, 1.0, 2.0, 3.0]


def test_config_errors_exit_3(capsys, monkeypatch):
    assert run(capsys, monkeypatch, ["gallery", "nothing"])[0] == 3
    assert run(capsys, monkeypatch, ["comb", "ft"], "{not json")[0] == 3
    _, doc, _ = run(capsys, monkeypatch, ["gallery", "zd"])
    assert run(capsys, monkeypatch, ["comb", "eval", "--radius", "1", "--center", "0,0"], doc)[0] == 3
