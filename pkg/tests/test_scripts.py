import importlib.util
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


def _load(name):
    spec = importlib.util.spec_from_file_location(name, SCRIPTS / f"{name}.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


@pytest.mark.parametrize("name,argv", [
    ("werner_sweep", ["--points", "5"]),
    ("chsh_curve", ["--steps", "4"]),
    ("schumacher_trend", ["--blocks", "5,10"]),
    ("bell_diagonal_sweep", ["--samples", "50"]),
])
def test_script_runs(name, argv, capsys):
    _load(name).main(argv)
    assert capsys.readouterr().out.strip()


def test_werner_sweep_flip():
    rows = _load("werner_sweep").sweep(_load("werner_sweep").SweepConfig(points=4))
    assert [r["ppt"] for r in rows] == ["Separable", "Separable", "Entangled", "Entangled"]
