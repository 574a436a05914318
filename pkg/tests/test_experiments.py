import json
import math
import warnings

import numpy as np
import pytest

from msl import UniformMatroid, same_rank_function
from msl.cli import ConfigError, main, parse_config, run
from msl.enumeration import basis_membership, enumerate_bases, is_paving
from msl.experiments import (
    DEFAULT_GAMMA,
    ledger_verify,
    make_weights,
    pav_bound,
    pav_chain_holds,
    pav_sweep,
    rb_exact_mean_sparse_paving,
    rb_sweep,
    sample_sparse_paving,
    uni_bound,
    uni_sweep,
)
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def test_sampler_examples():
    rng = np.random.default_rng(0)
    M = sample_sparse_paving(7, 3, 0, rng)
    assert same_rank_function(M, UniformMatroid(3, 7))
    M = sample_sparse_paving(8, 4, 2, rng)
    assert len(M.hyperplanes) == 2 and is_paving(M)
    M = sample_sparse_paving(30, 6, 40, rng)
    hs = list(M.hyperplanes)
    assert all(len(a & b) <= 4 for i, a in enumerate(hs) for b in hs[i + 1:])


def test_sampler_shortfall_warns():
    rng = np.random.default_rng(1)
    with pytest.warns(UserWarning):
        M = sample_sparse_paving(5, 2, 50, rng, max_attempts=30)
    assert M.shortfall > 0


def test_weight_models():
    rng = np.random.default_rng(2)
    w = make_weights("uniform", 100, rng)
    assert all(0 < x <= 1 for x in w)
    w = make_weights("heavy", 10, rng)
    assert sorted(w)[-1] == 1.0 and sorted(w)[-2] <= 0.001 and len(set(w)) == 10
    with pytest.raises(Exception):
        make_weights("bimodal", 3, rng)


def test_rb_exact_formula_counts():
    rng = np.random.default_rng(3)
    for _ in range(5):
        M = sample_sparse_paving(9, 4, 4, rng)
        w = rng.random(9).tolist()
        memb = basis_membership(M)
        direct = math.fsum(w[e - 1] * float(memb[e]) for e in range(1, 10))
        assert rb_exact_mean_sparse_paving(M, w) == pytest.approx(direct, rel=1e-12)


def test_rb_constant_weights():
    rng = np.random.default_rng(4)
    M = sample_sparse_paving(10, 5, 6, rng)
    # every basis has r elements, so a constant weighting gives exactly r
    assert rb_exact_mean_sparse_paving(M, [1.0] * 10) == pytest.approx(5)
    assert len(enumerate_bases(M)) == math.comb(10, 5) - len(M.hyperplanes)


def test_bound_formulas():
    assert pav_bound(49) == pytest.approx(7)
    assert pav_bound(36) == math.inf
    assert uni_bound(49) == pytest.approx(3.5)
    assert all(pav_chain_holds(r) for r in range(37, 400))
    assert DEFAULT_GAMMA == pytest.approx(math.sqrt(8 * math.log(2)) + 0.01)


def test_sweeps_small():
    rows = rb_sweep((12, 16), seed=1, trials=1000)
    assert [r.n for r in rows] == [12, 16] and all(r.satisfied for r in rows)
    assert all(abs(r.mean - r.exact_mean) <= 4 * r.se for r in rows)
    rows = pav_sweep((5, 6), seed=1, trials=500)
    assert all(r.bound == math.inf and r.satisfied for r in rows)
    rows = uni_sweep((4,), seed=1, trials=500)
    assert rows[0].n == 10


def test_sweep_deterministic():
    a = [r.csv_row() for r in rb_sweep((12,), seed=5, trials=600)]
    b = [r.csv_row() for r in rb_sweep((12,), seed=5, trials=600)]
    assert a == b


# -- CLI -----------------------------------------------------------------

def test_parse_config():
    cfg = parse_config("experiment = rb_sweep\nseed = 3  # note\nn_values = 20, 40\n")
    assert cfg["seed"] == 3 and cfg["n_values"] == [20, 40] and cfg["trials"] == 10_000
    for bad in ("seed = 1", "experiment = rb_sweep", "experiment = rb_sweep\nseed = x",
                "experiment = nope\nseed = 1", "experiment = rb_sweep\nseed = 1\ncolour = red",
                "experiment = rb_sweep\nseed = 1\ntrials = 0", "experiment rb_sweep"):
        with pytest.raises(ConfigError):
            parse_config(bad)


def test_run_byte_identical(tmp_path):
    outs = []
    for k in range(2):
        csv_path = tmp_path / f"out{k}.csv"
        cfg_path = tmp_path / f"c{k}.cfg"
        cfg_path.write_text(f"experiment = rb_sweep\nseed = 11\ntrials = 800\nn_values = 12 16\n"
                            f"output_csv = {csv_path}\noutput_json = {tmp_path}/o{k}.json\n")
        assert main(["run", str(cfg_path)]) == 0
        outs.append(csv_path.read_bytes())
    assert outs[0] == outs[1]
    rows = json.loads((tmp_path / "o0.json").read_text())
    assert rows[0]["experiment"] == "rb_sweep"


def test_run_exit_codes(tmp_path):
    missing = tmp_path / "cfg"
    missing.write_text(f"experiment = eval\nseed = 1\nmatroid = {tmp_path}/none.mat\nalg = rb\n")
    assert main(["run", str(missing)]) == 3
    bad = tmp_path / "bad"
    bad.write_text("experiment = eval\n")
    assert main(["run", str(bad)]) == 2
    assert main(["run", str(tmp_path / "absent.cfg")]) == 2
    spec = tmp_path / "spec"
    spec.write_text(f"experiment = eval\nseed = 1\nmatroid = {DATA}/k4.mat\nalg = warp\n")
    assert main(["run", str(spec)]) == 3


def test_eval_subcommand(tmp_path, capsys):
    out = tmp_path / "e.csv"
    code = main(["eval", "--matroid", str(DATA / "k4.mat"), "--alg", "tgreedy", "--trials",
                 "500", "--seed", "2", "--csv", str(out)])
    assert code == 0
    assert out.read_text().startswith("matroid,algorithm,n,r,trials,mean,se,opt,ratio,violations")
    assert "violations=0" in capsys.readouterr().out


def test_eval_violation_exit(tmp_path):
    # UNI with capacity 3 on a graphic matroid with triangles is not sound
    code = main(["eval", "--matroid", str(DATA / "k4.mat"), "--alg", "uni[3]", "--trials",
                 "500", "--seed", "2"])
    assert code == 4


def test_run_ledger_subset(monkeypatch):
    from msl import experiments

    cases = experiments._ledger_cases()
    monkeypatch.setattr(experiments, "_ledger_cases", lambda: cases[:2])
    rows = ledger_verify(seed=0, trials=500)
    assert len(rows) == 4 and all(r.satisfied and r.violations == 0 for r in rows)
    assert run({"experiment": "ledger", "seed": 0, "trials": 500, "workers": 1}) == 0
