import math
import os
from pathlib import Path

import pytest

import unipred

CONFIGS = Path(os.environ.get("UNIPRED_CONFIGS", Path(__file__).resolve().parents[2] / "configs"))


def running_example():
    return unipred.ModelClass.uniform(
        [unipred.DeterministicPeriodic(2, [1]), unipred.IidCategorical([0.5, 0.5])]
    )


def test_mixture_running_example():
    state = running_example().init()
    assert state.xi_conditionals()[1] == pytest.approx(0.75, abs=1e-15)
    state.observe(1)
    assert state.xi_conditionals()[1] == pytest.approx(5 / 6, abs=1e-15)
    assert state.posterior_weights()[0] == pytest.approx(2 / 3, abs=1e-15)


def test_relative_entropy_closed_form():
    ledger = unipred.accumulate_exact(running_example(), 0, 10)
    for n, h in enumerate(ledger.H, start=1):
        assert h == pytest.approx(math.log(2 / (1 + 2.0**-n)), abs=1e-12)
    assert all(d <= h + 1e-12 for d, h in zip(ledger.D, ledger.H))


def test_step_quantities():
    assert unipred.step_kl([1, 0], [0.75, 0.25]) == pytest.approx(math.log(4 / 3))
    assert unipred.step_sq([1, 0], [0.75, 0.25]) == 0.125
    r = unipred.check_entropy_inequality([0.9, 0.1], [0.5, 0.5])
    assert r["holds"] and r["lhs"] == pytest.approx(0.32)
    with pytest.raises(ValueError):
        unipred.step_kl([0.7, 0.7], [0.5, 0.5])


def test_errors_and_bounds():
    cls = unipred.ModelClass.uniform([unipred.IidCategorical([0.6, 0.4])])
    e = unipred.expected_errors_exact(cls, 0, unipred.Scheme.informed(), 5)
    assert e.total() == pytest.approx(2.0)
    tight, loose = unipred.theorem2_bound(1.0, math.log(2))
    assert tight <= loose
    assert unipred.predict(unipred.IidCategorical([0.5, 0.5]), []) == 0


def test_decision():
    loss = unipred.LossMatrix([[0, 0.5], [1, 0.5]], 0.0, 1.0)
    assert unipred.act([0.7, 0.3], loss) == 0
    err = unipred.LossMatrix.error_loss(2)
    assert unipred.loss_bound(1.0, 3, 0.5, err) == pytest.approx(unipred.theorem2_bound(1.0, 0.5)[0])
    cls = unipred.ModelClass.uniform(
        [unipred.IidCategorical([0.6, 0.4]), unipred.IidCategorical([0.4, 0.6])]
    )
    payout = unipred.PayoutTable([[1, -1], [-1, 1]], 1.0, 2.0)
    report = unipred.simulate_betting(cls, 0, payout, 100, 200, seed=3)
    assert report.avg_profit_mu[-1] == pytest.approx(0.2)
    assert report.crossing_n is not None


def test_run_config_and_errors():
    text = (CONFIGS / "running_example.yaml").read_text()
    csv, ok = unipred.run_config(text)
    assert ok
    assert csv.splitlines()[0] == "k,scheme,quantity,value,bound,slack,verdict"
    assert unipred.run_config(text)[0] == csv
    with pytest.raises(unipred.ConfigError):
        unipred.run_config("schema: unipred.experiment/1\nalphabet: 1\n")
    assert unipred.enumerate_config(text).startswith("k,prefix,")


def test_inequality_suite():
    r = unipred.verify_inequality_suite(1000, 5, 1)
    assert r.passed and r.violations == 0 and r.total == 4000
