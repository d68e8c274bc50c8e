# test_errors.py
import pytest

from errors import (
    InvalidWindow,
    NumericalRecoveryEngine,
    OutsideFundamentalDomain,
    ParameterOutOfRange,
    QuadratureFailure,
    SlowConvergence,
    WeylLabError,
    numerical_guard,
)


def test_exit_codes_split_validation_and_numerical():
    assert ParameterOutOfRange("x").exit_code == 2
    assert InvalidWindow("x").exit_code == 2
    assert OutsideFundamentalDomain("x").exit_code == 2
    assert QuadratureFailure("x").exit_code == 1
    assert SlowConvergence("x").exit_code == 1


def test_diagnostic_names_operation():
    err = QuadratureFailure("did not converge", operation="d_rat_pair", details={"estimate": 1.0})
    assert err.diagnostic() == "d_rat_pair: QuadratureFailure: did not converge"
    assert err.details == {"estimate": 1.0}
    with pytest.raises(WeylLabError):
        raise err


def test_recovery_engine_summary():
    engine = NumericalRecoveryEngine()
    assert engine.get_error_summary()["total_errors"] == 0

    recovered, action = engine.handle_error("loss_of_precision", {"condition": "cancellation"})
    assert recovered and action["action"] == "panel_quadrature"
    recovered, action = engine.handle_error("slow_convergence", {"min_y": 1e-9})
    assert not recovered and action["action"] == "reduce_first"
    engine.handle_error("something_else", {})

    summary = engine.get_error_summary()
    assert summary["total_errors"] == 3
    assert summary["error_types"] == {"loss_of_precision": 1, "slow_convergence": 1, "something_else": 1}
    assert summary["recovery_rate"] == pytest.approx(1 / 3)

    engine.reset()
    assert engine.get_error_summary()["total_errors"] == 0


def test_recovery_history_is_capped_but_counts_are_not():
    engine = NumericalRecoveryEngine(history_limit=3)
    for i in range(10):
        engine.handle_error("loss_of_precision" if i % 2 else "quadrature_failure", {"i": i})
    assert len(engine.error_history) == 3
    assert engine.error_history[-1]["details"] == {"i": 9}

    summary = engine.get_error_summary()
    assert summary["total_errors"] == 10
    assert summary["error_types"] == {"quadrature_failure": 5, "loss_of_precision": 5}
    assert summary["recovery_rate"] == pytest.approx(0.5)

    engine.reset()
    assert len(engine.error_history) == 0
    assert engine.get_error_summary()["total_errors"] == 0


def test_numerical_guard_wraps_raw_failures():
    with pytest.raises(QuadratureFailure) as info:
        with numerical_guard("d_irr_pair"):
            raise ValueError("invalid limits")
    assert info.value.exit_code == 1
    assert info.value.diagnostic() == "d_irr_pair: QuadratureFailure: ValueError: invalid limits"
    assert isinstance(info.value.__cause__, ValueError)

    with pytest.raises(ParameterOutOfRange):
        with numerical_guard("d_irr_pair"):
            raise ParameterOutOfRange("b must be >= 1")
