# errors.py
"""
Error types and numerical incident recovery for the Weyl Tail Lab
"""

import logging
from collections import Counter, deque
from contextlib import contextmanager
from datetime import datetime
from typing import Dict, Any, Deque, Iterator, Tuple, Optional

logger = logging.getLogger(__name__)


class WeylLabError(Exception):
    """Base error; exit_code 2 marks validation problems, 1 numerical failures"""

    exit_code = 1

    def __init__(self, message: str, operation: str = "", details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.operation = operation
        self.details = details or {}

    def diagnostic(self) -> str:
        prefix = f"{self.operation}: " if self.operation else ""
        return f"{prefix}{self.__class__.__name__}: {self}"


class ValidationError(WeylLabError):
    exit_code = 2


class NumericalError(WeylLabError):
    exit_code = 1


# Precondition failures
class DegenerateMatrix(ValidationError):
    pass


class InvalidInterval(ValidationError):
    pass


class InvalidWindow(ValidationError):
    pass


class UnboundedSupport(ValidationError):
    pass


class ParameterOutOfRange(ValidationError):
    pass


class OutsideFundamentalDomain(ValidationError):
    pass


# Numerical failures
class NonConvergence(NumericalError):
    pass


class LossOfPrecision(NumericalError):
    pass


class SlowConvergence(NumericalError):
    pass


class QuadratureFailure(NumericalError):
    pass


class NearSingularPhase(UserWarning):
    """Warning category for phases within 1e-8 of a multiple of pi"""


# incidents kept in full; older ones survive only in the per-type counts
HISTORY_LIMIT = 256


class NumericalRecoveryEngine:
    """Records numerical incidents and the fallback taken for each"""

    def __init__(self, history_limit: int = HISTORY_LIMIT):
        self.error_history: Deque[Dict[str, Any]] = deque(maxlen=history_limit)
        self.error_counts: Counter = Counter()
        self.recovered_count = 0
        self.recovery_strategies = {
            "loss_of_precision": self._recover_from_loss_of_precision,
            "near_singular_phase": self._recover_from_near_singular_phase,
            "slow_convergence": self._recover_from_slow_convergence,
            "non_convergence": self._recover_from_non_convergence,
            "quadrature_failure": self._recover_from_quadrature_failure
        }

    def handle_error(self, error_type: str, error_details: Dict[str, Any]) -> Tuple[bool, Dict[str, Any]]:
        """Record an incident and return (recovered, action)"""
        if error_type in self.recovery_strategies:
            recovered, action = self.recovery_strategies[error_type](error_details)
        else:
            recovered, action = self._generic_recovery(error_details)

        self.error_history.append({
            "type": error_type,
            "details": error_details,
            "timestamp": datetime.now().isoformat(),
            "recovered": recovered,
            "action": action["action"]
        })
        self.error_counts[error_type] += 1
        self.recovered_count += int(recovered)
        if recovered:
            logger.warning(f"Numerical incident: {error_type} - {error_details} -> {action['action']}")
        else:
            logger.error(f"Error occurred: {error_type} - {error_details}")
        return recovered, action

    def _recover_from_loss_of_precision(self, error_details: Dict[str, Any]) -> Tuple[bool, Dict[str, Any]]:
        return True, {"action": "panel_quadrature", "condition": error_details.get("condition")}

    def _recover_from_near_singular_phase(self, error_details: Dict[str, Any]) -> Tuple[bool, Dict[str, Any]]:
        return True, {"action": "limit_branch", "distance": error_details.get("distance")}

    def _recover_from_slow_convergence(self, error_details: Dict[str, Any]) -> Tuple[bool, Dict[str, Any]]:
        return False, {
            "action": "reduce_first",
            "suggestion": "Reduce the point to the fundamental domain before evaluating"
        }

    def _recover_from_non_convergence(self, error_details: Dict[str, Any]) -> Tuple[bool, Dict[str, Any]]:
        return False, {"action": "manual_intervention", "steps": error_details.get("steps")}

    def _recover_from_quadrature_failure(self, error_details: Dict[str, Any]) -> Tuple[bool, Dict[str, Any]]:
        return False, {"action": "report", "estimate": error_details.get("estimate")}

    def _generic_recovery(self, error_details: Dict[str, Any]) -> Tuple[bool, Dict[str, Any]]:
        return False, {"action": "manual_intervention", "details": str(error_details)}

    def get_error_summary(self) -> Dict[str, Any]:
        """Get summary of incidents encountered"""
        total = sum(self.error_counts.values())
        if not total:
            return {"total_errors": 0, "error_types": {}, "last_error": None, "recovery_rate": 1.0}

        return {
            "total_errors": total,
            "error_types": dict(self.error_counts),
            "last_error": {k: str(v) for k, v in self.error_history[-1].items()},
            "recovery_rate": self.recovered_count / total
        }

    def reset(self):
        self.error_history.clear()
        self.error_counts.clear()
        self.recovered_count = 0


# Shared by the numerical modules; the CLI copies its summary into the manifest
recovery_engine = NumericalRecoveryEngine()


@contextmanager
def numerical_guard(operation: str) -> Iterator[None]:
    """Re-raise raw scipy/numpy failures inside the block as QuadratureFailure for `operation`"""
    try:
        yield
    except WeylLabError:
        raise
    except (ValueError, ArithmeticError) as e:
        recovery_engine.handle_error("quadrature_failure", {"operation": operation, "cause": repr(e)})
        raise QuadratureFailure(f"{type(e).__name__}: {e}", operation=operation, details={"cause": repr(e)}) from e
