"""
Error types for the capture-the-flag engine.

Every error carries a machine-readable code so that the CLI and the tournament
report can surface it in the same {'error': CODE, 'message': text} shape.
"""
from typing import Any, Dict, List, Optional


class CTFError(Exception):
    """Base class for all engine, helm, learning and harness errors"""

    code = "CTF_ERROR"

    def __init__(self, message: str, code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        if code:
            self.code = code

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.code, "message": self.message}


class ActionError(CTFError):
    code = "INVALID_ACTION"


class BehaviorError(CTFError):
    code = "BEHAVIOR_TARGET_MISSING"


class HelmError(CTFError):
    code = "EMPTY_ACTIVE_SET"


class ModeTreeError(CTFError):
    code = "MODE_TREE_INVALID"


class StrategyError(CTFError):
    code = "UNKNOWN_POLICY"


class TrainingError(CTFError):
    code = "TRAINING_INVALID"


class LogCorruptedError(CTFError):
    code = "LOG_CORRUPTED"

    def __init__(self, message: str, line_number: int):
        super().__init__(message)
        self.line_number = line_number

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload["line"] = self.line_number
        return payload


class ReplayMismatchError(CTFError):
    code = "REPLAY_MISMATCH"


class ConfigValidationError(CTFError):
    """Raised with every violation found, not just the first"""

    code = "CONFIG_INVALID"

    def __init__(self, violations: List[str]):
        super().__init__(f"{len(violations)} configuration violation(s)")
        self.violations = list(violations)

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload["violations"] = self.violations
        return payload
