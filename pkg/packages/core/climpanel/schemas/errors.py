"""Error response schema."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel

from climpanel.errors import AppError, StageError


class ErrorResponse(BaseModel):
    """JSON body printed by ``--json`` commands that fail.

    ``stage`` is set when a pipeline stage failed; ``exit_code`` is the
    process exit status the CLI uses.
    """

    error: str
    message: str
    details: dict[str, Any] = {}
    suggestion: str | None = None
    stage: str | None = None
    exit_code: int = 1

    @classmethod
    def from_error(cls, error: AppError) -> ErrorResponse:
        return cls(
            error=error.code,
            message=error.message,
            details=error.details,
            suggestion=error.suggestion,
            stage=error.stage if isinstance(error, StageError) else None,
            exit_code=error.exit_code,
        )
