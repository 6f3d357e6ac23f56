import json
import sys
from typing import Dict, List, Optional

EXIT_OK = 0
EXIT_USER_ERROR = 1
EXIT_INTERNAL_ERROR = 2


def success_response(message: str, data: Optional[dict] = None) -> int:
    """
    Print a standardized JSON summary for a successful command.

    Args:
        message (str): Human-readable description of the result.
        data (Optional[dict]): Optional payload data. Defaults to an empty dict.

    Returns:
        int: the process exit code (always 0)
    """
    payload = {"status": "SUCCESS", "message": message, "data": data or {}}
    print(json.dumps(payload, indent=2, default=str))
    return EXIT_OK


def error_response(
    exit_code: int,
    message: str,
    error: str,
    errors: Optional[Dict[str, List[str]]] = None,
) -> int:
    """
    Print a standardized JSON error to stderr.

    Args:
        exit_code (int): 1 for user errors, 2 for internal errors.
        message (str): Human-readable description of the failure.
        error (str): Machine-readable error tag (e.g. "INVALID_CONFIG").
        errors (Optional[dict]): Optional per-field messages.

    Returns:
        int: the exit code passed in
    """
    payload = {
        "status": "FAILURE",
        "exit_code": exit_code,
        "message": message,
        "error": error,
        "errors": errors or {},
    }
    print(json.dumps(payload, indent=2, default=str), file=sys.stderr)
    return exit_code
