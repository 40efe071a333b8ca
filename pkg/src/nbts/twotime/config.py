"""Global numerical tolerance for the two-time calculus."""

DEFAULT_TOL = 1e-9
_tol = DEFAULT_TOL


def get_tolerance() -> float:
    return _tol


def set_tolerance(tol: float) -> None:
    global _tol
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    _tol = float(tol)


def resolve(tol: float | None) -> float:
    return _tol if tol is None else float(tol)
