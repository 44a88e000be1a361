"""Smooth startup ramp used by the pressure-driven benchmark runs."""

__all__ = ["smooth_ramp"]


def smooth_ramp(t: float) -> float:
    """Seventh-order polynomial ramp from 0 to 1 on [0, 1].

    eta(t) = (35 + (-84 + (70 - 20 t) t) t) t^4 for t <= 1, else 1; three
    continuous derivatives vanish at both ends.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t >= 1.0:
        return 1.0
    return (35.0 + (-84.0 + (70.0 - 20.0 * t) * t) * t) * t**4
