"""Adaptive Simpson quadrature on finite and half-infinite intervals."""

import math
from typing import Callable

from .errors import QuadratureError

ABS_TOL = 1e-10
REL_TOL = 1e-8
MAX_DEPTH = 50


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float = ABS_TOL,
    rel_tol: float = REL_TOL,
    max_depth: int = MAX_DEPTH,
) -> float:
    """Integrate ``f`` over ``[a, b]`` with adaptive Simpson refinement.

    A panel is accepted when its Richardson error estimate is below its share
    of ``max(abs_tol, rel_tol * |I|)``, where ``|I|`` is the coarse estimate of
    the whole integral.

    Raises:
        QuadratureError: if some panel still fails the test at ``max_depth``.
    """
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, abs_tol, rel_tol, max_depth)

    fa, fb = float(f(a)), float(f(b))
    m = 0.5 * (a + b)
    fm = float(f(m))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    # a first refinement guards the global scale against a lucky coarse estimate
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = float(f(lm)), float(f(rm))
    scale = abs((m - a) / 6.0 * (fa + 4.0 * flm + fm)) + abs((b - m) / 6.0 * (fm + 4.0 * frm + fb))
    tol = max(abs_tol, rel_tol * scale)

    def panel(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = float(f(lm)), float(f(rm))
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        if depth >= max_depth:
            raise QuadratureError(
                f"adaptive Simpson failed to converge on [{a!r}, {b!r}] "
                f"(tolerance {tol:.3g})"
            )
        if not math.isfinite(delta):
            raise QuadratureError(f"non-finite integrand on [{a!r}, {b!r}]")
        return panel(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) + panel(
            m, b, fm, frm, fb, right, 0.5 * tol, depth + 1
        )

    return panel(a, b, fa, fm, fb, whole, tol, 0)


def integrate_to_infinity(
    f: Callable[[float], float],
    a: float,
    abs_tol: float = ABS_TOL,
    rel_tol: float = REL_TOL,
) -> float:
    """Integrate ``f`` over ``[a, inf)``.

    Uses ``z = a + s / (1 - s)``; ``f`` must decay fast enough that the mapped
    integrand vanishes at ``s = 1``.
    """

    def mapped(s):
        if s >= 1.0:
            return 0.0
        w = 1.0 - s
        value = f(a + s / w) / (w * w)
        return value if math.isfinite(value) else 0.0

    # split at s=1/2 so both halves carry comparable mass for slow tails
    return adaptive_simpson(mapped, 0.0, 0.5, abs_tol, rel_tol) + adaptive_simpson(
        mapped, 0.5, 1.0, abs_tol, rel_tol
    )
