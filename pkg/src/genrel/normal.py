"""Upper-tail standard normal quantile."""

import math

from genrel.errors import OutOfRange

# Acklam's rational approximation to the normal quantile (relative error ~1e-9)
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def _acklam(p):
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    if p > 1.0 - _P_LOW:
        return -_acklam(1.0 - p)
    q = p - 0.5
    r = q * q
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
        (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)


def upper_tail(z):
    """P(N(0,1) > z)."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def normal_quantile(alpha_half):
    """Return z with P(N(0,1) > z) = alpha_half, e.g. 1.959964 for 0.025.

    Rational starting value followed by Halley steps on the upper-tail
    probability, which keeps full relative accuracy deep in either tail.
    """
    a = float(alpha_half)
    if not 0.0 < a < 1.0:
        raise OutOfRange(f"alpha_half must lie in (0, 1), got {alpha_half!r}")
    if a == 0.5:
        return 0.0
    if a > 0.5:
        return -normal_quantile(1.0 - a)  # 1 - a is exact here
    z = -_acklam(a)
    for _ in range(2):
        e = upper_tail(z) - a
        u = -e * math.sqrt(2.0 * math.pi) * math.exp(0.5 * z * z)
        z = z - u / (1.0 + 0.5 * z * u)
    return z
