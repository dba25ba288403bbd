import numpy as np
import pytest


@pytest.fixture
def fd6():
    """Central finite-difference estimate of a scalar field of (u, v):
    returns (val, d_u, d_v, d_uu, d_uv, d_vv), the independent oracle for
    jet results."""

    def _fd(fn, u0, v0, h=1e-4):
        f00 = fn(u0, v0)
        fu1, fu2 = fn(u0 + h, v0), fn(u0 - h, v0)
        fv1, fv2 = fn(u0, v0 + h), fn(u0, v0 - h)
        fpp, fpm = fn(u0 + h, v0 + h), fn(u0 + h, v0 - h)
        fmp, fmm = fn(u0 - h, v0 + h), fn(u0 - h, v0 - h)
        return (
            f00,
            (fu1 - fu2) / (2 * h),
            (fv1 - fv2) / (2 * h),
            (fu1 - 2 * f00 + fu2) / (h * h),
            (fpp - fpm - fmp + fmm) / (4 * h * h),
            (fv1 - 2 * f00 + fv2) / (h * h),
        )

    return _fd


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
