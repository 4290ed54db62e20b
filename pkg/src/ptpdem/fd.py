"""Finite-difference helpers shared by the ladder, susy, states and lattice modules.

All stencils are central with zero padding outside the domain, which is the
sampled form of a Dirichlet boundary: values beyond +-L are treated as 0.
Interior rows are exact to the stated order; the outermost rows are only
meaningful under the Dirichlet assumption, so residual checks exclude a
boundary layer.
"""

import numpy as np

__all__ = ["fd1", "fd2"]


def _padded(y, layers):
    out = np.zeros(len(y) + 2 * layers, dtype=y.dtype)
    out[layers:-layers] = y
    return out


def fd1(y, h, order=4):
    """First derivative of samples y with spacing h (zero-padded central stencil)."""
    y = np.asarray(y)
    if order == 2:
        p = _padded(y, 1)
        return (p[2:] - p[:-2]) / (2.0 * h)
    if order == 4:
        p = _padded(y, 2)
        return (p[:-4] - 8.0 * p[1:-3] + 8.0 * p[3:-1] - p[4:]) / (12.0 * h)
    raise ValueError("order must be 2 or 4")


def fd2(y, h, order=4):
    """Second derivative of samples y with spacing h (zero-padded central stencil)."""
    y = np.asarray(y)
    if order == 2:
        p = _padded(y, 1)
        return (p[2:] - 2.0 * p[1:-1] + p[:-2]) / (h * h)
    if order == 4:
        p = _padded(y, 2)
        return (-p[:-4] + 16.0 * p[1:-3] - 30.0 * p[2:-2] + 16.0 * p[3:-1] - p[4:]) / (
            12.0 * h * h
        )
    raise ValueError("order must be 2 or 4")
