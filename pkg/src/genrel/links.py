"""Link functions applied to genetic values before taking covariances.

Only the identity and the logit are supported.  The logit is evaluated on
probabilities clipped to ``[clip_eps, 1 - clip_eps]`` so that both the link
and its derivative stay finite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from genrel.errors import NonFiniteInput

KINDS = ("identity", "logit")


@dataclass(frozen=True)
class Link:
    kind: str = "identity"
    clip_eps: float = 1e-6

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown link {self.kind!r}; expected one of {KINDS}")
        if not 0.0 < self.clip_eps < 0.5:
            raise ValueError("clip_eps must lie in (0, 0.5)")

    @classmethod
    def parse(cls, name, clip_eps=1e-6):
        if isinstance(name, Link):
            return name
        return cls(str(name).strip().lower(), clip_eps)

    @property
    def is_identity(self):
        return self.kind == "identity"

    def clip(self, u):
        if self.kind == "logit":
            return np.clip(u, self.clip_eps, 1.0 - self.clip_eps)
        return u

    def __call__(self, u):
        return link_eval(self, u)

    def deriv(self, u):
        return link_deriv(self, u)


IDENTITY = Link("identity")
LOGIT = Link("logit")


def _check(u):
    arr = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("link input must be finite")
    return arr


def _out(arr, u):
    return float(arr) if np.ndim(u) == 0 else arr


def link_eval(link, u):
    """g(u); scalar in, scalar out."""
    arr = _check(u)
    if link.kind == "identity":
        return _out(arr, u)
    c = link.clip(arr)
    return _out(np.log(c / (1.0 - c)), u)


def link_deriv(link, u):
    """g'(u) on the clipped domain."""
    arr = _check(u)
    if link.kind == "identity":
        return _out(np.ones_like(arr), u)
    c = link.clip(arr)
    return _out(1.0 / (c * (1.0 - c)), u)
