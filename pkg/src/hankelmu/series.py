"""Truncated Taylor series and the test-function families used to probe H_mu.

A :class:`TaylorPoly` is just a coefficient vector; the family generators
return exact coefficients of

* ``fb1``  -- ``(1-b^2)/(1-bz)^2`` (unit H^1 norm),
* ``fbp``  -- ``((1-b^2)/(1-bz)^2)^(1/p)`` (unit H^p norm),
* ``gb``   -- ``log(1/(1-b^2))^(-1/p) log(1/(1-bz))`` (Besov norm ~ 1),
* ``Flog`` -- ``log(1/(1-z))``,
* ``one``  -- the constant 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SpecError


@dataclass(frozen=True)
class FamilyTag:
    name: str
    params: dict = field(default_factory=dict)
    nominal_norm: float = 1.0


@dataclass(eq=False)
class TaylorPoly:
    """Coefficients ``(a_0, ..., a_N)`` of a polynomial on the disc."""

    coeffs: np.ndarray
    tag: FamilyTag | None = None

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.ndim != 1:
            raise ValueError("coefficients must be a 1-D vector")
        if not np.iscomplexobj(c):
            c = c.astype(float)
        self.coeffs = c

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, z):
        return eval_poly(self, z)

    def padded(self, n):
        """Copy with zero coefficients appended up to length ``n``."""
        if n < len(self.coeffs):
            raise ValueError("cannot pad to a shorter length")
        out = np.zeros(n, dtype=self.coeffs.dtype)
        out[: len(self.coeffs)] = self.coeffs
        return TaylorPoly(out, self.tag)


def eval_poly(f: TaylorPoly, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    z = np.asarray(z)
    acc = np.zeros(z.shape, dtype=np.result_type(f.coeffs.dtype, z.dtype, float))
    for a in f.coeffs[::-1]:
        acc = acc * z + a
    return acc if acc.ndim else acc[()]


def derivative(f: TaylorPoly) -> TaylorPoly:
    """``(a_1, 2 a_2, ..., N a_N)``; the derivative of a constant is empty."""
    c = f.coeffs
    return TaylorPoly(c[1:] * np.arange(1, len(c)))


def family_fb_h1(b, N) -> TaylorPoly:
    """``a_k = (1-b^2)(k+1) b^k`` for ``k <= N``."""
    if not 0 <= b < 1:
        raise ValueError(f"fb_h1 needs 0 <= b < 1, got {b}")
    k = np.arange(N + 1, dtype=float)
    with np.errstate(under="ignore"):
        a = (1 - b * b) * (k + 1) * np.power(b, k)
    return TaylorPoly(a, FamilyTag("fb_h1", {"b": b}, 1.0))


def family_fb_hp(b, p, N) -> TaylorPoly:
    """Coefficients of ``((1-b^2)/(1-bz)^2)^(1/p)`` by the binomial recurrence
    ``a_k = a_{k-1} b (k-1+2/p) / k``.

    ``p = 1`` is accepted and reproduces :func:`family_fb_h1`.
    """
    if not 0 <= b < 1:
        raise ValueError(f"fb_hp needs 0 <= b < 1, got {b}")
    if not 1 <= p < math.inf:
        raise ValueError(f"fb_hp needs 1 <= p < inf, got {p}")
    k = np.arange(1, N + 1, dtype=float)
    ratios = b * (k - 1 + 2.0 / p) / k
    a = np.empty(N + 1)
    a[0] = (1 - b * b) ** (1.0 / p)
    with np.errstate(under="ignore"):
        a[1:] = a[0] * np.cumprod(ratios)
    return TaylorPoly(a, FamilyTag("fb_hp", {"b": b, "p": p}, 1.0))


def family_gb_besov(b, p, N) -> TaylorPoly:
    """``a_0 = 0``, ``a_k = log(1/(1-b^2))^(-1/p) b^k / k``; needs ``1/2 < b < 1``."""
    if not 0.5 < b < 1:
        raise ValueError(f"gb_besov needs 1/2 < b < 1, got {b}")
    if not 1 < p < math.inf:
        raise ValueError(f"gb_besov needs 1 < p < inf, got {p}")
    k = np.arange(1, N + 1, dtype=float)
    scale = (-math.log1p(-b * b)) ** (-1.0 / p)
    a = np.zeros(N + 1)
    with np.errstate(under="ignore"):
        a[1:] = scale * np.power(b, k) / k
    return TaylorPoly(a, FamilyTag("gb_besov", {"b": b, "p": p}, 1.0))


def family_F_log(N) -> TaylorPoly:
    """``a_0 = 0``, ``a_n = 1/n``."""
    a = np.zeros(N + 1)
    a[1:] = 1.0 / np.arange(1, N + 1)
    return TaylorPoly(a, FamilyTag("F_log"))


def family_one(N=0) -> TaylorPoly:
    a = np.zeros(N + 1)
    a[0] = 1.0
    return TaylorPoly(a, FamilyTag("constant_one"))


def is_nonneg_decreasing(f, from_index=0) -> bool:
    c = np.asarray(f.coeffs if isinstance(f, TaylorPoly) else f)[from_index:]
    if np.iscomplexobj(c):
        if np.any(c.imag != 0):
            return False
        c = c.real
    return bool(np.all(c >= 0) and np.all(np.diff(c) <= 0))


def auto_degree(b, cap=2**17):
    """``ceil(12/(1-b))`` so that ``b^N < e^-12``, capped."""
    return min(int(math.ceil(12.0 / (1.0 - b))), cap)


# ---------------------------------------------------------------------------
# spec grammar and CSV


@dataclass(frozen=True)
class FamilySpec:
    """Parsed family spec; call with ``(N)`` or ``(N, b=...)`` to generate."""

    name: str
    b: float | None = None
    p: float | None = None

    def __call__(self, N, b=None, p=None):
        b = self.b if b is None else b
        p = self.p if p is None else p
        if self.name == "fb1":
            return family_fb_h1(b, N)
        if self.name == "fbp":
            return family_fb_hp(b, p, N)
        if self.name == "gb":
            return family_gb_besov(b, p, N)
        if self.name == "Flog":
            return family_F_log(N)
        return family_one(N)


_FAMILY_KEYS = {"fb1": ("b",), "fbp": ("b", "p"), "gb": ("b", "p"), "Flog": (), "one": ()}


def parse_family(spec: str) -> FamilySpec:
    """Parse ``fb1:b=<f>``, ``fbp:b=<f>,p=<f>``, ``gb:b=<f>,p=<f>``, ``Flog``
    or ``one``. Parameters may be omitted when a sweep supplies them."""
    spec = spec.strip()
    name, _, rest = spec.partition(":")
    name = name.strip()
    if name not in _FAMILY_KEYS:
        raise SpecError(f"unknown family {name!r} in {spec!r}", token=name)
    vals = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        key = key.strip()
        if not eq or key not in _FAMILY_KEYS[name]:
            raise SpecError(f"unexpected parameter {item!r} for family {name!r}", token=item)
        try:
            vals[key] = float(val)
        except ValueError:
            raise SpecError(f"bad number {val!r} in family spec {spec!r}", token=val) from None
    return FamilySpec(name, vals.get("b"), vals.get("p"))


def write_series_csv(f: TaylorPoly, path):
    """One coefficient per line in index order, no header. Complex values are
    written in Python's ``complex`` notation."""
    with open(path, "w", newline="\n") as fh:
        cplx = np.iscomplexobj(f.coeffs)
        for a in f.coeffs:
            fh.write(f"{complex(a)!r}\n" if cplx else f"{float(a)!r}\n")


def read_series_csv(path) -> TaylorPoly:
    vals = []
    with open(path) as fh:
        for i, line in enumerate(fh):
            tok = line.strip()
            if not tok:
                continue
            try:
                vals.append(float(tok))
            except ValueError:
                try:
                    vals.append(complex(tok.strip("()").replace(" ", "")))
                except ValueError:
                    raise SpecError(f"{path}:{i + 1}: bad coefficient {tok!r}", token=tok) from None
    return TaylorPoly(np.array(vals))
