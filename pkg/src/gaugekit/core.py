"""Shared numeric substrate: tolerances, seeded sampling, verdicts, extended reals.

Extended-real conventions used throughout (they keep gauge values total):
``lam * inf = inf`` for ``lam > 0``, ``1/0 = inf`` and ``1/inf = 0``.
Python floats already obey the first rule; :func:`extended_reciprocal`
supplies the other two.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

INF = float("inf")


class InputError(ValueError):
    """Bad argument to a toolkit operation (dimension mismatch, empty input, ...)."""


class ContractError(RuntimeError):
    """A declared oracle/spec contract was violated (e.g. missing star_shaped flag)."""


def extended_reciprocal(t: float) -> float:
    """1/t with the conventions 1/0 = +inf and 1/inf = 0."""
    if t == 0.0:
        return INF
    if math.isinf(t):
        return 0.0
    return 1.0 / t


def as_vector(x, dim: Optional[int] = None) -> np.ndarray:
    """Coerce to a finite 1-D float64 vector, optionally checking its dimension."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise InputError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InputError("vector has non-finite coordinates")
    if dim is not None and v.size != dim:
        raise InputError(f"dimension mismatch: expected {dim}, got {v.size}")
    return v


def as_points(x, dim: Optional[int] = None) -> np.ndarray:
    """Coerce to an (n, dim) float64 array of points; a single vector becomes (1, dim)."""
    p = np.asarray(x, dtype=np.float64)
    if p.ndim == 1:
        p = p[None, :]
    if p.ndim != 2 or p.shape[1] < 1:
        raise InputError(f"expected an (n, d) point array, got shape {p.shape}")
    if dim is not None and p.shape[1] != dim:
        raise InputError(f"dimension mismatch: expected {dim}, got {p.shape[1]}")
    return p


@dataclass(frozen=True)
class ToleranceProfile:
    """Numeric tolerances shared by every certifier.

    eps_eq is the basic equality slack, eps_strict the minimum margin for an
    inequality to count as strict, eps_bisect the radial bisection width,
    max_bracket the largest radial multiplier ever probed.
    """

    eps_eq: float = 1e-9
    eps_strict: float = 1e-7
    eps_bisect: float = 1e-12
    max_bracket: float = 1e12
    max_iter: int = 200

    def __post_init__(self):
        if not (0.0 < self.eps_bisect < self.eps_strict <= self.eps_eq * 100.0):
            raise InputError(
                "tolerances must satisfy 0 < eps_bisect < eps_strict <= 100*eps_eq"
            )
        if not self.max_bracket > 1.0:
            raise InputError("max_bracket must exceed 1")
        if self.max_iter < 1:
            raise InputError("max_iter must be positive")


DEFAULT_TOL = ToleranceProfile()


def _mix_label(seed: int, label: str) -> int:
    """Stable 64-bit mix of a seed and a substream label (not Python's hash)."""
    h = hashlib.blake2b(label.encode("utf-8"), digest_size=8, key=b"gaugekit")
    return (seed ^ int.from_bytes(h.digest(), "little")) & 0xFFFFFFFFFFFFFFFF


class SampleStream:
    """Deterministic counter-based sample source.

    The k-th sampling operation is a pure function of ``(seed, k)``: each
    operation opens a fresh Philox generator keyed by the seed with the
    operation index placed in a dedicated counter word, so operations never
    overlap regardless of how much randomness each consumes.  Substreams
    derived from labels are statistically disjoint from the parent.
    """

    def __init__(self, seed: int, counter: int = 0):
        if seed < 0:
            raise InputError("seed must be a non-negative 64-bit integer")
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.counter = int(counter)

    def substream(self, label: str) -> "SampleStream":
        return SampleStream(_mix_label(self.seed, label), 0)

    def clone(self) -> "SampleStream":
        return SampleStream(self.seed, self.counter)

    def _next_generator(self) -> np.random.Generator:
        bitgen = np.random.Philox(
            key=np.array([self.seed, 0x9E3779B97F4A7C15], dtype=np.uint64),
            counter=np.array([0, self.counter, 0, 0], dtype=np.uint64),
        )
        self.counter += 1
        return np.random.Generator(bitgen)

    # Sampling primitives.  Each call is one counted operation.

    def normals(self, shape) -> np.ndarray:
        return self._next_generator().standard_normal(shape)

    def uniform(self, low: float, high: float, size=None) -> np.ndarray:
        return self._next_generator().uniform(low, high, size)

    def log_uniform(self, low: float, high: float, size=None) -> np.ndarray:
        if not (0.0 < low < high):
            raise InputError("log_uniform needs 0 < low < high")
        u = self._next_generator().uniform(math.log(low), math.log(high), size)
        return np.exp(u)

    def integers(self, low: int, high: int, size=None) -> np.ndarray:
        return self._next_generator().integers(low, high, size=size)

    def directions(self, n: int, dim: int) -> np.ndarray:
        """n unit vectors from the rotation-invariant distribution on S^(dim-1)."""
        if dim < 1:
            raise InputError("dim must be >= 1")
        g = self._next_generator()
        z = g.standard_normal((n, dim))
        norms = np.linalg.norm(z, axis=1)
        # a standard normal is never exactly 0 in float64, but guard anyway
        bad = norms < 1e-300
        if np.any(bad):
            z[bad] = 1.0
            norms[bad] = np.linalg.norm(z[bad], axis=1)
        return z / norms[:, None]


def sample_direction(stream: SampleStream, dim: int) -> np.ndarray:
    """One unit vector, deterministic given the stream state."""
    if dim < 1:
        raise InputError("dim must be >= 1")
    return stream.directions(1, dim)[0]


# Verdict lattice -----------------------------------------------------------

PROVEN = "Proven"
SUPPORTED = "Supported"
FALSIFIED = "Falsified"
INCONCLUSIVE = "Inconclusive"

_STATUS_ORDER = {PROVEN: 0, SUPPORTED: 1, INCONCLUSIVE: 2, FALSIFIED: 3}


@dataclass
class Verdict:
    """Four-valued certification result.

    Falsified carries a replayable witness; Supported records sampling effort
    without claiming proof; Proven is reserved for analytic classifications
    of built-in families and for exact membership hits (where the witness is
    the located scalar).
    """

    status: str
    witness: Any = None
    margin: Optional[float] = None
    effort: int = 0
    note: str = ""

    def __post_init__(self):
        if self.status not in _STATUS_ORDER:
            raise InputError(f"unknown verdict status {self.status!r}")

    @property
    def ok(self) -> bool:
        """True for Proven/Supported, False for Falsified/Inconclusive."""
        return self.status in (PROVEN, SUPPORTED)

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, np.ndarray):
            w = w.tolist()
        elif isinstance(w, dict):
            w = {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in w.items()}
        return {
            "status": self.status,
            "witness": w,
            "margin": None if self.margin is None else float(self.margin),
            "effort": int(self.effort),
            "note": self.note,
        }


def proven(margin=None, effort=0, note="", witness=None) -> Verdict:
    return Verdict(PROVEN, witness=witness, margin=margin, effort=effort, note=note)


def supported(margin=None, effort=0, note="", witness=None) -> Verdict:
    return Verdict(SUPPORTED, witness=witness, margin=margin, effort=effort, note=note)


def falsified(witness, margin=None, effort=0, note="") -> Verdict:
    return Verdict(FALSIFIED, witness=witness, margin=margin, effort=effort, note=note)


def inconclusive(note="", effort=0) -> Verdict:
    return Verdict(INCONCLUSIVE, effort=effort, note=note)


def combine_verdicts(verdicts: Sequence[Verdict]) -> Verdict:
    """Weakest-link combination: Falsified > Inconclusive > Supported > Proven.

    The margin of the combination is the minimum member margin and effort the
    sum; the first dominating member supplies witness and note.
    """
    verdicts = list(verdicts)
    if not verdicts:
        raise InputError("combine_verdicts needs a non-empty sequence")
    worst = max(verdicts, key=lambda v: _STATUS_ORDER[v.status])
    margins = [v.margin for v in verdicts if v.margin is not None]
    return Verdict(
        worst.status,
        witness=worst.witness,
        margin=min(margins) if margins else None,
        effort=sum(v.effort for v in verdicts),
        note=worst.note,
    )
