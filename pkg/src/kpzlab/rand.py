"""Reproducible random streams.

Every Monte Carlo routine in the package takes a ``numpy.random.Generator``.
Generators are built from a :class:`SeedSpec`, i.e. a ``(master_seed,
stream_id)`` pair used directly as the 128-bit key of a Philox counter-based
bit generator.  Replica ``i`` of an experiment uses ``SeedSpec(seed, i)``, so
results do not depend on the order in which replicas are scheduled.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

import numpy as np

_U64 = (1 << 64) - 1

T = TypeVar("T")


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_id"):
            value = getattr(self, name)
            if not 0 <= int(value) <= _U64:
                raise ValueError(f"{name} must fit in an unsigned 64-bit integer, got {value}")

    def generator(self) -> np.random.Generator:
        key = np.array([self.master_seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, *labels: int) -> "SeedSpec":
        """Independent sub-stream, keyed by hashing this spec with ``labels``."""
        ss = np.random.SeedSequence([self.master_seed, self.stream_id, *map(int, labels)])
        return SeedSpec(self.master_seed, int(ss.generate_state(1, np.uint64)[0]))


def make_stream(master_seed: int, stream_id: int = 0) -> np.random.Generator:
    return SeedSpec(master_seed, stream_id).generator()


def as_stream(stream) -> np.random.Generator:
    """Accept a Generator, a SeedSpec or a bare integer seed."""
    if isinstance(stream, np.random.Generator):
        return stream
    if isinstance(stream, SeedSpec):
        return stream.generator()
    if isinstance(stream, (int, np.integer)):
        return make_stream(int(stream))
    raise TypeError(f"cannot build a random stream from {type(stream).__name__}")


def gaussian(stream: np.random.Generator, size=None):
    return stream.standard_normal(size)


def chi(stream: np.random.Generator, a, size=None):
    """Chi variate with ``a`` degrees of freedom (``a`` may be an array)."""
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0) or not np.all(np.isfinite(a)):
        raise ValueError("chi parameter must be positive and finite")
    # chi^2_a = Gamma(a/2, scale 2); numpy's gamma is Marsaglia-Tsang with boosting below 1
    out = np.sqrt(2.0 * stream.standard_gamma(a / 2.0, size=size))
    return out if out.ndim else float(out)


_SQRT3 = np.sqrt(3.0)


def _matched_raw(stream, size):
    u = stream.random(size)
    return _SQRT3 * ((u < 1.0 / 6.0).astype(float) - (u >= 5.0 / 6.0))


def four_moment_matched(stream: np.random.Generator, beta: int, position: str, size=None):
    """Bounded entries whose first four moments agree with GOE/GUE entries.

    The raw law puts mass 1/6 on each of +-sqrt(3) and 2/3 on 0 (moments
    0, 1, 0, 3).  It is scaled to the entry variance of the requested
    position: GOE diagonal 2, off-diagonal 1; GUE diagonal 1, off-diagonal
    complex with E|z|^2 = 1.
    """
    if beta not in (1, 2):
        raise ValueError("beta must be 1 or 2")
    if position not in ("diagonal", "offdiagonal"):
        raise ValueError("position must be 'diagonal' or 'offdiagonal'")
    if beta == 1:
        scale = np.sqrt(2.0) if position == "diagonal" else 1.0
        return scale * _matched_raw(stream, size)
    if position == "diagonal":
        return _matched_raw(stream, size)
    re = _matched_raw(stream, size)
    im = _matched_raw(stream, size)
    return (re + 1j * im) / np.sqrt(2.0)


def _call(args):
    fn, spec = args
    return fn(spec)


def replica_map(
    fn: Callable[[SeedSpec], T],
    reps: int,
    master_seed: int,
    workers: int = 1,
    first_replica: int = 0,
) -> list[T]:
    """Evaluate ``fn(SeedSpec(master_seed, i))`` for each replica, in replica order.

    Output is independent of ``workers``; ``fn`` must be picklable when
    ``workers > 1``.
    """
    specs: Sequence[SeedSpec] = [SeedSpec(master_seed, first_replica + i) for i in range(reps)]
    if workers <= 1 or reps <= 1:
        return [fn(s) for s in specs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_call, [(fn, s) for s in specs], chunksize=max(1, reps // (4 * workers))))
