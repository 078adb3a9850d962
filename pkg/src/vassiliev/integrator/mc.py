"""Seeded, chunked Monte Carlo with thread-count independent results.

Every chunk draws from its own generator seeded by (seed, stream, chunk
index), and chunk sums are reduced in chunk order with ``math.fsum``, so the
estimate is bit-identical for any number of worker threads.
"""

from __future__ import annotations

import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..diagrams import NumberedDiagram
from ..curves.geometry import ParamLink
from .forms import CONVENTIONS, DiagramPlan
from .sampling import cauchy_density, cyclic_density, sample_cauchy, sample_cyclic_legs

__all__ = ["MCEstimate", "run_chunks", "mc_integrate", "stream_id", "DEFAULT_CHUNK"]

DEFAULT_CHUNK = 1 << 14

SampleFn = Callable[[np.random.Generator, int], tuple[np.ndarray, int]]


@dataclass
class MCEstimate:
    value: float
    stderr: float
    samples: int
    seed: int
    key: str = ""
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))
    rejected: int = 0

    def as_dict(self) -> dict:
        return {
            "key": self.key,
            "value": self.value,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
            "rejected": self.rejected,
        }


def stream_id(text: str | bytes) -> int:
    if isinstance(text, str):
        text = text.encode()
    return zlib.crc32(text)


def run_chunks(
    fn: SampleFn, N: int, seed: int, stream: int = 0, chunk: int = DEFAULT_CHUNK, threads: int = 1
) -> tuple[float, float, int]:
    """Mean, standard error and rejection count of fn over N samples."""
    if N < 2:
        raise ValueError("need at least two samples")
    sizes = [chunk] * (N // chunk)
    if N % chunk:
        sizes.append(N % chunk)

    def work(i: int) -> tuple[float, float, int]:
        rng = np.random.default_rng([seed, stream, i])
        vals, rej = fn(rng, sizes[i])
        vals = np.asarray(vals, dtype=float)
        return math.fsum(vals), math.fsum(vals * vals), rej

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, range(len(sizes))))
    else:
        parts = [work(i) for i in range(len(sizes))]
    s = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    rej = sum(p[2] for p in parts)
    mean = s / N
    var = max(s2 - s * mean, 0.0) / (N - 1)
    return mean, math.sqrt(var / N), rej


def _generic_sampler(g: NumberedDiagram, link: ParamLink) -> SampleFn:
    plan = DiagramPlan(g, len(link))
    centre, R = link.bounding_radius()
    leg_weight = 1.0
    for seq in plan.legs_by_comp:
        leg_weight /= cyclic_density(len(seq))

    def fn(rng: np.random.Generator, size: int):
        legs: dict[int, np.ndarray] = {}
        for seq in plan.legs_by_comp:
            legs.update(sample_cyclic_legs(rng, seq, size))
        w = np.full(size, leg_weight)
        pts = np.zeros((size, plan.n_tri, 3))
        for v in range(plan.n_tri):
            x = sample_cauchy(rng, size, centre, R)
            pts[:, v] = x
            w = w / cauchy_density(x, centre, R)
        val, rej = plan.evaluate(link, legs, pts)
        return val * w, int(rej.sum())

    return fn


def mc_integrate(
    g: NumberedDiagram,
    link: ParamLink,
    N: int,
    seed: int,
    threads: int = 1,
    *,
    chunk: int = DEFAULT_CHUNK,
    stream: int | None = None,
) -> MCEstimate:
    """Estimate the configuration integral of g over the link.

    Legs are drawn uniformly on the region of the prescribed cyclic orders;
    trivalent points are drawn from a heavy-tailed density centred on the
    link.  Coincident points have measure zero and are dropped with weight 0.
    """
    key = g.base.to_text()
    if stream is None:
        stream = stream_id(key + repr((g.first, g.numbering)))
    mean, se, rej = run_chunks(_generic_sampler(g, link), N, seed, stream, chunk, threads)
    return MCEstimate(mean, se, N, seed, key, rejected=rej)
