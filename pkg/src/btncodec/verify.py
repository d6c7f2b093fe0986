"""Instance generation and exhaustive verification of compiled codecs."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .approx import build_approx_decoder, count_patterns, predict_all
from .bounds import approx_error_bound
from .codes import CodecBundle, VectorSet, code_matrix
from .core import LayeredNet, eval_batch

MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea, Flood 2014). Pinned so instances are portable."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def bits(self, width: int) -> int:
        """The top ``width`` bits of ceil(width/64) consecutive outputs, first output most significant."""
        words = -(-width // 64)
        value = 0
        for _ in range(words):
            value = (value << 64) | self.next()
        return value >> (64 * words - width)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection on the smallest covering bit width."""
        if bound < 1:
            raise ValueError("bound must be positive")
        width = max(1, (bound - 1).bit_length())
        while True:
            v = self.bits(width)
            if v < bound:
                return v


@dataclass(frozen=True)
class InstanceSpec:
    """Recipe for a vector set.

    ``distribution`` is ``"uniform"`` (distinct vectors drawn uniformly) or
    ``"adversarial"``, where vector k equals ``pattern[k mod B]`` in every bit
    so that every (bit, block) pattern is ``pattern``. Adversarial lists
    repeat vectors and are only usable with the lookup-table encoder.
    """

    n: int
    D: int
    seed: int = 0
    distribution: str = "uniform"
    pattern: str | None = None

    def __post_init__(self):
        if self.n < 1 or self.D < 1:
            raise ValueError("n and D must be positive")
        if self.distribution == "uniform":
            if self.n > 2**self.D:
                raise ValueError(f"cannot draw {self.n} distinct vectors of dimension {self.D}")
        elif self.distribution == "adversarial":
            if not self.pattern or any(ch not in "01" for ch in self.pattern):
                raise ValueError("adversarial instances need a bit-string pattern")
        else:
            raise ValueError(f"unknown distribution {self.distribution!r}")


def gen_random_set(spec: InstanceSpec) -> VectorSet:
    """Deterministic vector set for ``spec``.

    Uniform: each candidate is the top D bits of ceil(D/64) SplitMix64
    outputs seeded with ``spec.seed``; candidates already drawn are rejected.
    """
    if spec.distribution == "adversarial":
        p = np.array([int(ch) for ch in spec.pattern], dtype=np.uint8)
        col = p[np.arange(spec.n) % len(p)]
        return VectorSet(np.repeat(col[:, None], spec.D, axis=1), distinct=False)

    rng = SplitMix64(spec.seed)
    seen: set[int] = set()
    order: list[int] = []
    while len(order) < spec.n:
        v = rng.bits(spec.D)
        if v not in seen:
            seen.add(v)
            order.append(v)
    rows = np.array([[(v >> (spec.D - 1 - i)) & 1 for i in range(spec.D)] for v in order], dtype=np.uint8)
    return VectorSet(rows)


def random_instances(count, seed, B_choices, n_range=(8, 1024), D_range=(4, 64)):
    """Yield ``(InstanceSpec, B)`` pairs with n, D and B drawn from SplitMix64.

    D is raised where needed so that n distinct vectors exist, and B cycles
    through ``B_choices`` so every block size is covered.
    """
    rng = SplitMix64(seed)
    for i in range(count):
        B = B_choices[i % len(B_choices)]
        n = max(B, n_range[0] + rng.below(n_range[1] - n_range[0] + 1))
        D_min = max(D_range[0], math.ceil(math.log2(n)))
        D = D_min + rng.below(D_range[1] - D_min + 1)
        yield InstanceSpec(n=n, D=D, seed=rng.next()), B


@dataclass(frozen=True)
class ErrorReport:
    per_vector: tuple[int, ...]
    average: Fraction
    bound: Fraction
    satisfied: bool

    @property
    def total(self) -> int:
        return sum(self.per_vector)

    def text(self) -> str:
        lines = [f"k {k} dist {dk}" for k, dk in enumerate(self.per_vector)]
        lines.append(
            f"avg {self.average.numerator}/{self.average.denominator} "
            f"bound {self.bound.numerator}/{self.bound.denominator} ok {int(self.satisfied)}"
        )
        return "\n".join(lines) + "\n"


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("BTN_THREADS", "1")))
    except ValueError:
        return 1


def _outputs(encoder: LayeredNet | None, decoder: LayeredNet, X: VectorSet) -> np.ndarray:
    """Full autoencoder outputs for every vector, fanned out over BTN_THREADS workers."""
    def run(lo, hi):
        if encoder is None:
            codes = code_matrix(X.n, decoder.input_dim)[lo:hi]
        else:
            codes = eval_batch(encoder, X.data[lo:hi])
        return eval_batch(decoder, codes)

    workers = min(_threads(), X.n)
    if workers == 1:
        return run(0, X.n)
    edges = np.linspace(0, X.n, workers + 1).astype(int)
    with ThreadPoolExecutor(workers) as pool:
        parts = list(pool.map(run, edges[:-1], edges[1:]))
    return np.vstack(parts)


def hamming_distances(encoder, decoder, X: VectorSet) -> tuple[int, ...]:
    out = _outputs(encoder, decoder, X)
    return tuple(int(v) for v in (out != X.data).sum(axis=1))


def _report(dists, bound: Fraction) -> ErrorReport:
    avg = Fraction(sum(dists), len(dists))
    return ErrorReport(tuple(dists), avg, bound, avg <= bound)


def _check_dims(bundle: CodecBundle, X: VectorSet) -> None:
    if bundle.n != X.n or bundle.D != X.D:
        raise ValueError(
            f"codec is for n={bundle.n}, D={bundle.D} but vectors have n={X.n}, D={X.D}"
        )


def verify_perfect(bundle: CodecBundle, X: VectorSet) -> ErrorReport:
    """Decode every x^k through encoder and decoder; passes only at average 0."""
    _check_dims(bundle, X)
    return _report(hamming_distances(bundle.encoder, bundle.decoder, X), Fraction(0))


def verify_autoencoder(net: LayeredNet, middle: int, X: VectorSet) -> ErrorReport:
    """Like :func:`verify_perfect` for a hand-built net split after layer ``middle``."""
    enc, dec = net.split(middle)
    return _report(hamming_distances(enc, dec, X), Fraction(0))


def measure_error(bundle: CodecBundle, X: VectorSet) -> ErrorReport:
    """Average Hamming error with the error bound matching the codec's mode."""
    _check_dims(bundle, X)
    if bundle.mode == "perfect":
        bound = Fraction(0)
    else:
        bound = approx_error_bound(bundle.n, bundle.D, bundle.B)
    return _report(hamming_distances(bundle.encoder, bundle.decoder, X), bound)


def oracle_equivalence(bundle: CodecBundle, X: VectorSet):
    """Compare the decoder with the pattern-level prediction on every code.

    Returns ``(True, None)`` or ``(False, (k, j))`` for the first differing bit.
    """
    _check_dims(bundle, X)
    if bundle.mode == "perfect":
        raise ValueError("oracle equivalence applies to approximate codecs")
    stats = count_patterns(X, bundle.B) if bundle.mode == "approx" else None
    expected = predict_all(X, bundle.B, stats)
    got = _outputs(None, bundle.decoder, X)
    diff = np.argwhere(got != expected)
    if diff.size:
        k, j = diff[0]
        return False, (int(k), int(j))
    return True, None


def monte_carlo_error(n, D, B, trials, seed, corrected=False):
    """Mean and standard error of the average error over uniform random sets."""
    rng = SplitMix64(seed)
    samples = []
    for _ in range(trials):
        X = gen_random_set(InstanceSpec(n, D, seed=rng.next()))
        bundle = build_approx_decoder(X, B, corrected=corrected)
        samples.append(float(measure_error(bundle, X).average))
    arr = np.array(samples)
    stderr = arr.std(ddof=1) / math.sqrt(trials) if trials > 1 else float("nan")
    return float(arr.mean()), float(stderr), samples
