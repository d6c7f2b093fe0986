"""Threshold units, layered networks and a bit-exact feed-forward evaluator."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

# float64 represents every integer below 2**53 exactly, so a float matmul is
# bit-exact whenever the largest attainable |w . x| stays under this.
_FLOAT_EXACT = 2**53
_INT_LIMIT = 2**62
# layers at least this large and at most this dense are multiplied in CSR form
_SPARSE_MIN_SIZE = 1 << 16
_SPARSE_MAX_DENSITY = 0.05


def bits_of_int(k: int, d: int) -> tuple[int, ...]:
    """Return the d-bit binary representation of k, most significant bit first."""
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    if not 0 <= k < 2**d:
        raise ValueError(f"k={k} does not fit in {d} bits")
    return tuple((k >> (d - 1 - i)) & 1 for i in range(d))


def int_of_bits(bits: Iterable[int]) -> int:
    """Inverse of :func:`bits_of_int`: bit 0 is the most significant."""
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def code_length(n: int) -> int:
    """Middle-layer width ceil(log2 n), with 1 for n == 1."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return max(1, (n - 1).bit_length())


@dataclass(frozen=True)
class BitVec:
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise ValueError("BitVec must have at least one bit")
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"BitVec entries must be 0 or 1, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @property
    def dim(self) -> int:
        return len(self.bits)

    @classmethod
    def from_str(cls, s: str) -> "BitVec":
        if not s or any(ch not in "01" for ch in s):
            raise ValueError(f"not a bit string: {s!r}")
        return cls(tuple(int(ch) for ch in s))

    @classmethod
    def from_int(cls, k: int, d: int) -> "BitVec":
        return cls(bits_of_int(k, d))

    def to_int(self) -> int:
        return int_of_bits(self.bits)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.bits, dtype=np.uint8)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __getitem__(self, i):
        return self.bits[i]


@dataclass(frozen=True)
class ThresholdUnit:
    """A Boolean threshold function ``[weights . x >= theta]``."""

    weights: tuple[int, ...]
    theta: int

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "theta", int(self.theta))

    @property
    def fan_in(self) -> int:
        return len(self.weights)


def eval_unit(unit: ThresholdUnit, x: BitVec | Sequence[int]) -> int:
    bits = x.bits if isinstance(x, BitVec) else tuple(int(b) for b in x)
    if len(bits) != len(unit.weights):
        raise ValueError(
            f"input has {len(bits)} bits but unit expects {len(unit.weights)}"
        )
    total = sum(w * b for w, b in zip(unit.weights, bits))
    return int(total >= unit.theta)


class Layer(Sequence[ThresholdUnit]):
    """A layer of threshold units stored as an integer weight matrix.

    Indexing yields :class:`ThresholdUnit` views, so a ``Layer`` behaves as
    an ordered sequence of units while evaluation stays vectorised.
    """

    __slots__ = ("weights", "thetas", "_use_float", "_dense_f", "_sparse_f", "_thetas_f")

    def __init__(self, weights, thetas):
        w = np.array(weights, dtype=np.int64, copy=True)
        t = np.array(thetas, dtype=np.int64, copy=True).reshape(-1)
        if w.ndim != 2:
            raise ValueError("layer weights must be a 2-d matrix")
        if w.shape[0] != t.shape[0]:
            raise ValueError(
                f"{w.shape[0]} weight rows but {t.shape[0]} thresholds"
            )
        if w.shape[1] < 1:
            raise ValueError("units need at least one input")
        reach = int(np.abs(w).sum(axis=1).max()) if w.shape[0] else 0
        if reach >= _INT_LIMIT or (t.size and int(np.abs(t).max()) >= _INT_LIMIT):
            raise OverflowError("weights exceed the 64-bit accumulator capacity")
        w.setflags(write=False)
        t.setflags(write=False)
        self.weights = w
        self.thetas = t
        self._use_float = reach < _FLOAT_EXACT
        self._dense_f = None
        self._sparse_f = None
        self._thetas_f = t.astype(np.float64)
        if self._use_float:
            if w.size >= _SPARSE_MIN_SIZE and np.count_nonzero(w) <= _SPARSE_MAX_DENSITY * w.size:
                self._sparse_f = sparse.csr_array(w.astype(np.float64))
            else:
                self._dense_f = w.T.astype(np.float64)

    @classmethod
    def from_units(cls, units: Sequence[ThresholdUnit], fan_in: int) -> "Layer":
        for u in units:
            if u.fan_in != fan_in:
                raise ValueError(f"unit has fan-in {u.fan_in}, expected {fan_in}")
        w = np.array([u.weights for u in units], dtype=np.int64).reshape(len(units), fan_in)
        return cls(w, [u.theta for u in units])

    @property
    def fan_in(self) -> int:
        return self.weights.shape[1]

    def __len__(self) -> int:
        return self.weights.shape[0]

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        row = self.weights[i]
        return ThresholdUnit(tuple(int(v) for v in row), int(self.thetas[i]))

    def __eq__(self, other):
        if not isinstance(other, Layer):
            return NotImplemented
        return (
            self.weights.shape == other.weights.shape
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.thetas, other.thetas)
        )

    def __hash__(self):
        return hash((self.weights.shape, self.weights.tobytes(), self.thetas.tobytes()))

    def __repr__(self):
        return f"Layer(units={len(self)}, fan_in={self.fan_in})"

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Evaluate on a batch ``x`` of shape (m, fan_in); returns uint8 (m, units)."""
        if self._sparse_f is not None:
            s = (self._sparse_f @ x.T.astype(np.float64)).T
            return (s >= self._thetas_f).astype(np.uint8)
        if self._dense_f is not None:
            s = x.astype(np.float64) @ self._dense_f
            return (s >= self._thetas_f).astype(np.uint8)
        s = x.astype(np.int64) @ self.weights.T
        return (s >= self.thetas).astype(np.uint8)


@dataclass(frozen=True)
class NetMetrics:
    size: int
    depth: int
    width: int


@dataclass(frozen=True, eq=False)
class LayeredNet:
    """Feed-forward layered BTN. The input layer is implicit (``input_dim`` bits)."""

    input_dim: int
    layers: tuple[Layer, ...] = field(default=())

    def __post_init__(self):
        if self.input_dim < 1:
            raise ValueError("input_dim must be positive")
        layers = tuple(
            lyr if isinstance(lyr, Layer) else Layer.from_units(lyr, self._fan_in_at(i, lyr))
            for i, lyr in enumerate(self.layers)
        )
        object.__setattr__(self, "layers", layers)
        width = self.input_dim
        for i, lyr in enumerate(layers):
            if lyr.fan_in != width:
                raise ValueError(
                    f"layer {i + 1} expects {lyr.fan_in} inputs but previous layer has {width} nodes"
                )
            width = len(lyr)

    def _fan_in_at(self, i, units):
        # only used while converting unit lists: trust the first unit
        return units[0].fan_in if len(units) else self.input_dim

    def __eq__(self, other):
        if not isinstance(other, LayeredNet):
            return NotImplemented
        return self.input_dim == other.input_dim and self.layers == other.layers

    def __hash__(self):
        return hash((self.input_dim, self.layers))

    @property
    def output_dim(self) -> int:
        return len(self.layers[-1]) if self.layers else self.input_dim

    @cached_property
    def widths(self) -> tuple[int, ...]:
        return tuple(len(lyr) for lyr in self.layers)

    def split(self, k: int) -> tuple["LayeredNet", "LayeredNet"]:
        """Cut after layer ``k``: layers[:k] form the encoder, the rest the decoder."""
        if not 1 <= k < len(self.layers):
            raise ValueError(f"cannot split a {len(self.layers)}-layer net at {k}")
        enc = LayeredNet(self.input_dim, self.layers[:k])
        dec = LayeredNet(len(self.layers[k - 1]), self.layers[k:])
        return enc, dec

    def then(self, other: "LayeredNet") -> "LayeredNet":
        """Stack ``other`` on top of this net."""
        if other.input_dim != self.output_dim:
            raise ValueError("output/input dimensions do not line up")
        return LayeredNet(self.input_dim, self.layers + other.layers)

    def with_weight(self, layer: int, unit: int, index: int, value: int) -> "LayeredNet":
        """Copy of the net with a single weight replaced."""
        lyr = self.layers[layer]
        w = lyr.weights.copy()
        w[unit, index] = value
        layers = list(self.layers)
        layers[layer] = Layer(w, lyr.thetas)
        return LayeredNet(self.input_dim, tuple(layers))

    def with_theta(self, layer: int, unit: int, value: int) -> "LayeredNet":
        lyr = self.layers[layer]
        t = lyr.thetas.copy()
        t[unit] = value
        layers = list(self.layers)
        layers[layer] = Layer(lyr.weights, t)
        return LayeredNet(self.input_dim, tuple(layers))


def eval_batch(net: LayeredNet, x, trace: bool = False):
    """Evaluate ``net`` on every row of ``x``.

    Returns the output matrix, or ``(output, activations)`` when ``trace`` is
    set, where ``activations`` holds one matrix per layer.
    """
    cur = np.asarray(x, dtype=np.uint8)
    if cur.ndim != 2 or cur.shape[1] != net.input_dim:
        raise ValueError(
            f"expected inputs of width {net.input_dim}, got shape {cur.shape}"
        )
    acts = []
    for lyr in net.layers:
        cur = lyr.apply(cur)
        if trace:
            acts.append(cur)
    return (cur, acts) if trace else cur


def eval_net(net: LayeredNet, x: BitVec, trace: bool = False):
    """Evaluate on a single vector; with ``trace`` also return each layer's BitVec."""
    if x.dim != net.input_dim:
        raise ValueError(f"input has {x.dim} bits, net expects {net.input_dim}")
    out, acts = eval_batch(net, x.to_array()[None, :], trace=True)
    y = BitVec(tuple(out[0]))
    if trace:
        return y, [BitVec(tuple(a[0])) for a in acts]
    return y


def metrics(net: LayeredNet) -> NetMetrics:
    widths = net.widths
    hidden = widths[:-1]
    return NetMetrics(size=sum(widths), depth=len(widths), width=max(hidden, default=0))


def make_equality_recognizer(k: int, d: int) -> ThresholdUnit:
    """Unit firing on a d-bit input iff its value (bit 0 most significant) is k."""
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    if not 0 <= k < 2**d:
        raise ValueError(f"k={k} out of range for d={d}")
    return make_vector_recognizer(BitVec.from_int(k, d))


def make_vector_recognizer(v: BitVec) -> ThresholdUnit:
    bits = v.bits
    return ThresholdUnit(tuple(1 if b else -1 for b in bits), sum(bits))


def four_vector_autoencoder() -> LayeredNet:
    """The 3/2/3 perfect autoencoder for {000, 100, 101, 111}."""
    enc = [ThresholdUnit((1, 1, -1), 1), ThresholdUnit((0, 0, 1), 1)]
    dec = [
        ThresholdUnit((1, 1), 1),
        ThresholdUnit((1, 1), 2),
        ThresholdUnit((0, 1), 1),
    ]
    return LayeredNet(3, (enc, dec))


FOUR_VECTORS = ("000", "100", "101", "111")
