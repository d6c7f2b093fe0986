"""Vector sets, positional code assignment, the recognizer encoder and codec bundles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .core import BitVec, Layer, LayeredNet, code_length, eval_batch

Mode = Literal["perfect", "approx", "approx-uncorrected"]
MODES = ("perfect", "approx", "approx-uncorrected")
MAX_B = 32


class DuplicateVectorError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class VectorSet:
    """An ordered list of n binary vectors of length D; position k is the code index.

    Vectors must be pairwise distinct unless ``distinct=False`` is passed, which
    is reserved for decoder-only experiments (a perfect encoder cannot exist
    for a list with repeats).
    """

    data: np.ndarray
    distinct: bool = True

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.uint8, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"need a non-empty n x D bit matrix, got shape {arr.shape}")
        if arr.max() > 1:
            raise ValueError("vector entries must be 0 or 1")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        if self.distinct and self.has_duplicates():
            raise DuplicateVectorError("input vectors are not pairwise distinct")

    @classmethod
    def from_strings(cls, lines: Iterable[str], distinct: bool = True) -> "VectorSet":
        rows = [BitVec.from_str(s).bits for s in lines]
        if not rows:
            raise ValueError("empty vector set")
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise ValueError(f"vectors have differing lengths {sorted(widths)}")
        return cls(np.array(rows, dtype=np.uint8), distinct=distinct)

    def has_duplicates(self) -> bool:
        packed = np.packbits(self.data, axis=1)
        return np.unique(packed, axis=0).shape[0] != self.n

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def D(self) -> int:
        return self.data.shape[1]

    @property
    def d(self) -> int:
        return code_length(self.n)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, k: int) -> BitVec:
        return BitVec(tuple(self.data[k]))

    def __iter__(self):
        return (self[k] for k in range(self.n))

    def __eq__(self, other):
        if not isinstance(other, VectorSet):
            return NotImplemented
        return np.array_equal(self.data, other.data)

    def strings(self) -> list[str]:
        return ["".join("1" if b else "0" for b in row) for row in self.data]

    def padded(self, B: int) -> np.ndarray:
        """Rows padded with all-zero phantom vectors up to a multiple of B."""
        nb = -(-self.n // B)
        out = np.zeros((nb * B, self.D), dtype=np.uint8)
        out[: self.n] = self.data
        return out


def code_matrix(n: int, d: int | None = None) -> np.ndarray:
    """Row k is binary(k) on d bits, most significant first."""
    d = code_length(n) if d is None else d
    k = np.arange(n, dtype=np.int64)[:, None]
    shifts = np.arange(d - 1, -1, -1, dtype=np.int64)[None, :]
    return ((k >> shifts) & 1).astype(np.uint8)


def assign_codes(X: VectorSet) -> tuple[BitVec, ...]:
    """Positional assignment x^k -> binary(k) on ceil(log2 n) bits."""
    if X.has_duplicates():
        raise DuplicateVectorError("cannot assign codes: duplicate vectors")
    return tuple(BitVec(tuple(row)) for row in code_matrix(X.n))


def build_encoder(X: VectorSet, codes=None) -> LayeredNet:
    """Two-layer D/n/d encoder: one recognizer per vector, then an OR per code bit."""
    if codes is None:
        codes = assign_codes(X)
    rec_w = np.where(X.data == 1, 1, -1).astype(np.int64)
    rec_t = X.data.sum(axis=1, dtype=np.int64)
    code_bits = np.array([c.bits for c in codes], dtype=np.int64)
    out_w = code_bits.T  # (d, n)
    out_t = np.ones(out_w.shape[0], dtype=np.int64)
    return LayeredNet(X.D, (Layer(rec_w, rec_t), Layer(out_w, out_t)))


def is_power_of_two(B: int) -> bool:
    return B >= 1 and B & (B - 1) == 0


def decoder_layer_roles(mode: str, B: int) -> tuple[str, ...]:
    """Names of the decoder layers, in order, for a builder's output."""
    gamma = ("gamma",) if is_power_of_two(B) else ("gamma.steps", "gamma.split", "gamma")
    if mode == "perfect":
        if B == 1:
            return ("out",)
        return gamma + ("y", "out")
    if mode == "approx-uncorrected":
        return gamma + ("y", "z")
    if mode == "approx":
        return gamma + ("y", "z", "xor", "out")
    raise ValueError(f"unknown mode {mode!r}")


def _y_width(mode: str, B: int, D: int) -> int:
    if mode == "perfect":
        return B * D
    return (B - 1) * D + (mode == "approx")


@dataclass(frozen=True, eq=False)
class CodecBundle:
    """Encoder/decoder pair plus construction metadata.

    ``encoder`` is ``None`` for the lookup-table encoder, i.e. vector k is
    simply assigned code binary(k) without a network.
    """

    mode: str
    n: int
    D: int
    d: int
    B: int
    encoder: LayeredNet | None
    decoder: LayeredNet
    mask_a: BitVec | None = None
    pattern_c: BitVec | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.d != code_length(self.n):
            raise ValueError(f"d={self.d} but ceil(log2 {self.n}) = {code_length(self.n)}")
        if self.decoder.input_dim != self.d or self.decoder.output_dim != self.D:
            raise ValueError("decoder dimensions do not match d -> D")
        if self.encoder is not None and (
            self.encoder.input_dim != self.D or self.encoder.output_dim != self.d
        ):
            raise ValueError("encoder dimensions do not match D -> d")
        has_mask = self.mask_a is not None and self.pattern_c is not None
        if has_mask != (self.mode == "approx"):
            raise ValueError("mask a and pattern c are required exactly for mode=approx")
        if has_mask and not (self.mask_a.dim == self.pattern_c.dim == self.B):
            raise ValueError("mask a and pattern c must have B bits")
        roles = decoder_layer_roles(self.mode, self.B)
        if len(self.decoder.layers) != len(roles):
            raise ValueError(f"decoder has {len(self.decoder.layers)} layers, B={self.B} needs {len(roles)}")
        if "y" in roles and len(self.decoder.layers[roles.index("y")]) != _y_width(self.mode, self.B, self.D):
            raise ValueError(f"selection layer width does not match B={self.B}, D={self.D}")

    def __eq__(self, other):
        if not isinstance(other, CodecBundle):
            return NotImplemented
        return (
            (self.mode, self.n, self.D, self.d, self.B, self.mask_a, self.pattern_c)
            == (other.mode, other.n, other.D, other.d, other.B, other.mask_a, other.pattern_c)
            and self.encoder == other.encoder
            and self.decoder == other.decoder
        )

    def encode_all(self, X: VectorSet) -> np.ndarray:
        if self.encoder is None:
            return code_matrix(self.n, self.d)
        return eval_batch(self.encoder, X.data)


def check_B(B: int, n: int, minimum: int = 2) -> None:
    if B > MAX_B:
        raise ValueError(f"B={B} exceeds the capacity limit {MAX_B}")
    if B < minimum:
        raise ValueError(f"B={B} must be at least {minimum}")
    if B > n:
        raise ValueError(f"B={B} must not exceed n={n}")


def encoder_for(X: VectorSet) -> LayeredNet | None:
    """Recognizer encoder for distinct sets, lookup table otherwise."""
    return None if X.has_duplicates() else build_encoder(X)
