"""Approximate decoders of width max(ceil(n/B) + B, (B-1)*D + 1).

Bits of the n vectors are grouped into blocks of B consecutive code indices.
For output bit j and block i the *pattern* is the B-bit string
x^{Bi}_j ... x^{Bi+B-1}_j. The y/z network reproduces every pattern except
011...1, which comes out as 111...1 (one wrong bit, at block offset 0).

The corrected decoder first XORs each pattern with a mask ``a`` chosen so
that the least frequent pattern ``c`` is the one mapped onto 011...1, then
undoes the mask at the output with a small XOR network driven by the
remainder one-hot.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .codes import MAX_B, CodecBundle, VectorSet, check_B, code_matrix, encoder_for
from .core import BitVec, Layer, LayeredNet, bits_of_int, eval_batch
from .perfect import build_gamma_layer


@dataclass(frozen=True)
class PatternStats:
    B: int
    counts: Counter
    c: BitVec
    a: BitVec

    def count(self, pattern) -> int:
        key = pattern.to_int() if isinstance(pattern, BitVec) else int(pattern)
        return self.counts[key]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def low_ones(B: int) -> int:
    """Int(011...1) on B bits."""
    return (1 << (B - 1)) - 1


def block_patterns(X: VectorSet, B: int) -> np.ndarray:
    """Pattern value for every (block i, bit j); shape (ceil(n/B), D).

    Phantom all-zero vectors fill the final block when B does not divide n.
    """
    blocks = X.padded(B).reshape(-1, B, X.D).astype(np.int64)
    place = (1 << np.arange(B - 1, -1, -1, dtype=np.int64))[None, :, None]
    return (blocks * place).sum(axis=1)


def count_patterns(X: VectorSet, B: int) -> PatternStats:
    """Histogram of block patterns, the least frequent pattern c and its mask a.

    Ties for c go to the lexicographically smallest pattern.
    """
    if not 2 <= B <= MAX_B:
        raise ValueError(f"B={B} must lie in [2, {MAX_B}]")
    values, freq = np.unique(block_patterns(X, B), return_counts=True)
    counts = Counter({int(v): int(f) for v, f in zip(values, freq)})
    if len(counts) < 2**B:
        c = 0
        while c in counts:
            c += 1
    else:
        c = min(counts, key=lambda v: (counts[v], v))
    a = c ^ low_ones(B)
    return PatternStats(B, counts, BitVec.from_int(c, B), BitVec.from_int(a, B))


def chi(a: BitVec, p: BitVec) -> BitVec:
    if a.dim != p.dim:
        raise ValueError(f"mask has {a.dim} bits, pattern has {p.dim}")
    return BitVec(tuple(x ^ y for x, y in zip(a.bits, p.bits)))


def _weight_fn_array(h: int, k, B: int):
    # move bit h+1 (counted from the most significant) to the front
    low_width = B - 2 - h
    moved = (k >> low_width) & 1
    head = k >> (low_width + 1)
    tail = k & ((1 << low_width) - 1)
    return (moved << (B - 1)) | (head << low_width) | tail


def weight_fn(h: int, k: int, B: int) -> int:
    """Data weight w_h(k): Int(k_{h+1} k_0 ... k_h k_{h+2} ... k_{B-1})."""
    if B < 2:
        raise ValueError(f"B={B} must be at least 2")
    if not 0 <= h <= B - 2:
        raise ValueError(f"h={h} out of range for B={B}")
    if not 0 <= k < 2**B:
        raise ValueError(f"k={k} out of range for B={B}")
    return int(_weight_fn_array(h, k, B))


def penalty_weights(B: int) -> np.ndarray:
    """Weights from the remainder one-hot into y_{j,h}; shape (B-1, B)."""
    w = np.zeros((B - 1, B), dtype=np.int64)
    w[:, 0] = -(2**B) // 4
    w[np.arange(B - 1), np.arange(1, B)] = -(2**B) // 2
    return w


def build_approx_decoder(X: VectorSet, B: int, corrected: bool = True) -> CodecBundle:
    """Compile ``X`` into the approximate decoder for block size B >= 3.

    With ``corrected=False`` the mask and the XOR output network are left out,
    giving the shorter gamma / y / z decoder whose errors sit exactly on
    pattern 011...1.
    """
    n, D, d = X.n, X.D, X.d
    check_B(B, n, minimum=3)
    nb = -(-n // B)
    stats = count_patterns(X, B)
    mask = stats.a.to_int() if corrected else 0

    gamma = build_gamma_layer(n, B, d)
    fan = nb + B

    data = block_patterns(X, B) ^ mask  # (nb, D)
    yw = np.zeros((D, B - 1, fan), dtype=np.int64)
    for h in range(B - 1):
        yw[:, h, :nb] = _weight_fn_array(h, data, B).T
    yw[:, :, nb:] = penalty_weights(B)[None]
    yw = yw.reshape(D * (B - 1), fan)
    yt = np.zeros(D * (B - 1), dtype=np.int64)

    zw = np.kron(np.eye(D, dtype=np.int64), np.ones((1, B - 1), dtype=np.int64))
    zt = np.full(D, B - 1, dtype=np.int64)

    if not corrected:
        decoder = LayeredNet(d, gamma + (Layer(yw, yt), Layer(zw, zt)))
        return CodecBundle("approx-uncorrected", n, D, d, B, encoder_for(X), decoder)

    # gamma' rides along the y layer, gamma'' (a copy) along the z layer
    gp = np.zeros((1, fan), dtype=np.int64)
    gp[0, nb:] = stats.a.bits
    y = Layer(np.vstack([yw, gp]), np.append(yt, 1))

    zw = np.hstack([zw, np.zeros((D, 1), dtype=np.int64)])
    gpp = np.zeros((1, D * (B - 1) + 1), dtype=np.int64)
    gpp[0, -1] = 1
    z = Layer(np.vstack([zw, gpp]), np.append(zt, 1))

    # z_{j,0} = [z_j - g'' >= 1], z_{j,1} = [-z_j + g'' >= 1]
    xw = np.zeros((2 * D, D + 1), dtype=np.int64)
    xw[0::2, :D] = np.eye(D, dtype=np.int64)
    xw[1::2, :D] = -np.eye(D, dtype=np.int64)
    xw[0::2, D] = -1
    xw[1::2, D] = 1
    xor = Layer(xw, np.ones(2 * D, dtype=np.int64))

    ow = np.kron(np.eye(D, dtype=np.int64), np.ones((1, 2), dtype=np.int64))
    out = Layer(ow, np.ones(D, dtype=np.int64))

    decoder = LayeredNet(d, gamma + (y, z, xor, out))
    return CodecBundle(
        "approx", n, D, d, B, encoder_for(X), decoder, mask_a=stats.a, pattern_c=stats.c
    )


def build_approx_decoder_b3(X: VectorSet, corrected: bool = True) -> CodecBundle:
    if X.n < 3:
        raise ValueError(f"B=3 construction needs n >= 3, got n={X.n}")
    return build_approx_decoder(X, 3, corrected=corrected)


def error_pattern(B: int, stats: PatternStats | None) -> int:
    """The one pattern decoded wrongly: c when corrected, 011...1 otherwise."""
    return low_ones(B) if stats is None else stats.c.to_int()


def predict_all(X: VectorSet, B: int, stats: PatternStats | None) -> np.ndarray:
    """Expected decoder output for every code, derived from the block patterns alone.

    ``stats=None`` predicts the uncorrected decoder.
    """
    bad = block_patterns(X, B) == error_pattern(B, stats)  # (nb, D)
    out = X.data.copy()
    heads = np.arange(0, X.n, B)
    out[heads] ^= bad[: len(heads)].astype(np.uint8)
    return out


def predict_output(X: VectorSet, B: int, stats: PatternStats | None, k: int) -> BitVec:
    if not 0 <= k < X.n:
        raise ValueError(f"k={k} out of range for n={X.n}")
    bits = list(X.data[k])
    if k % B == 0:
        row = block_patterns(X, B)[k // B]
        bad = error_pattern(B, stats)
        bits = [b ^ int(p == bad) for b, p in zip(bits, row)]
    return BitVec(tuple(bits))


# --- regeneration of the two B=3 tables -------------------------------------

def _all_patterns_set(B: int) -> VectorSet:
    # column j of the B vectors spells pattern j, so one block holds every pattern
    cols = np.array([bits_of_int(p, B) for p in range(2**B)], dtype=np.uint8)
    return VectorSet(cols.T)


def _fmt(bits) -> str:
    return "".join(str(int(b)) for b in bits)


def weight_walkthrough_rows() -> list[str]:
    """Rows: pattern, w_{i,0}, w_{i,1} (3-bit binary), y_{.,0}, y_{.,1}, z over the block."""
    B = 3
    X = _all_patterns_set(B)
    bundle = build_approx_decoder(X, B, corrected=False)
    ylayer = bundle.decoder.layers[-2]
    out, acts = eval_batch(bundle.decoder, code_matrix(X.n), trace=True)
    yact = acts[-2]
    rows = []
    for j in range(2**B):
        w0 = int(ylayer.weights[j * (B - 1) + 0, 0])
        w1 = int(ylayer.weights[j * (B - 1) + 1, 0])
        rows.append(
            " & ".join(
                [
                    _fmt(bits_of_int(j, B)),
                    _fmt(bits_of_int(w0, B)),
                    _fmt(bits_of_int(w1, B)),
                    _fmt(yact[:, j * (B - 1) + 0]),
                    _fmt(yact[:, j * (B - 1) + 1]),
                    _fmt(out[:, j]),
                ]
            )
            + " \\\\"
        )
    return rows


def correction_walkthrough_rows() -> list[str]:
    """Rows: pattern, chi_a(pattern), z, z' for the corrected decoder with c = 000."""
    B = 3
    X = _all_patterns_set(B)
    bundle = build_approx_decoder(X, B, corrected=True)
    if bundle.pattern_c.to_int() != 0:
        raise RuntimeError("expected c = 000 for the all-patterns instance")
    out, acts = eval_batch(bundle.decoder, code_matrix(X.n), trace=True)
    zact = acts[-3]
    rows = []
    for j in range(2**B):
        p = BitVec.from_int(j, B)
        rows.append(
            " & ".join(
                [str(p), str(chi(bundle.mask_a, p)), _fmt(zact[:, j]), _fmt(out[:, j])]
            )
            + " \\\\"
        )
    return rows
