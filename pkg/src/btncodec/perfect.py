"""Constant-depth perfect decoder of width max(ceil(n/B) + B, B*D)."""

from __future__ import annotations

import math

import numpy as np

from .codes import CodecBundle, VectorSet, check_B, decoder_layer_roles, encoder_for, is_power_of_two
from .core import Layer, LayeredNet, bits_of_int, code_length


def _recognizer_rows(values: range, nbits: int, offset: int, d: int):
    """Rows matching bits [offset, offset+nbits) of a d-bit input against each value."""
    w = np.zeros((len(values), d), dtype=np.int64)
    t = np.zeros(len(values), dtype=np.int64)
    for row, v in enumerate(values):
        if nbits:
            bits = np.array(bits_of_int(v, nbits), dtype=np.int64)
            w[row, offset : offset + nbits] = 2 * bits - 1
            t[row] = bits.sum()
    return w, t


def _one_hot_from_steps(count: int, step_cols, fan_in: int):
    """Units firing on [S_i = 1 and S_{i+1} = 0] given step columns S_1..S_{count-1}.

    ``step_cols[i]`` is the input column of S_i (i >= 1); S_0 is constant 1
    and S_count constant 0.
    """
    w = np.zeros((count, fan_in), dtype=np.int64)
    t = np.zeros(count, dtype=np.int64)
    for i in range(count):
        if i >= 1:
            w[i, step_cols[i]] = 1
        if i + 1 < count:
            w[i, step_cols[i + 1]] = -1
        t[i] = 1 if i >= 1 else 0
    return w, t


def build_gamma_layer(n: int, B: int, d: int | None = None) -> tuple[Layer, ...]:
    """Layers whose final outputs are the quotient and remainder one-hots.

    On input beta with Int(beta) = k < ceil(n/B)*B exactly two outputs fire:
    index k // B and index ceil(n/B) + k % B.

    For B a power of two this is a single layer of ceil(n/B) + B recognizers
    on the high and low bits. Otherwise three layers are used:

    1. steps [Int(beta) >= i*B] for i = 1..n_B-1, plus copies of beta;
    2. quotient one-hot from the steps, and remainder steps
       [Int(beta) - B*sum(steps) >= h] for h = 1..B-1;
    3. copies of the quotient one-hot, and the remainder one-hot.
    """
    if d is None:
        d = code_length(n)
    if B <= 1 or B > n:
        raise ValueError(f"B={B} must satisfy 1 < B <= n={n}")
    if d != code_length(n):
        raise ValueError(f"d={d} but ceil(log2 {n}) = {code_length(n)}")
    nb = -(-n // B)

    if is_power_of_two(B):
        K = B.bit_length() - 1
        qw, qt = _recognizer_rows(range(nb), d - K, 0, d)
        rw, rt = _recognizer_rows(range(B), K, d - K, d)
        return (Layer(np.vstack([qw, rw]), np.concatenate([qt, rt])),)

    place = 2 ** np.arange(d - 1, -1, -1, dtype=np.int64)

    # layer 1: quotient steps, then beta copies
    n_steps = nb - 1
    w1 = np.zeros((n_steps + d, d), dtype=np.int64)
    t1 = np.zeros(n_steps + d, dtype=np.int64)
    w1[:n_steps] = place
    t1[:n_steps] = B * np.arange(1, nb, dtype=np.int64)
    w1[n_steps:] = np.eye(d, dtype=np.int64)
    t1[n_steps:] = 1
    fan1 = n_steps + d

    # layer 2: quotient one-hot, then remainder steps R_1..R_{B-1}
    qw, qt = _one_hot_from_steps(nb, [None] + list(range(n_steps)), fan1)
    rw = np.zeros((B - 1, fan1), dtype=np.int64)
    rw[:, :n_steps] = -B
    rw[:, n_steps:] = place
    rt = np.arange(1, B, dtype=np.int64)
    w2 = np.vstack([qw, rw])
    t2 = np.concatenate([qt, rt])
    fan2 = nb + B - 1

    # layer 3: quotient copies, remainder one-hot
    w3q = np.zeros((nb, fan2), dtype=np.int64)
    w3q[np.arange(nb), np.arange(nb)] = 1
    t3q = np.ones(nb, dtype=np.int64)
    w3r, t3r = _one_hot_from_steps(B, [None] + list(range(nb, nb + B - 1)), fan2)
    w3 = np.vstack([w3q, w3r])
    t3 = np.concatenate([t3q, t3r])

    return (Layer(w1, t1), Layer(w2, t2), Layer(w3, t3))


def gamma_depth(B: int) -> int:
    return 1 if is_power_of_two(B) else 3


def _constant_decoder(X: VectorSet) -> LayeredNet:
    # n == 1: every output is a constant; [0 >= 0] = 1 and [0 >= 1] = 0
    w = np.zeros((X.D, 1), dtype=np.int64)
    t = 1 - X.data[0].astype(np.int64)
    return LayeredNet(1, (Layer(w, t),))


def build_perfect_decoder(X: VectorSet, B: int) -> CodecBundle:
    """Compile ``X`` into the gamma / y / OR decoder and pair it with an encoder.

    Vector k decodes from the code binary(k). If n is not a multiple of B
    the last block is padded with all-zero phantom vectors.
    """
    n, D, d = X.n, X.D, X.d
    if n == 1:
        return CodecBundle("perfect", 1, D, 1, 1, encoder_for(X), _constant_decoder(X))
    check_B(B, n)
    nb = -(-n // B)
    gamma = build_gamma_layer(n, B, d)

    blocks = X.padded(B).reshape(nb, B, D)
    # unit (j, b) sits at row j*B + b
    yw = np.zeros((D, B, nb + B), dtype=np.int64)
    yw[:, :, :nb] = blocks.transpose(2, 1, 0)
    yw[:, np.arange(B), nb + np.arange(B)] = 1
    y = Layer(yw.reshape(D * B, nb + B), np.full(D * B, 2, dtype=np.int64))

    ow = np.kron(np.eye(D, dtype=np.int64), np.ones((1, B), dtype=np.int64))
    out = Layer(ow, np.ones(D, dtype=np.int64))

    decoder = LayeredNet(d, gamma + (y, out))
    return CodecBundle("perfect", n, D, d, B, encoder_for(X), decoder)


def optimal_B(n: int, D: int) -> int:
    """Smallest B with B*B*D >= n, i.e. ceil(sqrt(n/D)), but never below 2."""
    if n <= D:
        raise ValueError(f"optimal B needs n > D (got n={n}, D={D})")
    B = math.isqrt(n // D)
    while B * B * D < n:
        B += 1
    while B > 1 and (B - 1) * (B - 1) * D >= n:
        B -= 1
    return max(B, 2)
