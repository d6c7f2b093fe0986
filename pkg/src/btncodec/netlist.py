"""Line-oriented text formats: netlists, codec manifests and vector sets.

Netlist::

    BTN 1 <input_dim>
    LAYER <node_count>
    UNIT <theta> <w_0> ... <w_{m-1}>
    ...

Manifest::

    CODEC mode=<mode> n=<n> D=<D> d=<d> B=<B> [c=<bits> a=<bits>]
    ENCODER
    <netlist, or the single line LOOKUP>
    DECODER
    <netlist>

Parsers are strict: anything that would not re-serialize to the same bytes
is rejected with :class:`FormatError`.
"""

from __future__ import annotations

import re

import numpy as np

from .codes import CodecBundle, VectorSet
from .core import BitVec, Layer, LayeredNet


class FormatError(ValueError):
    pass


def _int(tok: str, what: str) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise FormatError(f"{what}: {tok!r} is not an integer") from None
    if str(v) != tok:
        raise FormatError(f"{what}: {tok!r} is not in canonical decimal form")
    return v


def format_net(net: LayeredNet) -> str:
    out = [f"BTN 1 {net.input_dim}"]
    for lyr in net.layers:
        out.append(f"LAYER {len(lyr)}")
        for row, theta in zip(lyr.weights.tolist(), lyr.thetas.tolist()):
            out.append("UNIT " + " ".join(map(str, [theta, *row])))
    return "\n".join(out) + "\n"


def _parse_net_lines(lines: list[str], start: int) -> tuple[LayeredNet, int]:
    i = start
    head = lines[i].split(" ") if i < len(lines) else []
    if len(head) != 3 or head[:2] != ["BTN", "1"]:
        raise FormatError(f"line {i + 1}: expected 'BTN 1 <input_dim>'")
    input_dim = _int(head[2], "input_dim")
    if input_dim < 1:
        raise FormatError(f"line {i + 1}: input_dim must be positive")
    i += 1
    layers = []
    fan = input_dim
    while i < len(lines) and lines[i].startswith("LAYER"):
        parts = lines[i].split(" ")
        if len(parts) != 2 or parts[0] != "LAYER":
            raise FormatError(f"line {i + 1}: expected 'LAYER <node_count>'")
        count = _int(parts[1], "node_count")
        if count < 1:
            raise FormatError(f"line {i + 1}: node_count must be positive")
        i += 1
        rows, thetas = [], []
        for _ in range(count):
            if i >= len(lines):
                raise FormatError("unexpected end of netlist")
            parts = lines[i].split(" ")
            if parts[0] != "UNIT" or len(parts) != fan + 2:
                raise FormatError(
                    f"line {i + 1}: expected 'UNIT <theta>' followed by {fan} weights"
                )
            vals = [_int(t, f"line {i + 1}") for t in parts[1:]]
            thetas.append(vals[0])
            rows.append(vals[1:])
            i += 1
        layers.append(Layer(np.array(rows, dtype=np.int64), thetas))
        fan = count
    return LayeredNet(input_dim, tuple(layers)), i


def _split_lines(text: str) -> list[str]:
    if not text.endswith("\n"):
        raise FormatError("text must end with a newline")
    lines = text[:-1].split("\n")
    for no, line in enumerate(lines, 1):
        if line != line.strip() or "  " in line or "\r" in line or "\t" in line:
            raise FormatError(f"line {no}: stray whitespace")
    return lines


def parse_net(text: str) -> LayeredNet:
    lines = _split_lines(text)
    net, end = _parse_net_lines(lines, 0)
    if end != len(lines):
        raise FormatError(f"line {end + 1}: unexpected content after netlist")
    return net


_HEADER = re.compile(
    r"CODEC mode=(perfect|approx|approx-uncorrected) n=(\d+) D=(\d+) d=(\d+) B=(\d+)"
    r"(?: c=([01]+) a=([01]+))?"
)


def format_manifest(bundle: CodecBundle) -> str:
    head = (
        f"CODEC mode={bundle.mode} n={bundle.n} D={bundle.D} d={bundle.d} B={bundle.B}"
    )
    if bundle.mode == "approx":
        head += f" c={bundle.pattern_c} a={bundle.mask_a}"
    enc = "LOOKUP\n" if bundle.encoder is None else format_net(bundle.encoder)
    return f"{head}\nENCODER\n{enc}DECODER\n{format_net(bundle.decoder)}"


def parse_manifest(text: str) -> CodecBundle:
    lines = _split_lines(text)
    m = _HEADER.fullmatch(lines[0])
    if not m:
        raise FormatError("line 1: malformed CODEC header")
    mode = m.group(1)
    n, D, d, B = (_int(m.group(g), name) for g, name in zip(range(2, 6), "nDdB"))
    if len(lines) < 2 or lines[1] != "ENCODER":
        raise FormatError("line 2: expected ENCODER")
    if len(lines) > 2 and lines[2] == "LOOKUP":
        encoder, i = None, 3
    else:
        encoder, i = _parse_net_lines(lines, 2)
    if i >= len(lines) or lines[i] != "DECODER":
        raise FormatError(f"line {i + 1}: expected DECODER")
    decoder, end = _parse_net_lines(lines, i + 1)
    if end != len(lines):
        raise FormatError(f"line {end + 1}: unexpected content after decoder")
    c = BitVec.from_str(m.group(6)) if m.group(6) else None
    a = BitVec.from_str(m.group(7)) if m.group(7) else None
    try:
        return CodecBundle(mode, n, D, d, B, encoder, decoder, mask_a=a, pattern_c=c)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_vectors(X: VectorSet, comment: str | None = None) -> str:
    head = "".join(f"# {line}\n" for line in comment.splitlines()) if comment else ""
    return head + "".join(s + "\n" for s in X.strings())


def parse_vectors(text: str, distinct: bool | None = None) -> VectorSet:
    """Read a vector-set file.

    With ``distinct=None`` repeated vectors are accepted but mark the set as
    non-distinct (decoder-only use).
    """
    rows = []
    for no, line in enumerate(text.splitlines(), 1):
        if line.startswith("#") or not line.strip():
            continue
        if any(ch not in "01" for ch in line):
            raise FormatError(f"line {no}: vectors must consist of 0/1 characters")
        rows.append(line)
    if not rows:
        raise FormatError("no vectors found")
    if len({len(r) for r in rows}) != 1:
        raise FormatError("vectors have differing lengths")
    if distinct is None:
        distinct = len(set(rows)) == len(rows)
    return VectorSet.from_strings(rows, distinct=distinct)
