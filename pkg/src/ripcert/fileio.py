"""Versioned text formats for matrices, designs, graphs and reports.

Matrix entries are written with 17 significant digits so doubles
round-trip exactly; reading back a written file reproduces the matrix
bit for bit. Report files consist of key-value sections; lines starting
with ``# `` carry timings and other non-reproducible annotations and do
not belong to the report body, which is byte-identical across reruns
with the same seeds and across worker counts.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .constructions import Frame, SteinerSystem
from .errors import InvalidParameterError
from .graphs import SimpleGraph
from .linalg import DenseMatrix

MATRIX_MAGIC = "ripmat"
STEINER_MAGIC = "ripsteiner"
GRAPH_MAGIC = "ripgraph"
REPORT_MAGIC = "ripreport"
FORMAT_VERSION = 1


def _fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


def _fmt_entry(z: complex, complex_flag: bool) -> str:
    if not complex_flag:
        return _fmt_float(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{_fmt_float(z.real)}{sign}{_fmt_float(abs(z.imag))}j"


def _check_magic(line: str, magic: str, path) -> None:
    parts = line.split()
    if len(parts) != 2 or parts[0] != magic:
        raise InvalidParameterError(f"{path}: expected '{magic} <version>' header")
    if int(parts[1]) != FORMAT_VERSION:
        raise InvalidParameterError(f"{path}: unsupported format version {parts[1]}")


def write_matrix(path, frame: Frame) -> None:
    dm = frame.matrix
    complex_flag = not dm.is_real()
    lines = [
        f"{MATRIX_MAGIC} {FORMAT_VERSION}",
        f"rows {dm.rows}",
        f"cols {dm.cols}",
        f"complex {int(complex_flag)}",
    ]
    if frame.label:
        lines.append(f"label {frame.label}")
    for i in range(dm.rows):
        lines.append(" ".join(_fmt_entry(dm.data[i, j], complex_flag) for j in range(dm.cols)))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_matrix(path) -> Frame:
    text = Path(path).read_text(encoding="ascii").splitlines()
    if not text:
        raise InvalidParameterError(f"{path}: empty file")
    _check_magic(text[0], MATRIX_MAGIC, path)
    rows = cols = None
    complex_flag = False
    label = ""
    pos = 1
    while pos < len(text):
        line = text[pos]
        key, _, value = line.partition(" ")
        if key == "rows":
            rows = int(value)
        elif key == "cols":
            cols = int(value)
        elif key == "complex":
            complex_flag = bool(int(value))
        elif key == "label":
            label = value
        else:
            break
        pos += 1
    if rows is None or cols is None:
        raise InvalidParameterError(f"{path}: missing rows/cols header")
    if len(text) - pos < rows:
        raise InvalidParameterError(f"{path}: expected {rows} data rows")
    data = np.zeros((rows, cols), dtype=np.complex128)
    for i in range(rows):
        tokens = text[pos + i].split()
        if len(tokens) != cols:
            raise InvalidParameterError(f"{path}: row {i} has {len(tokens)} entries, wanted {cols}")
        data[i] = [complex(tok) if complex_flag else float(tok) for tok in tokens]
    return Frame(DenseMatrix(data), label=label)


def write_steiner(path, system: SteinerSystem) -> None:
    lines = [f"{STEINER_MAGIC} {FORMAT_VERSION}", f"{system.v} {system.k}"]
    lines.extend(" ".join(str(x) for x in block) for block in system.blocks)
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_steiner(path) -> SteinerSystem:
    text = Path(path).read_text(encoding="ascii").splitlines()
    if len(text) < 2:
        raise InvalidParameterError(f"{path}: truncated design file")
    _check_magic(text[0], STEINER_MAGIC, path)
    v, k = (int(x) for x in text[1].split())
    blocks = tuple(tuple(int(x) for x in line.split()) for line in text[2:] if line.strip())
    return SteinerSystem(v, k, blocks)


def write_graph(path, g: SimpleGraph) -> None:
    lines = [f"{GRAPH_MAGIC} {FORMAT_VERSION}", f"vertices {g.n}"]
    lines.extend(f"{v}: " + " ".join(str(w) for w in g.neighbors(v)) for v in range(g.n))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_graph(path) -> SimpleGraph:
    text = Path(path).read_text(encoding="ascii").splitlines()
    if len(text) < 2:
        raise InvalidParameterError(f"{path}: truncated graph file")
    _check_magic(text[0], GRAPH_MAGIC, path)
    key, _, value = text[1].partition(" ")
    if key != "vertices":
        raise InvalidParameterError(f"{path}: missing vertex count")
    n = int(value)
    edges = []
    for line in text[2:]:
        if not line.strip():
            continue
        head, _, rest = line.partition(":")
        v = int(head)
        for w in rest.split():
            edges.append((v, int(w)))
    return SimpleGraph.from_edges(n, edges)


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class ReportWriter:
    """Accumulates a key-value report with comment-only timing lines."""

    def __init__(self, tool_version: str):
        self._lines: list[str] = [f"{REPORT_MAGIC} {FORMAT_VERSION}", f"tool: ripcert {tool_version}"]

    def section(self, name: str) -> None:
        self._lines.append(f"[{name}]")

    def kv(self, key: str, value) -> None:
        self._lines.append(f"{key}: {self.render(value)}")

    def comment(self, text: str) -> None:
        self._lines.append(f"# {text}")

    @staticmethod
    def render(value) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return repr(float(value))
        if isinstance(value, (np.floating,)):
            return repr(float(value))
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, (tuple, list)):
            return ",".join(ReportWriter.render(v) for v in value)
        if value is None:
            return "none"
        return str(value)

    def text(self) -> str:
        return "\n".join(self._lines) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.text(), encoding="ascii")


def report_body(text: str) -> str:
    """Report text without comment lines (the reproducible part)."""
    return "\n".join(line for line in text.splitlines() if not line.startswith("# ")) + "\n"
