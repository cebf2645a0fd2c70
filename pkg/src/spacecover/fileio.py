"""Parsing and serialization of the SCPM v1 instance format and JSON result reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .gf2 import Gf2Matrix
from .instances import DualInstance, PrimalInstance, SpaceCoverInstance
from .multigraph import MultiGraph

__all__ = [
    "parse_instance",
    "parse_file",
    "serialize_instance",
    "ResultReport",
    "report_from_solution",
    "parse_report",
    "verify_report",
]

MAGIC = "SCPM v1"


class FormatError(ValueError):
    """Raised on any malformed SCPM input."""


def parse_instance(text: str) -> SpaceCoverInstance:
    """Parse the SCPM v1 text format.

    Layout: magic line, ``mode primal|dual``, ``n <n> m <m> k <k>``, m lines
    ``edge u v``, ``pert <count>`` followed by ``<row> <bitstring>`` lines
    (bitstrings have length m, columns in edge order), then ``terminals i...``
    listing terminal edge indices.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != MAGIC:
        raise FormatError("missing magic line %r" % MAGIC)
    idx = 1

    def take() -> str:
        nonlocal idx
        if idx >= len(lines):
            raise FormatError("unexpected end of input")
        ln = lines[idx]
        idx += 1
        return ln

    mode_line = take().split()
    if len(mode_line) != 2 or mode_line[0] != "mode" or mode_line[1] not in ("primal", "dual"):
        raise FormatError("bad mode line")
    mode = mode_line[1]
    header = take().split()
    if len(header) != 6 or header[0] != "n" or header[2] != "m" or header[4] != "k":
        raise FormatError("bad size line")
    try:
        n, m, k = int(header[1]), int(header[3]), int(header[5])
    except ValueError as exc:
        raise FormatError("non-integer size") from exc
    g = MultiGraph(n)
    for _ in range(m):
        parts = take().split()
        if len(parts) != 3 or parts[0] != "edge":
            raise FormatError("bad edge line")
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise FormatError("non-integer endpoint") from exc
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError("endpoint out of range")
        g.add_edge(u, v)
    pert = take().split()
    if len(pert) != 2 or pert[0] != "pert":
        raise FormatError("bad pert line")
    count = int(pert[1])
    row_bits = [0] * n
    for _ in range(count):
        parts = take().split()
        if len(parts) != 2:
            raise FormatError("bad perturbation row line")
        row = int(parts[0])
        bits = parts[1]
        if not (0 <= row < n) or len(bits) != m or set(bits) - {"0", "1"}:
            raise FormatError("bad perturbation row")
        row_bits[row] ^= int(bits[::-1], 2) if m else 0
    term_line = take().split()
    if term_line[0] != "terminals":
        raise FormatError("bad terminals line")
    terminals = [int(x) for x in term_line[1:]]
    for t in terminals:
        if not (0 <= t < m):
            raise FormatError("terminal index out of range")
    if idx != len(lines):
        raise FormatError("trailing content")
    p = Gf2Matrix(n, m, row_bits)
    cls = PrimalInstance if mode == "primal" else DualInstance
    return cls(g, p, terminals, k)


def parse_file(path: str) -> SpaceCoverInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def serialize_instance(inst: SpaceCoverInstance) -> str:
    """Inverse of parse_instance; round-trips every valid instance."""
    eids = inst.graph.edge_ids()
    out = [MAGIC, "mode %s" % inst.mode,
           "n %d m %d k %d" % (inst.graph.n, len(eids), inst.k)]
    for eid in eids:
        u, v = inst.graph.endpoints(eid)
        out.append("edge %d %d" % (u, v))
    rows = [(i, inst.p.row(i)) for i in range(inst.p.rows)
            if inst.p.row(i).bits]
    out.append("pert %d" % len(rows))
    for i, row in rows:
        out.append("%d %s" % (i, row.to_string()))
    out.append("terminals %s" % " ".join(str(inst.col_of[e]) for e in inst.terminals))
    return "\n".join(out) + "\n"


@dataclass
class ResultReport:
    """Machine-readable outcome of one solve run."""

    mode: str
    answer: str                      # "yes" or "no"
    f_edges: Optional[List[int]] = None
    k: int = 0
    solver_ms: float = 0.0
    oracle_answer: Optional[str] = None
    certificate: Optional[Dict] = None
    stats: Dict[str, int] = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "mode": self.mode,
            "answer": self.answer,
            "k": self.k,
            "solver_ms": round(self.solver_ms, 3),
            "stats": self.stats,
        }
        if self.f_edges is not None:
            payload["f"] = sorted(self.f_edges)
        if self.oracle_answer is not None:
            payload["oracle_answer"] = self.oracle_answer
        if self.certificate is not None:
            payload["certificate"] = self.certificate
        return json.dumps(payload, sort_keys=True)


def report_from_solution(inst: SpaceCoverInstance, result,
                         solver_ms: float = 0.0,
                         stats: Optional[Dict[str, int]] = None) -> ResultReport:
    """Build a report (with certificate payload) from a solver's return value."""
    stats = dict(stats or {})
    if result is None:
        return ResultReport(mode=inst.mode, answer="no", k=inst.k,
                            solver_ms=solver_ms, stats=stats)
    f_set, cert = result
    edge_of = {c: e for e, c in inst.col_of.items()}
    if inst.mode == "primal":
        parts = {str(edge_of[w]): sorted(edge_of[c] for c in part)
                 for w, part in cert.parts.items()}
        payload = {"type": "span", "parts": parts}
    else:
        parts = {str(edge_of[w]): {"edges": sorted(edge_of[c] for c in cc.edge_set),
                                   "x": sorted(cc.x)}
                 for w, cc in cert.items()}
        payload = {"type": "cocycle", "parts": parts}
    return ResultReport(mode=inst.mode, answer="yes", f_edges=sorted(f_set),
                        k=inst.k, solver_ms=solver_ms, certificate=payload,
                        stats=stats)


def parse_report(text: str) -> ResultReport:
    """Parse a JSON result report; raises FormatError on malformed input."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError("bad report JSON: %s" % exc) from exc
    if not isinstance(payload, dict):
        raise FormatError("report must be a JSON object")
    mode = payload.get("mode")
    answer = payload.get("answer")
    if mode not in ("primal", "dual") or answer not in ("yes", "no"):
        raise FormatError("report needs a valid mode and answer")
    return ResultReport(mode=mode, answer=answer,
                        f_edges=payload.get("f"), k=int(payload.get("k", 0)),
                        solver_ms=float(payload.get("solver_ms", 0.0)),
                        oracle_answer=payload.get("oracle_answer"),
                        certificate=payload.get("certificate"),
                        stats=payload.get("stats", {}))


def verify_report(inst: SpaceCoverInstance, report: ResultReport) -> Optional[str]:
    """Independently re-verify a yes-report against its instance.

    Returns None on success or a message naming the first failure; the check
    uses only GF(2) column/row arithmetic, never the solvers.
    """
    if report.mode != inst.mode:
        raise FormatError("mode mismatch: report %s vs instance %s"
                          % (report.mode, inst.mode))
    if report.answer == "no":
        return None
    if report.f_edges is None or report.certificate is None:
        return "yes-report missing witness or certificate"
    f_set = set(report.f_edges)
    if len(f_set) > inst.k:
        return "witness exceeds budget k=%d" % inst.k
    if f_set & set(inst.terminals):
        return "witness contains a terminal edge"
    for e in f_set:
        if not inst.graph.has_edge(e):
            return "witness edge %d is not in the graph" % e
    cert = report.certificate
    want_type = "span" if inst.mode == "primal" else "cocycle"
    if cert.get("type") != want_type:
        return "certificate type %r does not match mode" % cert.get("type")
    parts = cert.get("parts", {})
    a = inst.a_matrix
    for term in inst.terminals:
        part = parts.get(str(term))
        if part is None:
            return "terminal %d has no certificate entry" % term
        if inst.mode == "primal":
            if not set(part) <= f_set:
                return "terminal %d cites edges outside the witness" % term
            acc = 0
            for e in part:
                acc ^= a.column(inst.col_of[e]).bits
            if acc != a.column(inst.col_of[term]).bits:
                return "terminal %d: cited columns do not sum to it" % term
        else:
            edges = set(part.get("edges", []))
            x = part.get("x", [])
            if term not in edges:
                return "terminal %d missing from its cocycle" % term
            if not (edges - {term}) <= f_set:
                return "terminal %d cites edges outside the witness" % term
            acc = 0
            for v in x:
                if not 0 <= v < a.rows:
                    return "terminal %d: vertex %d out of range" % (term, v)
                acc ^= a.row_bits[v]
            char = 0
            for e in edges:
                if not inst.graph.has_edge(e):
                    return "terminal %d cites a missing edge" % term
                char |= 1 << inst.col_of[e]
            if acc != char:
                return "terminal %d: row sum is not its cocycle vector" % term
    return None
