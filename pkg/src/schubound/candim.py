"""Canonical-dimension upper bounds from multiplicity-free divisor products.

For a split semisimple simply connected group, a multiplicity-free product
[D_1]^{n_1} ... [D_r]^{n_r} of Schubert divisor classes certifies the upper
bound dim(G/B) - (n_1 + ... + n_r) on the canonical 0-dimension of the group.
This module turns a search result into that bound, attaches the known
reference values for labeled types as a consistency check, and serializes the
report. The bound is only ever reported as an upper bound; exactness claims
would need a matching lower bound, which is out of scope here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .cartan import parse_label
from .errors import InvalidDegree, SchuboundError
from .rootsys import RootSystem
from .search import SearchResult

REPORT_VERSION = "schubound-0.1.0"

# JSON schema for the bound report, usable with jsonschema validators.
BOUND_REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "label",
        "rank",
        "dim_flag",
        "max_mf_degree",
        "bound",
        "exhaustive",
        "witness",
        "reference",
        "stats",
        "version",
    ],
    "properties": {
        "label": {"type": "string"},
        "rank": {"type": "integer", "minimum": 1},
        "dim_flag": {"type": "integer", "minimum": 1},
        "max_mf_degree": {"type": "integer", "minimum": 0},
        "bound": {"type": "integer", "minimum": 0},
        "exhaustive": {"type": "boolean"},
        "witness": {
            "type": "object",
            "required": ["degrees", "word"],
            "properties": {
                "degrees": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "word": {"type": "string"},
            },
        },
        "reference": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {
                    "enum": ["exact", "paper_bound", "external_no_value", "none"]
                },
                "value": {"type": "integer"},
                "note": {"type": "string"},
            },
        },
        "stats": {
            "type": "object",
            "required": ["seconds", "peak_bytes"],
            "properties": {
                "seconds": {"type": "number"},
                "peak_bytes": {"type": "integer"},
            },
        },
        "version": {"type": "string"},
    },
}


@dataclass(frozen=True)
class ReferenceEntry:
    kind: str  # "exact" | "paper_bound" | "external_no_value" | "none"
    value: int | None = None
    note: str = ""


def reference_table(label: str | None) -> ReferenceEntry:
    """Known canonical-dimension facts for labeled types.

    ``exact`` entries are literature values the computed bound must dominate;
    ``paper_bound`` entries are the published upper bounds this engine is
    expected to reproduce exhaustively; ``external_no_value`` marks families
    whose known results are not stored as a single number here.
    """
    if label is None:
        return ReferenceEntry("none", note="no reference data for custom Cartan matrices")
    family, rank = parse_label(label)
    if family == "A":
        return ReferenceEntry("exact", 0, "canonical dimension is zero in type A")
    if family == "C":
        return ReferenceEntry("exact", 0, "canonical dimension is zero in type C")
    if family == "G":
        return ReferenceEntry("exact", 3, "canonical dimension of the G2 group is 3")
    if family == "E":
        value = {6: 17, 7: 37, 8: 86}[rank]
        return ReferenceEntry("paper_bound", value, "published upper bound for type E")
    if family in ("B", "D"):
        return ReferenceEntry(
            "external_no_value",
            note="literature values for orthogonal/spin groups are not tabulated here",
        )
    return ReferenceEntry("external_no_value", note="no reference value tabulated")


def candim_upper_bound(dim_flag: int, n: int) -> int:
    """dim(G/B) - N, the certified upper bound on the canonical 0-dimension."""
    if not 0 <= n <= dim_flag:
        raise InvalidDegree(f"need 0 <= N <= {dim_flag}, got {n}")
    return dim_flag - n


@dataclass(frozen=True)
class BoundReport:
    label: str
    rank: int
    dim_flag: int
    max_mf_degree: int
    bound: int
    exhaustive: bool
    witness_degrees: tuple[int, ...]
    witness_word: str
    reference: ReferenceEntry
    seconds: float
    peak_bytes: int
    version: str = REPORT_VERSION

    def to_json_dict(self) -> dict:
        reference: dict = {"kind": self.reference.kind}
        if self.reference.value is not None:
            reference["value"] = self.reference.value
        if self.reference.note:
            reference["note"] = self.reference.note
        return {
            "label": self.label,
            "rank": self.rank,
            "dim_flag": self.dim_flag,
            "max_mf_degree": self.max_mf_degree,
            "bound": self.bound,
            "exhaustive": self.exhaustive,
            "witness": {
                "degrees": list(self.witness_degrees),
                "word": self.witness_word,
            },
            "reference": reference,
            "stats": {"seconds": self.seconds, "peak_bytes": self.peak_bytes},
            "version": self.version,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=True)

    @staticmethod
    def from_json_dict(data: dict) -> "BoundReport":
        ref = data["reference"]
        return BoundReport(
            label=data["label"],
            rank=data["rank"],
            dim_flag=data["dim_flag"],
            max_mf_degree=data["max_mf_degree"],
            bound=data["bound"],
            exhaustive=data["exhaustive"],
            witness_degrees=tuple(data["witness"]["degrees"]),
            witness_word=data["witness"]["word"],
            reference=ReferenceEntry(
                ref["kind"], ref.get("value"), ref.get("note", "")
            ),
            seconds=data["stats"]["seconds"],
            peak_bytes=data["stats"]["peak_bytes"],
            version=data["version"],
        )


def build_bound_report(
    rs: RootSystem,
    result: SearchResult,
    seconds: float | None = None,
    peak_bytes: int | None = None,
) -> BoundReport:
    """Assemble the report and enforce the reference-consistency invariants."""
    label = rs.label or f"custom-r{rs.rank}"
    bound = candim_upper_bound(rs.dim_flag, result.n)
    reference = reference_table(rs.label)
    if reference.kind == "exact" and bound < reference.value:
        raise SchuboundError(
            f"computed bound {bound} undercuts the known exact value "
            f"{reference.value} for {label}; this indicates an engine bug"
        )
    if peak_bytes is None:
        peak_bytes = _peak_rss_bytes()
    return BoundReport(
        label=label,
        rank=rs.rank,
        dim_flag=rs.dim_flag,
        max_mf_degree=result.n,
        bound=bound,
        exhaustive=result.exhaustive,
        witness_degrees=result.witness.degrees,
        witness_word=result.witness.word,
        reference=reference,
        seconds=round(result.stats.seconds if seconds is None else seconds, 3),
        peak_bytes=peak_bytes,
    )


def _peak_rss_bytes() -> int:
    try:
        import resource

        return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
    except Exception:
        return 0
