"""Verdict trees separating computed facts from imported theorems."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

SCHEMA_VERSION = 1
CERTIFIED = "CERTIFIED"
NOT_CERTIFIED = "NOT CERTIFIED"


@dataclass
class Node:
    name: str
    kind: str  # "computed" or "axiom"
    passed: bool
    witness: Any = None
    cite: str | None = None

    def __post_init__(self):
        if self.kind not in ("computed", "axiom"):
            raise ValueError(f"unknown node kind {self.kind!r}")
        if self.kind == "axiom" and not self.cite:
            raise ValueError(f"axiom node {self.name!r} needs a citation")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "verdict": "pass" if self.passed else "fail",
            "witness": self.witness,
            "cite": self.cite,
        }


def computed(name: str, passed: bool, witness: Any = None) -> Node:
    return Node(name, "computed", bool(passed), witness)


def axiom(name: str, cite: str, applicable: bool, witness: Any = None) -> Node:
    return Node(name, "axiom", bool(applicable), witness, cite)


@dataclass
class Certificate:
    theorem: str
    surface: dict
    nodes: list[Node] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(n.passed for n in self.nodes)

    @property
    def verdict(self) -> str:
        return CERTIFIED if self.passed else NOT_CERTIFIED

    def node(self, name: str) -> Node:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)

    def failing(self) -> list[str]:
        return [n.name for n in self.nodes if not n.passed]

    def to_json(self) -> dict:
        return {
            "kind": "certificate",
            "version": SCHEMA_VERSION,
            "theorem": self.theorem,
            "surface": self.surface,
            "nodes": [n.to_json() for n in self.nodes],
            "verdict": self.verdict,
        }

    def dumps(self) -> str:
        return dumps(self.to_json())

    def render(self) -> str:
        rows = [f"{self.theorem}  [{self.surface.get('name', '')}]"]
        for n in self.nodes:
            rows.append(f"  {'PASS' if n.passed else 'FAIL'}  {n.kind:<8}  {n.name}")
        rows.append(f"verdict: {self.verdict}")
        return "\n".join(rows)


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def load_schema() -> dict:
    text = resources.files("exocert").joinpath("schema.json").read_text(encoding="utf-8")
    return json.loads(text)


# Imported theorems. Each entry is (node name, citation).
FAMILIES_CONSTRAINT = (
    "families constraint c₁(D_E) ≡ w₂(H⁺(E)) mod 2",
    "families Bauer-Furuta constraint (families Seiberg-Witten theory for spin-c families): "
    "for b₊ ≡ 3 mod 4, b₁ = 0 and SW(X,s) odd, every spin-c family over a compact surface "
    "base satisfies c₁(D_E) = w₂(H⁺(E)) mod 2",
)
REALIZATION = (
    "realization of automorphisms by diffeomorphisms",
    "Lönne (elliptic surfaces, Main Theorem); Ebeling-Okonek (complete intersections, "
    "Theorem 1): for simply connected X with b₊ ≥ 3, an automorphism of Q_X fixing the "
    "canonical spin-c structure and preserving orientation of H⁺ is induced by a diffeomorphism",
)
TOPOLOGICAL_ISOTOPY = (
    "topological isotopy from trivial homology action",
    "Quinn, isotopy of 4-manifolds (with the correction of Gabai-Gay-Hartman-Krushkal-Powell): "
    "a diffeomorphism of a closed simply connected 4-manifold acting trivially on homology "
    "is topologically isotopic to the identity",
)
ELLIPTIC_SW = (
    "Seiberg-Witten basic classes of E(n)_{i,j}",
    "Fintushel-Stern, six lectures, Lecture 2; Nicolaescu, Chapter 3: basic classes "
    "(nij - 2ijk - 2ja - 2ib - i - j)t with SW = (-1)^k C(n-2,k); Gompf-Stipsicz 3.3: "
    "E(n)_{i,j} is minimal for n > 1",
)
CI_GENERAL_TYPE = (
    "minimal general type with odd canonical SW",
    "Gompf-Stipsicz Theorem 3.4.24 (complete intersections with b₊ > 3 are minimal of "
    "general type); Morgan Theorem 7.4.1 (the canonical spin-c structure of a minimal "
    "surface of general type has SW = ±1)",
)
SECTION_NORMAL_BUNDLE = (
    "fixed-point section: s*(c) mod 2 = w₂(N)",
    "the family over T² built from an isotopy of [σ′₁, σ′₂] fixing the ball centre has a "
    "section with normal bundle N flat with monodromy σ₁, σ₂; s*(TE/B) ≅ N and c = c₁(s_E) "
    "reduce mod 2 to w₂(N)",
)
