"""Formal Concept Analysis over finite classifications.

A classification is a binary incidence relation between instances and
types.  The derivation operators form a Galois connection; their fixed
points are the formal concepts, and the complete lattice they form under
the extent order is enumerated here with NextClosure.  Instance and type
embeddings give the join-dense and meet-dense generators, and the basic
theorem round-trip rebuilds the classification from the lattice order.

Instance and type ids are opaque hashable values supplied by the caller.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .errors import ParseError, SizeCapError

DEFAULT_CONCEPT_CAP = 100000

Id = Hashable


@dataclass(frozen=True)
class Classification:
    """Instances, types, and an incidence relation between them."""

    instances: tuple[Id, ...]
    types: tuple[Id, ...]
    incidence: frozenset[tuple[Id, Id]]

    def __post_init__(self) -> None:
        if len(set(self.instances)) != len(self.instances):
            raise ValueError("duplicate instance ids")
        if len(set(self.types)) != len(self.types):
            raise ValueError("duplicate type ids")
        inst, typ = set(self.instances), set(self.types)
        for i, t in self.incidence:
            if i not in inst:
                raise ValueError(f"incidence references unknown instance id {i!r}")
            if t not in typ:
                raise ValueError(f"incidence references unknown type id {t!r}")

    @classmethod
    def make(
        cls,
        instances: Iterable[Id],
        types: Iterable[Id],
        incidence: Iterable[tuple[Id, Id]],
    ) -> "Classification":
        return cls(tuple(instances), tuple(types), frozenset(incidence))

    def holds(self, instance: Id, typ: Id) -> bool:
        return (instance, typ) in self.incidence


def derive_types(ctx: Classification, instances: Iterable[Id]) -> frozenset[Id]:
    """The types incident to every given instance (X-prime)."""
    xs = set(instances)
    unknown = xs - set(ctx.instances)
    if unknown:
        raise ValueError(f"unknown instance id {sorted(map(repr, unknown))[0]}")
    return frozenset(t for t in ctx.types if all((i, t) in ctx.incidence for i in xs))


def derive_instances(ctx: Classification, types: Iterable[Id]) -> frozenset[Id]:
    """The instances incident to every given type (Y-prime)."""
    ys = set(types)
    unknown = ys - set(ctx.types)
    if unknown:
        raise ValueError(f"unknown type id {sorted(map(repr, unknown))[0]}")
    return frozenset(i for i in ctx.instances if all((i, t) in ctx.incidence for t in ys))


@dataclass(frozen=True)
class FormalConcept:
    """A derivation fixed point: extent-prime = intent, intent-prime = extent."""

    extent: frozenset[Id]
    intent: frozenset[Id]


def is_formal_concept(ctx: Classification, extent: Iterable[Id], intent: Iterable[Id]) -> bool:
    xs, ys = frozenset(extent), frozenset(intent)
    return derive_types(ctx, xs) == ys and derive_instances(ctx, ys) == xs


@dataclass(frozen=True)
class ConceptLattice:
    """All formal concepts of a classification under the extent order.

    Concepts are stored in canonical order: by extent size, then by the
    positions of the extent's instances in declaration order.  The first
    concept is the bottom, the last is the top.
    """

    classification: Classification
    concepts: tuple[FormalConcept, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        index = {c: k for k, c in enumerate(self.concepts)}
        if len(index) != len(self.concepts):
            raise ValueError("duplicate concepts")
        self._cache["index"] = index

    def __contains__(self, concept: FormalConcept) -> bool:
        return concept in self._cache["index"]

    def index(self, concept: FormalConcept) -> int:
        try:
            return self._cache["index"][concept]
        except KeyError:
            raise ValueError(f"concept {concept!r} is not in this lattice") from None

    def leq(self, c1: FormalConcept, c2: FormalConcept) -> bool:
        """Subconcept order: smaller extent, equivalently larger intent."""
        self.index(c1)
        self.index(c2)
        return c1.extent <= c2.extent

    @property
    def bottom(self) -> FormalConcept:
        return self.concepts[0]

    @property
    def top(self) -> FormalConcept:
        return self.concepts[-1]

    def instance_concept(self, instance: Id) -> FormalConcept:
        """The embedding of an instance: ({i}'', {i}')."""
        intent = derive_types(self.classification, [instance])
        return FormalConcept(derive_instances(self.classification, intent), intent)

    def type_concept(self, typ: Id) -> FormalConcept:
        """The embedding of a type: ({t}', {t}'')."""
        extent = derive_instances(self.classification, [typ])
        return FormalConcept(extent, derive_types(self.classification, extent))

    def covers(self) -> tuple[tuple[int, int], ...]:
        """Hasse edges as (lower index, upper index) pairs."""
        if "covers" not in self._cache:
            cs = self.concepts
            below = [
                [j for j in range(len(cs)) if j != i and cs[j].extent < cs[i].extent]
                for i in range(len(cs))
            ]
            edges = []
            for i, js in enumerate(below):
                for j in js:
                    if not any(cs[j].extent < cs[k].extent and cs[k].extent < cs[i].extent for k in js):
                        edges.append((j, i))
            self._cache["covers"] = tuple(sorted(edges))
        return self._cache["covers"]


def _canonical_key(ctx: Classification, concept: FormalConcept) -> tuple:
    pos = {i: k for k, i in enumerate(ctx.instances)}
    return (len(concept.extent), tuple(sorted(pos[i] for i in concept.extent)))


def concept_lattice(ctx: Classification, cap: int = DEFAULT_CONCEPT_CAP) -> ConceptLattice:
    """Enumerate all formal concepts (NextClosure over type sets).

    Intents are generated in lectic order, then the concept list is sorted
    canonically.  Raises once more than ``cap`` concepts have been found.
    """
    m = len(ctx.types)
    rows = []
    for i in ctx.instances:
        mask = 0
        for j, t in enumerate(ctx.types):
            if (i, t) in ctx.incidence:
                mask |= 1 << j
        rows.append(mask)
    full = (1 << m) - 1

    def close(y: int) -> int:
        out = full
        for row in rows:
            if row & y == y:
                out &= row
        return out

    intents = []
    y = close(0)
    while True:
        intents.append(y)
        if len(intents) > cap:
            raise SizeCapError("concept enumeration", f"more than {cap}", cap)
        nxt = None
        for i in reversed(range(m)):
            bit = 1 << i
            if y & bit:
                y &= ~bit
            else:
                below = bit - 1
                cand = close(y | bit)
                if cand & below & ~y == 0:
                    nxt = cand
                    break
        if nxt is None:
            break
        y = nxt

    concepts = []
    for y in intents:
        intent = frozenset(t for j, t in enumerate(ctx.types) if y >> j & 1)
        extent = frozenset(i for i, row in zip(ctx.instances, rows) if row & y == y)
        concepts.append(FormalConcept(extent, intent))
    concepts.sort(key=lambda c: _canonical_key(ctx, c))
    return ConceptLattice(ctx, tuple(concepts))


def lattice_meet(lat: ConceptLattice, concepts: Iterable[FormalConcept]) -> FormalConcept:
    """Infimum: intersect extents, close the union of intents.

    The empty meet is the top concept.
    """
    cs = list(concepts)
    for c in cs:
        lat.index(c)
    ctx = lat.classification
    extent = frozenset(ctx.instances)
    for c in cs:
        extent &= c.extent
    return FormalConcept(extent, derive_types(ctx, extent))


def lattice_join(lat: ConceptLattice, concepts: Iterable[FormalConcept]) -> FormalConcept:
    """Supremum: intersect intents, close the union of extents.

    The empty join is the bottom concept.
    """
    cs = list(concepts)
    for c in cs:
        lat.index(c)
    ctx = lat.classification
    intent = frozenset(ctx.types)
    for c in cs:
        intent &= c.intent
    return FormalConcept(derive_instances(ctx, intent), intent)


def basic_theorem_roundtrip(lat: ConceptLattice) -> Classification:
    """Rebuild the classification from the lattice order.

    An instance is incident to a type exactly when the instance's concept
    lies below the type's concept; for a lattice built by
    ``concept_lattice`` this returns the original classification.
    """
    ctx = lat.classification
    incidence = {
        (i, t)
        for i in ctx.instances
        for t in ctx.types
        if lat.instance_concept(i).extent <= lat.type_concept(t).extent
    }
    return Classification(ctx.instances, ctx.types, frozenset(incidence))


def density_report(lat: ConceptLattice) -> tuple[bool, bool]:
    """(join-dense, meet-dense) for the instance and type embeddings."""
    join_dense = all(
        lattice_join(lat, [lat.instance_concept(i) for i in c.extent]) == c
        for c in lat.concepts
    )
    meet_dense = all(
        lattice_meet(lat, [lat.type_concept(t) for t in c.intent]) == c
        for c in lat.concepts
    )
    return join_dense, meet_dense


# ---------------------------------------------------------------------------
# Burmeister .cxt format


def write_cxt(ctx: Classification, name: str = "") -> str:
    """Render in Burmeister format; ids are rendered with str()."""
    obj_names = [str(i) for i in ctx.instances]
    att_names = [str(t) for t in ctx.types]
    for label in itertools.chain(obj_names, att_names):
        if "\n" in label or not label.strip():
            raise ValueError(f"id {label!r} cannot be written as a cxt name")
    lines = ["B", name, str(len(ctx.instances)), str(len(ctx.types)), ""]
    lines.extend(obj_names)
    lines.extend(att_names)
    for i in ctx.instances:
        lines.append("".join("X" if (i, t) in ctx.incidence else "." for t in ctx.types))
    return "\n".join(lines) + "\n"


def read_cxt(text: str, *, path: str | None = None) -> Classification:
    """Parse Burmeister format; instance and type ids are the name strings."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != "B":
        raise ParseError("not a Burmeister context (first line must be 'B')", line=1, path=path)
    pos = 1
    # The name line is optional; counts start at the first integer line.
    if pos < len(lines) and not lines[pos].strip().isdigit():
        pos += 1
    try:
        n_obj = int(lines[pos].strip())
        n_att = int(lines[pos + 1].strip())
    except (IndexError, ValueError):
        raise ParseError("expected object and attribute counts", line=pos + 1, path=path)
    pos += 2
    rest = [
        (lineno, line.strip())
        for lineno, line in enumerate(lines[pos:], start=pos + 1)
        if line.strip()
    ]
    # a context with no attributes has vacuous (empty) rows; skip them
    need = n_obj + n_att + (n_obj if n_att else 0)
    if len(rest) < need:
        raise ParseError(
            f"expected {n_obj} object names, {n_att} attribute names and {n_obj} rows",
            line=len(lines),
            path=path,
        )
    objs = [line for _, line in rest[:n_obj]]
    atts = [line for _, line in rest[n_obj : n_obj + n_att]]
    if len(set(objs)) != n_obj:
        raise ParseError("duplicate object names", path=path)
    if len(set(atts)) != n_att:
        raise ParseError("duplicate attribute names", path=path)
    incidence = set()
    for k in range(n_obj if n_att else 0):
        lineno, row = rest[n_obj + n_att + k]
        if len(row) != n_att or any(ch not in "X.x" for ch in row):
            raise ParseError(
                f"row for object {objs[k]!r} must be {n_att} characters of 'X'/'.'",
                line=lineno,
                path=path,
            )
        for j, ch in enumerate(row):
            if ch in "Xx":
                incidence.add((objs[k], atts[j]))
    return Classification(tuple(objs), tuple(atts), frozenset(incidence))


# ---------------------------------------------------------------------------
# DOT export


def _dot_escape(label: str) -> str:
    return label.replace("\\", "\\\\").replace('"', '\\"')


def lattice_dot(lat: ConceptLattice, name: str = "lattice") -> str:
    """Hasse diagram in DOT, drawn bottom-up with reduced labeling.

    Each node shows only the instances and types whose embeddings land on
    that concept; edges are the covering relation.
    """
    ctx = lat.classification
    attached_types: dict[int, list[str]] = {}
    attached_insts: dict[int, list[str]] = {}
    for t in ctx.types:
        attached_types.setdefault(lat.index(lat.type_concept(t)), []).append(str(t))
    for i in ctx.instances:
        attached_insts.setdefault(lat.index(lat.instance_concept(i)), []).append(str(i))
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    for k in range(len(lat.concepts)):
        parts = []
        if k in attached_types:
            parts.append("t: " + ", ".join(attached_types[k]))
        if k in attached_insts:
            parts.append("i: " + ", ".join(attached_insts[k]))
        label = "\\n".join(_dot_escape(p) for p in parts) if parts else f"c{k}"
        lines.append(f'  c{k} [label="{label}"];')
    for low, high in lat.covers():
        lines.append(f"  c{low} -> c{high};")
    lines.append("}")
    return "\n".join(lines) + "\n"
