"""Truth classifications and the lattice of theories.

A truth classification pairs a finite model set with a finite sentence
pool under satisfaction.  Closing a theory keeps exactly the pool
sentences true in every model of the theory; the closed theories are the
intents of the incidence relation and form a complete lattice under the
order "more models, fewer sentences" (reverse theory inclusion).  The
join of two closed theories is their intersection; the meet is the pool
theory of their common models.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import fca
from .errors import PoolMembershipError, SignatureMismatchError
from .logic import (
    DEFAULT_MODEL_CAP,
    Formula,
    Signature,
    Structure,
    canonicalize,
    enumerate_structures,
    free_vars,
    satisfies,
    sentence_key,
    theory_of,
    validate_formula,
)


@dataclass(frozen=True)
class Theory:
    """A signature together with a finite set of closed axioms."""

    signature: Signature
    axioms: frozenset[Formula]

    def __post_init__(self) -> None:
        object.__setattr__(self, "axioms", frozenset(canonicalize(a) for a in self.axioms))
        for a in self.axioms:
            if free_vars(a):
                raise ValueError(f"axiom {sentence_key(a)!r} is not closed")
            validate_formula(self.signature, a)

    @classmethod
    def make(cls, sig: Signature, axioms: Iterable[Formula]) -> "Theory":
        return cls(sig, frozenset(axioms))


def _as_axioms(theory: "Theory | Iterable[Formula]") -> frozenset[Formula]:
    if isinstance(theory, Theory):
        return theory.axioms
    return frozenset(canonicalize(a) for a in theory)


@dataclass(frozen=True)
class ClosedTheory(Theory):
    """A theory whose axiom set is an intent of a truth classification."""

    def keys(self) -> tuple[str, ...]:
        return tuple(sorted(sentence_key(a) for a in self.axioms))


@dataclass(frozen=True)
class TruthClassification:
    """Models as instances, pool sentences as types, satisfaction as incidence.

    Instance ids are model positions; type ids are the canonical printed
    sentences, so the underlying classification is directly exportable.
    """

    signature: Signature
    models: tuple[Structure, ...]
    pool: tuple[Formula, ...]
    classification: fca.Classification

    def __post_init__(self) -> None:
        by_key = {sentence_key(s): s for s in self.pool}
        object.__setattr__(self, "_by_key", by_key)
        object.__setattr__(self, "_pool_set", frozenset(self.pool))

    @property
    def pool_keys(self) -> tuple[str, ...]:
        return self.classification.types

    def in_pool(self, sentence: Formula) -> bool:
        return canonicalize(sentence) in self._pool_set

    def sentence(self, key: str) -> Formula:
        try:
            return self._by_key[key]
        except KeyError:
            raise ValueError(f"no pool sentence with key {key!r}") from None

    def models_of(self, axioms: Iterable[Formula]) -> frozenset[int]:
        """Indices of the models satisfying every axiom (pool-free)."""
        out = set(range(len(self.models)))
        for a in axioms:
            a = canonicalize(a)
            key = sentence_key(a)
            if key in self._by_key:
                out &= {i for i in out if (i, key) in self.classification.incidence}
            else:
                out &= {i for i in out if satisfies(self.models[i], a)}
        return frozenset(out)

    def pool_theory_of(self, model_indices: Iterable[int]) -> frozenset[Formula]:
        """Pool sentences true in every listed model."""
        keys = fca.derive_types(self.classification, model_indices)
        return frozenset(self._by_key[k] for k in keys)


def build_truth_classification(
    sig: Signature,
    pool: Iterable[Formula],
    *,
    models: Sequence[Structure] | None = None,
    carriers: Mapping[str, Sequence[str]] | None = None,
    model_cap: int = DEFAULT_MODEL_CAP,
) -> TruthClassification:
    """Materialize satisfaction between a model set and a sentence pool.

    Exactly one of ``models`` (an explicit, duplicate-free list) and
    ``carriers`` (enumerate every structure over the fixed carriers) must
    be given.  The model set must be nonempty; the pool may be empty.
    """
    if (models is None) == (carriers is None):
        raise ValueError("exactly one of models and carriers must be given")
    if carriers is not None:
        model_list = enumerate_structures(sig, carriers, cap=model_cap)
    else:
        model_list = list(models)
        for m in model_list:
            if m.signature != sig:
                raise SignatureMismatchError("model over a different signature")
        if len(set(model_list)) != len(model_list):
            raise ValueError("duplicate structures in the model list")
    if not model_list:
        raise ValueError("empty model set; the lattice of theories degenerates")

    seen: set[Formula] = set()
    pool_list: list[Formula] = []
    for s in pool:
        s = canonicalize(s)
        if free_vars(s):
            raise ValueError(f"pool sentence {sentence_key(s)!r} is not closed")
        validate_formula(sig, s)
        if s not in seen:
            seen.add(s)
            pool_list.append(s)

    keys = [sentence_key(s) for s in pool_list]
    incidence = {
        (i, k)
        for i, m in enumerate(model_list)
        for k, s in zip(keys, pool_list)
        if satisfies(m, s)
    }
    ctx = fca.Classification(tuple(range(len(model_list))), tuple(keys), frozenset(incidence))
    return TruthClassification(sig, tuple(model_list), tuple(pool_list), ctx)


def _require_pool(tc: TruthClassification, axioms: Iterable[Formula], context: str) -> frozenset[str]:
    keys = set()
    for a in axioms:
        a = canonicalize(a)
        if not tc.in_pool(a):
            raise PoolMembershipError(sentence_key(a), context)
        keys.add(sentence_key(a))
    return frozenset(keys)


def closure(tc: TruthClassification, theory: Theory | Iterable[Formula]) -> ClosedTheory:
    """The pool sentences true in every model of the theory.

    Axioms must come from the pool; this is the double-prime closure of
    the underlying classification.
    """
    axioms = _as_axioms(theory)
    keys = _require_pool(tc, axioms, "closure is pool-relative")
    extent = fca.derive_instances(tc.classification, keys)
    intent = fca.derive_types(tc.classification, extent)
    return ClosedTheory(tc.signature, frozenset(tc.sentence(k) for k in intent))


def entails(tc: TruthClassification, theory: Theory | Iterable[Formula], sentence: Formula) -> bool:
    """Semantic entailment over the classification's model set.

    Neither the axioms nor the query sentence need to be pool members;
    the check runs satisfaction directly where needed.
    """
    sentence = canonicalize(sentence)
    if free_vars(sentence):
        raise ValueError(f"query {sentence_key(sentence)!r} is not closed")
    validate_formula(tc.signature, sentence)
    models = tc.models_of(_as_axioms(theory))
    key = sentence_key(sentence)
    if key in tc.pool_keys:
        return all((i, key) in tc.classification.incidence for i in models)
    return all(satisfies(tc.models[i], sentence) for i in models)


def theory_leq(tc: TruthClassification, t1: Theory | Iterable[Formula], t2: Theory | Iterable[Formula]) -> bool:
    """The theory order: t1 is below t2 when t1's closure contains t2's."""
    return closure(tc, t1).axioms >= closure(tc, t2).axioms


@dataclass(frozen=True)
class TheoryLattice:
    """All closed theories of a truth classification, ordered by reverse inclusion.

    Theories are listed parallel to the underlying concept lattice; the
    first entry is the bottom (maximal axiom set, fewest models), the last
    is the top (the closure of the empty theory).
    """

    tc: TruthClassification
    lattice: fca.ConceptLattice
    theories: tuple[ClosedTheory, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        self._cache["index"] = {t.axioms: k for k, t in enumerate(self.theories)}

    def __contains__(self, theory: ClosedTheory) -> bool:
        return (
            isinstance(theory, ClosedTheory)
            and theory.signature == self.tc.signature
            and theory.axioms in self._cache["index"]
        )

    def index(self, theory: ClosedTheory) -> int:
        if theory not in self:
            raise ValueError("foreign theory: not a closed theory of this lattice")
        return self._cache["index"][theory.axioms]

    @property
    def pool(self) -> tuple[Formula, ...]:
        return self.tc.pool

    @property
    def bottom(self) -> ClosedTheory:
        return self.theories[0]

    @property
    def top(self) -> ClosedTheory:
        return self.theories[-1]

    def leq(self, t1: ClosedTheory, t2: ClosedTheory) -> bool:
        """Lattice order: t1 below t2 iff t1's axioms contain t2's."""
        self.index(t1)
        self.index(t2)
        return t1.axioms >= t2.axioms

    def extent(self, theory: ClosedTheory) -> frozenset[int]:
        """The indices of the models satisfying the theory."""
        return self.lattice.concepts[self.index(theory)].extent

    def closure(self, axioms: Theory | Iterable[Formula]) -> ClosedTheory:
        return closure(self.tc, axioms)


def theory_lattice(tc: TruthClassification, concept_cap: int = fca.DEFAULT_CONCEPT_CAP) -> TheoryLattice:
    """Enumerate every closed theory of the classification."""
    lat = fca.concept_lattice(tc.classification, cap=concept_cap)
    theories = tuple(
        ClosedTheory(tc.signature, frozenset(tc.sentence(k) for k in c.intent))
        for c in lat.concepts
    )
    return TheoryLattice(tc, lat, theories)


def extremes(lat: TheoryLattice) -> tuple[ClosedTheory, ClosedTheory]:
    """(top, bottom): the closure of nothing, and the closure of the whole pool."""
    return lat.top, lat.bottom


def theory_join(lat: TheoryLattice, t1: ClosedTheory, t2: ClosedTheory) -> ClosedTheory:
    """Supremum: the intersection of the two theories (always closed)."""
    lat.index(t1)
    lat.index(t2)
    joined = ClosedTheory(lat.tc.signature, t1.axioms & t2.axioms)
    if joined not in lat:
        raise RuntimeError(
            f"join of closed theories is not closed: {joined.keys()}"
        )
    return joined


def theory_meet(lat: TheoryLattice, t1: ClosedTheory, t2: ClosedTheory) -> ClosedTheory:
    """Infimum: the theory of the common models.

    Computed both as the closure of the union of axioms and as the pool
    theory of the intersected model sets; the two must agree.
    """
    lat.index(t1)
    lat.index(t2)
    via_closure = closure(lat.tc, t1.axioms | t2.axioms)
    common = lat.extent(t1) & lat.extent(t2)
    via_models = lat.tc.pool_theory_of(common)
    if via_closure.axioms != via_models:
        raise RuntimeError(
            "meet mismatch between closure of union and theory of common models: "
            f"{sorted(map(sentence_key, via_closure.axioms))} vs "
            f"{sorted(map(sentence_key, via_models))}"
        )
    return via_closure


def object_concept(tc: TruthClassification, model: int | Structure) -> ClosedTheory:
    """The theory of a model: the pool sentences it satisfies."""
    if isinstance(model, Structure):
        try:
            model = tc.models.index(model)
        except ValueError:
            raise ValueError("unknown model: not in this classification") from None
    if not 0 <= model < len(tc.models):
        raise ValueError(f"unknown model index {model}")
    return ClosedTheory(tc.signature, frozenset(theory_of(tc.models[model], tc.pool)))


def attribute_concept(tc: TruthClassification, sentence: Formula) -> ClosedTheory:
    """The entailment theory of a pool sentence: the closure of itself alone."""
    sentence = canonicalize(sentence)
    if not tc.in_pool(sentence):
        raise ValueError(f"unknown sentence {sentence_key(sentence)!r}: not in the pool")
    return closure(tc, [sentence])


def generator_concepts(tc: TruthClassification, x: int | Structure | Formula) -> ClosedTheory:
    """Dispatch to the object concept (models) or attribute concept (sentences)."""
    if isinstance(x, (int, Structure)):
        return object_concept(tc, x)
    return attribute_concept(tc, x)


def lattice_text(lat: TheoryLattice) -> str:
    """Line-oriented export: one record per closed theory, sorted fields.

    ``covers`` lists the immediately smaller theories (more axioms),
    ``covered-by`` the immediately larger ones, by record id.
    """
    edges = lat.lattice.covers()
    lines = [f"closed theories: {len(lat.theories)}", f"models: {len(lat.tc.models)}"]
    for k, theory in enumerate(lat.theories):
        lines.append("")
        lines.append(f"theory {k}")
        axioms = "; ".join(theory.keys()) if theory.axioms else "(none)"
        lines.append(f"  axioms: {axioms}")
        extent = " ".join(map(str, sorted(lat.lattice.concepts[k].extent)))
        lines.append(f"  models: {extent if extent else '(none)'}")
        below = " ".join(str(low) for low, high in edges if high == k)
        above = " ".join(str(high) for low, high in edges if low == k)
        lines.append(f"  covers: {below if below else '(none)'}")
        lines.append(f"  covered-by: {above if above else '(none)'}")
    return "\n".join(lines) + "\n"
