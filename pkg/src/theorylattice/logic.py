"""First-order type languages, sentences, finite structures, satisfaction.

A :class:`Signature` declares entity types (sorts), relation types with
sort profiles, and sorted constants.  Sentences are closed well-typed
formulas; bound variables are renamed to canonical depth-indexed names so
alpha-equivalent sentences are structurally equal (and hash equal), which
is what makes sentence pools and theory intents well defined.  Structures
are finite models with nonempty carriers; satisfaction is Tarskian, with
quantifiers ranging over the carrier of the bound sort.  There are no
function symbols and no empty or infinite domains.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ParseError, SignatureMismatchError, SizeCapError

DEFAULT_MODEL_CAP = 2**20

# A finitization parameter: each entity type gets a finite nonempty carrier.
CarrierAssignment = Mapping[str, Sequence[str]]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_KEYWORDS = frozenset({"forall", "exists"})


def _check_name(kind: str, name: str) -> None:
    if not isinstance(name, str) or not _NAME_RE.match(name) or name in _KEYWORDS:
        raise ValueError(f"invalid {kind} name {name!r}")


# ---------------------------------------------------------------------------
# Signatures


@dataclass(frozen=True)
class Signature:
    """A first-order type language: sorts, typed relations, sorted constants.

    Declaration order is preserved; it anchors every deterministic
    enumeration downstream (model enumeration, export order, golden files).
    """

    entity_types: tuple[str, ...] = ()
    relation_types: tuple[tuple[str, tuple[str, ...]], ...] = ()
    constants: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        ents: list[str] = []
        for name in self.entity_types:
            _check_name("entity type", name)
            if name in ents:
                raise ValueError(f"duplicate entity type {name!r}")
            ents.append(name)
        ent_set = frozenset(ents)
        profiles: dict[str, tuple[str, ...]] = {}
        for name, profile in self.relation_types:
            _check_name("relation type", name)
            if name in profiles:
                raise ValueError(f"duplicate relation type {name!r}")
            if not profile:
                raise ValueError(f"relation type {name!r} has an empty profile")
            for sort in profile:
                if sort not in ent_set:
                    raise ValueError(
                        f"relation type {name!r} references undeclared entity type {sort!r}"
                    )
            profiles[name] = tuple(profile)
        const_sorts: dict[str, str] = {}
        for name, sort in self.constants:
            _check_name("constant", name)
            if name in const_sorts:
                raise ValueError(f"duplicate constant {name!r}")
            if sort not in ent_set:
                raise ValueError(f"constant {name!r} references undeclared entity type {sort!r}")
            const_sorts[name] = sort
        object.__setattr__(self, "_ents", ent_set)
        object.__setattr__(self, "_profiles", profiles)
        object.__setattr__(self, "_const_sorts", const_sorts)

    def has_entity_type(self, name: str) -> bool:
        return name in self._ents

    def has_relation(self, name: str) -> bool:
        return name in self._profiles

    def has_constant(self, name: str) -> bool:
        return name in self._const_sorts

    def profile(self, name: str) -> tuple[str, ...]:
        try:
            return self._profiles[name]
        except KeyError:
            raise ValueError(f"unknown relation type {name!r}") from None

    def constant_sort(self, name: str) -> str:
        try:
            return self._const_sorts[name]
        except KeyError:
            raise ValueError(f"unknown constant {name!r}") from None

    @property
    def relation_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.relation_types)

    @property
    def constant_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.constants)


# ---------------------------------------------------------------------------
# Terms and formulas


@dataclass(frozen=True)
class Var:
    name: str
    sort: str


@dataclass(frozen=True)
class Const:
    name: str


Term = Var | Const


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    sort: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    sort: str
    body: "Formula"


Formula = Atom | Eq | Not | And | Or | Implies | Iff | Forall | Exists

_BINARY = (And, Or, Implies, Iff)
_QUANT = (Forall, Exists)


def free_vars(formula: Formula) -> dict[str, str]:
    """Free variable names with their sorts.

    Raises ValueError if the same name occurs free at two different sorts.
    """
    out: dict[str, str] = {}

    def term(t: Term, bound: frozenset[str]) -> None:
        if isinstance(t, Var) and t.name not in bound:
            if out.get(t.name, t.sort) != t.sort:
                raise ValueError(
                    f"variable {t.name!r} occurs free at sorts {out[t.name]!r} and {t.sort!r}"
                )
            out[t.name] = t.sort

    def walk(f: Formula, bound: frozenset[str]) -> None:
        if isinstance(f, Atom):
            for t in f.args:
                term(t, bound)
        elif isinstance(f, Eq):
            term(f.left, bound)
            term(f.right, bound)
        elif isinstance(f, Not):
            walk(f.body, bound)
        elif isinstance(f, _BINARY):
            walk(f.left, bound)
            walk(f.right, bound)
        elif isinstance(f, _QUANT):
            walk(f.body, bound | {f.var})
        else:
            raise TypeError(f"not a formula: {f!r}")

    walk(formula, frozenset())
    return out


def is_sentence(formula: Formula) -> bool:
    return not free_vars(formula)


def canonicalize(formula: Formula) -> Formula:
    """Rename bound variables to depth-indexed names v0, v1, ...

    Alpha-equivalent formulas canonicalize to structurally equal values.
    Free variables keep their names; the canonical name stream skips them,
    so no capture can occur.
    """
    taken = set(free_vars(formula))
    names: list[str] = []
    counter = itertools.count()

    def name_at(depth: int) -> str:
        while len(names) <= depth:
            cand = f"v{next(counter)}"
            if cand not in taken:
                names.append(cand)
        return names[depth]

    def term(t: Term, env: dict[str, str]) -> Term:
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name), t.sort)
        return t

    def walk(f: Formula, env: dict[str, str], depth: int) -> Formula:
        if isinstance(f, Atom):
            return Atom(f.rel, tuple(term(t, env) for t in f.args))
        if isinstance(f, Eq):
            return Eq(term(f.left, env), term(f.right, env))
        if isinstance(f, Not):
            return Not(walk(f.body, env, depth))
        if isinstance(f, _BINARY):
            return type(f)(walk(f.left, env, depth), walk(f.right, env, depth))
        if isinstance(f, _QUANT):
            name = name_at(depth)
            return type(f)(name, f.sort, walk(f.body, {**env, f.var: name}, depth + 1))
        raise TypeError(f"not a formula: {f!r}")

    return walk(formula, {}, 0)


def validate_formula(sig: Signature, formula: Formula, free: Mapping[str, str] | None = None) -> None:
    """Check well-typedness over ``sig``.

    ``free`` declares the free variables the formula may use (name -> sort);
    a sentence passes with the default empty mapping.
    """
    allowed = dict(free or {})
    for name, sort in allowed.items():
        if not sig.has_entity_type(sort):
            raise ValueError(f"free variable {name!r} has undeclared sort {sort!r}")

    def term_sort(t: Term, env: Mapping[str, str]) -> str:
        if isinstance(t, Var):
            if t.name not in env:
                raise ValueError(f"free variable {t.name!r}")
            if env[t.name] != t.sort:
                raise ValueError(
                    f"variable {t.name!r} used at sort {t.sort!r} but bound at {env[t.name]!r}"
                )
            return t.sort
        if not sig.has_constant(t.name):
            raise ValueError(f"unknown constant {t.name!r}")
        return sig.constant_sort(t.name)

    def walk(f: Formula, env: Mapping[str, str]) -> None:
        if isinstance(f, Atom):
            profile = sig.profile(f.rel)
            if len(f.args) != len(profile):
                raise ValueError(
                    f"relation {f.rel!r} expects {len(profile)} arguments, got {len(f.args)}"
                )
            for pos, (t, want) in enumerate(zip(f.args, profile), start=1):
                got = term_sort(t, env)
                if got != want:
                    raise ValueError(
                        f"argument {pos} of {f.rel!r} has sort {got!r}, expected {want!r}"
                    )
        elif isinstance(f, Eq):
            ls, rs = term_sort(f.left, env), term_sort(f.right, env)
            if ls != rs:
                raise ValueError(f"equality between different sorts {ls!r} and {rs!r}")
        elif isinstance(f, Not):
            walk(f.body, env)
        elif isinstance(f, _BINARY):
            walk(f.left, env)
            walk(f.right, env)
        elif isinstance(f, _QUANT):
            if not sig.has_entity_type(f.sort):
                raise ValueError(f"quantifier over undeclared entity type {f.sort!r}")
            walk(f.body, {**env, f.var: f.sort})
        else:
            raise TypeError(f"not a formula: {f!r}")

    walk(formula, allowed)


def substitute(formula: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneously substitute terms for free variables, capture-avoiding.

    Binders whose variable would capture a substituted variable are renamed
    to fresh names first.
    """
    replacement_names = {t.name for t in mapping.values() if isinstance(t, Var)}

    def fresh(avoid: set[str]) -> str:
        for i in itertools.count():
            cand = f"w{i}"
            if cand not in avoid and cand not in replacement_names:
                return cand
        raise AssertionError("unreachable")

    def term(t: Term, m: Mapping[str, Term]) -> Term:
        if isinstance(t, Var) and t.name in m:
            return m[t.name]
        return t

    def walk(f: Formula, m: Mapping[str, Term]) -> Formula:
        if isinstance(f, Atom):
            return Atom(f.rel, tuple(term(t, m) for t in f.args))
        if isinstance(f, Eq):
            return Eq(term(f.left, m), term(f.right, m))
        if isinstance(f, Not):
            return Not(walk(f.body, m))
        if isinstance(f, _BINARY):
            return type(f)(walk(f.left, m), walk(f.right, m))
        if isinstance(f, _QUANT):
            inner = {k: v for k, v in m.items() if k != f.var}
            if not inner:
                return f
            var, body = f.var, f.body
            if var in replacement_names:
                renamed = fresh(set(free_vars(body)) | set(inner))
                body = walk(body, {var: Var(renamed, f.sort)})
                var = renamed
            return type(f)(var, f.sort, walk(body, inner))
        raise TypeError(f"not a formula: {f!r}")

    return walk(formula, dict(mapping))


# ---------------------------------------------------------------------------
# Printing

# Precedence: ~ binds tightest, then & then | then -> (right-assoc) then <->;
# quantifier bodies extend maximally to the right, so a quantified subformula
# is parenthesized whenever it is an operand.
_P_IFF, _P_IMPLIES, _P_OR, _P_AND, _P_NOT, _P_ATOM = 1, 2, 3, 4, 5, 9


def format_term(t: Term) -> str:
    return t.name


def format_formula(formula: Formula) -> str:
    """Render with minimal parentheses; parsing the result restores the AST."""

    def fmt(f: Formula, min_prec: int) -> str:
        if isinstance(f, Atom):
            s, prec = f"{f.rel}({','.join(format_term(t) for t in f.args)})", _P_ATOM
        elif isinstance(f, Eq):
            s, prec = f"{format_term(f.left)} = {format_term(f.right)}", _P_ATOM
        elif isinstance(f, Not):
            s, prec = "~" + fmt(f.body, _P_NOT), _P_NOT
        elif isinstance(f, And):
            s, prec = f"{fmt(f.left, _P_AND)} & {fmt(f.right, _P_AND + 1)}", _P_AND
        elif isinstance(f, Or):
            s, prec = f"{fmt(f.left, _P_OR)} | {fmt(f.right, _P_OR + 1)}", _P_OR
        elif isinstance(f, Implies):
            s, prec = f"{fmt(f.left, _P_IMPLIES + 1)} -> {fmt(f.right, _P_IMPLIES)}", _P_IMPLIES
        elif isinstance(f, Iff):
            s, prec = f"{fmt(f.left, _P_IFF + 1)} <-> {fmt(f.right, _P_IFF)}", _P_IFF
        elif isinstance(f, Forall):
            s, prec = f"forall {f.var}:{f.sort}. {fmt(f.body, 0)}", 0
        elif isinstance(f, Exists):
            s, prec = f"exists {f.var}:{f.sort}. {fmt(f.body, 0)}", 0
        else:
            raise TypeError(f"not a formula: {f!r}")
        return f"({s})" if prec < min_prec else s

    return fmt(formula, 0)


def sentence_key(formula: Formula) -> str:
    """The canonical printed form; the stable identity of a pool member."""
    return format_formula(canonicalize(formula))


# ---------------------------------------------------------------------------
# Parsing


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"<->|->|[~&|().,:=]|[A-Za-z_][A-Za-z0-9_']*")


def _tokenize(text: str, path: str | None = None) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, col = 0, 1, 1
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {ch!r}", line=line, path=path)
        toks.append(_Tok(m.group(), line, col))
        col += m.end() - i
        i = m.end()
    return toks


class _FormulaParser:
    def __init__(self, sig: Signature, toks: list[_Tok], free: Mapping[str, str], path: str | None):
        self.sig = sig
        self.toks = toks
        self.free = dict(free)
        self.path = path
        self.pos = 0

    def error(self, message: str) -> ParseError:
        line = self.toks[self.pos].line if self.pos < len(self.toks) else (
            self.toks[-1].line if self.toks else 1
        )
        return ParseError(message, line=line, path=self.path)

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, text: str) -> bool:
        t = self.peek()
        if t is not None and t.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> None:
        t = self.peek()
        if t is None:
            raise self.error(f"expected {text!r}, found end of input")
        if t.text != text:
            raise self.error(f"expected {text!r}, found {t.text!r}")
        self.pos += 1

    def ident(self, what: str) -> str:
        t = self.peek()
        if t is None:
            raise self.error(f"expected {what}, found end of input")
        if not _NAME_RE.match(t.text) or t.text in _KEYWORDS:
            raise self.error(f"expected {what}, found {t.text!r}")
        self.pos += 1
        return t.text

    def parse(self) -> Formula:
        f = self.formula(dict(self.free))
        t = self.peek()
        if t is not None:
            raise self.error(f"unexpected trailing input {t.text!r}")
        return f

    def formula(self, env: dict[str, str]) -> Formula:
        return self.iff(env)

    def iff(self, env: dict[str, str]) -> Formula:
        left = self.implies(env)
        if self.take("<->"):
            return Iff(left, self.iff(env))
        return left

    def implies(self, env: dict[str, str]) -> Formula:
        left = self.disj(env)
        if self.take("->"):
            return Implies(left, self.implies(env))
        return left

    def disj(self, env: dict[str, str]) -> Formula:
        left = self.conj(env)
        while self.take("|"):
            left = Or(left, self.conj(env))
        return left

    def conj(self, env: dict[str, str]) -> Formula:
        left = self.unary(env)
        while self.take("&"):
            left = And(left, self.unary(env))
        return left

    def unary(self, env: dict[str, str]) -> Formula:
        t = self.peek()
        if t is None:
            raise self.error("expected a formula, found end of input")
        if t.text == "~":
            self.pos += 1
            return Not(self.unary(env))
        if t.text in _KEYWORDS:
            return self.quantified(env)
        if t.text == "(":
            self.pos += 1
            f = self.formula(env)
            self.expect(")")
            return f
        return self.atom_or_eq(env)

    def quantified(self, env: dict[str, str]) -> Formula:
        kw = self.peek()
        assert kw is not None
        self.pos += 1
        var = self.ident("a variable name")
        self.expect(":")
        sort = self.ident("an entity type name")
        if not self.sig.has_entity_type(sort):
            raise self.error(f"undeclared entity type {sort!r}")
        self.expect(".")
        body = self.formula({**env, var: sort})
        cls = Forall if kw.text == "forall" else Exists
        return cls(var, sort, body)

    def term(self, env: dict[str, str]) -> Term:
        name = self.ident("a term")
        return self.resolve_term(name, env)

    def resolve_term(self, name: str, env: dict[str, str]) -> Term:
        if name in env:
            return Var(name, env[name])
        if self.sig.has_constant(name):
            return Const(name)
        raise self.error(f"free variable or unknown constant {name!r}")

    def term_sort(self, t: Term) -> str:
        return t.sort if isinstance(t, Var) else self.sig.constant_sort(t.name)

    def atom_or_eq(self, env: dict[str, str]) -> Formula:
        name = self.ident("a relation application or a term")
        nxt = self.peek()
        if nxt is not None and nxt.text == "(" and self.sig.has_relation(name):
            self.pos += 1
            args = [self.term(env)]
            while self.take(","):
                args.append(self.term(env))
            self.expect(")")
            profile = self.sig.profile(name)
            if len(args) != len(profile):
                raise self.error(
                    f"relation {name!r} expects {len(profile)} arguments, got {len(args)}"
                )
            for pos, (arg, want) in enumerate(zip(args, profile), start=1):
                got = self.term_sort(arg)
                if got != want:
                    raise self.error(
                        f"argument {pos} of {name!r} has sort {got!r}, expected {want!r}"
                    )
            return Atom(name, tuple(args))
        left = self.resolve_term(name, env)
        self.expect("=")
        right = self.term(env)
        ls, rs = self.term_sort(left), self.term_sort(right)
        if ls != rs:
            raise self.error(f"equality between different sorts {ls!r} and {rs!r}")
        return Eq(left, right)


def parse_formula(
    sig: Signature,
    text: str,
    free: Mapping[str, str] | None = None,
    *,
    path: str | None = None,
) -> Formula:
    """Parse a formula whose free variables are exactly declared via ``free``.

    The result is canonicalized (bound variables renamed); free variables
    keep their declared names.
    """
    free = dict(free or {})
    for name, sort in free.items():
        _check_name("variable", name)
        if not sig.has_entity_type(sort):
            raise ValueError(f"free variable {name!r} has undeclared sort {sort!r}")
    parser = _FormulaParser(sig, _tokenize(text, path), free, path)
    return canonicalize(parser.parse())


def parse_sentence(sig: Signature, text: str, *, path: str | None = None) -> Formula:
    """Parse a closed sentence; free variables are a parse error."""
    return parse_formula(sig, text, path=path)


# ---------------------------------------------------------------------------
# Structures


@dataclass(frozen=True)
class Structure:
    """A finite model: carriers per sort, relation extensions, denotations.

    Fields are ordered by signature declaration order; equality is
    structural (including carrier element order, which fixes the tuple
    order used by enumeration).
    """

    signature: Signature
    carriers: tuple[tuple[str, tuple[str, ...]], ...]
    relations: tuple[tuple[str, frozenset[tuple[str, ...]]], ...]
    constants: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        sig = self.signature
        if tuple(name for name, _ in self.carriers) != sig.entity_types:
            raise ValueError("carriers must list every entity type in declaration order")
        carrier_map: dict[str, tuple[str, ...]] = {}
        for sort, elems in self.carriers:
            if not elems:
                raise ValueError(f"carrier of {sort!r} is empty")
            if len(set(elems)) != len(elems):
                raise ValueError(f"carrier of {sort!r} has duplicate elements")
            carrier_map[sort] = tuple(elems)
        if tuple(name for name, _ in self.relations) != sig.relation_names:
            raise ValueError("relations must list every relation type in declaration order")
        rel_map: dict[str, frozenset[tuple[str, ...]]] = {}
        for name, tuples in self.relations:
            profile = sig.profile(name)
            for tup in tuples:
                if len(tup) != len(profile):
                    raise ValueError(f"tuple {tup!r} has wrong arity for relation {name!r}")
                for elem, sort in zip(tup, profile):
                    if elem not in carrier_map[sort]:
                        raise ValueError(
                            f"tuple {tup!r} of relation {name!r} leaves the carrier of {sort!r}"
                        )
            rel_map[name] = frozenset(tuples)
        if tuple(name for name, _ in self.constants) != sig.constant_names:
            raise ValueError("constants must list every constant in declaration order")
        const_map: dict[str, str] = {}
        for name, elem in self.constants:
            sort = sig.constant_sort(name)
            if elem not in carrier_map[sort]:
                raise ValueError(f"constant {name!r} denotes {elem!r} outside its carrier")
            const_map[name] = elem
        object.__setattr__(self, "_carrier", carrier_map)
        object.__setattr__(self, "_relation", rel_map)
        object.__setattr__(self, "_constant", const_map)

    @classmethod
    def make(
        cls,
        sig: Signature,
        carriers: Mapping[str, Sequence[str]],
        relations: Mapping[str, Iterable[Sequence[str]]] | None = None,
        constants: Mapping[str, str] | None = None,
    ) -> "Structure":
        """Build a structure from mappings; missing relations default to empty."""
        relations = dict(relations or {})
        constants = dict(constants or {})
        for sort in carriers:
            if not sig.has_entity_type(sort):
                raise ValueError(f"carrier for undeclared entity type {sort!r}")
        for name in relations:
            if not sig.has_relation(name):
                raise ValueError(f"extension for undeclared relation {name!r}")
        for name in constants:
            if not sig.has_constant(name):
                raise ValueError(f"denotation for undeclared constant {name!r}")
        missing = [sort for sort in sig.entity_types if sort not in carriers]
        if missing:
            raise ValueError(f"missing carriers for entity types {missing}")
        missing = [name for name in sig.constant_names if name not in constants]
        if missing:
            raise ValueError(f"missing denotations for constants {missing}")
        return cls(
            signature=sig,
            carriers=tuple((sort, tuple(carriers[sort])) for sort in sig.entity_types),
            relations=tuple(
                (name, frozenset(tuple(t) for t in relations.get(name, ())))
                for name in sig.relation_names
            ),
            constants=tuple((name, constants[name]) for name in sig.constant_names),
        )

    def carrier(self, sort: str) -> tuple[str, ...]:
        return self._carrier[sort]

    def relation(self, name: str) -> frozenset[tuple[str, ...]]:
        return self._relation[name]

    def constant(self, name: str) -> str:
        return self._constant[name]


def _eval_term(structure: Structure, t: Term, env: Mapping[str, str]) -> str:
    if isinstance(t, Var):
        return env[t.name]
    return structure.constant(t.name)


def _eval(structure: Structure, f: Formula, env: dict[str, str]) -> bool:
    if isinstance(f, Atom):
        tup = tuple(_eval_term(structure, t, env) for t in f.args)
        return tup in structure.relation(f.rel)
    if isinstance(f, Eq):
        return _eval_term(structure, f.left, env) == _eval_term(structure, f.right, env)
    if isinstance(f, Not):
        return not _eval(structure, f.body, env)
    if isinstance(f, And):
        return _eval(structure, f.left, env) and _eval(structure, f.right, env)
    if isinstance(f, Or):
        return _eval(structure, f.left, env) or _eval(structure, f.right, env)
    if isinstance(f, Implies):
        return (not _eval(structure, f.left, env)) or _eval(structure, f.right, env)
    if isinstance(f, Iff):
        return _eval(structure, f.left, env) == _eval(structure, f.right, env)
    if isinstance(f, Forall):
        return all(_eval(structure, f.body, {**env, f.var: e}) for e in structure.carrier(f.sort))
    if isinstance(f, Exists):
        return any(_eval(structure, f.body, {**env, f.var: e}) for e in structure.carrier(f.sort))
    raise TypeError(f"not a formula: {f!r}")


def satisfies(structure: Structure, sentence: Formula) -> bool:
    """Tarskian truth of a closed sentence in a finite structure."""
    fv = free_vars(sentence)
    if fv:
        raise ValueError(f"sentence has free variables: {sorted(fv)}")
    try:
        validate_formula(structure.signature, sentence)
    except ValueError as exc:
        raise SignatureMismatchError(f"sentence does not fit the structure's signature: {exc}")
    return _eval(structure, sentence, {})


def eval_formula(structure: Structure, formula: Formula, env: Mapping[str, str]) -> bool:
    """Truth of an open formula under an assignment of carrier elements."""
    fv = free_vars(formula)
    missing = set(fv) - set(env)
    if missing:
        raise ValueError(f"assignment misses free variables: {sorted(missing)}")
    return _eval(structure, formula, dict(env))


def theory_of(structure: Structure, pool: Iterable[Formula]) -> frozenset[Formula]:
    """The pool sentences true in the structure."""
    return frozenset(s for s in pool if satisfies(structure, s))


# ---------------------------------------------------------------------------
# Bounded model enumeration


def validate_carriers(sig: Signature, carriers: Mapping[str, Sequence[str]]) -> dict[str, tuple[str, ...]]:
    out: dict[str, tuple[str, ...]] = {}
    for sort in sig.entity_types:
        if sort not in carriers:
            raise ValueError(f"missing carrier for entity type {sort!r}")
        elems = tuple(carriers[sort])
        if not elems:
            raise ValueError(f"carrier of {sort!r} is empty")
        if len(set(elems)) != len(elems):
            raise ValueError(f"carrier of {sort!r} has duplicate elements")
        out[sort] = elems
    for sort in carriers:
        if not sig.has_entity_type(sort):
            raise ValueError(f"carrier for undeclared entity type {sort!r}")
    return out


def count_structures(sig: Signature, carriers: Mapping[str, Sequence[str]]) -> int:
    """Closed-form count of all structures over fixed carriers."""
    cs = validate_carriers(sig, carriers)
    count = 1
    for name in sig.relation_names:
        cells = 1
        for sort in sig.profile(name):
            cells *= len(cs[sort])
        count *= 2**cells
    for name in sig.constant_names:
        count *= len(cs[sig.constant_sort(name)])
    return count


def enumerate_structures(
    sig: Signature,
    carriers: Mapping[str, Sequence[str]],
    cap: int = DEFAULT_MODEL_CAP,
) -> list[Structure]:
    """All structures over the fixed carriers, in canonical order.

    Relation extensions vary as bit-vectors over the lexicographic tuple
    order of each relation (earlier relations vary slower); constant
    denotations vary last (fastest).  Refuses with the computed count when
    it exceeds ``cap``.
    """
    cs = validate_carriers(sig, carriers)
    total_bits = 0
    for name in sig.relation_names:
        cells = 1
        for sort in sig.profile(name):
            cells *= len(cs[sort])
        total_bits += cells
    if total_bits > 64:
        raise SizeCapError("structure enumeration", f"at least 2^{total_bits}", cap)
    count = count_structures(sig, carriers)
    if count > cap:
        raise SizeCapError("structure enumeration", count, cap)

    tuple_spaces = {
        name: list(itertools.product(*(cs[sort] for sort in sig.profile(name))))
        for name in sig.relation_names
    }
    rel_axes = [range(2 ** len(tuple_spaces[name])) for name in sig.relation_names]
    const_axes = [cs[sig.constant_sort(name)] for name in sig.constant_names]

    out: list[Structure] = []
    for combo in itertools.product(*rel_axes, *const_axes):
        rel_bits = combo[: len(rel_axes)]
        const_elems = combo[len(rel_axes):]
        relations = {}
        for name, bits in zip(sig.relation_names, rel_bits):
            space = tuple_spaces[name]
            relations[name] = [space[i] for i in range(len(space)) if bits >> i & 1]
        constants = dict(zip(sig.constant_names, const_elems))
        out.append(Structure.make(sig, cs, relations, constants))
    return out


# ---------------------------------------------------------------------------
# File formats

_ENTITY_LINE = re.compile(r"entity\s+(\S+)\s*$")
_RELATION_LINE = re.compile(r"relation\s+(\S+?)\s*\(\s*([^()]*?)\s*\)\s*$")
_CONSTANT_LINE = re.compile(r"constant\s+(\S+?)\s*:\s*(\S+)\s*$")


def _source_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_signature(text: str, *, path: str | None = None) -> Signature:
    """Parse a signature file: entity/relation/constant declarations."""
    ents: list[str] = []
    rels: list[tuple[str, tuple[str, ...]]] = []
    consts: list[tuple[str, str]] = []
    seen: dict[str, set[str]] = {"entity": set(), "relation": set(), "constant": set()}

    def check(kind: str, name: str, lineno: int) -> None:
        if not _NAME_RE.match(name) or name in _KEYWORDS:
            raise ParseError(f"invalid {kind} name {name!r}", line=lineno, path=path)
        if name in seen[kind]:
            raise ParseError(f"duplicate {kind} name {name!r}", line=lineno, path=path)
        seen[kind].add(name)

    for lineno, line in _source_lines(text):
        if m := _ENTITY_LINE.match(line):
            name = m.group(1)
            check("entity", name, lineno)
            ents.append(name)
        elif m := _RELATION_LINE.match(line):
            name, raw_profile = m.group(1), m.group(2)
            check("relation", name, lineno)
            profile = tuple(s.strip() for s in raw_profile.split(",")) if raw_profile.strip() else ()
            if not profile:
                raise ParseError(f"relation {name!r} has an empty profile", line=lineno, path=path)
            for sort in profile:
                if sort not in seen["entity"]:
                    raise ParseError(
                        f"relation {name!r} references undeclared entity type {sort!r}",
                        line=lineno,
                        path=path,
                    )
            rels.append((name, profile))
        elif m := _CONSTANT_LINE.match(line):
            name, sort = m.group(1), m.group(2)
            check("constant", name, lineno)
            if sort not in seen["entity"]:
                raise ParseError(
                    f"constant {name!r} references undeclared entity type {sort!r}",
                    line=lineno,
                    path=path,
                )
            consts.append((name, sort))
        else:
            raise ParseError(f"unrecognized declaration: {line!r}", line=lineno, path=path)
    try:
        return Signature(tuple(ents), tuple(rels), tuple(consts))
    except ValueError as exc:
        raise ParseError(str(exc), path=path)


def parse_sentences(sig: Signature, text: str, *, path: str | None = None) -> tuple[Formula, ...]:
    """Parse a pool/theory file: one sentence per line, deduplicated.

    Duplicates are alpha-equivalence duplicates; the first occurrence wins.
    """
    out: list[Formula] = []
    seen: set[Formula] = set()
    for lineno, line in _source_lines(text):
        try:
            sentence = parse_sentence(sig, line, path=path)
        except ParseError as exc:
            raise ParseError(exc.message, line=lineno, path=path)
        if sentence not in seen:
            seen.add(sentence)
            out.append(sentence)
    return tuple(out)


_UNIVERSE_LINE = re.compile(r"universe\s+(\S+)\s*=\s*\{(.*)\}\s*$")
_ASSIGN_LINE = re.compile(r"(\S+?)\s*=\s*(.*\S)\s*$")


def _split_top_commas(text: str) -> list[str]:
    parts: list[str] = []
    depth, start = 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


def parse_model(sig: Signature, text: str, *, path: str | None = None) -> Structure:
    """Parse a model file: universe lines, relation extensions, denotations."""
    carriers: dict[str, tuple[str, ...]] = {}
    relations: dict[str, list[tuple[str, ...]]] = {}
    constants: dict[str, str] = {}
    for lineno, line in _source_lines(text):
        if m := _UNIVERSE_LINE.match(line):
            sort, body = m.group(1), m.group(2).strip()
            if not sig.has_entity_type(sort):
                raise ParseError(f"undeclared entity type {sort!r}", line=lineno, path=path)
            if sort in carriers:
                raise ParseError(f"duplicate universe for {sort!r}", line=lineno, path=path)
            elems = tuple(e.strip() for e in body.split(",")) if body else ()
            if not all(elems):
                raise ParseError(f"malformed universe for {sort!r}", line=lineno, path=path)
            carriers[sort] = elems
        elif m := _ASSIGN_LINE.match(line):
            name, rhs = m.group(1), m.group(2)
            if sig.has_relation(name):
                if name in relations:
                    raise ParseError(f"duplicate extension for {name!r}", line=lineno, path=path)
                if not (rhs.startswith("{") and rhs.endswith("}")):
                    raise ParseError(
                        f"relation {name!r} needs a tuple set in braces", line=lineno, path=path
                    )
                body = rhs[1:-1].strip()
                tuples: list[tuple[str, ...]] = []
                if body:
                    for item in _split_top_commas(body):
                        if item.startswith("(") and item.endswith(")"):
                            tup = tuple(e.strip() for e in item[1:-1].split(","))
                        else:
                            tup = (item,)
                        if not all(tup):
                            raise ParseError(f"malformed tuple {item!r}", line=lineno, path=path)
                        tuples.append(tup)
                relations[name] = tuples
            elif sig.has_constant(name):
                if name in constants:
                    raise ParseError(f"duplicate denotation for {name!r}", line=lineno, path=path)
                if "{" in rhs or "," in rhs:
                    raise ParseError(
                        f"constant {name!r} needs a single element", line=lineno, path=path
                    )
                constants[name] = rhs
            else:
                raise ParseError(f"unknown relation or constant {name!r}", line=lineno, path=path)
        else:
            raise ParseError(f"unrecognized model line: {line!r}", line=lineno, path=path)
    try:
        return Structure.make(sig, carriers, relations, constants)
    except ValueError as exc:
        raise ParseError(str(exc), path=path)


def format_structure(structure: Structure) -> str:
    """Render a structure in the model file syntax (re-parseable)."""
    lines: list[str] = []
    for sort, elems in structure.carriers:
        lines.append(f"universe {sort} = {{{', '.join(elems)}}}")
    for name, tuples in structure.relations:
        unary = len(structure.signature.profile(name)) == 1
        items = []
        for tup in sorted(tuples):
            items.append(tup[0] if unary else f"({','.join(tup)})")
        lines.append(f"{name} = {{{', '.join(items)}}}")
    for name, elem in structure.constants:
        lines.append(f"{name} = {elem}")
    return "\n".join(lines) + "\n"
