"""Fibred modal signatures, presented freely by generators.

Objects of the signature category are words over object generators; the
tensor is concatenation and the empty word is the unit.  Morphisms are kept
in a flattened normal form: a sequence of whiskered generator steps, applied
left to right.  Identities are empty sequences.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable


class SignatureError(Exception):
    """Raised on ill-formed objects or morphisms (e.g. composing mismatched arrows)."""


@dataclass(frozen=True)
class FibObject:
    word: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))

    @classmethod
    def of(cls, *names: str) -> "FibObject":
        return cls(tuple(names))

    @property
    def is_unit(self) -> bool:
        return not self.word

    def __matmul__(self, other: "FibObject") -> "FibObject":
        return tensor_objects(self, other)

    def __len__(self):
        return len(self.word)

    def __str__(self):
        return "*".join(self.word) if self.word else "I"


UNIT = FibObject(())


def tensor_objects(a: FibObject, b: FibObject) -> FibObject:
    return FibObject(a.word + b.word)


@dataclass(frozen=True)
class ModalitySymbol:
    name: str
    arity: int
    params: tuple = ()

    def __str__(self):
        return self.name + _format_params(self.params)


@dataclass(frozen=True)
class Generator:
    """A morphism generator instance, e.g. ``ev[Z] : Obs1*D*R -> D*R``."""

    name: str
    params: tuple
    source: FibObject
    target: FibObject

    def __str__(self):
        return self.name + _format_params(self.params)


@dataclass(frozen=True)
class Step:
    """A generator whiskered on both sides: ``left (x) gen (x) right``."""

    gen: Generator
    left: FibObject = UNIT
    right: FibObject = UNIT

    @property
    def source(self) -> FibObject:
        return self.left @ self.gen.source @ self.right

    @property
    def target(self) -> FibObject:
        return self.left @ self.gen.target @ self.right


@dataclass(frozen=True)
class FibMorphism:
    source: FibObject
    target: FibObject
    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        here = self.source
        for s in self.steps:
            if s.source != here:
                raise SignatureError(f"step {s.gen} expects {s.source}, got {here}")
            here = s.target
        if here != self.target:
            raise SignatureError(f"morphism ends at {here}, declared {self.target}")

    @classmethod
    def identity(cls, obj: FibObject) -> "FibMorphism":
        return cls(obj, obj, ())

    @classmethod
    def from_generator(cls, gen: Generator) -> "FibMorphism":
        return cls(gen.source, gen.target, (Step(gen),))

    @property
    def is_identity(self) -> bool:
        return not self.steps

    def then(self, other: "FibMorphism") -> "FibMorphism":
        """Diagrammatic composition: ``self`` first, then ``other``."""
        return compose_morphisms(other, self)

    def __str__(self):
        return format_morphism(self)


def compose_morphisms(g: FibMorphism, f: FibMorphism) -> FibMorphism:
    """``g . f`` -- apply ``f`` first."""
    if f.target != g.source:
        raise SignatureError(
            f"cannot compose: target of f is {f.target}, source of g is {g.source}"
        )
    return FibMorphism(f.source, g.target, f.steps + g.steps)


def tensor_morphism(left: FibObject, f: FibMorphism, right: FibObject) -> FibMorphism:
    """Whisker ``f`` by objects on either side."""
    steps = tuple(Step(s.gen, left @ s.left, s.right @ right) for s in f.steps)
    return FibMorphism(left @ f.source @ right, left @ f.target @ right, steps)


def _format_param(p) -> str:
    if isinstance(p, tuple):
        return "{" + ",".join(_format_param(q) for q in p) + "}"
    if isinstance(p, float):
        return repr(int(p)) if p.is_integer() else repr(p)
    return str(p)


def _format_params(params: tuple) -> str:
    if len(params) == 1 and isinstance(params[0], tuple):
        return _format_param(params[0])
    if not params:
        return ""
    return "[" + ", ".join(_format_param(p) for p in params) + "]"


def format_object(obj: FibObject) -> str:
    return str(obj)


def format_step(s: Step) -> str:
    if s.left.is_unit and s.right.is_unit:
        return str(s.gen)
    left = "" if s.left.is_unit else str(s.left)
    right = "" if s.right.is_unit else str(s.right)
    return f"[{left}|{s.gen}|{right}]"


def format_morphism(m: FibMorphism) -> str:
    if m.is_identity:
        return f"id@{m.source}"
    # printed in composition order, last step leftmost
    return " . ".join(format_step(s) for s in reversed(m.steps))


@dataclass(frozen=True)
class ModalityFamily:
    """Declares a (possibly parametrised) family of basic modality symbols on one fibre."""

    name: str
    fibre: FibObject
    arity: int
    nparams: int = 0


@dataclass(frozen=True)
class MorphismFamily:
    """Declares morphism generators ``name[params] : source -> target``.

    ``typing`` computes source/target from the parameters when they vary
    (e.g. subsystem restriction depends on the selected qubits).
    """

    name: str
    source: FibObject | None = None
    target: FibObject | None = None
    typing: Callable[[tuple], tuple[FibObject, FibObject]] | None = field(
        default=None, compare=False
    )

    def types(self, params: tuple) -> tuple[FibObject, FibObject]:
        if self.typing is not None:
            return self.typing(params)
        return self.source, self.target


@dataclass(frozen=True)
class FibredSignature:
    object_generators: tuple[str, ...] = ()
    morphisms: tuple[MorphismFamily, ...] = ()
    modalities: tuple[ModalityFamily, ...] = ()
    # named shorthands for objects (``Q3 -> Obs3*D*R``), morphisms, constants
    object_aliases: dict = field(default_factory=dict, compare=False)
    morphism_aliases: dict = field(default_factory=dict, compare=False)
    constants: dict = field(default_factory=dict, compare=False)
    # derived modality families: name -> callable(params) -> ModalityExpr
    macros: dict = field(default_factory=dict, compare=False)

    def modality_family(self, name: str) -> ModalityFamily | None:
        for fam in self.modalities:
            if fam.name == name:
                return fam
        return None

    def morphism_family(self, name: str) -> MorphismFamily | None:
        for fam in self.morphisms:
            if fam.name == name:
                return fam
        return None

    def symbol(self, name: str, params: tuple = ()) -> tuple[ModalitySymbol, FibObject]:
        fam = self.modality_family(name)
        if fam is None:
            raise SignatureError(f"undeclared modality {name!r}")
        if len(params) != fam.nparams:
            raise SignatureError(
                f"modality {name!r} takes {fam.nparams} parameters, got {len(params)}"
            )
        return ModalitySymbol(name, fam.arity, tuple(params)), fam.fibre

    def generator(self, name: str, params: tuple = ()) -> FibMorphism:
        fam = self.morphism_family(name)
        if fam is None:
            raise SignatureError(f"undeclared morphism {name!r}")
        src, tgt = fam.types(tuple(params))
        return FibMorphism.from_generator(Generator(name, tuple(params), src, tgt))

    def obj(self, *names: str) -> FibObject:
        """Build an object, expanding aliases; ``I`` is the unit."""
        word: list[str] = []
        for n in names:
            if n == "I":
                continue
            if n in self.object_aliases:
                word.extend(self.object_aliases[n].word)
            elif n in self.object_generators:
                word.append(n)
            else:
                raise SignatureError(f"undeclared object generator {n!r}")
        return FibObject(tuple(word))

    def merge(self, other: "FibredSignature") -> "FibredSignature":
        return FibredSignature(
            tuple(dict.fromkeys(self.object_generators + other.object_generators)),
            self.morphisms + other.morphisms,
            self.modalities + other.modalities,
            {**self.object_aliases, **other.object_aliases},
            {**self.morphism_aliases, **other.morphism_aliases},
            {**self.constants, **other.constants},
            {**self.macros, **other.macros},
        )


def validate_signature(s: FibredSignature) -> list[str]:
    """Return a list of violations; empty iff the signature is well formed."""
    problems = []
    declared = set(s.object_generators)

    def undeclared(obj: FibObject | None) -> list[str]:
        return [] if obj is None else [g for g in obj.word if g not in declared]

    fibres: dict[str, set] = {}
    for fam in s.modalities:
        fibres.setdefault(fam.name, set()).add(fam.fibre)
        for g in undeclared(fam.fibre):
            problems.append(f"modality {fam.name!r} lives on undeclared generator {g!r}")
    for name, objs in fibres.items():
        if len(objs) > 1:
            listed = ", ".join(sorted(map(str, objs)))
            problems.append(f"modality {name!r} declared on several fibres: {listed}")

    seen = set()
    for fam in s.morphisms:
        if fam.name in seen:
            problems.append(f"morphism {fam.name!r} declared twice")
        seen.add(fam.name)
        if fam.typing is None:
            if fam.source is None or fam.target is None:
                problems.append(f"morphism {fam.name!r} has no type")
                continue
            for g in undeclared(fam.source) + undeclared(fam.target):
                problems.append(f"morphism {fam.name!r} references undeclared generator {g!r}")

    for alias, obj in s.object_aliases.items():
        for g in undeclared(obj):
            problems.append(f"object alias {alias!r} references undeclared generator {g!r}")
    return problems


def iter_words(generators: Iterable[str], max_len: int):
    """All words over ``generators`` of length <= max_len (unit included)."""
    gens = list(generators)
    frontier = [()]
    for _ in range(max_len + 1):
        nxt = []
        for w in frontier:
            yield FibObject(w)
            nxt.extend(w + (g,) for g in gens)
        frontier = nxt
