"""Runtime representation of elements of [[A]](X) for a finite carrier X.

Elements of the carrier itself are plain hashable state identifiers.  The
functor layers wrap them:

* ``frozenset``  -- finite powerset
* :class:`Dist`  -- finitely supported distributions
* :class:`Pair`  -- labelled values, ``Sigma x (-)``
* :class:`Table` -- exponents ``(-)^K``; total over a finite key set, or lazy
* :class:`Tup`   -- finite products
"""
from __future__ import annotations

import threading
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

DEFAULT_TOLERANCE = 1e-9


class ShapeError(Exception):
    """A value does not have the shape required by its functor."""


class Dist:
    """A finitely supported probability distribution.

    Masses at equal points are merged on construction; zero-mass points are dropped.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, masses: Mapping[Hashable, float] | Iterable[tuple[Hashable, float]] = (),
                 tolerance: float = DEFAULT_TOLERANCE, check: bool = True):
        items = masses.items() if isinstance(masses, Mapping) else masses
        acc: dict = {}
        for point, p in items:
            if p < -tolerance or p > 1 + tolerance:
                raise ShapeError(f"probability {p} outside [0, 1]")
            acc[point] = acc.get(point, 0.0) + float(p)
        if check and acc and abs(sum(acc.values()) - 1.0) > tolerance:
            raise ShapeError(f"distribution sums to {sum(acc.values())}, not 1")
        if check and not acc:
            raise ShapeError("empty distribution")
        self._items = {k: v for k, v in acc.items() if v != 0.0}
        self._hash = None

    @classmethod
    def dirac(cls, point: Hashable) -> "Dist":
        return cls({point: 1.0})

    def __getitem__(self, point) -> float:
        return self._items.get(point, 0.0)

    def __iter__(self) -> Iterator:
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def items(self):
        return self._items.items()

    @property
    def support(self) -> frozenset:
        return frozenset(self._items)

    def mass(self, subset) -> float:
        return sum(p for x, p in self._items.items() if x in subset)

    def __eq__(self, other):
        return isinstance(other, Dist) and self._items == other._items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._items.items()))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{k!r}: {v:g}" for k, v in self._items.items())
        return f"Dist({{{body}}})"


class Pair(tuple):
    """``(label, inner)``: an element of ``Sigma x Y``."""

    __slots__ = ()

    def __new__(cls, label, inner):
        return super().__new__(cls, (label, inner))

    @property
    def label(self):
        return self[0]

    @property
    def inner(self):
        return self[1]

    def __repr__(self):
        return f"Pair({self[0]!r}, {self[1]!r})"

    def __eq__(self, other):
        return isinstance(other, Pair) and tuple.__eq__(self, other)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(("Pair",) + tuple(self))


class Tup(tuple):
    """An element of a finite product of functors."""

    __slots__ = ()

    def __new__(cls, items):
        return super().__new__(cls, tuple(items))

    def __repr__(self):
        return "Tup(" + tuple.__repr__(self) + ")"

    def __eq__(self, other):
        return isinstance(other, Tup) and tuple.__eq__(self, other)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(("Tup",) + tuple(self))


class Table:
    """A function from keys to values.

    Finite tables are given by a mapping.  Lazy tables compute entries on
    demand through ``extend`` and memoise them; two threads may race on the
    same key, which is harmless because ``extend`` is deterministic.
    """

    def __init__(self, entries: Mapping | None = None,
                 extend: Callable[[Any], Any] | None = None,
                 key: Callable[[Any], Hashable] | None = None):
        self._entries = dict(entries or {})
        self._extend = extend
        self._key = key or (lambda k: k)
        self._lock = threading.Lock()
        self._hash = None

    @property
    def is_lazy(self) -> bool:
        return self._extend is not None

    def __getitem__(self, k):
        kk = self._key(k)
        try:
            return self._entries[kk]
        except KeyError:
            pass
        if self._extend is None:
            raise KeyError(k)
        v = self._extend(k)
        with self._lock:
            self._entries.setdefault(kk, v)
        return v

    def keys(self):
        return self._entries.keys()

    def items(self):
        return self._entries.items()

    def map(self, fn: Callable[[Any], Any]) -> "Table":
        """Apply ``fn`` pointwise (lazily for lazy tables)."""
        if self._extend is None:
            return Table({k: fn(v) for k, v in self._entries.items()})
        return Table(extend=lambda k: fn(self[k]), key=self._key)

    def precompose(self, keymap: Callable[[Any], Any], key: Callable[[Any], Hashable] | None = None) -> "Table":
        """``k -> self[keymap(k)]``, always lazy."""
        return Table(extend=lambda k: self[keymap(k)], key=key or self._key)

    def __eq__(self, other):
        if not isinstance(other, Table):
            return False
        if self.is_lazy or other.is_lazy:
            return self is other
        return self._entries == other._entries

    def __hash__(self):
        if self.is_lazy:
            return id(self)
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def __repr__(self):
        if self.is_lazy:
            return f"Table(<lazy, {len(self._entries)} cached>)"
        return f"Table({self._entries!r})"


class Predicate:
    """An intensional subset: membership decided by a callable."""

    __slots__ = ("test", "name")

    def __init__(self, test: Callable[[Any], bool], name: str = "pred"):
        self.test = test
        self.name = name

    def __contains__(self, v) -> bool:
        return bool(self.test(v))

    def __repr__(self):
        return f"Predicate({self.name})"


class Everything:
    """The whole space, as a subset."""

    def __contains__(self, v) -> bool:
        return True

    def __repr__(self):
        return "Everything()"
