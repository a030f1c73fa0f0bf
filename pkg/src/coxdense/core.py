"""Coxeter matrices, Coxeter systems and generator subsets.

Generators are identified by index; labels only matter for parsing and
printing.  A subset of generators is a bitmask (:class:`GenSubset`).
"""
from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from .errors import DiagramSyntaxError, InvalidCoxeterMatrix, SubsetError


class Infinity(enum.Enum):
    INF = "inf"

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"


INF = Infinity.INF

Order = Union[int, Infinity]


def is_inf(value) -> bool:
    return value is INF


def at_least(value: Order, bound: int) -> bool:
    """``value >= bound`` with INF above every integer."""
    return value is INF or value >= bound


def format_order(value: Order) -> str:
    return "inf" if value is INF else str(value)


def parse_order(token: str) -> Order:
    if token == "inf":
        return INF
    return int(token)


@dataclass(frozen=True)
class GenSubset:
    """A subset of ``{0, ..., rank-1}`` stored as a bitmask."""

    mask: int
    rank: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.rank:
            raise SubsetError(f"mask {self.mask:#b} has bits outside rank {self.rank}")

    @classmethod
    def of(cls, rank: int, indices: Iterable[int]) -> "GenSubset":
        mask = 0
        for i in indices:
            if not 0 <= i < rank:
                raise SubsetError(f"generator index {i} out of range for rank {rank}")
            mask |= 1 << i
        return cls(mask, rank)

    @classmethod
    def empty(cls, rank: int) -> "GenSubset":
        return cls(0, rank)

    @classmethod
    def full(cls, rank: int) -> "GenSubset":
        return cls((1 << rank) - 1, rank)

    def __iter__(self) -> Iterator[int]:
        return iter(mask_indices(self.mask))

    def __len__(self):
        return bin(self.mask).count("1")

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def __bool__(self):
        return self.mask != 0

    def _coerce(self, other) -> int:
        if isinstance(other, GenSubset):
            if other.rank != self.rank:
                raise SubsetError("subsets of systems with different rank")
            return other.mask
        return int(other)

    def __or__(self, other):
        return GenSubset(self.mask | self._coerce(other), self.rank)

    def __and__(self, other):
        return GenSubset(self.mask & self._coerce(other), self.rank)

    def __sub__(self, other):
        return GenSubset(self.mask & ~self._coerce(other), self.rank)

    def complement(self) -> "GenSubset":
        return GenSubset(((1 << self.rank) - 1) & ~self.mask, self.rank)

    def issubset(self, other) -> bool:
        return self.mask & ~self._coerce(other) == 0

    def min(self) -> int:
        if not self.mask:
            raise ValueError("min() of empty subset")
        return (self.mask & -self.mask).bit_length() - 1

    def indices(self) -> tuple[int, ...]:
        return tuple(self)


def mask_indices(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class CoxeterMatrix:
    """Table of ``m(s, t)``; may be invalid, see :func:`validate`."""

    rank: int
    entries: tuple[tuple[Order, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "CoxeterMatrix":
        entries = tuple(
            tuple(INF if (v is INF or v == "inf") else int(v) for v in row) for row in rows
        )
        return cls(len(entries), entries)

    def __getitem__(self, ij) -> Order:
        i, j = ij
        return self.entries[i][j]


def validate(matrix: CoxeterMatrix) -> list[str]:
    """Return every violated Coxeter-matrix condition; empty iff valid."""
    problems = []
    n = matrix.rank
    if len(matrix.entries) != n or any(len(row) != n for row in matrix.entries):
        return [f"entry table is not {n}x{n}"]
    for i in range(n):
        for j in range(n):
            v = matrix.entries[i][j]
            if v is not INF and not isinstance(v, int):
                problems.append(f"entry ({i},{j}) is not an integer or inf")
    if problems:
        return problems
    for i in range(n):
        if matrix.entries[i][i] != 1:
            problems.append(f"diagonal: m({i},{i}) = {format_order(matrix.entries[i][i])} != 1")
    for i in range(n):
        for j in range(i + 1, n):
            a, b = matrix.entries[i][j], matrix.entries[j][i]
            if a != b:
                problems.append(
                    f"symmetry: m({i},{j}) = {format_order(a)} != m({j},{i}) = {format_order(b)}"
                )
    for i in range(n):
        for j in range(n):
            if i != j and not at_least(matrix.entries[i][j], 2):
                problems.append(f"off-diagonal: m({i},{j}) = {matrix.entries[i][j]} < 2")
    return problems


@dataclass(frozen=True)
class CoxeterSystem:
    names: tuple[str, ...]
    matrix: CoxeterMatrix

    def __post_init__(self):
        if len(self.names) != self.matrix.rank:
            raise InvalidCoxeterMatrix(
                [f"{len(self.names)} labels for a rank-{self.matrix.rank} matrix"]
            )
        if len(set(self.names)) != len(self.names):
            raise InvalidCoxeterMatrix(["generator labels are not distinct"])
        problems = validate(self.matrix)
        if problems:
            raise InvalidCoxeterMatrix(problems)

    @classmethod
    def from_matrix(cls, rows, names=None) -> "CoxeterSystem":
        matrix = CoxeterMatrix.from_rows(rows)
        if names is None:
            names = default_names(matrix.rank)
        return cls(tuple(names), matrix)

    @property
    def rank(self) -> int:
        return self.matrix.rank

    def m(self, s: int, t: int) -> Order:
        return self.matrix.entries[s][t]

    def index(self, label: str) -> int:
        try:
            return self.names.index(label)
        except ValueError:
            raise SubsetError(f"unknown generator label {label!r}") from None

    def subset(self, labels: Iterable[Union[str, int]]) -> GenSubset:
        return GenSubset.of(
            self.rank, (x if isinstance(x, int) else self.index(x) for x in labels)
        )

    def parse_subset(self, text: str) -> GenSubset:
        """Comma separated labels; an empty string is the empty set."""
        labels = [tok.strip() for tok in text.split(",") if tok.strip()]
        return self.subset(labels)

    def full(self) -> GenSubset:
        return GenSubset.full(self.rank)

    def empty(self) -> GenSubset:
        return GenSubset.empty(self.rank)

    def labels(self, subset: Union[GenSubset, int]) -> list[str]:
        mask = subset.mask if isinstance(subset, GenSubset) else subset
        return [self.names[i] for i in mask_indices(mask)]

    def digest(self) -> str:
        return hashlib.sha256(serialize(self).encode()).hexdigest()[:16]


def default_names(rank: int) -> tuple[str, ...]:
    if rank <= 26:
        return tuple("abcdefghijklmnopqrstuvwxyz"[:rank])
    return tuple(f"s{i + 1}" for i in range(rank))


def parse_system(text: str) -> CoxeterSystem:
    """Parse the line-oriented diagram format.

    ``generators a b c`` must be the first non-comment line; each
    ``m a b <int>=2|inf`` line sets one unordered pair, and pairs that are
    never mentioned default to 2.
    """
    names = None
    values: dict[tuple[int, int], Order] = {}
    diagonal: dict[int, Order] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0]
        if keyword == "generators":
            if names is not None:
                raise DiagramSyntaxError("second 'generators' line", lineno)
            names = tokens[1:]
            if not names:
                raise DiagramSyntaxError("'generators' needs at least one label", lineno)
            if len(set(names)) != len(names):
                raise DiagramSyntaxError("duplicate generator label", lineno)
        elif keyword == "m":
            if names is None:
                raise DiagramSyntaxError("'m' line before 'generators'", lineno)
            if len(tokens) != 4:
                raise DiagramSyntaxError("expected 'm <label> <label> <value>'", lineno)
            a, b, tok = tokens[1:]
            idx = {}
            for label in (a, b):
                if label not in names:
                    raise DiagramSyntaxError(f"unknown generator label {label!r}", lineno)
                idx[label] = names.index(label)
            try:
                value = parse_order(tok)
            except ValueError:
                raise DiagramSyntaxError(f"bad value {tok!r}: integer or 'inf'", lineno) from None
            i, j = sorted((idx[a], idx[b]))
            if i == j:
                if i in diagonal:
                    raise DiagramSyntaxError(f"duplicate m declaration for ({a},{b})", lineno)
                diagonal[i] = value
                continue
            if (i, j) in values:
                raise DiagramSyntaxError(f"duplicate m declaration for ({a},{b})", lineno)
            values[i, j] = value
        else:
            raise DiagramSyntaxError(f"unknown keyword {keyword!r}", lineno)
    if names is None:
        raise DiagramSyntaxError("missing 'generators' line")
    n = len(names)
    rows = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for i, v in diagonal.items():
        rows[i][i] = v
    for (i, j), v in values.items():
        rows[i][j] = rows[j][i] = v
    return CoxeterSystem(tuple(names), CoxeterMatrix.from_rows(rows))


def serialize(system: CoxeterSystem) -> str:
    lines = ["generators " + " ".join(system.names)]
    for i in range(system.rank):
        for j in range(i + 1, system.rank):
            v = system.m(i, j)
            if v != 2:
                lines.append(f"m {system.names[i]} {system.names[j]} {format_order(v)}")
    return "\n".join(lines) + "\n"


def restrict(system: CoxeterSystem, subset: GenSubset) -> CoxeterSystem:
    """The parabolic subsystem ``(W_T, T)``, labels preserved."""
    if subset.rank != system.rank:
        raise SubsetError(f"subset of rank {subset.rank} for a rank-{system.rank} system")
    idx = subset.indices()
    rows = [[system.m(i, j) for j in idx] for i in idx]
    return CoxeterSystem(tuple(system.names[i] for i in idx), CoxeterMatrix.from_rows(rows))


def commutes(system: CoxeterSystem, s: int, t: int) -> bool:
    return s == t or system.m(s, t) == 2


def irreducible_components(system: CoxeterSystem) -> list[GenSubset]:
    """Connected components of the graph with an edge where ``m >= 3``.

    Sorted by least member.
    """
    n = system.rank
    seen = 0
    components = []
    for start in range(n):
        if seen >> start & 1:
            continue
        comp = 1 << start
        stack = [start]
        while stack:
            s = stack.pop()
            for t in range(n):
                if not comp >> t & 1 and not commutes(system, s, t):
                    comp |= 1 << t
                    stack.append(t)
        seen |= comp
        components.append(GenSubset(comp, n))
    return components


def product_order(system: CoxeterSystem, s: int, t: int) -> Order:
    """Order of ``st``: ``m(s, t)``, and 1 when ``s == t``."""
    if s == t:
        return 1
    return system.m(s, t)
