"""The index set of simplex classes with nesting, orthogonality,
transversality, co-levels, and the induced map from link index sets.

[Delta] is nested in [Delta'] when Lk(Delta) is contained in Lk(Delta');
orthogonal when Lk(Delta') is contained in Lk(Lk(Delta)); transverse
otherwise.  These relations are evaluated literally from the definitions;
the facts that nesting is a partial order with unique maximum [empty],
that orthogonality is symmetric and anti-reflexive, and that the two
relations exclude each other are theorems, so violations raise
InternalConsistencyError (they would signal a bug, not bad input).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .complexes import FlagComplex, SimplexClass, bits, popcount
from .errors import (
    EmptySimplex,
    InternalConsistencyError,
    MaximalSimplex,
)


class Rel(enum.Enum):
    EQUAL = "equal"
    NESTED_IN = "nested-in"
    CONTAINS = "contains"
    ORTHOGONAL = "orthogonal"
    TRANSVERSE = "transverse"


def _pack(masks, n) -> np.ndarray:
    """Vertex-set bitmasks as a (k, words) uint64 array."""
    words = max(1, (n + 63) // 64)
    out = np.zeros((len(masks), words), dtype=np.uint64)
    for i, m in enumerate(masks):
        for w in range(words):
            out[i, w] = (m >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out


def _subset_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """sub[i, j] = rows a[i] subset of b[j], chunked to bound memory."""
    k = len(a)
    out = np.zeros((k, len(b)), dtype=bool)
    step = max(1, (1 << 22) // max(1, len(b) * a.shape[1]))
    for lo in range(0, k, step):
        hi = min(k, lo + step)
        gap = a[lo:hi, None, :] & ~b[None, :, :]
        out[lo:hi] = ~gap.any(axis=2)
    return out


class _RelView:
    """Mapping-style view (i, j) -> Rel backed by the relation matrices."""

    def __init__(self, nested, orth):
        self._nested = nested
        self._orth = orth

    def __getitem__(self, key):
        i, j = key
        if i == j:
            return Rel.EQUAL
        if self._nested[i, j]:
            return Rel.NESTED_IN
        if self._nested[j, i]:
            return Rel.CONTAINS
        if self._orth[i, j]:
            return Rel.ORTHOGONAL
        return Rel.TRANSVERSE


@dataclass(frozen=True)
class RelationTable:
    """All pairwise relations on the simplex classes of one complex.

    nested is reflexive ([a] nested in [a]); orth is symmetric and
    anti-reflexive; off the diagonal exactly one of nested-in, contains,
    orthogonal, transverse holds per ordered pair.
    """

    complex: FlagComplex
    classes: tuple[SimplexClass, ...]
    nested: np.ndarray   # bool, nested[i, j] == ([i] nested in [j])
    orth: np.ndarray     # bool

    @cached_property
    def rel(self) -> _RelView:
        return _RelView(self.nested, self.orth)

    @cached_property
    def _index(self) -> dict:
        return {c.link: i for i, c in enumerate(self.classes)}

    def index_of(self, cls: SimplexClass) -> int:
        return self._index[cls.link]

    def relation(self, a: SimplexClass, b: SimplexClass) -> Rel:
        return self.rel[(self.index_of(a), self.index_of(b))]

    def nested_in(self, a: SimplexClass, b: SimplexClass) -> bool:
        return bool(self.nested[self.index_of(a), self.index_of(b)])

    def orthogonal(self, a: SimplexClass, b: SimplexClass) -> bool:
        return bool(self.orth[self.index_of(a), self.index_of(b)])

    def transverse(self, a: SimplexClass, b: SimplexClass) -> bool:
        return self.relation(a, b) is Rel.TRANSVERSE

    def colevel(self, cls: SimplexClass) -> int:
        return int(self._colevels[self.index_of(cls)])

    @cached_property
    def _colevels(self) -> np.ndarray:
        """Longest strict-nesting chain from the class up to [empty].

        The literal recursive wording in the source material would give
        co-level 1 to every class below the maximum; the longest-chain
        stratification is the one under which the coned filtration
        terminates at the saturation complement, so it is used throughout.
        """
        k = len(self.classes)
        strict = self.nested & ~np.eye(k, dtype=bool)
        sizes = np.array([len(c.link) for c in self.classes])
        levels = np.zeros(k, dtype=np.int64)
        for i in sorted(range(k), key=lambda i: -sizes[i]):
            above = strict[i]
            if above.any():
                levels[i] = levels[above].max() + 1
        return levels

    def classes_with_colevel(self) -> tuple[SimplexClass, ...]:
        return tuple(replace(c, colevel=self.colevel(c)) for c in self.classes)


def relation_table(x: FlagComplex) -> RelationTable:
    """Compute (and cache) the full relation table of a complex."""
    if "relation_table" in x._cache:
        return x._cache["relation_table"]
    classes = x.simplex_classes
    links = [x.mask_of(c.link) for c in classes]
    dlinks = [x.link_mask(l) for l in links]  # Lk(Lk(Delta)) vertex sets
    packed_l = _pack(links, x.n)
    packed_d = _pack(dlinks, x.n)
    nested = _subset_matrix(packed_l, packed_l)
    orth = _subset_matrix(packed_l, packed_d).T  # orth[i,j]: links[j] in dlinks[i]
    table = RelationTable(x, classes, nested, orth)
    _assert_table_theorems(x, table, links)
    if len(classes) <= 600:
        assert_relation_axioms(table)
    x._cache["relation_table"] = table
    return table


def _assert_table_theorems(x, table, links):
    k = len(table.classes)
    if k == 0:
        return
    nested, orth = table.nested, table.orth
    eye = np.eye(k, dtype=bool)
    full = x.full_mask
    if sum(1 for l in links if l == full) != 1 or not nested[:, links.index(full)].all():
        raise InternalConsistencyError("the class of the empty simplex is not "
                                       "the unique nesting maximum")
    if (nested & nested.T & ~eye).any():
        raise InternalConsistencyError("nesting table is not antisymmetric")
    if (orth != orth.T).any():
        raise InternalConsistencyError("orthogonality must be symmetric")
    if (orth & eye).any():
        raise InternalConsistencyError("orthogonality must be anti-reflexive")
    if (orth & (nested | nested.T)).any():
        raise InternalConsistencyError("nesting and orthogonality overlap")


def assert_relation_axioms(table: RelationTable) -> None:
    """The closure laws: nesting transitive, and nesting into an orthogonal
    class staying orthogonal.  Both follow from set inclusion and the
    inclusion-reversal of links, so a failure is an implementation bug.
    Quadratic checks run at construction; these cubic ones run here (always
    at construction for small index sets, and from the test-suite)."""
    nested = table.nested.astype(np.float32)
    orth = table.orth.astype(np.float32)
    if ((nested @ nested > 0.5) & ~table.nested).any():
        raise InternalConsistencyError("nesting is not transitive")
    if ((nested @ orth > 0.5) & ~table.orth).any():
        raise InternalConsistencyError(
            "nesting into an orthogonal class must stay orthogonal")


def co_level(x: FlagComplex, cls: SimplexClass) -> int:
    return relation_table(x).colevel(cls)


@dataclass(frozen=True)
class IotaStar:
    """The induced injective map from the index set of a link into the index
    set of the ambient complex, [Sigma] -> [Sigma * Delta]."""

    simplex: tuple
    link_complex: FlagComplex
    mapping: dict  # SimplexClass of the link -> SimplexClass of X

    def __getitem__(self, cls: SimplexClass) -> SimplexClass:
        return self.mapping[cls]


def iota_star(x: FlagComplex, simplex) -> IotaStar:
    """Map the classes of Lk(simplex) (as its own complex) into the classes
    of x by joining with the simplex.  Injectivity, preservation of the
    three relations, and the complexity drop are theorems and are asserted.
    """
    mask = x.simplex_mask(simplex)
    if mask == 0:
        raise EmptySimplex("the induced map needs a nonempty simplex")
    if x.link_mask(mask) == 0:
        raise MaximalSimplex(f"{tuple(simplex)} is maximal")
    lk = x.induced(x.link_mask(mask))
    table_l = relation_table(lk)
    table_x = relation_table(x)
    mapping = {}
    for cls in table_l.classes:
        join_mask = x.mask_of(cls.representative) | mask
        image = x.class_of(x.labels_of(join_mask))
        mapping[cls] = image
    images = list(mapping.values())
    if len({c.link for c in images}) != len(images):
        raise InternalConsistencyError("induced class map is not injective")
    for a in table_l.classes:
        for b in table_l.classes:
            if table_l.relation(a, b).value != table_x.relation(mapping[a], mapping[b]).value:
                raise InternalConsistencyError(
                    "induced class map does not preserve the relations")
    if not lk.complexity[0] < x.complexity[0]:
        raise InternalConsistencyError("link complexity must drop strictly")
    return IotaStar(x.labels_of(mask), lk, mapping)
