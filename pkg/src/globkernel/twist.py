"""The twisted complex of a structure: cells, boundaries, operations.

A twisted cell of level ``i`` over a structure ``X`` is a tuple
``(x_1, .., x_{i+1})`` with ``x_k`` of dimension ``k``, glued by
``s_k(x_k) = t_k t_{k+1}(x_{k+1})``.  Segments are the same datum starting
at a higher dimension: entries of dimensions ``low+1 .. high+1``.  Level
``i`` consumes base dimension ``i + 1``, so the twisted complex of a
structure truncated at ``N`` is truncated at ``N - 1``.

Boundaries, composition, units and inverses on twisted cells are computed
entrywise:

* source composes the next-to-top entry with the target of the top one,
  ``(x_1, .., x_{i-1}, x_i *_{i-1} t(x_{i+1}))``; target drops the top entry;
* composition over level ``j`` composes entries ``j+2 .. i+1`` over ``j``;
* the unit appends the double unit over the source of the top entry;
* the inverse over level ``j`` composes entry ``j+1`` with ``t(x_{j+2})``
  and inverts every entry above.

``build_twisted`` assembles all of this into a new ``OmegaStructure`` whose
laws can be checked by the generic ``omega`` sweeps.  Every operation here
validates its inputs and outputs; there is no unchecked fast path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DimOutOfRange,
    GluingViolation,
    InversesAbsent,
    MissingCell,
    NotComposable,
    ValidationError,
)
from .globular import TableOfDimensions, validate_globular_set
from .omega import OmegaStructure, compose, inverse, unit, validate_omega


@dataclass(frozen=True)
class TwistedCell:
    """Tuple ``(x_1, .., x_{i+1})`` of level ``i = len(entries) - 1``."""

    level: int
    entries: tuple[str, ...]

    def top(self) -> str:
        return self.entries[-1]


@dataclass(frozen=True)
class TwistedSegment:
    """Entries of dimensions ``low+1 .. high+1``, same gluing, shifted."""

    low: int
    high: int
    entries: tuple[str, ...]


@dataclass(frozen=True)
class MixedTuple:
    """A twisted product with the rebuildable prefixes dropped.

    ``head`` is a full twisted cell of level ``i_1``; segment ``l`` keeps
    the entries of dimensions ``i'_l + 2 .. i_{l+1} + 1`` of factor ``l + 1``.
    """

    table: TableOfDimensions
    head: TwistedCell
    segments: tuple[TwistedSegment, ...]


def _check_segment_entries(x: OmegaStructure, low: int, high: int, entries) -> tuple[str, ...]:
    """Entries at dimensions ``low+1 .. high+1`` with the gluing equations."""
    entries = tuple(entries)
    base = x.base
    if low < 0 or high < low:
        raise DimOutOfRange(f"segment bounds ({low},{high}) need 0 <= low <= high")
    if high + 1 > base.truncation:
        raise DimOutOfRange(
            f"segment top dimension {high + 1} exceeds truncation {base.truncation}"
        )
    if len(entries) != high - low + 1:
        raise ValidationError(
            f"segment ({low},{high}) needs {high - low + 1} entries, got {len(entries)}"
        )
    for offset, u in enumerate(entries):
        d = low + 1 + offset
        if not base.has_cell(d, u):
            raise MissingCell(f"entry {offset + 1}: {u!r} is not a {d}-cell")
    for offset in range(len(entries) - 1):
        k = low + 1 + offset
        left = base.src[k][entries[offset]]
        right = base.tgt[k][base.tgt[k + 1][entries[offset + 1]]]
        if left != right:
            raise GluingViolation(
                offset + 1,
                f"s_{k}({entries[offset]}) = {left} but "
                f"t_{k} t_{k + 1}({entries[offset + 1]}) = {right}",
            )
    return entries


def twisted_cell(x: OmegaStructure, level: int, entries) -> TwistedCell:
    """Validate entries into a twisted cell."""
    return TwistedCell(level, _check_segment_entries(x, 0, level, entries))


def twisted_segment(x: OmegaStructure, low: int, high: int, entries) -> TwistedSegment:
    return TwistedSegment(low, high, _check_segment_entries(x, low, high, entries))


def lemma_identities_hold(x: OmegaStructure, cell: TwistedCell) -> bool:
    """Structural identities every twisted cell satisfies.

    For ``0 <= l <= i-1``: ``s^{l+2}_l(x_{l+2}) = s^{i+1}_l(x_{i+1})`` and
    ``s_{l+1}(x_{l+1}) = t^{i+1}_l(x_{i+1})``.
    """
    base = x.base
    i = cell.level
    top = cell.top()
    for l in range(i):
        if base.boundary("src", l + 2, l, cell.entries[l + 1]) != base.boundary(
            "src", i + 1, l, top
        ):
            return False
        if base.src[l + 1][cell.entries[l]] != base.boundary("tgt", i + 1, l, top):
            return False
    return True


def _enumerate_segments(x: OmegaStructure, low: int, high: int):
    """Exhaustive gluing-respecting enumeration, lexicographic in cell order."""
    base = x.base
    if high + 1 > base.truncation:
        raise DimOutOfRange(
            f"level {high} needs dimension {high + 1} <= truncation {base.truncation}"
        )
    length = high - low + 1
    out: list[tuple[str, ...]] = []

    # bucket the entry candidates at dimension k+1 by t_k t_{k+1}
    buckets: list[dict[str, list[str]]] = []
    for offset in range(1, length):
        d = low + 1 + offset
        bucket: dict[str, list[str]] = {}
        for u in base.cells[d]:
            bucket.setdefault(base.tgt[d - 1][base.tgt[d][u]], []).append(u)
        buckets.append(bucket)

    def extend(prefix: list[str], offset: int):
        if offset == length:
            out.append(tuple(prefix))
            return
        if offset == 0:
            candidates = base.cells[low + 1]
        else:
            glue = base.src[low + offset][prefix[-1]]
            candidates = buckets[offset - 1].get(glue, ())
        for u in candidates:
            prefix.append(u)
            extend(prefix, offset + 1)
            prefix.pop()

    extend([], 0)
    return out


def twisted_cells(x: OmegaStructure, level: int) -> tuple[TwistedCell, ...]:
    """All twisted cells of the given level, in lexicographic order."""
    if level < 0:
        raise DimOutOfRange("twisted level must be >= 0")
    return tuple(TwistedCell(level, e) for e in _enumerate_segments(x, 0, level))


def segment_cells(x: OmegaStructure, low: int, high: int) -> tuple[TwistedSegment, ...]:
    if low < 0 or high < low:
        raise DimOutOfRange(f"segment bounds ({low},{high}) need 0 <= low <= high")
    return tuple(TwistedSegment(low, high, e) for e in _enumerate_segments(x, low, high))


def twisted_source(x: OmegaStructure, cell: TwistedCell) -> TwistedCell:
    """Level ``i - 1``: compose the entry below the top into the boundary."""
    i = cell.level
    if i < 1:
        raise DimOutOfRange("level-0 twisted cells have no source")
    entries = cell.entries
    glued = compose(x, i, i - 1, entries[i - 1], x.base.tgt[i + 1][entries[i]])
    return twisted_cell(x, i - 1, entries[: i - 1] + (glued,))


def twisted_target(x: OmegaStructure, cell: TwistedCell) -> TwistedCell:
    """Level ``i - 1``: drop the top entry."""
    if cell.level < 1:
        raise DimOutOfRange("level-0 twisted cells have no target")
    return twisted_cell(x, cell.level - 1, cell.entries[:-1])


def twisted_boundary(x: OmegaStructure, kind: str, cell: TwistedCell, level: int) -> TwistedCell:
    """Iterated twisted boundary down to the given level."""
    if not 0 <= level <= cell.level:
        raise DimOutOfRange(f"boundary level {level} outside 0..{cell.level}")
    if kind not in ("src", "tgt"):
        raise ValidationError(f"boundary kind must be 'src' or 'tgt', got {kind!r}")
    step = twisted_source if kind == "src" else twisted_target
    for _ in range(cell.level - level):
        cell = step(x, cell)
    return cell


# -- canonical contraction/expansion of twisted products ----------------------


def _segment_bounds(table: TableOfDimensions) -> list[tuple[int, int]]:
    """Bounds ``(i'_l + 1, i_{l+1})`` of the dropped-prefix segments."""
    return [
        (table.inner[l] + 1, table.outer[l + 1])
        for l in range(table.width - 1)
    ]


def contract_product(x: OmegaStructure, table: TableOfDimensions, cells) -> MixedTuple:
    """Drop the rebuildable prefixes from a tuple of twisted cells.

    Input: cells of levels ``i_1, .., i_n`` glued by iterated twisted
    boundaries over levels ``i'_l``.  Output keeps the first cell whole and,
    of each later cell, only the entries above the gluing level.
    """
    cells = tuple(cells)
    if len(cells) != table.width:
        raise ValidationError(f"expected {table.width} cells, got {len(cells)}")
    for k, cell in enumerate(cells):
        if cell.level != table.outer[k]:
            raise ValidationError(
                f"cell {k + 1} has level {cell.level}, table wants {table.outer[k]}"
            )
        twisted_cell(x, cell.level, cell.entries)
    for l in range(table.width - 1):
        seam = table.inner[l]
        left = twisted_boundary(x, "src", cells[l], seam)
        right = twisted_boundary(x, "tgt", cells[l + 1], seam)
        if left != right:
            raise GluingViolation(
                l + 1,
                f"twisted s-boundary {left.entries} != t-boundary {right.entries}",
            )
    segments = []
    for l, (low, high) in enumerate(_segment_bounds(table)):
        # entries of dimensions low+1 .. high+1 sit at indices low .. high
        suffix = cells[l + 1].entries[low:]
        segments.append(twisted_segment(x, low, high, suffix))
    return MixedTuple(table, cells[0], tuple(segments))


def expand_product(x: OmegaStructure, mixed: MixedTuple) -> tuple[TwistedCell, ...]:
    """Rebuild the dropped prefixes; inverse of :func:`contract_product`.

    Each next cell repeats the previous one below the gluing level ``m`` and
    takes ``x_{m+1} *_m t(x_{m+2})`` of the previous cell at dimension
    ``m + 1``.
    """
    table = mixed.table
    bounds = _segment_bounds(table)
    if len(mixed.segments) != len(bounds):
        raise ValidationError(
            f"expected {len(bounds)} segments, got {len(mixed.segments)}"
        )
    head = twisted_cell(x, mixed.head.level, mixed.head.entries)
    if head.level != table.outer[0]:
        raise ValidationError(
            f"head has level {head.level}, table wants {table.outer[0]}"
        )
    cells = [head]
    current = head
    for l, segment in enumerate(mixed.segments):
        low, high = bounds[l]
        seam = table.inner[l]  # = low - 1
        if (segment.low, segment.high) != (low, high):
            raise ValidationError(
                f"segment {l + 1} has bounds ({segment.low},{segment.high}), "
                f"table wants ({low},{high})"
            )
        _check_segment_entries(x, low, high, segment.entries)
        # the seam: iterated source of the previous top entry meets the
        # iterated target of the first segment entry in dimension `seam`
        prev_top_dim = current.level + 1
        first_dim = low + 1
        left = x.base.boundary("src", prev_top_dim, seam, current.top())
        right = x.base.boundary("tgt", first_dim, seam, segment.entries[0])
        if left != right:
            raise GluingViolation(
                l + 1,
                f"s^{prev_top_dim}_{seam}({current.top()}) = {left} but "
                f"t^{first_dim}_{seam}({segment.entries[0]}) = {right}",
            )
        prefix = current.entries[:seam]
        glued = compose(
            x, seam + 1, seam,
            current.entries[seam],
            x.base.tgt[seam + 2][current.entries[seam + 1]],
        )
        rebuilt = twisted_cell(x, high, prefix + (glued,) + segment.entries)
        cells.append(rebuilt)
        current = rebuilt
    return tuple(cells)


# -- twisted operations --------------------------------------------------------


def twisted_compose(x: OmegaStructure, j: int, left: TwistedCell, right: TwistedCell) -> TwistedCell:
    """Compose two twisted cells of level ``i`` over level ``j < i``.

    Accepts the pair form; the contraction onto the mixed form is applied
    internally, which also verifies the twisted composability condition.
    """
    i = left.level
    if right.level != i:
        raise NotComposable(f"levels differ: {left.level} vs {right.level}")
    if not 0 <= j < i:
        raise DimOutOfRange(f"composition level {j} outside 0 <= j < {i}")
    table = TableOfDimensions((i, i), (j,))
    try:
        mixed = contract_product(x, table, (left, right))
    except GluingViolation:
        src_b = twisted_boundary(x, "src", left, j)
        tgt_b = twisted_boundary(x, "tgt", right, j)
        raise NotComposable(
            f"twisted s-boundary {src_b.entries} != t-boundary {tgt_b.entries}",
            left_boundary=src_b.entries,
            right_boundary=tgt_b.entries,
        ) from None
    suffix = mixed.segments[0].entries  # dimensions j+2 .. i+1
    entries = list(left.entries[: j + 1])
    for offset, (a, b) in enumerate(zip(left.entries[j + 1 :], suffix)):
        entries.append(compose(x, j + 2 + offset, j, a, b))
    return twisted_cell(x, i, entries)


def twisted_unit(x: OmegaStructure, cell: TwistedCell) -> TwistedCell:
    """Level ``i + 1``: append the double unit over the source of the top entry."""
    i = cell.level
    if i + 2 > x.truncation:
        raise DimOutOfRange(
            f"twisted unit at level {i} needs dimension {i + 2} <= truncation {x.truncation}"
        )
    top = cell.top()
    appended = unit(x, i + 1, unit(x, i, x.base.src[i + 1][top]))
    return twisted_cell(x, i + 1, cell.entries + (appended,))


def iter_twisted_unit(x: OmegaStructure, cell: TwistedCell, level: int) -> TwistedCell:
    """Iterated twisted unit from ``cell.level`` up to ``level``."""
    if level < cell.level:
        raise DimOutOfRange(f"iterated unit cannot go down to {level}")
    for _ in range(level - cell.level):
        cell = twisted_unit(x, cell)
    return cell


def twisted_inverse(x: OmegaStructure, j: int, cell: TwistedCell) -> TwistedCell:
    """Inverse over level ``j``: glue at ``j+1``, invert every entry above."""
    if x.inv is None:
        raise InversesAbsent("twisted inverse needs inverse tables on the base")
    i = cell.level
    if not 0 <= j < i:
        raise DimOutOfRange(f"inverse level {j} outside 0 <= j < {i}")
    entries = list(cell.entries[:j])
    entries.append(compose(
        x, j + 1, j, cell.entries[j], x.base.tgt[j + 2][cell.entries[j + 1]]
    ))
    for offset in range(j + 1, i + 1):
        entries.append(inverse(x, offset + 1, j, cell.entries[offset]))
    return twisted_cell(x, i, entries)


# -- products of twisted cells --------------------------------------------------


def twisted_product(x: OmegaStructure, table: TableOfDimensions):
    """All tuples of twisted cells glued by iterated twisted boundaries."""
    max_level = table.max_dim()
    if max_level + 1 > x.truncation:
        raise DimOutOfRange(
            f"twisted level {max_level} needs truncation >= {max_level + 1}"
        )
    factors = [twisted_cells(x, d) for d in table.outer]
    results: list[tuple[TwistedCell, ...]] = []
    buckets: list[dict] = []
    for k in range(table.width - 1):
        seam = table.inner[k]
        bucket: dict = {}
        for cell in factors[k + 1]:
            bucket.setdefault(twisted_boundary(x, "tgt", cell, seam), []).append(cell)
        buckets.append(bucket)

    def extend(prefix: list[TwistedCell], k: int):
        if k == table.width:
            results.append(tuple(prefix))
            return
        if k == 0:
            candidates = factors[0]
        else:
            glue = twisted_boundary(x, "src", prefix[-1], table.inner[k - 1])
            candidates = buckets[k - 1].get(glue, ())
        for cell in candidates:
            prefix.append(cell)
            extend(prefix, k + 1)
            prefix.pop()

    extend([], 0)
    return tuple(results)


def mixed_product(x: OmegaStructure, table: TableOfDimensions) -> tuple[MixedTuple, ...]:
    """All mixed tuples: head cells and segments glued at the seams."""
    max_level = table.max_dim()
    if max_level + 1 > x.truncation:
        raise DimOutOfRange(
            f"twisted level {max_level} needs truncation >= {max_level + 1}"
        )
    bounds = _segment_bounds(table)
    heads = twisted_cells(x, table.outer[0])
    segment_lists = [segment_cells(x, low, high) for low, high in bounds]

    buckets = []
    for l, (low, high) in enumerate(bounds):
        seam = table.inner[l]  # = low - 1
        bucket: dict[str, list[TwistedSegment]] = {}
        for seg in segment_lists[l]:
            key = x.base.boundary("tgt", low + 1, seam, seg.entries[0])
            bucket.setdefault(key, []).append(seg)
        buckets.append(bucket)

    results: list[MixedTuple] = []

    def extend(head: TwistedCell, chosen: list[TwistedSegment], top: str, top_dim: int, l: int):
        if l == len(bounds):
            results.append(MixedTuple(table, head, tuple(chosen)))
            return
        seam = table.inner[l]
        glue = x.base.boundary("src", top_dim, seam, top)
        for seg in buckets[l].get(glue, ()):
            chosen.append(seg)
            extend(head, chosen, seg.entries[-1], bounds[l][1] + 1, l + 1)
            chosen.pop()

    for head in heads:
        extend(head, [], head.top(), head.level + 1, 0)
    return tuple(results)


# -- assembly -------------------------------------------------------------------


def twisted_name(entries) -> str:
    return "(" + "|".join(entries) + ")"


def build_twisted(x: OmegaStructure) -> OmegaStructure:
    """Assemble the twisted complex of ``x`` as a structure truncated at N - 1.

    The new tables are exactly the entrywise operations above; when ``x``
    satisfies the full axiom set, so does the result (checkable with the
    generic ``omega`` sweeps).
    """
    n = x.truncation
    if n == 0:
        raise DimOutOfRange("twisting needs truncation >= 1")
    levels = [twisted_cells(x, i) for i in range(n)]
    names = [
        {cell: twisted_name(cell.entries) for cell in layer}
        for layer in levels
    ]

    cells = [tuple(names[i][cell] for cell in levels[i]) for i in range(n)]
    src, tgt = [], []
    for i in range(1, n):
        src.append({
            names[i][cell]: names[i - 1][twisted_source(x, cell)]
            for cell in levels[i]
        })
        tgt.append({
            names[i][cell]: names[i - 1][twisted_target(x, cell)]
            for cell in levels[i]
        })
    base = validate_globular_set(cells, src, tgt)

    comp = {}
    for i in range(1, n):
        for j in range(i):
            by_target: dict[TwistedCell, list[TwistedCell]] = {}
            for cell in levels[i]:
                by_target.setdefault(
                    twisted_boundary(x, "tgt", cell, j), []
                ).append(cell)
            table = {}
            for left in levels[i]:
                bound = twisted_boundary(x, "src", left, j)
                for right in by_target.get(bound, ()):
                    table[(names[i][left], names[i][right])] = names[i][
                        twisted_compose(x, j, left, right)
                    ]
            comp[(i, j)] = table

    unit_tables = [
        {names[i][cell]: names[i + 1][twisted_unit(x, cell)] for cell in levels[i]}
        for i in range(n - 1)
    ]

    inv = None
    if x.inv is not None:
        inv = {}
        for i in range(1, n):
            for j in range(i):
                inv[(i, j)] = {
                    names[i][cell]: names[i][twisted_inverse(x, j, cell)]
                    for cell in levels[i]
                }

    return validate_omega(base, comp, unit_tables, inv)
