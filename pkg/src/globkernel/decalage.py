"""Retraction data on the twisted complex, and the shift on finite sets.

Element side: every twisted cell projects to a base cell (source of its top
entry) and to a 0-cell (target of its bottom entry); every base cell lifts
into the twisted complex through unit padding.  The lift is a section of the
projection, componentwise over every globular product; it is not natural in
the level, and the checker for that fact must exhibit a witness.

Finite-set side: the category with objects ``{0..n}`` and all maps between
them carries a shift endofunctor ``D`` appending a fresh top element, with
the inclusion as natural transformation, the constant-top point, and the
clamping retraction ``k -> min(k, n)``.  ``check_shift_decalage`` verifies
all of this exhaustively; the composition sweep is vectorized with numpy
because the pair count grows as fast as the map count squared.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimOutOfRange,
    GluingViolation,
    MissingCell,
    NotComposable,
    ValidationError,
)
from .globular import (
    GlobularTuple,
    TableOfDimensions,
    all_tables,
    globular_product,
    globular_tuple,
)
from .omega import OmegaStructure, compose, iter_unit, unit
from .report import CheckResult, failed, passed
from .twist import (
    MixedTuple,
    TwistedCell,
    TwistedSegment,
    iter_twisted_unit,
    twisted_boundary,
    twisted_cell,
    twisted_cells,
    twisted_segment,
    twisted_source,
    twisted_target,
)

_EVAL_ERRORS = (GluingViolation, NotComposable, ValidationError, MissingCell)


# -- projections and unit lifts -------------------------------------------------


def apex_source(x: OmegaStructure, cell: TwistedCell) -> str:
    """Source of the top entry: lands in dimension ``level``."""
    return x.base.src[cell.level + 1][cell.top()]


def apex_source_segment(x: OmegaStructure, segment: TwistedSegment) -> str:
    return x.base.src[segment.high + 1][segment.entries[-1]]


def base_endpoint(x: OmegaStructure, cell: TwistedCell) -> str:
    """Target of the bottom entry: a 0-cell."""
    return x.base.tgt[1][cell.entries[0]]


def unit_lift(x: OmegaStructure, i: int, u: str) -> TwistedCell:
    """Lift of an ``i``-cell: units over its iterated targets, then its unit."""
    if i + 1 > x.truncation:
        raise DimOutOfRange(
            f"lift of a {i}-cell needs dimension {i + 1} <= truncation {x.truncation}"
        )
    entries = [
        unit(x, l, x.base.boundary("tgt", i, l, u)) for l in range(i)
    ]
    entries.append(unit(x, i, u))
    return twisted_cell(x, i, entries)


def unit_lift_segment(x: OmegaStructure, low: int, high: int, u: str) -> TwistedSegment:
    if high + 1 > x.truncation:
        raise DimOutOfRange(
            f"lift of a {high}-cell needs dimension {high + 1} <= truncation {x.truncation}"
        )
    entries = [
        unit(x, l, x.base.boundary("tgt", high, l, u)) for l in range(low, high)
    ]
    entries.append(unit(x, high, u))
    return twisted_segment(x, low, high, entries)


def unit_lift_tuple(x: OmegaStructure, table: TableOfDimensions, gtuple: GlobularTuple) -> MixedTuple:
    """Componentwise lift of a globular product element into the mixed form."""
    globular_tuple(x.base, table, gtuple.entries)
    head = unit_lift(x, table.outer[0], gtuple.entries[0])
    segments = tuple(
        unit_lift_segment(x, table.inner[l] + 1, table.outer[l + 1], gtuple.entries[l + 1])
        for l in range(table.width - 1)
    )
    mixed = MixedTuple(table, head, segments)
    _validate_mixed_seams(x, mixed)
    return mixed


def _validate_mixed_seams(x: OmegaStructure, mixed: MixedTuple) -> None:
    table = mixed.table
    prev_top = mixed.head.top()
    prev_top_dim = mixed.head.level + 1
    for l, segment in enumerate(mixed.segments):
        seam = table.inner[l]
        first_dim = segment.low + 1
        left = x.base.boundary("src", prev_top_dim, seam, prev_top)
        right = x.base.boundary("tgt", first_dim, seam, segment.entries[0])
        if left != right:
            raise GluingViolation(
                l + 1,
                f"s^{prev_top_dim}_{seam}({prev_top}) = {left} but "
                f"t^{first_dim}_{seam}({segment.entries[0]}) = {right}",
            )
        prev_top = segment.entries[-1]
        prev_top_dim = segment.high + 1


def apex_tuple(x: OmegaStructure, mixed: MixedTuple) -> GlobularTuple:
    """Componentwise projection of a mixed tuple back to the globular product."""
    entries = [apex_source(x, mixed.head)]
    entries.extend(apex_source_segment(x, seg) for seg in mixed.segments)
    return globular_tuple(x.base, mixed.table, entries)


# -- element-side checks ---------------------------------------------------------


def check_section(x: OmegaStructure, table: TableOfDimensions) -> CheckResult:
    """Projection after lift is the identity on the globular product of ``table``."""
    if table.max_dim() + 1 > x.truncation:
        raise DimOutOfRange(
            f"table {table} needs truncation >= {table.max_dim() + 1}"
        )
    failures = []
    for gtuple in globular_product(x.base, table):
        try:
            mixed = unit_lift_tuple(x, table, gtuple)
            back = apex_tuple(x, mixed)
        except _EVAL_ERRORS as exc:
            failures.append(f"{gtuple.entries}: {exc}")
            continue
        if back != gtuple:
            failures.append(f"{gtuple.entries} -> {back.entries}")
    name = "section"
    return failed(name, str(table), failures) if failures else passed(name, str(table))


def check_sections(x: OmegaStructure, max_width: int, max_dim: int) -> list[CheckResult]:
    """Section check over every table bounded by width and dimension."""
    if max_dim + 1 > x.truncation:
        raise DimOutOfRange(
            f"dimension bound {max_dim} needs truncation >= {max_dim + 1}"
        )
    return [
        check_section(x, table)
        for table in all_tables(max_width, max_dim)
    ]


def check_apex_naturality(x: OmegaStructure) -> list[CheckResult]:
    """The apex projection commutes with twisted and plain boundaries."""
    results = []
    for i in range(1, x.truncation):
        failures = []
        for cell in twisted_cells(x, i):
            a_cell = apex_source(x, cell)
            if apex_source(x, twisted_source(x, cell)) != x.base.src[i][a_cell]:
                failures.append(f"src side at {cell.entries}")
            if apex_source(x, twisted_target(x, cell)) != x.base.tgt[i][a_cell]:
                failures.append(f"tgt side at {cell.entries}")
        scope = f"level={i}"
        results.append(
            failed("apex-naturality", scope, failures)
            if failures else passed("apex-naturality", scope)
        )
    return results


def check_endpoint_naturality(x: OmegaStructure) -> list[CheckResult]:
    """The 0-cell endpoint is constant along twisted boundaries."""
    results = []
    for i in range(1, x.truncation):
        failures = []
        for cell in twisted_cells(x, i):
            b_cell = base_endpoint(x, cell)
            if base_endpoint(x, twisted_source(x, cell)) != b_cell:
                failures.append(f"src side at {cell.entries}")
            if base_endpoint(x, twisted_target(x, cell)) != b_cell:
                failures.append(f"tgt side at {cell.entries}")
        scope = f"level={i}"
        results.append(
            failed("endpoint-naturality", scope, failures)
            if failures else passed("endpoint-naturality", scope)
        )
    return results


def find_lift_naturality_failure(x: OmegaStructure):
    """Witness that the unit lift is not natural in the level.

    Searches for a 1-cell ``u`` whose lifted source differs from the twisted
    source of its lift.  Returns ``(u, lift_of_source, source_of_lift)`` or
    ``None``.
    """
    if x.truncation < 2:
        return None
    for u in x.base.cells[1]:
        lhs = unit_lift(x, 0, x.base.src[1][u])
        rhs = twisted_source(x, unit_lift(x, 1, u))
        if lhs != rhs:
            return u, lhs, rhs
    return None


def check_lift_non_naturality(x: OmegaStructure) -> CheckResult:
    """Negative test: PASS means a non-naturality witness was found."""
    witness = find_lift_naturality_failure(x)
    scope = "level 0 vs 1"
    if witness is None:
        return failed("lift-non-naturality", scope, ["no witness found"])
    u, lhs, rhs = witness
    return CheckResult(
        "lift-non-naturality", scope, "PASS",
        f"witness {u}: {lhs.entries} != {rhs.entries}",
    )


def _closed_unit_form(x: OmegaStructure, kind: str, j: int, cell: TwistedCell) -> TwistedCell:
    """Closed form of the iterated twisted unit over a twisted boundary.

    For the source side the entry at dimension ``j+1`` is glued; above it
    every entry is the iterated unit over the corresponding iterated
    boundary of the original entry.
    """
    i = cell.level
    base = x.base
    entries = list(cell.entries[:j])
    if kind == "src":
        entries.append(compose(
            x, j + 1, j, cell.entries[j], base.tgt[j + 2][cell.entries[j + 1]]
        ))
    else:
        entries.append(cell.entries[j])
    for d in range(j + 2, i + 2):
        bound = base.boundary(kind, d, j, cell.entries[d - 1])
        entries.append(iter_unit(x, j, d, bound))
    return twisted_cell(x, i, entries)


def check_unit_closed_forms(x: OmegaStructure) -> list[CheckResult]:
    """Iterated twisted units over twisted boundaries match their closed forms."""
    results = []
    for i in range(1, x.truncation):
        for j in range(i):
            failures = []
            for cell in twisted_cells(x, i):
                try:
                    for kind in ("src", "tgt"):
                        iterated = iter_twisted_unit(
                            x, twisted_boundary(x, kind, cell, j), i
                        )
                        closed = _closed_unit_form(x, kind, j, cell)
                        if iterated != closed:
                            failures.append(
                                f"{kind} at {cell.entries}: "
                                f"{iterated.entries} != {closed.entries}"
                            )
                except _EVAL_ERRORS as exc:
                    failures.append(f"{cell.entries}: {exc}")
            scope = f"i={i},j={j}"
            results.append(
                failed("unit-closed-form", scope, failures)
                if failures else passed("unit-closed-form", scope)
            )
    return results


# -- the category of finite sets {0..n} with all maps ----------------------------


@dataclass(frozen=True)
class SimplexMap:
    """Total map ``{0..dom} -> {0..cod}``, not necessarily order-preserving."""

    dom: int
    cod: int
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", table)
        if self.dom < 0 or self.cod < 0:
            raise ValidationError("object sizes must be naturals")
        if len(table) != self.dom + 1:
            raise ValidationError(
                f"map on {{0..{self.dom}}} needs {self.dom + 1} values, got {len(table)}"
            )
        if any(not 0 <= v <= self.cod for v in table):
            raise ValidationError(f"values {table} outside 0..{self.cod}")

    def __call__(self, k: int) -> int:
        return self.table[k]

    def __str__(self) -> str:
        vals = ",".join(f"{k}>{v}" for k, v in enumerate(self.table))
        return f"[{self.dom}]->[{self.cod}]({vals})"


def identity_map(n: int) -> SimplexMap:
    return SimplexMap(n, n, tuple(range(n + 1)))


def compose_maps(g: SimplexMap, f: SimplexMap) -> SimplexMap:
    """``g`` after ``f``."""
    if f.cod != g.dom:
        raise NotComposable(f"cannot compose {g} after {f}")
    return SimplexMap(f.dom, g.cod, tuple(g.table[v] for v in f.table))


def shift_map(phi: SimplexMap) -> SimplexMap:
    """The shift endofunctor on maps: keep all values, send the new top to the new top."""
    return SimplexMap(phi.dom + 1, phi.cod + 1, phi.table + (phi.cod + 1,))


def top_inclusion(n: int) -> SimplexMap:
    """Component of the natural transformation into the shift: ``k -> k``."""
    return SimplexMap(n, n + 1, tuple(range(n + 1)))


def base_point(n: int) -> SimplexMap:
    """Constant point at the freshly added top element: ``0 -> n + 1``."""
    return SimplexMap(0, n + 1, (n + 1,))


def clamp_retraction(n: int) -> SimplexMap:
    """Retraction of the inclusion: ``k -> min(k, n)``."""
    return SimplexMap(n + 1, n, tuple(min(k, n) for k in range(n + 2)))


def standard_generators() -> dict[str, SimplexMap]:
    """The structure maps on {0,1} and their images under the shift.

    ``comp`` is dual to binary composition, ``unit`` to the unit, ``inv`` to
    the inverse; the ``*_shift`` entries are their shifts, written out so the
    tables can be compared against an independent computation.
    """
    return {
        "comp": SimplexMap(1, 2, (0, 2)),
        "unit": SimplexMap(1, 0, (0, 0)),
        "inv": SimplexMap(1, 1, (1, 0)),
        "comp_shift": SimplexMap(2, 3, (0, 2, 3)),
        "unit_shift": SimplexMap(2, 1, (0, 0, 1)),
        "inv_shift": SimplexMap(2, 2, (1, 0, 2)),
    }


def all_simplex_maps(m: int, n: int):
    """Every map ``{0..m} -> {0..n}`` in lexicographic order."""
    for values in itertools.product(range(n + 1), repeat=m + 1):
        yield SimplexMap(m, n, values)


def _composition_sweep(max_n: int, cap: int) -> list[str]:
    """Exhaustive check that the shift respects all compositions.

    Vectorized: for every pair of composable maps the shifted composite is
    compared elementwise against the composite of the shifts.
    """
    tables = {}
    for m in range(max_n + 1):
        for n in range(max_n + 1):
            arr = np.array(
                list(itertools.product(range(n + 1), repeat=m + 1)), dtype=np.int8
            ).reshape(-1, m + 1)
            tables[(m, n)] = arr

    failures: list[str] = []
    for m in range(max_n + 1):
        for n in range(max_n + 1):
            a = tables[(m, n)]
            count_a = a.shape[0]
            a_shift = np.concatenate(
                [a, np.full((count_a, 1), n + 1, dtype=np.int8)], axis=1
            )
            for p in range(max_n + 1):
                b = tables[(n, p)]
                b_shift = np.concatenate(
                    [b, np.full((b.shape[0], 1), p + 1, dtype=np.int8)], axis=1
                )
                block = max(1, 30_000_000 // max(1, count_a * (m + 2)))
                for start in range(0, b.shape[0], block):
                    bb = b[start : start + block]
                    bbs = b_shift[start : start + block]
                    composed = bb[:, a]  # psi(phi(k)) for every pair
                    lhs = np.concatenate(
                        [
                            composed,
                            np.full(composed.shape[:2] + (1,), p + 1, dtype=np.int8),
                        ],
                        axis=2,
                    )
                    rhs = bbs[:, a_shift]
                    if not np.array_equal(lhs, rhs):
                        bad = np.argwhere((lhs != rhs).any(axis=2))
                        for gi, fi in bad[: max(1, cap - len(failures))]:
                            failures.append(
                                f"phi={tuple(int(v) for v in a[fi])}:[{m}]->[{n}] "
                                f"psi={tuple(int(v) for v in b[start + gi])}:[{n}]->[{p}]"
                            )
                        if len(failures) >= cap:
                            return failures
    return failures


def check_shift_decalage(max_n: int, cap: int = 100) -> list[CheckResult]:
    """Functoriality of the shift plus the inclusion/point/retraction identities."""
    if max_n < 1:
        raise ValidationError("max_n must be >= 1")
    if max_n > 5:
        # the composition sweep covers ((n+1)^(m+1))^2 pairs per size triple
        raise ValidationError("max_n above 5 is combinatorially out of reach")
    results = []

    id_failures = [
        f"n={n}"
        for n in range(max_n + 1)
        if shift_map(identity_map(n)) != identity_map(n + 1)
    ]
    scope = f"n<={max_n}"
    results.append(
        failed("shift-identity", scope, id_failures)
        if id_failures else passed("shift-identity", scope)
    )

    comp_failures = _composition_sweep(max_n, cap)
    scope = f"m,n,p<={max_n}"
    results.append(
        failed("shift-composition", scope, comp_failures)
        if comp_failures else passed("shift-composition", scope)
    )

    incl_failures = []
    point_failures = []
    for m in range(max_n + 1):
        for n in range(max_n + 1):
            for phi in all_simplex_maps(m, n):
                if compose_maps(shift_map(phi), top_inclusion(m)) != compose_maps(
                    top_inclusion(n), phi
                ):
                    incl_failures.append(str(phi))
                if compose_maps(shift_map(phi), base_point(m)) != base_point(n):
                    point_failures.append(str(phi))
    scope = f"m,n<={max_n}"
    results.append(
        failed("shift-inclusion-square", scope, incl_failures)
        if incl_failures else passed("shift-inclusion-square", scope)
    )
    results.append(
        failed("shift-point-square", scope, point_failures)
        if point_failures else passed("shift-point-square", scope)
    )

    retr_failures = [
        f"n={n}"
        for n in range(max_n + 1)
        if compose_maps(clamp_retraction(n), top_inclusion(n)) != identity_map(n)
    ]
    scope = f"n<={max_n}"
    results.append(
        failed("shift-retraction", scope, retr_failures)
        if retr_failures else passed("shift-retraction", scope)
    )
    return results
