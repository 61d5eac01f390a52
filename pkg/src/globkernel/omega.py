"""Operation tables over a globular set and exhaustive law checkers.

An :class:`OmegaStructure` carries, on top of a globular set truncated at N:

* partial compositions ``comp[(i, j)]`` defined exactly on pairs ``(u, v)``
  with matching iterated boundaries ``s^i_j(u) = t^i_j(v)``,
* total unit maps ``unit[i] : X_i -> X_{i+1}`` for ``0 <= i < N``,
* optional total inverse maps ``inv[(i, j)] : X_i -> X_i``.

``check_structure`` verifies the boundary laws every such structure must
satisfy; ``check_axiom``/``check_all`` enumerate the coherence axioms
(associativity, exchange, units, unit functoriality, inverses) and return
every counterexample up to a configurable cap.  Violations are data, never
exceptions.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import (
    DimOutOfRange,
    InversesAbsent,
    MissingCell,
    NotComposable,
    ValidationError,
)
from .globular import (
    SRC,
    TGT,
    GlobularSet,
    globular_set_from_json,
    globular_set_to_json,
    split_pair_key,
)

ASSOC = "assoc"
EXCHANGE = "exchange"
LEFT_UNIT = "left_unit"
RIGHT_UNIT = "right_unit"
UNIT_COMPAT = "unit_compat"
LEFT_INVERSE = "left_inverse"
RIGHT_INVERSE = "right_inverse"
INVERSE_COMPAT = "inverse_compat"

AXIOMS = (
    ASSOC,
    EXCHANGE,
    LEFT_UNIT,
    RIGHT_UNIT,
    UNIT_COMPAT,
    LEFT_INVERSE,
    RIGHT_INVERSE,
    INVERSE_COMPAT,
)

_FLAG_TOKENS = {
    "l": LEFT_UNIT,
    "r": RIGHT_UNIT,
    "f": UNIT_COMPAT,
    "li": LEFT_INVERSE,
    "ri": RIGHT_INVERSE,
}
_INVERSE_AXIOMS = (LEFT_INVERSE, RIGHT_INVERSE, INVERSE_COMPAT)


@dataclass(frozen=True)
class AxiomFlags:
    """Selection of optional axioms; associativity and exchange always run."""

    left_unit: bool = False
    right_unit: bool = False
    unit_compat: bool = False
    left_inverse: bool = False
    right_inverse: bool = False

    @classmethod
    def parse(cls, text: str) -> "AxiomFlags":
        selected: set[str] = set()
        for token in text.split(","):
            token = token.strip()
            if not token:
                continue
            if token not in _FLAG_TOKENS:
                raise ValidationError(
                    f"unknown axiom flag {token!r}; expected l, r, f, li, ri"
                )
            selected.add(_FLAG_TOKENS[token])
        return cls(
            left_unit=LEFT_UNIT in selected,
            right_unit=RIGHT_UNIT in selected,
            unit_compat=UNIT_COMPAT in selected,
            left_inverse=LEFT_INVERSE in selected,
            right_inverse=RIGHT_INVERSE in selected,
        )

    def axioms(self) -> tuple[str, ...]:
        selected = [ASSOC, EXCHANGE]
        if self.left_unit:
            selected.append(LEFT_UNIT)
        if self.right_unit:
            selected.append(RIGHT_UNIT)
        if self.unit_compat:
            selected.append(UNIT_COMPAT)
        if self.left_inverse:
            selected.append(LEFT_INVERSE)
        if self.right_inverse:
            selected.append(RIGHT_INVERSE)
        return tuple(selected)

    def needs_inverses(self) -> bool:
        return self.left_inverse or self.right_inverse

    def __str__(self) -> str:
        tokens = [tok for tok, axiom in _FLAG_TOKENS.items() if axiom in self.axioms()]
        return ",".join(tokens)


FULL_FLAGS = AxiomFlags(True, True, True, True, True)
CATEGORICAL_FLAGS = AxiomFlags(True, True, True, False, False)


@dataclass(frozen=True)
class OmegaStructure:
    base: GlobularSet
    comp: dict[tuple[int, int], dict[tuple[str, str], str]]
    unit: tuple[dict[str, str], ...]
    inv: dict[tuple[int, int], dict[str, str]] | None = None

    @property
    def truncation(self) -> int:
        return self.base.truncation

    @property
    def has_inverses(self) -> bool:
        return self.inv is not None

    def boundary(self, kind: str, i: int, j: int, u: str) -> str:
        return self.base.boundary(kind, i, j, u)


@dataclass(frozen=True)
class Violation:
    """One counterexample: which law, at which subscripts, on which cells."""

    law: str
    where: tuple[int, ...]
    witness: tuple[str, ...]
    detail: str

    def __str__(self) -> str:
        subs = ",".join(map(str, self.where))
        cells = ", ".join(self.witness)
        return f"{self.law}({subs}) on [{cells}]: {self.detail}"


@dataclass
class Report:
    """Violations gathered by a checker, truncated at ``cap`` entries."""

    violations: list[Violation] = field(default_factory=list)
    cap: int = 100
    truncated: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, violation: Violation) -> bool:
        """Record a violation; returns False once the cap is reached."""
        if len(self.violations) >= self.cap:
            self.truncated = True
            return False
        self.violations.append(violation)
        return len(self.violations) < self.cap

    def __str__(self) -> str:
        if self.ok:
            return "clean"
        lines = [str(v) for v in self.violations]
        if self.truncated:
            lines.append("... (capped)")
        return "\n".join(lines)


def validate_omega(base: GlobularSet, comp, unit, inv=None) -> OmegaStructure:
    """Shape-check raw operation tables against their declared domains.

    Law checking is left to :func:`check_structure`; this only rejects
    structurally malformed data: undeclared cells, composition keys outside
    the composable domain, non-total unit or inverse tables.
    """
    n = base.truncation
    comp = {tuple(key): dict(table) for key, table in comp.items()}
    problems: list[str] = []

    for (i, j), table in comp.items():
        if not (0 <= j < i <= n):
            raise DimOutOfRange(f"composition table at ({i},{j}) outside 0 <= j < i <= {n}")
        for (u, v), w in table.items():
            for name in (u, v, w):
                if not base.has_cell(i, name):
                    raise MissingCell(f"comp[{i},{j}] mentions {name!r}, not a {i}-cell")
            if base.boundary(SRC, i, j, u) != base.boundary(TGT, i, j, v):
                problems.append(
                    f"comp[{i},{j}] keyed on non-composable pair ({u!r}, {v!r})"
                )
    unit = tuple(dict(m) for m in unit)
    if len(unit) != n:
        raise ValidationError(f"need {n} unit tables (dims 0..{n - 1}), got {len(unit)}")
    for i, table in enumerate(unit):
        for u in base.cells[i]:
            if u not in table:
                problems.append(f"unit[{i}] undefined on {u!r}")
        for u, w in table.items():
            if not base.has_cell(i, u):
                raise MissingCell(f"unit[{i}] keyed on {u!r}, not a {i}-cell")
            if not base.has_cell(i + 1, w):
                raise MissingCell(f"unit[{i}]({u!r}) = {w!r}, not a {i + 1}-cell")

    if inv is not None:
        inv = {tuple(key): dict(table) for key, table in inv.items()}
        for i in range(1, n + 1):
            for j in range(i):
                if (i, j) not in inv:
                    problems.append(f"inverse table at ({i},{j}) missing")
        for (i, j), table in inv.items():
            if not (0 <= j < i <= n):
                raise DimOutOfRange(f"inverse table at ({i},{j}) outside 0 <= j < i <= {n}")
            for u in base.cells[i]:
                if u not in table:
                    problems.append(f"inv[{i},{j}] undefined on {u!r}")
            for u, w in table.items():
                if not base.has_cell(i, u) or not base.has_cell(i, w):
                    raise MissingCell(f"inv[{i},{j}] mentions a non-{i}-cell on {u!r}")

    if problems:
        raise ValidationError("; ".join(problems))
    return OmegaStructure(base, comp, unit, inv)


def compose(x: OmegaStructure, i: int, j: int, u: str, v: str) -> str:
    """Table lookup of ``u *^i_j v``; requires ``s^i_j(u) = t^i_j(v)``."""
    if not 0 <= j < i <= x.truncation:
        raise DimOutOfRange(f"composition at ({i},{j}) outside 0 <= j < i <= {x.truncation}")
    left = x.base.boundary(SRC, i, j, u)
    right = x.base.boundary(TGT, i, j, v)
    if left != right:
        raise NotComposable(
            f"s^{i}_{j}({u}) = {left} but t^{i}_{j}({v}) = {right}",
            left_boundary=left,
            right_boundary=right,
        )
    try:
        return x.comp[(i, j)][(u, v)]
    except KeyError as exc:
        raise ValidationError(
            f"composition table ({i},{j}) has no entry for ({u!r}, {v!r})"
        ) from exc


def unit(x: OmegaStructure, i: int, u: str) -> str:
    """Table lookup of the unit over ``u`` in dimension ``i + 1``."""
    if i + 1 > x.truncation:
        raise DimOutOfRange(f"unit lands in dimension {i + 1} > truncation {x.truncation}")
    if not x.base.has_cell(i, u):
        raise MissingCell(f"{u!r} is not a {i}-cell")
    return x.unit[i][u]


def iter_unit(x: OmegaStructure, j: int, i: int, u: str) -> str:
    """Iterated unit from dimension ``j`` up to ``i``; identity when equal."""
    if not 0 <= j <= i <= x.truncation:
        raise DimOutOfRange(f"iterated unit {j}->{i} outside 0..{x.truncation}")
    for d in range(j, i):
        u = unit(x, d, u)
    return u


def inverse(x: OmegaStructure, i: int, j: int, u: str) -> str:
    if x.inv is None:
        raise InversesAbsent("structure carries no inverse tables")
    if not 0 <= j < i <= x.truncation:
        raise DimOutOfRange(f"inverse at ({i},{j}) outside 0 <= j < i <= {x.truncation}")
    if not x.base.has_cell(i, u):
        raise MissingCell(f"{u!r} is not a {i}-cell")
    return x.inv[(i, j)][u]


def composable_pairs(x: OmegaStructure, i: int, j: int):
    """All pairs ``(u, v)`` with ``s^i_j(u) = t^i_j(v)``, in declaration order."""
    by_target: dict[str, list[str]] = {}
    for v in x.base.cells[i]:
        by_target.setdefault(x.base.boundary(TGT, i, j, v), []).append(v)
    for u in x.base.cells[i]:
        for v in by_target.get(x.base.boundary(SRC, i, j, u), ()):
            yield u, v


def check_structure(x: OmegaStructure, cap: int = 100) -> Report:
    """Exhaustively verify the boundary laws of the operation tables."""
    report = Report(cap=cap)
    n = x.truncation
    base = x.base

    for i in range(1, n + 1):
        for j in range(i):
            table = x.comp.get((i, j), {})
            for u, v in composable_pairs(x, i, j):
                w = table.get((u, v))
                if w is None:
                    if not report.add(Violation(
                        "comp_total", (i, j), (u, v),
                        "composable pair has no table entry",
                    )):
                        return report
                    continue
                s_w, t_w = base.src[i][w], base.tgt[i][w]
                if j == i - 1:
                    want_s, want_t = base.src[i][v], base.tgt[i][u]
                else:
                    want_s = x.comp.get((i - 1, j), {}).get(
                        (base.src[i][u], base.src[i][v])
                    )
                    want_t = x.comp.get((i - 1, j), {}).get(
                        (base.tgt[i][u], base.tgt[i][v])
                    )
                if s_w != want_s:
                    if not report.add(Violation(
                        "comp_src_law", (i, j), (u, v),
                        f"s({w}) = {s_w}, expected {want_s}",
                    )):
                        return report
                if t_w != want_t:
                    if not report.add(Violation(
                        "comp_tgt_law", (i, j), (u, v),
                        f"t({w}) = {t_w}, expected {want_t}",
                    )):
                        return report

    for i in range(n):
        for u in base.cells[i]:
            w = x.unit[i][u]
            if base.src[i + 1][w] != u or base.tgt[i + 1][w] != u:
                if not report.add(Violation(
                    "unit_law", (i,), (u,),
                    f"unit {w} has boundaries "
                    f"({base.src[i + 1][w]}, {base.tgt[i + 1][w]}), expected ({u}, {u})",
                )):
                    return report

    if x.inv is not None:
        for i in range(1, n + 1):
            for j in range(i):
                table = x.inv[(i, j)]
                for u in base.cells[i]:
                    w = table[u]
                    s_w, t_w = base.src[i][w], base.tgt[i][w]
                    if j == i - 1:
                        want_s, want_t = base.tgt[i][u], base.src[i][u]
                    else:
                        want_s = x.inv[(i - 1, j)][base.src[i][u]]
                        want_t = x.inv[(i - 1, j)][base.tgt[i][u]]
                    if s_w != want_s or t_w != want_t:
                        if not report.add(Violation(
                            "inv_law", (i, j), (u,),
                            f"inverse {w} has boundaries ({s_w}, {t_w}), "
                            f"expected ({want_s}, {want_t})",
                        )):
                            return report
    return report


def _axiom_subscripts(x: OmegaStructure, name: str):
    n = x.truncation
    if name in (ASSOC, LEFT_UNIT, RIGHT_UNIT, LEFT_INVERSE, RIGHT_INVERSE):
        return [(i, j) for i in range(1, n + 1) for j in range(i)]
    if name == UNIT_COMPAT:
        return [(i, j) for i in range(1, n) for j in range(i)]
    if name == EXCHANGE:
        return [
            (i, j, k)
            for i in range(2, n + 1)
            for j in range(1, i)
            for k in range(j)
        ]
    if name == INVERSE_COMPAT:
        return [
            (i, j, jp)
            for i in range(1, n + 1)
            for j in range(i)
            for jp in range(i)
        ]
    raise ValidationError(f"unknown axiom {name!r}; expected one of {AXIOMS}")


def _check_axiom_at(x: OmegaStructure, name: str, sub: tuple[int, ...], report: Report) -> bool:
    """Enumerate all instances of one axiom at fixed subscripts."""
    base = x.base

    def blame(witness, detail) -> bool:
        return report.add(Violation(name, sub, witness, detail))

    def run(witness, fn) -> bool:
        # a NotComposable or missing entry inside an axiom instance means the
        # structure is lawless enough that the instance cannot be evaluated;
        # report it rather than crash the sweep
        try:
            lhs, rhs = fn()
        except (NotComposable, ValidationError, KeyError) as exc:
            return blame(witness, f"not evaluable: {exc}")
        if lhs != rhs:
            return blame(witness, f"{lhs} != {rhs}")
        return True

    if name == ASSOC:
        i, j = sub
        by_target: dict[str, list[str]] = {}
        for v in base.cells[i]:
            by_target.setdefault(base.boundary(TGT, i, j, v), []).append(v)
        for u, v in composable_pairs(x, i, j):
            for w in by_target.get(base.boundary(SRC, i, j, v), ()):
                ok = run((u, v, w), lambda u=u, v=v, w=w: (
                    compose(x, i, j, compose(x, i, j, u, v), w),
                    compose(x, i, j, u, compose(x, i, j, v, w)),
                ))
                if not ok:
                    return False
        return True

    if name == EXCHANGE:
        i, j, k = sub
        by_t_j: dict[str, list[str]] = {}
        by_t_k: dict[str, list[str]] = {}
        for v in base.cells[i]:
            by_t_j.setdefault(base.boundary(TGT, i, j, v), []).append(v)
            by_t_k.setdefault(base.boundary(TGT, i, k, v), []).append(v)
        for u in base.cells[i]:
            for up in by_t_j.get(base.boundary(SRC, i, j, u), ()):
                for v in by_t_k.get(base.boundary(SRC, i, k, up), ()):
                    for vp in by_t_j.get(base.boundary(SRC, i, j, v), ()):
                        ok = run((u, up, v, vp), lambda u=u, up=up, v=v, vp=vp: (
                            compose(x, i, k,
                                    compose(x, i, j, u, up),
                                    compose(x, i, j, v, vp)),
                            compose(x, i, j,
                                    compose(x, i, k, u, v),
                                    compose(x, i, k, up, vp)),
                        ))
                        if not ok:
                            return False
        return True

    if name == LEFT_UNIT:
        i, j = sub
        for u in base.cells[i]:
            ok = run((u,), lambda u=u: (
                compose(x, i, j, iter_unit(x, j, i, base.boundary(TGT, i, j, u)), u),
                u,
            ))
            if not ok:
                return False
        return True

    if name == RIGHT_UNIT:
        i, j = sub
        for u in base.cells[i]:
            ok = run((u,), lambda u=u: (
                compose(x, i, j, u, iter_unit(x, j, i, base.boundary(SRC, i, j, u))),
                u,
            ))
            if not ok:
                return False
        return True

    if name == UNIT_COMPAT:
        i, j = sub
        for u, v in composable_pairs(x, i, j):
            ok = run((u, v), lambda u=u, v=v: (
                unit(x, i, compose(x, i, j, u, v)),
                compose(x, i + 1, j, unit(x, i, u), unit(x, i, v)),
            ))
            if not ok:
                return False
        return True

    if name == LEFT_INVERSE:
        i, j = sub
        for u in base.cells[i]:
            ok = run((u,), lambda u=u: (
                compose(x, i, j, inverse(x, i, j, u), u),
                iter_unit(x, j, i, base.boundary(SRC, i, j, u)),
            ))
            if not ok:
                return False
        return True

    if name == RIGHT_INVERSE:
        i, j = sub
        for u in base.cells[i]:
            ok = run((u,), lambda u=u: (
                compose(x, i, j, u, inverse(x, i, j, u)),
                iter_unit(x, j, i, base.boundary(TGT, i, j, u)),
            ))
            if not ok:
                return False
        return True

    if name == INVERSE_COMPAT:
        i, j, jp = sub
        for u, v in composable_pairs(x, i, j):
            if j == jp:
                fn = lambda u=u, v=v: (
                    inverse(x, i, jp, compose(x, i, j, u, v)),
                    compose(x, i, j, inverse(x, i, jp, v), inverse(x, i, jp, u)),
                )
            else:
                fn = lambda u=u, v=v: (
                    inverse(x, i, jp, compose(x, i, j, u, v)),
                    compose(x, i, j, inverse(x, i, jp, u), inverse(x, i, jp, v)),
                )
            if not run((u, v), fn):
                return False
        return True

    raise ValidationError(f"unknown axiom {name!r}")


def _validate_subscripts(x: OmegaStructure, name: str, sub: tuple[int, ...]) -> None:
    expected = 3 if name in (EXCHANGE, INVERSE_COMPAT) else 2
    if len(sub) != expected:
        raise ValidationError(f"axiom {name} takes {expected} subscripts")
    i = sub[0]
    top = x.truncation - 1 if name == UNIT_COMPAT else x.truncation
    if not 1 <= i <= top:
        raise DimOutOfRange(f"axiom {name} subscript i={i} outside 1..{top}")
    if name == EXCHANGE:
        if not i > sub[1] > sub[2] >= 0:
            raise DimOutOfRange(f"axiom {name} needs i > j > k >= 0, got {sub}")
    elif name == INVERSE_COMPAT:
        if not (0 <= sub[1] < i and 0 <= sub[2] < i):
            raise DimOutOfRange(f"axiom {name} needs i > j, j' >= 0, got {sub}")
    elif not 0 <= sub[1] < i:
        raise DimOutOfRange(f"axiom {name} needs i > j >= 0, got {sub}")


def check_axiom(x: OmegaStructure, name: str, subscripts=None, cap: int = 100) -> list[Violation]:
    """All counterexamples to one axiom, at given or all meaningful subscripts."""
    if name not in AXIOMS:
        raise ValidationError(f"unknown axiom {name!r}; expected one of {AXIOMS}")
    if name in _INVERSE_AXIOMS and x.inv is None:
        raise InversesAbsent(f"axiom {name} needs inverse tables")
    report = Report(cap=cap)
    if subscripts is not None:
        subs = [tuple(subscripts)]
        _validate_subscripts(x, name, subs[0])
    else:
        subs = _axiom_subscripts(x, name)
    for sub in subs:
        if not _check_axiom_at(x, name, sub, report):
            break
    return report.violations


def check_all(x: OmegaStructure, flags: AxiomFlags = FULL_FLAGS, cap: int = 100,
              workers: int = 1) -> dict[str, list[Violation]]:
    """Run associativity, exchange, and every flagged axiom.

    Returns a map from axiom name to its violation list.  ``workers`` bounds
    optional thread parallelism; results are merged in axiom order either way.
    """
    if flags.needs_inverses() and x.inv is None:
        raise InversesAbsent("flags request inverse axioms but structure has no inverses")
    names = flags.axioms()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(check_axiom, x, name, None, cap) for name in names]
            return {name: fut.result() for name, fut in zip(names, futures)}
    return {name: check_axiom(x, name, None, cap) for name in names}


def all_clean(results: dict[str, list[Violation]]) -> bool:
    return all(not v for v in results.values())


# -- serialization ------------------------------------------------------------


def omega_to_json(x: OmegaStructure) -> dict:
    data = globular_set_to_json(x.base)
    data["comp"] = {
        f"{i},{j}": {f"{u}|{v}": w for (u, v), w in sorted(table.items())}
        for (i, j), table in sorted(x.comp.items())
    }
    data["unit"] = [dict(table) for table in x.unit]
    if x.inv is not None:
        data["inv"] = {
            f"{i},{j}": dict(table) for (i, j), table in sorted(x.inv.items())
        }
    return data


def _parse_dim_pair(key: str) -> tuple[int, int]:
    try:
        i, j = key.split(",")
        return int(i), int(j)
    except ValueError as exc:
        raise ValidationError(f"bad dimension pair key {key!r}") from exc


def omega_from_json(data: dict) -> OmegaStructure:
    base = globular_set_from_json(data)
    if "comp" not in data or "unit" not in data:
        raise ValidationError("structure file needs 'comp' and 'unit' fields")
    comp = {
        _parse_dim_pair(key): {split_pair_key(pair): w for pair, w in table.items()}
        for key, table in data["comp"].items()
    }
    inv = None
    if "inv" in data and data["inv"] is not None:
        inv = {_parse_dim_pair(key): dict(table) for key, table in data["inv"].items()}
    return validate_omega(base, comp, data["unit"], inv)
