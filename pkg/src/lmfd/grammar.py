"""The canonical two-sensor equation language.

Equations combine at most two sensor roles (s1, s2) with addition,
multiplication, and division, plus three monotone functors: sigmoid, exp
(with an inner scaling constant), and a windowed exponential moving average
(with an integer span constant).  The production rules are pruned so that no
two generated structures can be rewritten into each other by rank-preserving
transforms (scaling, translation, monotone functions):

* only the right operand of an addition carries a scaling constant (relative
  scaling needs one constant, not two);
* products and quotients carry no outer scaling constant at all;
* division by an exp term is excluded (a negated exp constant expresses it);
* exp has no inner additive constant (it factors out as an outer scale);
* the quotient of the s2 role by itself is constant and is removed.

The result is exactly 55 distinct structures with at most 3 constants each.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .errors import SpanOutOfRange, ValueOutOfBounds

S1 = "s1"
S2 = "s2"

SENSOR_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")

#: slot ids reserved by the language; never valid as sensor names in equations
SLOT_IDS = ("c1", "c2", "c3", "c4", "c5")


@dataclass(frozen=True)
class ConstSlot:
    """A typed constant position inside a structure.

    ``continuous`` slots (c1, c2, c3) scale series and live in [-1, 1];
    ``span`` slots (c4, c5) are EWMA window sizes in [1, n-1] for data of
    length n.
    """

    id: str
    kind: str  # "continuous" | "span"

    def check(self, value, n: int | None = None) -> None:
        if self.kind == "continuous":
            if not -1.0 <= float(value) <= 1.0:
                raise ValueOutOfBounds(
                    f"{self.id} = {value} outside [-1, 1]"
                )
        else:
            if int(value) != value:
                raise SpanOutOfRange(f"{self.id} = {value} must be an integer")
            if value < 1 or (n is not None and value > n - 1):
                upper = f"{n - 1}" if n is not None else "n-1"
                raise SpanOutOfRange(
                    f"{self.id} = {value} outside [1, {upper}]"
                )


C1 = ConstSlot("c1", "continuous")  # scale on the added term
C2 = ConstSlot("c2", "continuous")  # exp scale, s1 role
C3 = ConstSlot("c3", "continuous")  # exp scale, s2 role
C4 = ConstSlot("c4", "span")  # ewma span, s1 role
C5 = ConstSlot("c5", "span")  # ewma span, s2 role


@dataclass(frozen=True)
class Sensor:
    role: str  # S1 | S2


@dataclass(frozen=True)
class Sigmoid:
    child: Sensor


@dataclass(frozen=True)
class Exp:
    scale: ConstSlot
    child: Sensor


@dataclass(frozen=True)
class Ewma:
    span: ConstSlot
    child: Sensor


@dataclass(frozen=True)
class Scale:
    coeff: ConstSlot
    child: "ExprNode"


@dataclass(frozen=True)
class Add:
    left: "ExprNode"
    right: Scale


@dataclass(frozen=True)
class Mul:
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Div:
    left: "ExprNode"
    right: "ExprNode"


ExprNode = Union[Sensor, Sigmoid, Exp, Ewma, Scale, Add, Mul, Div]


def walk_slots(node: ExprNode) -> list[ConstSlot]:
    """Constant slots reachable from ``node``, in rendered left-to-right order."""
    if isinstance(node, Sensor):
        return []
    if isinstance(node, Sigmoid):
        return walk_slots(node.child)
    if isinstance(node, Exp):
        return [node.scale] + walk_slots(node.child)
    if isinstance(node, Ewma):
        return walk_slots(node.child) + [node.span]
    if isinstance(node, Scale):
        return [node.coeff] + walk_slots(node.child)
    return walk_slots(node.left) + walk_slots(node.right)


def roles_used(node: ExprNode) -> set[str]:
    """Sensor roles read by ``node``."""
    if isinstance(node, Sensor):
        return {node.role}
    if isinstance(node, (Sigmoid, Exp, Ewma, Scale)):
        return roles_used(node.child)
    return roles_used(node.left) | roles_used(node.right)


@dataclass(frozen=True)
class EquationStructure:
    """One constant-unassigned equation shape, with a stable id in 0..54."""

    structure_id: int
    root: ExprNode

    @property
    def slots(self) -> tuple[ConstSlot, ...]:
        return tuple(walk_slots(self.root))

    @property
    def roles(self) -> set[str]:
        return roles_used(self.root)


# term alternatives for each nonterminal, in production order
_A2 = (
    Sensor(S1),
    Sensor(S2),
    Ewma(C4, Sensor(S1)),
    Sigmoid(Sensor(S1)),
    Exp(C2, Sensor(S1)),
)
_B1 = (
    Sensor(S2),
    Ewma(C5, Sensor(S2)),
    Sigmoid(Sensor(S2)),
    Exp(C3, Sensor(S2)),
)
_B2 = (
    Sensor(S2),
    Ewma(C5, Sensor(S2)),
    Sigmoid(Sensor(S2)),
)


@lru_cache(maxsize=1)
def _structures() -> tuple[EquationStructure, ...]:
    roots: list[ExprNode] = [Sensor(S1)]
    for a in _A2:
        for b in _B1:
            roots.append(Add(a, Scale(C1, b)))
    for a in _A2:
        for b in _B1:
            roots.append(Mul(a, b))
    for a in _A2:
        for b in _B2:
            if a == Sensor(S2) and b == Sensor(S2):
                continue  # s2 / s2 is constant, monotonicity 0 by construction
            roots.append(Div(a, b))
    return tuple(
        EquationStructure(structure_id=i, root=root) for i, root in enumerate(roots)
    )


def enumerate_structures() -> list[EquationStructure]:
    """All 55 canonical structures in stable id order.

    The order follows the production rules: the bare s1 structure first, then
    the 20 additions, 20 multiplications, and 14 divisions, expanding the
    left-term alternatives outer and the right-term alternatives inner.
    """
    return list(_structures())


def get_structure(structure_id: int) -> EquationStructure:
    structures = _structures()
    if not 0 <= structure_id < len(structures):
        raise ValueOutOfBounds(
            f"structure_id must lie in [0, {len(structures) - 1}], got {structure_id}"
        )
    return structures[structure_id]


def _format_value(value, slot: ConstSlot, precision: int | None) -> str:
    if slot.kind == "span":
        return str(int(value))
    if precision is None:
        return repr(float(value))
    return f"{float(value):.{precision}f}"


def _render_node(
    node: ExprNode,
    names: dict[str, str],
    values: dict[str, float] | None,
    precision: int | None,
) -> str:
    def const(slot: ConstSlot) -> str:
        if values is None or slot.id not in values:
            return slot.id
        return _format_value(values[slot.id], slot, precision)

    if isinstance(node, Sensor):
        return names[node.role]
    if isinstance(node, Sigmoid):
        return f"sigmoid({_render_node(node.child, names, values, precision)})"
    if isinstance(node, Exp):
        return f"exp({const(node.scale)}*{_render_node(node.child, names, values, precision)})"
    if isinstance(node, Ewma):
        return f"ewma({_render_node(node.child, names, values, precision)}, {const(node.span)})"
    if isinstance(node, Scale):
        return f"{const(node.coeff)}*{_render_node(node.child, names, values, precision)}"
    op = {Add: " + ", Mul: " * ", Div: " / "}[type(node)]
    return (
        _render_node(node.left, names, values, precision)
        + op
        + _render_node(node.right, names, values, precision)
    )


def render(
    structure: EquationStructure,
    s1_name: str = "s1",
    s2_name: str = "s2",
    values: dict[str, float] | None = None,
    precision: int | None = None,
) -> str:
    """Render a structure as equation text.

    Unassigned slots appear as their ids (c1..c5).  ``precision=None`` gives
    shortest round-trip formatting (used in JSON reports, where re-parsing
    must reproduce the exact constants); ``precision=3`` gives the fixed
    3-decimal form used in human-readable listings.
    """
    if values:
        by_id = {slot.id: slot for slot in structure.slots}
        for slot_id, value in values.items():
            if slot_id not in by_id:
                raise ValueOutOfBounds(
                    f"structure {structure.structure_id} has no slot {slot_id!r}"
                )
            by_id[slot_id].check(value)
    return _render_node(
        structure.root, {S1: s1_name, S2: s2_name}, values, precision
    )
