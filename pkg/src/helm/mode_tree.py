"""
Hierarchical mode trees: condition-gated modes, each activating a behavior set.

A tree is declared as nested dicts:

    {"name": "root", "behaviors": [...], "children": [
        {"name": "returning", "when": {"any": [{"fact": "self_has_flag"},
                                               {"fact": "self_tagged"}]},
         "behaviors": [...]},
        {"name": "attack", "behaviors": [...]}
    ]}

Nodes inherit the behaviors of their ancestors. Conditions are a small
predicate language over the facts in src.helm.facts: {"fact": name} tests
truthiness, adding any of lt/le/gt/ge/eq compares the fact's value, and
not/all/any combine predicates.
"""
import logging
import operator
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Set, Tuple

from src.helm.behaviors import BehaviorKind, BehaviorSpec
from src.helm.facts import FACTS, HelmContext, evaluate_fact
from src.models.errors import ModeTreeError
from src.models.game import AgentState, GameState

logger = logging.getLogger(__name__)

COMPARATORS = {
    "lt": operator.lt,
    "le": operator.le,
    "gt": operator.gt,
    "ge": operator.ge,
    "eq": operator.eq,
}

MANDATORY_BEHAVIORS = (BehaviorKind.OP_REGION, BehaviorKind.AVOID_COLLISION)

Condition = Optional[Mapping[str, Any]]


def check_condition(cond: Condition, where: str) -> None:
    """Raise ModeTreeError if a predicate is malformed or names an unknown fact"""
    if cond is None:
        return
    if not isinstance(cond, Mapping) or len(cond) == 0:
        raise ModeTreeError(f"{where}: condition must be a non-empty object")
    if "not" in cond:
        if len(cond) != 1:
            raise ModeTreeError(f"{where}: 'not' takes no sibling keys")
        check_condition(cond["not"], where)
        return
    for key in ("all", "any"):
        if key in cond:
            if len(cond) != 1 or not isinstance(cond[key], list) or not cond[key]:
                raise ModeTreeError(f"{where}: '{key}' takes a non-empty list and no sibling keys")
            for item in cond[key]:
                check_condition(item, where)
            return
    name = cond.get("fact")
    if name is None:
        raise ModeTreeError(f"{where}: condition needs one of fact/not/all/any")
    if name not in FACTS:
        raise ModeTreeError(f"{where}: unknown fact {name!r}", code="UNKNOWN_FACT")
    extra = set(cond) - {"fact"} - set(COMPARATORS)
    if extra:
        raise ModeTreeError(f"{where}: unknown condition key(s) {sorted(extra)}")


def evaluate_condition(cond: Condition, own: AgentState, world: GameState, ctx: HelmContext) -> bool:
    if cond is None:
        return True
    if "not" in cond:
        return not evaluate_condition(cond["not"], own, world, ctx)
    if "all" in cond:
        return all(evaluate_condition(c, own, world, ctx) for c in cond["all"])
    if "any" in cond:
        return any(evaluate_condition(c, own, world, ctx) for c in cond["any"])
    value = evaluate_fact(cond["fact"], own, world, ctx)
    tests = [(COMPARATORS[k], v) for k, v in cond.items() if k in COMPARATORS]
    if not tests:
        return bool(value)
    return all(compare(value, bound) for compare, bound in tests)


def condition_facts(cond: Condition) -> Set[str]:
    """Every fact a predicate reads"""
    if cond is None:
        return set()
    if "not" in cond:
        return condition_facts(cond["not"])
    for key in ("all", "any"):
        if key in cond:
            found: Set[str] = set()
            for item in cond[key]:
                found |= condition_facts(item)
            return found
    return {cond["fact"]}


@dataclass(frozen=True)
class ModeNode:
    name: str
    when: Condition = None
    behaviors: Tuple[BehaviorSpec, ...] = ()
    children: Tuple["ModeNode", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"name": self.name}
        if self.when is not None:
            data["when"] = self.when
        if self.behaviors:
            data["behaviors"] = [b.to_dict() for b in self.behaviors]
        if self.children:
            data["children"] = [c.to_dict() for c in self.children]
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], path: str = "") -> "ModeNode":
        name = data.get("name")
        if not name:
            raise ModeTreeError(f"mode node at '{path or '/'}' has no name")
        where = f"{path}/{name}"
        when = data.get("when")
        check_condition(when, where)
        behaviors = tuple(BehaviorSpec.from_dict(b) for b in data.get("behaviors", []))
        children = tuple(cls.from_dict(c, where) for c in data.get("children", []))
        return cls(name=name, when=when, behaviors=behaviors, children=children)


@dataclass(frozen=True)
class ModeLeaf:
    """A leaf flattened with its ancestor condition chain and inherited behaviors"""
    name: str
    path: str
    conditions: Tuple[Condition, ...]
    behaviors: Tuple[BehaviorSpec, ...]

    @property
    def unconditional(self) -> bool:
        return all(c is None for c in self.conditions)


@dataclass(frozen=True)
class ModeSelection:
    mode: str
    behaviors: Tuple[BehaviorSpec, ...]


@dataclass(frozen=True)
class ModeTree:
    root: ModeNode
    leaves: Tuple[ModeLeaf, ...] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "leaves", tuple(self._flatten(self.root, "", (), ())))

    def _flatten(self, node: ModeNode, path: str, conditions, behaviors):
        path = f"{path}/{node.name}"
        conditions = conditions + (node.when,)
        behaviors = behaviors + node.behaviors
        if node.is_leaf:
            yield ModeLeaf(node.name, path, conditions, behaviors)
            return
        for child in node.children:
            yield from self._flatten(child, path, conditions, behaviors)

    def violations(self) -> List[str]:
        found = []
        if not any(leaf.unconditional for leaf in self.leaves):
            found.append(f"tree '{self.root.name}' has no default leaf")
        for leaf in self.leaves:
            kinds = {b.kind for b in leaf.behaviors}
            for kind in MANDATORY_BEHAVIORS:
                if kind not in kinds:
                    found.append(f"leaf '{leaf.path}' is missing mandatory behavior {kind.value}")
            for spec in leaf.behaviors:
                found.extend(f"leaf '{leaf.path}': {v}" for v in spec.validate())
        return sorted(set(found), key=found.index)

    def check(self) -> "ModeTree":
        """Raise ModeTreeError if the tree cannot guarantee exactly one valid leaf"""
        found = self.violations()
        if found:
            code = "NO_DEFAULT_LEAF" if any("no default leaf" in v for v in found) else None
            raise ModeTreeError("; ".join(found), code=code)
        return self

    def facts(self) -> Set[str]:
        names: Set[str] = set()
        for leaf in self.leaves:
            for cond in leaf.conditions:
                names |= condition_facts(cond)
        return names

    def to_dict(self) -> Dict[str, Any]:
        return self.root.to_dict()

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ModeTree":
        return cls(ModeNode.from_dict(data)).check()


def select_mode(tree: ModeTree,
                own: AgentState,
                world: GameState,
                ctx: Optional[HelmContext] = None) -> ModeSelection:
    """Depth-first: the first leaf whose whole ancestor chain holds wins"""
    ctx = ctx or HelmContext()
    for leaf in tree.leaves:
        if all(evaluate_condition(c, own, world, ctx) for c in leaf.conditions):
            return ModeSelection(leaf.name, leaf.behaviors)
    raise ModeTreeError(f"no leaf of tree '{tree.root.name}' is satisfiable", code="NO_DEFAULT_LEAF")
