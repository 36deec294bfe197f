"""
排版对照表

记录已发表的各个杂交结果的因子 (含排印错误), 与由消去代数得到的规范形式比较。
因子记号 kind(倍数,位置,上标); {a}, {b} 代表两个父行, a 为显示中的第一行。
项内因子的次序不参与比较。
"""
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from apps.levelset.types import Scheme

from .assignment import cell_of, residue
from .types import SAME_RESIDUE, MetaEquation, term_tokens

Side = Tuple[Tuple[str, ...], ...]


@dataclass(frozen=True)
class TypesetReference:
    key: str
    lhs: Side
    rhs: Side
    notes: Tuple[str, ...] = ()

    def render(self, a: int, b: int) -> Tuple[List[str], List[str]]:
        def flat(side: Side) -> List[str]:
            return [token.format(a=a, b=b) for term in side for token in term]

        return flat(self.lhs), flat(self.rhs)


@dataclass
class TypesetDiff:
    reference: str
    rows: Tuple[int, int]
    lhs_missing: List[str] = field(default_factory=list)
    lhs_unexpected: List[str] = field(default_factory=list)
    rhs_missing: List[str] = field(default_factory=list)
    rhs_unexpected: List[str] = field(default_factory=list)
    notes: Tuple[str, ...] = ()

    @property
    def matches(self) -> bool:
        return not (self.lhs_missing or self.lhs_unexpected or self.rhs_missing or self.rhs_unexpected)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "reference": self.reference,
            "rows": list(self.rows),
            "matches": self.matches,
            "lhs_missing": self.lhs_missing,
            "lhs_unexpected": self.lhs_unexpected,
            "rhs_missing": self.rhs_missing,
            "rhs_unexpected": self.rhs_unexpected,
            "notes": list(self.notes),
        }


TYPESET_TABLE: Dict[str, TypesetReference] = {
    "simple": TypesetReference(
        "simple",
        lhs=(("zeta({a},1,{a})", "Gamma({a},2,{a})", "cn({b},3,{b})"), ("J({b},4,{b})", "cn({a},3,{a})")),
        rhs=(("zeta({b},1,{b})", "Gamma({b},2,{b})", "cn({a},3,{a})"), ("J({a},4,{a})", "cn({b},3,{b})")),
        notes=("row display prints zeta in the third factor; cn is meant",),
    ),
    "cell0:1x2": TypesetReference(
        "cell0:1x2",
        lhs=(("zeta(1,1,1)", "Gamma(1,2,1)", "J(2,3,2)"), ("zeta(2,4,2)", "cn(1,3,1)")),
        rhs=(("Gamma(2,1,2)", "cn(2,2,2)", "cn(1,3,1)"), ("J(1,4,1)", "J(2,3,2)")),
        notes=("row 2 display attaches the modulus k to J_p",),
    ),
    "cell0:1x3": TypesetReference(
        "cell0:1x3",
        lhs=(("zeta(1,1,1)", "zeta(3,3,3)", "Gamma(1,2,1)"), ("Gamma(3,4,3)", "cn(1,3,1)")),
        rhs=(("cn(1,3,1)", "cn(3,1,3)", "J(3,2,3)"), ("J(1,4,1)", "zeta(3,3,3)")),
    ),
    "cell0:1x4": TypesetReference(
        "cell0:1x4",
        lhs=(("zeta(1,1,1)", "Gamma(1,2,1)", "Gamma(4,3,4)"), ("cn(1,3,1)", "cn(4,4,4)")),
        rhs=(("zeta(4,2,4)", "J(4,1,4)", "cn(1,3,1)"), ("J(1,4,1)", "Gamma(4,3,4)")),
    ),
    "cell0:2x3": TypesetReference(
        "cell0:2x3",
        lhs=(("zeta(3,3,3)", "Gamma(2,1,2)", "cn(2,2,2)"), ("Gamma(3,3,4)", "J(2,3,2)")),
        rhs=(("cn(3,1,3)", "J(2,3,2)", "J(3,2,3)"), ("zeta(3,3,3)", "zeta(2,4,2)")),
    ),
    "cell0:2x4": TypesetReference(
        "cell0:2x4",
        lhs=(("Gamma(2,1,2)", "Gamma(4,3,4)", "cn(2,2,2)"), ("cn(4,4,4)", "J(2,3,2)")),
        rhs=(("J(2,3,2)", "J(4,1,4)", "zeta(4,2,4)"), ("zeta(2,4,2)", "zeta(4,3,4)")),
    ),
    "cell0:3x4": TypesetReference(
        "cell0:3x4",
        lhs=(("cn(3,1,3)", "J(3,2,3)", "Gamma(4,3,4)"), ("cn(4,4,4)", "zeta(3,3,3)")),
        rhs=(("J(4,1,4)", "zeta(3,3,3)", "zeta(4,2,4)"), ("Gamma(3,3,4)", "Gamma(4,3,4)")),
    ),
    "cross:(1,2)": TypesetReference(
        "cross:(1,2)",
        lhs=(("zeta({a},1,{a})", "Gamma({a},2,{a})", "J({b},3,{b})"), ("zeta({b},4,{b})", "cn({a},3,{a})")),
        rhs=(("Gamma({b},1,{b})", "cn({b},2,{b})", "cn({a},3,{a})"), ("J({a},4,{a})", "J({b},3,{b})")),
    ),
    "cross:(3,4)": TypesetReference(
        "cross:(3,4)",
        lhs=(("cn({a},1,{a})", "J({a},2,{a})", "Gamma({b},2,{b})"), ("cn({b},4,{b})", "zeta({a},3,{a})")),
        rhs=(("J({b},1,{b})", "zeta({a},3,{a})", "zeta({b},2,{b})"), ("Gamma({a},4,{a})", "Gamma({b},3,{b})")),
        notes=("row 4m+4 display attaches the modulus k to J_p",),
    ),
    "same-residue:1": TypesetReference(
        "same-residue:1",
        lhs=(("zeta({a},1,{a})", "Gamma({a},2,{a})", "cn({b},3,{b})"), ("J({b},4,{b})", "cn({a},3,{a})")),
        rhs=(("zeta({b},1,{b})", "Gamma({b},2,{b})", "cn({a},3,{a})"), ("J({a},4,{a})", "cn({b},2,{b})")),
    ),
}


def reference_for(meta: MetaEquation) -> Optional[Tuple[TypesetReference, int, int]]:
    """对应的发表形式及其 (a, b); 没有发表形式时返回 None"""
    x, y = meta.rows
    if Scheme(meta.scheme) is Scheme.SIMPLE:
        return TYPESET_TABLE["simple"], x, y
    qx, qy = residue(x), residue(y)
    if meta.pair_class.label == SAME_RESIDUE:
        return (TYPESET_TABLE["same-residue:1"], x, y) if qx == 1 else None
    a, b = (x, y) if qx < qy else (y, x)
    if cell_of(a) == 0 and cell_of(b) == 0:
        return TYPESET_TABLE[f"cell0:{a}x{b}"], a, b
    if cell_of(a) != cell_of(b):
        key = f"cross:({residue(a)},{residue(b)})"
        if key in TYPESET_TABLE:
            return TYPESET_TABLE[key], a, b
    return None


def _counter_diff(canonical: List[str], printed: List[str]) -> Tuple[List[str], List[str]]:
    want, got = Counter(canonical), Counter(printed)
    return sorted((want - got).elements()), sorted((got - want).elements())


def typeset_diff(meta: MetaEquation) -> Optional[TypesetDiff]:
    """规范形式相对发表形式缺少 (missing) 与多出 (unexpected) 的因子"""
    found = reference_for(meta)
    if found is None:
        return None
    reference, a, b = found
    printed_lhs, printed_rhs = reference.render(a, b)
    lhs = [t for term in term_tokens(meta.lhs_factors) for t in term]
    rhs = [t for term in term_tokens(meta.rhs_factors) for t in term]
    if meta.rows[0] != a:
        lhs, rhs = rhs, lhs

    diff = TypesetDiff(reference.key, (a, b), notes=reference.notes)
    diff.lhs_missing, diff.lhs_unexpected = _counter_diff(lhs, printed_lhs)
    diff.rhs_missing, diff.rhs_unexpected = _counter_diff(rhs, printed_rhs)
    return diff
