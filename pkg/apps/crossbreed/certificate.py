"""
消去的符号证明

把每个因子当作符号, 用 D = A + λB 代换两行的 D 因子后, 展开 lhs − rhs 应恒为零。
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

import sympy

from .types import FactorRef, MetaEquation, RowEquation, Term


@dataclass(frozen=True)
class EliminationCertificate:
    lhs: str
    rhs: str
    reduced: str

    @property
    def valid(self) -> bool:
        return self.reduced == "0"


@lru_cache(maxsize=None)
def generic_certificate() -> EliminationCertificate:
    """A_i + λB_i = D_i (i = a, b) ⇒ A_a·B_b + D_b·B_a = A_b·B_a + D_a·B_b"""
    a_a, b_a, a_b, b_b, lam = sympy.symbols("A_a B_a A_b B_b lambda", positive=True)
    d_a = a_a + lam * b_a
    d_b = a_b + lam * b_b
    lhs = a_a * b_b + d_b * b_a
    rhs = a_b * b_a + d_a * b_b
    return EliminationCertificate(str(lhs), str(rhs), str(sympy.expand(lhs - rhs)))


def _symbol(factor: FactorRef) -> sympy.Symbol:
    name = factor.token.replace("(", "_").replace(")", "").replace(",", "_")
    return sympy.Symbol(name, positive=True)


def _side(terms: Tuple[Term, ...], substitutions: Dict[sympy.Symbol, sympy.Expr]) -> sympy.Expr:
    return sympy.Add(*[sympy.Mul(*[substitutions.get(_symbol(f), _symbol(f)) for f in term]) for term in terms])


def meta_certificate(meta: MetaEquation, a: RowEquation, b: RowEquation) -> EliminationCertificate:
    """
    逐因子的证明
    :param meta: a, b 杂交的结果
    :param a: 第一个父行
    :param b: 第二个父行
    """
    lam = sympy.Symbol("lambda", positive=True)
    substitutions: Dict[sympy.Symbol, sympy.Expr] = {}
    for row in (a, b):
        a_product = sympy.Mul(*[_symbol(f) for f in row.a_factors])
        substitutions[_symbol(row.d_factor)] = a_product + lam * _symbol(row.b_factor)
    lhs = _side(meta.lhs_factors, {})
    rhs = _side(meta.rhs_factors, {})
    reduced = sympy.expand(_side(meta.lhs_factors, substitutions) - _side(meta.rhs_factors, substitutions))
    return EliminationCertificate(str(lhs), str(rhs), str(reduced))
