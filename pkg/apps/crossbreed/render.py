"""
LaTeX 输出 (display style)
"""
from typing import Tuple

from apps.levelset.types import Scheme
from apps.specfun.types import FunctionKind

from .types import FactorRef, MetaEquation, RowEquation, Term

_NAMES = {
    FunctionKind.ZETA: r"\zeta",
    FunctionKind.GAMMA: r"\Gamma",
    FunctionKind.JACOBI_CN: r"\mathrm{cn}",
    FunctionKind.BESSEL_J: r"J_{p}",
}


def render_factor(factor: FactorRef, scheme: Scheme) -> str:
    """|F(n s_l^n)|; Simple 方案的点带上标 0"""
    point = r"\overset{0}{s}" if Scheme(scheme) is Scheme.SIMPLE else "s"
    multiplier = "" if factor.row == 1 else str(factor.row)
    argument = f"{multiplier}{point}_{{{factor.slot}}}^{{{factor.row}}}"
    if factor.tag.kind is FunctionKind.JACOBI_CN:
        argument += ",k"
    return f"|{_NAMES[factor.tag.kind]}({argument})|"


def _side(terms: Tuple[Term, ...], scheme: Scheme) -> str:
    return " + ".join("".join(render_factor(f, scheme) for f in term) for term in terms)


def render_latex(meta: MetaEquation) -> str:
    """杂交方程, 两行排版"""
    a, b = meta.rows
    return (
        "\\begin{split}\n"
        f"& ({a})\\times ({b}) \\ \\Rightarrow \\\\\n"
        f"& {_side(meta.lhs_factors, meta.scheme)}= \\\\\n"
        f"& = {_side(meta.rhs_factors, meta.scheme)}\n"
        "\\end{split}"
    )


def render_row(equation: RowEquation) -> str:
    """A + λB = D, λ 记为 Z̃²(α₁^{2,1})"""
    refs = equation.factor_refs
    a = "".join(render_factor(f, equation.scheme) for f in refs[:2])
    b = render_factor(refs[2], equation.scheme)
    d = render_factor(refs[3], equation.scheme)
    return f"{a}+\\tilde{{Z}}^2(\\alpha_1^{{2,1}}){b}={d}"
