"""
Text dump of a ``HermitianSdpProblem`` for cross-checking with other solvers.

Layout::

    aether-sdp 1 <name>
    matrix <name> <dim>                 one line per matrix variable
    scalar <name> <lower|-> <upper|->   one line per scalar variable
    objective <minimize|maximize|feasibility>
    <expression block>
    constraint <label> <sense> <rhs>
    <expression block>
    log <coefficient>                   followed by the argument's block
    inverse <coefficient> <scalar>

An expression block lists ``const <value>``, ``coef <scalar> <value>`` and
``entry <matrix> <row> <col> <re> <im>`` lines for the nonzero upper-triangle
entries of each coefficient matrix, then ``end``.
"""

from pathlib import Path
from typing import List, Union

import numpy as np

from aether.core.conic.problem import HermitianSdpProblem, LinearExpression


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _expression_lines(expr: LinearExpression) -> List[str]:
    lines = [f"const {_fmt(expr.constant)}"]
    for name, c in expr.scalar_coeffs.items():
        lines.append(f"coef {name} {_fmt(c)}")
    for name, A in expr.matrix_coeffs.items():
        rows, cols = np.triu_indices(A.shape[0])
        for i, j in zip(rows, cols):
            value = A[i, j]
            if value != 0:
                lines.append(f"entry {name} {i} {j} {_fmt(value.real)} {_fmt(value.imag)}")
    lines.append("end")
    return lines


def dump_problem(problem: HermitianSdpProblem, path: Union[str, Path]) -> Path:
    """Write the problem in the documented text form and return the path"""
    lines = [f"aether-sdp 1 {problem.name}"]
    lines += [f"matrix {v.name} {v.dim}" for v in problem.matrix_vars]
    for v in problem.scalar_vars:
        lower = "-" if v.lower is None else _fmt(v.lower)
        upper = "-" if v.upper is None else _fmt(v.upper)
        lines.append(f"scalar {v.name} {lower} {upper}")
    lines.append(f"objective {problem.objective.sense.value}")
    lines += _expression_lines(problem.objective.expr)
    for index, c in enumerate(problem.constraints):
        label = c.label or f"c{index}"
        lines.append(f"constraint {label.replace(' ', '_')} {c.sense.value} {_fmt(c.rhs)}")
        lines += _expression_lines(c.expr)
        for term in c.logs:
            lines.append(f"log {_fmt(term.coefficient)}")
            lines += _expression_lines(term.argument)
        for term in c.inverses:
            lines.append(f"inverse {_fmt(term.coefficient)} {term.scalar}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
