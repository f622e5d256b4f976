"""
Solver-agnostic standard form for the lifted convex subproblems.

A problem has Hermitian PSD matrix variables, bounded real scalar variables,
a linear objective and constraints of the form

    Re sum_i Tr(A_i X_i) + sum_j c_j t_j + const
        + sum_l a_l ln(affine_l) + sum_m b_m / t_m   {<=, =, >=}   rhs

where log and inverse terms must keep the constraint convex: on a ``<=``
constraint log coefficients are non-positive and inverse coefficients
non-negative, and the reverse on ``>=``. Equalities are purely linear.
"""

from enum import Enum
from typing import Dict, List, Mapping, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from aether.core.exceptions import ContractError, DimensionMismatchError

HERMITIAN_TOL = 1e-10


class Sense(str, Enum):
    LE = "<="
    EQ = "=="
    GE = ">="


class ObjectiveSense(str, Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"
    FEASIBILITY = "feasibility"


class MatrixVar(BaseModel):
    name: str
    dim: int = Field(ge=1)


class ScalarVar(BaseModel):
    name: str
    lower: Optional[float] = None
    upper: Optional[float] = None

    @model_validator(mode="after")
    def validate_bounds(self):
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise ContractError(f"scalar {self.name} has lower bound above upper bound")
        return self


class LinearExpression(BaseModel):
    """Re sum Tr(A X) + sum c t + constant"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    matrix_coeffs: Dict[str, np.ndarray] = Field(default_factory=dict)
    scalar_coeffs: Dict[str, float] = Field(default_factory=dict)
    constant: float = 0.0

    @field_validator("matrix_coeffs", mode="before")
    def as_complex(cls, v):
        return {name: np.asarray(a, dtype=complex) for name, a in (v or {}).items()}

    def evaluate(self, matrices: Mapping[str, np.ndarray], scalars: Mapping[str, float]) -> float:
        value = self.constant
        for name, A in self.matrix_coeffs.items():
            value += float(np.real(np.sum(A.T * matrices[name])))
        for name, c in self.scalar_coeffs.items():
            value += c * float(scalars[name])
        return value

    def __add__(self, other: "LinearExpression") -> "LinearExpression":
        matrices = dict(self.matrix_coeffs)
        for name, A in other.matrix_coeffs.items():
            matrices[name] = matrices[name] + A if name in matrices else A
        scalars = dict(self.scalar_coeffs)
        for name, c in other.scalar_coeffs.items():
            scalars[name] = scalars.get(name, 0.0) + c
        return LinearExpression(matrix_coeffs=matrices, scalar_coeffs=scalars, constant=self.constant + other.constant)

    def scaled(self, factor: float) -> "LinearExpression":
        return LinearExpression(
            matrix_coeffs={n: factor * A for n, A in self.matrix_coeffs.items()},
            scalar_coeffs={n: factor * c for n, c in self.scalar_coeffs.items()},
            constant=factor * self.constant,
        )


class LogTerm(BaseModel):
    """coefficient * ln(argument)"""
    coefficient: float
    argument: LinearExpression
    reference: Optional[float] = None  # argument value at the expansion point


class InverseTerm(BaseModel):
    """coefficient / scalar"""
    coefficient: float
    scalar: str


class Constraint(BaseModel):
    expr: LinearExpression
    sense: Sense
    rhs: float = 0.0
    logs: List[LogTerm] = Field(default_factory=list)
    inverses: List[InverseTerm] = Field(default_factory=list)
    label: str = ""

    @model_validator(mode="after")
    def validate_curvature(self):
        if self.sense == Sense.EQ and (self.logs or self.inverses):
            raise ContractError(f"equality constraint {self.label!r} must be linear")
        sign = 1.0 if self.sense == Sense.GE else -1.0
        if any(sign * t.coefficient < 0 for t in self.logs):
            raise ContractError(f"log term in {self.label!r} makes the constraint non-convex")
        if any(sign * t.coefficient > 0 for t in self.inverses):
            raise ContractError(f"inverse term in {self.label!r} makes the constraint non-convex")
        return self

    def lhs(self, matrices: Mapping[str, np.ndarray], scalars: Mapping[str, float]) -> float:
        value = self.expr.evaluate(matrices, scalars)
        for term in self.logs:
            arg = term.argument.evaluate(matrices, scalars)
            value += term.coefficient * (np.log(arg) if arg > 0 else -np.inf)
        for term in self.inverses:
            t = float(scalars[term.scalar])
            value += term.coefficient / t if t > 0 else np.inf * np.sign(term.coefficient)
        return float(value)

    def violation(self, matrices: Mapping[str, np.ndarray], scalars: Mapping[str, float]) -> float:
        """Constraint violation scaled by max(1, |rhs|); 0 when satisfied"""
        lhs = self.lhs(matrices, scalars)
        if not np.isfinite(lhs):
            return np.inf
        gap = {Sense.LE: lhs - self.rhs, Sense.GE: self.rhs - lhs, Sense.EQ: abs(lhs - self.rhs)}[self.sense]
        return max(0.0, gap) / max(1.0, abs(self.rhs))


class Objective(BaseModel):
    sense: ObjectiveSense = ObjectiveSense.FEASIBILITY
    expr: LinearExpression = Field(default_factory=LinearExpression)


class HermitianSdpProblem(BaseModel):
    """One lifted convex subproblem"""

    name: str = "sdp"
    matrix_vars: List[MatrixVar] = Field(default_factory=list)
    scalar_vars: List[ScalarVar] = Field(default_factory=list)
    objective: Objective = Field(default_factory=Objective)
    constraints: List[Constraint] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_problem(self):
        dims = {v.name: v.dim for v in self.matrix_vars}
        scalars = {v.name for v in self.scalar_vars}
        if len(dims) != len(self.matrix_vars) or len(scalars) != len(self.scalar_vars):
            raise ContractError("variable names must be unique")
        expressions = [self.objective.expr]
        for c in self.constraints:
            expressions.append(c.expr)
            expressions.extend(t.argument for t in c.logs)
            for t in c.inverses:
                if t.scalar not in scalars:
                    raise ContractError(f"unknown scalar {t.scalar!r} in {c.label!r}")
        for expr in expressions:
            for name, A in expr.matrix_coeffs.items():
                if name not in dims:
                    raise ContractError(f"unknown matrix variable {name!r}")
                if A.shape != (dims[name], dims[name]):
                    raise DimensionMismatchError(f"coefficient for {name!r} has shape {A.shape}")
                scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
                if not np.allclose(A, A.conj().T, atol=HERMITIAN_TOL * scale):
                    raise ContractError(f"coefficient for {name!r} is not Hermitian")
            for name in expr.scalar_coeffs:
                if name not in scalars:
                    raise ContractError(f"unknown scalar variable {name!r}")
        return self

    @property
    def has_log_terms(self) -> bool:
        return any(c.logs for c in self.constraints)


def trace_term(name: str, A: np.ndarray) -> LinearExpression:
    """Re Tr(A X_name)"""
    return LinearExpression(matrix_coeffs={name: A})


def scalar_term(name: str, coefficient: float = 1.0) -> LinearExpression:
    return LinearExpression(scalar_coeffs={name: coefficient})


def constant(value: float) -> LinearExpression:
    return LinearExpression(constant=value)


def linear_sum(terms: List[LinearExpression]) -> LinearExpression:
    total = LinearExpression()
    for t in terms:
        total = total + t
    return total
