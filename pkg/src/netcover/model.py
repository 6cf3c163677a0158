"""Solver-agnostic MILP container and its LP-format writer."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ModelError

BINARY = "binary"
CONTINUOUS = "continuous"
SENSES = ("<=", ">=", "=")
OBJ_CONST = "obj_const"


@dataclass
class Var:
    name: str
    kind: str
    lb: float
    ub: float


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[float, str], ...]
    sense: str
    rhs: float
    family: str


@dataclass
class ModelSpec:
    name: str = "netcover"
    variables: list[Var] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[str, float] = field(default_factory=dict)
    objective_constant: float = 0.0
    varmap: dict[str, tuple] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    # -- construction -------------------------------------------------------
    def add_var(self, name: str, kind: str, lb: float = 0.0, ub: float = math.inf,
                entity: tuple | None = None) -> str:
        if name in self._index:
            raise ModelError(f"duplicate variable {name}")
        if kind == BINARY:
            lb, ub = max(0.0, lb), min(1.0, ub)
        self._index[name] = len(self.variables)
        self.variables.append(Var(name, kind, float(lb), float(ub)))
        if entity is not None:
            self.varmap[name] = entity
        return name

    def var(self, name: str) -> Var:
        try:
            return self.variables[self._index[name]]
        except KeyError:
            raise ModelError(f"unknown variable {name}") from None

    def has(self, name: str) -> bool:
        return name in self._index

    def fix(self, name: str, value: float) -> None:
        v = self.var(name)
        v.lb = v.ub = float(value)

    def add_constr(self, name: str, terms: Iterable[tuple[float, str]], sense: str,
                   rhs: float, family: str) -> None:
        if sense not in SENSES:
            raise ModelError(f"bad sense {sense!r}")
        merged: dict[str, float] = {}
        for coef, vname in terms:
            if vname not in self._index:
                raise ModelError(f"constraint {name} uses unknown variable {vname}")
            merged[vname] = merged.get(vname, 0.0) + float(coef)
        packed = tuple((c, v) for v, c in merged.items() if c != 0.0)
        if not packed:
            if not _holds(0.0, sense, rhs, 1e-9):
                raise ModelError(f"constraint {name} is an infeasible constant row")
            return
        self.constraints.append(Constraint(name, packed, sense, float(rhs), family))

    def set_objective(self, coefs: Mapping[str, float], constant: float = 0.0) -> None:
        for v in coefs:
            self.var(v)
        self.objective = {k: float(c) for k, c in coefs.items() if c != 0.0}
        self.objective_constant = float(constant)

    # -- inspection ---------------------------------------------------------
    def counts(self) -> dict:
        fam = Counter(c.family for c in self.constraints)
        return {
            "variables": len(self.variables),
            "binaries": sum(v.kind == BINARY for v in self.variables),
            "continuous": sum(v.kind == CONTINUOUS for v in self.variables),
            "constraints": len(self.constraints),
            "nonzeros": sum(len(c.terms) for c in self.constraints),
            "families": dict(sorted(fam.items())),
        }

    def objective_value(self, values: Mapping[str, float]) -> float:
        return self.objective_constant + math.fsum(
            c * values.get(v, 0.0) for v, c in self.objective.items()
        )

    def violations(self, values: Mapping[str, float], tol: float = 1e-6) -> list[tuple[str, float]]:
        """Rows, bounds and integrality violated by ``values`` beyond ``tol·(1+|rhs|)``."""
        bad = []
        for v in self.variables:
            if v.name not in values:
                bad.append((f"missing:{v.name}", math.inf))
                continue
            x = values[v.name]
            if x < v.lb - tol * (1 + abs(v.lb)) or x > v.ub + tol * (1 + abs(v.ub)):
                bad.append((f"bound:{v.name}", x))
            if v.kind == BINARY and min(abs(x), abs(x - 1)) > tol:
                bad.append((f"integrality:{v.name}", x))
        for c in self.constraints:
            lhs = math.fsum(coef * values.get(n, 0.0) for coef, n in c.terms)
            if not _holds(lhs, c.sense, c.rhs, tol * (1 + abs(c.rhs))):
                bad.append((c.name, lhs - c.rhs))
        return bad


def _holds(lhs: float, sense: str, rhs: float, tol: float) -> bool:
    if sense == "<=":
        return lhs <= rhs + tol
    if sense == ">=":
        return lhs >= rhs - tol
    return abs(lhs - rhs) <= tol


# ---- LP text format -------------------------------------------------------

_WRAP = 200


def _num(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _expr(terms: Iterable[tuple[float, str]]) -> list[str]:
    toks = []
    for i, (c, v) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = v if mag == 1 else f"{_num(mag)} {v}"
        if i == 0 and sign == "+":
            toks.append(body)
        else:
            toks.append(f"{sign} {body}")
    return toks


def _wrapped(head: str, toks: list[str], tail: str = "") -> list[str]:
    lines, cur = [], head
    for t in toks + ([tail] if tail else []):
        if len(cur) + 1 + len(t) > _WRAP and cur.strip():
            lines.append(cur)
            cur = "   " + t
        else:
            cur = f"{cur} {t}" if cur else t
    lines.append(cur)
    return lines


def emit(model: ModelSpec) -> str:
    """Render the model in CPLEX-style LP text, deterministically."""
    names = [v.name for v in model.variables]
    if OBJ_CONST in model._index:
        raise ModelError(f"variable name {OBJ_CONST} is reserved")
    out = [f"\\ {model.name}", "Minimize"]
    obj_terms = [(model.objective[n], n) for n in names if n in model.objective]
    if model.objective_constant:
        obj_terms.append((model.objective_constant, OBJ_CONST))
    toks = _expr(obj_terms) or ["0 " + (names[0] if names else OBJ_CONST)]
    out += _wrapped(" obj:", toks)
    out.append("Subject To")
    for c in model.constraints:
        sense = {"<=": "<=", ">=": ">=", "=": "="}[c.sense]
        out += _wrapped(f" {c.name}:", _expr(c.terms), f"{sense} {_num(c.rhs)}")
    out.append("Bounds")
    for v in model.variables:
        if v.lb == v.ub:
            out.append(f" {v.name} = {_num(v.lb)}")
        elif v.kind == BINARY:
            continue
        elif math.isinf(v.ub):
            if v.lb != 0.0:
                out.append(f" {v.name} >= {_num(v.lb)}")
        else:
            out.append(f" {_num(v.lb)} <= {v.name} <= {_num(v.ub)}")
    if model.objective_constant or not names:
        out.append(f" 1 <= {OBJ_CONST} <= 1")
    bins = [v.name for v in model.variables if v.kind == BINARY]
    if bins:
        out.append("Binaries")
        line = ""
        for b in bins:
            if len(line) + len(b) + 1 > _WRAP:
                out.append(line)
                line = ""
            line = f"{line} {b}"
        out.append(line)
    out.append("End")
    return "\n".join(out) + "\n"
