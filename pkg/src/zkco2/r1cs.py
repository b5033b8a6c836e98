"""Rank-1 constraint systems: variables, linear combinations, satisfaction.

A constraint is a triple of linear combinations (A, B, C) over allocated
variables meaning A*B = C in the proof field.  Variable 0 is the constant
one.  Builders record, alongside each allocated variable, how to compute
its value from named prover inputs, so a witness can be synthesized for
any input set and checked with is_satisfied.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .fields import P


class UnallocatedVariable(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class IncompleteInput(ValueError):
    """Witness synthesis lacks a named prover input."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"missing prover input: {name}")


@dataclass(frozen=True)
class Variable:
    index: int
    public: bool = False


class LC:
    """Sparse linear combination {variable index: coefficient}."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, int] | None = None):
        self.terms = terms or {}

    @staticmethod
    def of(value) -> "LC":
        if isinstance(value, LC):
            return value
        if isinstance(value, Variable):
            return LC({value.index: 1})
        if isinstance(value, int):
            return LC({0: value % P}) if value % P else LC()
        raise TypeError(f"cannot interpret {type(value).__name__} as a linear combination")

    def __add__(self, other) -> "LC":
        other = LC.of(other)
        terms = dict(self.terms)
        for idx, coef in other.terms.items():
            new = (terms.get(idx, 0) + coef) % P
            if new:
                terms[idx] = new
            else:
                terms.pop(idx, None)
        return LC(terms)

    __radd__ = __add__

    def __neg__(self) -> "LC":
        return LC({i: (P - c) % P for i, c in self.terms.items()})

    def __sub__(self, other) -> "LC":
        return self + (-LC.of(other))

    def __rsub__(self, other) -> "LC":
        return LC.of(other) + (-self)

    def scale(self, k: int) -> "LC":
        k %= P
        if k == 0:
            return LC()
        return LC({i: c * k % P for i, c in self.terms.items()})

    def __mul__(self, k: int) -> "LC":
        if not isinstance(k, int):
            raise TypeError("LC can only be scaled by int constants")
        return self.scale(k)

    __rmul__ = __mul__

    def constant_value(self) -> int | None:
        """The constant if this LC uses only variable 0, else None."""
        if not self.terms:
            return 0
        if set(self.terms) == {0}:
            return self.terms[0]
        return None


def eval_lc(terms: dict[int, int], values: list[int]) -> int:
    return sum(coef * values[idx] for idx, coef in terms.items()) % P


Hint = tuple[str, object]  # ("input", name) or ("compute", fn: get -> int)


@dataclass
class ConstraintSystem:
    """Finalized immutable system plus the witness-generation recipe."""

    num_vars: int
    constraints: list[tuple[dict[int, int], dict[int, int], dict[int, int]]]
    public_indices: list[int]
    public_names: list[str]
    hints: list[tuple[int, Hint]] = field(default_factory=list, repr=False)

    def num_constraints(self) -> int:
        return len(self.constraints)

    def to_debug_json(self) -> str:
        """Canonical JSON export of the matrices (hints are not portable)."""
        body = {
            "constraints": [
                [sorted((i, c) for i, c in row.items()) for row in (a, b, c)]
                for a, b, c in self.constraints
            ],
            "num_vars": self.num_vars,
            "public_indices": self.public_indices,
            "public_names": self.public_names,
            "version": 1,
        }
        return json.dumps(body, sort_keys=True, separators=(",", ":"))

    def digest(self) -> bytes:
        return hashlib.sha256(self.to_debug_json().encode()).digest()


def system_from_debug_json(text: str) -> ConstraintSystem:
    data = json.loads(text)
    if data.get("version") != 1:
        raise ValueError(f"unsupported constraint export version {data.get('version')!r}")
    constraints = [
        tuple({int(i): int(c) % P for i, c in row} for row in triple)
        for triple in data["constraints"]
    ]
    return ConstraintSystem(
        num_vars=int(data["num_vars"]),
        constraints=constraints,
        public_indices=[int(i) for i in data["public_indices"]],
        public_names=[str(n) for n in data["public_names"]],
    )


class WitnessAssignment:
    """One value per allocated variable; index 0 is pinned to 1."""

    __slots__ = ("values",)

    def __init__(self, values: list[int]):
        if not values or values[0] != 1:
            raise ValueError("assignment must start with the constant 1")
        self.values = values

    def __len__(self) -> int:
        return len(self.values)

    def public_slice(self, system: ConstraintSystem) -> list[int]:
        return [self.values[i] for i in system.public_indices]


class CircuitBuilder:
    """Accumulates constraints and hints; finalize() freezes the system."""

    def __init__(self):
        self.num_vars = 1
        self.public_indices: list[int] = []
        self.public_names: list[str] = []
        self.constraints: list[tuple[dict, dict, dict]] = []
        self.hints: list[tuple[int, Hint]] = []

    # -- allocation ---------------------------------------------------------

    def alloc(self, visibility: str = "private", name: str | None = None,
              hint: Hint | None = None) -> Variable:
        if visibility not in ("public", "private"):
            raise ValueError(f"visibility must be public or private, got {visibility!r}")
        index = self.num_vars
        self.num_vars += 1
        public = visibility == "public"
        if public:
            self.public_indices.append(index)
            self.public_names.append(name or f"public_{len(self.public_indices)}")
        if hint is not None:
            self.hints.append((index, hint))
        return Variable(index, public)

    def alloc_input(self, name: str, visibility: str = "private") -> Variable:
        """Variable whose witness value is the named prover input."""
        return self.alloc(visibility, name=name, hint=("input", name))

    def alloc_computed(self, fn: Callable, visibility: str = "private",
                       name: str | None = None) -> Variable:
        return self.alloc(visibility, name=name, hint=("compute", fn))

    # -- constraints --------------------------------------------------------

    def _check_allocated(self, lc: LC) -> dict[int, int]:
        for idx in lc.terms:
            if not 0 <= idx < self.num_vars:
                raise UnallocatedVariable(f"variable {idx} not allocated")
        return lc.terms

    def enforce(self, a, b, c) -> None:
        """Record the constraint a * b = c."""
        self.constraints.append(
            (
                self._check_allocated(LC.of(a)),
                self._check_allocated(LC.of(b)),
                self._check_allocated(LC.of(c)),
            )
        )

    def enforce_zero(self, lc) -> None:
        self.enforce(lc, 1, 0)

    def mul(self, a, b) -> LC:
        """Allocate and constrain the product of two linear combinations."""
        a, b = LC.of(a), LC.of(b)
        ka, kb = a.constant_value(), b.constant_value()
        if ka is not None:
            return b.scale(ka)
        if kb is not None:
            return a.scale(kb)
        out = self.alloc_computed(
            lambda get, a=a, b=b: _eval(a, get) * _eval(b, get) % P
        )
        self.enforce(a, b, LC.of(out))
        return LC.of(out)

    def finalize(self) -> ConstraintSystem:
        return ConstraintSystem(
            num_vars=self.num_vars,
            constraints=list(self.constraints),
            public_indices=list(self.public_indices),
            public_names=list(self.public_names),
            hints=list(self.hints),
        )


def _eval(lc: LC, get: Callable[[int], int]) -> int:
    return sum(coef * get(idx) for idx, coef in lc.terms.items()) % P


def synthesize_witness(system: ConstraintSystem, inputs: Mapping[str, int]) -> WitnessAssignment:
    """Run the hint program over named inputs to fill every variable.

    Deterministic; raises IncompleteInput naming the first missing input.
    """
    values: list[int | None] = [None] * system.num_vars
    values[0] = 1

    def get(idx: int) -> int:
        v = values[idx]
        if v is None:
            raise UnallocatedVariable(f"variable {idx} read before assignment")
        return v

    for index, (kind, payload) in system.hints:
        if kind == "input":
            if payload not in inputs:
                raise IncompleteInput(payload)
            values[index] = inputs[payload] % P
        elif kind == "compute":
            values[index] = payload(get) % P
        else:
            raise ValueError(f"unknown hint kind {kind!r}")
    for index, v in enumerate(values):
        if v is None:
            raise IncompleteInput(f"variable {index} has no hint")
    return WitnessAssignment(values)


def is_satisfied(
    system: ConstraintSystem, witness: WitnessAssignment
) -> tuple[bool, int | None]:
    """(True, None) if every constraint holds; else (False, first bad index)."""
    if len(witness) != system.num_vars:
        raise LengthMismatch(
            f"assignment length {len(witness)} != allocation count {system.num_vars}"
        )
    values = witness.values
    for index, (a, b, c) in enumerate(system.constraints):
        left = sum(coef * values[i] for i, coef in a.items()) % P
        right = sum(coef * values[i] for i, coef in b.items()) % P
        out = sum(coef * values[i] for i, coef in c.items()) % P
        if left * right % P != out:
            return False, index
    return True, None
