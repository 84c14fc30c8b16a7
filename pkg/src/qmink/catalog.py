"""The seven deformation families of the Lorentz group and their data.

Each family fixes a bilinear form ``E`` (stored as a 4-vector over the
spinor pairs ``(A, B) -> 2A + B``), its dual ``E'``, and the matrix ``Q'``;
the braiding is ``X = flip(2,2) @ Q'``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .matrixcore import flip

T_CASES = (1, 5, 7)
C_CASES = (2, 3, 4, 6)


class InvalidParameter(ValueError):
    """Raised when case parameters fall outside their allowed ranges."""


@dataclass(frozen=True)
class CaseSpec:
    case: int
    t: float | None = None
    c: float | None = None
    r: float | None = None
    s: int = 1

    def validate(self) -> "CaseSpec":
        if self.case not in range(1, 8):
            raise InvalidParameter(f"case must be 1..7, got {self.case}")
        if self.s not in (1, -1):
            raise InvalidParameter(f"s must be +1 or -1, got {self.s}")
        if self.case in T_CASES:
            if self.t is None:
                raise InvalidParameter(f"case {self.case} needs t")
            if not np.isfinite(self.t) or self.t <= 0 or self.t > 1:
                raise InvalidParameter(f"t must lie in (0, 1], got {self.t}")
            if self.case == 7 and self.t >= 1:
                raise InvalidParameter("case 7 needs 0 < t < 1")
        else:
            if self.c is None or not np.isfinite(self.c) or self.c == 0:
                raise InvalidParameter(f"case {self.case} needs a nonzero finite c")
        if self.case == 3:
            if self.r is None or not np.isfinite(self.r) or self.r < 0:
                raise InvalidParameter(f"case 3 needs r >= 0, got {self.r}")
        return self

    @property
    def params(self) -> dict:
        out = {}
        if self.case in T_CASES:
            out["t"] = self.t
        else:
            out["c"] = self.c
        if self.case == 3:
            out["r"] = self.r
        return out

    def to_json(self) -> str:
        return json.dumps({"case": self.case, **self.params, "s": self.s})

    @classmethod
    def from_json(cls, text: str) -> "CaseSpec":
        raw = json.loads(text)
        unknown = set(raw) - {"case", "t", "c", "r", "s"}
        if unknown:
            raise InvalidParameter(f"unknown keys {sorted(unknown)}")
        return cls(
            case=int(raw["case"]),
            t=raw.get("t"),
            c=raw.get("c"),
            r=raw.get("r"),
            s=int(raw.get("s", 1)),
        ).validate()

    def label(self) -> str:
        inner = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"case {self.case} ({inner}, s={self.s:+d})"


@dataclass(frozen=True)
class LorentzData:
    E4: np.ndarray
    Eprime4: np.ndarray
    E2: np.ndarray
    X: np.ndarray
    Qprime: np.ndarray
    q: int
    qhalf: complex


def pauli() -> list[np.ndarray]:
    """sigma_0 = 1, sigma_1, sigma_2, sigma_3."""
    return [
        np.eye(2, dtype=complex),
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ]


def _qprime(spec: CaseSpec) -> np.ndarray:
    k, t, c = spec.case, spec.t, spec.c
    if k == 1:
        return np.diag([1 / t, t, t, 1 / t]).astype(complex)
    if k == 2:
        q = np.eye(4, dtype=complex)
        q[0, 3] = c * c
        return q
    if k == 3:
        q = np.eye(4, dtype=complex)
        q[0, 3] = spec.r * c * c
        return q
    if k == 4:
        return np.array(
            [[1, c, c, 0], [0, 1, 0, -c], [0, 0, 1, -c], [0, 0, 0, 1]], dtype=complex
        )
    if k == 5:
        return 1j * np.diag([1 / t, -t, -t, 1 / t])
    if k == 6:
        q = 1j * np.diag([1, -1, -1, 1]).astype(complex)
        q[0, 3] = 1j * c * c
        return q
    rr, vs = case7_r_varsigma(t)
    return 1j * np.array(
        [[rr, 0, 0, vs], [0, -rr, vs, 0], [0, vs, -rr, 0], [vs, 0, 0, rr]], dtype=complex
    )


def case7_r_varsigma(t: float) -> tuple[float, float]:
    return (t + 1 / t) / 2, (t - 1 / t) / 2


def build_lorentz_data(spec: CaseSpec) -> LorentzData:
    spec.validate()
    k, c = spec.case, spec.c
    if k in (1, 2):
        e, ep = [0, 1, -1, 0], [0, -1, 1, 0]
    elif k in (3, 4):
        e, ep = [c, 1, -1, 0], [0, -1, 1, c]
    else:
        e = ep = [0, 1, 1, 0]
    E4 = np.array(e, dtype=complex)
    Ep4 = np.array(ep, dtype=complex)
    qp = _qprime(spec)
    q = 1 if k <= 4 else -1
    return LorentzData(
        E4=E4,
        Eprime4=Ep4,
        E2=E4.reshape(2, 2),
        X=flip(2, 2) @ qp,
        Qprime=qp,
        q=q,
        qhalf=1.0 + 0j if q == 1 else 1j,
    )


def default_grid() -> list[CaseSpec]:
    """Parameter points swept by the verification suite."""
    specs = []
    for case in range(1, 8):
        if case in T_CASES:
            for t in (0.3, 0.7, 1.0):
                if case == 7 and t >= 1:
                    continue
                specs.append(CaseSpec(case, t=t))
        elif case == 3:
            specs += [CaseSpec(3, c=c, r=r) for c in (0.5, 1.0, 2.0) for r in (0.0, 1.5)]
        else:
            specs += [CaseSpec(case, c=c) for c in (0.5, 1.0, 2.0)]
    return specs
