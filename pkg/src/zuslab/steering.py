"""Steering assemblages and zero-error decoding of Alice's outcome on Bob's side."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cpmaps import conditional_operators, lambda_map, zus_verdict
from .errors import NotPerfect, VerificationFailed
from .linalg import DEFAULT_TOL, ToleranceConfig, dagger, numerical_rank, support_isometry, support_projection
from .objects import BipartiteState, Pvm, PvmFamily, validate_pvm

DISCARD = "⊥"


@dataclass(frozen=True, eq=False)
class Setting:
    label: str
    outcomes: tuple  # labels
    elements: tuple  # sigma_{a|x}


@dataclass(frozen=True, eq=False)
class Assemblage:
    settings: tuple
    rho_b: np.ndarray

    def __getitem__(self, label) -> Setting:
        for s in self.settings:
            if s.label == label:
                return s
        raise KeyError(label)

    def setting_labels(self) -> list:
        return [s.label for s in self.settings]


def _setting_label(pvm: Pvm, index: int) -> str:
    return pvm.name or f"x{index}"


def assemblage(rho: BipartiteState, measurements: PvmFamily) -> Assemblage:
    L = lambda_map(rho)
    settings = []
    for x, pvm in enumerate(measurements):
        asm = conditional_operators(L, pvm)
        settings.append(Setting(_setting_label(pvm, x), asm.labels, asm.operators))
    return Assemblage(tuple(settings), L.rho_b)


@dataclass(frozen=True)
class SteeringVerdict:
    passed: bool
    settings: dict  # label -> ZusVerdict

    def __bool__(self):
        return self.passed


def perfect_steering_check(asm: Assemblage, tol: ToleranceConfig = DEFAULT_TOL) -> SteeringVerdict:
    verdicts = {s.label: zus_verdict(s.outcomes, s.elements, tol) for s in asm.settings}
    return SteeringVerdict(all(v.passed for v in verdicts.values()), verdicts)


def bob_decoder(asm: Assemblage, setting: str, tol: ToleranceConfig = DEFAULT_TOL) -> Pvm:
    """Support projections of sigma_{a|x}, completed to a PVM on S = supp(rho_B).

    The matrices act on H_B and sum to the projection onto S. The remainder
    of S is a discard outcome, present only when nonzero; a valid assemblage
    gives it zero probability, so any weight there raises VerificationFailed.
    """
    s = asm[setting]
    v = zus_verdict(s.outcomes, s.elements, tol)
    if not v.passed:
        raise NotPerfect(f"setting {setting!r} is not perfectly distinguishable", pair=list(v.failing_pair),
                         worst_overlap=v.worst_overlap)
    basis = support_isometry(asm.rho_b, tol)  # (d_b, s)
    projs = [support_projection(e, tol) for e in s.elements]
    labels = list(s.outcomes)
    rest = basis @ dagger(basis) - sum(projs)
    if numerical_rank(rest, tol) > 0:
        rest = support_projection((rest + dagger(rest)) / 2, tol)
        weight = float(np.real(np.trace(rest @ asm.rho_b)))
        if weight > max(tol.eq_tol, 1e-9):
            raise VerificationFailed(f"discard outcome of setting {setting!r} has probability {weight:.3e}",
                                     weight=weight)
        projs.append(rest)
        labels.append(DISCARD)
    loose = tol.replace(eq_tol=max(tol.eq_tol, 1e-8))
    # completeness is checked on S, where the decoder lives
    validate_pvm([dagger(basis) @ q @ basis for q in projs], loose, labels=labels)
    return Pvm(tuple(projs), tuple(labels), f"decoder[{setting}]")


def decoder_confusion(asm: Assemblage, setting: str, decoder: Pvm) -> np.ndarray:
    """Matrix [Tr(Q_a sigma_{b|x})] with rows over decoder outcomes, columns over Alice's outcomes."""
    s = asm[setting]
    return np.array([[float(np.real(np.trace(q @ e))) for e in s.elements] for q in decoder.projections])


def decoder_ranks(decoder: Pvm) -> list[int]:
    return [int(round(float(np.real(np.trace(q))))) for lab, q in decoder if lab != DISCARD]
