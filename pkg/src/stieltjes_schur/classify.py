"""Membership tests for the sequence classes, with witnesses.

Class names:

``H_nnd`` / ``H_pd``
    every block Hankel matrix ``H_n`` with ``2n <= kappa`` is psd / pd.
``K_nnd`` / ``K_pd``
    additionally every shifted block ``H_{alpha,n}`` with ``2n+1 <= kappa``.
``K_nnd_ext``
    ``K_nnd`` and some one-step extension stays in ``K_nnd``.
``K_cd``
    ``K_nnd`` with vanishing terminal Schur complement.
``K_cd_order_m``
    ``K_nnd`` whose prefix ``s_0..s_m`` is in ``K_cd``.
``D`` / ``D_tilde``
    first-term dominance of the whole sequence / of all but its last term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

from .builders import L, L_alpha, MatSeq, hankel, hankel_alpha
from .errors import (
    IndexRangeError, NonRealAlphaError, SequenceTooShortError, ShapeError, UnknownNameError)
from .matrix import Definiteness, ker_included, psd_check, ran_included

BASE_CLASSES = ("H_nnd", "H_pd", "K_nnd", "K_pd", "K_nnd_ext", "K_cd", "D", "D_tilde")
_ORDER_RE = re.compile(r"^K_cd_order_(\d+)$")


@dataclass(frozen=True)
class ClassReport:
    """Verdicts by class name, and for every false verdict the violated condition."""

    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.verdicts[name]

    def to_wire(self):
        return {"verdicts": dict(sorted(self.verdicts.items())),
                "witnesses": dict(sorted(self.witnesses.items()))}


def require_class_input(s: MatSeq):
    if not s.alpha.is_real:
        raise NonRealAlphaError(f"class tests need a real alpha, got {s.alpha}")
    if s.p != s.q:
        raise ShapeError(f"class tests need square terms, got {s.p}x{s.q}")


def _nonempty(s: MatSeq):
    if not s.mats:
        raise SequenceTooShortError("class tests need at least one term")


def terminal_complement(s: MatSeq, m: int):
    """``L_n`` for ``m = 2n`` and ``L_{alpha,n}`` for ``m = 2n+1``, with its name."""
    n, odd = divmod(m, 2)
    return (L_alpha(s, n), f"L_alpha_{n}") if odd else (L(s, n), f"L_{n}")


def _first_failing_block(s: MatSeq, strict: bool, shifted: bool):
    wanted = (Definiteness.PD,) if strict else (Definiteness.PD, Definiteness.PSD)
    n = 0
    while 2 * n + shifted <= s.kappa:
        block = hankel_alpha(s, n) if shifted else hankel(s, n)
        verdict = psd_check(block)
        if verdict not in wanted:
            name = "Halpha" if shifted else "H"
            return {"condition": "pd" if strict else "psd", "block": name, "n": n,
                    "found": verdict.value}
        n += 1
    return None


def _first_failing_hankel(s, strict, with_shift):
    """Failing block that involves the fewest terms; ``H_n`` uses ``s_0..s_2n``, ``Halpha_n`` one more."""
    found = [_first_failing_block(s, strict, False)]
    if with_shift:
        found.append(_first_failing_block(s, strict, True))
    found = [w for w in found if w is not None]
    if not found:
        return None
    return min(found, key=lambda w: 2 * w["n"] + (w["block"] == "Halpha"))


def _dominance_witness(s: MatSeq, upto: int):
    s0 = s[0]
    for j in range(1, upto + 1):
        if not ker_included(s0, s[j]):
            return {"condition": "ker_included", "left": "s_0", "right": f"s_{j}"}
        if not ran_included(s0, s[j]):
            return {"condition": "ran_included", "left": f"s_{j}", "right": "s_0"}
    return None


def _extension_witness(s: MatSeq):
    """Kernel criterion for one-step extendability of a ``K_nnd`` sequence."""
    if s.kappa == 0:
        return None
    lo, lo_name = terminal_complement(s, s.kappa - 1)
    hi, hi_name = terminal_complement(s, s.kappa)
    if ker_included(lo, hi):
        return None
    return {"condition": "ker_included", "left": lo_name, "right": hi_name}


@lru_cache(maxsize=4096)
def classify(s: MatSeq) -> ClassReport:
    require_class_input(s)
    _nonempty(s)
    verdicts, witnesses = {}, {}

    def record(name, witness):
        verdicts[name] = witness is None
        if witness is not None:
            witnesses[name] = witness

    record("H_nnd", _first_failing_hankel(s, False, False))
    record("H_pd", _first_failing_hankel(s, True, False))
    nnd = _first_failing_hankel(s, False, True)
    record("K_nnd", nnd)
    record("K_pd", _first_failing_hankel(s, True, True))

    if nnd is not None:
        record("K_nnd_ext", {"condition": "K_nnd", "cause": nnd})
    else:
        record("K_nnd_ext", _extension_witness(s))

    for m in range(s.kappa + 1):
        if nnd is not None:
            w = {"condition": "K_nnd", "cause": nnd}
        else:
            top, name = terminal_complement(s, m)
            w = None if top.is_zero() else {"condition": "zero", "matrix": name}
        record(f"K_cd_order_{m}", w)
    verdicts["K_cd"] = verdicts[f"K_cd_order_{s.kappa}"]
    if not verdicts["K_cd"]:
        witnesses["K_cd"] = witnesses[f"K_cd_order_{s.kappa}"]

    record("D", _dominance_witness(s, s.kappa))
    record("D_tilde", _dominance_witness(s, s.kappa - 1))
    return ClassReport(verdicts, witnesses)


def extendability_test(s: MatSeq) -> bool:
    """Whether ``s`` is in ``K_nnd`` and admits a one-step extension inside it.

    For ``kappa = 2n+1`` this is ``Ker L_n ⊆ Ker L_{alpha,n}``, for
    ``kappa = 2n >= 2`` it is ``Ker L_{alpha,n-1} ⊆ Ker L_n``, and a single
    psd term always extends.
    """
    return classify(s).verdicts["K_nnd_ext"]


def _parse_class(name: str):
    if name in BASE_CLASSES:
        return name, None
    match = _ORDER_RE.match(name) if isinstance(name, str) else None
    if match:
        return "K_cd_order", int(match.group(1))
    raise UnknownNameError(f"unknown class {name!r}")


def is_member(s: MatSeq, name: str) -> bool:
    base, m = _parse_class(name)
    if base == "K_cd_order" and m > s.kappa:
        raise IndexRangeError(f"{name} needs m <= kappa={s.kappa}")
    if base == "K_nnd_ext":
        return extendability_test(s)
    return classify(s).verdicts[name]


def known_class(name: str) -> bool:
    try:
        _parse_class(name)
    except UnknownNameError:
        return False
    return True
