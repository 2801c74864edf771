"""Conjugacy obstruction for the twisted-torus actions.

If the actions attached to parameters alpha1, alpha2 were conjugate, the
images u', v' of the standard unitaries would have Fourier expansions
obeying a rigid chain of constraints: fixing by the shear collapses u'
onto the u-axis; noncommutation with a second generator forces a single
surviving exponent k0 with alpha1^{m3 k0^2} = alpha2^{m3}; the
commutation relation of the pair forces v' onto the row l = k0 with
alpha1^{k0^2} = alpha2; generation forces k0 = +-1, and the half-torus
orientation rules out -1.  The chain is run symbolically, either over
formal independent parameters or over exact roots of unity, and every
step is recorded in a transcript.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

from .groups import identity_mat, is_parabolic, mdet, mmul, munimodular_inverse
from .intlinalg import ext_gcd
from .scalars import Alpha, Formal, RootUnity


class ConjugacyError(ValueError):
    pass


@dataclass
class TranscriptEntry:
    rule: str
    detail: str
    data: dict = field(default_factory=dict)

    def to_json(self):
        return {"rule": self.rule, "detail": self.detail, "data": _jsonable(self.data)}


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (RootUnity, Formal)):
        return x.render()
    return x


def normalize_parabolic(a):
    """Conjugate a parabolic matrix to the shear (1 n; 0 1), n != 0.

    Returns (n, U, squared): U a' U^{-1} = (1 n; 0 1) where a' is a or
    a^2 (squaring removes a -1 eigenvalue), U in SL(2, Z).
    """
    if mdet(a) != 1:
        raise ConjugacyError("expected a determinant-one integer matrix")
    if not is_parabolic(a):
        raise ConjugacyError(f"{a!r} is not parabolic")
    squared = False
    if a[0][0] + a[1][1] == -2:
        a = mmul(a, a)
        squared = True
    # a = I + N with N nonzero, N^2 = 0; N = (content) v w^T, v primitive
    N = ((a[0][0] - 1, a[0][1]), (a[1][0], a[1][1] - 1))
    col = None
    for j in (0, 1):
        if N[0][j] or N[1][j]:
            col = (N[0][j], N[1][j])
            break
    if col is None:
        raise ConjugacyError("matrix is the identity after squaring")
    g = math.gcd(col[0], col[1])
    v = (col[0] // g, col[1] // g)
    _, x, y = ext_gcd(v[0], v[1])
    U = ((x, y), (-v[1], v[0]))
    ap = mmul(mmul(U, a), munimodular_inverse(U))
    if not (ap[0][0] == 1 and ap[1][0] == 0 and ap[1][1] == 1 and ap[0][1] != 0):
        raise AssertionError(f"parabolic normalization failed: got {ap!r}")
    return ap[0][1], U, squared


@dataclass
class SupportRule:
    """Support constraint on a Fourier expansion over Z^2."""

    kind: str  # "rows" -> l in rows; "columns" etc.
    rows: frozenset

    def admits(self, k: int, l: int) -> bool:
        return l in self.rows


def parabolic_support(a, alpha: Alpha) -> SupportRule:
    """Support constraint forced on a shear-fixed square-summable element.

    Fixing by (1 n; 0 1) gives the recurrence
    c[k, l] = alpha^{-n l^2 / 2} c[k - n l, l]; for l != 0 the orbit
    k, k - nl, k - 2nl, ... is infinite and the moduli are constant along
    it, so square-summability forces the whole row to vanish.
    """
    n, _, _ = normalize_parabolic(a)
    if n == 0:
        raise ConjugacyError("degenerate shear")
    return SupportRule("rows", frozenset({0}))


def shear_orbit_exits(nshear: int, k: int, l: int, box: int) -> bool:
    """Walk the recurrence orbit of (k, l); True when it leaves the box."""
    if l == 0:
        return False
    step = nshear * l
    kk = k
    for _ in range(2 * box + 2):
        kk -= step
        if not (-box <= kk <= box):
            return True
    return False


def shear_fixed_truncated(nshear: int, box: int) -> list:
    """Free coordinates of the shear-fixed equation on a finite box.

    Equations: c[k, l] = phase_l * c[k - n l, l] with c zero outside the
    box.  Rows with l != 0 are forced to zero by orbit propagation; the
    l = 0 row is untouched (the recurrence is vacuous there).
    """
    free = []
    for l in range(-box, box + 1):
        for k in range(-box, box + 1):
            if l == 0:
                free.append((k, 0))
            elif not shear_orbit_exits(nshear, k, l, box):
                free.append((k, l))  # pragma: no cover - cannot happen for n != 0
    return free


@dataclass
class K0Set:
    """Solutions k of alpha1^{m3 k^2} = alpha2^{m3}."""

    modulus: Optional[int]  # None: solutions over Z
    residues: tuple
    all_integers: bool = False

    def contains(self, k: int) -> bool:
        if self.all_integers:
            return True
        if self.modulus is not None:
            return k % self.modulus in self.residues
        return k in self.residues

    def describe(self) -> str:
        if self.all_integers:
            return "all integers"
        if self.modulus is not None:
            return f"{{k = {sorted(self.residues)} (mod {self.modulus})}}"
        return f"{sorted(self.residues)}"


def _common_turns(a1: Alpha, a2: Alpha):
    t1, t2 = a1.value.turn, a2.value.turn
    N = t1.denominator * t2.denominator // math.gcd(t1.denominator, t2.denominator)
    return int(t1 * N), int(t2 * N), N


def k0_solutions(alpha1: Alpha, alpha2: Alpha, m3: int) -> K0Set:
    """Exponents k compatible with the noncommutation constraint.

    Root-of-unity mode: exhaustive residue search of
    m3 k^2 s = m3 t (mod N).  Symbolic mode: the exponent vectors must
    satisfy k^2 * h(alpha1) = h(alpha2) over Z, so the set is empty
    unless alpha2 is syntactically the k^2-th power of alpha1.
    """
    if m3 == 0:
        raise ConjugacyError("m3 must be nonzero")
    if alpha1.is_symbolic() != alpha2.is_symbolic():
        raise ConjugacyError("scalar modes must match")
    if not alpha1.is_symbolic():
        s, t, N = _common_turns(alpha1, alpha2)
        sols = tuple(k for k in range(N) if (m3 * k * k * s - m3 * t) % N == 0)
        return K0Set(N, sols)
    h1 = (alpha1.value.h1, alpha1.value.h2)
    h2 = (alpha2.value.h1, alpha2.value.h2)
    if h1 == (0, 0):
        if h2 == (0, 0):
            return K0Set(None, (), all_integers=True)
        return K0Set(None, ())
    # need k^2 h1 == h2 componentwise
    js = [b // a for a, b in zip(h1, h2) if a != 0]
    j = js[0]
    if any(a * j != b for a, b in zip(h1, h2)) or j < 0:
        return K0Set(None, ())
    r = math.isqrt(j)
    if r * r != j or r == 0:
        return K0Set(None, ())
    return K0Set(None, (-r, r))


@dataclass
class VPrimeSupport:
    """Row constraint on v': the set of l with alpha1^{k0 l} = alpha2."""

    modulus: Optional[int]
    rows: tuple
    all_rows: bool = False

    def contains(self, l: int) -> bool:
        if self.all_rows:
            return True
        if self.modulus is not None:
            return l % self.modulus in self.rows
        return l in self.rows


def vprime_support(k0: int, alpha1: Alpha, alpha2: Alpha) -> VPrimeSupport:
    """Rows surviving d[k,l] (1 - alpha2 alpha1^{-k0 l}) = 0.

    In symbolic mode with alpha2 = alpha1^{k0^2} the only row is l = k0;
    in root-of-unity mode the full residue set is returned (it may be
    larger than {k0}; callers see exactly what survives).
    """
    if k0 == 0:
        raise ConjugacyError("k0 must be nonzero")
    if not alpha1.is_symbolic():
        s, t, N = _common_turns(alpha1, alpha2)
        rows = tuple(l for l in range(N) if (k0 * l * s - t) % N == 0)
        return VPrimeSupport(N, rows)
    h1 = (alpha1.value.h1, alpha1.value.h2)
    h2 = (alpha2.value.h1, alpha2.value.h2)
    if h1 == (0, 0):
        return VPrimeSupport(None, (), all_rows=(h2 == (0, 0)))
    sols = []
    # k0 * l * h1 == h2: at most one l
    for a, b in zip(h1, h2):
        if a != 0:
            if b % (k0 * a) == 0:
                l = b // (k0 * a)
                if all(k0 * l * aa == bb for aa, bb in zip(h1, h2)):
                    sols.append(l)
            break
    return VPrimeSupport(None, tuple(sols))


@dataclass
class ConjugacyDecision:
    verdict: str  # "obstructed" | "consistent"
    k0: Optional[int]
    k0_candidates: list
    survivors: list
    transcript: List[TranscriptEntry]
    shear: int
    m3: int

    def to_json(self):
        return {
            "verdict": self.verdict,
            "k0": self.k0,
            "k0set": list(self.k0_candidates),
            "survivors": list(self.survivors),
            "shear": self.shear,
            "m3": self.m3,
            "transcript": [t.to_json() for t in self.transcript],
        }


def decide_conjugacy(alpha1: Alpha, alpha2: Alpha, a, b) -> ConjugacyDecision:
    """Run the full constraint chain; see the module docstring.

    "consistent" always comes with k0 = 1 and the identity
    alpha1 = alpha2; "obstructed" certifies that the Fourier-constraint
    system has no solution, hence the actions cannot be conjugate.
    """
    transcript: List[TranscriptEntry] = []
    n, U, squared = normalize_parabolic(a)
    transcript.append(TranscriptEntry(
        "parabolic-normalization",
        f"conjugated the parabolic generator to the shear (1 {n}; 0 1)"
        + (" after squaring" if squared else ""),
        {"n": n, "conjugator": U, "squared": squared}))

    bp = mmul(mmul(U, b), munimodular_inverse(U))
    m3 = bp[1][0]
    transcript.append(TranscriptEntry(
        "noncommutation",
        f"second generator in normalized coordinates has lower-left entry m3 = {m3}",
        {"b_normalized": bp}))
    if m3 == 0:
        raise ConjugacyError("generators commute (m3 = 0 after normalization)")

    rule = parabolic_support(a, alpha1)
    transcript.append(TranscriptEntry(
        "shear-fixed-support",
        "a shear-fixed square-summable element is supported on the row l = 0",
        {"rows": sorted(rule.rows)}))

    K = k0_solutions(alpha1, alpha2, m3)
    transcript.append(TranscriptEntry(
        "power-matching",
        f"exponents with alpha1^(m3 k^2) = alpha2^m3: {K.describe()}",
        {"modulus": K.modulus, "residues": sorted(K.residues), "all": K.all_integers}))

    candidates = [1, -1] if K.all_integers else list(K.residues)
    survivors = []
    for k0 in candidates:
        # lift the residue 0 to the nonzero integer representative N
        k0r = k0 if k0 != 0 else (K.modulus or 0)
        if k0r == 0 or not K.contains(k0r):
            continue
        vp = vprime_support(k0r, alpha1, alpha2)
        if not vp.contains(k0r):
            continue
        survivors.append(k0)
    transcript.append(TranscriptEntry(
        "shift-row-matching",
        "candidates whose v' row l = k0 survives alpha1^(k0 l) = alpha2",
        {"survivors": list(survivors)}))

    gen_ok = []
    for k0 in survivors:
        if K.modulus is not None:
            if k0 % K.modulus in (1 % K.modulus, (-1) % K.modulus):
                gen_ok.append(k0)
        elif k0 in (1, -1):
            gen_ok.append(k0)
    transcript.append(TranscriptEntry(
        "generation",
        "u' = c u^k0, v' = d v^k0 generate only for k0 = +-1",
        {"survivors": list(gen_ok)}))

    final = []
    for k0 in gen_ok:
        if K.modulus is not None:
            if K.modulus > 2 and k0 % K.modulus == (-1) % K.modulus:
                continue
        elif k0 == -1:
            continue
        final.append(k0)
    transcript.append(TranscriptEntry(
        "half-torus-orientation",
        "k0 = -1 is excluded by the orientation normalization of the parameters",
        {"survivors": list(final),
         "alpha1_upper_half": alpha1.in_upper_half(),
         "alpha2_upper_half": alpha2.in_upper_half()}))

    if final:
        # after orientation the surviving integer exponent is 1
        same = (alpha1.value == alpha2.value)
        transcript.append(TranscriptEntry(
            "verdict", f"consistent with k0 = 1; parameters equal: {same}",
            {"alpha1": alpha1.value, "alpha2": alpha2.value}))
        return ConjugacyDecision("consistent", 1, candidates, final, transcript, n, m3)
    transcript.append(TranscriptEntry(
        "verdict", "no exponent survives: the constraint system is unsatisfiable",
        {}))
    return ConjugacyDecision("obstructed", None, candidates, [], transcript, n, m3)


def truncated_constraint_solution(alpha1: Alpha, alpha2: Alpha, a, b, box: int = 8) -> list:
    """Nonzero solutions of the transcript's constraint set on a box.

    Enumerates k0 with |k0| <= box and applies every recorded constraint;
    the decision is "consistent" exactly when this list is nonempty.
    """
    n, U, _ = normalize_parabolic(a)
    bp = mmul(mmul(U, b), munimodular_inverse(U))
    m3 = bp[1][0]
    if m3 == 0:
        raise ConjugacyError("generators commute")
    out = []
    for k0 in range(-box, box + 1):
        if k0 == 0:
            continue
        if alpha1.half_power(2 * m3 * k0 * k0) != alpha2.half_power(2 * m3):
            continue
        if alpha1.half_power(2 * k0 * k0) != alpha2.half_power(2):
            continue
        if k0 not in (1, -1):
            continue
        if k0 == -1 and not _minus_one_allowed(alpha1):
            continue
        out.append(k0)
    return out


def _minus_one_allowed(alpha1: Alpha) -> bool:
    # -1 = 1 only in the degenerate order-<=2 residue world
    if alpha1.is_symbolic():
        return False
    N = alpha1.value.turn.denominator
    return N <= 2


# ---------------------------------------------------------------------------
# independent brute-force oracle (raw residue arithmetic, no Scalar types)


def residue_oracle_survivors(N: int, s: int, t: int, m3: int = 1) -> list:
    out = []
    for k in range(N):
        if (m3 * k * k * s - m3 * t) % N:
            continue
        if (k * k * s - t) % N:
            continue
        if k % N not in (1 % N, (N - 1) % N):
            continue
        if N > 2 and k == (N - 1) % N and k != 1 % N:
            continue
        out.append(k)
    return out


def residue_oracle(N: int, s: int, t: int, m3: int = 1) -> bool:
    """True when the finite constraint chain is satisfiable."""
    return bool(residue_oracle_survivors(N, s, t, m3))


def residue_oracle_table(N: int, m3: int = 1):
    """Vectorized oracle verdicts for all exponent pairs (s, t) in [1, N)^2."""
    import numpy as np
    ks = np.arange(N)
    keep = np.zeros(N, dtype=bool)
    keep[1 % N] = True
    if N <= 2:
        keep[(N - 1) % N] = True
    ks = ks[keep]
    s = np.arange(1, N)[:, None, None]
    t = np.arange(1, N)[None, :, None]
    k = ks[None, None, :]
    ok = ((m3 * k * k * s - m3 * t) % N == 0) & ((k * k * s - t) % N == 0)
    return ok.any(axis=2)
