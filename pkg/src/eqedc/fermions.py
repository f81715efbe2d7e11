"""Second-quantized term algebra and the Jordan-Wigner transformation.

Modes are either bare integers (register positions) or :class:`ModeIndex`
values carrying (species, coordinate, label).  The canonical order places
electrons before positrons, then sorts lexicographically by coordinate and
label; this fixes the Z-string convention of the Jordan-Wigner map.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, NamedTuple, Sequence, Tuple

from .errors import IndexOrderViolation, OddParity
from .pauli import PauliSum, PauliTerm

COEFF_TOL = 1e-12
HERMITICITY_TOL = 1e-10

ELECTRON = "electron"
POSITRON = "positron"


class ModeIndex(NamedTuple):
    species: str  # ELECTRON or POSITRON
    coordinate: Tuple[int, int, int]
    label: int

    def sort_key(self):
        return (self.species == POSITRON, self.coordinate, self.label)


def _mode_key(mode):
    if isinstance(mode, ModeIndex):
        return mode.sort_key()
    return mode


# factors: tuple of (mode, dagger) pairs
Factors = Tuple[Tuple[object, bool], ...]


class FermionTerm(NamedTuple):
    coefficient: complex
    factors: Factors


class FermionPolynomial:
    """A sum of fermionic monomials, stored canonically normal-ordered."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[FermionTerm] = (), *, normal: bool = False):
        if normal:
            merged: Dict[Factors, complex] = {}
            for t in terms:
                merged[t.factors] = merged.get(t.factors, 0j) + t.coefficient
        else:
            merged = {}
            for t in terms:
                for f, c in _normal_order(t.factors, t.coefficient):
                    merged[f] = merged.get(f, 0j) + c
        self.terms: List[FermionTerm] = [
            FermionTerm(c, f)
            for f, c in sorted(merged.items(), key=lambda kv: _factors_key(kv[0]))
            if abs(c) > COEFF_TOL
        ]

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "FermionPolynomial") -> "FermionPolynomial":
        return FermionPolynomial(self.terms + other.terms, normal=True)

    def __sub__(self, other: "FermionPolynomial") -> "FermionPolynomial":
        return FermionPolynomial(
            self.terms + [FermionTerm(-t.coefficient, t.factors) for t in other.terms],
            normal=True,
        )

    def __mul__(self, other):
        if isinstance(other, FermionPolynomial):
            prods = [
                FermionTerm(a.coefficient * b.coefficient, a.factors + b.factors)
                for a in self.terms
                for b in other.terms
            ]
            return FermionPolynomial(prods)
        return FermionPolynomial(
            [FermionTerm(t.coefficient * other, t.factors) for t in self.terms],
            normal=True,
        )

    __rmul__ = __mul__

    def dagger(self) -> "FermionPolynomial":
        return FermionPolynomial(
            FermionTerm(
                t.coefficient.conjugate(),
                tuple((m, not d) for m, d in reversed(t.factors)),
            )
            for t in self.terms
        )

    def modes(self) -> List[object]:
        seen = set()
        for t in self.terms:
            for m, _ in t.factors:
                seen.add(m)
        return sorted(seen, key=_mode_key)

    def __repr__(self):
        return f"FermionPolynomial({self.terms!r})"


def _factors_key(factors: Factors):
    return tuple((_mode_key(m), d) for m, d in factors)


def _normal_order(factors: Factors, coeff: complex):
    """Wick-reorder into canonical form, keeping contraction terms.

    Canonical form: creation operators first (modes ascending), then
    annihilation operators (modes descending).  Yields (factors, coeff) pairs.
    """
    stack = [(coeff, list(factors))]
    while stack:
        c, f = stack.pop()
        changed = False
        for i in range(len(f) - 1):
            (m1, d1), (m2, d2) = f[i], f[i + 1]
            if not d1 and d2:
                # a a† -> delta - a† a
                swapped = f[:i] + [f[i + 1], f[i]] + f[i + 2 :]
                stack.append((-c, swapped))
                if m1 == m2:
                    stack.append((c, f[:i] + f[i + 2 :]))
                changed = True
                break
            if d1 == d2:
                if m1 == m2:
                    changed = True  # a†a† or aa on the same mode vanishes
                    f = None
                    break
                k1, k2 = _mode_key(m1), _mode_key(m2)
                wrong = (d1 and k1 > k2) or (not d1 and k1 < k2)
                if wrong:
                    swapped = f[:i] + [f[i + 1], f[i]] + f[i + 2 :]
                    stack.append((-c, swapped))
                    changed = True
                    break
        if not changed:
            yield tuple(f), c


# ---------------------------------------------------------------------------
# Jordan-Wigner map
# ---------------------------------------------------------------------------

def _ladder(position: int, dagger: bool) -> PauliSum:
    # a†_x -> (X - iY)_x (prod_{y<x} Z_y) / 2
    string = {y: "Z" for y in range(position)}
    lx = dict(string)
    lx[position] = "X"
    ly = dict(string)
    ly[position] = "Y"
    sign = -0.5j if dagger else 0.5j
    return PauliSum([PauliTerm(0.5, lx), PauliTerm(sign, ly)])


def jordan_wigner(obj, ordering: Sequence[object] | None = None) -> PauliSum:
    """Exact Pauli expansion of a fermionic term or polynomial.

    ``ordering`` lists the register modes in canonical order; it defaults to
    the integer modes themselves (for integer-mode polynomials) or the sorted
    canonical order of the modes present.
    """
    terms = obj.terms if isinstance(obj, FermionPolynomial) else [obj]
    if ordering is None:
        modes = set()
        for t in terms:
            modes.update(m for m, _ in t.factors)
        if all(isinstance(m, int) for m in modes):
            position = {m: m for m in modes}
        else:
            position = {m: i for i, m in enumerate(sorted(modes, key=_mode_key))}
    else:
        position = {m: i for i, m in enumerate(ordering)}
    out: List[PauliTerm] = []
    for t in terms:
        acc = PauliSum([PauliTerm(t.coefficient, {})])
        for m, d in t.factors:
            acc = acc * _ladder(position[m], d)
        out.extend(acc.terms)
    return PauliSum(out)


# ---------------------------------------------------------------------------
# four-operator case expansion (interaction families)
# ---------------------------------------------------------------------------

# Per-word signs of the Pauli families for V a†_j a†_k a†_l a_m + h.c.
# (cases 1-4 by the location of m) and for the all-creation term
# V a†_j a†_k a†_l a†_m + h.c.  Words list letters on the support qubits in
# descending register order; even words carry (V+V*)/16, odd words i(V-V*)/16.
_EVEN_WORDS = ["XXXX", "XXYY", "XYXY", "XYYX", "YXXY", "YXYX", "YYXX", "YYYY"]
_ODD_WORDS = ["XXXY", "XXYX", "XYXX", "YXXX", "XYYY", "YXYY", "YYXY", "YYYX"]

_CASE_EVEN = {
    1: dict(zip(_EVEN_WORDS, [-1, -1, -1, +1, -1, +1, +1, +1])),
    2: dict(zip(_EVEN_WORDS, [-1, -1, +1, -1, +1, -1, +1, +1])),
    3: dict(zip(_EVEN_WORDS, [-1, +1, -1, -1, +1, +1, -1, +1])),
    4: dict(zip(_EVEN_WORDS, [-1, +1, +1, +1, -1, -1, -1, +1])),
    "create": dict(zip(_EVEN_WORDS, [+1, -1, -1, -1, -1, -1, -1, +1])),
}
_CASE_ODD = {
    1: dict(zip(_ODD_WORDS, [-1, +1, +1, +1, +1, +1, +1, -1])),
    2: dict(zip(_ODD_WORDS, [+1, -1, +1, +1, +1, +1, -1, +1])),
    3: dict(zip(_ODD_WORDS, [+1, +1, -1, +1, +1, -1, +1, +1])),
    4: dict(zip(_ODD_WORDS, [+1, +1, +1, -1, -1, +1, +1, +1])),
    "create": dict(zip(_ODD_WORDS, [-1, -1, -1, -1, +1, +1, +1, +1])),
}


def jw_case_expand(j: int, k: int, l: int, m: int, V: complex, *, all_daggered: bool = False) -> PauliSum:
    """Pauli family for V a†_j a†_k a†_l a_m + h.c. (or all-creation variant).

    Requires j > k > l; the case is selected by the location of m.  Z-strings
    run between the first/second and third/fourth support qubits in
    descending register order.
    """
    if not (j > k > l):
        raise IndexOrderViolation(f"need j > k > l, got {(j, k, l)}")
    if all_daggered:
        if not (l > m):
            raise IndexOrderViolation(f"all-creation case needs j > k > l > m, got m={m}")
        case = "create"
    elif m < l:
        case = 1
    elif l < m < k:
        case = 2
    elif k < m < j:
        case = 3
    elif m > j:
        case = 4
    else:
        raise IndexOrderViolation(f"m={m} collides with (j,k,l)={(j,k,l)}")

    support = sorted({j, k, l, m}, reverse=True)
    ce = (V + V.conjugate()) / 16
    co = 1j * (V - V.conjugate()) / 16
    zs: Dict[int, str] = {}
    for a, b in ((support[0], support[1]), (support[2], support[3])):
        for q in range(b + 1, a):
            zs[q] = "Z"
    out: List[PauliTerm] = []
    for word, sign in _CASE_EVEN[case].items():
        if abs(ce) > COEFF_TOL:
            letters = dict(zs)
            letters.update({q: w for q, w in zip(support, word)})
            out.append(PauliTerm(ce * sign, letters))
    for word, sign in _CASE_ODD[case].items():
        if abs(co) > COEFF_TOL:
            letters = dict(zs)
            letters.update({q: w for q, w in zip(support, word)})
            out.append(PauliTerm(co * sign, letters))
    return PauliSum(out)


# ---------------------------------------------------------------------------
# support reduction and Hermiticity
# ---------------------------------------------------------------------------

def reduce_to_support(poly: FermionPolynomial):
    """Relabel the modes present to 0..k-1 preserving canonical order.

    Charge-parity-even polynomials embed isometrically, so the Jordan-Wigner
    operator norm is unchanged.  Returns (reduced polynomial, mode list) with
    mode list[i] the original mode at new position i.
    """
    for t in poly.terms:
        if len(t.factors) % 2:
            raise OddParity(f"odd monomial {t.factors}")
    modes = poly.modes()
    remap = {m: i for i, m in enumerate(modes)}
    reduced = FermionPolynomial(
        (
            FermionTerm(t.coefficient, tuple((remap[m], d) for m, d in t.factors))
            for t in poly.terms
        ),
        normal=True,
    )
    return reduced, modes


def check_hermitian(poly: FermionPolynomial, tol: float = HERMITICITY_TOL) -> bool:
    diff = poly - poly.dagger()
    return all(abs(t.coefficient) <= tol for t in diff.terms)


def conserves_charge(poly: FermionPolynomial) -> bool:
    """True iff every monomial commutes with the total electric charge.

    A monomial conserves charge exactly when its net electron-mode ladder
    count equals its net positron-mode count, so the check is per-term and
    exact (modes without a species tag count as electron-like).
    """
    for t in poly.terms:
        net = 0
        for m, dag in t.factors:
            species = m.species if isinstance(m, ModeIndex) else ELECTRON
            step = 1 if dag else -1
            net += step if species == ELECTRON else -step
        if net != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# term dump format: `re im : +a(e,px,py,pz,s) -a(p,...) ...`
# ---------------------------------------------------------------------------

_SPECIES_GLYPH = {ELECTRON: "e", POSITRON: "p"}
_GLYPH_SPECIES = {"e": ELECTRON, "p": POSITRON}


def format_polynomial(poly: FermionPolynomial) -> str:
    lines = []
    for t in poly.terms:
        parts = []
        for m, d in t.factors:
            sign = "+" if d else "-"
            if isinstance(m, ModeIndex):
                x, y, z = m.coordinate
                parts.append(f"{sign}a({_SPECIES_GLYPH[m.species]},{x},{y},{z},{m.label})")
            else:
                parts.append(f"{sign}a(e,{m},0,0,0)")
        lines.append(
            f"{t.coefficient.real:.17g} {t.coefficient.imag:.17g} : " + " ".join(parts)
        )
    return "\n".join(lines)


def parse_polynomial(text: str) -> FermionPolynomial:
    terms = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, _, body = line.partition(":")
        re_s, im_s = head.split()
        factors = []
        for tok in body.split():
            dagger = tok[0] == "+"
            inner = tok[tok.index("(") + 1 : tok.rindex(")")]
            sp, x, y, z, lab = inner.split(",")
            factors.append(
                (ModeIndex(_GLYPH_SPECIES[sp], (int(x), int(y), int(z)), int(lab)), dagger)
            )
        terms.append(FermionTerm(complex(float(re_s), float(im_s)), tuple(factors)))
    return FermionPolynomial(terms, normal=True)
