"""Symbolic exterior calculus over a fixed, finite generator set.

The engine works with differential forms whose coefficients are polynomials
(with exact rational coefficients) in a small set of atoms: coordinate
variables (r1, r2, r, t, s) and opaque function symbols (f, u', mu, mu',
sigma, the contact-profile symbols fc, gc, ...).  Function symbols carry
registered partial-derivative rules and nothing else; identities proved here
hold identically in those symbols.

Three generator algebras cover every model that appears downstream:

* ``disk_bundle_algebra``  -- one disk factor over a contact base
  (generators dr, dtheta, alpha, dalpha),
* ``double_disk_algebra``  -- two disk factors over a contact base
  (dr1, dtheta1, dr2, dtheta2, alpha, dalpha),
* ``collar_algebra``       -- a collar [0, 1+eps] x boundary x S^1
  (dr, dphi, lam, dlam).

Truncation encodes the contact dimension: odd generators square to zero and
the even generators dalpha / dlam satisfy (dalpha)^m = 0 for m >= n.  The
parameter n is fixed per algebra instance; identity checks loop over small n.

All values are immutable; all operations are pure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

Rational = Union[int, Fraction]

# A scalar monomial maps atom name -> nonzero integer exponent, stored as a
# sorted tuple so it can key a dict.  Negative exponents are allowed (the
# Liouville field needs 1/r); the zero exponent is never stored.
ScalarMonomial = tuple[tuple[str, int], ...]

# A wedge monomial maps generator index -> exponent, sorted by index.  Odd
# generators always carry exponent 1.
WedgeWord = tuple[tuple[int, int], ...]


class MissingRuleError(KeyError):
    """Raised when differentiation hits an atom without a registered rule."""


class AlgebraMismatchError(ValueError):
    """Raised when two forms built over different algebras are combined."""


class UnboundAtomError(KeyError):
    """Raised by numeric evaluation when an atom has no binding."""


# ---------------------------------------------------------------------------
# scalar layer


def _norm_monomial(powers: Mapping[str, int]) -> ScalarMonomial:
    return tuple(sorted((a, e) for a, e in powers.items() if e != 0))


class ScalarExpr:
    """A finite sum of atom monomials with exact rational coefficients.

    The stored dict *is* the normal form: no zero coefficients, monomials
    keyed canonically.  Equality is therefore dict equality.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[ScalarMonomial, Fraction] | None = None):
        self.terms: dict[ScalarMonomial, Fraction] = dict(terms or {})

    # -- constructors

    @staticmethod
    def const(value: Rational) -> "ScalarExpr":
        q = Fraction(value)
        return ScalarExpr({(): q} if q else {})

    @staticmethod
    def atom(name: str, power: int = 1) -> "ScalarExpr":
        if power == 0:
            return ScalarExpr.const(1)
        return ScalarExpr({((name, power),): Fraction(1)})

    # -- ring structure

    def __add__(self, other: "ScalarExpr | Rational") -> "ScalarExpr":
        other = _as_scalar(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = out.get(mono, Fraction(0)) + coeff
            if acc:
                out[mono] = acc
            else:
                out.pop(mono, None)
        return ScalarExpr(out)

    __radd__ = __add__

    def __neg__(self) -> "ScalarExpr":
        return ScalarExpr({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "ScalarExpr | Rational") -> "ScalarExpr":
        return self + (-_as_scalar(other))

    def __rsub__(self, other: Rational) -> "ScalarExpr":
        return _as_scalar(other) + (-self)

    def __mul__(self, other: "ScalarExpr | Rational") -> "ScalarExpr":
        other = _as_scalar(other)
        out: dict[ScalarMonomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mul_monomials(m1, m2)
                acc = out.get(mono, Fraction(0)) + c1 * c2
                if acc:
                    out[mono] = acc
                else:
                    out.pop(mono, None)
        return ScalarExpr(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "ScalarExpr":
        if exponent < 0:
            # exact inversion works only for a single monomial
            if len(self.terms) == 1:
                ((mono, coeff),) = self.terms.items()
                return ScalarExpr(
                    {tuple((a, e * exponent) for a, e in mono): Fraction(coeff) ** exponent}
                )
            raise ValueError("negative power of a non-monomial expression")
        out = ScalarExpr.const(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ScalarExpr.const(other)
        if not isinstance(other, ScalarExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    # -- calculus

    def diff(self, var: str, rules: "DerivativeRules") -> "ScalarExpr":
        """Partial derivative; linear, product rule over monomials."""
        out = ScalarExpr.const(0)
        for mono, coeff in self.terms.items():
            powers = dict(mono)
            for atom, exp in mono:
                datom = rules.derivative(atom, var)
                if datom.is_zero():
                    continue
                rest = dict(powers)
                if exp == 1:
                    del rest[atom]
                else:
                    rest[atom] = exp - 1
                out = out + ScalarExpr({_norm_monomial(rest): coeff * exp}) * datom
        return out

    def substitute(self, values: Mapping[str, Rational]) -> "ScalarExpr":
        """Replace atoms by rational constants.  Used e.g. to pin f = 0."""
        out: dict[ScalarMonomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            acc = coeff
            rest: dict[str, int] = {}
            for atom, exp in mono:
                if atom in values:
                    v = Fraction(values[atom])
                    if v == 0 and exp < 0:
                        raise ZeroDivisionError(f"substituting 0 for {atom}^{exp}")
                    acc = acc * v ** exp
                else:
                    rest[atom] = exp
            if acc:
                key = _norm_monomial(rest)
                tot = out.get(key, Fraction(0)) + acc
                if tot:
                    out[key] = tot
                else:
                    out.pop(key, None)
        return ScalarExpr(out)

    def evaluate(self, bindings: Mapping[str, float]) -> float:
        """Floating evaluation; every atom present must be bound."""
        total = 0.0
        for mono, coeff in self.terms.items():
            term = float(coeff)
            for atom, exp in mono:
                try:
                    base = bindings[atom]
                except KeyError:
                    raise UnboundAtomError(f"no binding for atom '{atom}'") from None
                term *= base ** exp
            total += term
        return total

    def atoms(self) -> set[str]:
        return {a for mono in self.terms for a, _ in mono}

    # -- display

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in sorted(self.terms.items()):
            factors = [str(coeff)]
            for atom, exp in mono:
                factors.append(atom if exp == 1 else f"{atom}^{exp}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"ScalarExpr({self.to_text()})"


def _as_scalar(x: "ScalarExpr | Rational") -> ScalarExpr:
    return x if isinstance(x, ScalarExpr) else ScalarExpr.const(x)


def _mul_monomials(m1: ScalarMonomial, m2: ScalarMonomial) -> ScalarMonomial:
    powers = dict(m1)
    for atom, exp in m2:
        acc = powers.get(atom, 0) + exp
        if acc:
            powers[atom] = acc
        else:
            del powers[atom]
    return tuple(sorted(powers.items()))


ZERO = ScalarExpr.const(0)
ONE = ScalarExpr.const(1)


# ---------------------------------------------------------------------------
# derivative registry


class DerivativeRules:
    """Registered partial derivatives of atoms.

    Coordinate variables obey d(var)/d(var) = 1 and vanish against other
    variables.  Every function atom must have an explicit entry for each
    variable it may be differentiated against, including explicit zeros;
    anything else raises MissingRuleError rather than silently vanishing.
    """

    def __init__(self) -> None:
        self._variables: set[str] = set()
        self._rules: dict[tuple[str, str], ScalarExpr] = {}

    def register_variable(self, name: str) -> None:
        self._variables.add(name)

    def register(self, atom: str, var: str, derivative: ScalarExpr | Rational) -> None:
        self._rules[(atom, var)] = _as_scalar(derivative)

    def derivative(self, atom: str, var: str) -> ScalarExpr:
        if atom in self._variables:
            return ONE if atom == var else ZERO
        try:
            return self._rules[(atom, var)]
        except KeyError:
            raise MissingRuleError(
                f"no derivative rule for atom '{atom}' with respect to '{var}'"
            ) from None

    def knows(self, atom: str) -> bool:
        return atom in self._variables or any(a == atom for a, _ in self._rules)


VARIABLES = ("r1", "r2", "r", "t", "s")

# Derivative chains are pre-registered to this depth; d^2-style tests consume
# two extra primes per pass, so 8 leaves ample headroom.
CHAIN_DEPTH = 8


def standard_rules() -> DerivativeRules:
    """The rules used by every model in this package.

    f stands for u(r1^2 + r2^2) composed with the radii, hence the 2*r_i
    chain factor at every order.  mu and its primes are functions of r1
    alone; sigma of t; fc/gc of the collar radius r.
    """
    rules = DerivativeRules()
    for v in VARIABLES:
        rules.register_variable(v)

    def chain(names: list[str], var_map: Callable[[str, str], ScalarExpr]) -> None:
        for i, name in enumerate(names):
            nxt = names[i + 1] if i + 1 < len(names) else None
            for v in VARIABLES:
                if nxt is None:
                    break  # deepest atom keeps no rules: forces an explicit error
                rules.register(name, v, var_map(nxt, v))

    u_names = ["f"] + ["u" + "p" * k for k in range(1, CHAIN_DEPTH + 2)]
    chain(
        u_names,
        lambda nxt, v: (
            ScalarExpr.const(2) * ScalarExpr.atom(v) * ScalarExpr.atom(nxt)
            if v in ("r1", "r2")
            else ZERO
        ),
    )

    mu_names = ["mu"] + ["mu" + "p" * k for k in range(1, CHAIN_DEPTH + 2)]
    chain(mu_names, lambda nxt, v: ScalarExpr.atom(nxt) if v == "r1" else ZERO)

    sigma_names = ["sigma"] + ["sigma" + "p" * k for k in range(1, CHAIN_DEPTH + 2)]
    chain(sigma_names, lambda nxt, v: ScalarExpr.atom(nxt) if v == "t" else ZERO)

    for base in ("fc", "gc"):
        names = [base] + [base + "p" * k for k in range(1, CHAIN_DEPTH + 2)]
        chain(names, lambda nxt, v: ScalarExpr.atom(nxt) if v == "r" else ZERO)

    for v in VARIABLES:
        rules.register("exp_t", v, ScalarExpr.atom("exp_t") if v == "t" else ZERO)
    return rules


_STANDARD_RULES = standard_rules()


# ---------------------------------------------------------------------------
# generator algebras


class Generator:
    __slots__ = ("name", "degree", "max_power", "d_name")

    def __init__(self, name: str, degree: int, max_power: int | None, d_name: str | None):
        self.name = name
        self.degree = degree          # 1 or 2
        self.max_power = max_power    # None: only the parity cap applies
        self.d_name = d_name          # exterior derivative target, None = closed

    def __repr__(self) -> str:
        return f"Generator({self.name}, deg={self.degree})"


class Algebra:
    """A fixed ordered generator set plus pairing and derivative data.

    ``coord_forms`` maps the coordinate variables of the model to their
    1-form generators, which is what drives d on coefficients.  ``pairings``
    is the full interior-product table: dual name -> {generator: value};
    unlisted pairs are zero.
    """

    def __init__(
        self,
        name: str,
        n: int,
        generators: list[Generator],
        coord_forms: Mapping[str, str],
        pairings: Mapping[str, Mapping[str, Rational]],
        rules: DerivativeRules = _STANDARD_RULES,
    ):
        if n < 1:
            raise ValueError("truncation parameter n must be >= 1")
        self.name = name
        self.n = n
        self.generators = tuple(generators)
        self.index = {g.name: i for i, g in enumerate(generators)}
        self.coord_forms = dict(coord_forms)
        self.pairings = {d: dict(p) for d, p in pairings.items()}
        self.rules = rules

    def gen(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise AlgebraMismatchError(
                f"algebra '{self.name}' has no generator '{name}'"
            ) from None

    def __repr__(self) -> str:
        return f"Algebra({self.name}, n={self.n})"


def disk_bundle_algebra(n: int) -> Algebra:
    """One disk factor (r, theta) over a contact base with form alpha."""
    return Algebra(
        name="disk_bundle",
        n=n,
        generators=[
            Generator("dr", 1, None, None),
            Generator("dtheta", 1, None, None),
            Generator("alpha", 1, None, "dalpha"),
            Generator("dalpha", 2, n - 1, None),
        ],
        coord_forms={"r": "dr"},
        pairings={
            "d_r": {"dr": 1},
            "d_theta": {"dtheta": 1},
            "reeb": {"alpha": 1},
        },
    )


def double_disk_algebra(n: int) -> Algebra:
    """Two disk factors (r1, theta1), (r2, theta2) over a contact base."""
    return Algebra(
        name="double_disk",
        n=n,
        generators=[
            Generator("dr1", 1, None, None),
            Generator("dtheta1", 1, None, None),
            Generator("dr2", 1, None, None),
            Generator("dtheta2", 1, None, None),
            Generator("alpha", 1, None, "dalpha"),
            Generator("dalpha", 2, n - 1, None),
        ],
        coord_forms={"r1": "dr1", "r2": "dr2"},
        pairings={
            "d_r1": {"dr1": 1},
            "d_theta1": {"dtheta1": 1},
            "d_r2": {"dr2": 1},
            "d_theta2": {"dtheta2": 1},
            "reeb": {"alpha": 1},
        },
    )


def collar_algebra(n: int) -> Algebra:
    """Collar [0, 1+eps] x (contact boundary) x S^1 with angle phi."""
    return Algebra(
        name="collar",
        n=n,
        generators=[
            Generator("dr", 1, None, None),
            Generator("dphi", 1, None, None),
            Generator("lam", 1, None, "dlam"),
            Generator("dlam", 2, n - 1, None),
        ],
        coord_forms={"r": "dr"},
        pairings={
            "d_r": {"dr": 1},
            "d_phi": {"dphi": 1},
            "reeb": {"lam": 1},
        },
    )


# ---------------------------------------------------------------------------
# wedge-word arithmetic


def _word_degree(algebra: Algebra, word: WedgeWord) -> int:
    return sum(algebra.generators[i].degree * e for i, e in word)


def _mul_words(algebra: Algebra, w1: WedgeWord, w2: WedgeWord) -> tuple[int, WedgeWord] | None:
    """Product of canonical wedge words: (sign, merged word) or None if zero.

    Sign counts transpositions of odd generators only; even generators are
    central.  Returns None when an odd generator repeats or a truncated even
    generator exceeds its cap.
    """
    odd1 = [i for i, e in w1 if algebra.generators[i].degree == 1]
    odd2 = [i for i, e in w2 if algebra.generators[i].degree == 1]
    if set(odd1) & set(odd2):
        return None
    inversions = 0
    for a in odd1:
        for b in odd2:
            if a > b:
                inversions += 1
    powers: dict[int, int] = dict(w1)
    for i, e in w2:
        powers[i] = powers.get(i, 0) + e
    for i, e in powers.items():
        cap = algebra.generators[i].max_power
        if cap is not None and e > cap:
            return None
    word = tuple(sorted(powers.items()))
    return (-1) ** inversions, word


# ---------------------------------------------------------------------------
# forms


class Form:
    """A differential form: wedge words with ScalarExpr coefficients."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: Algebra, terms: Mapping[WedgeWord, ScalarExpr] | None = None):
        self.algebra = algebra
        self.terms: dict[WedgeWord, ScalarExpr] = {
            w: c for w, c in (terms or {}).items() if not c.is_zero()
        }

    # -- constructors

    @staticmethod
    def zero(algebra: Algebra) -> "Form":
        return Form(algebra)

    @staticmethod
    def scalar(algebra: Algebra, value: "ScalarExpr | Rational") -> "Form":
        return Form(algebra, {(): _as_scalar(value)})

    @staticmethod
    def gen(algebra: Algebra, name: str, coeff: "ScalarExpr | Rational" = 1) -> "Form":
        idx = algebra.gen(name)
        return Form(algebra, {((idx, 1),): _as_scalar(coeff)})

    # -- linear structure

    def _check(self, other: "Form") -> None:
        if self.algebra is not other.algebra:
            # distinct instances with identical settings are fine
            a, b = self.algebra, other.algebra
            if (a.name, a.n) != (b.name, b.n):
                raise AlgebraMismatchError(
                    f"cannot combine forms over '{a.name}' (n={a.n}) and '{b.name}' (n={b.n})"
                )

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            acc = out.get(w, ZERO) + c
            if acc.is_zero():
                out.pop(w, None)
            else:
                out[w] = acc
        return Form(self.algebra, out)

    def __neg__(self) -> "Form":
        return Form(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, factor: "ScalarExpr | Rational") -> "Form":
        factor = _as_scalar(factor)
        return Form(self.algebra, {w: c * factor for w, c in self.terms.items()})

    def __rmul__(self, factor: "ScalarExpr | Rational") -> "Form":
        return self.scale(factor)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {_word_degree(self.algebra, w) for w in self.terms}

    def substitute_atoms(self, values: Mapping[str, Rational]) -> "Form":
        return Form(self.algebra, {w: c.substitute(values) for w, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return equals(self, other)

    def __hash__(self) -> int:  # pragma: no cover - forms rarely hashed
        return hash(tuple(sorted((w, c.to_text()) for w, c in self.terms.items())))

    # -- display

    def to_text(self) -> str:
        """Canonical text: one "coeff * g1^g2^..." chunk per wedge word."""
        if not self.terms:
            return "0"
        algebra = self.algebra
        chunks = []
        for word in sorted(self.terms, key=lambda w: (_word_degree(algebra, w), w)):
            coeff = self.terms[word]
            names: list[str] = []
            for idx, exp in word:
                names.extend([algebra.generators[idx].name] * exp)
            if names:
                chunks.append(f"({coeff.to_text()}) * " + "^".join(names))
            else:
                chunks.append(f"({coeff.to_text()})")
        return " + ".join(chunks)

    def __repr__(self) -> str:
        return f"Form[{self.algebra.name}]({self.to_text()})"


class TangentSymbol:
    """A formal combination of dual symbols with ScalarExpr coefficients."""

    __slots__ = ("algebra", "parts")

    def __init__(self, algebra: Algebra, parts: Mapping[str, "ScalarExpr | Rational"]):
        for name in parts:
            if name not in algebra.pairings:
                raise AlgebraMismatchError(
                    f"algebra '{algebra.name}' has no dual symbol '{name}'"
                )
        self.algebra = algebra
        self.parts: dict[str, ScalarExpr] = {
            name: _as_scalar(c) for name, c in parts.items() if not _as_scalar(c).is_zero()
        }

    def __repr__(self) -> str:
        inner = " + ".join(f"({c.to_text()})*{n}" for n, c in sorted(self.parts.items()))
        return f"TangentSymbol({inner or '0'})"


# ---------------------------------------------------------------------------
# operations


def wedge(a: Form, b: Form) -> Form:
    a._check(b)
    algebra = a.algebra
    out: dict[WedgeWord, ScalarExpr] = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            merged = _mul_words(algebra, w1, w2)
            if merged is None:
                continue
            sign, word = merged
            acc = out.get(word, ZERO) + c1 * c2 * sign
            if acc.is_zero():
                out.pop(word, None)
            else:
                out[word] = acc
    return Form(algebra, out)


def wedge_all(*forms: Form) -> Form:
    if not forms:
        raise ValueError("wedge_all needs at least one form")
    acc = forms[0]
    for f in forms[1:]:
        acc = wedge(acc, f)
    return acc


def wedge_power(a: Form, k: int) -> Form:
    if k < 0:
        raise ValueError("negative wedge power")
    out = Form.scalar(a.algebra, 1)
    for _ in range(k):
        out = wedge(out, a)
    return out


def ext_d(a: Form) -> Form:
    """Exterior derivative: Leibniz over wedge words, chain rules on atoms."""
    algebra = a.algebra
    out = Form.zero(algebra)
    for word, coeff in a.terms.items():
        # d of the coefficient
        for var, gen_name in algebra.coord_forms.items():
            dc = coeff.diff(var, algebra.rules)
            if dc.is_zero():
                continue
            out = out + wedge(Form.gen(algebra, gen_name, dc), Form(algebra, {word: ONE}))
        # d of the word itself; only odd generators with a d-target contribute
        parity = 0
        for pos, (idx, exp) in enumerate(word):
            g = algebra.generators[idx]
            if g.d_name is not None:
                assert g.degree == 1, "only odd generators may have nonzero d"
                rest = word[:pos] + word[pos + 1 :]
                sign = (-1) ** parity
                piece = wedge(
                    Form.gen(algebra, g.d_name, coeff * sign),
                    Form(algebra, {rest: ONE}),
                )
                # the replacement lands in front; its even target commutes, so
                # re-merging through wedge fixes the ordering and caps
                out = out + piece
            parity += g.degree * exp
    return out


def interior(v: TangentSymbol, a: Form) -> Form:
    """Contraction with a formal tangent symbol: a graded degree -1 derivation."""
    if v.algebra is not a.algebra:
        va, aa = v.algebra, a.algebra
        if (va.name, va.n) != (aa.name, aa.n):
            raise AlgebraMismatchError("tangent symbol and form live over different algebras")
    algebra = a.algebra
    out = Form.zero(algebra)
    for dual, vcoeff in v.parts.items():
        table = algebra.pairings[dual]
        for word, coeff in a.terms.items():
            parity = 0
            for pos, (idx, exp) in enumerate(word):
                g = algebra.generators[idx]
                if g.degree == 1:
                    pairing = table.get(g.name, 0)
                    if pairing:
                        rest = word[:pos] + word[pos + 1 :]
                        sign = (-1) ** parity
                        contrib = coeff * vcoeff * Fraction(pairing) * sign
                        prev = out.terms.get(rest, ZERO) + contrib
                        if prev.is_zero():
                            out.terms.pop(rest, None)
                        else:
                            out.terms[rest] = prev
                    parity += 1
                # even generators pair to zero against every listed dual
    return Form(algebra, out.terms)


def equals(a: Form, b: Form) -> bool:
    a._check(b)
    return (a - b).is_zero()


def eval_numeric(expr: ScalarExpr, bindings: Mapping[str, float]) -> float:
    """Float evaluation of a scalar normal form; unbound atoms raise."""
    return expr.evaluate(bindings)
