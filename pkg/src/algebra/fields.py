"""
Exact rational-function fields over Q or F_p, with an optional derivation.

Elements wrap sympy's sparse ``FracElement`` and are kept in one canonical
form so that equality is plain structural equality:

* over Q the numerator and denominator are coprime integer polynomials and
  the denominator has a positive leading coefficient (sympy's ``cancel``
  already produces this, we only fix the sign after raw constructions);
* over F_p the denominator is monic.

Monomials are ordered graded-lexicographically everywhere.
"""
import functools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Mapping, Optional, Tuple, Union

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.fields import FracField
from sympy.polys.orderings import grlex

from src.utils.errors import (
    FieldDivisionError,
    NoDerivationError,
    WrongDescriptorError,
)

RATIONALS = "rationals"
PRIME_FIELD = "prime-field"

_NAME_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

Scalar = Union[int, Fraction, str, "FieldElement"]


@dataclass(frozen=True)
class FieldDescriptor:
    """
    Describes F(t_1..t_k) for F = Q (characteristic 0) or F = F_p.

    ``derivation`` holds the images δ(t_i) as element text, or is None when
    the field carries no derivation. An empty transcendental list describes
    the prime field (or Q) itself.
    """
    characteristic: int
    transcendentals: Tuple[str, ...] = ()
    derivation: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.characteristic != 0 and not isprime(self.characteristic):
            raise WrongDescriptorError(
                f"characteristic must be 0 or a prime, got {self.characteristic}"
            )
        if len(set(self.transcendentals)) != len(self.transcendentals):
            raise WrongDescriptorError("transcendental names must be distinct")
        for name in self.transcendentals:
            if not _NAME_PATTERN.match(name):
                raise WrongDescriptorError(f"invalid transcendental name '{name}'")
        if self.derivation is not None and len(self.derivation) != len(self.transcendentals):
            raise WrongDescriptorError("derivation must give one image per transcendental")

    @classmethod
    def rational_functions(cls, characteristic: int, names=("t",), derivation="default"):
        """F(names) with d/d(first name) by default; pass derivation=None to omit it."""
        names = tuple(names)
        if derivation == "default":
            derivation = tuple("1" if i == 0 else "0" for i in range(len(names))) if names else None
        elif derivation is not None:
            derivation = tuple(str(image) for image in derivation)
        return cls(characteristic, names, derivation)

    @classmethod
    def prime_field(cls, characteristic: int, zero_derivation: bool = False):
        return cls(characteristic, (), () if zero_derivation else None)

    @property
    def base(self) -> str:
        return RATIONALS if self.characteristic == 0 else PRIME_FIELD

    @property
    def field(self) -> FracField:
        return _frac_field(self.characteristic, self.transcendentals)

    def describe(self) -> str:
        base = "Q" if self.characteristic == 0 else f"F_{self.characteristic}"
        if self.transcendentals:
            base += "(" + ",".join(self.transcendentals) + ")"
        return base

    def element(self, value: Scalar) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.descriptor != self:
                raise WrongDescriptorError(
                    f"element of {value.descriptor.describe()} used in {self.describe()}"
                )
            return value
        if isinstance(value, str):
            return parse_element(value, self)
        if isinstance(value, Fraction):
            if self.characteristic == 0:
                ground = QQ(value.numerator, value.denominator)
                return FieldElement(self, self.field.ground_new(ground))
            return self.element(value.numerator) / self.element(value.denominator)
        return FieldElement(self, self.field.ground_new(int(value)))

    @property
    def zero(self) -> "FieldElement":
        return self.element(0)

    @property
    def one(self) -> "FieldElement":
        return self.element(1)

    def gen(self, name: str) -> "FieldElement":
        try:
            index = self.transcendentals.index(name)
        except ValueError:
            raise WrongDescriptorError(f"'{name}' is not a transcendental of {self.describe()}") from None
        return FieldElement(self, self.field.gens[index])

    def gens(self) -> List["FieldElement"]:
        return [FieldElement(self, g) for g in self.field.gens]

    def derivation_images(self) -> Tuple["FieldElement", ...]:
        if self.derivation is None:
            raise NoDerivationError(f"{self.describe()} has no derivation configured")
        return _derivation_images(self)


@functools.lru_cache(maxsize=None)
def _frac_field(characteristic: int, names: Tuple[str, ...]) -> FracField:
    domain = QQ if characteristic == 0 else GF(characteristic)
    return FracField(",".join(names), domain, grlex)


@functools.lru_cache(maxsize=None)
def _derivation_images(descriptor: FieldDescriptor) -> Tuple["FieldElement", ...]:
    return tuple(parse_element(text, descriptor) for text in descriptor.derivation)


def _normalize(descriptor: FieldDescriptor, frac):
    """Fix the unit of an already-cancelled fraction."""
    denom = frac.denom
    lc = denom.LC
    if descriptor.characteristic == 0:
        if lc < 0:
            return frac.field.raw_new(-frac.numer, -denom)
        return frac
    if lc == denom.ring.domain.one:
        return frac
    return frac.field.raw_new(frac.numer.quo_ground(lc), denom.quo_ground(lc))


class FieldElement:
    """An immutable exact element of a ``FieldDescriptor``'s field."""

    __slots__ = ("descriptor", "value")

    def __init__(self, descriptor: FieldDescriptor, value):
        object.__setattr__(self, "descriptor", descriptor)
        object.__setattr__(self, "value", _normalize(descriptor, value))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    # --- construction helpers ---

    def _coerce(self, other) -> Optional["FieldElement"]:
        if isinstance(other, FieldElement):
            if other.descriptor != self.descriptor:
                raise WrongDescriptorError(
                    f"cannot combine {self.descriptor.describe()} with {other.descriptor.describe()}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.descriptor.element(other)
        return None

    def _new(self, frac) -> "FieldElement":
        return FieldElement(self.descriptor, frac)

    # --- arithmetic ---

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._new(self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._new(self.value - other.value)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._new(other.value - self.value)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._new(self.value * other.value)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def inverse(self) -> "FieldElement":
        if not self.value:
            raise FieldDivisionError(f"division by zero in {self.descriptor.describe()}")
        field = self.value.field
        numer, denom = self.value.denom.cancel(self.value.numer)
        return self._new(field.raw_new(numer, denom))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def try_div(self, other) -> Optional["FieldElement"]:
        """Quotient, or None when the divisor is zero."""
        other = self._coerce(other)
        if not other:
            return None
        return self / other

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        field = self.value.field
        return self._new(field.raw_new(self.value.numer ** exponent, self.value.denom ** exponent))

    # --- comparison ---

    def __bool__(self):
        return bool(self.value)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.descriptor.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.descriptor == other.descriptor and self.value == other.value

    def __hash__(self):
        return hash((self.descriptor, self.value.numer, self.value.denom))

    # --- structure ---

    def is_ground(self) -> bool:
        """True for elements of the prime field (or Q)."""
        return self.value.numer.is_ground and self.value.denom.is_ground

    def ground_value(self) -> Union[int, Fraction]:
        if not self.is_ground():
            raise WrongDescriptorError(f"{self} is not a constant of the base field")
        numer = _coefficient(self.descriptor, self.value.numer.LC if self.value.numer else None)
        denom = _coefficient(self.descriptor, self.value.denom.LC)
        if self.descriptor.characteristic == 0:
            value = Fraction(numer) / Fraction(denom)
            return int(value) if value.denominator == 1 else value
        return numer

    def derive(self) -> "FieldElement":
        """δ of this element, by the quotient rule from the generator images."""
        images = self.descriptor.derivation_images()
        result = self.descriptor.zero
        for gen, image in zip(self.value.field.gens, images):
            if image:
                result = result + self._new(self.value.diff(gen)) * image
        return result

    def substitute(self, mapping: Mapping[str, "FieldElement"],
                   target: Optional[FieldDescriptor] = None) -> "FieldElement":
        """Replace transcendentals by elements (of ``target``, default: same field)."""
        target = target or self.descriptor
        images = []
        for name in self.descriptor.transcendentals:
            if name in mapping:
                images.append(target.element(mapping[name]))
            else:
                images.append(target.gen(name))
        numer = _evaluate_poly(self.descriptor, self.value.numer, images, target)
        denom = _evaluate_poly(self.descriptor, self.value.denom, images, target)
        return numer / denom

    def __str__(self):
        numer = _format_poly(self.descriptor, self.value.numer)
        if self.value.denom == self.value.denom.ring.one:
            return numer
        return f"({numer})/({_format_poly(self.descriptor, self.value.denom)})"

    def __repr__(self):
        return f"FieldElement({self.descriptor.describe()}, {self})"


def _coefficient(descriptor: FieldDescriptor, coeff) -> Union[int, Fraction]:
    if coeff is None:
        return 0
    if descriptor.characteristic == 0:
        numer, denom = int(QQ.numer(coeff)), int(QQ.denom(coeff))
        return numer if denom == 1 else Fraction(numer, denom)
    return int(coeff) % descriptor.characteristic


def _evaluate_poly(descriptor, poly, images, target) -> FieldElement:
    total = target.zero
    for monom, coeff in poly.terms():
        term = target.element(_coefficient(descriptor, coeff))
        for image, exponent in zip(images, monom):
            if exponent:
                term = term * image ** exponent
        total = total + term
    return total


def _format_poly(descriptor: FieldDescriptor, poly) -> str:
    if not poly:
        return "0"
    pieces = []
    for monom, coeff in poly.terms():
        value = _coefficient(descriptor, coeff)
        factors = []
        for name, exponent in zip(descriptor.transcendentals, monom):
            if exponent == 1:
                factors.append(name)
            elif exponent:
                factors.append(f"{name}^{exponent}")
        monomial = "*".join(factors)
        if not monomial:
            text = str(value)
        elif value == 1:
            text = monomial
        elif value == -1:
            text = "-" + monomial
        else:
            text = f"{value}*{monomial}"
        if pieces and not text.startswith("-"):
            text = "+" + text
        pieces.append(text)
    return "".join(pieces)


# --- Parsing ---

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> Iterator[Tuple[str, str]]:
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None or match.end() == position:
            break
        position = match.end()
        number, name, symbol = match.groups()
        if number is not None:
            yield "int", number
        elif name is not None:
            yield "name", name
        elif symbol is not None:
            yield "op", symbol
    yield "end", ""


class _ElementParser:
    """Recursive descent over + - * / ^ and parentheses."""

    def __init__(self, text: str, descriptor: FieldDescriptor):
        self.text = text
        self.descriptor = descriptor
        self.tokens = list(_tokenize(text))
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def take(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def fail(self, message: str):
        raise WrongDescriptorError(f"cannot parse element '{self.text}': {message}")

    def parse(self) -> FieldElement:
        value = self.expression()
        if self.peek()[0] != "end":
            self.fail(f"unexpected '{self.peek()[1]}'")
        return value

    def expression(self) -> FieldElement:
        value = self.product()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.product()
            value = value + rhs if op == "+" else value - rhs
        return value

    def product(self) -> FieldElement:
        value = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs:
                    self.fail("division by zero")
                value = value / rhs
        return value

    def unary(self) -> FieldElement:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> FieldElement:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, digits = self.take()
            if kind != "int":
                self.fail("exponent must be an integer")
            if not base and sign < 0:
                self.fail("division by zero")
            return base ** (sign * int(digits))
        return base

    def atom(self) -> FieldElement:
        kind, text = self.take()
        if kind == "int":
            return self.descriptor.element(int(text))
        if kind == "name":
            if text not in self.descriptor.transcendentals:
                self.fail(f"unknown name '{text}'")
            return self.descriptor.gen(text)
        if (kind, text) == ("op", "("):
            value = self.expression()
            if self.take() != ("op", ")"):
                self.fail("missing ')'")
            return value
        self.fail(f"unexpected '{text}'" if text else "unexpected end of input")


def parse_element(text: str, descriptor: FieldDescriptor) -> FieldElement:
    """Parses infix element text such as ``(t^2+1)/(2*t)``."""
    return _ElementParser(text, descriptor).parse()

