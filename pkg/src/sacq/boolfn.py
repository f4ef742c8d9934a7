"""Truth tables, Walsh-Hadamard and autocorrelation spectra, exact SAC decisions.

Index convention throughout the package: an input x = (x1, ..., xn) lives at
table index sum(x_j << (n - j)), so x1 is the most significant bit.  The
weight-1 direction e_i therefore has index ``1 << (n - i)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

MIN_N = 1
MAX_EXACT_N = 24
MAX_ENUM_N = 3


class ParseError(ValueError):
    """Malformed function source. Carries a 1-based line/column when known."""

    def __init__(self, message: str, line: int = 1, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(f"{where}: {message}")


class SizeLimitError(ValueError):
    pass


def _check_n(n: int, limit: int = MAX_EXACT_N) -> None:
    if not MIN_N <= n <= limit:
        raise SizeLimitError(f"n={n} outside supported range [{MIN_N}, {limit}]")


def direction_index(n: int, i: int) -> int:
    """Table index of the weight-1 vector e_i (1-based coordinate)."""
    if not 1 <= i <= n:
        raise ValueError(f"coordinate {i} outside [1, {n}]")
    return 1 << (n - i)


def bits_to_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | (int(b) & 1)
    return idx


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    n: int
    table: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        table = np.asarray(self.table)
        if table.ndim != 1 or table.size != 1 << self.n:
            raise ValueError(f"table must have length 2^{self.n}, got shape {table.shape}")
        if table.size and not np.isin(table, (0, 1)).all():
            raise ValueError("table entries must be 0 or 1")
        object.__setattr__(self, "table", _frozen(table.astype(np.uint8)))

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def character(self) -> np.ndarray:
        """The +/-1 form f(x) = (-1)^F(x)."""
        return 1 - 2 * self.table.astype(np.int64)

    @property
    def weight(self) -> int:
        return int(self.table.sum())

    def __call__(self, x) -> int:
        idx = x if isinstance(x, (int, np.integer)) else bits_to_index(x)
        return int(self.table[idx])

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))

    def to_bits(self) -> str:
        return "".join("01"[b] for b in self.table)

    def to_hex(self) -> str:
        if self.n < 2:
            raise ValueError("hex form needs n >= 2")
        return "".join(
            format(int(self.to_bits()[k:k + 4], 2), "x") for k in range(0, self.size, 4)
        )

    def __repr__(self):
        body = self.to_bits() if self.n <= 6 else f"0x{self.to_hex()[:16]}..."
        return f"BooleanFunction(n={self.n}, {body})"

    @classmethod
    def from_character(cls, n: int, values) -> "BooleanFunction":
        values = np.asarray(values)
        return cls(n, (values < 0).astype(np.uint8))

    @classmethod
    def constant(cls, n: int, value: int = 0) -> "BooleanFunction":
        return cls(n, np.full(1 << n, value & 1, dtype=np.uint8))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "BooleanFunction":
        return cls(n, rng.integers(0, 2, size=1 << n, dtype=np.uint8))


def all_functions(n: int) -> Iterator[BooleanFunction]:
    """Every function on n variables, in order of the table read as a binary number."""
    _check_n(n, MAX_ENUM_N)
    size = 1 << n
    for code in range(1 << size):
        table = np.array([(code >> (size - 1 - k)) & 1 for k in range(size)], dtype=np.uint8)
        yield BooleanFunction(n, table)


# --- parsing ---------------------------------------------------------------

def _n_from_length(length: int, line: int = 1) -> int:
    if length < 2 or length & (length - 1):
        raise ParseError(f"truth-table length {length} is not a power of two >= 2", line)
    return length.bit_length() - 1


def from_bits(text: str, line: int = 1) -> BooleanFunction:
    text = text.strip()
    for col, ch in enumerate(text, 1):
        if ch not in "01":
            raise ParseError(f"unexpected character {ch!r} in binary truth table", line, col)
    n = _n_from_length(len(text), line)
    _check_n(n)
    return BooleanFunction(n, np.frombuffer(text.encode(), dtype=np.uint8) - ord("0"))


def from_hex(text: str, n: int | None = None, line: int = 1) -> BooleanFunction:
    text = text.strip()
    offset = 0
    if text[:2].lower() == "0x":
        text, offset = text[2:], 2
    for col, ch in enumerate(text, 1 + offset):
        if ch not in "0123456789abcdefABCDEF":
            raise ParseError(f"unexpected character {ch!r} in hex truth table", line, col)
    if n is None:
        if not text:
            raise ParseError("empty hex truth table", line)
        n = _n_from_length(4 * len(text), line)
    _check_n(n)
    if n < 2:
        raise ParseError("hex truth tables need n >= 2", line)
    if len(text) * 4 != 1 << n:
        raise ParseError(f"hex string of length {len(text)} does not encode 2^{n} bits", line)
    bits = "".join(format(int(ch, 16), "04b") for ch in text)
    return from_bits(bits, line)


_ANF_TOKEN = re.compile(r"(x)(\d+)|(1)|([+*])|(\S)")


def from_anf(expr: str, n: int | None = None, line: int = 1) -> BooleanFunction:
    """Evaluate an ANF such as ``x1*x2 + x3*x4 + 1`` over GF(2).

    ``+`` is XOR, ``*`` is AND, the only constant is ``1``.  When ``n`` is
    omitted it is the largest variable index that appears.
    """
    terms: list[list[int]] = [[]]
    expect_factor = True
    stripped = expr.rstrip()
    for m in _ANF_TOKEN.finditer(stripped):
        col = m.start() + 1
        var, digits, one, op, junk = m.groups()
        if junk is not None:
            raise ParseError(f"unexpected character {junk!r} in ANF", line, col)
        if op is not None:
            if expect_factor:
                raise ParseError(f"operator {op!r} where a factor was expected", line, col)
            if op == "+":
                terms.append([])
            expect_factor = True
            continue
        if not expect_factor:
            raise ParseError("missing operator between factors", line, col)
        if var is not None:
            k = int(digits)
            if k < 1:
                raise ParseError(f"variable index x{k} must be >= 1", line, col)
            terms[-1].append(k)
        else:
            terms[-1].append(0)  # the constant 1
        expect_factor = False
    if expect_factor:
        raise ParseError("ANF expression ends without a factor", line, len(stripped) + 1)

    max_var = max((k for t in terms for k in t), default=0)
    if n is None:
        n = max(max_var, MIN_N)
    _check_n(n)
    if max_var > n:
        raise ParseError(f"variable x{max_var} out of range for n={n}", line)

    idx = np.arange(1 << n, dtype=np.int64)
    table = np.zeros(1 << n, dtype=np.uint8)
    for term in terms:
        mono = np.ones(1 << n, dtype=np.uint8)
        for k in term:
            if k:
                mono &= ((idx >> (n - k)) & 1).astype(np.uint8)
        table ^= mono
    return BooleanFunction(n, table)


def parse_function(source: str, fmt: str = "bits", n: int | None = None) -> BooleanFunction:
    """Build a function from a binary table, a hex table or an ANF expression.

    ``fmt`` is one of ``"bits"``, ``"hex"``, ``"anf"``.  ``n`` is optional;
    when given it must agree with the table length.
    """
    if fmt == "bits":
        f = from_bits(source)
    elif fmt == "hex":
        f = from_hex(source, n)
    elif fmt == "anf":
        return from_anf(source, n)
    else:
        raise ValueError(f"unknown function format {fmt!r}")
    if n is not None and f.n != n:
        raise ParseError(f"declared n={n} but the table encodes n={f.n}")
    return f


def read_truth_table_file(path) -> BooleanFunction:
    """Read the two-line file format: ``n=<k>`` then a binary or ``0x`` hex table."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) != 2:
        raise ParseError(f"expected 2 non-empty lines, found {len(lines)}")
    m = re.fullmatch(r"n\s*=\s*(\d+)", lines[0])
    if not m:
        raise ParseError("first line must read n=<k>", 1, 1)
    n = int(m.group(1))
    _check_n(n)
    body = lines[1]
    if body[:2].lower() == "0x":
        return from_hex(body, n, line=2)
    f = from_bits(body, line=2)
    if f.n != n:
        raise ParseError(f"header says n={n} but the table has length {len(body)}", 2)
    return f


def write_truth_table_file(f: BooleanFunction, path, hex_form: bool = False) -> None:
    body = "0x" + f.to_hex() if hex_form else f.to_bits()
    Path(path).write_text(f"n={f.n}\n{body}\n")


# --- transforms ------------------------------------------------------------

def fwht(values) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform, natural (Hadamard) order.

    Integer input stays integer, so spectra of +/-1 tables are exact.
    Applying it twice multiplies by the length.
    """
    a = np.array(values, copy=True)
    size = a.size
    if size & (size - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        a = np.stack((a[:, 0] + a[:, 1], a[:, 0] - a[:, 1]), axis=1)
        h *= 2
    return a.reshape(size)


@dataclass(frozen=True, eq=False)
class FourierSpectrum:
    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if coeffs.size != 1 << self.n:
            raise ValueError("spectrum length must be 2^n")
        scaled = coeffs * (1 << self.n)
        if not np.array_equal(scaled, np.round(scaled)):
            raise ValueError("Walsh coefficients must be multiples of 2^-n")
        if abs(float(np.dot(coeffs, coeffs)) - 1.0) > 1e-10:
            raise ValueError("Parseval violated")
        object.__setattr__(self, "coeffs", _frozen(coeffs))

    def __getitem__(self, w) -> float:
        idx = w if isinstance(w, (int, np.integer)) else bits_to_index(w)
        return float(self.coeffs[idx])

    def half_sums(self, i: int) -> tuple[float, float]:
        """(sum of f^(w)^2 over w_i = 0, sum over w_i = 1)."""
        bit = ((np.arange(1 << self.n) >> (self.n - i)) & 1).astype(bool)
        sq = self.coeffs ** 2
        return float(sq[~bit].sum()), float(sq[bit].sum())

    def inverse(self) -> np.ndarray:
        """Character table recovered from the coefficients."""
        return fwht(self.coeffs)


@dataclass(frozen=True, eq=False)
class AutocorrSpectrum:
    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs)
        if coeffs.size != 1 << self.n:
            raise ValueError("spectrum length must be 2^n")
        if coeffs.dtype.kind != "i":
            raise TypeError("autocorrelations are stored as integers")
        if coeffs[0] != 1 << self.n:
            raise ValueError("autocorrelation at 0 must equal 2^n")
        if (coeffs % 2).any() or (np.abs(coeffs) > 1 << self.n).any():
            raise ValueError("autocorrelations must be even and within [-2^n, 2^n]")
        object.__setattr__(self, "coeffs", _frozen(coeffs.astype(np.int64)))

    def __getitem__(self, a) -> int:
        idx = a if isinstance(a, (int, np.integer)) else bits_to_index(a)
        return int(self.coeffs[idx])


def walsh_spectrum(f: BooleanFunction) -> FourierSpectrum:
    return FourierSpectrum(f.n, fwht(f.character) / float(f.size))


def autocorrelation_spectrum(f: BooleanFunction) -> AutocorrSpectrum:
    """Autocorrelations via transform, square, inverse transform.

    Works on the unnormalized integer transform W = 2^n f^, so the result
    is 2^-n * WHT(W^2).  Partial sums never exceed sum(W^2) = 4^n, which
    keeps int64 exact up to n = 24.
    """
    w = fwht(f.character)
    acf, rem = np.divmod(fwht(w * w), f.size)
    if rem.any():
        raise ArithmeticError("non-integral autocorrelation")
    return AutocorrSpectrum(f.n, acf)


def autocorrelation_direct(f: BooleanFunction) -> np.ndarray:
    """O(4^n) evaluation of sum_x f(x) f(x + a) for every a."""
    if f.n > 12:
        raise SizeLimitError("direct autocorrelation is limited to n <= 12")
    chi = f.character
    x = np.arange(f.size)
    return chi[x[:, None] ^ x[None, :]] @ chi


def derivative(f: BooleanFunction, c) -> BooleanFunction:
    """Delta_c F(x) = F(x + c) + F(x)."""
    if isinstance(c, (int, np.integer)):
        if not 0 <= c < f.size:
            raise ValueError(f"direction index {c} outside [0, 2^{f.n})")
        idx = int(c)
    else:
        if len(c) != f.n:
            raise ValueError(f"direction has {len(c)} coordinates, function has {f.n}")
        idx = bits_to_index(c)
    x = np.arange(f.size)
    return BooleanFunction(f.n, f.table[x ^ idx] ^ f.table)


def bias(f: BooleanFunction) -> int:
    return f.size - 2 * f.weight


# --- SAC -------------------------------------------------------------------

@dataclass(frozen=True)
class SacReport:
    n: int
    directional: dict[int, int]  # coordinate i -> autocorrelation at e_i
    epsilon_exact: int
    is_sac: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "is_sac", all(v == 0 for v in self.directional.values()))


def sac_report(f: BooleanFunction) -> SacReport:
    acf = autocorrelation_spectrum(f)
    directional = {i: int(acf.coeffs[direction_index(f.n, i)]) for i in range(1, f.n + 1)}
    eps = sum(abs(v) for v in directional.values()) // 2
    return SacReport(f.n, directional, eps)


def is_sac_spectral(spec: FourierSpectrum) -> bool:
    """Check sum_w (-1)^{w.c} f^(w)^2 = 0 for every weight-1 c, exactly.

    Coefficients are multiples of 2^-n, so the scaled squares are integers.
    """
    scaled = np.round(spec.coeffs * (1 << spec.n)).astype(object)
    sq = scaled * scaled
    w = np.arange(1 << spec.n)
    for i in range(1, spec.n + 1):
        sign = 1 - 2 * ((w >> (spec.n - i)) & 1)
        if sum(sq * sign) != 0:
            return False
    return True


@dataclass
class DistanceBoundCheck:
    n: int
    sac_count: int
    functions_checked: int
    max_slack: int  # min over f of (epsilon_exact - distance); negative means violated
    counterexamples: list[dict]

    @property
    def holds(self) -> bool:
        return not self.counterexamples


def check_distance_bound(n: int = 3) -> DistanceBoundCheck:
    """Compare epsilon_exact with the true Hamming distance to the SAC set.

    Enumerates every function on n <= 3 variables.  Any function whose
    nearest SAC function is farther than epsilon_exact is reported.
    """
    funcs = list(all_functions(n))
    codes = [int(f.to_bits(), 2) for f in funcs]
    reports = [sac_report(f) for f in funcs]
    sac_codes = [c for c, r in zip(codes, reports) if r.is_sac]
    counterexamples = []
    slack = None
    for f, code, rep in zip(funcs, codes, reports):
        dist = min((code ^ s).bit_count() for s in sac_codes) if sac_codes else None
        if dist is None:
            counterexamples.append({"table": f.to_bits(), "distance": None,
                                    "epsilon": rep.epsilon_exact})
            continue
        d = rep.epsilon_exact - dist
        slack = d if slack is None else min(slack, d)
        if d < 0:
            counterexamples.append({"table": f.to_bits(), "distance": dist,
                                    "epsilon": rep.epsilon_exact})
    return DistanceBoundCheck(n, len(sac_codes), len(funcs), slack if slack is not None else 0,
                              counterexamples)


def sac_functions(n: int) -> list[BooleanFunction]:
    return [f for f in all_functions(n) if sac_report(f).is_sac]


def inputs(n: int) -> Iterator[tuple[int, ...]]:
    """All x in F_2^n in table order."""
    return product((0, 1), repeat=n)
