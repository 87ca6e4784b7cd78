"""Real-coefficient polynomials with explicitly truncated arithmetic.

The transfer-function pipeline manipulates power series in the Laplace
variable whose exact expansions are infinite; everything here is carried
as a plain coefficient vector of fixed maximum order, and every product
states the order it truncates to.  Coefficients routinely span fifty-plus
decades, so the type also exposes a dynamic-range diagnostic that error
messages can quote.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from numpy.polynomial import polynomial as npoly


@dataclass(frozen=True)
class SeriesPolynomial:
    """Polynomial ``c[0] + c[1]*s + ... + c[N]*s**N`` with frozen order N.

    Instances are immutable value objects: the coefficient vector is
    copied on construction and marked read-only.  Operations never
    produce terms beyond the stated maximum order.
    """

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficient vector must be 1-D and non-empty")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[float], max_order: int | None = None) -> "SeriesPolynomial":
        """Build from ascending coefficients, padding/truncating to ``max_order``."""
        c = np.atleast_1d(np.asarray(list(coeffs), dtype=float))
        if max_order is not None:
            if max_order < 0:
                raise ValueError("max_order must be >= 0")
            out = np.zeros(max_order + 1)
            n = min(c.size, max_order + 1)
            out[:n] = c[:n]
            c = out
        return cls(c)

    @classmethod
    def zero(cls, max_order: int) -> "SeriesPolynomial":
        return cls(np.zeros(max_order + 1))

    @classmethod
    def constant(cls, value: float, max_order: int) -> "SeriesPolynomial":
        c = np.zeros(max_order + 1)
        c[0] = value
        return cls(c)

    # -- basic properties -----------------------------------------------------

    @property
    def max_order(self) -> int:
        return self.coeffs.size - 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SeriesPolynomial):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(
            np.all(self.coeffs == other.coeffs)
        )

    def __repr__(self) -> str:
        return f"SeriesPolynomial({np.array2string(self.coeffs, max_line_width=79)})"

    def dynamic_range(self) -> float:
        """max|c| / min nonzero |c|; 1.0 for the zero polynomial.

        Quoted in diagnostics when the downstream linear algebra goes bad:
        a huge spread here is the usual culprit.
        """
        mags = np.abs(self.coeffs[self.coeffs != 0.0])
        if mags.size == 0:
            return 1.0
        return float(mags.max() / mags.min())

    # -- arithmetic -----------------------------------------------------------

    def add(self, other: "SeriesPolynomial") -> "SeriesPolynomial":
        """Coefficient-wise sum; both operands must share the same order."""
        if self.max_order != other.max_order:
            raise ValueError(
                f"order mismatch: {self.max_order} != {other.max_order}"
            )
        return SeriesPolynomial(self.coeffs + other.coeffs)

    __add__ = add

    def __sub__(self, other: "SeriesPolynomial") -> "SeriesPolynomial":
        return self.add(other.scaled(-1.0))

    def scaled(self, factor: float) -> "SeriesPolynomial":
        return SeriesPolynomial(self.coeffs * float(factor))

    def mul_truncated(self, other: "SeriesPolynomial", max_order: int) -> "SeriesPolynomial":
        """Cauchy product, keeping terms up to ``s**max_order`` only."""
        if max_order < 0:
            raise ValueError("max_order must be >= 0")
        full = np.convolve(self.coeffs, other.coeffs)
        return SeriesPolynomial.from_coeffs(full[: max_order + 1], max_order)

    def truncated(self, max_order: int) -> "SeriesPolynomial":
        return SeriesPolynomial.from_coeffs(self.coeffs, max_order)

    def derivative(self) -> "SeriesPolynomial":
        if self.max_order == 0:
            return SeriesPolynomial.zero(0)
        return SeriesPolynomial(npoly.polyder(self.coeffs))

    def reciprocal_series(self, max_order: int) -> "SeriesPolynomial":
        """Power series of ``1/self`` to ``max_order``; requires c[0] != 0."""
        c0 = self.coeffs[0]
        if c0 == 0.0:
            raise ZeroDivisionError("reciprocal of a series with zero constant term")
        inv = np.zeros(max_order + 1)
        inv[0] = 1.0 / c0
        for k in range(1, max_order + 1):
            jmax = min(k, self.max_order)
            acc = np.dot(self.coeffs[1 : jmax + 1], inv[k - 1 :: -1][:jmax])
            inv[k] = -acc / c0
        return SeriesPolynomial(inv)

    # -- evaluation -----------------------------------------------------------

    def eval_complex(self, s: complex | np.ndarray) -> complex | np.ndarray:
        """Horner evaluation at a complex point (or array of points)."""
        out = npoly.polyval(s, self.coeffs)
        if np.ndim(out) == 0:
            return complex(out)
        return out

    __call__ = eval_complex
