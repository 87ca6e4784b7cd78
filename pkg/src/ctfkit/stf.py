"""Series transmission matrices and rational wall transfer functions.

Each layer of a wall maps the (temperature, flux) pair on one face to the
pair on the other face through a 2x2 transmission matrix in the Laplace
variable.  For a massive layer the exact entries are hyperbolic functions
of sqrt(s); expanded about s = 0 they become power series with only even
or odd structure, which keeps every coefficient a finite rational
expression of the layer data.  Multiplying the per-layer series through
the stack (outdoor side first) yields the wall matrix

    [T_in, q_in]^T = M(s) [T_out, q_out]^T,   M = [[A, B], [C, D]],

from which the three surface transfer functions follow: A/B drives the
external (same-side outdoor) response, 1/B the cross response and D/B the
internal response.  The series for B is then replaced by a diagonal
rational approximant, and the matching rational numerators for A/B and
D/B are recovered by coefficient recursion so that all three functions
share one denominator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ApproximationError, InvalidConstructionError
from .series import SeriesPolynomial
from .wall import Construction, Layer, MassiveLayer, ResistanceLayer

# Which matrix entry feeds which one-sided numerator.  With the product
# accumulated from the outdoor face inwards, the (1,1) entry belongs to the
# external transfer function and the (2,2) entry to the internal one; the
# assignment is pinned by regression against published coefficients for an
# asymmetric benchmark wall (heavier surface film inside than outside).
EXTERNAL_NUMERATOR_ENTRY = "m11"
INTERNAL_NUMERATOR_ENTRY = "m22"

#: Relative residual above which the moment-system solve is rejected.
PADE_RESIDUAL_TOL = 1e-6


@dataclass(frozen=True)
class TransmissionMatrixSeries:
    """2x2 matrix of truncated series, all entries sharing one max order."""

    m11: SeriesPolynomial
    m12: SeriesPolynomial
    m21: SeriesPolynomial
    m22: SeriesPolynomial

    def __post_init__(self) -> None:
        n = self.m11.max_order
        if any(e.max_order != n for e in (self.m12, self.m21, self.m22)):
            raise ValueError("all entries must share the same max order")

    @property
    def max_order(self) -> int:
        return self.m11.max_order

    @classmethod
    def identity(cls, max_order: int) -> "TransmissionMatrixSeries":
        one = SeriesPolynomial.constant(1.0, max_order)
        zero = SeriesPolynomial.zero(max_order)
        return cls(one, zero, zero, one)

    def __matmul__(self, other: "TransmissionMatrixSeries") -> "TransmissionMatrixSeries":
        n = self.max_order
        mul = lambda p, q: p.mul_truncated(q, n)  # noqa: E731
        return TransmissionMatrixSeries(
            m11=mul(self.m11, other.m11) + mul(self.m12, other.m21),
            m12=mul(self.m11, other.m12) + mul(self.m12, other.m22),
            m21=mul(self.m21, other.m11) + mul(self.m22, other.m21),
            m22=mul(self.m21, other.m12) + mul(self.m22, other.m22),
        )

    def determinant(self, max_order: int | None = None) -> SeriesPolynomial:
        n = self.max_order if max_order is None else max_order
        return self.m11.mul_truncated(self.m22, n) - self.m12.mul_truncated(self.m21, n)

    def entry(self, name: str) -> SeriesPolynomial:
        if name not in ("m11", "m12", "m21", "m22"):
            raise KeyError(name)
        return getattr(self, name)


# -- per-layer series ---------------------------------------------------------


def _even_hyperbolic_series(ratio: float, first: float, n: int, odd: bool) -> np.ndarray:
    """Coefficients c[k] with c[0] = first and c[k] = c[k-1]*ratio/denominator,
    where the denominator walks the factorial ladder (2k-1)(2k) for cosh-type
    series and (2k)(2k+1) for sinh-type ones."""
    c = np.empty(n + 1)
    c[0] = first
    for k in range(1, n + 1):
        step = (2 * k) * (2 * k + 1) if odd else (2 * k - 1) * (2 * k)
        c[k] = c[k - 1] * ratio / step
    return c


def layer_matrix_series(layer: Layer, max_order: int) -> TransmissionMatrixSeries:
    """Transmission matrix of one layer as series about s = 0.

    A pure resistance R gives the constant matrix [[1, R], [0, 1]].  For a
    massive layer with thickness L, conductivity k and diffusivity a the
    entries expand to

        m11 = m22 = sum L^(2j) / (a^j (2j)!) s^j
        m12 = (1/k) sum L^(2j+1) / (a^j (2j+1)!) s^j
        m21 =   k   sum L^(2j-1) / (a^j (2j-1)!) s^j   (j >= 1)

    so m12(0) equals the layer resistance and m21 has no constant term.
    A zero-thickness massive layer degenerates to the identity.
    """
    n = max_order
    if isinstance(layer, ResistanceLayer):
        return TransmissionMatrixSeries(
            m11=SeriesPolynomial.constant(1.0, n),
            m12=SeriesPolynomial.constant(layer.resistance, n),
            m21=SeriesPolynomial.zero(n),
            m22=SeriesPolynomial.constant(1.0, n),
        )
    if not isinstance(layer, MassiveLayer):
        raise InvalidConstructionError(f"unsupported layer object: {layer!r}")
    if layer.thickness == 0.0:
        return TransmissionMatrixSeries.identity(n)

    length = layer.thickness
    ratio = length * length / layer.diffusivity
    cosh = _even_hyperbolic_series(ratio, 1.0, n, odd=False)
    sinh_over = _even_hyperbolic_series(ratio, length, n, odd=True)
    # m21/k = s * d(m11)/d(ratio-structure): entry j equals L^(2j-1)/(a^j (2j-1)!),
    # i.e. the cosh ladder shifted one power of s up.
    root_sinh = np.zeros(n + 1)
    if n >= 1:
        root_sinh[1] = length / layer.diffusivity
        for j in range(2, n + 1):
            root_sinh[j] = root_sinh[j - 1] * ratio / ((2 * j - 2) * (2 * j - 1))
    return TransmissionMatrixSeries(
        m11=SeriesPolynomial(cosh),
        m12=SeriesPolynomial(sinh_over / layer.conductivity),
        m21=SeriesPolynomial(root_sinh * layer.conductivity),
        m22=SeriesPolynomial(cosh),
    )


def chain_product(c: Construction, max_order: int) -> TransmissionMatrixSeries:
    """Series transmission matrix of the whole wall.

    Layers are supplied outermost first and each one premultiplies the
    accumulated product, so the result maps outdoor-side (T, q) to
    indoor-side (T, q).  The constant term of the (1,2) entry accumulates
    the plain resistance sum, which callers can check per step.
    """
    acc = TransmissionMatrixSeries.identity(max_order)
    for layer in c.layers:
        acc = layer_matrix_series(layer, max_order) @ acc
    return acc


# -- rational approximation ---------------------------------------------------


def _solve_extended(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Dense partial-pivot LU solve carried out in extended precision.

    The moment matrices handled here are tiny (at most ~21 square) but
    their entries span enough decades that a double-precision solve leaves
    re-expansion residuals near 1e-9 at unit scale for order 10; the wider
    accumulator pushes that down by several orders.  Raises ValueError on
    an exactly singular pivot.
    """
    work = a.astype(np.longdouble, copy=True)
    vec = rhs.astype(np.longdouble, copy=True)
    n = work.shape[0]
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(work[col:, col])))
        if work[pivot, col] == 0.0:
            raise ValueError("singular pivot")
        if pivot != col:
            work[[col, pivot]] = work[[pivot, col]]
            vec[[col, pivot]] = vec[[pivot, col]]
        factors = work[col + 1 :, col] / work[col, col]
        work[col + 1 :, col + 1 :] -= np.outer(factors, work[col, col + 1 :])
        vec[col + 1 :] -= factors * vec[col]
    out = np.zeros(n, dtype=np.longdouble)
    for row in range(n - 1, -1, -1):
        out[row] = (vec[row] - np.dot(work[row, row + 1 :], out[row + 1 :])) / work[row, row]
    return out


def pade_from_reciprocal(b_series: SeriesPolynomial, order: int) -> tuple[SeriesPolynomial, SeriesPolynomial]:
    """Diagonal rational fit P/Q (both degree ``order``) to the B series.

    The cross transfer function is 1/B; fitting B itself and taking the
    reciprocal afterwards keeps the moment system linear.  With T the
    series coefficients and Q normalised by Q[0] = 1, matching the first
    2*order + 1 coefficients of P/Q to T gives the square system

        rows 0..order:            sum_j T[k-j] Q[j] - P[k] = -T[k]
        rows order+1..2*order:    sum_j T[k-j] Q[j]        = -T[k]

    in the unknowns (Q[1..m], P[0..m]).  It is solved densely with
    partial-pivoting LU in extended precision (the matrix is badly scaled
    by construction, its coefficients spanning many decades); a singular
    factorisation or a relative residual above PADE_RESIDUAL_TOL raises
    ApproximationError (retry with a lower order).  Returns (P, Q).
    """
    m = int(order)
    if m < 0:
        raise ValueError("order must be >= 0")
    t = b_series.coeffs
    if t.size < 2 * m + 1:
        raise ValueError(
            f"need at least {2 * m + 1} series coefficients for order {m}, got {t.size}"
        )
    if t[0] == 0.0:
        raise InvalidConstructionError("B series has zero constant term (zero resistance)")

    size = 2 * m + 1
    a = np.zeros((size, size))
    rhs = -t[:size].copy()
    for k in range(size):
        for j in range(1, m + 1):
            if 0 <= k - j:
                a[k, j - 1] = t[k - j]
        if k <= m:
            a[k, m + k] = -1.0
    try:
        solution = _solve_extended(a, rhs)
    except ValueError as exc:
        raise ApproximationError(
            f"moment system of order {m} is singular "
            f"(series dynamic range {b_series.dynamic_range():.2e}); try a lower order"
        ) from exc
    residual = float(np.abs(a.astype(np.longdouble) @ solution - rhs).max())
    scale = np.abs(rhs).max()
    if scale > 0.0 and residual / scale > PADE_RESIDUAL_TOL:
        raise ApproximationError(
            f"moment system solved with relative residual {residual / scale:.2e} "
            f"(> {PADE_RESIDUAL_TOL:.0e}; series dynamic range "
            f"{b_series.dynamic_range():.2e}); try a lower order"
        )
    q = np.concatenate(([1.0], solution[:m].astype(np.float64)))
    p = solution[m:].astype(np.float64)
    return SeriesPolynomial(p), SeriesPolynomial(q)


def companion_numerators(
    matrix: TransmissionMatrixSeries, denominator: SeriesPolynomial
) -> tuple[SeriesPolynomial, SeriesPolynomial]:
    """Degree-m numerators for the external and internal transfer functions.

    Given the shared denominator P (the rational numerator fitted to B),
    the numerator of E/B for a matrix entry E solves E*P = N*B order by
    order:

        N[k] = ( (E*P)[k] - sum_{j<k} N[j] B[k-j] ) / B[0]

    Returns (external, internal) numerators, both sharing P.
    """
    b = matrix.m12.coeffs
    if b[0] == 0.0:
        raise InvalidConstructionError("B series has zero constant term (zero resistance)")
    m = denominator.max_order
    out = []
    for entry_name in (EXTERNAL_NUMERATOR_ENTRY, INTERNAL_NUMERATOR_ENTRY):
        e = matrix.entry(entry_name).coeffs
        numer = np.zeros(m + 1)
        for k in range(m + 1):
            ep = np.dot(e[: k + 1], denominator.coeffs[k::-1][: k + 1])
            correction = np.dot(numer[:k], b[k:0:-1]) if k else 0.0
            numer[k] = (ep - correction) / b[0]
        out.append(SeriesPolynomial(numer))
    return out[0], out[1]


@dataclass(frozen=True)
class RationalSTF:
    """The three wall transfer functions as rationals over one denominator.

    ``num_external/denominator`` approximates A/B, ``num_cross/denominator``
    approximates 1/B and ``num_internal/denominator`` approximates D/B; all
    four polynomials have the same degree.  At s = 0 each ratio equals the
    steady-state transmittance.
    """

    num_external: SeriesPolynomial
    num_cross: SeriesPolynomial
    num_internal: SeriesPolynomial
    denominator: SeriesPolynomial

    def __post_init__(self) -> None:
        m = self.denominator.max_order
        for p in (self.num_external, self.num_cross, self.num_internal):
            if p.max_order != m:
                raise ValueError("numerators and denominator must share one degree")
        if self.denominator.coeffs[0] == 0.0:
            raise ValueError("denominator must not vanish at s = 0")

    @property
    def order(self) -> int:
        return self.denominator.max_order

    def numerator(self, which: str) -> SeriesPolynomial:
        try:
            return {
                "x": self.num_external,
                "y": self.num_cross,
                "z": self.num_internal,
            }[which]
        except KeyError:
            raise KeyError(f"transfer function must be 'x', 'y' or 'z', got {which!r}") from None

    def evaluate(self, which: str, s: complex | np.ndarray) -> complex | np.ndarray:
        return self.numerator(which).eval_complex(s) / self.denominator.eval_complex(s)


def estimate_stf(matrix: TransmissionMatrixSeries, order: int) -> RationalSTF:
    """Fit the three rational transfer functions from the wall matrix series."""
    p, q = pade_from_reciprocal(matrix.m12, order)
    ext, internal = companion_numerators(matrix, p)
    return RationalSTF(
        num_external=ext, num_cross=q, num_internal=internal, denominator=p
    )
