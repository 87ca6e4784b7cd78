"""From rational transfer functions to discrete-time wall coefficients.

The chain here is: find the denominator roots (all must sit strictly in
the left half plane), expand G(s)/s^2 into partial fractions so that the
response to a unit temperature ramp has a closed form, sample that
response on the timestep grid via known z-transforms, and divide out the
triangle-pulse factor.  The result is one set of conduction transfer
function coefficients per wall transfer function, plus the shared
autoregressive coefficients, from which thermal response factors follow
by polynomial division.

Precision note: the partial-fraction residues of a delayed response are
individually huge and cancel to many decades when resampled, so this
stage runs in numpy's extended precision (80-bit on x86) end to end --
eigenvalues come from LAPACK in double precision and are then polished
with Newton steps on the polynomial itself.  Only the final coefficient
rows are rounded back to double.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AssemblyError,
    InstabilityError,
    RepeatedPoleError,
    RootFindingError,
)
from .series import SeriesPolynomial

#: Relative tolerance used to match conjugate eigenvalue pairs.
CONJUGATE_MATCH_TOL = 1e-9
#: Minimum relative separation below which poles count as repeated.
POLE_SEPARATION_TOL = 1e-7
#: Structurally-zero assembly coefficients must stay below this, relative
#: to the largest numerator coefficient.
ASSEMBLY_TRIM_TOL = 1e-10

_EPS_EXT = float(np.finfo(np.longdouble).eps)


def _horner(coeffs: np.ndarray, s):
    """Horner evaluation preserving the dtype of ``s``."""
    acc = s * 0
    for c in coeffs[::-1]:
        acc = acc * s + c
    return acc


def _polish_root(coeffs: np.ndarray, deriv: np.ndarray, root, max_steps: int = 6):
    """A few Newton steps on the polynomial, in the dtype of ``root``.

    The companion eigenvalues carry double-precision error; polishing
    against the polynomial itself reduces that to the extended-precision
    evaluation floor.  Stops early once the step is below a few ulp.
    """
    p = root
    for _ in range(max_steps):
        d = _horner(deriv, p)
        if d == 0:
            break
        step = _horner(coeffs, p) / d
        p = p - step
        if abs(step) <= 4.0 * _EPS_EXT * abs(p):
            break
    return p


@dataclass(frozen=True)
class PoleSet:
    """Denominator roots grouped by kind.

    ``real`` holds the real roots themselves (all negative); ``pairs``
    holds one representative per conjugate pair, imaginary part positive.
    """

    real: tuple[float, ...]
    pairs: tuple[complex, ...]

    @property
    def count(self) -> int:
        return len(self.real) + 2 * len(self.pairs)

    def all_roots(self) -> np.ndarray:
        return np.concatenate(
            [
                np.asarray(self.real, dtype=complex),
                np.asarray(self.pairs, dtype=complex),
                np.conj(np.asarray(self.pairs, dtype=complex)),
            ]
        )


def find_poles(denominator: SeriesPolynomial) -> PoleSet:
    """Roots of the denominator polynomial, via its reciprocal companion matrix.

    The companion matrix is built for the reversed polynomial, so its
    eigenvalues are the reciprocals of the roots; this keeps the matrix
    entries formed from ratios against the (large, well-scaled) constant
    coefficient.  Eigenvalues come from the standard dense QR iteration
    and are Newton-polished afterwards.  Raises RootFindingError if the
    eigensolver fails or conjugate pairing breaks down, and
    InstabilityError for any root with non-negative real part.
    """
    alpha = denominator.coeffs
    m = alpha.size - 1
    if m < 1:
        return PoleSet(real=(), pairs=())
    if alpha[0] == 0.0:
        raise RootFindingError("denominator has zero constant coefficient")
    if alpha[-1] == 0.0:
        raise RootFindingError("denominator degree collapsed (zero leading coefficient)")

    companion = np.zeros((m, m))
    companion[0, :] = -alpha[1:] / alpha[0]
    if m > 1:
        companion[np.arange(1, m), np.arange(0, m - 1)] = 1.0
    try:
        mu = np.linalg.eigvals(companion)
    except np.linalg.LinAlgError as exc:
        raise RootFindingError(f"eigenvalue iteration failed: {exc}") from exc
    if np.any(mu == 0.0) or not np.all(np.isfinite(mu)):
        raise RootFindingError("eigenvalue iteration produced zero or non-finite values")
    roots = 1.0 / mu

    norm = (alpha / alpha[0]).astype(np.longdouble)
    deriv = np.polynomial.polynomial.polyder(norm)
    real: list[float] = []
    plus: list[complex] = []
    minus: list[complex] = []
    for p in roots:
        if p.imag == 0.0:
            real.append(float(_polish_root(norm, deriv, np.longdouble(p.real))))
        elif p.imag > 0.0:
            plus.append(complex(_polish_root(norm, deriv, np.clongdouble(p))))
        else:
            minus.append(complex(p))

    for p in real + plus:
        if (p.real if isinstance(p, complex) else p) >= 0.0:
            raise InstabilityError(
                f"denominator root {p:.6e} does not lie in the left half plane"
            )

    if len(plus) != len(minus):
        raise RootFindingError("complex roots do not split into conjugate pairs")
    pairs: list[complex] = []
    for p in sorted(plus, key=lambda v: (v.real, v.imag)):
        best = min(minus, key=lambda q: abs(q - p.conjugate()), default=None)
        # The unpolished partner may sit a polish-step away from the exact
        # conjugate; the match tolerance absorbs that.
        if best is None or abs(best - p.conjugate()) > CONJUGATE_MATCH_TOL * abs(p):
            raise RootFindingError(
                f"no conjugate partner for root {p:.6e} within {CONJUGATE_MATCH_TOL:.0e}"
            )
        minus.remove(best)
        pairs.append(p)
    return PoleSet(real=tuple(sorted(real)), pairs=tuple(pairs))


def _check_simple(poles: PoleSet) -> None:
    roots = poles.all_roots()
    for i in range(roots.size):
        for j in range(i + 1, roots.size):
            scale = max(abs(roots[i]), abs(roots[j]))
            if abs(roots[i] - roots[j]) <= POLE_SEPARATION_TOL * scale:
                raise RepeatedPoleError(
                    f"roots {roots[i]:.6e} and {roots[j]:.6e} are not separated "
                    f"(relative gap below {POLE_SEPARATION_TOL:.0e})"
                )


@dataclass(frozen=True)
class PoleResidueForm:
    """Partial-fraction data of G(s)/s^2 for one transfer function.

    ``ramp_gain`` is the coefficient of the 1/s^2 term (the steady
    transmittance), ``offset`` that of 1/s.  ``real_terms`` holds
    (decay_rate, residue) per real root -decay_rate; ``pair_terms`` holds
    (decay_rate, frequency, residue_re, residue_im) per conjugate pair
    with roots -decay_rate +/- j*frequency, the residue taken at the root
    with negative imaginary part.  Values are stored as numpy extended
    floats so that downstream resampling keeps its precision.
    """

    ramp_gain: float
    offset: float
    real_terms: tuple[tuple[float, float], ...]
    pair_terms: tuple[tuple[float, float, float, float], ...]

    @property
    def pole_count(self) -> int:
        return len(self.real_terms) + 2 * len(self.pair_terms)

    def ramp_response(self, t: float) -> float:
        """Surface flux at time t for a unit temperature ramp started at rest."""
        q = float(self.ramp_gain) * t + float(self.offset)
        for rate, residue in self.real_terms:
            q += float(residue) * math.exp(-float(rate) * t)
        for rate, freq, res_re, res_im in self.pair_terms:
            q += 2.0 * math.exp(-float(rate) * t) * (
                float(res_re) * math.cos(float(freq) * t)
                + float(res_im) * math.sin(float(freq) * t)
            )
        return q

    def evaluate(self, s: complex) -> complex:
        """Value of the reconstructed G(s) = s^2 * (expanded G(s)/s^2)."""
        total = complex(self.ramp_gain) + complex(self.offset) * s
        s2 = s * s
        for rate, residue in self.real_terms:
            total += s2 * float(residue) / (s + float(rate))
        for rate, freq, res_re, res_im in self.pair_terms:
            res = complex(res_re, res_im)
            pole = complex(rate, freq)
            total += s2 * (res / (s + pole) + res.conjugate() / (s + pole.conjugate()))
        return total


def partial_fractions(
    numerator: SeriesPolynomial, denominator: SeriesPolynomial, poles: PoleSet
) -> PoleResidueForm:
    """Expand numerator/denominator / s^2 into the ramp-response form.

    All denominator roots must be simple; the residue at a simple root p
    of G(s)/s^2 is N(p) / (p^2 D'(p)) once D is normalised to D(0) = 1.
    Residues are evaluated in extended precision at freshly re-polished
    roots, so the accuracy of the ``poles`` argument only needs to be
    good enough for Newton to converge.
    """
    if poles.count != denominator.max_order:
        raise ValueError(
            f"pole count {poles.count} does not match denominator degree "
            f"{denominator.max_order}"
        )
    _check_simple(poles)
    scale = denominator.coeffs[0]
    if scale == 0.0:
        raise ValueError("denominator must not vanish at s = 0")
    dnorm = (denominator.coeffs / scale).astype(np.longdouble)
    nnorm = (numerator.coeffs / scale).astype(np.longdouble)
    dprime = np.polynomial.polynomial.polyder(dnorm)

    ramp_gain = nnorm[0]
    offset = (nnorm[1] if nnorm.size > 1 else np.longdouble(0.0)) - nnorm[0] * (
        dnorm[1] if dnorm.size > 1 else np.longdouble(0.0)
    )

    real_terms = []
    for p0 in poles.real:
        p = _polish_root(dnorm, dprime, np.longdouble(p0))
        residue = _horner(nnorm, p) / (p * p * _horner(dprime, p))
        real_terms.append((-p, residue))
    pair_terms = []
    for p0 in poles.pairs:
        # Residue taken at the root below the real axis.
        p = _polish_root(dnorm, dprime, np.clongdouble(p0.conjugate()))
        residue = _horner(nnorm, p) / (p * p * _horner(dprime, p))
        pair_terms.append((-p.real, -p.imag, residue.real, residue.imag))
    return PoleResidueForm(
        ramp_gain=ramp_gain,
        offset=offset,
        real_terms=tuple(real_terms),
        pair_terms=tuple(pair_terms),
    )


# -- discrete-time assembly ---------------------------------------------------


@dataclass(frozen=True)
class CtfSet:
    """Conduction transfer function coefficients for one wall and timestep.

    ``a``, ``b``, ``c`` are the external, cross and internal coefficient
    rows; ``d`` the shared autoregressive row with d[0] = 1.  All four
    have length order + 1.

    At short timesteps the row sums cancel far below the resolution of
    the rounded rows (the true d-row sum of a heavy wall at dt = 60 s
    sits ~15 decades under the largest coefficient), so the assembly also
    records ``dc_sums``, the row sums of the unrounded coefficients
    evaluated in a cancellation-free form.  ``sums`` reports the literal
    sums of the stored rows; ``u_ratios`` prefers ``dc_sums`` when
    present.
    """

    dt: float
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    dc_sums: tuple[float, float, float, float] | None = None

    def __post_init__(self) -> None:
        if self.dt <= 0.0 or not math.isfinite(self.dt):
            raise ValueError("dt must be positive and finite")
        n = np.asarray(self.d).size
        for field in ("a", "b", "c", "d"):
            arr = np.array(getattr(self, field), dtype=float)
            if arr.ndim != 1 or arr.size != n:
                raise ValueError("coefficient rows must be 1-D and equally long")
            arr.flags.writeable = False
            object.__setattr__(self, field, arr)
        if abs(self.d[0] - 1.0) > 1e-12:
            raise ValueError("d[0] must be 1")
        if self.dc_sums is not None:
            object.__setattr__(self, "dc_sums", tuple(float(v) for v in self.dc_sums))

    @property
    def order(self) -> int:
        return self.d.size - 1

    def row(self, which: str) -> np.ndarray:
        try:
            return {"x": self.a, "y": self.b, "z": self.c}[which]
        except KeyError:
            raise KeyError(f"transfer function must be 'x', 'y' or 'z', got {which!r}") from None

    def sums(self) -> dict[str, float]:
        """Literal sums of the stored (double-precision) rows."""
        return {
            "a": float(self.a.sum()),
            "b": float(self.b.sum()),
            "c": float(self.c.sum()),
            "d": float(self.d.sum()),
        }

    def u_ratios(self) -> dict[str, float]:
        """sum(row)/sum(d) for each response row; all must equal the transmittance.

        Uses the assembly-time ``dc_sums`` when available, since the
        literal sums of the rounded rows lose all significance at short
        timesteps.
        """
        if self.dc_sums is not None:
            sa, sb, sc, sd = self.dc_sums
            return {"x": sa / sd, "y": sb / sd, "z": sc / sd}
        sd = float(self.d.sum())
        return {k: float(self.row(k).sum()) / sd for k in ("x", "y", "z")}

    def z_roots(self) -> np.ndarray:
        """Roots of the autoregressive polynomial in z (stable: inside unit circle)."""
        if self.order == 0:
            return np.empty(0, dtype=complex)
        return np.roots(self.d)

    def evaluate(self, which: str, z_inv: complex | np.ndarray) -> complex | np.ndarray:
        num = np.polynomial.polynomial.polyval(z_inv, self.row(which))
        den = np.polynomial.polynomial.polyval(z_inv, self.d)
        return num / den


def _pole_terms(prf: PoleResidueForm, dt: float) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Per-root z-domain (denominator, numerator) factors, ascending in z."""
    dt = np.longdouble(dt)
    one = np.longdouble(1.0)
    dens: list[np.ndarray] = []
    nums: list[np.ndarray] = []
    for rate, residue in prf.real_terms:
        growth = np.exp(np.longdouble(rate) * dt)
        dens.append(np.array([-one, growth]))
        nums.append(np.array([one * 0, residue * growth]))
    for rate, freq, res_re, res_im in prf.pair_terms:
        growth = np.exp(np.longdouble(rate) * dt)
        cosw = np.cos(np.longdouble(freq) * dt)
        sinw = np.sin(np.longdouble(freq) * dt)
        dens.append(np.array([one, -2.0 * growth * cosw, growth * growth]))
        nums.append(
            np.array(
                [
                    one * 0,
                    2.0 * growth * (res_im * sinw - res_re * cosw),
                    2.0 * res_re * growth * growth,
                ]
            )
        )
    return dens, nums


def _dc_denominator_sum(prf: PoleResidueForm, dt: float):
    """Product of the per-root z-factors evaluated at z = 1, cancellation-free.

    Each real root contributes e^(r dt) - 1 = expm1(r dt); each pair
    contributes e^(2 s dt) - 2 e^(s dt) cos(w dt) + 1, rewritten as
    (expm1(s dt) + 2 sin^2(w dt / 2))^2 + sin^2(w dt), which is a sum of
    non-negative terms.  Dividing by the product of leading coefficients
    gives the true sum of the normalised autoregressive row.
    """
    dt = np.longdouble(dt)
    value = np.longdouble(1.0)
    leading = np.longdouble(1.0)
    for rate, _ in prf.real_terms:
        value *= np.expm1(np.longdouble(rate) * dt)
        leading *= np.exp(np.longdouble(rate) * dt)
    for rate, freq, _, _ in prf.pair_terms:
        growth = np.exp(np.longdouble(rate) * dt)
        half = np.sin(np.longdouble(freq) * dt / 2.0)
        edge = np.expm1(np.longdouble(rate) * dt) + 2.0 * half * half
        value *= edge * edge + np.sin(np.longdouble(freq) * dt) ** 2
        leading *= growth * growth
    return value / leading


def _same_pole_structure(a: PoleResidueForm, b: PoleResidueForm) -> bool:
    if len(a.real_terms) != len(b.real_terms) or len(a.pair_terms) != len(b.pair_terms):
        return False
    for (ra, _), (rb, _) in zip(a.real_terms, b.real_terms):
        if abs(ra - rb) > 1e-9 * max(ra, rb):
            return False
    for (ra, fa, _, _), (rb, fb, _, _) in zip(a.pair_terms, b.pair_terms):
        scale = max(abs(complex(ra, fa)), abs(complex(rb, fb)))
        if abs(complex(ra, fa) - complex(rb, fb)) > 1e-9 * scale:
            return False
    return True


def assemble_ctf(
    prf_x: PoleResidueForm, prf_y: PoleResidueForm, prf_z: PoleResidueForm, dt: float
) -> CtfSet:
    """Sample the three ramp responses on the dt grid and divide out the
    triangle-pulse factor, producing one CtfSet.

    All three forms must share the same pole structure (they come from one
    denominator); the shared autoregressive row is built once from it.
    The z-domain numerator has two structurally-zero coefficients (the
    constant term and the top degree); if the top one fails to cancel to
    within ASSEMBLY_TRIM_TOL of the largest coefficient, AssemblyError is
    raised.
    """
    if dt <= 0.0 or not math.isfinite(dt):
        raise ValueError("dt must be positive and finite")
    if not (_same_pole_structure(prf_x, prf_y) and _same_pole_structure(prf_z, prf_y)):
        raise AssemblyError("transfer functions do not share one pole structure")

    dens, _ = _pole_terms(prf_y, dt)
    m = prf_y.pole_count
    big = np.array([np.longdouble(1.0)])
    for d in dens:
        big = np.convolve(big, d)
    if big.size != m + 1 or big[-1] == 0.0 or not np.all(np.isfinite(big)):
        raise AssemblyError("autoregressive polynomial is degenerate or overflowed")

    dt_ext = np.longdouble(dt)
    rows: dict[str, np.ndarray] = {}
    for key, prf in (("x", prf_x), ("y", prf_y), ("z", prf_z)):
        _, nums = _pole_terms(prf, dt)
        partial = np.zeros(m + 1, dtype=np.longdouble)
        for k, numer in enumerate(nums):
            prod = np.array([np.longdouble(1.0)])
            for j, d in enumerate(dens):
                if j != k:
                    prod = np.convolve(prod, d)
            partial += np.convolve(numer, prod)[: m + 1]
        ramp_gain = np.longdouble(prf.ramp_gain)
        offset = np.longdouble(prf.offset)
        numerator = np.convolve(
            big, np.array([np.longdouble(0.0), ramp_gain * dt_ext - offset, offset])
        )
        numerator += np.convolve(np.array([1.0, -2.0, 1.0], dtype=np.longdouble), partial)
        if numerator.size != m + 3:
            raise AssemblyError("numerator degree mismatch during assembly")
        top = abs(numerator[m + 2])
        scale = np.abs(numerator).max()
        if scale > 0.0 and top > ASSEMBLY_TRIM_TOL * scale:
            raise AssemblyError(
                f"top numerator coefficient failed to cancel "
                f"(|{float(numerator[m + 2]):.3e}| vs scale {float(scale):.3e})"
            )
        if abs(numerator[0]) > ASSEMBLY_TRIM_TOL * max(float(scale), 1.0):
            raise AssemblyError("constant numerator coefficient failed to cancel")
        rows[key] = numerator[1 : m + 2][::-1] / (dt_ext * big[-1])

    d_row = big[::-1] / big[-1]
    # The row sums collapse by many decades at small dt; record them from
    # the stable product form (sum of a numerator row is its DC gain times
    # the denominator sum, since the pulse factor vanishes at z = 1).
    sum_d = _dc_denominator_sum(prf_y, dt)
    dc = (
        float(np.longdouble(prf_x.ramp_gain) * sum_d),
        float(np.longdouble(prf_y.ramp_gain) * sum_d),
        float(np.longdouble(prf_z.ramp_gain) * sum_d),
        float(sum_d),
    )
    return CtfSet(dt=dt, a=rows["x"], b=rows["y"], c=rows["z"], d=d_row, dc_sums=dc)


# -- response factors ---------------------------------------------------------


@dataclass(frozen=True)
class ResponseFactorSeq:
    """Thermal response factor sequences (external, cross, internal)."""

    dt: float
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self) -> None:
        if self.dt <= 0.0 or not math.isfinite(self.dt):
            raise ValueError("dt must be positive and finite")
        n = np.asarray(self.y).size
        for field in ("x", "y", "z"):
            arr = np.array(getattr(self, field), dtype=float)
            if arr.ndim != 1 or arr.size != n:
                raise ValueError("factor sequences must be 1-D and equally long")
            arr.flags.writeable = False
            object.__setattr__(self, field, arr)

    @property
    def count(self) -> int:
        return self.y.size

    def sequence(self, which: str) -> np.ndarray:
        try:
            return {"x": self.x, "y": self.y, "z": self.z}[which]
        except KeyError:
            raise KeyError(f"transfer function must be 'x', 'y' or 'z', got {which!r}") from None


def response_factors(ctf: CtfSet, count: int) -> ResponseFactorSeq:
    """First ``count`` response factors of each transfer function.

    Long division of the coefficient rows by the autoregressive row: the
    first order+1 factors pick up a numerator term, later ones satisfy
    the pure recurrence phi[k] = -sum_j d[j] phi[k-j].
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    m = ctf.order
    out: dict[str, np.ndarray] = {}
    for key in ("x", "y", "z"):
        numer = ctf.row(key)
        phi = np.zeros(count)
        for k in range(count):
            acc = numer[k] if k <= m else 0.0
            jmax = min(k, m)
            if jmax >= 1:
                acc -= np.dot(ctf.d[1 : jmax + 1], phi[k - 1 :: -1][:jmax])
            phi[k] = acc
        out[key] = phi
    return ResponseFactorSeq(dt=ctf.dt, x=out["x"], y=out["y"], z=out["z"])
