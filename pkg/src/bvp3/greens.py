"""Green's functions for u''' = phi with homogeneous two-point boundary conditions.

For each source point s in (0, 1) the kernel t -> G(t, s) solves G''' = 0
away from the diagonal, satisfies the three boundary functionals, and is C^1
across t = s with a unit jump in the second t-derivative.  The module carries
closed forms for the four standard condition sets, a constructor for arbitrary
full-rank coefficient sets, and the sign and norm metadata that the iteration
and the solvability checks consume.

Branch convention: the "lower" evaluators apply on s <= t, the "upper" ones on
t <= s.  Both branches are polynomials defined on the whole square, so either
can be evaluated anywhere; only the selection rule at the diagonal matters,
and there the lower branch wins (relevant for the second derivative, which
jumps by one across s = t).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

__all__ = [
    "BoundaryConditions",
    "CaseId",
    "GreenKernel",
    "SignPattern",
    "RankDeficientBC",
    "SingularBoundarySystem",
    "case_boundary_conditions",
    "kernel_catalog",
    "build_general_kernel",
    "kernel_signs",
    "kernel_norms",
    "numeric_kernel_norms",
]

SIGN_TOL = 1e-12
CONDITION_LIMIT = 1e12
NORM_CHECK_TOL = 1e-4


class RankDeficientBC(ValueError):
    """The three boundary rows are linearly dependent."""


class SingularBoundarySystem(ValueError):
    """The homogeneous problem admits nontrivial solutions, so no Green's
    function exists for these boundary coefficients."""


class CaseId(Enum):
    """The four named boundary condition sets."""

    CASE1 = 1  # u(0) = u'(0) = u'(1) = 0
    CASE2 = 2  # u(0) = u'(0) = u''(1) = 0
    CASE3 = 3  # u(0) = u'(1) = u''(1) = 0
    CASE4 = 4  # u(0) = u''(0) = u'(1) = 0


@dataclass(frozen=True)
class BoundaryConditions:
    """Coefficients of three homogeneous functionals a*u + b*u' + g*u''.

    Row j is evaluated at the endpoint ``endpoints[j]``, each 0 or 1.  The
    default frame (0, 0, 1) puts two rows at the left end and one at the
    right; other placements are allowed so every catalog case is expressible.
    """

    a1: float
    b1: float
    g1: float
    a2: float
    b2: float
    g2: float
    a3: float
    b3: float
    g3: float
    endpoints: tuple = (0, 0, 1)

    def rows(self):
        return (
            (self.a1, self.b1, self.g1, self.endpoints[0]),
            (self.a2, self.b2, self.g2, self.endpoints[1]),
            (self.a3, self.b3, self.g3, self.endpoints[2]),
        )

    def block_matrix(self):
        """3x6 matrix with each row's coefficients placed in the column block
        of its endpoint.  Full rank 3 is what independence means here."""
        m = np.zeros((3, 6))
        for i, (a, b, g, e) in enumerate(self.rows()):
            m[i, 3 * e:3 * e + 3] = (a, b, g)
        return m

    def validate(self):
        if len(self.endpoints) != 3 or any(e not in (0, 1) for e in self.endpoints):
            raise ValueError("endpoints must be a triple of 0s and 1s")
        if np.linalg.matrix_rank(self.block_matrix()) < 3:
            raise RankDeficientBC("boundary rows are linearly dependent")


_CASE_BCS = {
    CaseId.CASE1: BoundaryConditions(1, 0, 0, 0, 1, 0, 0, 1, 0, endpoints=(0, 0, 1)),
    CaseId.CASE2: BoundaryConditions(1, 0, 0, 0, 1, 0, 0, 0, 1, endpoints=(0, 0, 1)),
    CaseId.CASE3: BoundaryConditions(1, 0, 0, 0, 1, 0, 0, 0, 1, endpoints=(0, 1, 1)),
    CaseId.CASE4: BoundaryConditions(1, 0, 0, 0, 0, 1, 0, 1, 0, endpoints=(0, 0, 1)),
}


def case_boundary_conditions(case: CaseId) -> BoundaryConditions:
    """Boundary coefficient rows for a catalog case."""
    return _CASE_BCS[case]


def _branchfn(fn):
    """Wrap a two-argument closed form so it broadcasts t against s and
    always returns a float array (or a plain float for scalar input)."""

    def ev(t, s):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        t, s = np.broadcast_arrays(t, s)
        out = np.empty(t.shape)
        out[...] = fn(t, s)
        return out if out.ndim else float(out)

    return ev


@dataclass(frozen=True)
class GreenKernel:
    """Piecewise kernel with branch evaluators and solver metadata.

    sigma_g and sigma_g1 are -1, 0 or +1; zero means the row has no constant
    sign on the square.  m0, m1, m2 are the max-over-t integrals of |G|,
    |G_t|, |G_tt|; for catalog kernels they are the closed-form constants.
    """

    g_lower: object
    g_upper: object
    g1_lower: object
    g1_upper: object
    g2_lower: object
    g2_upper: object
    sigma_g: int
    sigma_g1: int
    m0: float
    m1: float
    m2: float
    provenance: str
    bc: BoundaryConditions

    def _select(self, lower, upper, t, s):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        out = np.where(s <= t, lower(t, s), upper(t, s))
        return out if out.ndim else float(out)

    def g(self, t, s):
        return self._select(self.g_lower, self.g_upper, t, s)

    def g1(self, t, s):
        return self._select(self.g1_lower, self.g1_upper, t, s)

    def g2(self, t, s):
        return self._select(self.g2_lower, self.g2_upper, t, s)

    def norms(self):
        return (self.m0, self.m1, self.m2)


_CATALOG = {
    CaseId.CASE1: dict(
        g_lower=lambda t, s: 0.5 * s * (t * t - 2.0 * t + s),
        g_upper=lambda t, s: 0.5 * t * t * (s - 1.0),
        g1_lower=lambda t, s: s * (t - 1.0),
        g1_upper=lambda t, s: t * (s - 1.0),
        g2_lower=lambda t, s: s,
        g2_upper=lambda t, s: s - 1.0,
        norms=(1.0 / 12.0, 1.0 / 8.0, 1.0 / 2.0),
        signs=(-1, -1),
    ),
    CaseId.CASE2: dict(
        g_lower=lambda t, s: 0.5 * s * s - s * t,
        g_upper=lambda t, s: -0.5 * t * t,
        g1_lower=lambda t, s: -s,
        g1_upper=lambda t, s: -t,
        g2_lower=lambda t, s: 0.0,
        g2_upper=lambda t, s: -1.0,
        norms=(1.0 / 3.0, 1.0 / 2.0, 1.0),
        signs=(-1, -1),
    ),
    CaseId.CASE3: dict(
        g_lower=lambda t, s: 0.5 * s * s,
        g_upper=lambda t, s: s * t - 0.5 * t * t,
        g1_lower=lambda t, s: 0.0,
        g1_upper=lambda t, s: s - t,
        g2_lower=lambda t, s: 0.0,
        g2_upper=lambda t, s: -1.0,
        norms=(1.0 / 6.0, 1.0 / 2.0, 1.0),
        signs=(1, 1),
    ),
    CaseId.CASE4: dict(
        g_lower=lambda t, s: 0.5 * t * t - t + 0.5 * s * s,
        g_upper=lambda t, s: t * (s - 1.0),
        g1_lower=lambda t, s: t - 1.0,
        g1_upper=lambda t, s: s - 1.0,
        g2_lower=lambda t, s: 1.0,
        g2_upper=lambda t, s: 0.0,
        norms=(1.0 / 3.0, 1.0 / 2.0, 1.0),
        signs=(-1, -1),
    ),
}


def kernel_catalog(case: CaseId) -> GreenKernel:
    """Closed-form kernel for one of the four catalog condition sets."""
    entry = _CATALOG[case]
    m0, m1, m2 = entry["norms"]
    sg, sg1 = entry["signs"]
    return GreenKernel(
        g_lower=_branchfn(entry["g_lower"]),
        g_upper=_branchfn(entry["g_upper"]),
        g1_lower=_branchfn(entry["g1_lower"]),
        g1_upper=_branchfn(entry["g1_upper"]),
        g2_lower=_branchfn(entry["g2_lower"]),
        g2_upper=_branchfn(entry["g2_upper"]),
        sigma_g=sg,
        sigma_g1=sg1,
        m0=m0,
        m1=m1,
        m2=m2,
        provenance="catalog",
        bc=case_boundary_conditions(case),
    )


def build_general_kernel(bc: BoundaryConditions, refinement: int = 10,
                         base_n: int = 100) -> GreenKernel:
    """Construct the kernel for arbitrary full-rank boundary coefficients.

    The upper branch is the quadratic c1(s) + c2(s) t + c3(s) t^2 / 2 and the
    lower branch adds the particular part (t - s)^2 / 2.  Applying the three
    boundary rows gives a 3x3 linear system whose matrix does not depend on
    s, so the coefficient functions come from a single solve.  Norm and sign
    metadata are filled in numerically on a refined grid.
    """
    bc.validate()
    a_mat = np.zeros((3, 3))
    r_mat = np.zeros((3, 3))
    for i, (a, b, g, e) in enumerate(bc.rows()):
        if e == 0:
            a_mat[i] = (a, b, g)
        else:
            # row applied at t=1 picks up the particular part, collected
            # into r_mat against the monomials ((1-s)^2/2, (1-s), 1)
            a_mat[i] = (a, a + b, 0.5 * a + b + g)
            r_mat[i] = (a, b, g)
    cond = np.linalg.cond(a_mat)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularBoundarySystem(
            "boundary system is numerically singular (condition %.3e)" % cond)
    b_mat = np.linalg.solve(a_mat, r_mat)

    def coeffs(s):
        w = 1.0 - s
        p = np.stack([0.5 * w * w, w, np.ones_like(s)])
        c = -np.tensordot(b_mat, p, axes=1)
        return c[0], c[1], c[2]

    def g_upper(t, s):
        c1, c2, c3 = coeffs(s)
        return c1 + t * (c2 + 0.5 * c3 * t)

    def g_lower(t, s):
        d = t - s
        return g_upper(t, s) + 0.5 * d * d

    def g1_upper(t, s):
        _, c2, c3 = coeffs(s)
        return c2 + c3 * t

    def g1_lower(t, s):
        return g1_upper(t, s) + (t - s)

    def g2_upper(t, s):
        _, _, c3 = coeffs(s)
        return c3 + 0.0 * t

    def g2_lower(t, s):
        return g2_upper(t, s) + 1.0

    branches = dict(
        g_lower=_branchfn(g_lower), g_upper=_branchfn(g_upper),
        g1_lower=_branchfn(g1_lower), g1_upper=_branchfn(g1_upper),
        g2_lower=_branchfn(g2_lower), g2_upper=_branchfn(g2_upper),
    )
    probe = np.linspace(0.0, 1.0, base_n + 1)
    sg, g_const = _classify_sign(branches["g_lower"], branches["g_upper"], probe)
    sg1, g1_const = _classify_sign(branches["g1_lower"], branches["g1_upper"], probe)
    kernel = GreenKernel(
        **branches,
        sigma_g=sg if g_const else 0,
        sigma_g1=sg1 if g1_const else 0,
        m0=0.0, m1=0.0, m2=0.0,
        provenance="general",
        bc=bc,
    )
    n0, n1, n2 = numeric_kernel_norms(kernel, refinement=refinement, base_n=base_n)
    return replace(kernel, m0=n0, m1=n1, m2=n2)


@dataclass(frozen=True)
class SignPattern:
    sigma_g: int
    sigma_g1: int
    g_constant_sign: bool
    g1_constant_sign: bool


def _classify_sign(lowfn, upfn, nodes):
    """Classify one kernel row from samples of both branches on their closed
    triangles.  A row that never leaves [-tol, tol] counts as +1."""
    t_grid, s_grid = np.meshgrid(nodes, nodes, indexing="ij")
    low = np.asarray(lowfn(t_grid, s_grid))[s_grid <= t_grid]
    up = np.asarray(upfn(t_grid, s_grid))[s_grid >= t_grid]
    vals = np.concatenate([np.ravel(low), np.ravel(up)])
    if np.all(vals >= -SIGN_TOL):
        return 1, True
    if np.all(vals <= SIGN_TOL):
        return -1, True
    return 0, False


def kernel_signs(kernel: GreenKernel, probe_n: int = 100) -> SignPattern:
    """Sampled sign pattern of G and G_t over the unit square."""
    nodes = np.linspace(0.0, 1.0, probe_n + 1)
    sg, g_const = _classify_sign(kernel.g_lower, kernel.g_upper, nodes)
    sg1, g1_const = _classify_sign(kernel.g1_lower, kernel.g1_upper, nodes)
    return SignPattern(sg if g_const else 0, sg1 if g1_const else 0,
                       g_const, g1_const)


def _row_norm(lowfn, upfn, n):
    # trapezoid in s, split at the diagonal so the jump in G_tt never
    # straddles a subinterval
    nodes = np.linspace(0.0, 1.0, n + 1)
    h = 1.0 / n
    t_grid, s_grid = np.meshgrid(nodes, nodes, indexing="ij")
    low = np.abs(np.asarray(lowfn(t_grid, s_grid)))
    up = np.abs(np.asarray(upfn(t_grid, s_grid)))
    idx = np.arange(n + 1)
    cs_low = np.cumsum(low, axis=1)
    left = h * (cs_low[idx, idx] - 0.5 * low[idx, 0] - 0.5 * low[idx, idx])
    left[0] = 0.0
    cs_up = np.cumsum(up[:, ::-1], axis=1)[:, ::-1]
    right = h * (cs_up[idx, idx] - 0.5 * up[idx, n] - 0.5 * up[idx, idx])
    right[n] = 0.0
    return float(np.max(left + right))


def numeric_kernel_norms(kernel: GreenKernel, refinement: int = 10,
                         base_n: int = 100):
    """Quadrature values of (M0, M1, M2) on a grid refined by ``refinement``."""
    if refinement < 1:
        raise ValueError("refinement must be at least 1")
    n = base_n * refinement
    return (
        _row_norm(kernel.g_lower, kernel.g_upper, n),
        _row_norm(kernel.g1_lower, kernel.g1_upper, n),
        _row_norm(kernel.g2_lower, kernel.g2_upper, n),
    )


def kernel_norms(kernel: GreenKernel, refinement: int = 10):
    """Kernel row norms (M0, M1, M2).

    Catalog kernels return their closed-form constants after a consistency
    check against quadrature; constructed kernels return quadrature values.
    """
    numeric = numeric_kernel_norms(kernel, refinement=refinement)
    if kernel.provenance == "catalog":
        analytic = kernel.norms()
        drift = max(abs(a - b) for a, b in zip(analytic, numeric))
        if drift > NORM_CHECK_TOL:
            raise RuntimeError(
                "catalog norms drifted from quadrature by %.3e" % drift)
        return analytic
    return numeric
