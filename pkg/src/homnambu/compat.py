"""Compatibility of (alpha, beta, tau): the three conditions, kernel cases,
the solution space for beta, and the structural consequences.

The three conditions, for all x, y:

* tau-alpha:   tau(alpha x) tau(y) = tau(x) tau(alpha y)
* tau-beta:    tau(beta x) tau(y)  = tau(x) tau(beta y)
* exchange:    tau(alpha x) beta(y) = tau(beta x) alpha(y)

Kernel cases of a nondegenerate triple are decided through the covectors
tau.alpha and tau.beta:

* C1: neither vanishes    * C2: both vanish
* C3: only tau.beta = 0   * C4: only tau.alpha = 0
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebras import (
    BinaryAlgebra,
    CheckReport,
    _fails,
    _square,
    check_hom_jacobi,
    check_trace_function,
    denominators,
    matrix_scalars,
)
from .errors import (
    DegenerateTriple,
    DimensionMismatch,
    HypothesisFailure,
    IncompatibleTriple,
    NotDegenerate,
)
from .linalg import (
    Covector,
    Matrix,
    Subspace,
    mat_apply,
    nullspace,
    solve_linear,
    vec_is_zero,
    vec_scale,
    vec_sub,
)
from .scalars import ZERO
from .ternary import induce_ternary

CONDITIONS = ("tau-alpha", "tau-beta", "exchange")


@dataclass(frozen=True, eq=False)
class CompatTriple:
    alpha: Matrix
    beta: Matrix
    tau: Covector

    def __post_init__(self):
        n = self.tau.dim
        _square(self.alpha, n, "alpha")
        _square(self.beta, n, "beta")

    @property
    def dim(self) -> int:
        return self.tau.dim

    def scalars(self):
        yield from matrix_scalars(self.alpha)
        yield from matrix_scalars(self.beta)
        yield from self.tau.entries


@dataclass(frozen=True)
class TripleClassification:
    degenerate: bool
    case: str | None
    tau_alpha_zero: bool
    tau_beta_zero: bool
    kernel: Subspace | None = None
    reason: str = ""

    def label(self) -> str:
        if self.degenerate:
            return f"degenerate: {self.reason}"
        return f"nondegenerate, {self.case}"


def _scalar_condition(name: str, f: Matrix, tau: Covector, assumptions) -> CheckReport:
    n = tau.dim
    tf = tau.compose(f).entries
    t = tau.entries
    for i in range(n):
        for j in range(n):
            r = tf[i] * t[j] - t[i] * tf[j]
            if not r.is_zero():
                return _fails(name, (i, j), (r,), assumptions)
    return CheckReport(name, True, pivot_assumptions=assumptions)


def _exchange_condition(t: CompatTriple, assumptions) -> CheckReport:
    n = t.dim
    ta = t.tau.compose(t.alpha).entries
    tb = t.tau.compose(t.beta).entries
    acols = t.alpha.columns()
    bcols = t.beta.columns()
    for i in range(n):
        for j in range(n):
            r = vec_sub(vec_scale(ta[i], bcols[j]), vec_scale(tb[i], acols[j]))
            if not vec_is_zero(r):
                return _fails("exchange", (i, j), r, assumptions)
    return CheckReport("exchange", True, pivot_assumptions=assumptions)


def check_compatibility(t: CompatTriple) -> CheckReport:
    assumptions = denominators(t.scalars())
    parts = {
        "tau-alpha": _scalar_condition("tau-alpha", t.alpha, t.tau, assumptions),
        "tau-beta": _scalar_condition("tau-beta", t.beta, t.tau, assumptions),
        "exchange": _exchange_condition(t, assumptions),
    }
    return CheckReport.combine("compatibility", parts)


def _kernel_kind(tau: Covector):
    kernel = nullspace(tau)
    if kernel.dim == 0:
        return kernel, "ker tau = {0}"
    if kernel.dim == tau.dim:
        return kernel, "ker tau = V"
    return kernel, ""


def classify_triple(t: CompatTriple) -> TripleClassification:
    report = check_compatibility(t)
    if not report:
        raise IncompatibleTriple(f"condition fails at {report.witness}")
    kernel, reason = _kernel_kind(t.tau)
    ta_zero = t.tau.compose(t.alpha).is_zero()
    tb_zero = t.tau.compose(t.beta).is_zero()
    if reason:
        return TripleClassification(True, None, ta_zero, tb_zero, kernel, reason)
    case = {
        (False, False): "C1",
        (True, True): "C2",
        (False, True): "C3",
        (True, False): "C4",
    }[(ta_zero, tb_zero)]
    return TripleClassification(False, case, ta_zero, tb_zero, kernel)


def beta_constraint_rows(alpha: Matrix, tau: Covector) -> list:
    """Linear constraints on the row-major entries of beta.

    Entry ``r * n + c`` of the unknown vector is beta[r][c], the x_r
    coordinate of beta(x_c).
    """
    n = tau.dim
    t = tau.entries
    ta = tau.compose(alpha).entries
    rows = []
    # tau(beta x_i) tau(x_j) - tau(x_i) tau(beta x_j) = 0
    for i in range(n):
        for j in range(n):
            row = [ZERO] * (n * n)
            for r in range(n):
                row[r * n + i] = row[r * n + i] + t[r] * t[j]
                row[r * n + j] = row[r * n + j] - t[i] * t[r]
            rows.append((row, 0))
    # tau(alpha x_i) beta[k][j] - tau(beta x_i) alpha[k][j] = 0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                row = [ZERO] * (n * n)
                row[k * n + j] = row[k * n + j] + ta[i]
                akj = alpha[k, j]
                if akj:
                    for r in range(n):
                        row[r * n + i] = row[r * n + i] - akj * t[r]
                rows.append((row, 0))
    return rows


def solve_beta_space(A: BinaryAlgebra, alpha: Matrix, tau: Covector) -> Subspace:
    """All beta (vectorized row-major) satisfying the tau-beta and exchange conditions.

    ``notes['tau-alpha']`` records whether alpha itself satisfies the
    tau-alpha condition, i.e. whether the induced construction applies.
    """
    trace = check_trace_function(A, tau)
    if not trace:
        raise HypothesisFailure(f"tau is not a trace function: tau[{trace.witness}] != 0")
    _square(alpha, A.dim, "alpha")
    space = solve_linear(beta_constraint_rows(alpha, tau), A.dim * A.dim)
    space.notes["tau-alpha"] = _scalar_condition("tau-alpha", alpha, tau, ()).holds
    return space


def check_abelian_degenerate(A: BinaryAlgebra, tau: Covector) -> CheckReport:
    if tau.dim != A.dim:
        raise DimensionMismatch("tau has the wrong length")
    kernel, reason = _kernel_kind(tau)
    if not reason:
        raise NotDegenerate(f"ker tau has dimension {kernel.dim} of {A.dim}")
    ident = Matrix.identity(A.dim)
    T = induce_ternary(A, tau, ident, ident)
    assumptions = denominators(A.scalars(), tau.entries)
    parts = {}
    for key in sorted(T.d):
        parts["ternary"] = _fails("abelian-ternary", key, T.d[key], assumptions)
        break
    else:
        parts["ternary"] = CheckReport("abelian-ternary", True, pivot_assumptions=assumptions)
    if kernel.dim == 0:
        for key in sorted(A.c):
            parts["binary"] = _fails("abelian-binary", key, A.c[key], assumptions)
            break
        else:
            parts["binary"] = CheckReport("abelian-binary", True, pivot_assumptions=assumptions)
    return CheckReport.combine("abelian", parts, notes={"kernel": reason})


def check_kernel_stability(t: CompatTriple) -> CheckReport:
    report = check_compatibility(t)
    if not report:
        raise IncompatibleTriple(f"condition fails at {report.witness}")
    kernel, reason = _kernel_kind(t.tau)
    if reason:
        raise DegenerateTriple(reason)
    assumptions = denominators(t.scalars()) + tuple(kernel.pivot_assumptions)
    parts = {}
    for name, f in (("alpha", t.alpha), ("beta", t.beta)):
        parts[name] = CheckReport(f"kernel-{name}", True, pivot_assumptions=assumptions)
        for idx, b in enumerate(kernel.basis):
            val = t.tau(mat_apply(f, b))
            if not val.is_zero():
                parts[name] = _fails(f"kernel-{name}", (idx,), (val,), assumptions)
                break
    return CheckReport.combine("kernel-stability", parts)


def check_beta_hom_jacobi(A: BinaryAlgebra, t: CompatTriple) -> CheckReport:
    """Hom-Jacobi for beta, given Hom-Jacobi for alpha, the exchange condition,
    and some v with tau(alpha v) != 0.  A failure here means a broken hypothesis
    check or an implementation fault."""
    if not check_hom_jacobi(A, t.alpha):
        raise HypothesisFailure("(V, [.,.], alpha) is not Hom-Lie")
    assumptions = denominators(t.scalars())
    if not _exchange_condition(t, assumptions):
        raise HypothesisFailure("exchange condition tau(alpha x) beta(y) = tau(beta x) alpha(y) fails")
    ta = t.tau.compose(t.alpha)
    if ta.is_zero():
        raise HypothesisFailure("tau(alpha v) = 0 for every v")
    report = check_hom_jacobi(A, t.beta)
    report.check = "beta-hom-jacobi"
    nz = next(x for x in ta.entries if not x.is_zero())
    if not nz.is_constant():
        report.pivot_assumptions = report.pivot_assumptions + (nz,)
    return report
