"""Estimation of the invariance-scaling operator and certification of its laws.

The central object is the positive invertible operator D that turns the
integrated bracket into a product of traces:

    integral of <x|y> over the group  =  trace(x) * trace(D^{-1/2} y D^{-1/2})

for positive x, y under an ergodic trace-preserving integrable action.  D is
estimated by direct Haar summation of the modular-weighted orbit of a
normalized positive test element, and every theorem-level law (orthogonality,
semi-invariance, admissibility identities, L1 contraction, the convolution
inequality, the interpolation bound) is then certified as an independent
numerical check producing a CheckReport.

For general (non-hermitian) y the bracket is conjugate-linear in y, so the
equality-type laws carry an adjoint on y: the right-hand sides below use
trace(D^{-1/2} y* D^{-1/2}) and trace(x) * trace(y*).  For hermitian y this
is the same statement without the adjoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraElement,
    NotPositiveError,
    ParameterError,
    WeightKernel,
    eigh_blocks,
    op_norm,
    p_norm,
    trace,
)
from .actions import (
    Action,
    WaveletAction,
    automorphism_defect,
    fixed_point_dimension,
    homomorphism_defect,
    is_trace_preserving,
    isometry_defect,
)
from .bracket import (
    InverseClosureError,
    bracket,
    bracket_integral,
    bracket_symmetry_defect,
    function_p_norm,
    integrate_bracket,
)
from .groups import HaarModel
from .reports import CheckReport

# Exponent grids: boundary and interior cases of the validity regions.
YOUNG_GRID: tuple[tuple[float, float, float], ...] = (
    (1.0, 1.0, 1.0),
    (1.0, 4 / 3, 4 / 3),
    (4 / 3, 1.0, 4 / 3),
    (1.0, 2.0, 2.0),
    (2.0, 1.0, 2.0),
    (1.0, 4.0, 4.0),
    (4.0, 1.0, 4.0),
    (4 / 3, 4 / 3, 2.0),
    (4 / 3, 2.0, 4.0),
    (2.0, 4 / 3, 4.0),
)
HOLDER_GRID: tuple[tuple[float, float, float], ...] = (
    (2.0, 2.0, 1.0),
    (4.0, 4.0, 2.0),
    (4 / 3, 4.0, 1.0),
    (4.0, 4 / 3, 1.0),
    (2.0, 4.0, 4 / 3),
    (4.0, 2.0, 4 / 3),
)
INTERPOLATION_EXPONENTS: tuple[float, ...] = (1.0, 4 / 3, 2.0, 4.0, math.inf)
ALT_POWERS: tuple[int, ...] = (1, 2, 3, 4)


class EstimateError(Exception):
    """The scaling-operator estimate failed (non-positive or inconsistent)."""


class InconsistencyError(EstimateError):
    """Two independent test elements disagree beyond tolerance."""


@dataclass
class DufloEstimate:
    """Estimated scaling operator D with its inverse and diagnostics.

    ``window`` restricts matrix comparisons for truncated quadrature models;
    it is None for exact finite models.
    """

    d_inverse: AlgebraElement
    d: AlgebraElement
    scalar_flag: bool
    scalar_value: float | None
    off_scalar_residual: float
    cross_check_residual: float
    min_eigenvalue: float
    window: slice | None = None

    def power(self, t: float) -> AlgebraElement:
        """D^t through the spectrum of D^{-1} (cached by the estimator)."""
        eig = getattr(self, "_eig", None)
        if eig is None:
            eig = eigh_blocks(self.d_inverse)
            self._eig = eig
        out = []
        for w, v in eig:
            out.append((v * (w ** (-t))) @ v.conj().T)
        return AlgebraElement(self.d.shape, out, copy=False)

    def sandwich(self, t: float, y: AlgebraElement) -> AlgebraElement:
        """D^t y D^t."""
        dt = self.power(t)
        return dt @ y @ dt

    def weight_inverse(self) -> WeightKernel:
        return WeightKernel(self.d_inverse)


def _window_sup(x: AlgebraElement, action: Action, window: slice | None) -> float:
    if window is not None and isinstance(action, WaveletAction):
        return float(np.abs(x.blocks[0][window, window]).max())
    return x.max_abs_entry()


def estimate_duflo(
    action: Action,
    haar: HaarModel,
    x_test: AlgebraElement,
    x_test_alt: AlgebraElement | None = None,
    *,
    cross_tol: float | None = None,
    scalar_tol: float = 1e-8,
) -> DufloEstimate:
    """Estimate D from the modular-weighted orbit sum of a positive test element.

    D^{-1} = sum_i w_i Delta(g_i)^{-1} (g_i . x) with trace(x) normalized to 1;
    D is its spectral inverse.  A second test element cross-checks the
    estimate; residuals beyond ``cross_tol`` raise InconsistencyError.
    """
    d_inv = _orbit_density(action, haar, x_test)
    window = action.window if isinstance(action, WaveletAction) else None

    eig = eigh_blocks(d_inv)
    min_eig = min(float(w.min()) for w, _ in eig)
    max_eig = max(float(w.max()) for w, _ in eig)
    if min_eig <= 1e-12 * max_eig:
        raise EstimateError(
            f"orbit density is not positive definite (min eig {min_eig:.3e}); "
            "the action looks non-ergodic or non-integrable at this quadrature"
        )
    d_blocks = [(v / w) @ v.conj().T for w, v in eig]
    d = AlgebraElement(d_inv.shape, d_blocks, copy=False)

    tau_one = trace(d.shape.identity()).real
    d_scalar = trace(d).real / tau_one
    off = d - d.shape.scalar(d_scalar)
    if window is not None:
        off_res = float(np.abs(off.blocks[0][window, window]).max()) / abs(d_scalar)
    else:
        off_res = op_norm(off) / abs(d_scalar)
    scalar_flag = off_res <= scalar_tol

    cross = 0.0
    if x_test_alt is not None:
        d_inv_alt = _orbit_density(action, haar, x_test_alt)
        if isinstance(action, WaveletAction):
            cross = action.weak_pairing_defect(d_inv, d_inv_alt)
        else:
            diff = d_inv - d_inv_alt
            cross = _window_sup(diff, action, window) / _window_sup(d_inv, action, window)
        if cross_tol is not None and cross > cross_tol:
            raise InconsistencyError(
                f"independent test elements disagree by {cross:.3e} > {cross_tol:.1e}; "
                "quadrature too coarse or action not ergodic"
            )

    est = DufloEstimate(
        d_inverse=d_inv,
        d=d,
        scalar_flag=scalar_flag,
        scalar_value=d_scalar if scalar_flag else None,
        off_scalar_residual=off_res,
        cross_check_residual=cross,
        min_eigenvalue=min_eig,
        window=window,
    )
    est._eig = eig
    return est


def _orbit_density(action: Action, haar: HaarModel, x_test: AlgebraElement) -> AlgebraElement:
    tau = trace(x_test)
    if abs(tau.imag) > 1e-10 * (1.0 + abs(tau.real)) or tau.real <= 0:
        raise NotPositiveError("test element must be positive with positive trace")
    if x_test.hermitian_defect() > 1e-9 * (1.0 + x_test.max_abs_entry()):
        raise NotPositiveError("test element must be hermitian")
    x = (1.0 / tau.real) * x_test
    coeffs = haar.weights / action.modular_values()
    raw = action.orbit_sum(coeffs, x)
    return 0.5 * (raw + raw.adjoint())


# ---------------------------------------------------------------------------
# individual law checks


def check_orthogonality(
    action: Action,
    haar: HaarModel,
    est: DufloEstimate,
    x: AlgebraElement,
    y: AlgebraElement,
    *,
    positive: bool = True,
    tol_rel: float = 1e-9,
    scenario: str = "",
) -> CheckReport:
    """Integrated bracket against trace(x) * trace(D^{-1/2} y D^{-1/2}).

    For the general form (any x, y) the right-hand side carries the adjoint
    of y; see the module docstring.
    """
    lhs = bracket_integral(x, y, action, haar)
    y_eff = y if positive else y.adjoint()
    rhs = trace(x) * trace(est.sandwich(-0.5, y_eff))
    name = "orthogonality-positive" if positive else "orthogonality-general"
    claim = "integral of <x|y> = trace(x) trace(D^{-1/2} y D^{-1/2})"
    if not positive:
        claim += " (adjoint form for non-hermitian y)"
    # every bracket value is bounded by ||x||_2 ||y||_2, so the Haar mass sets
    # the scale against which a vanishing integral counts as exact
    scale = float(np.sum(haar.weights)) * p_norm(x, 2.0) * p_norm(y, 2.0)
    return CheckReport.equality(name, claim, lhs, rhs, tol_rel=tol_rel,
                                tol_abs=tol_rel * scale, scenario=scenario)


def check_semi_invariance(
    action: Action,
    haar: HaarModel,
    est: DufloEstimate,
    *,
    tol_rel: float = 1e-9,
    scenario: str = "",
) -> CheckReport:
    """Defect of g.D = Delta(g)^{-1} D over the sampled elements.

    Exact finite models compare matrices in sup norm.  The wavelet quadrature
    compares in the weak sense: the smeared estimate is paired against the
    smooth probe family, which is the discretization under which the truncated
    shift integral converges.
    """
    worst = 0.0
    notes = ""
    if isinstance(action, WaveletAction):
        probes = action.weak_probes()
        refs = [trace(est.d @ z) for z in probes]
        for g in action.sample_elements:
            moved = action.apply(g, est.d)
            scale = action.group.modular(g)
            for z, ref in zip(probes, refs):
                target = ref / scale
                worst = max(worst, abs(trace(moved @ z) - target) / max(abs(target), 1e-300))
        notes = f"defect={worst:.3e} (weak pairing against smooth probes)"
    else:
        scale = _window_sup(est.d, action, None)
        for g in action.sample_elements:
            moved = action.apply(g, est.d)
            delta = action.group.modular(g)
            diff = moved - (1.0 / delta) * est.d
            worst = max(worst, _window_sup(diff, action, None) / scale)
        notes = f"defect={worst:.3e}"
    return CheckReport.bound(
        "semi-invariance",
        "g.D = Delta(g)^{-1} D over sampled g",
        worst, 0.0, tol_rel=0.0, tol_abs=tol_rel, scenario=scenario,
        notes=notes,
    )


def check_admissibility(y: AlgebraElement, est: DufloEstimate,
                        tol: float = 1e-11) -> tuple[bool, float]:
    """Value trace(D^{-1/2} y D^{-1/2}) plus both density-weight identities.

    Checks trace(D^{-1} y) = trace(D^{-1/2} y D^{-1/2}) and the round trip
    trace(D^{1/2} (D^{-1/2} y D^{-1/2}) D^{1/2}) = trace(y).  Every element is
    admissible in a finite-dimensional model; the identities are certified
    rather than membership.
    """
    if y.hermitian_defect() > 1e-9 * (1.0 + y.max_abs_entry()):
        raise NotPositiveError("admissibility check expects a hermitian positive element")
    sand = est.sandwich(-0.5, y)
    value = trace(sand).real
    direct = trace(est.d_inverse @ y).real
    roundtrip = trace(est.sandwich(0.5, sand)).real
    ty = trace(y).real
    scale = max(abs(value), abs(direct), abs(ty), 1e-300)
    ok = abs(value - direct) <= tol * scale and abs(roundtrip - ty) <= tol * scale
    return ok, value


def admissibility_report(y: AlgebraElement, est: DufloEstimate, *, tol: float = 1e-11,
                         scenario: str = "") -> CheckReport:
    ok, value = check_admissibility(y, est, tol=tol)
    return CheckReport.flag(
        "admissibility-identities",
        "trace_{D^{-1}}(y) = trace(D^{-1/2} y D^{-1/2}) and its round trip",
        ok, scenario=scenario, notes=f"value={value:.6e}",
    )


def check_l1(
    x: AlgebraElement,
    y: AlgebraElement,
    est: DufloEstimate,
    action: Action,
    haar: HaarModel,
    *,
    tol_rel: float = 1e-9,
    scenario: str = "",
) -> tuple[CheckReport, CheckReport]:
    """L1 contraction and the trace-product identity for <x|D^{1/2} y D^{1/2}>.

    Inequality: integral of |<x|D^{1/2} y D^{1/2}>| <= trace|x| trace|y|.
    Equality:   integral of  <x|D^{1/2} y D^{1/2}>  = trace(x) trace(y*).
    """
    ytil = est.sandwich(0.5, y)
    bf = bracket(x, ytil, action, haar, provenance="l1-check")
    lhs_ineq = float(np.dot(bf.weights, np.abs(bf.values)))
    rhs_ineq = p_norm(x, 1.0) * p_norm(y, 1.0)
    ineq = CheckReport.bound(
        "l1-inequality",
        "integral of |<x|D^{1/2} y D^{1/2}>| <= trace|x| trace|y|",
        lhs_ineq, rhs_ineq, tol_rel=tol_rel, scenario=scenario,
    )
    lhs_eq = integrate_bracket(bf)
    rhs_eq = trace(x) * trace(y.adjoint())
    scale = float(np.sum(bf.weights)) * p_norm(x, 2.0) * p_norm(ytil, 2.0)
    eq = CheckReport.equality(
        "l1-equality",
        "integral of <x|D^{1/2} y D^{1/2}> = trace(x) trace(y*) (adjoint form)",
        lhs_eq, rhs_eq, tol_rel=tol_rel, tol_abs=tol_rel * scale, scenario=scenario,
    )
    return ineq, eq


def check_young(
    x: AlgebraElement,
    y: AlgebraElement,
    p: float,
    q: float,
    r: float,
    est: DufloEstimate,
    action: Action,
    haar: HaarModel,
    *,
    tol_rel: float = 1e-9,
    scenario: str = "",
) -> CheckReport:
    """Convolution inequality ||<x|D^{1/(2r)} y D^{1/(2r)}>||_r <= ||x||_p ||y||_q.

    Requires 1/p + 1/q = 1 + 1/r with 1 <= p, q <= r < inf and y commuting
    with D (enforced; automatic for scalar D).
    """
    if not (1.0 <= p <= r and 1.0 <= q <= r and r < math.inf):
        raise ParameterError(f"invalid exponents p={p}, q={q}, r={r}")
    if abs(1.0 / p + 1.0 / q - 1.0 - 1.0 / r) > 1e-12:
        raise ParameterError(f"exponents must satisfy 1/p + 1/q = 1 + 1/r, got {p}, {q}, {r}")
    commutator = est.d @ y - y @ est.d
    bound = 1e-9 * op_norm(y) * op_norm(est.d)
    if op_norm(commutator) > bound:
        raise ParameterError("y must commute with D for the convolution inequality")
    ytil = est.sandwich(1.0 / (2.0 * r), y)
    bf = bracket(x, ytil, action, haar, provenance="young-check")
    lhs = function_p_norm(bf, r)
    rhs = p_norm(x, p) * p_norm(y, q)
    return CheckReport.bound(
        "young-inequality",
        "||<x|D^{1/(2r)} y D^{1/(2r)}>||_r <= ||x||_p ||y||_q",
        lhs, rhs, tol_rel=tol_rel, scenario=scenario,
        notes=f"p={p:g} q={q:g} r={r:g}",
    )


def check_interpolation(
    x: AlgebraElement,
    y: AlgebraElement,
    p: float,
    est: DufloEstimate,
    action: Action,
    haar: HaarModel,
    *,
    tol_rel: float = 1e-9,
    scenario: str = "",
) -> CheckReport:
    """Interpolation bound ||<x|y>||_p <= ||x||_p ||y||_1^{1/q} ||D^{-1/2} y D^{-1/2}||_1^{1/p}.

    The p = inf endpoint is checked as the documented sup-norm variant
    ||<x|y>||_inf <= ||x||_inf ||y||_1.
    """
    if p < 1.0:
        raise ParameterError(f"exponent must be >= 1, got {p}")
    bf = bracket(x, y, action, haar, provenance="interpolation-check")
    lhs = function_p_norm(bf, p)
    if p == math.inf:
        rhs = p_norm(x, math.inf) * p_norm(y, 1.0)
        claim = "sup|<x|y>| <= ||x||_inf ||y||_1 (endpoint variant)"
    else:
        q = math.inf if p == 1.0 else p / (p - 1.0)
        y1 = p_norm(y, 1.0)
        ys = p_norm(est.sandwich(-0.5, y), 1.0)
        rhs = p_norm(x, p) * (y1 ** (0.0 if q == math.inf else 1.0 / q)) * (ys ** (1.0 / p))
        claim = "||<x|y>||_p <= ||x||_p ||y||_1^{1/q} ||D^{-1/2} y D^{-1/2}||_1^{1/p}"
    return CheckReport.bound(
        "interpolation-bound", claim, lhs, rhs, tol_rel=tol_rel, scenario=scenario,
        notes=f"p={p:g}",
    )


def check_holder(x: AlgebraElement, y: AlgebraElement, p: float, q: float, r: float,
                 *, tol_rel: float = 1e-9, scenario: str = "") -> CheckReport:
    """Trace-norm product inequality ||x y||_r <= ||x||_p ||y||_q for 1/p + 1/q = 1/r."""
    if abs(1.0 / p + 1.0 / q - 1.0 / r) > 1e-12:
        raise ParameterError("exponents must satisfy 1/p + 1/q = 1/r")
    lhs = p_norm(x @ y, r)
    rhs = p_norm(x, p) * p_norm(y, q)
    return CheckReport.bound(
        "holder-inequality", "||x y||_r <= ||x||_p ||y||_q",
        lhs, rhs, tol_rel=tol_rel, scenario=scenario, notes=f"p={p:g} q={q:g} r={r:g}",
    )


def check_alt(a: AlgebraElement, b: AlgebraElement, r: int,
              *, tol_rel: float = 1e-9, scenario: str = "") -> CheckReport:
    """Sandwich-power inequality trace((b a b)^r) <= trace(b^r a^r b^r), integer r >= 1."""
    if r < 1 or int(r) != r:
        raise ParameterError("power must be a positive integer")
    r = int(r)
    bab = b @ a @ b
    acc = bab
    for _ in range(r - 1):
        acc = acc @ bab
    lhs = trace(acc).real
    ar, br = _int_power(a, r), _int_power(b, r)
    rhs = trace(br @ ar @ br).real
    return CheckReport.bound(
        "alt-inequality", "trace((b a b)^r) <= trace(b^r a^r b^r)",
        lhs, rhs, tol_rel=tol_rel, scenario=scenario, notes=f"r={r}",
    )


def _int_power(x: AlgebraElement, r: int) -> AlgebraElement:
    acc = x
    for _ in range(r - 1):
        acc = acc @ x
    return acc


# ---------------------------------------------------------------------------
# scenario suite


def run_suite(scenario, *, trials: int | None = None) -> list[CheckReport]:
    """Run every check of a scenario in a fixed order with deterministic seeding.

    ``scenario`` provides the action, Haar model, tolerances, element
    factories and optional expectations; see scenarios.Scenario.
    """
    scn = scenario
    action, haar = scn.action, scn.haar
    sid = scn.scenario_id
    tol = scn.tol_rel
    trials = trials if trials is not None else scn.default_trials
    reports: list[CheckReport] = []

    rng = scn.rng("action-validity")
    hom = homomorphism_defect(action, rng, probes=[scn.random_element(rng) for _ in range(2)])
    aut = automorphism_defect(action, rng, trials=3)
    iso = isometry_defect(action, rng, trials=3)
    worst = max(hom, aut, iso)
    reports.append(CheckReport.bound(
        "action-validity",
        "homomorphism, *-automorphism and p-norm isometry defects",
        worst, 0.0, tol_rel=0.0, tol_abs=max(1e-9, scn.quad_slack),
        scenario=sid, notes=f"hom={hom:.2e} aut={aut:.2e} iso={iso:.2e}",
    ))

    reports.append(is_trace_preserving(action, tol=1e-10, scenario=sid))

    dim = fixed_point_dimension(action)
    reports.append(CheckReport.equality(
        "ergodicity", "fixed-point dimension of the sampled action is 1",
        float(dim), 1.0, tol_rel=0.0, tol_abs=0.0, scenario=sid,
        notes="sampled generating set" if scn.is_quadrature else "generators",
    ))

    rng = scn.rng("duflo")
    x1 = scn.random_positive(rng)
    x2 = scn.random_positive(rng)
    witness = bracket_integral(x1, x1, action, haar)
    ok = math.isfinite(witness.real) and witness.real > 0 and abs(witness.imag) <= 1e-9 * (1 + abs(witness.real))
    reports.append(CheckReport.flag(
        "integrability-witness",
        "the bracket integral of a positive test element is finite and positive",
        ok, scenario=sid, notes=f"value={witness.real:.6e}",
    ))

    try:
        est = estimate_duflo(action, haar, x1, x2, cross_tol=scn.cross_tol)
    except EstimateError as exc:
        reports.append(CheckReport.flag(
            "duflo-estimate", "orbit-density estimate of D succeeded", False,
            scenario=sid, notes=str(exc),
        ))
        return reports

    notes = (
        f"min_eig={est.min_eigenvalue:.3e} cross={est.cross_check_residual:.3e} "
        f"scalar={est.scalar_flag}"
    )
    reports.append(CheckReport.bound(
        "duflo-estimate", "cross-check residual of two independent test elements",
        est.cross_check_residual, 0.0, tol_rel=0.0, tol_abs=scn.cross_tol,
        scenario=sid, notes=notes,
    ))

    if not scn.is_quadrature:
        reports.append(CheckReport.bound(
            "duflo-scalar-form",
            "unimodular group: D is a constant multiple of the identity",
            est.off_scalar_residual, 0.0, tol_rel=0.0, tol_abs=1e-9, scenario=sid,
            notes=f"off-scalar residual={est.off_scalar_residual:.3e}",
        ))

    reports.extend(scn.expected_reports(est))

    rng = scn.rng("symmetry")
    xs = scn.random_positive(rng)
    ys = scn.random_positive(rng)
    try:
        defect = bracket_symmetry_defect(xs, ys, action, haar)
        scale = max(np.abs(action.bracket_values(xs, ys)).max(), 1e-300)
        reports.append(CheckReport.bound(
            "bracket-symmetry", "<x|y>(g^{-1}) = <y|x>(g)",
            defect / scale, 0.0, tol_rel=0.0, tol_abs=1e-10, scenario=sid,
        ))
    except InverseClosureError as exc:
        reports.append(CheckReport.skip(
            "bracket-symmetry", "<x|y>(g^{-1}) = <y|x>(g)", str(exc), scenario=sid,
        ))

    rng = scn.rng("orthogonality")
    n_pairs = max(4, trials // 4)
    worst_pos: CheckReport | None = None
    for _ in range(n_pairs):
        x = scn.random_positive(rng)
        y = scn.random_positive(rng)
        rep = check_orthogonality(action, haar, est, x, y, positive=True, tol_rel=tol, scenario=sid)
        if worst_pos is None or rep.rel_err > worst_pos.rel_err:
            worst_pos = rep
    worst_pos.notes = f"worst of {n_pairs} positive pairs"
    reports.append(worst_pos)

    worst_gen: CheckReport | None = None
    for _ in range(n_pairs):
        x = scn.random_element(rng)
        y = scn.random_element(rng)
        rep = check_orthogonality(action, haar, est, x, y, positive=False, tol_rel=tol, scenario=sid)
        if worst_gen is None or rep.rel_err > worst_gen.rel_err:
            worst_gen = rep
    worst_gen.notes = f"worst of {n_pairs} general pairs"
    reports.append(worst_gen)

    reports.append(check_semi_invariance(action, haar, est, tol_rel=tol, scenario=sid))

    rng = scn.rng("admissibility")
    reports.append(admissibility_report(scn.random_positive(rng), est, scenario=sid))

    rng = scn.rng("l1")
    worst_ineq = worst_eq = None
    for _ in range(max(4, trials // 4)):
        x = scn.random_element(rng)
        y = scn.random_element(rng)
        ineq, eq = check_l1(x, y, est, action, haar, tol_rel=scn.ineq_tol, scenario=sid)
        if worst_ineq is None or ineq.rel_err > worst_ineq.rel_err:
            worst_ineq = ineq
        if worst_eq is None or eq.rel_err > worst_eq.rel_err:
            worst_eq = eq
    reports.append(worst_ineq)
    reports.append(worst_eq)

    rng = scn.rng("young")
    if not scn.has_commuting_elements:
        reports.append(CheckReport.skip(
            "young-inequality",
            "||<x|D^{1/(2r)} y D^{1/(2r)}>||_r <= ||x||_p ||y||_q",
            "no trace-class element commutes with D in this scenario "
            "(the hypothesis set is empty for a diffuse scaling operator)",
            scenario=sid,
        ))
    else:
        worst_y = None
        grid = scn.young_grid
        for t in range(max(len(grid), trials)):
            p, q, r = grid[t % len(grid)]
            x = scn.random_element(rng)
            y = scn.commuting_element(rng, est)
            rep = check_young(x, y, p, q, r, est, action, haar, tol_rel=scn.ineq_tol, scenario=sid)
            if worst_y is None or rep.rel_err > worst_y.rel_err:
                worst_y = rep
        reports.append(worst_y)

    rng = scn.rng("interpolation")
    worst_i = None
    for t in range(max(len(INTERPOLATION_EXPONENTS), trials // 2)):
        p = INTERPOLATION_EXPONENTS[t % len(INTERPOLATION_EXPONENTS)]
        x = scn.random_element(rng)
        y = scn.random_element(rng)
        rep = check_interpolation(x, y, p, est, action, haar, tol_rel=scn.ineq_tol, scenario=sid)
        if worst_i is None or rep.rel_err > worst_i.rel_err:
            worst_i = rep
    reports.append(worst_i)

    rng = scn.rng("holder")
    worst_h = None
    for t in range(max(len(HOLDER_GRID), trials // 2)):
        p, q, r = HOLDER_GRID[t % len(HOLDER_GRID)]
        rep = check_holder(scn.random_element(rng), scn.random_element(rng), p, q, r,
                           tol_rel=1e-9, scenario=sid)
        if worst_h is None or rep.rel_err > worst_h.rel_err:
            worst_h = rep
    reports.append(worst_h)

    rng = scn.rng("alt")
    worst_a = None
    for t in range(max(len(ALT_POWERS), trials // 2)):
        r = ALT_POWERS[t % len(ALT_POWERS)]
        rep = check_alt(scn.random_positive(rng), scn.random_positive(rng), r,
                        tol_rel=1e-9, scenario=sid)
        if worst_a is None or rep.rel_err > worst_a.rel_err:
            worst_a = rep
    reports.append(worst_a)

    return reports
