"""Builtin, randomized and file-loaded scenario instances.

A scenario bundles a group with a Haar model, an ergodic trace-preserving
action on a block algebra, declared tolerances, deterministic random streams,
and optional expectations for the scaling operator.  Builtin identifiers:

    irrep:s3:<trivial|sign|std>       conjugation by an irreducible rep, probability Haar
    irrep:cyclic(8):chi<j>            one-dimensional character conjugation
    wh:<n>                            translation-modulation family on cyclic(n)^2, counting Haar
    translation:<group>               the group acting on itself by left translation
    cosets:cyclic(N):cyclic(M)        coset-space permutation action (M divides N)
    twisted-dual:<n>:<m>              dual of cyclic(n)^2 on the m-twisted group algebra
    induced:<G>:<H>:<inner>           action induced from a subgroup instance
    affine-wavelet:<preset>           quadrature scaling-and-shift scenario (coarse|default|fine)
    broken-measure                    negative-control fixture with a non-invariant measure
"""

from __future__ import annotations

import configparser
import math
import re
import zlib
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement, random_element, random_positive_element, trace
from .actions import (
    Action,
    WaveletAction,
    WaveletDesign,
    conjugation_action,
    coset_action,
    cyclic_character_rep,
    dual_action,
    finite_weyl_heisenberg,
    induced_action,
    left_translation_action,
    permutation_action,
    s3_irreps,
    wavelet_action,
)
from .duflo import YOUNG_GRID
from .groups import (
    FiniteGroup,
    HaarModel,
    QuadratureGroup,
    counting_haar,
    cyclic,
    probability_haar,
    product,
    symmetric,
)
from .reports import CheckReport

DEFAULT_SEED = 1729


class ConfigError(Exception):
    """Unresolvable scenario identifier or invalid scenario file."""


@dataclass(frozen=True)
class ScenarioSpec:
    """Declarative scenario description; ``build`` produces the runtime object."""

    scenario_id: str
    seed: int = DEFAULT_SEED
    tol_rel: float | None = None
    tol_abs: float | None = None
    exponent_grid: tuple[tuple[float, float, float], ...] | None = None

    def build(self) -> "Scenario":
        return build_scenario(self)


class Scenario:
    """Runtime scenario: group, Haar model, action, tolerances, rng streams."""

    def __init__(self, spec: ScenarioSpec, action: Action, haar: HaarModel, *,
                 tol_rel: float, tol_abs: float, ineq_tol: float, cross_tol: float,
                 quad_slack: float, default_trials: int, expect_tol: float,
                 expected_scalar: float | None = None, expected_kernel: str | None = None):
        self.spec = spec
        self.action = action
        self.haar = haar
        self.tol_rel = spec.tol_rel if spec.tol_rel is not None else tol_rel
        self.tol_abs = spec.tol_abs if spec.tol_abs is not None else tol_abs
        self.ineq_tol = max(ineq_tol, self.tol_rel if spec.tol_rel is not None else 0.0)
        self.cross_tol = cross_tol
        self.quad_slack = quad_slack
        self.default_trials = default_trials
        self.expect_tol = expect_tol
        self.expected_scalar = expected_scalar
        self.expected_kernel = expected_kernel
        self.young_grid = spec.exponent_grid if spec.exponent_grid is not None else YOUNG_GRID

    @property
    def scenario_id(self) -> str:
        return self.spec.scenario_id

    @property
    def seed(self) -> int:
        return self.spec.seed

    @property
    def shape(self):
        return self.action.shape

    @property
    def is_quadrature(self) -> bool:
        return isinstance(self.action.group, QuadratureGroup)

    def rng(self, tag: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(tag.encode())])

    def random_element(self, rng: np.random.Generator) -> AlgebraElement:
        if isinstance(self.action, WaveletAction):
            return self.action.windowed_element(rng)
        return random_element(self.shape, rng)

    def random_positive(self, rng: np.random.Generator) -> AlgebraElement:
        if isinstance(self.action, WaveletAction):
            return self.action.windowed_positive(rng)
        return random_positive_element(self.shape, rng)

    @property
    def has_commuting_elements(self) -> bool:
        """Whether nonzero trace-class elements commuting with D exist.

        True for the finite scenarios, where D is scalar.  False for the
        wavelet quadrature: there the continuum D has diffuse spectrum, a
        commuting element is a frequency multiplier, and its bracket is
        constant along the shift direction, hence never integrable over the
        group.  The convolution-inequality hypothesis set is empty.
        """
        return not self.is_quadrature

    def commuting_element(self, rng: np.random.Generator, est) -> AlgebraElement:
        """Element commuting with the estimated D (any element when D is scalar)."""
        if not self.has_commuting_elements:
            raise ConfigError(
                f"scenario {self.scenario_id!r} has no trace-class elements commuting with D"
            )
        return self.random_element(rng)

    def duflo_pair(self) -> tuple[AlgebraElement, AlgebraElement]:
        rng = self.rng("duflo")
        return self.random_positive(rng), self.random_positive(rng)

    def expected_reports(self, est) -> list[CheckReport]:
        out: list[CheckReport] = []
        sid = self.scenario_id
        if self.expected_scalar is not None:
            lhs = trace(est.d).real / trace(self.shape.identity()).real
            out.append(CheckReport.equality(
                "duflo-expected-scalar",
                "estimated D equals the analytically pinned scalar multiple of 1",
                lhs, self.expected_scalar, tol_rel=self.expect_tol, scenario=sid,
                notes=f"off-scalar residual={est.off_scalar_residual:.3e}",
            ))
        if self.expected_kernel == "inverse-frequency":
            act = self.action
            multiplier = AlgebraElement(self.shape, [np.diag(1.0 / act.xi)])
            pair_est = np.array([trace(est.d_inverse @ z).real for z in act.weak_probes()])
            pair_ref = np.array([trace(multiplier @ z).real for z in act.weak_probes()])
            c = float(pair_est @ pair_ref / (pair_ref @ pair_ref))
            residual = float(np.abs(pair_est - c * pair_ref).max() / np.abs(c * pair_ref).max())
            out.append(CheckReport.bound(
                "duflo-expected-kernel",
                "D^{-1} pairs with smooth probes as a multiple of the inverse-frequency multiplier",
                residual, 0.0, tol_rel=0.0, tol_abs=self.expect_tol, scenario=sid,
                notes=f"fit={c:.6e} residual={residual:.3e} (weak pairing)",
            ))
        return out


# ---------------------------------------------------------------------------
# group token grammar


_CYCLIC_RE = re.compile(r"^cyclic\((\d+)\)$")


def parse_group_token(tok: str) -> FiniteGroup:
    """Parse 'cyclic(N)', 's3', or products like 'cyclic(2)xcyclic(4)'."""
    tok = tok.strip()
    if "x" in tok and not tok.startswith("s"):
        parts = tok.split("x")
        groups = [parse_group_token(p) for p in parts]
        g = groups[0]
        for h in groups[1:]:
            g = product(g, h)
        return g
    m = _CYCLIC_RE.match(tok)
    if m:
        return cyclic(int(m.group(1)))
    if tok == "s3":
        return symmetric(3)
    raise ConfigError(
        f"unknown group {tok!r}; valid forms: cyclic(N), s3, cyclic(A)xcyclic(B)"
    )


def _cyclic_subgroup_indices(G: FiniteGroup, sub_sizes: tuple[int, ...]) -> list[int]:
    """Indices of the product-of-cyclics subgroup with the given factor sizes."""
    if G.structure is None or len(sub_sizes) != len(G.structure):
        raise ConfigError("subgroup factors must match the ambient cyclic structure")
    for m, n in zip(sub_sizes, G.structure):
        if m < 1 or n % m != 0:
            raise ConfigError(f"subgroup factor {m} does not divide {n}")
    strides = [n // m for m, n in zip(sub_sizes, G.structure)]
    coords = [[s * k for k in range(m)] for s, m in zip(strides, sub_sizes)]
    out: list[int] = []

    def rec(prefix, rest):
        if not rest:
            out.append(G.index_of_tuple(tuple(prefix)))
            return
        for c in rest[0]:
            rec(prefix + [c], rest[1:])

    rec([], coords)
    return out


# ---------------------------------------------------------------------------
# builtin catalog


_WAVELET_PRESETS = {
    "coarse": WaveletDesign(steps_per_octave=8, octaves=6, max_shift=12,
                            b_extent=4.0, n_b=128),
    "default": WaveletDesign(),
    "fine": WaveletDesign().scaled(2),
}

_FINITE_DEFAULTS = dict(tol_rel=1e-9, tol_abs=0.0, ineq_tol=1e-9, cross_tol=1e-8,
                        quad_slack=0.0, default_trials=12)
_WAVELET_DEFAULTS = dict(tol_rel=1e-2, tol_abs=0.0, ineq_tol=5e-2, cross_tol=1e-2,
                         quad_slack=1e-9, default_trials=4)


def build_scenario(spec: ScenarioSpec) -> Scenario:
    sid = spec.scenario_id
    tokens = sid.split(":")
    kind = tokens[0]
    try:
        if kind == "irrep":
            return _build_irrep(spec, tokens)
        if kind == "wh":
            return _build_wh(spec, tokens)
        if kind == "translation":
            return _build_translation(spec, tokens)
        if kind == "cosets":
            return _build_cosets(spec, tokens)
        if kind == "twisted-dual":
            return _build_twisted_dual(spec, tokens)
        if kind == "induced":
            return _build_induced(spec, tokens)
        if kind == "affine-wavelet":
            return _build_wavelet(spec, tokens)
        if kind == "broken-measure":
            return _build_broken(spec)
    except ConfigError:
        raise
    except Exception as exc:  # structural errors become config errors with context
        raise ConfigError(f"cannot build scenario {sid!r}: {exc}") from exc
    raise ConfigError(
        f"unknown scenario {sid!r}; known kinds: irrep, wh, translation, cosets, "
        "twisted-dual, induced, affine-wavelet, broken-measure"
    )


def _build_irrep(spec: ScenarioSpec, tokens) -> Scenario:
    if len(tokens) != 3:
        raise ConfigError("irrep scenario needs the form irrep:<group>:<rep>")
    _, gtok, rtok = tokens
    if gtok == "s3":
        reps = s3_irreps()
        if rtok not in reps:
            raise ConfigError(f"unknown s3 rep {rtok!r}; valid: {sorted(reps)}")
        rep = reps[rtok]
    else:
        G = parse_group_token(gtok)
        m = re.match(r"^chi(\d+)$", rtok)
        if G.structure is None or len(G.structure) != 1 or not m:
            raise ConfigError("character reps need a cyclic group and rep chi<j>")
        rep = cyclic_character_rep(G, int(m.group(1)))
    action = conjugation_action(rep)
    haar = probability_haar(rep.group)
    return Scenario(spec, action, haar, expected_scalar=float(rep.dim),
                    expect_tol=1e-9, **_FINITE_DEFAULTS)


def _build_wh(spec: ScenarioSpec, tokens) -> Scenario:
    if len(tokens) != 2:
        raise ConfigError("weyl-heisenberg scenario needs the form wh:<n>")
    n = int(tokens[1])
    rep = finite_weyl_heisenberg(n)
    action = conjugation_action(rep)
    haar = counting_haar(rep.group)
    return Scenario(spec, action, haar, expected_scalar=1.0 / n,
                    expect_tol=1e-9, **_FINITE_DEFAULTS)


def _build_translation(spec: ScenarioSpec, tokens) -> Scenario:
    if len(tokens) != 2:
        raise ConfigError("translation scenario needs the form translation:<group>")
    G = parse_group_token(tokens[1])
    action = left_translation_action(G)
    haar = counting_haar(G)
    return Scenario(spec, action, haar, expected_scalar=1.0,
                    expect_tol=1e-12, **_FINITE_DEFAULTS)


def _build_cosets(spec: ScenarioSpec, tokens) -> Scenario:
    if len(tokens) != 3:
        raise ConfigError("coset scenario needs the form cosets:cyclic(N):cyclic(M)")
    G = parse_group_token(tokens[1])
    H = parse_group_token(tokens[2])
    if G.structure is None or H.structure is None or len(G.structure) != 1:
        raise ConfigError("coset scenario needs cyclic groups")
    n, m = G.structure[0], H.structure[0]
    if n % m != 0:
        raise ConfigError(f"{m} does not divide {n}")
    h_indices = [(n // m) * k for k in range(m)]
    action = coset_action(G, h_indices)
    haar = counting_haar(G)
    return Scenario(spec, action, haar, expected_scalar=1.0 / m,
                    expect_tol=1e-10, **_FINITE_DEFAULTS)


def _build_twisted_dual(spec: ScenarioSpec, tokens) -> Scenario:
    if len(tokens) != 3:
        raise ConfigError("twisted-dual scenario needs the form twisted-dual:<n>:<m>")
    n, m = int(tokens[1]), int(tokens[2])
    if m != 0 and math.gcd(m, n) != 1:
        raise ConfigError(f"twist m={m} must be 0 or coprime to n={n}")
    G = product(cyclic(n), cyclic(n))
    action = dual_action(G, m)
    haar = counting_haar(action.group)
    return Scenario(spec, action, haar, expected_scalar=1.0 / (n * n),
                    expect_tol=1e-9, **_FINITE_DEFAULTS)


def _build_induced(spec: ScenarioSpec, tokens) -> Scenario:
    if len(tokens) != 4:
        raise ConfigError("induced scenario needs the form induced:<G>:<H>:<inner>")
    _, gtok, htok, itok = tokens
    G = parse_group_token(gtok)
    H_model = parse_group_token(htok)
    if G.structure is None or H_model.structure is None:
        raise ConfigError("induced scenario needs groups built from cyclic factors")
    h_indices = _cyclic_subgroup_indices(G, H_model.structure)
    sub_group, embed = G.subgroup(h_indices)
    if itok == "wh2":
        if H_model.structure != (2, 2):
            raise ConfigError("inner wh2 needs subgroup cyclic(2)xcyclic(2)")
        rep = finite_weyl_heisenberg(2)
        inner = conjugation_action(rep)
        iso = []
        for g in embed:
            coords = G.tuple_of_index(g)
            strides = [n // m for m, n in zip(H_model.structure, G.structure)]
            inner_coords = tuple(c // s for c, s in zip(coords, strides))
            iso.append(rep.group.index_of_tuple(inner_coords))
    elif itok == "translation":
        inner = left_translation_action(sub_group)
        iso = list(range(sub_group.order))
    else:
        raise ConfigError(f"unknown inner action {itok!r}; valid: wh2, translation")
    action = induced_action(G, h_indices, inner, iso)
    haar = counting_haar(G)
    tau_one = trace(action.shape.identity()).real
    return Scenario(spec, action, haar, expected_scalar=tau_one / G.order,
                    expect_tol=1e-9, **_FINITE_DEFAULTS)


def _build_wavelet(spec: ScenarioSpec, tokens) -> Scenario:
    if len(tokens) != 2:
        raise ConfigError("wavelet scenario needs the form affine-wavelet:<preset>")
    preset = tokens[1]
    if preset not in _WAVELET_PRESETS:
        raise ConfigError(f"unknown wavelet preset {preset!r}; valid: {sorted(_WAVELET_PRESETS)}")
    action = wavelet_action(_WAVELET_PRESETS[preset])
    haar = action.group.haar()
    return Scenario(spec, action, haar, expected_kernel="inverse-frequency",
                    expect_tol=1e-2, **_WAVELET_DEFAULTS)


def refined_wavelet(spec: ScenarioSpec, level: int) -> Scenario:
    """The wavelet scenario with every quadrature axis refined by 2**level."""
    tokens = spec.scenario_id.split(":")
    if tokens[0] != "affine-wavelet":
        raise ConfigError("refinement applies to affine-wavelet scenarios only")
    design = _WAVELET_PRESETS[tokens[1]].scaled(2 ** level)
    action = wavelet_action(design)
    haar = action.group.haar()
    return Scenario(spec, action, haar, expected_kernel="inverse-frequency",
                    expect_tol=1e-2, **_WAVELET_DEFAULTS)


def _build_broken(spec: ScenarioSpec) -> Scenario:
    G = cyclic(2)
    action = permutation_action(G, G.table, mu=np.array([1.0, 2.0]), validate=False)
    haar = counting_haar(G)
    return Scenario(spec, action, haar, expect_tol=1e-9, **_FINITE_DEFAULTS)


BUILTIN_IDS: tuple[str, ...] = (
    "irrep:s3:trivial",
    "irrep:s3:sign",
    "irrep:s3:std",
    *(f"irrep:cyclic(8):chi{j}" for j in range(8)),
    "wh:2",
    "wh:3",
    "wh:4",
    "wh:5",
    "wh:8",
    "translation:cyclic(6)",
    "cosets:cyclic(6):cyclic(3)",
    "twisted-dual:8:0",
    "twisted-dual:4:1",
    "induced:cyclic(2)xcyclic(4):cyclic(2)xcyclic(2):wh2",
    "affine-wavelet:default",
)


def builtin(scenario_id: str, seed: int | None = None) -> ScenarioSpec:
    """Spec for a builtin id (validated by building it once)."""
    spec = ScenarioSpec(scenario_id, seed=seed if seed is not None else DEFAULT_SEED)
    build_scenario(spec)
    return spec


def list_builtins() -> tuple[str, ...]:
    return BUILTIN_IDS


def random_scenario(seed: int, max_block_dim: int = 6, max_group_order: int = 16) -> ScenarioSpec:
    """Deterministically draw a builtin family with randomized admissible parameters."""
    rng = np.random.default_rng(seed)
    families = ("wh", "translation", "cosets", "irrep", "twisted-dual", "induced")
    fam = families[int(rng.integers(len(families)))]
    if fam == "wh":
        n = int(rng.integers(2, min(max_block_dim, int(math.isqrt(max_group_order))) + 1))
        sid = f"wh:{n}"
    elif fam == "translation":
        n = int(rng.integers(2, max_group_order + 1))
        sid = f"translation:cyclic({n})"
    elif fam == "cosets":
        n = int(rng.integers(4, max_group_order + 1))
        divisors = [d for d in range(2, n) if n % d == 0]
        if not divisors:
            sid = f"translation:cyclic({n})"
        else:
            m = divisors[int(rng.integers(len(divisors)))]
            sid = f"cosets:cyclic({n}):cyclic({m})"
    elif fam == "irrep":
        choices = ["irrep:s3:trivial", "irrep:s3:sign", "irrep:s3:std"] + [
            f"irrep:cyclic(8):chi{j}" for j in range(8)
        ]
        sid = choices[int(rng.integers(len(choices)))]
    elif fam == "twisted-dual":
        n = int(rng.integers(2, int(math.isqrt(max_group_order)) + 1))
        m = int(rng.integers(0, 2))
        if m != 0 and math.gcd(m, n) != 1:
            m = 0
        sid = f"twisted-dual:{n}:{m}"
    else:
        sid = (
            "induced:cyclic(2)xcyclic(4):cyclic(2)xcyclic(2):wh2"
            if rng.integers(2) == 0
            else "induced:cyclic(4):cyclic(2):translation"
        )
    return ScenarioSpec(sid, seed=seed)


# ---------------------------------------------------------------------------
# scenario files (INI sections; unknown keys rejected)


_SECTION_KEYS = {
    "scenario": {"id", "seed"},
    "group": {"kind", "spec"},
    "haar": {"normalization"},
    "algebra": {"block_dims", "trace_weights"},
    "action": {"kind"},
    "tolerances": {"rel", "abs"},
    "expect": {"scalar", "kernel"},
}


def save_scenario(spec: ScenarioSpec, path) -> None:
    """Write the scenario description as an INI file (see load_scenario)."""
    scn = build_scenario(spec)
    cp = configparser.ConfigParser()
    cp["scenario"] = {"id": spec.scenario_id, "seed": str(spec.seed)}
    group = scn.action.group
    if isinstance(group, QuadratureGroup):
        cp["group"] = {"kind": "quadrature", "spec": group.label}
    else:
        cp["group"] = {"kind": "finite", "spec": group.name}
    cp["haar"] = {"normalization": scn.haar.normalization}
    cp["algebra"] = {
        "block_dims": ",".join(str(n) for n in scn.shape.block_dims),
        "trace_weights": ",".join(f"{w:.17g}" for w in scn.shape.trace_weights),
    }
    cp["action"] = {"kind": scn.action.kind}
    cp["tolerances"] = {"rel": f"{scn.tol_rel:.17g}", "abs": f"{scn.tol_abs:.17g}"}
    expect = {}
    if scn.expected_scalar is not None:
        expect["scalar"] = f"{scn.expected_scalar:.17g}"
    if scn.expected_kernel is not None:
        expect["kernel"] = scn.expected_kernel
    cp["expect"] = expect
    with open(path, "w") as fh:
        cp.write(fh)


def load_scenario(path) -> ScenarioSpec:
    """Read a scenario INI file back into a spec.

    The [scenario] id names the family; the remaining sections are validated
    against it, unknown sections or keys are rejected, and missing tolerances
    fall back to the family defaults.
    """
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ConfigError(f"cannot read scenario file {path!r}")
    for section in cp.sections():
        if section not in _SECTION_KEYS:
            raise ConfigError(f"unknown section [{section}] in {path!r}")
        extra = set(cp[section]) - _SECTION_KEYS[section]
        if extra:
            raise ConfigError(f"unknown keys {sorted(extra)} in section [{section}]")
    if "scenario" not in cp or "id" not in cp["scenario"]:
        raise ConfigError("scenario file needs [scenario] with an id")
    sid = cp["scenario"]["id"]
    seed = int(cp["scenario"].get("seed", str(DEFAULT_SEED)))
    tol_rel = tol_abs = None
    if "tolerances" in cp:
        if "rel" in cp["tolerances"]:
            tol_rel = float(cp["tolerances"]["rel"])
        if "abs" in cp["tolerances"]:
            tol_abs = float(cp["tolerances"]["abs"])
    spec = ScenarioSpec(sid, seed=seed, tol_rel=tol_rel, tol_abs=tol_abs)
    scn = build_scenario(spec)  # validates the id
    if "algebra" in cp and "block_dims" in cp["algebra"]:
        declared = tuple(int(v) for v in cp["algebra"]["block_dims"].split(","))
        if declared != scn.shape.block_dims:
            raise ConfigError(
                f"[algebra] block_dims {declared} do not match scenario {sid!r} "
                f"which has {scn.shape.block_dims}"
            )
    if "haar" in cp and "normalization" in cp["haar"]:
        if cp["haar"]["normalization"] != scn.haar.normalization:
            raise ConfigError(f"[haar] normalization does not match scenario {sid!r}")
    return spec
