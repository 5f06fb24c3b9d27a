"""Group actions on tracial block algebras.

Concrete action kinds: unitary conjugation by a (projective) representation,
permutation of the atoms of a commutative algebra, translation of the dual of
a (twisted) group algebra, actions induced from a subgroup, and a quadrature
wavelet action of the scaling-and-shift group on a log-frequency grid.

Structural checkers live here as well: fixed-point dimension (ergodicity),
trace preservation, homomorphism / automorphism / isometry defects.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg

from .algebra import (
    AlgebraElement,
    AlgebraShape,
    from_vec,
    p_norm,
    sup_distance,
    trace,
)
from .groups import (
    FiniteGroup,
    QuadratureGroup,
    coset_lookup,
    cyclic,
    dual_group,
    product,
)
from .reports import CheckReport


class ActionError(Exception):
    """Invalid action data."""


class RepresentationError(ActionError):
    """Matrices fail to be unitary or to satisfy the twisted product law."""


class MeasureError(ActionError):
    """The point measure is not invariant under the point action."""


class GridError(ActionError):
    """A dilation step is incompatible with the frequency grid."""


class SymbolError(ActionError):
    """Internal failure: an element fell outside the twisted-translate span."""


# ---------------------------------------------------------------------------
# representations


class UnitaryRep:
    """Finite family of unitaries U_g with U_g U_h = sigma(g, h) U_{gh}."""

    def __init__(self, group: FiniteGroup, matrices, cocycle: Callable[[int, int], complex] | None = None,
                 name: str = ""):
        mats = np.array(matrices, dtype=complex)
        if mats.ndim != 3 or mats.shape[0] != group.order or mats.shape[1] != mats.shape[2]:
            raise RepresentationError("need one square matrix per group element")
        mats.setflags(write=False)
        self.group = group
        self.matrices = mats
        self.cocycle = cocycle if cocycle is not None else (lambda a, b: 1.0 + 0.0j)
        self.name = name or f"rep({group.name},dim={mats.shape[1]})"
        self.validate()

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def matrix(self, g: int) -> np.ndarray:
        return self.matrices[g]

    def validate(self, tol: float = 1e-11) -> None:
        G, U = self.group, self.matrices
        eye = np.eye(self.dim)
        for g in G.elements():
            if np.abs(U[g].conj().T @ U[g] - eye).max() > tol:
                raise RepresentationError(f"matrix {g} is not unitary")
        if abs(self.cocycle(G.identity, G.identity) - 1.0) > tol:
            raise RepresentationError("cocycle must be 1 at (e, e)")
        pairs = _sample_pairs(G.order, limit=24)
        for a, b in pairs:
            lhs = U[a] @ U[b]
            rhs = complex(self.cocycle(a, b)) * U[G.compose(a, b)]
            if np.abs(lhs - rhs).max() > tol:
                raise RepresentationError("matrices violate the twisted product law")
        for a, b in pairs:
            for c in (G.identity, pairs[0][0]):
                lhs = complex(self.cocycle(a, b)) * complex(self.cocycle(G.compose(a, b), c))
                rhs = complex(self.cocycle(a, G.compose(b, c))) * complex(self.cocycle(b, c))
                if abs(lhs - rhs) > tol:
                    raise RepresentationError("cocycle identity fails")


def _sample_pairs(n: int, limit: int) -> list[tuple[int, int]]:
    if n * n <= limit * limit:
        return [(a, b) for a in range(n) for b in range(n)]
    rng = np.random.default_rng(0)
    return [tuple(rng.integers(0, n, size=2)) for _ in range(limit * limit)]


def trivial_rep(G: FiniteGroup, dim: int = 1) -> UnitaryRep:
    mats = np.broadcast_to(np.eye(dim, dtype=complex), (G.order, dim, dim)).copy()
    return UnitaryRep(G, mats, name=f"trivial({G.name})")


def cyclic_character_rep(G: FiniteGroup, j: int) -> UnitaryRep:
    """One-dimensional representation chi_j of cyclic(n)."""
    if G.structure is None or len(G.structure) != 1:
        raise RepresentationError("cyclic_character_rep needs a cyclic group")
    n = G.structure[0]
    mats = np.array([[[np.exp(2j * np.pi * j * g / n)]] for g in range(n)])
    return UnitaryRep(G, mats, name=f"chi{j}({G.name})")


def s3_irreps() -> dict[str, UnitaryRep]:
    """The three irreducible representations of the symmetric group on 3 letters."""
    from .groups import symmetric

    G = symmetric(3)
    perms = [tuple(int(c) for c in lab) for lab in G.labels]
    triv = trivial_rep(G)

    def sign(p):
        s = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if p[i] > p[j]:
                    s = -s
        return s

    sgn = UnitaryRep(G, np.array([[[float(sign(p))]] for p in perms], dtype=complex), name="sign(s3)")
    # 2-d standard piece: permutation matrices restricted to the sum-zero plane
    q = np.array([[1.0 / math.sqrt(2), 1.0 / math.sqrt(6)],
                  [-1.0 / math.sqrt(2), 1.0 / math.sqrt(6)],
                  [0.0, -2.0 / math.sqrt(6)]])
    mats = []
    for p in perms:
        P = np.zeros((3, 3))
        for i, pi in enumerate(p):
            P[pi, i] = 1.0
        mats.append(q.T @ P @ q)
    std = UnitaryRep(G, np.array(mats, dtype=complex), name="std(s3)")
    return {"trivial": triv, "sign": sgn, "std": std}


def finite_weyl_heisenberg(n: int) -> UnitaryRep:
    """Translation-and-modulation family pi(k, l) = T_k M_l on C^n.

    Cocycle sigma((k,l),(k',l')) = exp(2*pi*i * l * k' / n); the family is
    irreducible for every n >= 2.
    """
    if n < 2:
        raise RepresentationError(f"need n >= 2, got {n}")
    G = product(cyclic(n), cyclic(n))
    omega = np.exp(2j * np.pi / n)
    mats = np.zeros((n * n, n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            T = np.zeros((n, n), dtype=complex)
            for s in range(n):
                T[(s + k) % n, s] = 1.0
            M = np.diag(omega ** (l * np.arange(n)))
            mats[G.index_of_tuple((k, l))] = T @ M

    def sigma(a: int, b: int) -> complex:
        (_, l), (kp, _) = G.tuple_of_index(a), G.tuple_of_index(b)
        return complex(omega ** (l * kp))

    return UnitaryRep(G, mats, cocycle=sigma, name=f"wh({n})")


def heisenberg_cocycle(G: FiniteGroup, m: int = 1) -> Callable[[int, int], complex]:
    """sigma((a,b),(c,d)) = exp(2*pi*i * m * b * c / n) on cyclic(n) x cyclic(n)."""
    if G.structure is None or len(G.structure) != 2 or G.structure[0] != G.structure[1]:
        raise RepresentationError("heisenberg_cocycle needs cyclic(n) x cyclic(n)")
    n = G.structure[0]

    def sigma(x: int, y: int) -> complex:
        (_, b), (c, _) = G.tuple_of_index(x), G.tuple_of_index(y)
        return complex(np.exp(2j * np.pi * m * b * c / n))

    return sigma


def twisted_regular_rep(G: FiniteGroup, sigma: Callable[[int, int], complex]) -> UnitaryRep:
    """Twisted left translations on l2(G): one unit entry per column with a phase."""
    N = G.order
    mats = np.zeros((N, N, N), dtype=complex)
    for g in range(N):
        for h in range(N):
            mats[g, G.compose(g, h), h] = complex(sigma(g, h))
    return UnitaryRep(G, mats, cocycle=sigma, name=f"lambda({G.name})")


def commutant_dimension(matrices: np.ndarray, tol: float = 1e-8) -> int:
    """Dimension of {X : X A = A X for all A}, by stacked-commutator nullspace."""
    mats = np.asarray(matrices, dtype=complex)
    n = mats.shape[1]
    eye = np.eye(n)
    rows = []
    for A in mats:
        rows.append(np.kron(A, eye) - np.kron(eye, A.T))  # row-major vec(AX - XA)
    stacked = np.vstack(rows)
    s = np.linalg.svd(stacked, compute_uv=False)
    return int(np.sum(s <= tol))


# ---------------------------------------------------------------------------
# actions


class Action:
    """Map (group element, algebra element) -> algebra element.

    Subclasses implement ``apply``; the generic bracket/orbit machinery below
    is overridden where a structured fast path exists.  All reductions run in
    fixed node order, so results are deterministic.
    """

    def __init__(self, group, shape: AlgebraShape, kind: str, sample_elements):
        self.group = group
        self.shape = shape
        self.kind = kind
        self.sample_elements = tuple(sample_elements)

    def apply(self, g, x: AlgebraElement) -> AlgebraElement:
        raise NotImplementedError

    def apply_adjoint(self, g, x: AlgebraElement) -> AlgebraElement:
        """Adjoint of apply(g, .) on Hilbert-Schmidt space; here apply(g^{-1}, .)."""
        return self.apply(self.group_inverse(g), x)

    # -- group plumbing ------------------------------------------------------

    def node_elements(self) -> list:
        if isinstance(self.group, QuadratureGroup):
            return [self.group.nodes[i] for i in range(self.group.node_count)]
        return list(self.group.elements())

    def node_count(self) -> int:
        if isinstance(self.group, QuadratureGroup):
            return self.group.node_count
        return self.group.order

    def group_inverse(self, g):
        return self.group.inverse(g)

    def modular_values(self) -> np.ndarray:
        if isinstance(self.group, QuadratureGroup):
            return np.array([self.group.modular(p) for p in self.node_elements()])
        return np.ones(self.group.order)

    def identity_element(self):
        return self.group.identity

    # -- bulk operations -----------------------------------------------------

    def bracket_values(self, x: AlgebraElement, y: AlgebraElement) -> np.ndarray:
        """trace((g.y)* x) at every node, in node order."""
        out = np.empty(self.node_count(), dtype=complex)
        for i, g in enumerate(self.node_elements()):
            out[i] = trace(self.apply(g, y).adjoint() @ x)
        return out

    def bracket_integral(self, x: AlgebraElement, y: AlgebraElement, weights: np.ndarray) -> complex:
        return complex(np.dot(weights, self.bracket_values(x, y)))

    def orbit_sum(self, coeffs: np.ndarray, x: AlgebraElement) -> AlgebraElement:
        """Sum of coeffs[i] * (g_i . x) over all nodes."""
        coeffs = np.asarray(coeffs, dtype=complex)
        acc = self.shape.zero()
        for i, g in enumerate(self.node_elements()):
            acc = acc + complex(coeffs[i]) * self.apply(g, x)
        return acc

    def trace_preservation_defect(self) -> float:
        """max over sampled elements and the matrix-unit basis of |tr(g.x) - tr(x)|."""
        worst = 0.0
        for g in self.sample_elements:
            for e in self.shape.basis():
                d = abs(trace(self.apply(g, e)) - trace(e))
                worst = max(worst, d)
        return worst


class ConjugationAction(Action):
    """g.x = U_g x U_g*; projective phases cancel, so this is a group action."""

    def __init__(self, rep: UnitaryRep, trace_weights: tuple[float, ...] = (1.0,)):
        shape = AlgebraShape((rep.dim,), trace_weights)
        gens = rep.group.generators or tuple(rep.group.elements())
        super().__init__(rep.group, shape, "conjugation", gens)
        self.rep = rep

    def apply(self, g, x: AlgebraElement) -> AlgebraElement:
        U = self.rep.matrix(int(g))
        return AlgebraElement(self.shape, [U @ x.blocks[0] @ U.conj().T], copy=False)


def conjugation_action(rep: UnitaryRep, trace_weights: tuple[float, ...] = (1.0,)) -> ConjugationAction:
    return ConjugationAction(rep, trace_weights)


class PermutationAction(Action):
    """(g.x)(t) = x(g^{-1} t) on the diagonal algebra of a finite point set."""

    def __init__(self, group: FiniteGroup, point_table, mu, validate: bool = True):
        point_table = np.asarray(point_table, dtype=int)
        n, t = point_table.shape
        if n != group.order:
            raise ActionError("need one point permutation per group element")
        mu = np.asarray(mu, dtype=float)
        if mu.shape != (t,) or not np.all(mu > 0):
            raise MeasureError("point measure must be positive on every atom")
        ident = point_table[group.identity]
        if not (ident == np.arange(t)).all():
            raise ActionError("identity must act trivially on points")
        for g in group.elements():
            if not (np.sort(point_table[g]) == np.arange(t)).all():
                raise ActionError("each group element must permute the points")
        pairs = _sample_pairs(group.order, limit=16)
        for a, b in pairs:
            if not (point_table[group.compose(a, b)] == point_table[a][point_table[b]]).all():
                raise ActionError("point maps do not compose with the group law")
        if validate:
            for g in group.elements():
                if np.abs(mu[point_table[g]] - mu).max() > 0:
                    raise MeasureError("point measure is not invariant under the action")
        shape = AlgebraShape((1,) * t, tuple(mu))
        gens = group.generators or tuple(group.elements())
        super().__init__(group, shape, "permutation", gens)
        self.point_table = point_table
        self.mu = mu

    def apply(self, g, x: AlgebraElement) -> AlgebraElement:
        src = self.point_table[self.group.inverse(int(g))]
        blocks = [x.blocks[src[t]] for t in range(len(src))]
        return AlgebraElement(self.shape, blocks)


def permutation_action(group: FiniteGroup, point_table, mu, validate: bool = True) -> PermutationAction:
    return PermutationAction(group, point_table, mu, validate=validate)


def left_translation_action(G: FiniteGroup, mu=None) -> PermutationAction:
    """G acting on itself by left translation; counting measure by default."""
    if mu is None:
        mu = np.ones(G.order)
    return PermutationAction(G, G.table, mu)


def coset_action(G: FiniteGroup, h_indices, mu=None, validate: bool = True) -> PermutationAction:
    """G acting on the coset space G/H with a measure on the coset atoms."""
    reps, coset_of = coset_lookup(G, h_indices)
    t = len(reps)
    table = np.empty((G.order, t), dtype=int)
    for g in G.elements():
        for c, r in enumerate(reps):
            table[g, c] = coset_of[G.compose(g, r)]
    if mu is None:
        mu = np.ones(t)
    return PermutationAction(G, table, mu, validate=validate)


class DualTranslationAction(Action):
    """Dual of an abelian group translating the diagonalized group algebra.

    The algebra of the untwisted group von Neumann algebra of G is stored in
    its character coordinates: one 1-d block per character, trace weight 1/N,
    so that the trace of a twisted translate family element recovers its
    symbol at the identity.
    """

    def __init__(self, G: FiniteGroup):
        chars = dual_group(G)
        dual = chars.as_group()
        n = G.order
        shape = AlgebraShape((1,) * n, (1.0 / n,) * n)
        gens = dual.generators or tuple(dual.elements())
        super().__init__(dual, shape, "dual-translation", gens)
        self.base_group = G
        self.characters = chars

    def apply(self, g, x: AlgebraElement) -> AlgebraElement:
        omega = int(g)
        table = self.group.table
        blocks = [x.blocks[table[chi, omega]] for chi in range(self.group.order)]
        return AlgebraElement(self.shape, blocks)

    def lambda_matrix(self, g: int) -> AlgebraElement:
        """The translate operator at g in character coordinates: diag of chi(g)."""
        col = self.characters.table[:, g]
        return AlgebraElement(self.shape, [np.array([[v]]) for v in col])

    def from_symbol(self, f: np.ndarray) -> AlgebraElement:
        """Element with symbol f: sum of f(g) * lambda(g)."""
        # row chi of the character table is chi(.), so the diagonal entry at
        # chi is sum_g f(g) chi(g)
        vals = self.characters.table @ np.asarray(f, dtype=complex)
        return AlgebraElement(self.shape, [np.array([[v]]) for v in vals])

    def symbol(self, x: AlgebraElement) -> np.ndarray:
        """Recover f(g) = trace(lambda(g)* x); exact on this algebra."""
        diag = np.array([b[0, 0] for b in x.blocks])
        return self.characters.table.conj().T @ diag / self.base_group.order


class TwistedDualAction(Action):
    """Dual of cyclic(n)^2 acting on a nondegenerately twisted group algebra.

    For gcd(m, n) = 1 the twisted algebra is a single full n x n block with
    trace weight 1/n.  The action multiplies the symbol pointwise by the
    character: apply(omega, x) = sum_g omega(g) f(g) Lambda(g) with
    f(g) = trace(Lambda(g)* x) / n.
    """

    def __init__(self, n: int, m: int):
        if math.gcd(m, n) != 1:
            raise ActionError(f"twist parameter m={m} must be coprime to n={n}")
        wh = finite_weyl_heisenberg(n)
        G = wh.group
        chars = dual_group(G)
        dual = chars.as_group()
        shape = AlgebraShape((n,), (1.0 / n,))
        gens = dual.generators or tuple(dual.elements())
        super().__init__(dual, shape, "twisted-dual", gens)
        self.base_group = G
        self.characters = chars
        self.n = n
        self.m = m
        lam = np.empty((G.order, n, n), dtype=complex)
        for g in G.elements():
            a, b = G.tuple_of_index(g)
            lam[g] = wh.matrix(G.index_of_tuple((a, (m * b) % n)))
        self.lambdas = lam

    def lambda_matrix(self, g: int) -> AlgebraElement:
        return AlgebraElement(self.shape, [self.lambdas[g]])

    def from_symbol(self, f: np.ndarray) -> AlgebraElement:
        mat = np.einsum("g,gij->ij", np.asarray(f, dtype=complex), self.lambdas)
        return AlgebraElement(self.shape, [mat])

    def symbol(self, x: AlgebraElement) -> np.ndarray:
        return np.einsum("gij,ij->g", self.lambdas.conj(), x.blocks[0]) / self.n

    def apply(self, g, x: AlgebraElement) -> AlgebraElement:
        f = self.symbol(x)
        recon = np.einsum("g,gij->ij", f, self.lambdas)
        scale = max(float(np.abs(x.blocks[0]).max()), 1e-300)
        if np.abs(recon - x.blocks[0]).max() > 1e-10 * scale:
            raise SymbolError("element outside the twisted-translate span")
        omega_vals = self.characters.table[int(g)]
        mat = np.einsum("g,gij->ij", omega_vals * f, self.lambdas)
        return AlgebraElement(self.shape, [mat])


def dual_action(G: FiniteGroup, m: int = 0):
    """Dual action on the (possibly twisted) group algebra of an abelian group.

    m = 0 works for any group built from cyclic factors; a nonzero twist needs
    G = cyclic(n) x cyclic(n) with gcd(m, n) = 1.
    """
    if m == 0:
        return DualTranslationAction(G)
    if G.structure is None or len(G.structure) != 2 or G.structure[0] != G.structure[1]:
        raise ActionError("twisted dual action needs cyclic(n) x cyclic(n)")
    return TwistedDualAction(G.structure[0], m)


class InducedAction(Action):
    """Action of G built from an action of a subgroup H on a smaller algebra.

    Elements are stored as one copy of the inner algebra per left coset of H,
    indexed by fixed representatives with the identity first; the total trace
    sums the inner trace over the copies.
    """

    def __init__(self, G: FiniteGroup, h_indices, inner: Action, iso):
        reps, coset_of = coset_lookup(G, h_indices)
        h_tuple = tuple(dict.fromkeys(int(i) for i in h_indices))
        iso = np.asarray(iso, dtype=int)
        if iso.shape != (len(h_tuple),):
            raise ActionError("iso must map each subgroup element to an inner group element")
        if not isinstance(inner.group, FiniteGroup) or inner.group.order != len(h_tuple):
            raise ActionError("inner action must live on a group of the subgroup's order")
        pos = {g: i for i, g in enumerate(h_tuple)}
        for i, a in enumerate(h_tuple):
            for j, b in enumerate(h_tuple):
                if inner.group.compose(int(iso[i]), int(iso[j])) != int(iso[pos[G.compose(a, b)]]):
                    raise ActionError("iso is not a group isomorphism onto the inner group")
        j_count = len(reps)
        dims = inner.shape.block_dims * j_count
        weights = inner.shape.trace_weights * j_count
        shape = AlgebraShape(dims, weights)
        gens = G.generators or tuple(G.elements())
        super().__init__(G, shape, "induced", gens)
        self.inner = inner
        self.reps = reps
        self.coset_of = coset_of
        # target coset and inner translate (already inverted) per (g, coset)
        self._target = np.empty((G.order, j_count), dtype=int)
        self._inner_elt = np.empty((G.order, j_count), dtype=int)
        for g in G.elements():
            ginv = G.inverse(g)
            for j, r in enumerate(reps):
                w = G.compose(ginv, r)
                a = coset_of[w]
                h = G.compose(G.inverse(reps[a]), w)
                self._target[g, j] = a
                self._inner_elt[g, j] = inner.group.inverse(int(iso[pos[h]]))
        self._inner_block_count = len(inner.shape.block_dims)

    @property
    def coset_count(self) -> int:
        return len(self.reps)

    def component(self, x: AlgebraElement, j: int) -> AlgebraElement:
        m = self._inner_block_count
        return AlgebraElement(self.inner.shape, x.blocks[j * m:(j + 1) * m])

    def assemble(self, components) -> AlgebraElement:
        blocks = []
        for c in components:
            blocks.extend(c.blocks)
        return AlgebraElement(self.shape, blocks)

    def apply(self, g, x: AlgebraElement) -> AlgebraElement:
        g = int(g)
        parts = []
        for j in range(self.coset_count):
            src = self.component(x, int(self._target[g, j]))
            parts.append(self.inner.apply(int(self._inner_elt[g, j]), src))
        return self.assemble(parts)


def induced_action(G: FiniteGroup, h_indices, inner: Action, iso) -> InducedAction:
    return InducedAction(G, h_indices, inner, iso)


# ---------------------------------------------------------------------------
# wavelet action on a log-frequency grid


@dataclass(frozen=True)
class WaveletDesign:
    """Grid parameters for the scaling-and-shift quadrature scenario.

    Frequencies live on a log-uniform grid with ``steps_per_octave`` points
    per octave spanning ``octaves`` octaves around 1.  Dilations move the grid
    by up to ``max_shift`` steps; shifts in frequency act by modulation phases
    sampled at ``n_b`` midpoints of [-b_extent, b_extent].  The extent of the
    shift window is matched to the grid so that the truncated tails of the
    smooth test elements dominate the quadrature error; refining multiplies
    the grid density and the shift window together.
    """

    steps_per_octave: int = 16
    octaves: int = 6
    max_shift: int = 24
    b_extent: float = 8.0
    n_b: int = 256
    support_octaves: float = 0.75

    def scaled(self, s: int) -> "WaveletDesign":
        """Refine every quadrature axis by the integer factor s."""
        if s < 1:
            raise GridError("refinement factor must be >= 1")
        return WaveletDesign(
            steps_per_octave=self.steps_per_octave * s,
            octaves=self.octaves,
            max_shift=self.max_shift * s,
            b_extent=self.b_extent * s,
            n_b=self.n_b * s,
            support_octaves=self.support_octaves,
        )


class WaveletAction(Action):
    """Scaling-and-shift group acting by conjugation on B(l2(log-frequency grid)).

    A node (a, b) with a = ratio^j acts by a cyclic grid shift of j steps
    composed with modulation phases exp(-2*pi*i*b*xi_k).  Each node's operator
    is exactly unitary; only the composition law across nodes is approximate
    (wrap-around rows), so sampled checks use centrally supported elements.

    The truncated shift integral smears the continuum multiplier over a band
    of reciprocal width, so operator comparisons for this action are made in
    the weak sense: paired against the fixed family of smooth, centrally
    supported probe states from ``weak_probes``.
    """

    def __init__(self, design: WaveletDesign):
        from .groups import affine_group

        den = design.steps_per_octave
        K = design.octaves * den + 1
        h = design.max_shift
        if h < 1 or 2 * h >= K:
            raise GridError("max_shift must satisfy 1 <= max_shift < K/2")
        if design.support_octaves * den > h:
            raise GridError("element support cannot exceed the dilation range")
        self.design = design
        self.log_ratio = math.log(2.0) / den
        self.xi = np.exp2((np.arange(K) - (K - 1) / 2) / den)
        group = affine_group(
            a_min=2.0 ** (-h / den), a_max=2.0 ** (h / den), n_a=2 * h + 1,
            b_min=-design.b_extent, b_max=design.b_extent, n_b=design.n_b,
        )
        shape = AlgebraShape((K,), (1.0,))
        self.n_a = 2 * h + 1
        self.n_b = design.n_b
        self.shifts = np.arange(-h, h + 1)
        self.b_nodes = group.nodes[:design.n_b, 1].copy()
        self.db = float(2.0 * design.b_extent / design.n_b)
        # phase table p[j, k] = exp(-2*pi*i * b_j * xi_k) and its Haar-summed gram
        self.phases = np.exp(-2j * np.pi * np.outer(self.b_nodes, self.xi))
        self.b_kernel = self.db * (self.phases.T @ self.phases.conj())
        c = (K - 1) // 2
        self.center = c
        support_steps = int(round(design.support_octaves * den))
        self.window = slice(c - (h - support_steps), c + (h - support_steps) + 1)
        # sample nodes near the identity: one-step dilations and one-cell shifts
        i_c, j_c = h, design.n_b // 2
        sample_idx = (
            (i_c + 1) * design.n_b + j_c,
            (i_c - 1) * design.n_b + j_c + 1,
            i_c * design.n_b + j_c + 1,
            (i_c + 2) * design.n_b + j_c,
            i_c * design.n_b + j_c,
        )
        group.sampling_indices = tuple(sample_idx)
        sample = [group.nodes[i] for i in sample_idx]
        super().__init__(group, shape, "wavelet", sample)
        self._probes: list[AlgebraElement] | None = None

    # -- grid plumbing ---------------------------------------------------

    @property
    def grid_size(self) -> int:
        return self.xi.shape[0]

    def shift_of(self, a: float) -> int:
        j = round(math.log(a) / self.log_ratio)
        if abs(a - math.exp(j * self.log_ratio)) > 1e-9 * a:
            raise GridError(f"dilation {a:g} is not a grid step")
        return int(j)

    def matrix(self, g) -> np.ndarray:
        """Unitary of the node: modulation phases times a cyclic shift."""
        a, b = float(g[0]), float(g[1])
        j = self.shift_of(a)
        K = self.grid_size
        U = np.zeros((K, K), dtype=complex)
        rows = np.arange(K)
        U[rows, (rows + j) % K] = np.exp(-2j * np.pi * b * self.xi)
        return U

    def apply(self, g, x: AlgebraElement) -> AlgebraElement:
        a, b = float(g[0]), float(g[1])
        j = self.shift_of(a)
        phase = np.exp(-2j * np.pi * b * self.xi)
        rolled = np.roll(x.blocks[0], shift=(-j, -j), axis=(0, 1))
        return AlgebraElement(self.shape, [rolled * np.outer(phase, phase.conj())], copy=False)

    def apply_adjoint(self, g, x: AlgebraElement) -> AlgebraElement:
        a, b = float(g[0]), float(g[1])
        j = self.shift_of(a)
        phase = np.exp(-2j * np.pi * b * self.xi)
        peeled = x.blocks[0] * np.outer(phase.conj(), phase)
        return AlgebraElement(self.shape, [np.roll(peeled, shift=(j, j), axis=(0, 1))], copy=False)

    # -- structured bulk paths --------------------------------------------

    def _dilated(self, y: np.ndarray, j: int) -> np.ndarray:
        return np.roll(y, shift=(-j, -j), axis=(0, 1))

    def bracket_values(self, x: AlgebraElement, y: AlgebraElement) -> np.ndarray:
        xb, yb = x.blocks[0], y.blocks[0]
        out = np.empty(self.n_a * self.n_b, dtype=complex)
        P = self.phases
        for i, j in enumerate(self.shifts):
            A = (self._dilated(yb, j).conj() * xb).T
            out[i * self.n_b:(i + 1) * self.n_b] = ((P @ A) * P.conj()).sum(axis=1)
        return out

    def bracket_integral(self, x: AlgebraElement, y: AlgebraElement, weights: np.ndarray) -> complex:
        # weights are log-uniform in a and constant in b: collapse the b sum
        # through the precomputed phase gram instead of looping over nodes
        if np.asarray(weights).shape[0] != self.n_a * self.n_b:
            raise ActionError("weights do not match the node grid")
        xb, yb = x.blocks[0], y.blocks[0]
        d_log_a = self.log_ratio
        total = 0.0 + 0.0j
        for j in self.shifts:
            a = math.exp(j * self.log_ratio)
            Yd = self._dilated(yb, j).conj().T
            total += (d_log_a / a) * np.sum((Yd * self.b_kernel) * xb.T)
        return complex(total)

    def orbit_sum(self, coeffs: np.ndarray, x: AlgebraElement) -> AlgebraElement:
        coeffs = np.asarray(coeffs, dtype=complex).reshape(self.n_a, self.n_b)
        xb = x.blocks[0]
        acc = np.zeros_like(xb)
        P = self.phases
        for i, j in enumerate(self.shifts):
            c = coeffs[i]
            if np.allclose(c, c[0], rtol=0.0, atol=1e-14 * (abs(c[0]) + 1.0)):
                kernel = (c[0] / self.db) * self.b_kernel
            else:
                kernel = (P.T * c) @ P.conj()
            acc += self._dilated(xb, j) * kernel
        return AlgebraElement(self.shape, [acc], copy=False)

    def trace_preservation_defect(self) -> float:
        # each node acts by an exactly unitary conjugation: the defect of the
        # trace functional is the unitarity defect of the node matrices
        worst = 0.0
        K = self.grid_size
        for g in self.sample_elements:
            U = self.matrix(g)
            worst = max(worst, float(np.abs(U.conj().T @ U - np.eye(K)).max()))
        return worst

    # -- smooth windowed test elements ---------------------------------------
    #
    # Elements are built from bump vectors with parameters given in octaves,
    # so the same random draw denotes the same continuum object at every grid
    # refinement and quadrature errors converge under refinement.

    def bump_vector(self, center_octaves: float, width_octaves: float,
                    modulation: float = 0.0) -> np.ndarray:
        """Gaussian log-frequency bump with a slow modulation, hard-cut at the
        declared support radius."""
        t = (np.arange(self.grid_size) - self.center) / self.design.steps_per_octave
        v = np.exp(-0.5 * ((t - center_octaves) / width_octaves) ** 2)
        v = v * np.exp(2j * np.pi * modulation * t)
        v[np.abs(t - center_octaves) > self.design.support_octaves] = 0.0
        return v

    def windowed_positive(self, rng: np.random.Generator, parts: int = 3) -> AlgebraElement:
        """Positive element: a few random smooth bumps plus a small spectral floor."""
        r = self.design.support_octaves
        K = self.grid_size
        mat = np.zeros((K, K), dtype=complex)
        for _ in range(parts):
            center = rng.uniform(-r / 3.0, r / 3.0)
            width = rng.uniform(0.12, 0.25)
            nu = rng.uniform(-1.0, 1.0)
            v = self.bump_vector(center, width, nu)
            mat += np.outer(v, v.conj())
        mat += 1e-7 * float(np.abs(np.diag(mat)).max()) * np.eye(K)
        return AlgebraElement(self.shape, [mat], copy=False)

    def windowed_element(self, rng: np.random.Generator, parts: int = 3) -> AlgebraElement:
        """General (non-hermitian) element spanned by smooth windowed bumps."""
        r = self.design.support_octaves
        K = self.grid_size
        mat = np.zeros((K, K), dtype=complex)
        for _ in range(parts):
            cu, cw = rng.uniform(-r / 3.0, r / 3.0, size=2)
            wu, ww = rng.uniform(0.12, 0.25, size=2)
            nuu, nuw = rng.uniform(-1.0, 1.0, size=2)
            coeff = rng.standard_normal() + 1j * rng.standard_normal()
            u = self.bump_vector(cu, wu, nuu)
            w = self.bump_vector(cw, ww, nuw)
            mat += coeff * np.outer(u, w.conj())
        return AlgebraElement(self.shape, [mat], copy=False)

    def weak_probes(self) -> list[AlgebraElement]:
        """Fixed family of smooth probe states for weak operator comparisons."""
        if self._probes is None:
            probes = []
            for center in (-0.5, -0.25, 0.0, 0.25, 0.5):
                for nu in (0.0, 0.7):
                    v = self.bump_vector(center, 0.18, nu)
                    probes.append(AlgebraElement(self.shape, [np.outer(v, v.conj())], copy=False))
            self._probes = probes
        return self._probes

    def weak_pairing_defect(self, a: AlgebraElement, b: AlgebraElement) -> float:
        """max over probes of |trace((a - b) z)| / |trace(a z)|."""
        worst = 0.0
        for z in self.weak_probes():
            ref = trace(a @ z)
            worst = max(worst, abs(trace((a - b) @ z)) / max(abs(ref), 1e-300))
        return worst


def wavelet_action(design: WaveletDesign | None = None) -> WaveletAction:
    return WaveletAction(design if design is not None else WaveletDesign())


# ---------------------------------------------------------------------------
# structural checkers


def fixed_point_dimension(action: Action, tol: float = 1e-8) -> int:
    """Dimension of {x : g.x = x for the sampled elements}.

    Small algebras stack the linearized action over the sampled elements and
    count singular values below ``tol``.  Large single-block algebras use a
    Lanczos eigensolve of the self-adjoint average of the linearized action
    and its adjoint, counting eigenvalues within ``tol`` of 1.
    """
    dim = action.shape.total_dim
    elems = action.sample_elements
    if dim <= 600:
        basis = list(action.shape.basis())
        rows = []
        for g in elems:
            cols = [(action.apply(g, e) - e).vec() for e in basis]
            rows.append(np.array(cols).T)
        stacked = np.vstack(rows)
        s = np.linalg.svd(stacked, compute_uv=False)
        return int(np.sum(s <= tol))

    shape = action.shape
    n_ops = 2 * len(elems)

    def matvec(v):
        x = from_vec(shape, v)
        acc = np.zeros(dim, dtype=complex)
        for g in elems:
            acc += action.apply(g, x).vec()
            acc += action.apply_adjoint(g, x).vec()
        return acc / n_ops

    op = scipy.sparse.linalg.LinearOperator((dim, dim), matvec=matvec, dtype=complex)
    k = min(8, dim - 2)
    v0 = np.ones(dim) / math.sqrt(dim)
    vals = scipy.sparse.linalg.eigsh(op, k=k, which="LA", v0=v0, return_eigenvectors=False)
    return int(np.sum(vals >= 1.0 - tol))


def is_trace_preserving(action: Action, tol: float = 1e-10, scenario: str = "") -> CheckReport:
    """Report whether the trace is invariant under the sampled action elements."""
    defect = action.trace_preservation_defect()
    return CheckReport.bound(
        "trace-preservation",
        "trace(g.x) equals trace(x) over sampled g and a basis of x",
        defect, 0.0, tol_rel=0.0, tol_abs=tol, scenario=scenario,
        notes=f"defect={defect:.3e}",
    )


def homomorphism_defect(action: Action, rng: np.random.Generator,
                        pairs: int = 24, probes=None) -> float:
    """max over sampled pairs of sup|g.(h.x) - (gh).x|."""
    group = action.group
    if probes is None:
        probes = [_default_probe(action, rng)]
    if isinstance(group, QuadratureGroup):
        idx = np.array(group.sampling_indices or range(group.node_count))
        chosen = [(group.nodes[a], group.nodes[b])
                  for a in idx for b in idx][:pairs]
        compose = group.compose
    else:
        n = group.order
        if n <= 16:  # exhaustive for small groups, sampled beyond
            chosen = [(a, b) for a in range(n) for b in range(n)]
        else:
            chosen = [tuple(rng.integers(0, n, size=2)) for _ in range(pairs)]
        compose = group.compose
    worst = 0.0
    for a, b in chosen:
        for x in probes:
            lhs = action.apply(a, action.apply(b, x))
            rhs = action.apply(compose(a, b), x)
            scale = 1.0 + x.max_abs_entry()
            worst = max(worst, sup_distance(lhs, rhs) / scale)
    return worst


def _default_probe(action: Action, rng: np.random.Generator) -> AlgebraElement:
    if isinstance(action, WaveletAction):
        return action.windowed_element(rng)
    from .algebra import random_element

    return random_element(action.shape, rng)


def automorphism_defect(action: Action, rng: np.random.Generator, trials: int = 5) -> float:
    """max defect of multiplicativity, *-preservation and unitality."""
    one = action.shape.identity()
    worst = 0.0
    for g in action.sample_elements:
        worst = max(worst, sup_distance(action.apply(g, one), one))
        for _ in range(trials):
            x = _default_probe(action, rng)
            y = _default_probe(action, rng)
            scale = 1.0 + x.max_abs_entry() * y.max_abs_entry()
            worst = max(
                worst,
                sup_distance(action.apply(g, x @ y), action.apply(g, x) @ action.apply(g, y)) / scale,
                sup_distance(action.apply(g, x.adjoint()), action.apply(g, x).adjoint())
                / (1.0 + x.max_abs_entry()),
            )
    return worst


def isometry_defect(action: Action, rng: np.random.Generator, trials: int = 4,
                    exponents=(1.0, 2.0, 3.0, math.inf)) -> float:
    """max over p of | ||g.x||_p - ||x||_p | / ||x||_p."""
    worst = 0.0
    for g in action.sample_elements:
        for _ in range(trials):
            x = _default_probe(action, rng)
            for p in exponents:
                ref = p_norm(x, p)
                if ref == 0.0:
                    continue
                worst = max(worst, abs(p_norm(action.apply(g, x), p) - ref) / ref)
    return worst
