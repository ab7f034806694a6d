"""Group representations and the spectral amenability test.

Finite groups are built from presentations by Todd-Coxeter coset
enumeration, turned into left regular representations, and tested for
``H_0 subset p(A)`` where ``H_0 = {z_0 + ... + z_n = 0}``.  The Koopman
representation of the infinite dihedral group on the binary tree is
available as finite-level truncations.
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import defaults
from .pencil import MatrixPencil, as_matrix, char_poly, hyperplane_contained, is_singular, evaluate

Word = tuple  # of (generator index, exponent) pairs


# ---------------------------------------------------------------------------
# coset enumeration


class CosetEnumerationError(RuntimeError):
    pass


def _letters(relator: Word):
    """Expand a word into column indices: generator g is 2g, its inverse 2g+1."""
    out = []
    for g, e in relator:
        col = 2 * g if e > 0 else 2 * g + 1
        out.extend([col] * abs(e))
    return out


def _inv(x):
    return x ^ 1


def coset_enumeration(ngens: int, relators, max_cosets=100_000):
    """Coset table of the trivial subgroup (HLT strategy with coincidences).

    Returns ``(table, words)`` where ``table[c][2g]`` is ``c * g`` and
    ``words[c]`` is a shortest word reaching coset ``c`` from the identity.
    Cosets are renumbered in breadth-first order, so the result only
    depends on the presentation.
    """
    rels = [_letters(r) for r in relators]
    ncols = 2 * ngens
    table = [[None] * ncols]
    parent = [0]

    def rep(k):
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def define(c, x):
        if len(table) >= max_cosets:
            raise CosetEnumerationError(f"more than {max_cosets} cosets")
        d = len(table)
        table.append([None] * ncols)
        parent.append(d)
        table[c][x] = d
        table[d][_inv(x)] = c

    def merge(k, l, queue):
        k, l = rep(k), rep(l)
        if k != l:
            k, l = min(k, l), max(k, l)
            parent[l] = k
            queue.append(l)

    def coincidence(a, b):
        queue = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(ncols):
                d = table[g][x]
                if d is None:
                    continue
                table[d][_inv(x)] = None
                mu, nu = rep(g), rep(d)
                if table[mu][x] is not None:
                    merge(nu, table[mu][x], queue)
                elif table[nu][_inv(x)] is not None:
                    merge(mu, table[nu][_inv(x)], queue)
                else:
                    table[mu][x] = nu
                    table[nu][_inv(x)] = mu

    def scan_and_fill(a, w):
        f, b = a, a
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] is not None:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != a:
                    coincidence(f, a)
                return
            while j >= i and table[b][_inv(w[j])] is not None:
                b = table[b][_inv(w[j])]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][_inv(w[i])] = f
                return
            define(f, w[i])

    c = 0
    while c < len(table):
        for w in rels:
            if parent[c] != c:
                break
            scan_and_fill(c, w)
        if parent[c] == c:
            for x in range(ncols):
                if table[c][x] is None:
                    define(c, x)
        c += 1

    # breadth-first renumbering of the live cosets
    order = {0: 0}
    words = [()]
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in range(ncols):
            d = rep(table[c][x])
            if d not in order:
                order[d] = len(order)
                g, e = divmod(x, 2)
                words.append(words[order[c]] + ((g, -1 if e else 1),))
                queue.append(d)
    live = sorted(order, key=order.get)
    new = [[order[rep(table[c][x])] for x in range(ncols)] for c in live]
    return new, words


# ---------------------------------------------------------------------------
# Cayley tables


@dataclass(frozen=True, eq=False)
class CayleyTable:
    """Multiplication table ``table[i, j] = index of g_i g_j``."""

    table: np.ndarray
    generators: tuple
    identity: int = 0
    labels: tuple = ()
    words: tuple = ()

    def __post_init__(self):
        t = np.array(self.table, dtype=int)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        self.validate()

    @property
    def order(self):
        return self.table.shape[0]

    def validate(self):
        t = self.table
        m = t.shape[0]
        if t.ndim != 2 or t.shape != (m, m) or m < 1:
            raise ValueError("Cayley table must be square")
        full = np.arange(m)
        for k in range(m):
            if not (np.array_equal(np.sort(t[k]), full) and np.array_equal(np.sort(t[:, k]), full)):
                raise ValueError("Cayley table is not a Latin square")
        e = self.identity
        if not (np.array_equal(t[e], full) and np.array_equal(t[:, e], full)):
            raise ValueError(f"element {e} is not an identity")
        if not self.generators or any(not 0 <= g < m for g in self.generators):
            raise ValueError("bad generator indices")
        if len(self.generated_subgroup()) != m:
            raise ValueError("generators do not generate the group")

    def generated_subgroup(self):
        seen = {self.identity}
        queue = deque(seen)
        while queue:
            h = queue.popleft()
            for g in self.generators:
                k = int(self.table[g, h])
                if k not in seen:
                    seen.add(k)
                    queue.append(k)
        return seen

    def is_associative(self):
        t = self.table
        m = len(t)
        left = t[t]  # (ab)c
        right = t[np.arange(m)[:, None, None], t[None, :, :]]  # a(bc)
        return bool(np.array_equal(left, right))


def cayley_from_presentation(ngens: int, relators, labels=None) -> CayleyTable:
    coset_table, words = coset_enumeration(ngens, relators)
    m = len(coset_table)
    mult = np.empty((m, m), dtype=int)
    for j, word in enumerate(words):
        cols = _letters(word)
        for i in range(m):
            c = i
            for x in cols:
                c = coset_table[c][x]
            mult[i, j] = c
    gens = tuple(coset_table[0][2 * g] for g in range(ngens))
    labels = tuple(labels) if labels else tuple(f"g{k + 1}" for k in range(ngens))
    return CayleyTable(mult, gens, 0, labels, tuple(words))


def dihedral_cayley(n: int) -> CayleyTable:
    """``<a, t | a^2 = t^2 = (at)^N = 1>``, the dihedral group of order 2N."""
    if n < 1:
        raise ValueError("N must be positive")
    rels = [((0, 2),), ((1, 2),), ((0, 1), (1, 1)) * n]
    return cayley_from_presentation(2, rels, ("a", "t"))


def cyclic_cayley(n: int) -> CayleyTable:
    if n < 1:
        raise ValueError("n must be positive")
    return cayley_from_presentation(1, [((0, n),)], ("g",))


def symmetric3_cayley() -> CayleyTable:
    """S_3 as ``<s, r | s^2 = r^2 = (sr)^3 = 1>`` (two transpositions)."""
    return cayley_from_presentation(2, [((0, 2),), ((1, 2),), ((0, 1), (1, 1)) * 3], ("s", "r"))


# ---------------------------------------------------------------------------
# representations


def parse_word(text: str, labels) -> Word:
    """``"g1 g2^-1 g3^2"`` -> ((0, 1), (1, -1), (2, 2))."""
    index = {lab: k for k, lab in enumerate(labels)}
    out = []
    for tok in text.replace("*", " ").split():
        m = re.fullmatch(r"([A-Za-z_]\w*?)(?:\^(-?\d+))?", tok)
        if not m or m.group(1) not in index:
            raise ValueError(f"cannot parse {tok!r} in word {text!r}")
        out.append((index[m.group(1)], int(m.group(2) or 1)))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class GroupRep:
    labels: tuple
    matrices: tuple
    relations: tuple = field(default=())  # words that must evaluate to I
    name: str = ""

    def __post_init__(self):
        mats = tuple(as_matrix(m) for m in self.matrices)
        if not mats or len(mats) != len(self.labels):
            raise ValueError("need one matrix per generator label")
        d = mats[0].shape[0]
        eye = np.eye(d)
        for lab, m in zip(self.labels, mats):
            if m.shape != (d, d):
                raise ValueError("generator matrices must share one square size")
            if np.abs(m.conj().T @ m - eye).max() > defaults.UNITARY_TOL:
                raise ValueError(f"generator {lab} is not unitary")
        object.__setattr__(self, "matrices", mats)
        for w in self.relations:
            err = np.abs(self.word(w) - eye).max()
            if err > defaults.RELATION_TOL:
                raise ValueError(f"relation {w} fails by {err:.3g}")

    @property
    def d(self):
        return self.matrices[0].shape[0]

    @property
    def n(self):
        return len(self.matrices)

    def word(self, w) -> np.ndarray:
        if isinstance(w, str):
            w = parse_word(w, self.labels)
        out = np.eye(self.d, dtype=complex)
        for g, e in w:
            m = self.matrices[g] if e > 0 else self.matrices[g].conj().T
            out = out @ np.linalg.matrix_power(m, abs(e))
        return out

    def pencil(self) -> MatrixPencil:
        return MatrixPencil.from_unitaries(self.matrices)


def regular_rep(c: CayleyTable) -> GroupRep:
    """Left regular representation: ``lambda(g) e_h = e_{gh}``."""
    m = c.order
    mats = []
    for g in c.generators:
        p = np.zeros((m, m))
        p[c.table[g], np.arange(m)] = 1.0
        mats.append(p)
    labels = c.labels if len(c.labels) == len(c.generators) else tuple(f"g{k + 1}" for k in range(len(mats)))
    return GroupRep(labels, tuple(mats), name=f"regular({m})")


def koopman_truncation(level: int, max_level=defaults.KOOPMAN_MAX_LEVEL) -> GroupRep:
    """Koopman representation of D_infinity on the first ``level`` tree levels.

    ``a`` swaps the two halves; ``t`` acts as ``a`` on the left subtree and
    as itself on the right one.  At level 0 both generators are ``[1]``.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    if level > max_level:
        raise ValueError(f"level {level} exceeds the configured maximum {max_level}")
    a = np.ones((1, 1))
    t = np.ones((1, 1))
    for _ in range(level):
        k = a.shape[0]
        eye = np.eye(k)
        zero = np.zeros((k, k))
        a, t = np.block([[zero, eye], [eye, zero]]), np.block([[a, zero], [zero, t]])
    return GroupRep(("a", "t"), (a, t), relations=("a^2", "t^2"), name=f"koopman({level})")


_S2 = 1 / np.sqrt(2)
GL3_A1 = np.array([[-_S2, -0.5 - 0.5j], [-0.5 + 0.5j, _S2]])
GL3_A2 = np.array([[0.5 + 0.5j, _S2], [-_S2, 0.5 - 0.5j]])
GL3_A3 = np.array([[0.5 - 0.5j, 1j * _S2], [1j * _S2, 0.5 + 0.5j]])
GL3_RELATIONS = (
    "g1^2",
    "g1 g2^-1 g1 g2^-1",
    "g1 g3^-1 g1 g3^-1",
    "g2^2 g3 g2^-1 g3",
    "g2 g3^2 g2 g3^-1",
)


def gl3_reps() -> tuple[GroupRep, GroupRep]:
    """The two inequivalent 2-dimensional representations of GL_3(Z/3Z)
    that share one characteristic polynomial."""
    labels = ("g1", "g2", "g3")
    plus = GroupRep(labels, (GL3_A1, GL3_A2, GL3_A3), GL3_RELATIONS, "rho+")
    minus = GroupRep(labels, (-GL3_A1, GL3_A2, GL3_A3), GL3_RELATIONS, "rho-")
    return plus, minus


# ---------------------------------------------------------------------------
# spectral tests


def markov_operator(r: GroupRep) -> np.ndarray:
    if not r.matrices:
        raise ValueError("no generators")
    return sum(r.matrices) / r.n


def h0_sample_points(nvars: int, count: int, rng) -> np.ndarray:
    """Random points of ``H_0``: complex Gaussian, minus the mean."""
    z = rng.normal(size=(count, nvars)) + 1j * rng.normal(size=(count, nvars))
    return z - z.mean(axis=1, keepdims=True)


def h0_containment_test(r: GroupRep, mode="auto", samples=defaults.H0_SAMPLES,
                        seed=defaults.SEED) -> bool:
    """Is ``H_0`` contained in the projective spectrum of ``(I, pi(g_1), ...)``?

    Exact divisibility of the characteristic polynomial by
    ``z_0 + ... + z_n`` when the dimension allows it, otherwise singularity
    of the pencil at random points of ``H_0``.
    """
    p = r.pencil()
    if mode == "auto":
        mode = "exact" if p.d <= defaults.CHARPOLY_MAX_DIM else "sampling"
    if mode == "exact":
        return hyperplane_contained(char_poly(p), (1.0,) * (p.n + 1))
    if mode == "sampling":
        rng = np.random.default_rng(seed)
        pts = h0_sample_points(p.n + 1, samples, rng)
        return all(is_singular(evaluate(p, z / np.abs(z).max())) for z in pts)
    raise ValueError(f"unknown mode {mode!r}")


def free_group_region(z, n: int | None = None) -> bool:
    """Membership in the projective spectrum of the free group's regular
    representation: ``2|z_j|^2 <= ||z||^2`` for every j."""
    z = np.asarray(getattr(z, "coords", z), dtype=complex)
    if n is not None and z.size != n + 1:
        raise ValueError(f"expected {n + 1} coordinates")
    mags = np.abs(z) ** 2
    total = mags.sum()
    return bool(np.all(2 * mags <= total * (1 + 1e-12)))


def koopman_tau_values(level: int, z1: float, z2: float) -> np.ndarray:
    """tau at the singular points ``z_0 = -mu`` over eigenvalues ``mu`` of
    ``z_1 pi(a) + z_2 pi(t)`` (real z_1, z_2)."""
    r = koopman_truncation(level)
    a, t = (m.real for m in r.matrices)
    mu = np.linalg.eigvalsh(z1 * a + z2 * t)
    return (mu ** 2 - z1 ** 2 - z2 ** 2) / (2 * z1 * z2)


# ---------------------------------------------------------------------------
# group specification files


GROUP_KINDS = ("dihedral", "cyclic", "symmetric3", "koopman-dinfty", "gl3z3", "custom-cayley")


def build_group(spec: dict) -> list[GroupRep]:
    """Representation(s) from a group specification mapping.

    Keys: ``kind`` plus ``N`` (dihedral, cyclic), ``L`` (koopman-dinfty),
    ``table``/``generators``/``identity`` (custom-cayley) and optional
    ``labels``.
    """
    kind = spec.get("kind")
    allowed = {"kind", "N", "L", "labels", "table", "generators", "identity"}
    unknown = set(spec) - allowed
    if unknown:
        raise ValueError(f"unknown keys in group spec: {sorted(unknown)}")
    if kind == "dihedral":
        reps = [regular_rep(dihedral_cayley(int(spec["N"])))]
    elif kind == "cyclic":
        reps = [regular_rep(cyclic_cayley(int(spec["N"])))]
    elif kind == "symmetric3":
        reps = [regular_rep(symmetric3_cayley())]
    elif kind == "koopman-dinfty":
        reps = [koopman_truncation(int(spec["L"]))]
    elif kind == "gl3z3":
        reps = list(gl3_reps())
    elif kind == "custom-cayley":
        c = CayleyTable(spec["table"], tuple(spec["generators"]), int(spec.get("identity", 0)),
                        tuple(spec.get("labels", ())))
        reps = [regular_rep(c)]
    else:
        raise ValueError(f"unknown group kind {kind!r}; expected one of {GROUP_KINDS}")
    labels = spec.get("labels")
    if labels and kind != "custom-cayley":
        if len(labels) != reps[0].n:
            raise ValueError("label count does not match generator count")
        reps = [GroupRep(tuple(labels), r.matrices, (), r.name) for r in reps]
    return reps


def load_group(path) -> list[GroupRep]:
    with open(path) as fh:
        return build_group(json.load(fh))
