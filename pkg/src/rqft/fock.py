"""
Truncated bosonic Fock space over discretised (wedge, k, polarisation) modes.

Two representations coexist:

* :class:`FockState` is a sparse map from occupation tuples to amplitudes.
  Ladder operators act on it through :func:`apply_ladder_word`, which keeps
  the product of ladder factors as an integer and takes a single square root
  at the end, so that e.g. ``b b^dagger |n> = (n + 1) |n>`` is exact.
* :class:`FockSpace` / :class:`QuantumOperator` give a sparse-matrix view in
  which Hamiltonians, field operators and expectation values are evaluated.

Creating a quantum in a mode already at ``n_max`` yields the zero vector;
:func:`truncation_leakage` reports how much norm that discards.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .coordinates import Wedge

SCHEMA_STATE = "rqft.fockstate/1"


@functools.total_ordering
@dataclass(frozen=True)
class ModeIndex:
    """Label of a box mode with ``k_n = 2 pi n / L``; ``wedge=None`` marks an inertial mode."""

    wedge: Optional[Wedge]
    n: int
    polarization: int = 1

    def __post_init__(self) -> None:
        if self.wedge is not None:
            object.__setattr__(self, "wedge", Wedge.parse(self.wedge))
        if int(self.n) != self.n or self.n == 0:
            raise ValueError("mode number must be a nonzero integer")
        object.__setattr__(self, "n", int(self.n))
        if self.polarization not in (1, 2):
            raise ValueError("polarization must be 1 or 2")

    @property
    def sort_key(self) -> tuple:
        order = {Wedge.LEFT: 0, Wedge.RIGHT: 1, None: 2}[self.wedge]
        return (order, self.polarization, abs(self.n), self.n)

    def __lt__(self, other: "ModeIndex") -> bool:
        return self.sort_key < other.sort_key

    def k(self, length: float) -> float:
        return 2.0 * math.pi * self.n / length

    def omega(self, length: float) -> float:
        return abs(self.k(length))

    @property
    def label(self) -> str:
        w = self.wedge.value if self.wedge is not None else "M"
        return f"{w}{self.n:+d}/{self.polarization}"

    def to_dict(self) -> dict:
        return {
            "wedge": self.wedge.value if self.wedge is not None else None,
            "n": self.n,
            "polarization": self.polarization,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ModeIndex":
        return cls(d["wedge"], d["n"], d.get("polarization", 1))


Occupation = tuple[int, ...]


@dataclass(frozen=True)
class FockState:
    """Immutable sparse state vector over ``modes`` with per-mode cap ``n_max``."""

    modes: tuple[ModeIndex, ...]
    n_max: int
    amplitudes: Mapping[Occupation, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        modes = tuple(self.modes)
        if len(set(modes)) != len(modes):
            raise ValueError("duplicate modes")
        object.__setattr__(self, "modes", modes)
        clean: dict[Occupation, complex] = {}
        for occ, amp in self.amplitudes.items():
            occ = tuple(int(n) for n in occ)
            if len(occ) != len(modes):
                raise ValueError("occupation length does not match number of modes")
            if any(n < 0 or n > self.n_max for n in occ):
                raise ValueError(f"occupation {occ} outside 0..{self.n_max}")
            if amp != 0:
                clean[occ] = complex(amp)
        object.__setattr__(self, "amplitudes", clean)

    # constructors -------------------------------------------------------

    @classmethod
    def vacuum(cls, modes: Sequence[ModeIndex], n_max: int) -> "FockState":
        return cls(tuple(modes), n_max, {(0,) * len(modes): 1.0})

    @classmethod
    def basis(cls, modes: Sequence[ModeIndex], n_max: int, occupation: Sequence[int]) -> "FockState":
        return cls(tuple(modes), n_max, {tuple(occupation): 1.0})

    @classmethod
    def number_state(
        cls, modes: Sequence[ModeIndex], n_max: int, counts: Mapping[ModeIndex, int]
    ) -> "FockState":
        modes = tuple(modes)
        occ = tuple(counts.get(m, 0) for m in modes)
        return cls.basis(modes, n_max, occ)

    # algebra ------------------------------------------------------------

    def _check_compatible(self, other: "FockState") -> None:
        if self.modes != other.modes or self.n_max != other.n_max:
            raise ValueError("states live in different Fock spaces")

    def __add__(self, other: "FockState") -> "FockState":
        self._check_compatible(other)
        amps = dict(self.amplitudes)
        for occ, amp in other.amplitudes.items():
            amps[occ] = amps.get(occ, 0.0) + amp
        return FockState(self.modes, self.n_max, amps)

    def __sub__(self, other: "FockState") -> "FockState":
        return self + (-1.0) * other

    def __rmul__(self, c: complex) -> "FockState":
        return FockState(self.modes, self.n_max, {o: c * a for o, a in self.amplitudes.items()})

    def inner(self, other: "FockState") -> complex:
        """``<self|other>``."""
        self._check_compatible(other)
        return sum(
            (a.conjugate() * other.amplitudes.get(o, 0.0) for o, a in self.amplitudes.items()),
            0j,
        )

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def normalized(self) -> "FockState":
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalise the zero vector")
        return (1.0 / nrm) * self

    def is_zero(self) -> bool:
        return not self.amplitudes

    def max_abs(self) -> float:
        return max((abs(a) for a in self.amplitudes.values()), default=0.0)

    # serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_STATE,
            "n_max": self.n_max,
            "modes": [m.to_dict() for m in self.modes],
            "amplitudes": {
                ",".join(map(str, occ)): [amp.real, amp.imag]
                for occ, amp in sorted(self.amplitudes.items())
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc: "Mapping | str") -> "FockState":
        if isinstance(doc, str):
            doc = json.loads(doc)
        if doc.get("schema") != SCHEMA_STATE:
            raise ValueError(f"unsupported schema {doc.get('schema')!r}")
        modes = tuple(ModeIndex.from_dict(m) for m in doc["modes"])
        amps = {}
        for key, (re, im) in doc["amplitudes"].items():
            occ = tuple(int(v) for v in key.split(",")) if key else ()
            amps[occ] = complex(re, im)
        return cls(modes, int(doc["n_max"]), amps)


# ---------------------------------------------------------------------------
# exact ladder actions on sparse states
# ---------------------------------------------------------------------------

Ladder = tuple[ModeIndex, bool]  # (mode, dagger)


def _word_on_basis(
    word: Sequence[Ladder], occ: Occupation, index: Mapping[ModeIndex, int], n_max: int
) -> Optional[tuple[Occupation, int]]:
    """Apply a ladder word (rightmost first) to one basis vector.

    Returns the final occupation and the integer whose square root is the
    amplitude factor, or ``None`` if the result vanishes.
    """
    occ_l = list(occ)
    factor = 1
    for mode, dagger in reversed(word):
        i = index[mode]
        n = occ_l[i]
        if dagger:
            if n == n_max:
                return None
            factor *= n + 1
            occ_l[i] = n + 1
        else:
            if n == 0:
                return None
            factor *= n
            occ_l[i] = n - 1
    return tuple(occ_l), factor


def apply_ladder_word(state: FockState, word: Sequence[Ladder]) -> FockState:
    """Apply a product of ladder operators, ``word[0]`` being the leftmost factor."""
    index = {m: i for i, m in enumerate(state.modes)}
    for mode, _ in word:
        if mode not in index:
            raise KeyError(f"mode {mode} not in state")
    out: dict[Occupation, complex] = {}
    for occ, amp in state.amplitudes.items():
        res = _word_on_basis(word, occ, index, state.n_max)
        if res is None:
            continue
        new_occ, factor = res
        out[new_occ] = out.get(new_occ, 0.0) + amp * math.sqrt(factor)
    return FockState(state.modes, state.n_max, out)


def annihilate(state: FockState, m: ModeIndex) -> FockState:
    return apply_ladder_word(state, [(m, False)])


def create(state: FockState, m: ModeIndex) -> FockState:
    """``b^dagger_m |state>``; components already at the cap are dropped (see :func:`truncation_leakage`)."""
    return apply_ladder_word(state, [(m, True)])


def truncation_leakage(state: FockState, m: ModeIndex) -> float:
    """Squared norm that :func:`create` discards at the cap: ``sum |c|^2 (n_max + 1)`` over capped components."""
    i = state.modes.index(m)
    return sum(
        abs(a) ** 2 * (state.n_max + 1) for o, a in state.amplitudes.items() if o[i] == state.n_max
    )


def commutator_check(
    m1: ModeIndex,
    m2: ModeIndex,
    test_states: Iterable[FockState],
) -> float:
    """Largest deviation of the canonical commutators from their ideal action.

    For every basis component of every test state, the exact matrix elements
    of ``[b_1, b_2^dagger] - delta_12``, ``[b_1, b_2]`` and
    ``[b_1^dagger, b_2^dagger]`` are formed from integer ladder factors and
    scaled by the component's amplitude. On the truncation-safe subspace
    (all occupations below ``n_max``) the result is exactly zero.
    """
    worst = 0.0
    delta = 1 if m1 == m2 else 0
    pairs = (
        ([(m1, False), (m2, True)], [(m2, True), (m1, False)], delta),
        ([(m1, False), (m2, False)], [(m2, False), (m1, False)], 0),
        ([(m1, True), (m2, True)], [(m2, True), (m1, True)], 0),
    )
    for state in test_states:
        index = {m: i for i, m in enumerate(state.modes)}
        for occ, amp in state.amplitudes.items():
            for left, right, ideal in pairs:
                acc: dict[Occupation, float] = {}
                for word, sign in ((left, 1.0), (right, -1.0)):
                    res = _word_on_basis(word, occ, index, state.n_max)
                    if res is not None:
                        o, f = res
                        acc[o] = acc.get(o, 0.0) + sign * math.sqrt(f)
                if ideal:
                    acc[occ] = acc.get(occ, 0.0) - ideal
                for coeff in acc.values():
                    worst = max(worst, abs(coeff * amp))
    return worst


def coherent_state(
    m: ModeIndex,
    z: complex,
    modes: Optional[Sequence[ModeIndex]] = None,
    n_max: int = 20,
) -> FockState:
    """Truncated, renormalised coherent state of mode ``m``; other modes in vacuum.

    Raises ``ValueError`` unless ``|z|^2 <= n_max / 4``.
    """
    return coherent_product_state({m: z}, modes if modes is not None else (m,), n_max)


def coherent_product_state(
    amplitudes: Mapping[ModeIndex, complex],
    modes: Sequence[ModeIndex],
    n_max: int,
) -> FockState:
    """Tensor product of truncated coherent states (vacuum for unlisted modes)."""
    modes = tuple(modes)
    factors = []
    for mode in modes:
        z = complex(amplitudes.get(mode, 0.0))
        if abs(z) ** 2 > n_max / 4:
            raise ValueError(f"|z|^2 = {abs(z) ** 2:.3g} exceeds n_max/4 = {n_max / 4:.3g}")
        if z == 0:
            factors.append([(0, 1.0 + 0j)])
            continue
        amps = []
        term = 1.0 + 0j
        for n in range(n_max + 1):
            if n:
                term *= z / math.sqrt(n)
            amps.append((n, term))
        factors.append(amps)
    for mode in amplitudes:
        if mode not in modes:
            raise KeyError(f"mode {mode} not in mode list")
    out = {}
    for combo in itertools.product(*factors):
        occ = tuple(n for n, _ in combo)
        amp = 1.0 + 0j
        for _, c in combo:
            amp *= c
        out[occ] = amp
    # the e^{-|z|^2/2} prefactors are absorbed by the renormalisation
    return FockState(modes, n_max, out).normalized()


# ---------------------------------------------------------------------------
# matrix representation
# ---------------------------------------------------------------------------


class FockSpace:
    """Dense-index view of the truncated space; mode 0 is the most significant digit."""

    def __init__(self, modes: Sequence[ModeIndex], n_max: int):
        self.modes = tuple(modes)
        if len(set(self.modes)) != len(self.modes):
            raise ValueError("duplicate modes")
        if n_max < 1:
            raise ValueError("n_max must be at least 1")
        self.n_max = int(n_max)
        self.levels = self.n_max + 1
        self.dim = self.levels ** len(self.modes)
        self._index = {m: i for i, m in enumerate(self.modes)}
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"FockSpace({len(self.modes)} modes, n_max={self.n_max}, dim={self.dim})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FockSpace) and self.modes == other.modes and self.n_max == other.n_max

    def __hash__(self) -> int:
        return hash((self.modes, self.n_max))

    def mode_position(self, m: ModeIndex) -> int:
        return self._index[m]

    def index_of(self, occ: Sequence[int]) -> int:
        idx = 0
        for n in occ:
            idx = idx * self.levels + int(n)
        return idx

    @functools.cached_property
    def occupations(self) -> np.ndarray:
        """``(dim, n_modes)`` array of occupation numbers in basis order."""
        grids = np.indices((self.levels,) * len(self.modes)).reshape(len(self.modes), -1)
        return grids.T.copy()

    # single-mode building blocks

    def _embed(self, single: sp.spmatrix, m: ModeIndex) -> sp.csr_matrix:
        pos = self._index[m]
        left = sp.identity(self.levels**pos, format="csr")
        right = sp.identity(self.levels ** (len(self.modes) - pos - 1), format="csr")
        return sp.kron(sp.kron(left, single, format="csr"), right, format="csr")

    def annihilation(self, m: ModeIndex) -> sp.csr_matrix:
        key = ("b", m)
        if key not in self._cache:
            single = sp.diags(np.sqrt(np.arange(1, self.levels, dtype=float)), 1, format="csr")
            self._cache[key] = self._embed(single, m)
        return self._cache[key]

    def creation(self, m: ModeIndex) -> sp.csr_matrix:
        return self.annihilation(m).T.tocsr()

    def number(self, m: ModeIndex) -> sp.csr_matrix:
        return sp.diags(self.occupations[:, self._index[m]].astype(float), format="csr")

    def identity(self) -> sp.csr_matrix:
        return sp.identity(self.dim, format="csr", dtype=complex)

    # state conversion

    def vector(self, state: FockState) -> np.ndarray:
        if state.modes != self.modes:
            raise ValueError("state and space have different modes")
        if state.n_max > self.n_max:
            raise ValueError("state exceeds space truncation")
        v = np.zeros(self.dim, dtype=complex)
        for occ, amp in state.amplitudes.items():
            v[self.index_of(occ)] = amp
        return v

    def state(self, vector: np.ndarray, tol: float = 0.0) -> FockState:
        vector = np.asarray(vector)
        nz = np.nonzero(np.abs(vector) > tol)[0]
        occs = self.occupations
        return FockState(self.modes, self.n_max, {tuple(occs[i]): vector[i] for i in nz})

    def safe_indices(self, cap: int) -> np.ndarray:
        """Basis indices whose occupations are all ``<= cap``."""
        return np.nonzero(np.all(self.occupations <= cap, axis=1))[0]


@dataclass
class QuantumOperator:
    """Sparse matrix acting on a :class:`FockSpace`."""

    matrix: sp.csr_matrix
    space: FockSpace

    def __post_init__(self) -> None:
        self.matrix = sp.csr_matrix(self.matrix, dtype=complex)
        if self.matrix.shape != (self.space.dim, self.space.dim):
            raise ValueError("operator shape does not match space")

    # algebra
    def _coerce(self, other: "QuantumOperator") -> sp.csr_matrix:
        if other.space != self.space:
            raise ValueError("operators act on different spaces")
        return other.matrix

    def __add__(self, other: "QuantumOperator") -> "QuantumOperator":
        return QuantumOperator(self.matrix + self._coerce(other), self.space)

    def __sub__(self, other: "QuantumOperator") -> "QuantumOperator":
        return QuantumOperator(self.matrix - self._coerce(other), self.space)

    def __matmul__(self, other: "QuantumOperator") -> "QuantumOperator":
        return QuantumOperator(self.matrix @ self._coerce(other), self.space)

    def __mul__(self, c: complex) -> "QuantumOperator":
        return QuantumOperator(self.matrix * c, self.space)

    __rmul__ = __mul__

    def adjoint(self) -> "QuantumOperator":
        return QuantumOperator(self.matrix.conj().T.tocsr(), self.space)

    def commutator(self, other: "QuantumOperator") -> "QuantumOperator":
        return self @ other - other @ self

    def hermiticity_defect(self) -> float:
        diff = self.matrix - self.matrix.conj().T
        return float(np.max(np.abs(diff.data))) if diff.nnz else 0.0

    # action
    def apply(self, state: FockState) -> FockState:
        return self.space.state(self.matrix @ self.space.vector(state))

    def apply_vector(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ v

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def is_diagonal(self) -> bool:
        m = self.matrix.tocoo()
        return bool(np.all(m.row == m.col))

    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal()


def ladder_operator(space: FockSpace, m: ModeIndex, dagger: bool = False) -> QuantumOperator:
    return QuantumOperator(space.creation(m) if dagger else space.annihilation(m), space)


def number_operator(space: FockSpace, m: ModeIndex) -> QuantumOperator:
    return QuantumOperator(space.number(m), space)


def expectation(state: "FockState | np.ndarray", op: QuantumOperator) -> complex:
    """``<psi|A|psi>`` for a normalised state."""
    v = op.space.vector(state) if isinstance(state, FockState) else np.asarray(state)
    return complex(np.vdot(v, op.matrix @ v))


def number_expectation(state: FockState, m: ModeIndex) -> float:
    """``<b^dagger_m b_m>`` straight from the sparse amplitudes."""
    i = state.modes.index(m)
    return float(sum(abs(a) ** 2 * o[i] for o, a in state.amplitudes.items()))


@dataclass
class Hamiltonian(QuantumOperator):
    """Diagonal free-field Hamiltonian ``sum_m s_m omega_m b^dagger_m b_m + zero_point``."""

    zero_point: float = 0.0
    frequencies: dict = field(default_factory=dict)


def hamiltonian(
    space: FockSpace,
    length: float,
    zero_point: bool = True,
) -> Hamiltonian:
    """Physical energy ``sum_m omega_m (b^dagger_m b_m + 1/2)``.

    Left- and right-wedge quanta of equal ``|k|`` are degenerate. The box
    regularisation turns the continuum zero-point ``int dk omega delta(0)``
    into ``H_0 = sum_m omega_m / 2``, reported in ``zero_point`` and added on
    the diagonal when ``zero_point`` is true.
    """
    return _diagonal_generator(space, length, {Wedge.LEFT: 1.0, Wedge.RIGHT: 1.0, None: 1.0}, zero_point)


def eta_generator(space: FockSpace, length: float) -> Hamiltonian:
    """Generator of translations along ``d_eta``: ``sum_m s_m omega_m b^dagger_m b_m``.

    ``s = +1`` for right-wedge and inertial modes, ``-1`` for left-wedge modes,
    whose future-directed time translation is ``-d_eta``. It coincides with
    :func:`hamiltonian` (up to the constant) on right-wedge modes and drives
    the Heisenberg equation in ``eta``.
    """
    return _diagonal_generator(space, length, {Wedge.LEFT: -1.0, Wedge.RIGHT: 1.0, None: 1.0}, False)


def _diagonal_generator(space: FockSpace, length: float, signs: Mapping, with_zero: bool) -> Hamiltonian:
    occ = space.occupations.astype(float)
    omegas = np.array([m.omega(length) for m in space.modes])
    s = np.array([signs[m.wedge] for m in space.modes])
    h0 = 0.5 * float(np.sum(omegas)) if with_zero else 0.0
    diag = occ @ (s * omegas) + h0
    return Hamiltonian(
        sp.diags(diag.astype(complex), format="csr"),
        space,
        zero_point=h0,
        frequencies={m: float(w) for m, w in zip(space.modes, omegas)},
    )


def evolve(vector: np.ndarray, generator: QuantumOperator, eta: float) -> np.ndarray:
    """``exp(-i G eta) |psi>``; exact for diagonal generators, Krylov otherwise."""
    if generator.is_diagonal():
        return np.exp(-1j * generator.diagonal() * eta) * vector
    from scipy.sparse.linalg import expm_multiply

    return expm_multiply(-1j * eta * generator.matrix, vector)
