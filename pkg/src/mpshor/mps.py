"""Matrix product state simulator with SVD truncation.

State representation
--------------------
An n-qubit pure state is held as a chain of per-site tensors plus the
Schmidt coefficient vector of every bond, the canonical chain gauge:
site l owns a tensor with indices (left bond, physical, right bond)
and ``lambdas[l]`` holds the Schmidt spectrum of the cut between
sites l and l+1, sorted descending with squares summing to one.

Internally each stored site tensor absorbs the Schmidt vector of the
bond to its right (``tensors[l] = gamma_l * diag(lambdas[l])``), which
keeps every update free of divisions by small Schmidt coefficients:
a two-qubit gate contracts the two site tensors, applies the gate,
multiplies in the left Schmidt vector, splits by SVD, and rebuilds the
left tensor by projecting onto the kept right singular vectors. The
pure ``gamma`` tensors are available through :attr:`MpsState.gammas`.

Two-qubit gates on non-adjacent qubits are routed to adjacency with
explicit swap gates and routed back, so the only entangling primitive
is the adjacent-pair SVD update. Truncation keeps at most ``chi_max``
Schmidt coefficients, drops coefficients below ``discard_threshold``,
and renormalizes the spectrum.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, Gate, cswap_gates

_SWAP4 = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
_UNITARY_TOL = 1e-12


class TruncationError(RuntimeError):
    """Raised when a truncation would drop the entire Schmidt spectrum."""


class SimulationTimeout(RuntimeError):
    """Raised when a cooperative deadline expires during gate application."""


@dataclass(frozen=True)
class TruncationPolicy:
    chi_max: int = 64
    discard_threshold: float = 1e-12
    renormalize: bool = True

    def __post_init__(self):
        if self.chi_max < 2:
            raise ValueError("chi_max must be at least 2")
        if not 0.0 <= self.discard_threshold < 1.0:
            raise ValueError("discard_threshold must lie in [0, 1)")
        if not self.renormalize:
            raise ValueError("renormalize must stay enabled")


#: effectively untruncated evolution, for oracle comparisons
EXACT_POLICY = TruncationPolicy(chi_max=1 << 20, discard_threshold=0.0)


@dataclass
class GateStats:
    gate_count: int = 0
    svd_count: int = 0
    swap_count: int = 0
    max_chi: int = 1
    max_discarded_weight: float = 0.0
    peak_elements: int = 0

    def merge(self, other: GateStats) -> None:
        self.gate_count += other.gate_count
        self.svd_count += other.svd_count
        self.swap_count += other.swap_count
        self.max_chi = max(self.max_chi, other.max_chi)
        self.max_discarded_weight = max(
            self.max_discarded_weight, other.max_discarded_weight
        )
        self.peak_elements = max(self.peak_elements, other.peak_elements)


@dataclass
class MpsState:
    n: int
    tensors: list[np.ndarray]
    lambdas: list[np.ndarray]
    policy: TruncationPolicy = field(default_factory=TruncationPolicy)

    @property
    def gammas(self) -> list[np.ndarray]:
        """Site tensors in the pure chain gauge (right Schmidt vector divided out)."""
        out = []
        for l, b in enumerate(self.tensors):
            if l < self.n - 1:
                out.append(b / self.lambdas[l][None, None, :])
            else:
                out.append(b.copy())
        return out

    def copy(self) -> MpsState:
        return MpsState(
            n=self.n,
            tensors=[t.copy() for t in self.tensors],
            lambdas=[l.copy() for l in self.lambdas],
            policy=self.policy,
        )

    def element_count(self) -> int:
        return sum(t.size for t in self.tensors)


def init_state(n: int, policy: TruncationPolicy | None = None) -> MpsState:
    """Product state |0...0> with every bond dimension 1."""
    if n < 1:
        raise ValueError("n must be positive")
    tensors = []
    for _ in range(n):
        t = np.zeros((1, 2, 1), dtype=complex)
        t[0, 0, 0] = 1.0
        tensors.append(t)
    lambdas = [np.ones(1) for _ in range(n - 1)]
    return MpsState(n=n, tensors=tensors, lambdas=lambdas, policy=policy or TruncationPolicy())


def _check_unitary(u: np.ndarray, dim: int):
    u = np.asarray(u, dtype=complex)
    if u.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix, got {u.shape}")
    if np.abs(u.conj().T @ u - np.eye(dim)).max() > _UNITARY_TOL:
        raise ValueError("matrix is not unitary")
    return u


def _svd(m: np.ndarray):
    try:
        return np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError:
        from scipy.linalg import svd as scipy_svd

        return scipy_svd(m, full_matrices=False, lapack_driver="gesvd")


def _apply_1q_raw(state: MpsState, u: np.ndarray, q: int):
    b = state.tensors[q]
    state.tensors[q] = np.einsum("ij,ajb->aib", u, b)


def apply_1q(state: MpsState, u, q: int) -> MpsState:
    """Apply a 2x2 unitary to qubit q; bonds are untouched."""
    if not 0 <= q < state.n:
        raise ValueError(f"qubit {q} out of range for n={state.n}")
    _apply_1q_raw(state, _check_unitary(u, 2), q)
    return state


def _apply_2q_adjacent(state: MpsState, u4: np.ndarray, q: int, stats: GateStats | None):
    """Gate on the adjacent pair (q, q+1); u4 rows indexed by (bit_q, bit_q+1)."""
    bl, br = state.tensors[q], state.tensors[q + 1]
    chi_l, chi_r = bl.shape[0], br.shape[2]
    c = np.tensordot(bl, br, axes=(2, 0))  # (chi_l, i, j, chi_r)
    cm = u4 @ c.transpose(1, 2, 0, 3).reshape(4, chi_l * chi_r)
    c = np.ascontiguousarray(
        cm.reshape(2, 2, chi_l, chi_r).transpose(2, 0, 1, 3)
    )
    lam_left = state.lambdas[q - 1] if q > 0 else None
    theta = c if lam_left is None else c * lam_left[:, None, None, None]
    um, s, vh = _svd(theta.reshape(2 * chi_l, 2 * chi_r))
    del um
    policy = state.policy
    keep = int(np.count_nonzero(s > policy.discard_threshold)) if policy.discard_threshold > 0 else int(np.count_nonzero(s > 0))
    if keep == 0:
        raise TruncationError(
            f"all {s.size} Schmidt coefficients fall below "
            f"{policy.discard_threshold} at bond {q}"
        )
    keep = min(keep, policy.chi_max)
    discarded = float((s[keep:] ** 2).sum())
    s_kept = s[:keep]
    nrm = float(np.linalg.norm(s_kept))
    state.lambdas[q] = s_kept / nrm
    vk = vh[:keep]
    state.tensors[q + 1] = vk.reshape(keep, 2, chi_r)
    state.tensors[q] = (
        c.reshape(2 * chi_l, 2 * chi_r) @ vk.conj().T
    ).reshape(chi_l, 2, keep) / nrm
    if stats is not None:
        stats.svd_count += 1
        if keep > stats.max_chi:
            stats.max_chi = keep
        if discarded > stats.max_discarded_weight:
            stats.max_discarded_weight = discarded


def _apply_2q_routed(
    state: MpsState,
    u4: np.ndarray,
    q1: int,
    q2: int,
    stats: GateStats | None,
):
    lo, hi = (q1, q2) if q1 < q2 else (q2, q1)
    if q1 > q2:
        u4 = _SWAP4 @ u4 @ _SWAP4
    for p in range(lo, hi - 1):
        _apply_2q_adjacent(state, _SWAP4, p, stats)
        if stats is not None:
            stats.swap_count += 1
    _apply_2q_adjacent(state, u4, hi - 1, stats)
    for p in range(hi - 2, lo - 1, -1):
        _apply_2q_adjacent(state, _SWAP4, p, stats)
        if stats is not None:
            stats.swap_count += 1


def apply_2q(state: MpsState, u, q1: int, q2: int, stats: GateStats | None = None) -> MpsState:
    """Apply a 4x4 unitary to qubits (q1, q2), q1 carrying the high bit.

    Adjacent pairs get a single contract/apply/SVD/truncate update;
    distant pairs are routed to adjacency with swaps and routed back.
    """
    if q1 == q2:
        raise ValueError("two-qubit gate needs distinct qubits")
    if not (0 <= q1 < state.n and 0 <= q2 < state.n):
        raise ValueError(f"qubits ({q1}, {q2}) out of range for n={state.n}")
    _apply_2q_routed(state, _check_unitary(u, 4), q1, q2, stats)
    return state


def apply_gate(state: MpsState, gate: Gate, stats: GateStats | None = None):
    """Apply one circuit gate; ControlledSwap is lowered to two-qubit gates."""
    if gate.kind == "CSWAP":
        for g in cswap_gates(*gate.targets):
            apply_gate(state, g, stats)
        return
    if gate.arity == 1:
        _apply_1q_raw(state, gate.full_matrix(), gate.targets[0])
        return
    if gate.kind == "SWAP" and stats is not None:
        stats.swap_count += 1
    _apply_2q_routed(state, gate.full_matrix(), gate.targets[0], gate.targets[1], stats)


def run_circuit(state: MpsState, circ: Circuit, deadline: float | None = None) -> GateStats:
    """Apply every gate in order; returns per-run statistics.

    `deadline` is an absolute time.monotonic() instant checked before
    each gate; crossing it raises SimulationTimeout with the state left
    at the last completed gate.
    """
    if circ.width != state.n:
        raise ValueError(f"circuit width {circ.width} != state size {state.n}")
    stats = GateStats(peak_elements=state.element_count())
    for g in circ.gates:
        if deadline is not None and time.monotonic() > deadline:
            raise SimulationTimeout(
                f"deadline expired after {stats.gate_count} of {len(circ.gates)} gates"
            )
        apply_gate(state, g, stats)
        stats.gate_count += 1
        elems = state.element_count()
        if elems > stats.peak_elements:
            stats.peak_elements = elems
    return stats


def amplitude(state: MpsState, bits) -> complex:
    """Coefficient of one computational basis string (chain contraction)."""
    if len(bits) != state.n:
        raise ValueError(f"need {state.n} bits, got {len(bits)}")
    v = np.ones(1, dtype=complex)
    for l, bit in enumerate(bits):
        v = v @ state.tensors[l][:, int(bit), :]
    return complex(v[0])


def state_norm(state: MpsState) -> float:
    """Exact 2-norm of the represented state (gauge independent)."""
    env = np.ones((1, 1), dtype=complex)
    for b in state.tensors:
        tmp = np.tensordot(env, b, axes=(1, 0))  # (chi_l', i, chi_r)
        env = np.tensordot(b.conj(), tmp, axes=([0, 1], [0, 1]))
    return float(np.sqrt(abs(env[0, 0])))


def to_statevector(state: MpsState) -> np.ndarray:
    """Full amplitude vector, qubit 0 = most significant bit; n <= 24."""
    if state.n > 24:
        raise ValueError(f"statevector export capped at 24 qubits, got {state.n}")
    acc = np.ones((1, 1), dtype=complex)
    for b in state.tensors:
        acc = np.tensordot(acc, b, axes=(1, 0))
        acc = acc.reshape(acc.shape[0] * 2, acc.shape[2])
    return acc.ravel()


def bond_entropy(state: MpsState, cut: int) -> float:
    """Entanglement entropy in bits across the cut before qubit `cut`."""
    if not 1 <= cut <= state.n - 1:
        raise ValueError(f"cut must be in [1, {state.n - 1}], got {cut}")
    p = state.lambdas[cut - 1] ** 2
    p = p[p > 1e-300]
    return float(max(0.0, -(p * np.log2(p)).sum()))


def schmidt_number(state: MpsState) -> int:
    """Largest bond dimension along the chain."""
    if state.n == 1:
        return 1
    return max(lam.size for lam in state.lambdas)


def sample(state: MpsState, qubits, shots: int, seed: int) -> dict[str, int]:
    """Draw `shots` bitstrings for the given qubits without mutating the state.

    Whole-chain conditional sampling left to right; the requested
    qubits are then read out of each full sample, which realizes the
    exact marginal distribution.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    qubits = list(qubits)
    if any(q < 0 or q >= state.n for q in qubits):
        raise ValueError("qubit index out of range")
    rng = np.random.default_rng(seed)
    randoms = rng.random((shots, state.n))
    counts: dict[str, int] = {}
    for shot in range(shots):
        v = np.ones(1, dtype=complex)
        bits = []
        for l in range(state.n):
            b = state.tensors[l]
            v0 = v @ b[:, 0, :]
            p0 = float((np.abs(v0) ** 2).sum())
            v1 = v @ b[:, 1, :]
            p1 = float((np.abs(v1) ** 2).sum())
            if randoms[shot, l] * (p0 + p1) < p0:
                bits.append("0")
                v = v0 / np.sqrt(p0)
            else:
                bits.append("1")
                v = v1 / np.sqrt(p1)
        key = "".join(bits[q] for q in qubits)
        counts[key] = counts.get(key, 0) + 1
    return counts


def dump_lambda_spectra(state: MpsState, path) -> None:
    """Write the per-bond Schmidt spectra as columnar text."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# bond rank schmidt_coefficient\n")
        for bond, lam in enumerate(state.lambdas):
            for rank, val in enumerate(lam):
                fh.write(f"{bond + 1} {rank} {float(val)!r}\n")
