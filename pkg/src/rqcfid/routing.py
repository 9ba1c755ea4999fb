"""Permutations, architectures, swap-schedule decomposition and swap errors.

A schedule is an ordered list of layers; each layer is a set of disjoint
transpositions that are edges of the architecture's connectivity graph.
Applying the layers in order reproduces the target permutation exactly.

Swap errors come in two equivalent flavours: omission (each swap dropped
independently with probability p) and pulse-length noise S -> S^beta with
beta ~ N(1, sigma^2); the two give the same average fidelity when
p = (1 - exp(-pi^2 sigma^2 / 2)) / 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from . import linalg
from .analytics import swap_omission_prob
from .mc import Estimate
from .seeding import Seed, STREAM_CIRCUIT, STREAM_PERM_NOISE


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class Permutation:
    """Bijection on {0..L-1}; image[k] is where k is sent."""

    image: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(k) for k in self.image)
        object.__setattr__(self, "image", img)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation: {img}")

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        if size < 1:
            raise ValueError("permutation size must be >= 1")
        return cls(tuple(range(size)))

    @property
    def size(self) -> int:
        return len(self.image)

    def __call__(self, k: int) -> int:
        return self.image[k]

    def compose(self, first: "Permutation") -> "Permutation":
        """self o first: apply `first`, then self."""
        if first.size != self.size:
            raise ValueError("size mismatch in composition")
        return Permutation(tuple(self.image[first.image[k]] for k in range(self.size)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for k, v in enumerate(self.image):
            inv[v] = k
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(v == k for k, v in enumerate(self.image))


@dataclass(frozen=True)
class Architecture:
    """Connectivity constraint: fully connected, a line, or a d-dim grid."""

    kind: str                      # "fc" | "line" | "grid"
    sides: tuple[int, ...] = ()    # grid only; L = prod(sides)

    def __post_init__(self):
        if self.kind not in ("fc", "line", "grid"):
            raise ValueError(f"unknown architecture kind {self.kind!r}")
        if self.kind == "grid":
            if not self.sides or any(s < 1 for s in self.sides):
                raise ValueError("grid needs per-axis sides >= 1")
        elif self.sides:
            raise ValueError("sides are only meaningful for grids")

    @classmethod
    def fully_connected(cls) -> "Architecture":
        return cls("fc")

    @classmethod
    def line(cls) -> "Architecture":
        return cls("line")

    @classmethod
    def grid(cls, *sides: int) -> "Architecture":
        return cls("grid", tuple(int(s) for s in sides))

    @property
    def dim(self) -> int:
        return len(self.sides) if self.kind == "grid" else 1

    @property
    def num_qubits(self) -> Optional[int]:
        return math.prod(self.sides) if self.kind == "grid" else None

    def label(self) -> str:
        if self.kind == "grid":
            return "grid" + "x".join(str(s) for s in self.sides)
        return self.kind

    def legal_swap(self, i: int, j: int, num_qubits: int) -> bool:
        if not (0 <= i < num_qubits and 0 <= j < num_qubits) or i == j:
            return False
        if self.kind == "fc":
            return True
        if self.kind == "line":
            return abs(i - j) == 1
        ci = np.unravel_index(i, self.sides)
        cj = np.unravel_index(j, self.sides)
        return sum(abs(a - b) for a, b in zip(ci, cj)) == 1


@dataclass(frozen=True)
class SwapSchedule:
    """Layered decomposition of a permutation into disjoint legal swaps."""

    num_qubits: int
    layers: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def num_swaps(self) -> int:
        return sum(len(layer) for layer in self.layers)

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    def as_permutation(self) -> Permutation:
        cur = np.arange(self.num_qubits)
        for layer in self.layers:
            lp = np.arange(self.num_qubits)
            for i, j in layer:
                lp[i], lp[j] = j, i
            cur = lp[cur]
        return Permutation(tuple(int(k) for k in cur))

    def check_legal(self, arch: Architecture) -> None:
        """Raise if any layer has overlapping qubits or an illegal edge."""
        for layer in self.layers:
            seen: set[int] = set()
            for i, j in layer:
                if i in seen or j in seen:
                    raise ValueError(f"overlapping swaps in layer {layer}")
                seen.update((i, j))
                if not arch.legal_swap(i, j, self.num_qubits):
                    raise ValueError(f"swap ({i},{j}) illegal on {arch.label()}")


@dataclass(frozen=True)
class NoiseParams:
    """Gate-noise strength alpha plus swap noise, given as omission
    probability p or pulse variance sigma^2 (then p is derived)."""

    alpha: float = 0.0
    p: float = 0.0
    sigma: Optional[float] = None

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if self.sigma is not None:
            if self.sigma < 0:
                raise ValueError("sigma must be nonnegative")
            derived = swap_omission_prob(self.sigma)
            if self.p and abs(self.p - derived) > 1e-12:
                raise ValueError(
                    f"inconsistent swap noise: p={self.p} but sigma={self.sigma} "
                    f"implies p={derived}")
            object.__setattr__(self, "p", derived)
        if not 0.0 <= self.p <= 0.5:
            raise ValueError(f"p must lie in [0, 1/2], got {self.p}")

    @property
    def pulse_mode(self) -> bool:
        """True when swap errors are applied as S^beta pulses."""
        return self.sigma is not None


@dataclass(frozen=True)
class RoutingStats:
    arch: str
    num_qubits: int
    samples: int
    mean_swaps: float
    var_swaps: float
    mean_layers: float
    max_layers: int


# ---------------------------------------------------------------- sampling

def sample_permutation(size: int, seed: Seed) -> Permutation:
    """Uniform permutation (Fisher-Yates via numpy)."""
    if size < 1:
        raise ValueError("permutation size must be >= 1")
    return Permutation(tuple(int(k) for k in seed.rng().permutation(size)))


def cycle_structure(perm: Permutation) -> list[tuple[int, ...]]:
    """Disjoint cycles covering all indices; fixed points are 1-cycles.

    Cycles start at their smallest element and are listed by that element.
    """
    seen = [False] * perm.size
    cycles = []
    for start in range(perm.size):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        nxt = perm.image[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = perm.image[nxt]
        cycles.append(tuple(cyc))
    return cycles


def cycle_count(perm: Permutation) -> int:
    return len(cycle_structure(perm))


# ---------------------------------------------------------------- decomposition

def decompose_fully_connected(perm: Permutation) -> SwapSchedule:
    """Two-layer decomposition: each k-cycle is a product of two reflections,
    using k-1 swaps total ((1,k-1),(2,k-2),... then (0,1),(2,k-1),(3,k-2),...)."""
    layer1: list[tuple[int, int]] = []
    layer2: list[tuple[int, int]] = []
    for cyc in cycle_structure(perm):
        k = len(cyc)
        if k == 1:
            continue
        for i in range(1, (k - 1) // 2 + 1):
            layer1.append((cyc[i], cyc[k - i]))
        layer2.append((cyc[0], cyc[1]))
        for i in range(2, k // 2 + 1):
            layer2.append((cyc[i], cyc[k + 1 - i]))
    layers = tuple(tuple(l) for l in (layer1, layer2) if l)
    return SwapSchedule(perm.size, layers)


def _odd_even_sort(keys: list, positions: list[int]) -> list[list[tuple[int, int]]]:
    """Odd-even transposition sort of `keys` (ascending), in place.

    Returns one entry per sweep, each a list of swapped (positions[i],
    positions[i+1]) pairs; entries for empty sweeps are included so parallel
    sub-sorts stay phase-aligned.  At most n sweeps are needed.
    """
    n = len(keys)
    layers: list[list[tuple[int, int]]] = []
    for phase in range(n):
        layer = []
        for i in range(phase % 2, n - 1, 2):
            if keys[i] > keys[i + 1]:
                keys[i], keys[i + 1] = keys[i + 1], keys[i]
                layer.append((positions[i], positions[i + 1]))
        layers.append(layer)
        if all(keys[i] <= keys[i + 1] for i in range(n - 1)):
            break
    if any(keys[i] > keys[i + 1] for i in range(n - 1)):
        raise AssertionError("odd-even sort exceeded its sweep bound")
    return layers


def decompose_line(perm: Permutation) -> SwapSchedule:
    """Odd-even (brick) sort: nearest-neighbour swaps only, swap count equal
    to the inversion number of the permutation, at most L sweeps."""
    keys = list(perm.image)
    layers = _odd_even_sort(keys, list(range(perm.size)))
    return SwapSchedule(perm.size, tuple(tuple(l) for l in layers if l))


# ----- grid routing: recursive column sort with markings

def _build_marking(local_dest: list[int], columns: int, rows: int) -> list[int]:
    """Marks in 0..rows-1 for an m x j rectangle arrangement.

    Position p sits in column p % m, row p // m and holds the element destined
    for rectangle position local_dest[p].  The returned marks satisfy: every
    column carries each mark once, and the elements destined for any one
    column carry each mark once.  Built inductively, one transposition at a
    time from the everyone-at-home arrangement, repairing the class property
    along an alternating chain of in-column mark swaps (columns stay valid
    throughout because marks only ever swap within a column).
    """
    m, j = columns, rows
    L = m * j
    arr = list(range(L))                 # arr[pos] = element (its destination id)
    mark = [p // m for p in range(L)]
    pos_of = list(range(L))
    col_mark_pos = [[c + m * r for r in range(j)] for c in range(m)]
    cls_positions = [{c + m * r for r in range(j)} for c in range(m)]  # class = dest % m

    def swap_marks(p: int, q: int) -> None:
        c = p % m
        mp, mq = mark[p], mark[q]
        mark[p], mark[q] = mq, mp
        col_mark_pos[c][mp], col_mark_pos[c][mq] = q, p

    def transpose(p1: int, p2: int) -> None:
        t1, t2 = arr[p1], arr[p2]
        arr[p1], arr[p2] = t2, t1
        pos_of[t1], pos_of[t2] = p2, p1
        x1, x2 = t1 % m, t2 % m
        if x1 != x2:     # same class keeps the same position set {p1, p2}
            cls_positions[x1].discard(p1); cls_positions[x1].add(p2)
            cls_positions[x2].discard(p2); cls_positions[x2].add(p1)
        mu1, mu2 = mark[p1], mark[p2]
        if p1 % m == p2 % m:
            swap_marks(p1, p2)           # marks travel with the two elements
            return
        if mu1 == mu2 or x1 == x2:
            return
        # class x1 now holds mu2 twice and mu1 not at all (x2 dually); walk the
        # alternating (mu1, mu2) chain, swapping marks within one column at a
        # time, until the flip lands in class x2.
        cur = p2
        for _ in range(L + 2):
            col = cur % m
            q = col_mark_pos[col][mu1]
            swap_marks(cur, q)
            y = arr[q] % m
            if y == x2:
                return
            nxt = [p for p in cls_positions[y] if mark[p] == mu2 and p != q]
            assert len(nxt) == 1, "marking invariant broken"
            cur = nxt[0]
        raise AssertionError("marking repair chain did not terminate")

    for p in range(L):
        if arr[p] != local_dest[p]:
            transpose(p, pos_of[local_dest[p]])
    assert arr == list(local_dest)
    return mark


def marking_is_valid(local_dest: Iterable[int], columns: int, rows: int,
                     mark: Iterable[int]) -> bool:
    """Check both marking properties (all marks per column and per
    destination-column class)."""
    ld = list(local_dest)
    mk = list(mark)
    want = list(range(rows))
    for c in range(columns):
        if sorted(mk[c + columns * r] for r in range(rows)) != want:
            return False
    for x in range(columns):
        if sorted(mk[p] for p in range(columns * rows) if ld[p] % columns == x) != want:
            return False
    return True


def build_marking(perm: Permutation, columns: int, rows: int) -> np.ndarray:
    """Marking table for a rectangle: entry at position p is the mark of the
    element placed there, where position p holds the element destined for
    position perm(p)."""
    if perm.size != columns * rows:
        raise ValueError(f"permutation size {perm.size} != {columns} x {rows}")
    mark = _build_marking(list(perm.image), columns, rows)
    if not marking_is_valid(perm.image, columns, rows, mark):
        raise AssertionError("constructed marking failed validation")
    return np.array(mark, dtype=np.int64)


def _merge_parallel(layer_lists: list[list[list[tuple[int, int]]]]) -> list[list[tuple[int, int]]]:
    """Merge phase-aligned layer lists of disjoint sub-problems."""
    out: list[list[tuple[int, int]]] = []
    for k in range(max((len(ls) for ls in layer_lists), default=0)):
        layer: list[tuple[int, int]] = []
        for ls in layer_lists:
            if k < len(ls):
                layer.extend(ls[k])
        out.append(layer)
    return out


def _route_grid(tok: list[int], sub: np.ndarray, key_mod: int) -> list[list[tuple[int, int]]]:
    """Sort tokens so the token with local destination x ends at local flat
    position x; sub maps local coordinates to global flat positions and the
    local destination of the token at global position g is tok[g] % key_mod."""
    if sub.ndim == 1:
        positions = [int(g) for g in sub]
        keys = [tok[g] % key_mod for g in positions]
        layers = _odd_even_sort(keys, list(range(len(positions))))
        out = []
        for layer in layers:
            glayer = []
            for i, jj in layer:
                a, b = positions[i], positions[jj]
                tok[a], tok[b] = tok[b], tok[a]
                glayer.append((a, b))
            out.append(glayer)
        return out

    n0 = sub.shape[0]
    m = sub.size // n0
    sub2 = sub.reshape(n0, m)
    rect = [int(sub2[r, c]) for r in range(n0) for c in range(m)]
    local_dest = [tok[g] % key_mod for g in rect]
    mark = _build_marking(local_dest, m, n0)
    assert marking_is_valid(local_dest, m, n0, mark)
    gmark = {g: mark[i] for i, g in enumerate(rect)}

    def sort_columns(key_of) -> list[list[tuple[int, int]]]:
        per_col = []
        for c in range(m):
            col = [int(sub2[r, c]) for r in range(n0)]
            layers = []
            keys = [key_of(g) for g in col]
            for phase_layer in _odd_even_sort(keys, list(range(n0))):
                glayer = []
                for i, jj in phase_layer:
                    a, b = col[i], col[jj]
                    tok[a], tok[b] = tok[b], tok[a]
                    gmark[a], gmark[b] = gmark[b], gmark[a]
                    glayer.append((a, b))
                layers.append(glayer)
            per_col.append(layers)
        return _merge_parallel(per_col)

    stage_a = sort_columns(lambda g: gmark[g])
    stage_b = _merge_parallel([_route_grid(tok, sub[r], m) for r in range(n0)])
    stage_c = sort_columns(lambda g: tok[g] % key_mod)
    return stage_a + stage_b + stage_c


def decompose_grid(perm: Permutation, arch: Architecture) -> SwapSchedule:
    """Recursive hypercube sort: mark, sort columns by mark, recurse on the
    (d-1)-dimensional strata, then a final in-column sort.  Nearest-neighbour
    grid swaps only; for equal sides the layer count is at most (2d-1)*side
    and the swap count below (d - 1/2) * L^(1+1/d)."""
    if arch.kind != "grid":
        raise ValueError("decompose_grid needs a grid architecture")
    L = math.prod(arch.sides)
    if perm.size != L:
        raise ValueError(f"permutation size {perm.size} != grid size {L}")
    tok = list(perm.image)
    layers = _route_grid(tok, np.arange(L).reshape(arch.sides), L)
    if tok != list(range(L)):
        raise AssertionError("grid routing failed to sort")
    return SwapSchedule(L, tuple(tuple(l) for l in layers if l))


def decompose(perm: Permutation, arch: Architecture) -> SwapSchedule:
    """Architecture dispatch for the three decomposers."""
    if arch.kind == "fc":
        return decompose_fully_connected(perm)
    if arch.kind == "line":
        return decompose_line(perm)
    return decompose_grid(perm, arch)


# ---------------------------------------------------------------- swap errors

def realize_faulty(schedule: SwapSchedule, p: float, seed_or_rng) -> Permutation:
    """Compose the schedule with each swap independently omitted with
    probability p; p = 0 reproduces the target exactly."""
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"p must lie in [0, 1/2], got {p}")
    rng = seed_or_rng.rng() if isinstance(seed_or_rng, Seed) else seed_or_rng
    L = schedule.num_qubits
    cur = np.arange(L)
    for layer in schedule.layers:
        lp = np.arange(L)
        if p == 0.0:
            for i, j in layer:
                lp[i], lp[j] = j, i
        else:
            coins = rng.random(len(layer))
            for (i, j), c in zip(layer, coins):
                if c >= p:
                    lp[i], lp[j] = j, i
        cur = lp[cur]
    return Permutation(tuple(int(k) for k in cur))


def pulse_swap_gate(beta: float) -> np.ndarray:
    """S^beta = P_S + exp(i*pi*beta) * P_A on two qubits."""
    e = np.exp(1j * np.pi * beta)
    g = np.eye(4, dtype=np.complex128)
    g[1, 1] = g[2, 2] = (1 + e) / 2
    g[1, 2] = g[2, 1] = (1 - e) / 2
    return g


def apply_faulty_schedule_beta(state: np.ndarray, schedule: SwapSchedule,
                               sigma: float, seed_or_rng) -> np.ndarray:
    """Apply the schedule with each swap as S^beta, beta ~ N(1, sigma^2)
    drawn independently per swap (layer order, then listed order)."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    rng = seed_or_rng.rng() if isinstance(seed_or_rng, Seed) else seed_or_rng
    for layer in schedule.layers:
        betas = rng.normal(1.0, sigma, size=len(layer)) if sigma > 0 else np.ones(len(layer))
        for (i, j), beta in zip(layer, betas):
            state = linalg.apply_two_qubit_gate(state, pulse_swap_gate(beta), i, j)
    return state


# ---------------------------------------------------------------- error factor

def error_factor_mc(num_qubits: int, arch: Architecture, p: float,
                    trials: int, seed: Seed) -> Estimate:
    """Monte Carlo of delta = <4^m>, m = cycle count (fixed points included)
    of realize_faulty(decompose(P, arch), p) o P^-1 over uniform P."""
    if trials < 1:
        raise ValueError("need at least one trial")
    vals = np.empty(trials)
    for t in range(trials):
        perm_rng = seed.child(t).with_stream(STREAM_CIRCUIT).rng()
        noise_rng = seed.child(t).with_stream(STREAM_PERM_NOISE).rng()
        perm = Permutation(tuple(int(k) for k in perm_rng.permutation(num_qubits)))
        sched = decompose(perm, arch)
        faulty = realize_faulty(sched, p, noise_rng)
        m = cycle_count(faulty.compose(perm.inverse()))
        vals[t] = 4.0 ** m
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return Estimate(mean=mean, stderr=stderr, n=trials, seed=seed)


@lru_cache(maxsize=None)
def _stirling_first_unsigned(n: int) -> tuple[int, ...]:
    """Row n of unsigned Stirling numbers of the first kind (exact integers)."""
    row = [1] + [0] * n
    for k in range(n):
        # row of size k -> k+1:  [n+1, c] = n*[n, c] + [n, c-1]
        new = [0] * (n + 1)
        for c in range(k + 1):
            if row[c]:
                new[c] += row[c] * k
                if c + 1 <= n:
                    new[c + 1] += row[c]
        row = new
    return tuple(row)


def error_factor_exact_fc(num_qubits: int, p: float) -> float:
    """Exact fully-connected error factor under independent swap omission:
    sum_c Stirling(L, c) 4^c (4 - 3p)^(L-c) / L!."""
    L = num_qubits
    if not 1 <= L <= 20:
        raise ValueError("exact Stirling evaluation supported for 1 <= L <= 20")
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"p must lie in [0, 1/2], got {p}")
    stirling = _stirling_first_unsigned(L)
    total = 0.0
    for c in range(1, L + 1):
        total += stirling[c] * 4.0**c * (4.0 - 3.0 * p) ** (L - c)
    return total / math.factorial(L)


# ---------------------------------------------------------------- statistics

def routing_stats(arch: Architecture, num_qubits: int, samples: int,
                  seed: Seed) -> RoutingStats:
    """Swap/layer statistics of the decomposer over uniform permutations."""
    if samples < 1:
        raise ValueError("need at least one sample")
    swaps = np.empty(samples)
    layers = np.empty(samples)
    for t in range(samples):
        rng = seed.child(t).with_stream(STREAM_CIRCUIT).rng()
        perm = Permutation(tuple(int(k) for k in rng.permutation(num_qubits)))
        sched = decompose(perm, arch)
        swaps[t] = sched.num_swaps
        layers[t] = sched.num_layers
    return RoutingStats(
        arch=arch.label(),
        num_qubits=num_qubits,
        samples=samples,
        mean_swaps=float(swaps.mean()),
        var_swaps=float(swaps.var(ddof=1)) if samples > 1 else 0.0,
        mean_layers=float(layers.mean()),
        max_layers=int(layers.max()),
    )
