"""Small finite groups as dense Cayley tables with 0-based element indexing.

Every group is an explicit multiplication table over element indices
``0..n-1`` with the identity pinned at index 0.  All builders route through
the same exhaustive axiom validation, so any ``Group`` instance can be
trusted by downstream code without re-checking.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from pathlib import Path
from typing import ClassVar, Sequence

import numpy as np

DEFAULT_SIZE_CAP = 200


class CapExceededError(ValueError):
    """Requested group order exceeds the configured size cap."""


class NotAGroupError(ValueError):
    """A multiplication table violates one of the group axioms."""


class DescriptorError(ValueError):
    """A group descriptor string is malformed."""


@dataclass(frozen=True, eq=False)
class Group:
    """Finite group of order ``order`` with elements ``0..order-1``.

    ``cayley[a, b]`` is the index of the product a*b and ``inverse[a]`` the
    index of a^-1.  The identity is always element 0.  Arrays are read-only
    and instances are immutable, so groups are safe to share across workers.
    """

    order: int
    cayley: np.ndarray
    inverse: np.ndarray
    labels: tuple[str, ...]
    origin: str

    identity: ClassVar[int] = 0

    def mul(self, a: int, b: int) -> int:
        return int(self.cayley[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = int(self.cayley[x, a])
            k += 1
        return k

    def __repr__(self) -> str:
        return f"Group({self.origin!r}, order={self.order})"


def _first_non_permutation(vec: np.ndarray, n: int) -> int:
    counts = np.bincount(vec, minlength=n)
    return int(np.argmax(counts != 1))


def _validate_table(cayley: np.ndarray) -> np.ndarray:
    """Exhaustively check the group axioms; return the inverse table."""
    if cayley.ndim != 2 or cayley.shape[0] != cayley.shape[1]:
        raise NotAGroupError(f"table must be square, got shape {cayley.shape}")
    n = cayley.shape[0]
    if n == 0:
        raise NotAGroupError("table is empty")
    bad = np.argwhere((cayley < 0) | (cayley >= n))
    if bad.size:
        a, b = (int(v) for v in bad[0])
        raise NotAGroupError(
            f"entry ({a},{b}) is {int(cayley[a, b])}, outside 0..{n - 1}"
        )
    ident = np.arange(n)
    for a in range(n):
        if not np.array_equal(np.sort(cayley[a]), ident):
            v = _first_non_permutation(cayley[a], n)
            raise NotAGroupError(f"row {a} is not a permutation (value {v})")
    for b in range(n):
        if not np.array_equal(np.sort(cayley[:, b]), ident):
            v = _first_non_permutation(cayley[:, b], n)
            raise NotAGroupError(f"column {b} is not a permutation (value {v})")
    if not np.array_equal(cayley[0], ident):
        a = int(np.argmax(cayley[0] != ident))
        raise NotAGroupError(f"identity law fails: 0*{a} = {int(cayley[0, a])}")
    if not np.array_equal(cayley[:, 0], ident):
        a = int(np.argmax(cayley[:, 0] != ident))
        raise NotAGroupError(f"identity law fails: {a}*0 = {int(cayley[a, 0])}")
    # Rows are permutations, so each element has a unique right inverse.
    inverse = np.argmax(cayley == 0, axis=1)
    for a in range(n):
        left = cayley[cayley[a]]          # [b, c] -> (a*b)*c
        right = cayley[a][cayley]         # [b, c] -> a*(b*c)
        if not np.array_equal(left, right):
            b, c = (int(v) for v in np.argwhere(left != right)[0])
            raise NotAGroupError(
                f"associativity fails at ({a},{b},{c}): "
                f"({a}*{b})*{c} = {int(left[b, c])} but "
                f"{a}*({b}*{c}) = {int(right[b, c])}"
            )
    return inverse


def _make_group(
    cayley: np.ndarray,
    labels: Sequence[str],
    origin: str,
    cap: int | None,
) -> Group:
    n = len(cayley)
    if cap is not None and n > cap:
        raise CapExceededError(f"order {n} exceeds size cap {cap} ({origin})")
    cayley = np.ascontiguousarray(np.asarray(cayley, dtype=np.int64))
    inverse = _validate_table(cayley)
    if len(labels) != n:
        raise ValueError(f"need {n} labels, got {len(labels)}")
    cayley.setflags(write=False)
    inverse.setflags(write=False)
    return Group(
        order=n,
        cayley=cayley,
        inverse=inverse,
        labels=tuple(labels),
        origin=origin,
    )


def build_cyclic(n: int, *, cap: int | None = DEFAULT_SIZE_CAP) -> Group:
    """Cyclic group of order n, written additively: i*j = (i+j) mod n."""
    if n < 1:
        raise ValueError(f"cyclic order must be positive, got {n}")
    if cap is not None and n > cap:
        raise CapExceededError(f"order {n} exceeds size cap {cap} (cyclic:{n})")
    table = np.add.outer(np.arange(n), np.arange(n)) % n
    labels = ["e"] + [f"g^{k}" if k > 1 else "g" for k in range(1, n)]
    return _make_group(table, labels, f"cyclic:{n}", cap)


def build_dihedral(n: int, *, cap: int | None = DEFAULT_SIZE_CAP) -> Group:
    """Dihedral group of order 2n.

    Indices 0..n-1 are the rotations r^k and n..2n-1 the reflections r^k s,
    with the relations r^n = s^2 = e and s r = r^-1 s.
    """
    if n < 1:
        raise ValueError(f"dihedral parameter must be positive, got {n}")
    if cap is not None and 2 * n > cap:
        raise CapExceededError(f"order {2 * n} exceeds size cap {cap} (dihedral:{n})")
    table = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            table[i, j] = (i + j) % n
            table[i, n + j] = n + (i + j) % n
            table[n + i, j] = n + (i - j) % n
            table[n + i, n + j] = (i - j) % n
    rot = ["e"] + [f"r^{k}" if k > 1 else "r" for k in range(1, n)]
    ref = ["s"] + [f"r^{k} s" if k > 1 else "r s" for k in range(1, n)]
    return _make_group(table, rot + ref, f"dihedral:{n}", cap)


def _cycle_label(perm: tuple[int, ...]) -> str:
    seen = [False] * len(perm)
    parts = []
    for i in range(len(perm)):
        if seen[i] or perm[i] == i:
            seen[i] = True
            continue
        cycle = [i]
        seen[i] = True
        j = perm[i]
        while j != i:
            cycle.append(j)
            seen[j] = True
            j = perm[j]
        parts.append("(" + " ".join(str(p) for p in cycle) + ")")
    return "".join(parts) if parts else "e"


def build_symmetric(n: int, *, cap: int | None = DEFAULT_SIZE_CAP) -> Group:
    """Symmetric group S_n on points 0..n-1, n <= 5.

    Permutations are enumerated in lexicographic order (identity first) and
    composed right-to-left: (sigma * tau)(x) = sigma(tau(x)).
    """
    if n < 1:
        raise ValueError(f"symmetric degree must be positive, got {n}")
    if n > 5:
        raise CapExceededError(f"symmetric groups are capped at degree 5, got {n}")
    perms = list(permutations(range(n)))
    if cap is not None and len(perms) > cap:
        raise CapExceededError(
            f"order {len(perms)} exceeds size cap {cap} (symmetric:{n})"
        )
    index = {p: i for i, p in enumerate(perms)}
    m = len(perms)
    table = np.zeros((m, m), dtype=np.int64)
    for i, sigma in enumerate(perms):
        for j, tau in enumerate(perms):
            table[i, j] = index[tuple(sigma[tau[x]] for x in range(n))]
    return _make_group(table, [_cycle_label(p) for p in perms], f"symmetric:{n}", cap)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def build_heisenberg(p: int, *, cap: int | None = DEFAULT_SIZE_CAP) -> Group:
    """Heisenberg group over Z_p: unitriangular 3x3 matrices, order p^3.

    Element (a,b,c) is encoded as index a*p^2 + b*p + c and multiplies as
    (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b') with arithmetic mod p.
    """
    if not _is_prime(p):
        raise ValueError(f"heisenberg parameter must be prime, got {p}")
    n = p**3
    if cap is not None and n > cap:
        raise CapExceededError(f"order {n} exceeds size cap {cap} (heisenberg:{p})")
    idx = np.arange(n)
    a, b, c = idx // p**2, (idx // p) % p, idx % p
    aa = (a[:, None] + a[None, :]) % p
    bb = (b[:, None] + b[None, :]) % p
    cc = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    table = aa * p**2 + bb * p + cc
    labels = [f"({a[i]},{b[i]},{c[i]})" for i in range(n)]
    return _make_group(table, labels, f"heisenberg:{p}", cap)


def build_product(a: Group, b: Group, *, cap: int | None = DEFAULT_SIZE_CAP) -> Group:
    """Direct product with element (i, j) encoded as index i*|b| + j."""
    n = a.order * b.order
    origin = f"product:{a.origin},{b.origin}"
    if cap is not None and n > cap:
        raise CapExceededError(f"order {n} exceeds size cap {cap} ({origin})")
    nb = b.order
    table = (a.cayley[:, None, :, None] * nb + b.cayley[None, :, None, :]).reshape(n, n)
    labels = [f"({la},{lb})" for la in a.labels for lb in b.labels]
    return _make_group(table, labels, origin, cap)


def from_cayley(
    table: Sequence[Sequence[int]] | np.ndarray,
    *,
    labels: Sequence[str] | None = None,
    origin: str | None = None,
    cap: int | None = DEFAULT_SIZE_CAP,
) -> Group:
    """Validate a user-supplied multiplication table and wrap it as a Group.

    The table must place the identity at index 0; all four group axioms are
    checked exhaustively and the first violation is reported with a witness.
    """
    arr = np.asarray(table, dtype=np.int64)
    n = arr.shape[0] if arr.ndim == 2 else len(table)
    if labels is None:
        labels = ["e"] + [f"g{i}" for i in range(1, n)]
    return _make_group(arr, labels, origin or f"cayley:{n}", cap)


_NUMERIC_KINDS = {
    "cyclic": build_cyclic,
    "dihedral": build_dihedral,
    "symmetric": build_symmetric,
    "heisenberg": build_heisenberg,
}


def _parse_int(text: str, pos: int, desc: str) -> tuple[int, int]:
    end = pos
    while end < len(text) and text[end].isdigit():
        end += 1
    if end == pos:
        raise DescriptorError(f"expected an integer at position {pos} in {desc!r}")
    return int(text[pos:end]), end


def _parse_one(text: str, pos: int, cap: int | None) -> tuple[Group, int]:
    colon = text.find(":", pos)
    if colon < 0:
        raise DescriptorError(f"missing ':' after kind in {text[pos:]!r}")
    kind = text[pos:colon]
    if kind in _NUMERIC_KINDS:
        value, end = _parse_int(text, colon + 1, text)
        return _NUMERIC_KINDS[kind](value, cap=cap), end
    if kind == "product":
        left, pos = _parse_one(text, colon + 1, cap)
        if pos >= len(text) or text[pos] != ",":
            raise DescriptorError(f"product needs two comma-separated parts in {text!r}")
        right, pos = _parse_one(text, pos + 1, cap)
        return build_product(left, right, cap=cap), pos
    if kind == "cayley":
        if colon + 1 >= len(text) or text[colon + 1] != "@":
            raise DescriptorError("cayley descriptor must be cayley:@file.json")
        end = text.find(",", colon + 2)
        end = len(text) if end < 0 else end
        path = text[colon + 2 : end]
        return _load_cayley_file(path, cap), end
    raise DescriptorError(
        f"unknown group kind {kind!r}; expected one of "
        "cyclic, dihedral, symmetric, heisenberg, product, cayley"
    )


def _load_cayley_file(path: str, cap: int | None) -> Group:
    try:
        payload = json.loads(Path(path).read_text())
    except OSError as exc:
        raise DescriptorError(f"cannot read Cayley file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"invalid JSON in Cayley file {path!r}: {exc}") from exc
    if not isinstance(payload, dict) or "order" not in payload or "table" not in payload:
        raise DescriptorError(f"Cayley file {path!r} needs keys 'order' and 'table'")
    table = payload["table"]
    if len(table) != payload["order"]:
        raise DescriptorError(
            f"Cayley file {path!r}: order {payload['order']} does not match "
            f"table size {len(table)}"
        )
    return from_cayley(table, origin=f"cayley:@{path}", cap=cap)


def parse_descriptor(desc: str, *, cap: int | None = DEFAULT_SIZE_CAP) -> Group:
    """Parse a group descriptor such as ``dihedral:4`` or ``product:cyclic:2,cyclic:3``.

    Supported kinds: ``cyclic:N``, ``dihedral:N``, ``symmetric:N``,
    ``heisenberg:P``, ``product:<desc>,<desc>``, ``cayley:@file.json``.
    """
    group, pos = _parse_one(desc, 0, cap)
    if pos != len(desc):
        raise DescriptorError(f"unexpected trailing text {desc[pos:]!r} in {desc!r}")
    return group


def parse_descriptor_list(text: str, *, cap: int | None = DEFAULT_SIZE_CAP) -> list[Group]:
    """Parse a comma-separated list of descriptors (commas inside products bind first)."""
    groups = []
    pos = 0
    while True:
        group, pos = _parse_one(text, pos, cap)
        groups.append(group)
        if pos == len(text):
            return groups
        if text[pos] != ",":
            raise DescriptorError(f"unexpected text {text[pos:]!r} in {text!r}")
        pos += 1


def _closure(group: Group, seed: set[int]) -> frozenset[int]:
    members = set(seed) | {0}
    frontier = list(members)
    while frontier:
        fresh = []
        for x in frontier:
            for y in list(members):
                for z in (group.mul(x, y), group.mul(y, x)):
                    if z not in members:
                        members.add(z)
                        fresh.append(z)
        frontier = fresh
    return frozenset(members)


def brute_force_isomorphism(a: Group, b: Group) -> list[int] | None:
    """Exhaustive search for an isomorphism a -> b; None if none exists.

    Backtracks over images of a small generating sequence, pruning by
    element order.  Meant for tiny groups (order up to a few dozen).
    """
    if a.order != b.order:
        return None
    n = a.order
    ord_a = [a.element_order(x) for x in range(n)]
    ord_b = [b.element_order(x) for x in range(n)]
    if sorted(ord_a) != sorted(ord_b):
        return None
    gens: list[int] = []
    closure = _closure(a, set())
    while len(closure) < n:
        x = min(set(range(n)) - closure)
        gens.append(x)
        closure = _closure(a, set(gens))

    def extend(images: list[int]) -> list[int] | None:
        phi = {0: 0}
        for g, img in zip(gens[: len(images)], images):
            if phi.get(g, img) != img:
                return None
            phi[g] = img
        frontier = list(phi.items())
        while frontier:
            fresh = []
            for x, u in frontier:
                for y, v in list(phi.items()):
                    for xy, uv in (
                        (a.mul(x, y), b.mul(u, v)),
                        (a.mul(y, x), b.mul(v, u)),
                    ):
                        known = phi.get(xy)
                        if known is None:
                            phi[xy] = uv
                            fresh.append((xy, uv))
                        elif known != uv:
                            return None
            frontier = fresh
        if len(phi) < len(gens[: len(images)]) + 1:
            return None
        return [phi[x] for x in range(n)] if len(phi) == n else None

    def search(images: list[int], used: set[int]) -> list[int] | None:
        if len(images) == len(gens):
            full = extend(images)
            if full is None or len(set(full)) != n:
                return None
            mapped = np.asarray(full)
            ok = np.array_equal(mapped[a.cayley], b.cayley[np.ix_(mapped, mapped)])
            return full if ok else None
        g = gens[len(images)]
        for cand in range(n):
            if cand in used or ord_b[cand] != ord_a[g]:
                continue
            # Partial consistency: extending may already reveal a clash.
            result = search(images + [cand], used | {cand})
            if result is not None:
                return result
        return None

    if not gens:
        return list(range(n))
    return search([], set())
