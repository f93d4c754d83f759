"""Dirichlet characters mod q as exponent vectors on cyclic generators.

(Z/q)^x is decomposed into cyclic components: one component per odd prime
power factor (generated by a lifted primitive root) and, for the 2-part,
nothing for 2^1, the single class of 3 for 2^2, and the pair {-1, 5} for
2^k with k >= 3. A character is the tuple of its exponents against these
generators; values are exact roots of unity exp(2*pi*i*t/L) with the integer
t computed in exact arithmetic and converted to complex only at the last
step. Conductor, order and parity all come from the exponent tuple alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np


@dataclass(frozen=True)
class Component:
    generator: int   # lifted generator, acts as identity on the other factors
    order: int
    prime: int
    prime_exp: int   # the k of the p^k factor this component belongs to
    kind: str        # "odd", "two", "two_minus_one", "two_five"


class CharacterGroup:
    """Structure of (Z/q)^x plus discrete-log tables for fast evaluation."""

    def __init__(self, modulus: int) -> None:
        if modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {modulus}")
        self.modulus = modulus
        self.components = _components(modulus)
        self.orders = tuple(c.order for c in self.components)
        self.phi = 1
        for d in self.orders:
            self.phi *= d
        self.exponent = reduce(math.lcm, self.orders, 1)

        # unit_grid[e1, ..., er] = prod g_i^{e_i} mod q, row major so the last
        # component varies fastest; dlog inverts it on unit residues.
        grid = np.array([1 if modulus > 1 else 0], dtype=np.int64)
        for comp in self.components:
            powers = np.empty(comp.order, dtype=np.int64)
            acc = 1
            for j in range(comp.order):
                powers[j] = acc
                acc = (acc * comp.generator) % modulus
            grid = (grid[:, None] * powers[None, :]) % modulus
            grid = grid.reshape(-1)
        self.unit_grid = grid.reshape(self.orders or (1,))

        dlog = np.full(modulus if modulus > 1 else 1, -1, dtype=np.int64)
        dlog[self.unit_grid.reshape(-1)] = np.arange(self.phi)
        self.dlog = dlog

        if self.orders:
            self.exp_vectors = (
                np.indices(self.orders).reshape(len(self.orders), -1).T.copy()
            )
        else:
            self.exp_vectors = np.zeros((1, 0), dtype=np.int64)

        self.root_table = np.exp(
            2j * np.pi * np.arange(self.exponent) / self.exponent
        )

        if modulus > 2:
            self.minus_one_exponents = tuple(
                int(v) for v in self.exp_vectors[self.dlog[modulus - 1]]
            )
        else:
            self.minus_one_exponents = tuple(0 for _ in self.orders)


class DirichletCharacter:
    """One character, identified by (modulus, exponent tuple)."""

    def __init__(self, group: CharacterGroup, exponents: tuple[int, ...]) -> None:
        if len(exponents) != len(group.orders):
            raise ValueError("exponent tuple does not match group components")
        for k, d in zip(exponents, group.orders):
            if not 0 <= k < d:
                raise ValueError(f"exponent {k} out of range for order {d}")
        self.group = group
        self.modulus = group.modulus
        self.exponents = tuple(int(k) for k in exponents)
        self.order = reduce(
            math.lcm,
            (d // math.gcd(d, k) for k, d in zip(self.exponents, group.orders)),
            1,
        )
        self.conductor = _conductor(group, self.exponents)
        self.parity = self._parity()
        # integer weights: chi(unit with dlog e) = root_table[sum w_i e_i mod L]
        L = group.exponent
        self._weights = np.array(
            [k * (L // d) for k, d in zip(self.exponents, group.orders)],
            dtype=np.int64,
        )
        self._values: np.ndarray | None = None

    @property
    def is_principal(self) -> bool:
        return all(k == 0 for k in self.exponents)

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def _parity(self) -> int:
        L = self.group.exponent
        t = 0
        for k, e, d in zip(
            self.exponents, self.group.minus_one_exponents, self.group.orders
        ):
            t = (t + k * e * (L // d)) % L
        return 1 if t == 0 else -1

    def evaluate(self, n: int) -> complex:
        if self.modulus == 1:
            return 1 + 0j
        r = n % self.modulus
        rank = int(self.group.dlog[r])
        if rank < 0:
            return 0j
        L = self.group.exponent
        t = int(self.group.exp_vectors[rank] @ self._weights) % L
        return complex(self.group.root_table[t])

    def value_table(self) -> np.ndarray:
        """chi(r) for r = 0..q-1 as one complex array (zeros off the units)."""
        if self._values is None:
            if self.modulus == 1:
                vals = np.ones(1, dtype=np.complex128)
            else:
                vals = np.zeros(self.modulus, dtype=np.complex128)
                t = (self.group.exp_vectors @ self._weights) % self.group.exponent
                vals[self.group.unit_grid.reshape(-1)] = self.group.root_table[t]
            vals.flags.writeable = False
            self._values = vals
        return self._values

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DirichletCharacter)
            and self.modulus == other.modulus
            and self.exponents == other.exponents
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.exponents))

    def __repr__(self) -> str:
        return f"DirichletCharacter(mod {self.modulus}, exponents {self.exponents})"


def build_group(modulus: int) -> CharacterGroup:
    return CharacterGroup(modulus)


def enumerate_characters(group: CharacterGroup) -> list[DirichletCharacter]:
    """All phi(q) characters, deterministic mixed-radix order."""
    return [
        DirichletCharacter(group, tuple(int(v) for v in ks))
        for ks in np.ndindex(*group.orders)
    ]


def principal_character(group: CharacterGroup) -> DirichletCharacter:
    return DirichletCharacter(group, tuple(0 for _ in group.orders))


def primitive_characters(group: CharacterGroup) -> list[DirichletCharacter]:
    return [c for c in enumerate_characters(group) if c.is_primitive]


def _factorize(n: int) -> list[tuple[int, int]]:
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def _primitive_root(p: int, k: int) -> int:
    """Smallest primitive root mod p, adjusted to generate mod p^k."""
    fac = [r for r, _ in _factorize(p - 1)]
    g = 2
    while True:
        if all(pow(g, (p - 1) // r, p) != 1 for r in fac):
            break
        g += 1
    if k >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _crt_lift(residue: int, level: int, modulus: int) -> int:
    """x = residue mod level, x = 1 mod modulus/level."""
    other = modulus // level
    if other == 1:
        return residue % modulus
    inv_other = pow(other, -1, level)
    inv_level = pow(level, -1, other)
    return (residue * other * inv_other + level * inv_level) % modulus


def _components(modulus: int) -> tuple[Component, ...]:
    comps: list[Component] = []
    for p, k in _factorize(modulus):
        level = p**k
        if p == 2:
            if k == 1:
                continue
            if k == 2:
                comps.append(Component(
                    _crt_lift(3, level, modulus), 2, 2, k, "two"))
            else:
                comps.append(Component(
                    _crt_lift(level - 1, level, modulus), 2, 2, k,
                    "two_minus_one"))
                comps.append(Component(
                    _crt_lift(5, level, modulus), 2 ** (k - 2), 2, k,
                    "two_five"))
        else:
            g = _primitive_root(p, k)
            comps.append(Component(
                _crt_lift(g, level, modulus), level // p * (p - 1), p, k,
                "odd"))
    return tuple(comps)


def conductor_grid(group: CharacterGroup) -> np.ndarray:
    """Conductors of all characters at once, shaped like the exponent grid.

    Entry [k1, ..., kr] is the conductor of the character with that exponent
    tuple; agrees with DirichletCharacter.conductor pointwise.
    """
    shape = group.orders or (1,)
    cond = np.ones(shape, dtype=np.int64)
    if not group.components:
        return cond
    idx = np.indices(group.orders, dtype=np.int64)
    comps = group.components
    i = 0
    while i < len(comps):
        comp = comps[i]
        k = idx[i]
        if comp.kind == "odd":
            p = comp.prime
            o = comp.order // np.gcd(k, comp.order)
            t = o.copy()
            j = np.zeros(shape, dtype=np.int64)
            while True:
                m = t % p == 0
                if not m.any():
                    break
                t[m] //= p
                j[m] += 1
            cond *= np.where(o > 1, p ** (j + 1), 1)
            i += 1
        elif comp.kind == "two":
            cond *= np.where(k % 2 == 1, 4, 1)
            i += 1
        else:
            k5 = idx[i + 1]
            d5 = comps[i + 1].order
            o5 = d5 // np.gcd(k5, d5)
            m2 = np.zeros(shape, dtype=np.int64)
            t = o5.copy()
            while True:
                m = t > 1
                if not m.any():
                    break
                t[m] //= 2
                m2[m] += 1
            cond *= np.where(o5 > 1, 2 ** (m2 + 2), np.where(k % 2 == 1, 4, 1))
            i += 2
    return cond


def _conductor(group: CharacterGroup, exponents: tuple[int, ...]) -> int:
    """Smallest modulus the character factors through, built per component."""
    cond = 1
    i = 0
    comps = group.components
    while i < len(comps):
        comp = comps[i]
        k = exponents[i]
        if comp.kind == "odd":
            o = comp.order // math.gcd(comp.order, k)
            if o > 1:
                j = 0
                while o % comp.prime == 0:
                    o //= comp.prime
                    j += 1
                cond *= comp.prime ** (j + 1)
            i += 1
        elif comp.kind == "two":
            if k % 2 == 1:
                cond *= 4
            i += 1
        else:
            # two_minus_one followed by two_five; conductor of the 2-part is
            # decided by the order of the 5-exponent, else by the sign part.
            k5 = exponents[i + 1]
            d5 = comps[i + 1].order
            o5 = d5 // math.gcd(d5, k5)
            if o5 > 1:
                m = o5.bit_length() - 1  # o5 is a power of two
                cond *= 2 ** (m + 2)
            elif k % 2 == 1:
                cond *= 4
            i += 2
    return cond
