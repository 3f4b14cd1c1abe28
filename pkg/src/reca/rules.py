"""Elementary CA rules: Wolfram numbering, lookup tables, and rule algebra."""

from __future__ import annotations

from dataclasses import dataclass

NUM_RULES = 256


@dataclass(frozen=True)
class Rule:
    """An elementary cellular automaton update rule.

    ``table[k]`` is the next state of a cell whose neighborhood
    ``(left, center, right)``, read as a 3-bit number, equals ``k``.
    Reading ``table[7] .. table[0]`` as a binary string gives ``number``
    (Wolfram convention: the 111 neighborhood is the most significant bit).
    """

    number: int
    table: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.number < NUM_RULES:
            raise ValueError(f"rule number must be in [0, 255], got {self.number}")
        if len(self.table) != 8 or any(b not in (0, 1) for b in self.table):
            raise ValueError("rule table must be 8 binary entries")
        if sum(bit << k for k, bit in enumerate(self.table)) != self.number:
            raise ValueError(
                f"table does not encode rule number {self.number} "
                "under the Wolfram convention"
            )

    def __call__(self, left: int, center: int, right: int) -> int:
        """Apply the rule to one neighborhood."""
        return self.table[(left << 2) | (center << 1) | right]

    def __str__(self) -> str:
        return f"rule {self.number}"


def rule_from_number(n: int) -> Rule:
    """Build the rule with Wolfram number ``n`` (0..255)."""
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"rule number must be an integer, got {n!r}")
    if not 0 <= n < NUM_RULES:
        raise ValueError(f"rule number must be in [0, 255], got {n}")
    return Rule(n, tuple((n >> k) & 1 for k in range(8)))


def complement_rule(z: Rule) -> Rule:
    """Return the rule Z' with Z'(a, b, c) = NOT Z(NOT a, NOT b, NOT c).

    Complementing is an involution; e.g. rule 90 maps to rule 165.
    """
    table = tuple(1 - z.table[7 ^ k] for k in range(8))
    return Rule(sum(bit << k for k, bit in enumerate(table)), table)


def mirror_rule(z: Rule) -> Rule:
    """Return the left-right reflected rule Z' with Z'(a, b, c) = Z(c, b, a)."""
    table = tuple(z.table[((k & 1) << 2) | (k & 2) | (k >> 2)] for k in range(8))
    return Rule(sum(bit << k for k, bit in enumerate(table)), table)
