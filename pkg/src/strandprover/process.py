"""Domain-level strand processes and their binding, unbinding, and migration rules.

A process is a multiset of strands; a strand is an ordered list of domain
occurrences, position 1 being the 5' end.  Bonds pair exactly two complementary
occurrences and are named; rules rewrite bonds in place, directed by explicit
locators rather than pattern search.  A locator is a (strand number, position)
pair, both 1-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from itertools import permutations, product
from typing import Callable, Iterable, Iterator, Sequence

Locator = tuple[int, int]


class ProcessError(ValueError):
    """Malformed process text or broken bond pairing."""


class RuleError(ValueError):
    """A reduction rule was applied where its premises do not hold."""


@dataclass(frozen=True)
class Domain:
    """One domain occurrence on a strand; bond is None when free.

    The toehold flag is a property of the name: well-formed processes never
    mix toehold and long occurrences of the same name.
    """

    name: str
    complemented: bool = False
    toehold: bool = False
    bond: str | None = None

    def complement(self) -> "Domain":
        """The occurrence this one can pair with: star toggled, bond cleared."""
        return Domain(self.name, not self.complemented, self.toehold)

    def matches(self, other: "Domain") -> bool:
        """True when self and other are complementary and could bond."""
        return (
            self.name == other.name
            and self.toehold == other.toehold
            and self.complemented != other.complemented
        )

    def free(self) -> "Domain":
        return replace(self, bond=None)

    def bound(self, bond: str) -> "Domain":
        return replace(self, bond=bond)

    def __str__(self) -> str:
        return format_domain(self)


_DOMAIN_TOKEN_RE = re.compile(
    r"(?P<name>[A-Za-z][A-Za-z0-9_]*)(?P<toehold>\^?)(?P<star>\*?)(?:!(?P<bond>[A-Za-z0-9_]+))?$"
)


def format_domain(d: Domain) -> str:
    text = d.name
    if d.toehold:
        text += "^"
    if d.complemented:
        text += "*"
    if d.bond is not None:
        text += f"!{d.bond}"
    return text


def parse_domain(token: str) -> Domain:
    m = _DOMAIN_TOKEN_RE.fullmatch(token)
    if m is None:
        raise ProcessError(f"bad domain token {token!r}")
    return Domain(m["name"], complemented=bool(m["star"]), toehold=bool(m["toehold"]), bond=m["bond"])


@dataclass(frozen=True)
class Strand:
    domains: tuple[Domain, ...]

    def __post_init__(self):
        if not self.domains:
            raise ProcessError("a strand needs at least one domain")

    def __len__(self) -> int:
        return len(self.domains)

    def at(self, position: int) -> Domain:
        if not 1 <= position <= len(self.domains):
            raise ProcessError(f"position {position} outside strand of length {len(self.domains)}")
        return self.domains[position - 1]

    def __str__(self) -> str:
        return "<" + " ".join(format_domain(d) for d in self.domains) + ">"


@dataclass(frozen=True)
class Process:
    strands: tuple[Strand, ...]

    def __post_init__(self):
        ends: dict[str, list[Locator]] = {}
        toehold_flag: dict[str, bool] = {}
        for loc, d in self.occurrences():
            if d.name in toehold_flag and toehold_flag[d.name] != d.toehold:
                raise ProcessError(f"domain name {d.name!r} is used both as toehold and long")
            toehold_flag[d.name] = d.toehold
            if d.bond is not None:
                ends.setdefault(d.bond, []).append(loc)
        for bond, locs in ends.items():
            if len(locs) != 2:
                raise ProcessError(f"bond {bond!r} occurs {len(locs)} time(s), expected 2")
            if not self.domain_at(locs[0]).matches(self.domain_at(locs[1])):
                raise ProcessError(f"bond {bond!r} joins non-complementary occurrences")

    def occurrences(self) -> Iterator[tuple[Locator, Domain]]:
        for s, strand in enumerate(self.strands, start=1):
            for n, d in enumerate(strand.domains, start=1):
                yield (s, n), d

    def domain_at(self, loc: Locator) -> Domain:
        s, n = loc
        if not 1 <= s <= len(self.strands):
            raise ProcessError(f"no strand {s}")
        return self.strands[s - 1].at(n)

    def bonds(self) -> tuple[str, ...]:
        """Bond names in first-use order, scanning strands 5' to 3'."""
        seen: list[str] = []
        for _, d in self.occurrences():
            if d.bond is not None and d.bond not in seen:
                seen.append(d.bond)
        return tuple(seen)

    def bond_ends(self, bond: str) -> tuple[Locator, Locator]:
        locs = [loc for loc, d in self.occurrences() if d.bond == bond]
        if len(locs) != 2:
            raise RuleError(f"no bond named {bond!r}")
        return locs[0], locs[1]

    def __str__(self) -> str:
        return " | ".join(str(s) for s in self.strands)


def parse_process(text: str) -> Process:
    """Parse '<a^!x b*> | <...>' notation; angle quotes are accepted too."""
    normalized = text.replace("⟨", "<").replace("⟩", ">").strip()
    if not normalized:
        raise ProcessError("empty process text")
    strands = []
    for part in normalized.split("|"):
        part = part.strip()
        if not (part.startswith("<") and part.endswith(">")):
            raise ProcessError(f"strand {part!r} is not delimited by < and >")
        tokens = part[1:-1].split()
        if not tokens:
            raise ProcessError("empty strand")
        strands.append(Strand(tuple(parse_domain(tok) for tok in tokens)))
    return Process(tuple(strands))


# --- structural congruence ---------------------------------------------------


def canonical_text(p: Process) -> str:
    """Printer with bonds renamed 1, 2, ... in first-use order.

    Strand order is kept as stored; parsing the result gives a process
    alpha-equivalent to p.
    """
    mapping: dict[str, str] = {}
    out_strands = []
    for strand in p.strands:
        toks = []
        for d in strand.domains:
            if d.bond is None:
                toks.append(format_domain(d))
            else:
                if d.bond not in mapping:
                    mapping[d.bond] = str(len(mapping) + 1)
                toks.append(format_domain(replace(d, bond=mapping[d.bond])))
        out_strands.append("<" + " ".join(toks) + ">")
    return " | ".join(out_strands)


_MAX_CANON_PERMUTATIONS = 40_320  # 8!


def _blind_signature(strand: Strand):
    return tuple((d.name, d.complemented, d.toehold, d.bond is not None) for d in strand.domains)


def _serialize(p: Process, order: Sequence[int]):
    mapping: dict[str, int] = {}
    out = []
    for idx in order:
        row = []
        for d in p.strands[idx].domains:
            if d.bond is None:
                row.append((d.name, d.complemented, d.toehold, None))
            else:
                if d.bond not in mapping:
                    mapping[d.bond] = len(mapping) + 1
                row.append((d.name, d.complemented, d.toehold, mapping[d.bond]))
        out.append(tuple(row))
    return tuple(out)


def canonical_key(p: Process):
    """A value equal for exactly the processes that differ only by strand
    order and bond names.  Strands with identical shapes are disambiguated by
    trying their permutations, so heavily repetitive processes are rejected."""
    indices = sorted(range(len(p.strands)), key=lambda i: _blind_signature(p.strands[i]))
    groups: list[list[int]] = []
    for i in indices:
        if groups and _blind_signature(p.strands[groups[-1][-1]]) == _blind_signature(p.strands[i]):
            groups[-1].append(i)
        else:
            groups.append([i])
    total = 1
    for g in groups:
        for k in range(2, len(g) + 1):
            total *= k
        if total > _MAX_CANON_PERMUTATIONS:
            raise ProcessError("too many interchangeable strands to canonicalize")
    best = None
    for perm_groups in product(*(permutations(g) for g in groups)):
        order = [i for g in perm_groups for i in g]
        serial = _serialize(p, order)
        if best is None or serial < best:
            best = serial
    return best


def alpha_equal(p: Process, q: Process) -> bool:
    """Equality up to strand reordering and bond renaming."""
    return canonical_key(p) == canonical_key(q)


# --- geometry ----------------------------------------------------------------


def antiparallel_adjacent(ends1: tuple[Locator, Locator], ends2: tuple[Locator, Locator]) -> bool:
    """True when two bonds (or edges) sit on the same strand pair with both
    positions offset by one in antiparallel alignment: +1 on one strand pairs
    with -1 on the other.  Bonds closing a loop within a single strand use the
    same test with both pairings of their endpoints."""
    (v1, n1), (v2, n2) = ends1
    (w1, m1), (w2, m2) = ends2
    if sorted((v1, v2)) != sorted((w1, w2)):
        return False
    if v1 == v2:
        pairings = [((n1, m1), (n2, m2)), ((n1, m2), (n2, m1))]
    elif (v1, v2) == (w1, w2):
        pairings = [((n1, m1), (n2, m2))]
    else:
        pairings = [((n1, m2), (n2, m1))]
    for (a, b), (c, d) in pairings:
        if (b == a + 1 and d == c - 1) or (b == a - 1 and d == c + 1):
            return True
    return False


def adjacent_bonds(p: Process, bond: str) -> set[str]:
    """Bonds lying immediately next to the given one in antiparallel alignment."""
    own = p.bond_ends(bond)
    return {
        other
        for other in p.bonds()
        if other != bond and antiparallel_adjacent(own, p.bond_ends(other))
    }


def is_anchored(p: Process, bond: str) -> bool:
    """A bond is anchored when at least one adjacent bond holds it in place."""
    return bool(adjacent_bonds(p, bond))


def is_hidden(p: Process, bond: str) -> bool:
    """Conservative default structural check: nothing is ever hidden.

    Rule functions accept a hidden predicate so a stricter notion (say, one
    that accounts for loop geometry) can be plugged in without touching them.
    """
    return False


HiddenPredicate = Callable[[Process, str], bool]


# --- reduction rules ---------------------------------------------------------


def fresh_bond(p: Process) -> str:
    """Smallest unused name of the shape b1, b2, ..."""
    used = set(p.bonds())
    k = 1
    while f"b{k}" in used:
        k += 1
    return f"b{k}"


def _rebind(p: Process, changes: dict[Locator, str | None]) -> Process:
    strands = []
    for s, strand in enumerate(p.strands, start=1):
        domains = list(strand.domains)
        for n in range(1, len(domains) + 1):
            if (s, n) in changes:
                domains[n - 1] = replace(domains[n - 1], bond=changes[(s, n)])
        strands.append(Strand(tuple(domains)))
    return Process(tuple(strands))


def bind(p: Process, a: Locator, b: Locator, hidden: HiddenPredicate | None = None) -> Process:
    """Form a new bond between two free complementary occurrences."""
    da, db = p.domain_at(a), p.domain_at(b)
    if a == b:
        raise RuleError("cannot bind an occurrence to itself")
    if da.bond is not None or db.bond is not None:
        raise RuleError("bind needs two free occurrences")
    if not da.matches(db):
        raise RuleError(f"{format_domain(da)} and {format_domain(db)} are not complementary")
    name = fresh_bond(p)
    q = _rebind(p, {a: name, b: name})
    if (hidden or is_hidden)(q, name):
        raise RuleError("the new bond would be hidden")
    return q


def unbind(p: Process, bond: str) -> Process:
    """Dissolve a toehold bond that no adjacent bond anchors."""
    e1, e2 = p.bond_ends(bond)
    if not p.domain_at(e1).toehold:
        raise RuleError(f"bond {bond!r} is not on a toehold; long bonds only migrate")
    if is_anchored(p, bond):
        raise RuleError(f"bond {bond!r} is anchored and cannot unbind")
    return _rebind(p, {e1: None, e2: None})


def displace(p: Process, invader: Locator, bond: str) -> Process:
    """Let a free occurrence take over a bond from an identical occurrence.

    The bond end matching the invader (same name and flags) is set free; the
    opposite end is re-bonded to the invader under a fresh name.  The migrated
    bond must be anchored in the result, otherwise the step is rejected.
    """
    d = p.domain_at(invader)
    if d.bond is not None:
        raise RuleError("the displacing occurrence must be free")
    e1, e2 = p.bond_ends(bond)
    same = [loc for loc in (e1, e2) if p.domain_at(loc).free() == d.free()]
    if not same:
        raise RuleError(f"bond {bond!r} has no end matching {format_domain(d)}")
    lost = same[0]
    kept = e2 if lost == e1 else e1
    name = fresh_bond(p)
    q = _rebind(p, {lost: None, invader: name, kept: name})
    if not is_anchored(q, name):
        raise RuleError("a displaced bond must be anchored in the result")
    return q


def migrate_ring(p: Process, ring: Sequence[str]) -> Process:
    """Rotate the bonds of a closed migration ring one position.

    All ring bonds must share one domain name; the plain side of ring[k] is
    re-paired with the starred side of ring[k+1], cyclically, and every
    rotated bond must be anchored in the result.  Bond count is unchanged.
    """
    if len(ring) < 2:
        raise RuleError("a migration ring needs at least two bonds")
    if len(set(ring)) != len(ring):
        raise RuleError("duplicate bond in migration ring")
    plain: list[Locator] = []
    starred: list[Locator] = []
    names = set()
    for bond in ring:
        e1, e2 = p.bond_ends(bond)
        if p.domain_at(e1).complemented:
            e1, e2 = e2, e1
        plain.append(e1)
        starred.append(e2)
        names.add(p.domain_at(e1).name)
    if len(names) != 1:
        raise RuleError("migration ring bonds must share a single domain name")
    changes: dict[Locator, str | None] = {}
    n = len(ring)
    for k in range(n):
        changes[starred[(k + 1) % n]] = ring[k]
    q = _rebind(p, changes)
    for bond in ring:
        if not is_anchored(q, bond):
            raise RuleError(f"bond {bond!r} is not anchored after migration")
    return q
