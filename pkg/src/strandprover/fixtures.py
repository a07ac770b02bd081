"""Built-in example systems shared by the command line and the test-suite."""

from __future__ import annotations

from .graph import StrandGraph, from_process
from .logic import ClauseSet
from .process import Process, parse_process

# Six clauses whose refutation takes every input clause: the running example
# for both engines.
CLAUSES_S = """\
P ~Q R
~U V ~R
Q
~V
~P
U
"""

# A hairpin opened by a two-strand invader cascade: toehold binding, then
# three displacement steps.
HAIRPIN = "<t^ p> | <r* q* p*> | <p!y1 q!z1 r q*!z1 p*!y1 t^*>"

# Four strands holding a four-way junction closed; binding the two free
# toeholds enables the double migration that swaps the middle edges.
FOURWAY = "<a^!i b!j1 c^*> | <d^* b*!j1 a^*!i> | <c^ b*!j2 e^!k> | <e^*!k b!j2 d^>"

# The compiled image of CLAUSES_S: one strand per clause, no toeholds.
THEOREM = "<P Q* R> | <U* V R*> | <Q> | <V*> | <P*> | <U>"


def clause_set_s() -> ClauseSet:
    return ClauseSet.parse(CLAUSES_S)


def hairpin() -> Process:
    return parse_process(HAIRPIN)


def fourway() -> Process:
    return parse_process(FOURWAY)


def theorem_process() -> Process:
    return parse_process(THEOREM)


def theorem_graph() -> StrandGraph:
    return from_process(theorem_process())


# fixture name -> (kind, loader); kind is "clauses" or "process"
FIXTURES = {
    "S": ("clauses", clause_set_s),
    "hairpin": ("process", hairpin),
    "fourway": ("process", fourway),
    "theorem": ("process", theorem_process),
}
