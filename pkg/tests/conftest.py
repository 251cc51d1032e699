"""Pytest fixtures for asrefine tests."""

import os
import sys

import pytest

# Add src directory to path for imports
_project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(_project_root, "src"))

from asrefine.fixtures import cas_source  # noqa: E402
from asrefine.model import Model  # noqa: E402
from asrefine.mutation import enumerate_mutants  # noqa: E402
from asrefine.parser import parse_model  # noqa: E402


def planted_source(depth: int, flag: int, top: int = 3) -> str:
    """Counter that reaches ``depth`` after that many 'inc' steps.

    'mark' is enabled only at ``c == depth`` and sets ``flag``; an original
    with flag 0 and a mutant with flag 1 differ only there.
    """
    return f"""\
type(small, X) :- X in 0..{top}.
type(bit, X) :- X in 0..1.
var([c], small).
var([flag], bit).
state_def([c, flag]).
init([0, 0]).
as :-
    actions(
        'inc'::(c #< {top}) => (c := c + 1),
        'mark'::(true) => ((c #= {depth}) => (flag := {flag}))
    ),
    dood('inc' [] 'mark').
"""


ARITH_SOURCE = """\
% Parameters, arithmetic and sequential composition
type(val, X) :- X in 0..5.
type(arg, X) :- X in 0..3.
var([x, y], val).
state_def([x, y]).
init([0, 0]).
as :-
    actions(
        'add'(N)::(x + N #=< 5) => (x := x + N; y := x),
        'swap'::(x #\\= y) => ((x #> y) => (x := y; y := x) [] (x #< y) => (y := 0)),
        'mul'::(true) => (y := x * 2)
    ),
    dood([N:arg]:'add'(N) [] 'swap' [] 'mul').
"""

SIGNED_SOURCE = """\
% Negative ranges, negation, disjunction and a disabled action
type(sgn, X) :- X in -2..2.
var([p], sgn).
var([q], sgn).
state_def([p, q]).
init([0, 0]).
as :-
    actions(
        'up'::(\\+ (p #= 2) \\/ q #< 0) => ((p #< 2) => (p := p + 1) [] (p #= 2) => (q := q - 1)),
        'down'(D)::(p - D #>= -2 /\\ D #\\= 0) => (p := p - D),
        'idle'::(false) => (q := 0)
    ),
    dood('up' [] [D:sgn]:'down'(D) [] 'idle').
"""

NESTED_CHOICE_SOURCE = """\
type(t, X) :- X in 0..3.
var([a, b], t).
state_def([a, b]).
init([0, 0]).
as :-
    actions(
        'bad'::(true) => ((a := 1 [] a := 2); b := a)
    ),
    dood('bad').
"""


@pytest.fixture(scope="session")
def cas_text() -> str:
    """Car alarm system source at scale 1."""
    return cas_source()


@pytest.fixture(scope="session")
def cas(cas_text) -> Model:
    """Parsed car alarm system."""
    return parse_model(cas_text)


@pytest.fixture(scope="session")
def cas_mutants(cas):
    """Every first-order mutant of the car alarm system, ids from 1."""
    return enumerate_mutants(cas)


@pytest.fixture(scope="session")
def lock_mutant(cas_mutants):
    """Mutant 5: the second 'Lock' branch guard replaced by true."""
    return cas_mutants[4]


@pytest.fixture
def arith_model() -> Model:
    return parse_model(ARITH_SOURCE)


@pytest.fixture
def signed_model() -> Model:
    return parse_model(SIGNED_SOURCE)


@pytest.fixture
def planted_pair():
    """Factory for (original, mutant) counters planted at a given depth."""

    def make(depth: int, top: int = 3) -> tuple[Model, Model]:
        original = parse_model(planted_source(depth, 0, top))
        return original, parse_model(planted_source(depth, 1, top))

    return make


@pytest.fixture
def model_file(tmp_path, cas_text):
    """CAS written to a temporary .as file."""
    path = tmp_path / "cas.as"
    path.write_text(cas_text, encoding="utf-8")
    return path
