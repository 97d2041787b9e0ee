"""
State files consumed by `qaccord measure`.

Two forms are accepted. Blank lines are ignored and ``#`` starts a comment.

Matrix form: the 16 entries of ρ in row-major order, as Python complex
literals (``0.5``, ``-0.25j``, ``0.1+0.2j``; no spaces inside a number),
separated by whitespace or commas over any number of lines::

    0.5 0 0 0.5
    0   0 0 0
    0   0 0 0
    0.5 0 0 0.5

Tagged form: ``family=<name>`` followed by ``key=value`` pairs, on one or
more lines, separated by whitespace or commas::

    family=werner, e=0.3

=================  ===========================================
family             keys
=================  ===========================================
maximally-mixed    (none)
pure               theta
pure-noise         theta, e
werner             e
bell-diagonal      c1, c2, c3
bell-mixture       p1, p2, p3, p4
edge               a, b, p   (a, b in phi+, phi-, psi+, psi-)
classical          w00, w01, w10, w11
rank-two           p
random             measure (haar|bures), seed, index
=================  ===========================================
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from application import states
from domain.errors import StateFileError
from domain.models import BellDiagonalCoords, DensityMatrix


RANDOM_MEASURES = ("haar", "bures")
_SEPARATORS = re.compile(r"[,\s]+")


@dataclass(frozen=True)
class ParsedState:
    family: str
    parameters: Dict[str, str]
    rho: DensityMatrix

    @property
    def tagged(self) -> Optional[str]:
        """The tagged form of a family state; None for a matrix."""

        if self.family == "matrix":
            return None
        return format_tagged(self.family, self.parameters)


def _float(params: Dict[str, str], key: str, line: int) -> float:
    try:
        return float(params[key])
    except KeyError:
        raise StateFileError(f"missing key {key!r}", line) from None
    except ValueError:
        raise StateFileError(f"{key}={params[key]!r} is not a number", line) from None


def _int(params: Dict[str, str], key: str, line: int) -> int:
    try:
        return int(params[key])
    except KeyError:
        raise StateFileError(f"missing key {key!r}", line) from None
    except ValueError:
        raise StateFileError(f"{key}={params[key]!r} is not an integer", line) from None


def _text(params: Dict[str, str], key: str, line: int) -> str:
    try:
        return params[key]
    except KeyError:
        raise StateFileError(f"missing key {key!r}", line) from None


def _choice(params: Dict[str, str], key: str, options: Sequence[str], line: int) -> str:
    value = _text(params, key, line)
    if value not in options:
        raise StateFileError(f"{key}={value!r} is not one of {', '.join(options)}", line)
    return value


def _random_state(params: Dict[str, str], line: int) -> DensityMatrix:
    measure = _choice(params, "measure", RANDOM_MEASURES, line)
    index = _int(params, "index", line)
    if index < 0:
        raise StateFileError(f"index={index} must not be negative", line)
    return states.random_state_at(_int(params, "seed", line), measure, index)  # type: ignore[arg-type]


_Builder = Callable[[Dict[str, str], int], DensityMatrix]

_FAMILIES: Dict[str, Tuple[Tuple[str, ...], _Builder]] = {
    "maximally-mixed": ((), lambda p, n: states.MAXIMALLY_MIXED),
    "pure": (("theta",), lambda p, n: states.pure_schmidt(_float(p, "theta", n))),
    "pure-noise": (
        ("theta", "e"),
        lambda p, n: states.with_white_noise(states.pure_schmidt(_float(p, "theta", n)), _float(p, "e", n)),
    ),
    "werner": (("e",), lambda p, n: states.werner(_float(p, "e", n))),
    "bell-diagonal": (
        ("c1", "c2", "c3"),
        lambda p, n: states.bell_diagonal(
            BellDiagonalCoords(_float(p, "c1", n), _float(p, "c2", n), _float(p, "c3", n))
        ),
    ),
    "bell-mixture": (
        ("p1", "p2", "p3", "p4"),
        lambda p, n: states.bell_mixture(*(_float(p, k, n) for k in ("p1", "p2", "p3", "p4"))),
    ),
    "edge": (
        ("a", "b", "p"),
        lambda p, n: states.edge_state(
            _choice(p, "a", states.BELL_ORDER, n), _choice(p, "b", states.BELL_ORDER, n), _float(p, "p", n)  # type: ignore[arg-type]
        ),
    ),
    "classical": (
        ("w00", "w01", "w10", "w11"),
        lambda p, n: states.classical_state(
            np.array([[_float(p, "w00", n), _float(p, "w01", n)], [_float(p, "w10", n), _float(p, "w11", n)]])
        ),
    ),
    "rank-two": (("p",), lambda p, n: states.rank_two_product_mixture(_float(p, "p", n))),
    "random": (("measure", "seed", "index"), _random_state),
}


def _tokens(text: str) -> List[Tuple[int, str]]:
    found = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        found.extend((number, token) for token in _SEPARATORS.split(content) if token)
    return found


def _parse_tagged(tokens: List[Tuple[int, str]]) -> ParsedState:
    params: Dict[str, str] = {}
    lines: Dict[str, int] = {}
    for number, token in tokens:
        key, sep, value = token.partition("=")
        if not sep or not key or not value:
            raise StateFileError(f"expected key=value, got {token!r}", number)
        if key in params:
            raise StateFileError(f"duplicate key {key!r}", number)
        params[key] = value
        lines[key] = number

    first_line = lines["family"]
    family = params.pop("family")
    if family not in _FAMILIES:
        raise StateFileError(f"unknown family {family!r}; expected one of {sorted(_FAMILIES)}", first_line)
    keys, build = _FAMILIES[family]
    unexpected = sorted(set(params) - set(keys))
    if unexpected:
        raise StateFileError(f"unexpected keys for family {family}: {', '.join(unexpected)}", first_line)
    return ParsedState(family=family, parameters=params, rho=build(params, first_line))


def _parse_matrix(tokens: List[Tuple[int, str]]) -> ParsedState:
    entries = []
    for number, token in tokens:
        try:
            entries.append(complex(token))
        except ValueError:
            raise StateFileError(f"{token!r} is not a complex number", number) from None
    if len(entries) != 16:
        last = tokens[-1][0] if tokens else None
        raise StateFileError(f"expected 16 matrix entries, found {len(entries)}", last)
    return ParsedState(family="matrix", parameters={}, rho=DensityMatrix(np.array(entries).reshape(4, 4)))


def parse_state_text(text: str) -> ParsedState:
    """
    Parse a state document.

    Grammar errors raise StateFileError with a line number; a well-formed
    document describing an invalid state raises the validation error of the
    state constructors (NotAState, OutOfRange, ...).
    """

    tokens = _tokens(text)
    if not tokens:
        raise StateFileError("state file is empty")
    if any(token.startswith("family=") for _, token in tokens):
        return _parse_tagged(tokens)
    return _parse_matrix(tokens)


def load_state_file(path: str) -> ParsedState:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise StateFileError(f"{path} is not UTF-8 text: {exc.reason} at byte {exc.start}") from exc
    return parse_state_text(text)


def format_tagged(family: str, parameters: Dict[str, object]) -> str:
    """Inverse of the tagged form, recorded in the `measure` manifest."""

    pairs = ", ".join(f"{k}={v}" for k, v in parameters.items())
    return f"family={family}" + (f", {pairs}" if pairs else "")
