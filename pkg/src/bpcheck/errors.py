"""Exception hierarchy shared by all bpcheck modules."""

from __future__ import annotations


class BpCheckError(Exception):
    """Base class for every error raised by bpcheck."""


# -- branching processes -----------------------------------------------------


class ProcessError(BpCheckError, ValueError):
    """A branching process violates one of its structural invariants."""


class ProbabilitySumError(ProcessError):
    def __init__(self, type_, total):
        super().__init__(f"rule probabilities of type {type_!r} sum to {total}, not 1")
        self.type = type_
        self.total = total


class EmptySuccessorError(ProcessError):
    def __init__(self, type_):
        super().__init__(f"rule of type {type_!r} has an empty right-hand side")
        self.type = type_


class NonPositiveProbabilityError(ProcessError):
    def __init__(self, type_, probability):
        super().__init__(f"rule of type {type_!r} has non-positive probability {probability}")
        self.type = type_
        self.probability = probability


class DuplicateRuleError(ProcessError):
    def __init__(self, type_, successors):
        super().__init__(f"rule {type_!r} -> {successors!r} is declared twice")
        self.type = type_
        self.successors = successors


class UnknownTypeError(ProcessError, KeyError):
    def __init__(self, type_):
        super().__init__(f"unknown type {type_!r}")
        self.type = type_

    def __str__(self):
        return self.args[0]


class MissingColourError(ProcessError):
    def __init__(self, type_):
        super().__init__(f"type {type_!r} has no colour")
        self.type = type_


class NotGeneratedError(ProcessError):
    def __init__(self, node, type_, successors):
        super().__init__(
            f"node {node!r}: no rule {type_!r} -> {' '.join(map(str, successors))}"
        )
        self.node = node
        self.type = type_
        self.successors = successors


class InvalidPrefixError(ProcessError):
    """A tree prefix is not prefix-closed or has inconsistent degrees."""


# -- input files ---------------------------------------------------------------


class FormatError(BpCheckError, ValueError):
    """A line of an input file cannot be parsed."""

    def __init__(self, message, line=None, source=None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.message = message
        self.line = line
        self.source = source


# -- fixed-point systems -------------------------------------------------------


class PpsError(BpCheckError):
    """Base class for errors of the polynomial fixed-point solver."""


class InfeasibleSystemError(PpsError, ValueError):
    def __init__(self, index, value):
        super().__init__(f"equation {index} evaluates to {value} > 1 at the all-ones vector")
        self.index = index
        self.value = value


class NotAfShapeError(PpsError, ValueError):
    def __init__(self, index):
        super().__init__(
            f"equation {index} is neither the constant 1 nor has coefficient sum 1"
        )
        self.index = index


class NotIrreducibleError(PpsError, ValueError):
    pass


class PrecisionExhaustedError(PpsError):
    def __init__(self, message, enclosures=None):
        super().__init__(message)
        self.enclosures = enclosures


# -- automata ------------------------------------------------------------------


class AutomatonError(BpCheckError, ValueError):
    """A parity tree automaton is malformed (e.g. partial transition table)."""


class ArityTooSmallError(AutomatonError):
    def __init__(self, declared, needed):
        super().__init__(f"automaton arity bound {declared} is below the process bound {needed}")
        self.declared = declared
        self.needed = needed


class AlphabetMismatchError(AutomatonError):
    def __init__(self, missing, extra):
        super().__init__(
            f"automaton alphabet differs from process types "
            f"(missing {sorted(map(str, missing))}, extra {sorted(map(str, extra))})"
        )
        self.missing = missing
        self.extra = extra


# -- PTTL ----------------------------------------------------------------------


class FormulaSyntaxError(BpCheckError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


class UnknownAtomError(BpCheckError, ValueError):
    def __init__(self, atom):
        super().__init__(f"atomic proposition {atom!r} labels no type")
        self.atom = atom


class PreconditionViolatedError(BpCheckError, ValueError):
    def __init__(self, message, witness):
        super().__init__(f"{message}: {' -> '.join(map(str, witness))}")
        self.witness = witness


class UndecidedError(BpCheckError):
    """A threshold comparison could not be decided within the budget."""

    def __init__(self, formula, type_, enclosure):
        super().__init__(
            f"cannot decide {formula} at type {type_!r}; "
            f"probability in [{float(enclosure.lower):.12g}, {float(enclosure.upper):.12g}]"
        )
        self.formula = formula
        self.type = type_
        self.enclosure = enclosure
