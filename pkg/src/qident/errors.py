"""Exception hierarchy shared by every qident module."""


class QSeriesError(Exception):
    """Base class for all errors raised by the engine."""


class ZeroLeadingTerm(QSeriesError, ZeroDivisionError):
    """Attempt to invert a series that is zero to its known order."""


class BeyondOrder(QSeriesError, IndexError):
    """A coefficient was requested at or past the truncation order."""


class FractionalGrid(QSeriesError, ValueError):
    """Operation needs integer exponents but the series lives on q^(1/d)."""


class DivergentBase(QSeriesError, ValueError):
    """An infinite product contains the factor (1 - 1)."""


class DomainViolation(QSeriesError, ValueError):
    """A monomial argument lies outside the region where the construction is formal."""


class NonTerminating(QSeriesError, ValueError):
    """A bilateral sum that should terminate below does not."""


class UnknownLabel(QSeriesError, KeyError):
    """Unknown Bailey pair, lemma, identity id or multisum family."""

    def __str__(self):
        return Exception.__str__(self)


class IncompatibleRelA(QSeriesError, ValueError):
    """Bailey pair is not relative to the parameter a lemma requires."""


class IndexOutOfRange(QSeriesError, ValueError):
    """Product family index outside its admissible range."""


class NonIntegralResult(QSeriesError, ArithmeticError):
    """An identity side expanded to a series with a non-integer coefficient."""


class UnsupportedSpecialization(QSeriesError, ValueError):
    """Requested root-of-unity specialization does not pair into conjugates."""


class ExprSyntaxError(QSeriesError, SyntaxError):
    """Parse failure in the expression language, carrying a position.

    ``line`` and ``column`` are 1-based; ``expected`` is the sorted set of
    token descriptions that would have been accepted.
    """

    def __init__(self, message, text="", pos=0, expected=()):
        line = text.count("\n", 0, pos) + 1
        column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.message = message
        self.pos = pos
        self.line_no = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f"line {line}, column {column}: {message}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)
        self.text = text
