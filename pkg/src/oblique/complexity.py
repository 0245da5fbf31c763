"""Operation-count model for the exhaustive hyperplane search.

A single node search fits and evaluates one hyperplane per (r-sample,
r-feature) selection; each costs r * (r * r + n) operations, giving

    C(n, r) * C(m, r) * r * (r * r + n)

operations in total.  Counts are exact integers; formatting rounds to
three significant digits in scientific notation.
"""

import math
from decimal import Decimal

from .errors import ConfigurationError, DomainError

DEFAULT_N_VALUES = (100, 500, 1000, 5000, 10000, 20000)
DEFAULT_R_VALUES = tuple(range(1, 11))


def op_count(n, m, r):
    """Exact operation count for one exhaustive node search."""
    for name, value in (("n", n), ("m", m), ("r", r)):
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ConfigurationError("%s must be a positive integer" % (name,))
    if r > min(n, m):
        raise DomainError("r=%d exceeds min(n=%d, m=%d)" % (r, n, m))
    return math.comb(n, r) * math.comb(m, r) * r * (r * r + n)


def format_count(value):
    """Render an exact count as three significant digits, e.g. 1.01e+04."""
    d = Decimal(int(value))
    text = format(d, ".2e")
    mantissa, _, exp = text.partition("e")
    sign = "-" if exp.startswith("-") else "+"
    return "%se%s%02d" % (mantissa, sign, int(exp.lstrip("+-")))


def table1(n_values=None, r_values=None):
    """Operation counts over a (r, n) grid with m = r.

    Returns one row per r, one exact integer per n; cells where the
    count is undefined (r > n) hold None.
    """
    if n_values is None:
        n_values = DEFAULT_N_VALUES
    if r_values is None:
        r_values = DEFAULT_R_VALUES
    rows = []
    for r in r_values:
        row = []
        for n in n_values:
            try:
                row.append(op_count(n, r, r))
            except DomainError:
                row.append(None)
        rows.append(row)
    return rows
