"""
Reader and writer for the alist sparse-matrix format

Layout: "n m", then "max_col_degree max_row_degree", then the n column
degrees, the m row degrees, n lines of 1-based row indices per column and
m lines of 1-based column indices per row (both zero-padded to the maximum
degree). The leveled variant appends one line with the level of every row;
files without it are read as all rows at level 0.
"""
import logging

from ..errors import FormatError
from .matrix import SparseBinaryMatrix

logger = logging.getLogger('Codes')


class _LineReader:
    """Walks non-blank lines while remembering 1-based line numbers"""

    def __init__(self, text, path=None, line_offset=0):
        self.path = path
        self.lines = [(number + line_offset + 1, line.split())
                      for number, line in enumerate(text.splitlines())]
        self.position = 0
        self.last_line = line_offset

    def fail(self, message, line_number=None):
        raise FormatError(self.last_line if line_number is None else line_number, message, self.path)

    def next_tokens(self, what):
        while self.position < len(self.lines):
            number, tokens = self.lines[self.position]
            self.position += 1
            if tokens:
                self.last_line = number
                return self.to_ints(tokens, what)
        self.fail(f"unexpected end of file while reading {what}")

    def ints(self, count, what):
        if count == 0:
            return []
        values = self.next_tokens(what)
        if len(values) != count:
            self.fail(f"expected {count} values for {what}, found {len(values)}")
        return values

    def to_ints(self, tokens, what):
        try:
            return [int(t) for t in tokens]
        except ValueError:
            self.fail(f"non-integer token in {what}: {' '.join(tokens)}")

    def remaining(self):
        rest = []
        while self.position < len(self.lines):
            number, tokens = self.lines[self.position]
            self.position += 1
            if tokens:
                rest.append((number, tokens))
        return rest


def _read_indices(reader, degree, max_degree, limit, what):
    if max_degree == 0:
        return ()
    values = reader.next_tokens(what)
    nonzero = [v for v in values if v != 0]
    if len(nonzero) != degree or any(v != 0 for v in values[degree:]) or len(values) > max(max_degree, degree):
        reader.fail(f"{what} lists {len(nonzero)} indices but its degree is {degree}")
    if any(v < 1 or v > limit for v in nonzero):
        reader.fail(f"{what} has an index outside 1..{limit}")
    if len(set(nonzero)) != len(nonzero):
        reader.fail(f"{what} repeats an index")
    return tuple(sorted(v - 1 for v in nonzero))


def parse_alist(text, path=None, line_offset=0):
    """
    Parse alist (or leveled alist) text

    Returns:
        (SparseBinaryMatrix, row_levels tuple)

    Raises:
        FormatError: with the 1-based line number of the offending line
    """
    reader = _LineReader(text, path, line_offset)
    header = reader.next_tokens("the size line")
    if len(header) != 2 or min(header) < 0:
        reader.fail("size line must be 'n m' with non-negative integers")
    n, m = header
    maxima = reader.next_tokens("the maximum-degree line")
    if len(maxima) != 2:
        reader.fail("maximum-degree line must hold two integers")
    max_col, max_row = maxima

    col_degrees = reader.ints(n, "column degrees")
    row_degrees = reader.ints(m, "row degrees")
    if col_degrees and max(col_degrees) > max_col:
        reader.fail(f"a column degree exceeds the declared maximum {max_col}")
    if row_degrees and max(row_degrees) > max_row:
        reader.fail(f"a row degree exceeds the declared maximum {max_row}")

    columns = [_read_indices(reader, col_degrees[c], max_col, m, f"column {c + 1}") for c in range(n)]
    rows, row_lines = [], []
    for j in range(m):
        rows.append(_read_indices(reader, row_degrees[j], max_row, n, f"row {j + 1}"))
        row_lines.append(reader.last_line)

    from_columns = [[] for _ in range(m)]
    for c, support in enumerate(columns):
        for j in support:
            from_columns[j].append(c)
    for j in range(m):
        if tuple(from_columns[j]) != rows[j]:
            reader.fail(f"row {j + 1} disagrees with the column lists", row_lines[j])

    levels = (0,) * m
    rest = reader.remaining()
    if len(rest) > 1:
        reader.fail("unexpected content after the row lists", rest[1][0])
    if rest:
        number, tokens = rest[0]
        reader.last_line = number
        values = reader.to_ints(tokens, "row levels")
        if len(values) != m:
            reader.fail(f"expected {m} row levels, found {len(values)}")
        if any(v < 0 for v in values):
            reader.fail("row levels must be non-negative")
        levels = tuple(values)

    return SparseBinaryMatrix(m, n, tuple(rows)), levels


def format_alist(matrix, row_levels=None):
    """Render a matrix as alist text, leveled when row_levels is given"""
    columns = matrix.column_support()
    col_degrees = [len(c) for c in columns]
    row_degrees = [len(r) for r in matrix.row_support]
    max_col = max(col_degrees, default=0)
    max_row = max(row_degrees, default=0)

    def padded(indices, width):
        values = [i + 1 for i in indices] + [0] * (width - len(indices))
        return " ".join(str(v) for v in values)

    lines = [f"{matrix.cols} {matrix.rows}", f"{max_col} {max_row}",
             " ".join(str(d) for d in col_degrees), " ".join(str(d) for d in row_degrees)]
    if max_col:
        lines.extend(padded(c, max_col) for c in columns)
    if max_row:
        lines.extend(padded(r, max_row) for r in matrix.row_support)
    if row_levels is not None and matrix.rows:
        lines.append(" ".join(str(int(v)) for v in row_levels))
    return "\n".join(lines) + "\n"


def read_alist(path):
    with open(path, 'r') as f:
        text = f.read()
    logger.debug(f"Reading alist {path}")
    return parse_alist(text, path=str(path))


def write_alist(path, matrix, row_levels=None):
    with open(path, 'w') as f:
        f.write(format_alist(matrix, row_levels))
    logger.debug(f"Wrote alist {path} ({matrix.rows}x{matrix.cols})")
