"""
Lattice files: one header line followed by a leveled alist

    lattice n=16 levels=2 r_levels=8,12

A file without the header is read as a (leveled) alist; plain alist gives
a 1-level lattice.
"""
import logging

from .. import config
from ..codes.alist import format_alist, parse_alist
from ..codes.binary_code import NestedCodeChain
from ..errors import FormatError
from .construction import Lattice, LeveledParityMatrix

logger = logging.getLogger('Lattice')


def format_header(lat):
    r_levels = ",".join(str(r) for r in lat.r_levels)
    return f"{config.LATTICE_HEADER_TAG} n={lat.n} levels={lat.levels} r_levels={r_levels}"


def _parse_header(line, line_number, path):
    fields = {}
    for token in line.split()[1:]:
        key, sep, value = token.partition("=")
        if not sep:
            raise FormatError(line_number, f"header token '{token}' is not key=value", path)
        fields[key] = value
    try:
        n = int(fields["n"])
        levels = int(fields["levels"])
        r_levels = tuple(int(v) for v in fields["r_levels"].split(",")) if fields["r_levels"] else ()
    except KeyError as e:
        raise FormatError(line_number, f"header is missing '{e.args[0]}'", path)
    except ValueError:
        raise FormatError(line_number, "header values must be integers", path)
    if levels < 1 or len(r_levels) != levels:
        raise FormatError(line_number, f"levels={levels} does not match r_levels={list(r_levels)}", path)
    return n, levels, r_levels


def parse_lattice(text, path=None):
    lines = text.splitlines()
    header_index = next((i for i, line in enumerate(lines) if line.strip()), None)
    if header_index is None:
        raise FormatError(1, "empty lattice file", path)

    header = None
    body = text
    offset = 0
    if lines[header_index].split()[0] == config.LATTICE_HEADER_TAG:
        header = _parse_header(lines[header_index], header_index + 1, path)
        body = "\n".join(lines[header_index + 1:])
        offset = header_index + 1

    base, row_levels = parse_alist(body, path=path, line_offset=offset)
    levels = header[1] if header else (max(row_levels) + 1 if row_levels else 1)
    try:
        H = LeveledParityMatrix(base, row_levels, levels - 1)
    except ValueError as e:
        raise FormatError(offset + 1, str(e), path)

    if header:
        n, _, r_levels = header
        if n != base.cols:
            raise FormatError(offset, f"header n={n} but the matrix has {base.cols} columns", path)
        if tuple(r_levels) != H.r_levels:
            raise FormatError(offset, f"header r_levels={list(r_levels)} but row levels give {list(H.r_levels)}",
                              path)
    chain = NestedCodeChain.from_basis(base, H.r_levels)
    return Lattice(H, chain)


def format_lattice(lat):
    return format_header(lat) + "\n" + format_alist(lat.H.base, lat.H.row_level)


def read_lattice(path):
    with open(path, 'r') as f:
        text = f.read()
    lat = parse_lattice(text, path=str(path))
    logger.info(f"Loaded {lat} from {path}")
    return lat


def write_lattice(path, lat):
    with open(path, 'w') as f:
        f.write(format_lattice(lat))
    logger.info(f"Wrote {lat} to {path}")
