"""
Construction recipes: small JSON documents naming one lattice construction

    {
        "family": "regular-family",
        "a": 1,
        "n": 16,
        "seed": 7
    }

Families:
    construction-a       code_path (alist), or n/symbol_degree/check_degree/seed for a PEG code
    construction-dprime  code_path (leveled alist), or n/a/r_levels/symbol_degree/check_degree/seed for E-PEG
    regular-family       a >= 1, n, seed
"""
import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path

from . import config
from .codes.alist import read_alist
from .codes.binary_code import BinaryCode, DegreeProfile, NestedCodeChain, regular_family_profile
from .codes.peg import epeg_construct, peg_construct
from .errors import ConstructionError, RecipeError
from .lattice.construction import construction_a, construction_dprime
from .lattice.io import read_lattice

logger = logging.getLogger('Recipe')

FAMILIES = ("construction-a", "construction-dprime", "regular-family")
FIELDS = ("family", "n", "a", "code_path", "symbol_degree", "check_degree", "r_levels", "seed")


@dataclass(frozen=True)
class Recipe:
    family: str
    n: int = None
    a: int = 0
    code_path: str = None
    symbol_degree: object = None     # int, or one cumulative degree per level
    check_degree: int = None
    r_levels: tuple = None
    seed: int = None

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise RecipeError("recipe", "expected a JSON object")
        unknown = sorted(set(data) - set(FIELDS))
        if unknown:
            raise RecipeError(unknown[0], "unknown field")
        family = data.get("family")
        if family not in FAMILIES:
            raise RecipeError("family", f"expected one of {', '.join(FAMILIES)}, got {family!r}")

        def integer(name, minimum=None, required=False):
            value = data.get(name)
            if value is None:
                if required:
                    raise RecipeError(name, f"required for family {family}")
                return None
            if isinstance(value, bool) or not isinstance(value, int):
                raise RecipeError(name, f"expected an integer, got {value!r}")
            if minimum is not None and value < minimum:
                raise RecipeError(name, f"must be at least {minimum}")
            return value

        def integer_list(name):
            value = data.get(name)
            if value is None:
                return None
            if isinstance(value, int) and not isinstance(value, bool):
                return value
            if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
                raise RecipeError(name, "expected an integer or a list of integers")
            return tuple(value)

        code_path = data.get("code_path")
        if code_path is not None and not isinstance(code_path, str):
            raise RecipeError("code_path", "expected a path string")
        a = integer("a", minimum=0) or 0
        generated = code_path is None

        if family == "regular-family":
            if code_path is not None:
                raise RecipeError("code_path", "regular-family recipes are generated, not read from files")
            a = integer("a", minimum=1, required=True)
        n = integer("n", minimum=1, required=generated)
        seed = integer("seed", minimum=0, required=generated)
        r_levels = integer_list("r_levels")
        if isinstance(r_levels, int):
            r_levels = (r_levels,)
        if family == "construction-a" and a != 0:
            raise RecipeError("a", "construction-a lattices have a single level (a = 0)")
        if family == "construction-dprime" and generated and r_levels is None:
            raise RecipeError("r_levels", "required to generate a construction-dprime chain")
        return cls(family, n, a, code_path, integer_list("symbol_degree"), integer("check_degree", minimum=2),
                   r_levels, seed)

    def to_dict(self):
        data = {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(self).items() if v is not None}
        if self.family == "construction-a":
            data.pop("a", None)
        return data


def parse_recipe(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise RecipeError("recipe", f"not valid JSON (line {e.lineno}): {e.msg}")
    return Recipe.from_dict(data)


def format_recipe(recipe):
    return json.dumps(recipe.to_dict(), indent=4) + "\n"


def load_recipe(path):
    with open(path, 'r') as f:
        recipe = parse_recipe(f.read())
    if recipe.code_path and not Path(recipe.code_path).is_absolute():
        resolved = str((Path(path).parent / recipe.code_path).resolve())
        recipe = Recipe(**{**asdict(recipe), "code_path": resolved})
    return recipe


def save_recipe(path, recipe):
    with open(path, 'w') as f:
        f.write(format_recipe(recipe))


def _single_degree(recipe, default):
    degree = recipe.symbol_degree
    if degree is None:
        return default
    if isinstance(degree, tuple):
        if len(degree) != 1:
            raise RecipeError("symbol_degree", "construction-a takes a single symbol degree")
        return degree[0]
    return degree


def build_lattice(recipe):
    """
    Run the construction a recipe describes

    Raises:
        RecipeError: for field combinations that describe no construction
        ConstructionError: when the construction itself is infeasible
    """
    logger.info(f"Building lattice from recipe {recipe.to_dict()}")
    if recipe.family == "regular-family":
        profile = regular_family_profile(recipe.a, recipe.n)
        chain = epeg_construct(recipe.a, recipe.n, profile.r_levels, profile, recipe.seed)
        return construction_dprime(chain)

    if recipe.family == "construction-a":
        if recipe.code_path:
            matrix, levels = read_alist(recipe.code_path)
            if any(levels):
                raise RecipeError("code_path", "construction-a needs a plain (level-0) alist")
            return construction_a(BinaryCode(matrix))
        d_s = _single_degree(recipe, config.DEFAULT_SYMBOL_DEGREE)
        d_c = recipe.check_degree or config.DEFAULT_CHECK_DEGREE
        if (recipe.n * d_s) % d_c:
            raise ConstructionError(f"n * d_s = {recipe.n * d_s} is not a multiple of d_c = {d_c}")
        parity = peg_construct(recipe.n, recipe.n * d_s // d_c, d_s, recipe.seed)
        return construction_a(BinaryCode(parity))

    if recipe.code_path:
        if recipe.code_path.endswith(".lattice"):
            return read_lattice(recipe.code_path)
        matrix, levels = read_alist(recipe.code_path)
        r_levels = [sum(1 for v in levels if v <= level) for level in range(max(levels, default=0) + 1)]
        return construction_dprime(NestedCodeChain.from_basis(matrix, r_levels))

    degrees = recipe.symbol_degree
    if degrees is None or recipe.check_degree is None:
        raise RecipeError("symbol_degree" if degrees is None else "check_degree",
                          "required to generate a construction-dprime chain")
    degrees = degrees if isinstance(degrees, tuple) else (degrees,)
    if len(recipe.r_levels) != recipe.a + 1:
        raise RecipeError("r_levels", f"expected {recipe.a + 1} row counts")
    profile = DegreeProfile(degrees, recipe.check_degree, recipe.r_levels)
    return construction_dprime(epeg_construct(recipe.a, recipe.n, recipe.r_levels, profile, recipe.seed))


def load_lattice_source(path):
    """
    Lattice from a recipe (.json) or a lattice/alist file

    Returns:
        (lattice, recipe text or None)
    """
    if str(path).endswith(".json"):
        recipe = load_recipe(path)
        return build_lattice(recipe), format_recipe(recipe)
    return read_lattice(path), None
