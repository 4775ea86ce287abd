import importlib
import logging

logger = logging.getLogger('LatticeWorkbench')

REQUIRED_LIBRARIES = ['numpy', 'scipy', 'galois', 'sympy', 'PyQt6']


def missing_libraries():
    missing = []
    for library in REQUIRED_LIBRARIES:
        try:
            importlib.import_module(library)
        except ImportError as e:
            logger.debug(f"{library} failed to import: {e}")
            missing.append(library)
    return missing


def check_libraries():
    """
    Returns:
        True if every required library imports; otherwise logs the missing ones
    """
    missing = missing_libraries()
    if missing:
        logger.error(f"Missing libraries: {', '.join(missing)}. Install them with "
                     f"'pip install -r requirements.txt'")
        return False
    return True
