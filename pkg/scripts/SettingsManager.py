import os
import json
import logging
import platform
from pathlib import Path

from . import config

logger = logging.getLogger('SettingsManager')

SETTINGS_FILE = 'ldpc_lattice_settings.json'


def _user_data_dir(app_name="LdpcLattice"):
    if platform.system() == "Windows" and 'APPDATA' in os.environ:
        return Path(os.environ['APPDATA']) / app_name
    if platform.system() == "Darwin":
        return Path.home() / "Library" / "Application Support" / app_name
    return Path.home() / ".local" / "share" / app_name


def _accepts(default, value):
    # bool is an int subclass; keep the two apart
    if isinstance(default, bool) or isinstance(value, bool):
        return isinstance(default, bool) and isinstance(value, bool)
    if isinstance(default, float):
        return isinstance(value, (int, float))
    return isinstance(value, type(default))


class SettingsManager:
    """
    User-level decoder and stopping-rule defaults stored as JSON

    A value is resolved from the command-line flag first, then the
    settings file, then config.py.
    """
    DEFAULT_SETTINGS = {
        'decoder_algorithm': config.DECODER_ALGORITHM,
        'max_iterations': config.MAX_ITERATIONS,
        'early_stop': config.EARLY_STOP,
        'damping': config.DAMPING,
        'llr_clip': config.LLR_CLIP,
        'min_word_errors': config.MIN_WORD_ERRORS,
        'max_trials': config.MAX_TRIALS,
        'batch_size': config.BATCH_SIZE,
        'workers': config.WORKERS,
    }

    def __init__(self, settings_dir=None, settings_file=SETTINGS_FILE):
        """
        Args:
            settings_dir: Directory of the settings file (default: per-user data directory)
            settings_file: File name inside settings_dir
        """
        directory = Path(settings_dir) if settings_dir is not None else _user_data_dir()
        self.settings_path = directory / settings_file
        self.settings = self.load_settings()
        logger.debug(f"Settings loaded from {self.settings_path}")

    def _stored_values(self):
        if not self.settings_path.exists():
            logger.debug("No settings file; using config.py defaults")
            return {}
        try:
            stored = json.loads(self.settings_path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Cannot read {self.settings_path}: {e}")
            return {}
        if not isinstance(stored, dict):
            logger.error(f"{self.settings_path} must hold a JSON object")
            return {}
        return stored

    def load_settings(self):
        """Defaults overlaid with every well-typed known key from the settings file"""
        merged = dict(self.DEFAULT_SETTINGS)
        stored = self._stored_values()

        unknown = sorted(set(stored) - set(merged))
        if unknown:
            logger.warning(f"Ignoring unknown settings: {', '.join(unknown)}")
        for key, value in stored.items():
            if key not in merged:
                continue
            if not _accepts(merged[key], value):
                logger.warning(f"Ignoring setting {key}={value!r}: expected {type(merged[key]).__name__}")
                continue
            merged[key] = value
        return merged

    def save_settings(self):
        """Returns True once the file is written, False on I/O failure"""
        try:
            self.settings_path.parent.mkdir(parents=True, exist_ok=True)
            self.settings_path.write_text(json.dumps(self.settings, indent=4))
        except OSError as e:
            logger.error(f"Error saving settings: {e}")
            return False
        logger.info(f"Settings saved to {self.settings_path}")
        return True

    def get(self, key, default=None):
        return self.settings.get(key, default)

    def set(self, key, value):
        self.settings[key] = value
        return self.save_settings()

    def update(self, settings_dict):
        self.settings.update(settings_dict)
        return self.save_settings()

    def resolve(self, key, flag_value=None):
        """Command-line value when given, otherwise the stored or default setting"""
        if flag_value is not None:
            return flag_value
        return self.settings.get(key, self.DEFAULT_SETTINGS.get(key))
