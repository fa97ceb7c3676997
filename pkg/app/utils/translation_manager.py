"""
Translation Manager for the Twist simulator
Provides localized diagnostics using JSON-based message catalogs.
"""

import json
import logging
import threading
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)


class TranslationManager:
    """Manages message catalogs and language switching."""

    def __init__(self, translations_dir: Optional[Path] = None, language: str = "en"):
        self.current_language = "en"
        self.fallback_language = "en"
        self.translations: Dict[str, Dict[str, Any]] = {}
        self.translations_dir = translations_dir or self._get_translations_dir()

        self._load_all_translations()
        self.set_language(language)

    def _get_translations_dir(self) -> Path:
        """Get the translations directory next to the package, falling back to cwd."""
        development_path = Path(__file__).parent.parent.parent / "translations"
        if development_path.exists():
            return development_path

        cwd_path = Path.cwd() / "translations"
        if cwd_path.exists():
            return cwd_path

        logger.warning("No translations directory found, using fallback: %s", development_path)
        return development_path

    def _load_all_translations(self):
        """Load all available catalog files."""
        if not self.translations_dir.exists():
            logger.warning("Translations directory does not exist: %s", self.translations_dir)
            return

        for file_path in sorted(self.translations_dir.glob("*.json")):
            language_code = file_path.stem
            try:
                with open(file_path, "r", encoding="utf-8") as f:
                    self.translations[language_code] = json.load(f)
            except (json.JSONDecodeError, OSError) as e:
                logger.error("Error loading translation file %s: %s", file_path, e)

        logger.debug("Available languages: %s", list(self.translations.keys()))

    def get_available_languages(self) -> Dict[str, str]:
        """Get list of available languages with their display names."""
        languages = {}
        for lang_code, lang_data in self.translations.items():
            display_name = lang_data.get("_meta", {}).get("display_name", lang_code.upper())
            languages[lang_code] = display_name
        return languages

    def set_language(self, language_code: str) -> bool:
        """Set the current language. Unknown codes keep the current one."""
        if language_code in self.translations:
            self.current_language = language_code
            return True
        return False

    def get_current_language(self) -> str:
        return self.current_language

    def translate(self, key: str, **kwargs) -> str:
        """
        Translate a message key to the current language.

        Args:
            key: Catalog key in dot notation, e.g. "config.errors.unknown_key"
            **kwargs: Values substituted into the message

        Returns:
            The formatted message; the key itself when no catalog has it.
        """
        translation = self._get_nested_value(
            self.translations.get(self.current_language, {}), key
        )

        if translation is None and self.current_language != self.fallback_language:
            translation = self._get_nested_value(
                self.translations.get(self.fallback_language, {}), key
            )

        if translation is None:
            return key

        if isinstance(translation, str) and kwargs:
            try:
                return translation.format(**kwargs)
            except (KeyError, ValueError):
                return translation

        return translation

    def _get_nested_value(self, data: Dict, key: str) -> Optional[Any]:
        """Get value from nested dictionary using dot notation."""
        current = data
        for k in key.split("."):
            if isinstance(current, dict) and k in current:
                current = current[k]
            else:
                return None
        return current


# Global translation manager instance
_translation_manager = None
_lock = threading.Lock()


def get_translation_manager() -> TranslationManager:
    """Get the global translation manager instance."""
    global _translation_manager
    with _lock:
        if _translation_manager is None:
            _translation_manager = TranslationManager()
    return _translation_manager


def tr(key: str, **kwargs) -> str:
    """Global translation function."""
    return get_translation_manager().translate(key, **kwargs)


def set_language(language_code: str) -> bool:
    """Set the application language."""
    return get_translation_manager().set_language(language_code)
