# src/config.py

import os
import json
import copy
import logging
from pathlib import Path
from typing import Any, Optional


class Config:
    """Gestiona los valores numéricos por defecto de la herramienta"""

    def __init__(self, config_file: Optional[str] = None):
        # Archivo opcional; sin archivo la configuración vive solo en memoria
        config_file = config_file or os.getenv("OSCDF_CONFIG", "")
        self.config_file = Path(config_file).expanduser() if config_file else None

        # Configuración por defecto
        self.default_config = {
            "describing": {
                "n_samples": 1024,  # potencia de dos >= 256
                "curve_points": 200,
                "gauss_order": 32,  # nodos por arco en funciones a trozos
            },
            "prediction": {
                "grid_A": 200,
                "grid_omega": 200,
                "tolerance": 1e-9,
                "newton_max_iter": 60,
                "damping_halvings": 20,
                "dedup_rel": 1e-6,
                "classify_eps": 1e-3,
            },
            "simulation": {
                "rtol": 1e-8,
                "atol": 1e-10,
                "settle_fraction": 0.5,
                "window_periods": 5,
                "dispersion_limit": 1e-3,
                "samples_per_period": 2048,
                "k_max": 49,
            },
            "output": {
                "format": "csv",  # csv, text
            },
            "logging": {
                "level": os.getenv("OSCDF_LOG_LEVEL", "INFO"),
                "file": "",
            },
        }

        self._config = {}
        self._initialize()

    def _initialize(self):
        """Carga el archivo si existe y completa las claves faltantes"""
        self._config = copy.deepcopy(self.default_config)
        if self.config_file is None or not self.config_file.exists():
            return

        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                self._config = json.load(f)
            self._update_missing_keys()
            logging.info(f"Configuración cargada desde {self.config_file}")
        except Exception as e:
            logging.error(f"Error al cargar la configuración: {e}")
            self._config = copy.deepcopy(self.default_config)

    def _update_missing_keys(self):
        """Actualiza las claves faltantes con los valores predeterminados"""
        def update_dict(target, source):
            for key, value in source.items():
                if key not in target:
                    target[key] = copy.deepcopy(value)
                elif isinstance(value, dict) and isinstance(target[key], dict):
                    update_dict(target[key], value)

        update_dict(self._config, self.default_config)

    def save(self) -> bool:
        """Guarda la configuración actual en el archivo, si hay uno"""
        if self.config_file is None:
            return False
        try:
            self.config_file.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self._config, f, indent=4)
            return True
        except Exception as e:
            logging.error(f"Error al guardar la configuración: {e}")
            return False

    def get(self, section: str, key: Optional[str] = None, default: Any = None) -> Any:
        """Obtiene un valor de configuración específico"""
        if key is None:
            return self._config.get(section, default)

        section_data = self._config.get(section, {})
        return section_data.get(key, default)

    def set(self, section: str, key: str, value: Any) -> None:
        """Establece un valor de configuración específico"""
        if section not in self._config:
            self._config[section] = {}

        self._config[section][key] = value
        if self.config_file is not None:
            self.save()

    def override(self, section: str, key: str, value: Any) -> None:
        """Cambia un valor solo para esta ejecución, sin tocar el archivo"""
        self._config.setdefault(section, {})[key] = value
        logging.debug(f"Configuración {section}.{key} = {value!r} (solo en memoria)")


_default: Optional[Config] = None


def get_config() -> Config:
    """Configuración compartida del proceso (se crea al primer uso)"""
    global _default
    if _default is None:
        _default = Config()
    return _default


def reset_config(config: Optional[Config] = None) -> None:
    """Reemplaza la configuración compartida (útil en la CLI y en pruebas)"""
    global _default
    _default = config
