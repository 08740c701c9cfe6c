import os

import yaml
from dotenv import load_dotenv

from ..errors import ConfigError


def get_project_root():
    current_dir = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

    if os.path.exists(os.path.join(current_dir, "configs")):
        return current_dir

    return os.getcwd()


def _load_yaml(path):
    with open(path, 'r', encoding='utf-8') as file:
        data = yaml.safe_load(file) or {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping, got {type(data).__name__}")
    return data


def resolve_config_path(config_name=None):
    """Absolute paths and paths that exist relative to the working directory
    are used as given; bare names are looked up under configs/."""
    if config_name is None:
        config_name = os.environ.get('RS2V_CONFIG', 'config.yaml')

    config_name = os.fspath(config_name)
    if os.path.isabs(config_name) or os.path.exists(config_name):
        return config_name
    return os.path.join(get_project_root(), "configs", config_name)


def load_config(config_name=None):
    load_dotenv()
    config_path = resolve_config_path(config_name)
    configs_dir = os.path.join(get_project_root(), "configs")

    try:
        config = _load_yaml(config_path)

        if os.environ.get('LOCAL_DEV', '').lower() == 'true':
            local_config_path = os.path.join(configs_dir, "config.local.yaml")
            if os.path.exists(local_config_path):
                config = merge_configs(config, _load_yaml(local_config_path))

        if 'RS2V_THREADS' in os.environ:
            try:
                threads = int(os.environ['RS2V_THREADS'])
            except ValueError:
                raise ConfigError(f"RS2V_THREADS must be an integer, got {os.environ['RS2V_THREADS']!r}")
            config.setdefault('pipeline', {})['threads'] = threads

        if 'RS2V_OUTPUT_DIR' in os.environ:
            config.setdefault('job', {})['output_dir'] = os.environ['RS2V_OUTPUT_DIR']

        return config
    except FileNotFoundError:
        raise FileNotFoundError(f"Config file not found: {config_path}")
    except yaml.YAMLError as e:
        raise ConfigError(f"Error parsing YAML file {config_path}: {e}")


def merge_configs(base_config, override_config):
    for key, value in override_config.items():
        if key in base_config and isinstance(base_config[key], dict) and isinstance(value, dict):
            merge_configs(base_config[key], value)
        else:
            base_config[key] = value
    return base_config
