from .config_loader import load_config, merge_configs, get_project_root

__all__ = ['load_config', 'merge_configs', 'get_project_root']
