__app_name__ = "compat-assoc-workbench"
__version__ = "0.1.0"
