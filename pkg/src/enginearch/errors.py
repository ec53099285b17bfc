class ConfigurationError(Exception):
    """Bad configuration or input data; the CLI maps it to exit code 2."""
