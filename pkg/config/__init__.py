from config.settings import NumericConfig, GridConfig, OutputConfig, BenchmarkConfig, load_env_file

__all__ = ['NumericConfig', 'GridConfig', 'OutputConfig', 'BenchmarkConfig', 'load_env_file']
