"""Command-line interface and result cache."""
from .cache import CACHE_ENV, Cache, CacheError, CacheKey
from .main import ConfigError, RunConfig, build_parser, main

__all__ = ["CACHE_ENV", "Cache", "CacheError", "CacheKey", "ConfigError", "RunConfig", "build_parser", "main"]
