"""Rate regions for two-receiver broadcast channels with rate-limited feedback."""

__version__ = "0.1.0"
