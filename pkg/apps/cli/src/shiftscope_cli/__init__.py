"""CLI package for the shiftscope workspace."""

__all__: list[str] = []
