"""astrack: structural fingerprinting of JavaScript for tracking detection,
selective code removal, and visual breakage analysis."""

__version__ = "0.1.0"
