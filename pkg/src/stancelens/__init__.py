"""Rule-based political-leaning classification of news articles from entity stance."""

__version__ = "0.1.0"
