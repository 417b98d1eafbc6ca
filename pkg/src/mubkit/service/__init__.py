"""HTTP service exposing the construction and verification pipeline."""

from .app import create_app

__all__ = ["create_app"]
