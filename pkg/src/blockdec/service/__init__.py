"""Service layer: document-level operations, pydantic models, FastAPI app."""

from .app import app, create_app

__all__ = ["app", "create_app"]
