"""Loaders for the knowledge bases shipped with the package."""

from __future__ import annotations

from importlib import resources

from .logic import KnowledgeBase
from .parsing import parse_kb


def _read(name: str) -> str:
    return resources.files(__package__).joinpath("data").joinpath(name).read_text("utf-8")


def registration_kb_text() -> str:
    """The 5-symbol real-estate registration example."""
    return _read("registration.kb")


def legislation_kb_text() -> str:
    """The 29-symbol synthetic legislation used by the workload experiment."""
    return _read("legislation.kb")


def load_registration_kb() -> KnowledgeBase:
    return parse_kb(registration_kb_text())


def load_legislation_kb() -> KnowledgeBase:
    return parse_kb(legislation_kb_text())
