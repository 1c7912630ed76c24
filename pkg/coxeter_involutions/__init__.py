"""Top-level package for involution classes of finite Weyl groups."""

from .app import ClassificationApp, RunConfig
from .involutions import classify, w0_pairing
from .rootsys import DiagramType, build

__all__ = ["ClassificationApp", "DiagramType", "RunConfig", "build", "classify", "w0_pairing"]
