"""Setup-file parser, rendering and command line."""

from .dsl import DslError, SetupDocument, load_setup, parse_document, parse_setup, render_setup
from .render import render

__all__ = ["DslError", "SetupDocument", "load_setup", "parse_document", "parse_setup",
           "render_setup", "render"]
