"""Compiler and deterministic simulator for a component-and-connector language.

Components declare typed ports; structural components wire subcomponents
together with connectors, behavioral components react to messages with
``on<Port>Received`` handlers. Communication is asynchronous and buffered.
"""

from archlang.diagnostics import CompileError, Diagnostic, Reporter, Severity, SourcePos
from archlang.pipeline import build_system, compile_files, compile_sources

__version__ = "0.1.0"

__all__ = [
    "CompileError", "Diagnostic", "Reporter", "Severity", "SourcePos",
    "build_system", "compile_files", "compile_sources",
]
