"""
MaTIC - executable inferential-communication toolkit.

General cognitive modules, cognitive networks, causal implicatures,
non-stationary information metrics and a stratified-logic checker.
"""

__version__ = "1.0.0"
