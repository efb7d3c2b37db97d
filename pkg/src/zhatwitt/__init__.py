"""Ẑ q-series of negative definite plumbings, refined WRT invariants at the
sixth root of unity, and the mod-3 Witt data extracted from them."""

__version__ = "0.1.0"
