"""Blowups of Salvetti complexes, untwisted RAAG automorphisms and realization of finite subgroups."""

__version__ = "0.1.0"
