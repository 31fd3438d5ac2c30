"""Proficiency of finite groups: presentations, coset enumeration, modular
representations and second cohomology over finite fields."""

__version__ = "0.1.0"
