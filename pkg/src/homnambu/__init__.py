"""Exact workbench for ternary Hom-Nambu-Lie algebras induced by Hom-Lie algebras."""
