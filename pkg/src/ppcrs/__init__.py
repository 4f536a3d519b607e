"""Rewriting engine for the pure pattern calculus and lambda calculus with parallel-or."""
