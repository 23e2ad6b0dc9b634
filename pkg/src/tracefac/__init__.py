"""Exact factorization of matrices over division rings into traceless pieces."""
