"""Matroids as relations between subset lattices, with strict, lax and weighted composition."""
