"""Geometry of the complex line, its phase tropical limit and the isotopy between them."""
