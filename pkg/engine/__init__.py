"""Travelling-wave engine for doubly degenerate reaction-diffusion-convection equations."""
