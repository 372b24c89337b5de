"""Physical layer deception: finite-blocklength link model and MM-BCD strategy optimizer."""
