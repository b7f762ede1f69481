"""HTTP service wrapping the classification pipeline."""
