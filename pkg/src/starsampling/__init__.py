"""Star sampling with and without replacement."""
