"""mixsim: mixed-initiative variable-autonomy simulation and experiments."""

__version__ = "0.1.0"
