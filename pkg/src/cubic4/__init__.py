"""Point counts, Frobenius characteristic polynomials and apolarity checks
for cubic fourfolds over binary fields."""

__version__ = "0.1.0"
