class NumericalError(ArithmeticError):
    """A numerical routine failed (SVD did not converge, NaN in iterates)."""

    pass


class TensorFileError(ValueError):
    """A tensor or mask file has a malformed header or payload."""

    pass


class ConjugateSymmetryError(ValueError):
    """An inverse DFT left an imaginary residue too large to truncate."""

    def __init__(self, residue: float, limit: float):
        self.residue = residue
        self.limit = limit
        super().__init__(
            f"Imaginary residue {residue:.3e} exceeds {limit:.3e}; "
            "input is not conjugate symmetric along the tubes."
        )
