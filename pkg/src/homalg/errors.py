"""Exception hierarchy shared by every module."""


class HomAlgError(Exception):
    """Base class for all library errors."""


class DivisionByZero(HomAlgError, ZeroDivisionError):
    pass


class OrderMismatch(HomAlgError, ValueError):
    pass


class ParseError(HomAlgError, ValueError):
    pass


class MissingTable(HomAlgError, ValueError):
    def __init__(self, law, ingredient):
        super().__init__(f"law {law!r} needs the {ingredient} table")
        self.law = law
        self.ingredient = ingredient


class UnsupportedLaw(HomAlgError, ValueError):
    pass


class NotAntisymmetric(HomAlgError, ValueError):
    def __init__(self, residual, what="bracket"):
        super().__init__(f"{what} is not antisymmetric; first witness {residual.first_witness()}")
        self.residual = residual


class NotMultiplicative(HomAlgError, ValueError):
    def __init__(self, residual):
        super().__init__(f"map is not multiplicative; first witness {residual.first_witness()}")
        self.residual = residual


class NotComorphism(HomAlgError, ValueError):
    def __init__(self, residual):
        super().__init__(f"map is not a coalgebra morphism; first witness {residual.first_witness()}")
        self.residual = residual


class BaseNotCommutative(HomAlgError, ValueError):
    pass


class NotADeformation(HomAlgError, ValueError):
    def __init__(self, order, residual):
        super().__init__(f"deformation equation fails at order {order}; first witness {residual.first_witness()}")
        self.order = order
        self.residual = residual


class DegreeTooHigh(HomAlgError, ValueError):
    pass


class SchemaError(HomAlgError, ValueError):
    pass
