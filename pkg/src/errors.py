"""Excepciones del paquete.

Todas derivan de ``SyzFormsError`` para que la línea de comandos pueda
distinguir errores de entrada (código 2) de fallos de verificación (código 1).
"""


class SyzFormsError(Exception):
    """Error base de la librería"""

    exit_code = 2


class PolynomialParseError(SyzFormsError, ValueError):
    """Texto que no respeta la gramática de polinomios o formas"""

    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} (posición {position})"
        super().__init__(message)


class UnknownVariableError(PolynomialParseError):
    pass


class NonIntegerExponentError(PolynomialParseError):
    pass


class RingMismatchError(SyzFormsError, ValueError):
    pass


class NotHomogeneousError(SyzFormsError, ValueError):
    pass


class ShapeMismatchError(SyzFormsError, ValueError):
    pass


class NotAComplexError(SyzFormsError, ValueError):
    """La composición de dos mapas consecutivos no es cero"""


class NotInImageError(SyzFormsError, ValueError):
    pass


class NonMinimalResolutionError(SyzFormsError, ValueError):
    pass


class MixedDegreeError(SyzFormsError, ValueError):
    """Vector de Tor con soporte en más de un grado"""


class ShortcutNotApplicableError(SyzFormsError, ValueError):
    pass


class UndefinedDeltaError(SyzFormsError, ValueError):
    """δ no está definido sobre formas de grado total cero"""


class NotDescendingError(SyzFormsError, ValueError):
    """La forma no satisface ι_rad ω = 0"""


class NotLDSError(SyzFormsError, ValueError):
    pass


class NotADistributionError(SyzFormsError, ValueError):
    """Una 0-forma no define distribución ni complejo asociado"""


class EmptyFormSpaceError(SyzFormsError, ValueError):
    pass


class UnsupportedDimensionError(SyzFormsError, ValueError):
    pass


class RetryBudgetExhaustedError(SyzFormsError, RuntimeError):
    exit_code = 1


class CertificateError(SyzFormsError, ArithmeticError):
    """Un certificado exacto (integralidad, igualdad de ideales...) falló"""

    exit_code = 1
