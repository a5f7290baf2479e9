# app/errors.py
"""Exception hierarchy shared by every layer of regdefect."""


class RegDefectError(Exception):
    """Root of all library errors."""


class ConfigurationError(RegDefectError):
    pass


# --- algebra ---

class FieldMismatch(RegDefectError):
    pass


class VariableMismatch(RegDefectError):
    pass


class NonzeroConstantTerm(RegDefectError):
    def __init__(self, poly, where: str = ""):
        self.poly = poly
        suffix = f" ({where})" if where else ""
        super().__init__(f"polynomial {poly} has a nonzero constant term{suffix}")


class ArityMismatch(RegDefectError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"expected {expected} images, got {got}")


class NonlocalImage(RegDefectError):
    def __init__(self, index: int, poly):
        self.index = index
        self.poly = poly
        super().__init__(f"image {index} ({poly}) does not lie in the maximal ideal")


class NotEliminable(RegDefectError):
    def __init__(self, var: str):
        self.var = var
        super().__init__(f"variable {var} has zero linear coefficient and cannot be eliminated")


# --- presentations ---

class DuplicateVariable(RegDefectError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"variable {name} is declared twice")


class NotWellDefinedAtDegree(RegDefectError):
    def __init__(self, degree: int, relation, image):
        self.degree = degree
        self.relation = relation
        self.image = image
        super().__init__(
            f"relation {relation} maps to {image}, which is not in the target relations "
            f"modulo degree {degree}"
        )


class CompositionMismatch(RegDefectError):
    pass


class NonCommutative(RegDefectError):
    def __init__(self, degree: int, path_a, path_b):
        self.degree = degree
        self.path_a = path_a
        self.path_b = path_b
        super().__init__(
            f"paths {' -> '.join(path_a)} and {' -> '.join(path_b)} disagree modulo degree {degree}"
        )


# --- invariants ---

class InternalInconsistency(RegDefectError):
    def __init__(self, what: str, left, right):
        self.what = what
        self.left = left
        self.right = right
        super().__init__(f"{what}: {left} != {right}")


# --- verify ---

class GenerationExhausted(RegDefectError):
    def __init__(self, shape: str, retries: int):
        self.shape = shape
        self.retries = retries
        super().__init__(f"could not generate a valid {shape} instance in {retries} attempts")


class ShapeMismatch(RegDefectError):
    def __init__(self, statement: str, expected: str, got: str):
        super().__init__(f"statement {statement} needs a {expected} instance, got {got}")


# --- frontend ---

class SessionError(RegDefectError):
    def __init__(self, message: str, span=None):
        self.message = message
        self.span = span
        super().__init__(message)

    def diagnostic(self, filename: str = "<session>") -> str:
        if self.span is None:
            return f"{filename}: {self.message}"
        return f"{filename}:{self.span.line}:{self.span.column}: {self.message}"


class SessionSyntaxError(SessionError):
    def __init__(self, message: str, span=None, expected=()):
        self.expected = tuple(sorted(set(expected)))
        if self.expected:
            message = f"{message}; expected one of: {', '.join(self.expected)}"
        super().__init__(message, span)


class UndeclaredName(SessionError):
    def __init__(self, name: str, span=None, kind: str = "name"):
        self.name = name
        super().__init__(f"undeclared {kind} '{name}'", span)


class Redeclaration(SessionError):
    def __init__(self, name: str, span=None):
        self.name = name
        super().__init__(f"'{name}' is already declared", span)
