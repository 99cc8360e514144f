"""Exception hierarchy shared by every module."""


class GroupWLError(Exception):
    """Base class for all errors raised by the package."""


class BadSyntax(GroupWLError):
    pass


class NotLatinSquare(GroupWLError):
    pass


class NoIdentity(GroupWLError):
    pass


class NotAssociative(GroupWLError):
    def __init__(self, witness):
        a, b, c = witness
        super().__init__(f"(a*b)*c != a*(b*c) for (a, b, c) = ({a}, {b}, {c})")
        self.witness = witness


class SizeLimitExceeded(GroupWLError):
    pass


class NotSemisimple(GroupWLError):
    pass


class NotInSocle(GroupWLError):
    pass


class FNotIsomorphism(GroupWLError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class TooLarge(GroupWLError):
    pass


class OrdersDiffer(GroupWLError):
    pass


class PreconditionViolated(GroupWLError):
    pass


class AnchorMissing(GroupWLError):
    pass


class NoWitness(GroupWLError):
    pass


class IsomorphicInputs(GroupWLError):
    pass


class BudgetExceeded(GroupWLError):
    pass
