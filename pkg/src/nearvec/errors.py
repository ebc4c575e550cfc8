"""Exception types raised across the package.

Every error carries a short machine-readable ``code`` used by the command
line front-ends (``error: <code>: <detail>``).
"""


class NearVecError(Exception):
    code = "error"

    def __init__(self, detail: str = "", **data):
        super().__init__(detail)
        self.detail = detail
        self.data = data


class StructureError(NearVecError):
    """Tables are malformed (wrong shape, indices out of range)."""

    code = "malformed"


class NotPrimeError(NearVecError, ValueError):
    code = "not-prime"

    def __init__(self, n: int, divisor: int | None = None):
        if divisor is None:
            detail = f"{n} is not prime"
        else:
            detail = f"{n} = {divisor}*{n // divisor}"
        super().__init__(detail, n=n, divisor=divisor)
        self.n = n
        self.divisor = divisor


class SizeBoundError(NearVecError, ValueError):
    code = "size-bound"


class AxiomError(NearVecError):
    """A structure failed verification; ``report`` holds the full result."""

    code = "axiom-failed"

    def __init__(self, report):
        failed = [r.name for r in report.results if not r.ok]
        super().__init__(", ".join(failed), report=report)
        self.report = report


class NotFreeError(NearVecError, ValueError):
    code = "not-free"


class NotInQuasiKernelError(NearVecError, ValueError):
    code = "not-in-quasikernel"

    def __init__(self, vector, witness=None):
        if witness is None:
            detail = f"{vector} is zero"
        else:
            detail = f"{vector}: alpha={witness[0]} beta={witness[1]} has no gamma"
        super().__init__(detail, vector=vector, witness=witness)
        self.vector = vector
        self.witness = witness


class NotRegularError(NearVecError):
    code = "not-regular"

    def __init__(self, witness):
        super().__init__(f"incompatible pair {witness}", witness=witness)
        self.witness = witness


class InvariantError(NearVecError):
    code = "invariant"


class ParseError(NearVecError, ValueError):
    code = "parse"


class EmptyCorpusError(NearVecError):
    code = "empty-corpus"
