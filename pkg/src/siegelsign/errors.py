"""Exception types shared across the package."""


class SiegelSignError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 1)."""


class NotSimilitude(SiegelSignError):
    pass


class SingularMatrix(SiegelSignError):
    pass


class NotPrime(SiegelSignError):
    pass


class ParseError(SiegelSignError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class MissingCoefficient(SiegelSignError):
    def __init__(self, p, source=None):
        self.p = p
        self.source = source
        msg = f"missing coefficient at p={p}"
        if source:
            msg += f" ({source})"
        super().__init__(msg)


class RamifiedPrime(SiegelSignError):
    pass


class DistinctnessError(SiegelSignError):
    pass


class OutOfRange(SiegelSignError):
    pass
