"""Exception types raised across the package."""


class JobShopError(Exception):
    """Base class for all package errors."""


class InstanceFormatError(JobShopError, ValueError):
    """Instance text could not be turned into a valid instance."""


class MalformedHeader(InstanceFormatError):
    pass


class RowArity(InstanceFormatError):
    pass


class MachineIndexOutOfRange(InstanceFormatError):
    pass


class DuplicateMachineInRoute(InstanceFormatError):
    pass


class NegativeProcessingTime(InstanceFormatError):
    pass


class UnknownInstance(JobShopError, KeyError):
    def __str__(self):
        # KeyError quotes its argument; keep the plain message.
        return str(self.args[0]) if self.args else ""


class CountMismatch(JobShopError, ValueError):
    pass


class TooLarge(JobShopError):
    pass


class EmptyEligibleSet(JobShopError, ValueError):
    pass


class IndexOutOfRange(JobShopError, IndexError):
    pass


class OddPopulation(JobShopError, ValueError):
    pass


class SwarmingDisabled(JobShopError):
    pass


class MissingReference(JobShopError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class InvalidParameter(JobShopError, ValueError):
    pass


class IoError(JobShopError, OSError):
    pass
