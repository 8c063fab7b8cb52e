"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class TorusGitError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TorusGitError):
    """Malformed or inconsistent input data (CLI exit code 1)."""


class ComputationDeclined(TorusGitError):
    """A guard refused the computation, e.g. a support-count or step limit
    was exceeded, or a bounded search was exhausted (CLI exit code 2)."""


class InternalError(TorusGitError):
    """An internal invariant was violated; indicates a bug (CLI exit code 3)."""
