"""Exception types shared across the package."""


class ProofPadError(Exception):
    """Base class for all package-specific errors."""


class ReadOnlyViolation(ProofPadError):
    """An edit touched text that is locked (admitted or read-only region)."""


class MalformedProofpad(ProofPadError):
    """A .proofpad file has unbalanced or nested region markers."""


class MalformedProperty(ProofPadError):
    """A defproperty form does not match the expected shape."""


class IncompleteForm(ProofPadError):
    """A form submitted for classification has unbalanced parentheses."""


class BackendError(ProofPadError):
    """Base class for ACL2 process failures."""


class SpawnFailure(BackendError):
    """The ACL2 executable could not be started."""


class StartupTimeout(BackendError):
    """No prompt appeared within the startup timeout."""


class FormTimeout(BackendError):
    """A submission did not complete within the per-form timeout.

    The handle is poisoned after this and must be restarted.
    """


class BackendCrashed(BackendError):
    """The ACL2 process exited while a submission was in flight."""


class PoisonedHandle(BackendError):
    """The handle was used after a timeout without a restart."""
