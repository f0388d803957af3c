"""Exception types shared across the framework."""


class LockstepError(Exception):
    """Base class for all framework errors."""


class LengthMismatch(LockstepError):
    def __init__(self, expected, got):
        super().__init__(f"expected {expected} items, got {got}")
        self.expected = expected
        self.got = got


class SpaceViolation(LockstepError):
    def __init__(self, entity_id, value=None):
        super().__init__(f"value for entity {entity_id} is outside its space")
        self.entity_id = entity_id
        self.value = value


class StepAfterDone(LockstepError):
    """An environment was stepped past its episode end."""


class SamplingFailure(LockstepError):
    """Rejection sampling exhausted its attempt budget."""


class UnknownPolicy(LockstepError):
    def __init__(self, name):
        super().__init__(f"unknown policy {name!r}")
        self.name = name


class IncompleteCoverage(LockstepError):
    def __init__(self, match_index, missing):
        super().__init__(
            f"match entry {match_index} leaves entities {sorted(missing)} unassigned"
        )
        self.match_index = match_index
        self.missing = frozenset(missing)


class DuplicateEntity(LockstepError):
    def __init__(self, match_index, entity_id):
        super().__init__(
            f"match entry {match_index} assigns entity {entity_id} more than once"
        )
        self.match_index = match_index
        self.entity_id = entity_id


class TooFewPolicies(LockstepError):
    """A pairing schedule needs at least two policies."""


class ProtocolViolation(LockstepError):
    """A view was used out of order (e.g. step before reset)."""


class MissingWorkerMessage(LockstepError):
    def __init__(self, worker_id):
        super().__init__(f"no action received from worker {worker_id}")
        self.worker_id = worker_id


class MalformedAction(LockstepError):
    def __init__(self, entity_id):
        super().__init__(f"malformed action for entity {entity_id}")
        self.entity_id = entity_id


class NodeCrash(LockstepError):
    def __init__(self, node_id, diagnostic):
        super().__init__(f"node {node_id} crashed: {diagnostic}")
        self.node_id = node_id
        self.diagnostic = diagnostic


class ShapeMismatch(LockstepError):
    """Tensor shapes inconsistent with a network or space."""


class VersionMismatch(LockstepError):
    """Collective participants disagree on parameter version."""


class EmptyBuffer(LockstepError):
    """An update was requested from an empty rollout buffer."""


class InsufficientData(LockstepError):
    """Replay buffer holds fewer transitions than one batch."""


class NotGrouped(LockstepError):
    """A multi-entity learner was attached to a single-entity assignment."""


class MissingScore(LockstepError):
    def __init__(self, member):
        super().__init__(f"no score recorded for population member {member!r}")
        self.member = member


class IndexOutOfRange(LockstepError):
    """Round index outside a schedule."""


class ParseError(LockstepError):
    def __init__(self, location, reason):
        super().__init__(f"{location}: {reason}")
        self.location = location
        self.reason = reason


class ValidationError(LockstepError):
    def __init__(self, field, reason):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


class CorruptCheckpoint(LockstepError):
    """Checkpoint file failed magic/version/length checks."""


class IoError(LockstepError):
    """Filesystem failure while writing run outputs."""
