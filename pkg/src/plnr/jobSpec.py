import logging
import os

from .common import DEFAULT_SAMPLES, DEFAULT_SEED, Convention

# Use the package logger, do not set up a separate handler here.
logger = logging.getLogger(__name__)

COMMANDS = (
    "planar-verify", "planar-search",
    "semifield-build", "semifield-check",
    "rds-build", "rds-verify", "rds-project",
    "design-build", "design-verify",
    "plane-build", "plane-verify",
    "negabent", "bent", "kantor", "spread", "fixtures",
)

_FIELDS = ("command", "fieldSpec", "fnSpec", "arity", "groupSpec", "forbidden", "elements",
           "dRange", "convention", "outputPath", "inputPath", "threads", "seed", "samples",
           "sqlIP", "sqlPort", "options")


class JobSpec:
    def __init__(self,
    command: str,
    fieldSpec: str | None = None,
    fnSpec: str | None = None,
    arity: int | None = None,
    groupSpec: str | None = None,
    forbidden: str | None = None,
    elements: str | None = None,
    dRange: tuple[int, int] | None = None,
    convention: str | None = None,
    outputPath: str | None = None,
    inputPath: str | None = None,
    threads: int | None = None,
    seed: int = DEFAULT_SEED,
    samples: int = DEFAULT_SAMPLES,
    sqlIP: str | None = None,
    sqlPort: int = 5432,
    options: dict | None = None,
    ):
        self.command: str = command
        self.fieldSpec: str | None = fieldSpec
        self.fnSpec: str | None = fnSpec
        self.arity: int | None = arity
        self.groupSpec: str | None = groupSpec
        self.forbidden: str | None = forbidden
        self.elements: str | None = elements
        self.dRange: tuple[int, int] | None = tuple(dRange) if dRange else None
        self.convention: str | None = convention
        self.outputPath: str | None = outputPath
        self.inputPath: str | None = inputPath
        self.threads: int | None = threads
        self.seed: int = seed
        self.samples: int = samples
        self.sqlIP: str | None = sqlIP
        self.sqlPort: int = sqlPort
        self.options: dict = dict(options or {})

        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command '{self.command}' (expected one of {', '.join(COMMANDS)})")

        # Normalise paths to absolute
        if self.outputPath:
            self.outputPath = os.path.abspath(self.outputPath)
        if self.inputPath:
            self.inputPath = os.path.abspath(self.inputPath)
            if not os.path.exists(self.inputPath):
                raise ValueError(f"Input file '{self.inputPath}' does not exist")

        if self.convention is not None:
            self.convention = str(Convention.fromString(self.convention))
        if self.dRange is not None and (len(self.dRange) != 2 or self.dRange[0] > self.dRange[1]):
            raise ValueError(f"Exponent range {self.dRange} must be lo..hi with lo <= hi")
        if self.threads is not None and self.threads < 1:
            raise ValueError(f"Thread count must be positive, got {self.threads}")
        if self.arity is not None and self.arity < 1:
            raise ValueError(f"Arity must be positive, got {self.arity}")
        if self.samples < 1:
            raise ValueError(f"Sample count must be positive, got {self.samples}")

        if self.sqlIP == "":
            self.sqlIP = None
        if self.sqlIP is None:
            logger.debug("No PostgreSQL host given; reports stay on disk.")

    def toDict(self) -> dict:
        out = {name: getattr(self, name) for name in _FIELDS}
        out["dRange"] = list(self.dRange) if self.dRange else None
        return out

    @classmethod
    def fromDict(cls, data: dict) -> "JobSpec":
        unknown = set(data) - set(_FIELDS)
        if unknown:
            raise ValueError(f"Unknown job fields: {', '.join(sorted(unknown))}")
        return cls(**data)

    def __eq__(self, other):
        return isinstance(other, JobSpec) and self.toDict() == other.toDict()

    def __repr__(self):
        return f"JobSpec({self.command})"
