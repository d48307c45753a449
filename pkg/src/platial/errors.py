"""Exception hierarchy shared by all modules."""


class PlatialError(ValueError):
    """Base class for every error raised by this package."""


class ValidationError(PlatialError):
    pass


class CRSMismatchError(PlatialError):
    pass


class MissingGeometryError(PlatialError):
    pass


class SchemaConflictError(PlatialError):
    """Two meaning vectors declare the same key incompatibly."""


class HierarchyError(PlatialError):
    pass


class CycleError(HierarchyError):
    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__("parent cycle: " + " -> ".join(cycle))


class DanglingParentError(HierarchyError):
    pass


class UnderivableExtentError(HierarchyError):
    pass


class RecordError(ValidationError):
    """Validation failure located at a record index and field path."""

    def __init__(self, message: str, index: int | None = None, path: str = ""):
        self.index = index
        self.path = path
        where = []
        if index is not None:
            where.append(f"record {index}")
        if path:
            where.append(path)
        super().__init__(f"{': '.join(where)}: {message}" if where else message)
